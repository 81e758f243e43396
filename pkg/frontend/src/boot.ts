// Browser entry point; kept separate so modules stay side-effect free.
import { bootstrap } from './main.js';

const start = (): void => {
  window.cbtrackerApp = bootstrap(document);
};

if (document.readyState === 'loading') {
  window.addEventListener('DOMContentLoaded', start);
} else {
  start();
}
