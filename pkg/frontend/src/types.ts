/** Wire types of the cbtracker /v1 JSON API. */

export type TaskType = 'cost' | 'benefit' | 'co-creation-activity';
export type ActorRole = 'user' | 'focal' | 'partner';
export type NodeKind = 'task' | 'startEvent' | 'endEvent';

export interface AnnotationWire {
  actor: string;
  type: TaskType;
  goal: string;
  kpi: string;
  current: string | null;
  target: string | null;
}

export interface NodeWire {
  id: string;
  kind: NodeKind;
  name: string;
  displayId: string | null;
  annotation: AnnotationWire | null;
}

export interface FlowWire {
  id: string;
  source: string;
  target: string;
}

export interface PoolWire {
  id: string;
  name: string;
  role: ActorRole | null;
  nodes: NodeWire[];
  sequenceFlows: FlowWire[];
}

export interface ModelWire {
  id: string;
  pools: PoolWire[];
  messageFlows: FlowWire[];
}

export interface ActivityWire {
  name: string;
  costs: string[];
  benefits: string[];
}

export interface ValuePropositionWire {
  name: string;
  activities: ActivityWire[];
}

export interface RadarActorWire {
  name: string;
  role: ActorRole;
  valuePropositions: ValuePropositionWire[];
  actorCosts?: string[];
  actorBenefits?: string[];
}

export interface RadarWire {
  bmrVersion: string;
  solution: string;
  actors: RadarActorWire[];
}

export interface LineItemWire {
  taskDisplayId: string;
  taskName: string;
  type: TaskType;
  goal: string;
  kpi: string;
  current: string | null;
  target: string | null;
}

export interface OverviewWire {
  actor: string;
  currentCosts: string;
  currentBenefits: string;
  currentNet: string;
  targetCosts: string;
  targetBenefits: string;
  targetNet: string;
  lineItems: LineItemWire[];
}

export interface KpiValueWire {
  task: string;
  kpi: string;
  current: string | null;
  target: string | null;
}

export interface EvaluationWire {
  overviews: OverviewWire[];
  summary: {
    focalActor: string | null;
    focalCurrentNet: string | null;
    focalTargetNet: string | null;
  };
  values: KpiValueWire[];
  diagnostics: string[];
}

export interface OverrideWire {
  taskDisplayId: string;
  kpiName: string;
  current?: string;
  target?: string;
}

export interface ApiErrorWire {
  code: string;
  message: string;
  location: string | null;
}
