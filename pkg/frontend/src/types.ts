/** JSON payload shapes of the session service (schema_version "1"). */

export type JudgmentValue = "eq" | "gt" | "lt";

export interface NodeRef {
  id: string;
  label: string;
}

export interface ContextInfo {
  id: string;
  label: string;
  members: NodeRef[];
  required: number;
  missing: [string, string][];
  complete: boolean;
  /** present once the context is complete */
  cr?: number;
  gate?: boolean;
}

export interface SessionInfo {
  schema_version: string;
  id: string;
  name: string;
  theta: number;
  revision: number;
  complete: boolean;
  criteria: NodeRef[];
  alternatives: NodeRef[];
  contexts: ContextInfo[];
}

export interface SessionSummary {
  id: string;
  name: string;
  revision: number;
  complete: boolean;
}

export interface PriorityPayload {
  context: string;
  weights: Record<string, number>;
  lambda_max: number;
  ci: number;
  cr: number;
  gate: boolean;
}

export interface JudgmentResponse {
  revision: number;
  context: ContextInfo;
  priority?: PriorityPayload;
}

export interface GlobalWeight {
  id: string;
  label: string;
  level: string;
  weight: number;
}

export interface AlternativeScore {
  id: string;
  label: string;
  score: number;
}

export interface ContextConsistency {
  id: string;
  weights: Record<string, number>;
  lambda_max: number;
  ci: number;
  cr: number;
  gate: boolean;
}

export interface ResultsPayload {
  schema_version: string;
  revision: number;
  theta: number;
  method: string;
  overall_inconsistency: number;
  global_weights: GlobalWeight[];
  alternative_scores: AlternativeScore[];
  ranking: string[];
  contexts: ContextConsistency[];
}

export interface ScoreLine {
  alternative: string;
  p: number;
  rest: number;
}

export interface CrossoverMark {
  a: string;
  b: string;
  t: number;
  degenerate: boolean;
}

export interface RankSegment {
  lo: number;
  hi: number;
  ranking: string[];
}

export interface SensitivityPayload {
  schema_version: string;
  revision: number;
  criterion: string;
  base_weight: number;
  lines: ScoreLine[];
  crossovers: CrossoverMark[];
  rank_segments: RankSegment[];
  base_ranking: string[];
  ranking_at_zero: string[];
  standing_ties: [string, string][];
  reversal_at_zero: boolean;
  rank_one_changes: boolean;
}

export interface SaveResponse {
  revision: number;
  path: string | null;
  document: string;
}

export interface ServiceErrorBody {
  code: string;
  message: string;
  locus: string | null;
  missing?: Record<string, [string, string][]>;
}
