// Shapes mirrored from the workbench HTTP API (docs/api.md in the repo root).

export type Verdict = "TRUE" | "FALSE" | "UNKNOWN";

export type UnknownReason =
  | "timeout"
  | "unbounded-domain"
  | "unsupported-construct"
  | "unknown-identifier";

export type PoStatus =
  | "UNPROVED"
  | "PROVED_F1"
  | "PROVED_F2"
  | "PROVED_F3"
  | "PROVED_BEVAL";

export type PoGroup = "common" | "wd";

export interface ComponentSummary {
  name: string;
  module_path: string;
  po_count: number;
  unproved_count: number;
}

export interface PoRow {
  name: string;
  group: PoGroup;
  status: PoStatus;
  provenance: string | null;
  hypotheses: string[];
  goal: string;
}

export interface EchoedParams {
  minint: number;
  maxint: number;
  timeout_ms: number;
  init: boolean;
  kodkod: boolean;
  smt: boolean;
  clpfd: boolean;
  flag_string: string;
}

export interface RuleOutcome {
  added: boolean;
  theory_name?: string;
  file?: string;
  message?: string;
}

export interface EvalResponse {
  verdict: Verdict;
  reason: UnknownReason | null;
  elapsed_ms: number;
  counterexample: Record<string, string> | null;
  params: EchoedParams;
  rule: RuleOutcome | null;
}

export interface EvalRequest {
  goal: string;
  hypotheses?: string[];
  params?: Partial<ParamsJson>;
  component?: string;
  po_name?: string;
  add_rule?: boolean;
  wd?: boolean;
}

// The request-side params object: any subset, server fills defaults.
export interface ParamsJson {
  minint: number;
  maxint: number;
  timeout_ms: number;
  init: boolean;
  kodkod: boolean;
  smt: boolean;
  clpfd: boolean;
}

export interface GroupCounts {
  total: number;
  f1: number;
  f123: number;
  beval: number;
  gain: number;
}

export interface PipelineDetail {
  name: string;
  group: PoGroup;
  outcome: "proved-f1" | "proved-f2" | "proved-f3" | "proved-beval" | "open";
  note: string;
}

export interface PipelineReport {
  component: string;
  groups: { common: GroupCounts; wd: GroupCounts };
  details: PipelineDetail[];
  table: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  where?: string;
  line?: number;
  col?: number;
}
