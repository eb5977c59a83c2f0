// Wire types mirroring the game service's JSON bodies, plus the view model.

export type QuantifierName = "exists" | "forall";

export interface VariableDoc {
  name: string;
  quantifier: QuantifierName;
  domain: number[];
}

export interface ProblemDoc {
  variables: VariableDoc[];
  constraints: unknown[];
}

export interface CompileResponse {
  base_id: string;
  winning: boolean;
  stats: Record<string, number>;
}

export interface PrefixMove {
  rank: number;
  name: string;
  value: number;
}

export interface TurnInfo {
  rank: number;
  name: string;
  quantifier: QuantifierName;
  domain: number[];
  human: boolean;
}

export type SessionStatus = "ONGOING" | "WON" | "LOST" | "DRAWN_OFF_BASE";

export interface SessionDoc {
  id: string;
  base_id: string;
  problem_id: string;
  human_role: QuantifierName;
  status: SessionStatus;
  prefix: PrefixMove[];
  turn: TurnInfo | null;
}

// Badge for one candidate value on the human's turn.  "winnable" and
// "losing" come straight from the winning-moves response; "off-base" marks
// a position where the server reported no safe value at all.
export type Badge = "winnable" | "losing" | "off-base";

export interface ViewModel {
  serviceUrl: string;
  problem: ProblemDoc | null;
  problemId: string | null;
  baseId: string | null;
  winning: boolean | null;
  stats: Record<string, number> | null;
  session: SessionDoc | null;
  badges: Map<number, Badge>;
  whatIf: Map<number, boolean>;
  banner: SessionStatus | null;
  error: string | null;
  busy: boolean;
}

export function emptyViewModel(serviceUrl: string): ViewModel {
  return {
    serviceUrl,
    problem: null,
    problemId: null,
    baseId: null,
    winning: null,
    stats: null,
    session: null,
    badges: new Map(),
    whatIf: new Map(),
    banner: null,
    error: null,
    busy: false,
  };
}
