/** Payload shapes of the co-assurance service API, mirrored field by field. */

export type EvidenceState = "violated" | "not_violated";
export type ToggleState = EvidenceState | "unobserved";
export type EventKind = "Violation" | "Resolution";

export interface ClassInfo {
  id: string;
  name: string;
}

export interface SafetyRequirementInfo {
  id: string;
  title: string;
  req_type: string;
}

export interface GroupEntry {
  safety: string[];
  security: string[];
}

export interface ModelPayload {
  revision: number;
  nodes: string[];
  classes: ClassInfo[];
  groups: Record<string, GroupEntry>;
  safety_requirements: SafetyRequirementInfo[];
  evidence: Record<string, EvidenceState>;
}

export interface RecommendationEntry {
  state: string;
  probability: number;
  req_types: string[];
  violated_classes: string[];
}

export interface ReportPayload {
  revision: number;
  state_probabilities: Record<string, number>;
  current_machine_state: string;
  violated_classes: string[];
  affected_safety_requirements: Record<string, string[]>;
  recommendation: RecommendationEntry[];
  note: string;
}

export interface EvidencePayload {
  revision: number;
  evidence: Record<string, EvidenceState>;
}

export interface EventPayload {
  revision: number;
  state: string;
  outstanding: string[];
}

export interface TraceRecord {
  seq: number;
  kind: string;
  requirement: string;
  state: string;
}

export interface TracePayload {
  revision: number;
  state: string;
  trace: TraceRecord[];
}

export interface WhatIfPayload {
  revision: number;
  baseline: Record<string, EvidenceState>;
  alternative: Record<string, EvidenceState>;
  state_deltas: Record<string, number>;
  node_deltas: Record<string, number>;
}
