/** Test doubles: an in-memory service behind fetch, and a recording view. */

import type {
  ClassRow,
  DashboardView,
  GaugeRow,
  WhatIfViewModel,
} from "../src/controller.js";
import type {
  EvidenceState,
  RecommendationEntry,
  ReportPayload,
  SafetyRequirementInfo,
  TraceRecord,
} from "../src/types.js";

export interface RecordedCall {
  method: string;
  path: string;
  body?: unknown;
}

const CLASSES = [
  { id: "FPT_SSP", name: "State synchrony protocol" },
  { id: "FPT_STM", name: "Time stamps" },
  { id: "FRU_PRS", name: "Priority of service" },
  { id: "FRU_RSA", name: "Resource allocation" },
];

const AFFECTED_S1 = ["A2.13a", "A2.13b", "A2.13c", "A2.14", "A2.15", "A2.6"];

export class FakeServer {
  calls: RecordedCall[] = [];
  revision = 0;
  evidence: Record<string, EvidenceState> = {};
  machineState = "S0";
  trace: TraceRecord[] = [];
  /** S1 probability served in the next report. */
  s1 = 0.168210399375;
  failNextPut = false;
  conflictNextEvent = false;
  nextReportOverride: ReportPayload | null = null;

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const path = input;
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    this.calls.push({ method, path, body });

    if (method === "GET" && path === "/api/model") {
      return json({
        revision: this.revision,
        nodes: [],
        classes: CLASSES,
        groups: { S1: { safety: AFFECTED_S1, security: CLASSES.map((c) => c.id) } },
        safety_requirements: AFFECTED_S1.map((id) => ({
          id, title: `req ${id}`, req_type: "Timing",
        })) satisfies SafetyRequirementInfo[],
        evidence: this.evidence,
      });
    }
    if (method === "PUT" && path.startsWith("/api/evidence/")) {
      if (this.failNextPut) {
        this.failNextPut = false;
        return json({ detail: "boom" }, 500);
      }
      const classId = decodeURIComponent(path.split("/").pop()!);
      if (!CLASSES.some((c) => c.id === classId)) {
        return json({ detail: `unknown security class '${classId}'` }, 404);
      }
      if (body.state === "unobserved") {
        delete this.evidence[classId];
      } else {
        this.evidence[classId] = body.state;
      }
      this.revision += 1;
      return json({ revision: this.revision, evidence: { ...this.evidence } });
    }
    if (method === "GET" && path === "/api/report") {
      if (this.nextReportOverride) {
        const payload = this.nextReportOverride;
        this.nextReportOverride = null;
        return json(payload);
      }
      return json(this.report());
    }
    if (method === "POST" && path === "/api/event") {
      if (this.conflictNextEvent) {
        this.conflictNextEvent = false;
        return json({ detail: `requirement '${body.requirement_id}' is not outstanding` }, 409);
      }
      this.revision += 1;
      this.machineState = body.kind === "Violation" ? "S1" : "S0";
      this.trace.push({
        seq: this.trace.length,
        kind: body.kind,
        requirement: body.requirement_id,
        state: this.machineState,
      });
      return json({ revision: this.revision, state: this.machineState, outstanding: [] });
    }
    if (method === "POST" && path === "/api/whatif") {
      return json({
        revision: this.revision,
        baseline: { ...this.evidence },
        alternative: { ...this.evidence, ...body.overlay },
        state_deltas: { S1: 0.744691213125, S2: 0.0, S3: 0.0 },
        node_deltas: { "S1-indicator": 0.744691213125 },
      });
    }
    if (method === "GET" && path === "/api/trace") {
      return json({
        revision: this.revision,
        state: this.machineState,
        trace: [...this.trace],
      });
    }
    return json({ detail: `no route ${method} ${path}` }, 404);
  };

  report(): ReportPayload {
    return {
      revision: this.revision,
      state_probabilities: { S1: this.s1, S2: 0.0, S3: 0.0 },
      current_machine_state: this.machineState,
      violated_classes: Object.keys(this.evidence)
        .filter((k) => this.evidence[k] === "violated")
        .sort(),
      affected_safety_requirements: { S1: AFFECTED_S1, S2: [], S3: [] },
      recommendation: [],
      note: "note text",
    };
  }

  callLog(): string[] {
    return this.calls.map((c) => `${c.method} ${c.path}`);
  }
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export class RecordingView implements DashboardView {
  classRenders: ClassRow[][] = [];
  gaugeRenders: GaugeRow[][] = [];
  recommendations: RecommendationEntry[][] = [];
  safetyRequirements: SafetyRequirementInfo[] = [];
  machineStates: string[] = [];
  traces: TraceRecord[][] = [];
  whatIfs: (WhatIfViewModel | null)[] = [];
  banners: string[] = [];
  eventNotices: string[] = [];
  clearedNotices = 0;

  renderClasses(rows: ClassRow[]): void {
    this.classRenders.push(rows);
  }
  renderGauges(rows: GaugeRow[]): void {
    this.gaugeRenders.push(rows);
  }
  renderRecommendations(entries: RecommendationEntry[]): void {
    this.recommendations.push(entries);
  }
  renderSafetyRequirements(requirements: SafetyRequirementInfo[]): void {
    this.safetyRequirements = requirements;
  }
  setMachineState(state: string): void {
    this.machineStates.push(state);
  }
  renderTrace(records: TraceRecord[]): void {
    this.traces.push(records);
  }
  renderWhatIf(model: WhatIfViewModel | null): void {
    this.whatIfs.push(model);
  }
  showBanner(message: string): void {
    this.banners.push(message);
  }
  showEventNotice(message: string): void {
    this.eventNotices.push(message);
  }
  clearEventNotice(): void {
    this.clearedNotices += 1;
  }

  lastClasses(): ClassRow[] {
    return this.classRenders[this.classRenders.length - 1];
  }
  lastGauges(): GaugeRow[] {
    return this.gaugeRenders[this.gaugeRenders.length - 1];
  }
}
