/**
 * Dashboard controller: queues server interactions, guards revision
 * monotonicity, and maps payloads to view rows.
 *
 * The dashboard holds no inference or state-machine logic: every number
 * handed to the view is a service payload field (probabilities and
 * deltas formatted to 3 decimal places, nothing recomputed).
 */

import { ApiClient, ApiError } from "./api.js";
import { barFraction, formatDelta, formatProbability } from "./format.js";
import type {
  ClassInfo,
  EventKind,
  EvidenceState,
  RecommendationEntry,
  ReportPayload,
  SafetyRequirementInfo,
  ToggleState,
  TraceRecord,
} from "./types.js";

export const VIOLATED_STATES = ["S1", "S2", "S3"] as const;

/** Fixed severity ranking mirroring the server's documented order. */
export const SEVERITY_RANK: Record<string, number> = { S2: 1, S1: 2, S3: 3 };

export interface ClassRow {
  id: string;
  name: string;
  state: ToggleState;
  pending: boolean;
}

export interface GaugeRow {
  state: string;
  /** Probability text, verbatim payload value at 3 decimal places. */
  probability: string;
  fraction: number;
  severityRank: number;
  affected: string[];
}

export interface WhatIfStateRow {
  state: string;
  baseline: string;
  delta: string;
  baselineFraction: number;
  alternativeFraction: number;
}

export interface WhatIfViewModel {
  rows: WhatIfStateRow[];
  overlay: Record<string, ToggleState>;
}

export interface DashboardView {
  renderClasses(rows: ClassRow[]): void;
  renderGauges(rows: GaugeRow[], note: string): void;
  renderRecommendations(entries: RecommendationEntry[]): void;
  renderSafetyRequirements(requirements: SafetyRequirementInfo[]): void;
  setMachineState(state: string): void;
  renderTrace(records: TraceRecord[]): void;
  renderWhatIf(model: WhatIfViewModel | null): void;
  showBanner(message: string): void;
  showEventNotice(message: string): void;
  clearEventNotice(): void;
}

export class DashboardController {
  private classes: ClassInfo[] = [];
  private evidence: Record<string, EvidenceState> = {};
  private lastReport: ReportPayload | null = null;
  private displayedRevision = -1;
  private pendingClass: string | null = null;
  private chain: Promise<void> = Promise.resolve();

  constructor(
    private readonly api: ApiClient,
    private readonly view: DashboardView,
  ) {}

  /** Serialize all server interactions; user actions queue, never interleave. */
  private enqueue(task: () => Promise<void>): Promise<void> {
    const next = this.chain.then(task);
    this.chain = next.catch(() => undefined);
    return next;
  }

  private acceptRevision(revision: number): boolean {
    if (revision < this.displayedRevision) {
      return false; // stale payload; never render backwards
    }
    this.displayedRevision = revision;
    return true;
  }

  async init(): Promise<void> {
    return this.enqueue(async () => {
      try {
        const model = await this.api.getModel();
        this.classes = model.classes;
        this.evidence = model.evidence;
        this.acceptRevision(model.revision);
        this.view.renderSafetyRequirements(model.safety_requirements);
        this.renderClasses();
        const report = await this.api.getReport();
        this.renderReport(report);
        const trace = await this.api.getTrace();
        if (this.acceptRevision(trace.revision)) {
          this.view.renderTrace(trace.trace);
        }
      } catch (error) {
        this.view.showBanner(describe(error));
      }
    });
  }

  toggleClass(classId: string, state: ToggleState): Promise<void> {
    return this.enqueue(async () => {
      this.pendingClass = classId;
      this.renderClasses(optimistic(this.evidence, classId, state));
      try {
        // Exactly one PUT, then exactly one report GET.
        const acknowledged = await this.api.putEvidence(classId, state);
        if (this.acceptRevision(acknowledged.revision)) {
          this.evidence = acknowledged.evidence;
        }
        const report = await this.api.getReport();
        this.renderReport(report);
      } catch (error) {
        this.view.showBanner(describe(error)); // toggle reverts below
      } finally {
        this.pendingClass = null;
        this.renderClasses();
      }
    });
  }

  runWhatIf(overlay: Record<string, ToggleState>): Promise<void> {
    return this.enqueue(async () => {
      try {
        const diff = await this.api.postWhatIf(overlay);
        const baseline = this.lastReport ? this.lastReport.state_probabilities : {};
        const rows = VIOLATED_STATES.map((state) => {
          const base = baseline[state] ?? 0;
          const delta = diff.state_deltas[state] ?? 0;
          return {
            state,
            baseline: formatProbability(base),
            delta: formatDelta(delta),
            baselineFraction: barFraction(base),
            alternativeFraction: barFraction(base + delta),
          };
        });
        this.view.renderWhatIf({ rows, overlay });
      } catch (error) {
        this.view.showBanner(describe(error));
      }
    });
  }

  closeWhatIf(): void {
    this.view.renderWhatIf(null); // purely client-side; nothing server-side changes
  }

  recordEvent(kind: EventKind, requirementId: string): Promise<void> {
    return this.enqueue(async () => {
      this.view.clearEventNotice();
      try {
        const outcome = await this.api.postEvent(kind, requirementId);
        if (this.acceptRevision(outcome.revision)) {
          this.view.setMachineState(outcome.state);
        }
        const trace = await this.api.getTrace();
        if (this.acceptRevision(trace.revision)) {
          this.view.renderTrace(trace.trace);
        }
      } catch (error) {
        if (error instanceof ApiError && error.status === 409) {
          this.view.showEventNotice(error.detail); // inline, state untouched
        } else {
          this.view.showBanner(describe(error));
        }
      }
    });
  }

  refresh(): Promise<void> {
    return this.enqueue(async () => {
      try {
        const report = await this.api.getReport();
        this.renderReport(report);
        const trace = await this.api.getTrace();
        if (this.acceptRevision(trace.revision)) {
          this.view.renderTrace(trace.trace);
        }
      } catch (error) {
        this.view.showBanner(describe(error));
      }
    });
  }

  private renderClasses(evidence?: Record<string, ToggleState>): void {
    const shown = evidence ?? this.evidence;
    this.view.renderClasses(
      this.classes.map((cls) => ({
        id: cls.id,
        name: cls.name,
        state: shown[cls.id] ?? "unobserved",
        pending: this.pendingClass === cls.id,
      })),
    );
  }

  private renderReport(report: ReportPayload): void {
    if (!this.acceptRevision(report.revision)) {
      return;
    }
    this.lastReport = report;
    const rows = VIOLATED_STATES.map((state) => {
      const probability = report.state_probabilities[state] ?? 0;
      return {
        state,
        probability: formatProbability(probability),
        fraction: barFraction(probability),
        severityRank: SEVERITY_RANK[state],
        affected: report.affected_safety_requirements[state] ?? [],
      };
    });
    this.view.renderGauges(rows, report.note);
    this.view.renderRecommendations(report.recommendation);
    this.view.setMachineState(report.current_machine_state);
  }
}

function optimistic(
  evidence: Record<string, EvidenceState>,
  classId: string,
  state: ToggleState,
): Record<string, ToggleState> {
  const shown: Record<string, ToggleState> = { ...evidence };
  if (state === "unobserved") {
    delete shown[classId];
  } else {
    shown[classId] = state;
  }
  return shown;
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return error.message;
  }
  return error instanceof Error ? error.message : String(error);
}
