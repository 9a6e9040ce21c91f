/** DOM rendering for the dashboard; all data arrives pre-formatted. */

import type {
  ClassRow,
  DashboardView,
  GaugeRow,
  WhatIfViewModel,
} from "./controller.js";
import type {
  EventKind,
  RecommendationEntry,
  SafetyRequirementInfo,
  ToggleState,
  TraceRecord,
} from "./types.js";

const TOGGLE_CHOICES: { value: ToggleState; label: string }[] = [
  { value: "violated", label: "Violated" },
  { value: "not_violated", label: "Not violated" },
  { value: "unobserved", label: "Unobserved" },
];

export interface ViewCallbacks {
  onToggle(classId: string, state: ToggleState): void;
  onWhatIf(overlay: Record<string, ToggleState>): void;
  onCloseWhatIf(): void;
  onEvent(kind: EventKind, requirementId: string): void;
  onRefresh(): void;
}

export class DomView implements DashboardView {
  private readonly root: Document;
  private callbacks: ViewCallbacks | null = null;
  private classIds: string[] = [];

  constructor(root: Document) {
    this.root = root;
    this.element("refresh").addEventListener("click", () => {
      this.callbacks?.onRefresh();
    });
    this.element("banner-dismiss").addEventListener("click", () => {
      this.element("banner").hidden = true;
    });
    this.element("whatif-run").addEventListener("click", () => {
      this.callbacks?.onWhatIf(this.collectOverlay());
    });
    this.element("whatif-close").addEventListener("click", () => {
      this.callbacks?.onCloseWhatIf();
    });
    this.element("event-submit").addEventListener("click", () => {
      const kind = (this.element("event-kind") as HTMLSelectElement).value as EventKind;
      const requirement = (this.element("event-requirement") as HTMLSelectElement).value;
      if (requirement) {
        this.callbacks?.onEvent(kind, requirement);
      }
    });
  }

  bind(callbacks: ViewCallbacks): void {
    this.callbacks = callbacks;
  }

  private element(id: string): HTMLElement {
    const found = this.root.getElementById(id);
    if (!found) {
      throw new Error(`missing dashboard element #${id}`);
    }
    return found;
  }

  renderClasses(rows: ClassRow[]): void {
    this.classIds = rows.map((row) => row.id);
    const container = this.element("evidence-panel");
    container.replaceChildren();
    for (const row of rows) {
      const item = this.root.createElement("div");
      item.className = "class-row" + (row.pending ? " pending" : "");
      const label = this.root.createElement("span");
      label.className = "class-label";
      label.textContent = `${row.id} — ${row.name}`;
      item.appendChild(label);
      const group = this.root.createElement("span");
      group.className = "toggle-group";
      for (const choice of TOGGLE_CHOICES) {
        const button = this.root.createElement("button");
        button.textContent = choice.label;
        button.className = row.state === choice.value ? "toggle active" : "toggle";
        button.disabled = row.pending;
        button.addEventListener("click", () => {
          if (row.state !== choice.value) {
            this.callbacks?.onToggle(row.id, choice.value);
          }
        });
        group.appendChild(button);
      }
      item.appendChild(group);
      container.appendChild(item);
    }
    this.renderWhatIfForm();
  }

  private renderWhatIfForm(): void {
    const container = this.element("whatif-form");
    container.replaceChildren();
    for (const classId of this.classIds) {
      const row = this.root.createElement("label");
      row.className = "whatif-row";
      row.textContent = classId + " ";
      const select = this.root.createElement("select");
      select.dataset.classId = classId;
      for (const value of ["keep", "violated", "not_violated", "unobserved"]) {
        const option = this.root.createElement("option");
        option.value = value;
        option.textContent = value.replace("_", " ");
        select.appendChild(option);
      }
      row.appendChild(select);
      container.appendChild(row);
    }
  }

  private collectOverlay(): Record<string, ToggleState> {
    const overlay: Record<string, ToggleState> = {};
    const selects = this.element("whatif-form").querySelectorAll("select");
    selects.forEach((select) => {
      const classId = (select as HTMLSelectElement).dataset.classId;
      const value = (select as HTMLSelectElement).value;
      if (classId && value !== "keep") {
        overlay[classId] = value as ToggleState;
      }
    });
    return overlay;
  }

  renderGauges(rows: GaugeRow[], note: string): void {
    const container = this.element("gauges");
    container.replaceChildren();
    for (const row of rows) {
      const gauge = this.root.createElement("div");
      gauge.className = "gauge";
      const header = this.root.createElement("div");
      header.className = "gauge-header";
      header.textContent = `${row.state} (severity ${row.severityRank})`;
      const value = this.root.createElement("span");
      value.className = "gauge-value";
      value.dataset.state = row.state;
      value.textContent = row.probability;
      header.appendChild(value);
      gauge.appendChild(header);

      const track = this.root.createElement("div");
      track.className = "bar-track";
      const bar = this.root.createElement("div");
      bar.className = "bar-fill";
      bar.style.width = `${row.fraction * 100}%`;
      track.appendChild(bar);
      gauge.appendChild(track);

      const affected = this.root.createElement("div");
      affected.className = "affected";
      for (const rid of row.affected) {
        const chip = this.root.createElement("button");
        chip.className = "chip";
        chip.textContent = rid;
        chip.title = "select for a machine event";
        chip.addEventListener("click", () => {
          (this.element("event-requirement") as HTMLSelectElement).value = rid;
        });
        affected.appendChild(chip);
      }
      gauge.appendChild(affected);
      container.appendChild(gauge);
    }
    this.element("note").textContent = note;
  }

  renderRecommendations(entries: RecommendationEntry[]): void {
    const list = this.element("recommendations");
    list.replaceChildren();
    if (entries.length === 0) {
      const item = this.root.createElement("li");
      item.textContent = "Nothing to address.";
      list.appendChild(item);
      return;
    }
    for (const entry of entries) {
      const item = this.root.createElement("li");
      const classes = entry.violated_classes.length
        ? entry.violated_classes.join(", ")
        : "no violated classes";
      item.textContent =
        `${entry.state}: p=${entry.probability.toFixed(3)} via ` +
        `${entry.req_types.join(", ")} (driven by ${classes})`;
      list.appendChild(item);
    }
  }

  renderSafetyRequirements(requirements: SafetyRequirementInfo[]): void {
    const select = this.element("event-requirement") as HTMLSelectElement;
    select.replaceChildren();
    for (const requirement of requirements) {
      const option = this.root.createElement("option");
      option.value = requirement.id;
      option.textContent = `${requirement.id} — ${requirement.title}`;
      select.appendChild(option);
    }
  }

  setMachineState(state: string): void {
    const badge = this.element("machine-state");
    badge.textContent = state;
    badge.className = `badge badge-${state}`;
  }

  renderTrace(records: TraceRecord[]): void {
    const list = this.element("trace");
    list.replaceChildren();
    for (const record of records) {
      const item = this.root.createElement("li");
      item.textContent =
        `#${record.seq} ${record.kind} ${record.requirement} -> ${record.state}`;
      list.appendChild(item);
    }
  }

  renderWhatIf(model: WhatIfViewModel | null): void {
    const container = this.element("whatif-result");
    container.replaceChildren();
    if (model === null) {
      container.hidden = true;
      return;
    }
    container.hidden = false;
    for (const row of model.rows) {
      const block = this.root.createElement("div");
      block.className = "whatif-state";
      const label = this.root.createElement("div");
      label.textContent = `${row.state}: baseline ${row.baseline}, delta ${row.delta}`;
      block.appendChild(label);
      for (const [cls, fraction] of [
        ["whatif-bar-baseline", row.baselineFraction],
        ["whatif-bar-alternative", row.alternativeFraction],
      ] as const) {
        const track = this.root.createElement("div");
        track.className = "bar-track";
        const bar = this.root.createElement("div");
        bar.className = `bar-fill ${cls}`;
        bar.style.width = `${fraction * 100}%`;
        track.appendChild(bar);
        block.appendChild(track);
      }
      container.appendChild(block);
    }
  }

  showBanner(message: string): void {
    this.element("banner-message").textContent = message;
    this.element("banner").hidden = false;
  }

  showEventNotice(message: string): void {
    const notice = this.element("event-notice");
    notice.textContent = message;
    notice.hidden = false;
  }

  clearEventNotice(): void {
    const notice = this.element("event-notice");
    notice.textContent = "";
    notice.hidden = true;
  }
}
