import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { DashboardController } from "../src/controller.js";
import { FakeServer, RecordingView } from "./helpers.js";

let server: FakeServer;
let view: RecordingView;
let controller: DashboardController;

beforeEach(async () => {
  server = new FakeServer();
  view = new RecordingView();
  controller = new DashboardController(new ApiClient(server.fetch), view);
  await controller.init();
  server.calls = [];
});

describe("initialisation", () => {
  it("renders classes from the model payload and gauges from the report", () => {
    expect(view.lastClasses().map((row) => row.id)).toEqual([
      "FPT_SSP", "FPT_STM", "FRU_PRS", "FRU_RSA",
    ]);
    expect(view.lastClasses().every((row) => row.state === "unobserved")).toBe(true);
    expect(view.lastGauges().map((g) => g.state)).toEqual(["S1", "S2", "S3"]);
    expect(view.machineStates.at(-1)).toBe("S0");
    expect(view.safetyRequirements.length).toBe(6);
  });
});

describe("toggle flow", () => {
  it("marks the toggle pending during the request and acknowledged after", async () => {
    const done = controller.toggleClass("FPT_STM", "violated");
    await done;
    const pendingRender = view.classRenders.find((rows) =>
      rows.some((row) => row.pending));
    expect(pendingRender).toBeDefined();
    const final = view.lastClasses();
    expect(final.find((row) => row.id === "FPT_STM")?.state).toBe("violated");
    expect(final.every((row) => !row.pending)).toBe(true);
  });

  it("reverts the toggle and shows a banner when the PUT fails", async () => {
    server.failNextPut = true;
    await controller.toggleClass("FPT_STM", "violated");
    expect(view.banners.length).toBe(1);
    const final = view.lastClasses();
    expect(final.find((row) => row.id === "FPT_STM")?.state).toBe("unobserved");
  });

  it("queues a second toggle; requests never interleave", async () => {
    const first = controller.toggleClass("FPT_STM", "violated");
    const second = controller.toggleClass("FRU_RSA", "violated");
    await Promise.all([first, second]);
    expect(server.callLog()).toEqual([
      "PUT /api/evidence/FPT_STM",
      "GET /api/report",
      "PUT /api/evidence/FRU_RSA",
      "GET /api/report",
    ]);
  });

  it("unobserved removes the evidence entry", async () => {
    await controller.toggleClass("FPT_STM", "violated");
    await controller.toggleClass("FPT_STM", "unobserved");
    expect(view.lastClasses().find((row) => row.id === "FPT_STM")?.state)
      .toBe("unobserved");
    expect(server.evidence).toEqual({});
  });
});

describe("revision monotonicity", () => {
  it("never renders a report with a lower revision than displayed", async () => {
    server.s1 = 0.9129016125;
    await controller.toggleClass("FPT_STM", "violated"); // renders revision 1
    const rendered = view.gaugeRenders.length;
    const current = view.lastGauges().find((g) => g.state === "S1")?.probability;
    expect(current).toBe("0.913");

    server.nextReportOverride = {
      ...server.report(),
      revision: 0,
      state_probabilities: { S1: 0.111, S2: 0, S3: 0 },
    };
    await controller.refresh();
    // stale payload dropped: no new gauge render with the old revision
    const gaugesAfter = view.gaugeRenders.length === rendered
      ? view.lastGauges()
      : view.gaugeRenders[rendered - 1];
    expect(view.lastGauges().find((g) => g.state === "S1")?.probability).toBe("0.913");
    expect(gaugesAfter.find((g) => g.state === "S1")?.probability).toBe("0.913");
  });
});

describe("what-if", () => {
  it("POSTs the overlay, leaves the revision unchanged, and renders payload deltas", async () => {
    const before = server.revision;
    await controller.runWhatIf({ FRU_RSA: "violated" });
    expect(server.callLog()).toEqual(["POST /api/whatif"]);
    expect(server.revision).toBe(before);
    const model = view.whatIfs.at(-1);
    expect(model).not.toBeNull();
    const s1 = model!.rows.find((row) => row.state === "S1")!;
    expect(s1.delta).toBe("+0.745");
    expect(s1.baseline).toBe("0.168");
  });

  it("closing the diff view renders null and touches nothing server-side", () => {
    controller.closeWhatIf();
    expect(view.whatIfs.at(-1)).toBeNull();
    expect(server.callLog()).toEqual([]);
  });
});

describe("events", () => {
  it("applies a violation and refreshes badge and trace from payloads", async () => {
    await controller.recordEvent("Violation", "A2.13a");
    expect(server.callLog()).toEqual(["POST /api/event", "GET /api/trace"]);
    expect(view.machineStates.at(-1)).toBe("S1");
    expect(view.traces.at(-1)).toEqual([
      { seq: 0, kind: "Violation", requirement: "A2.13a", state: "S1" },
    ]);
  });

  it("renders a 409 inline without touching the badge or trace", async () => {
    server.conflictNextEvent = true;
    const badgeBefore = view.machineStates.at(-1);
    const tracesBefore = view.traces.length;
    await controller.recordEvent("Resolution", "A2.6");
    expect(view.eventNotices.at(-1)).toContain("not outstanding");
    expect(view.banners).toEqual([]);
    expect(view.machineStates.at(-1)).toBe(badgeBefore);
    expect(view.traces.length).toBe(tracesBefore);
  });
});
