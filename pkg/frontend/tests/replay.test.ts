import { describe, expect, it } from "vitest";

import { TraceReplayViewModel } from "../src/replay.js";
import { sevenStepSession } from "./fixtures.js";

describe("trace replay", () => {
  it("shows seven steps with terminate last", () => {
    const replay = new TraceReplayViewModel(sevenStepSession());
    expect(replay.totalSteps).toBe(7);
    replay.goTo(6);
    expect(replay.step.record.action).toBe("terminate");
  });

  it("back navigation is disabled on step 0", () => {
    const replay = new TraceReplayViewModel(sevenStepSession());
    expect(replay.canGoBack).toBe(false);
    replay.back(); // no-op
    expect(replay.stepIndex).toBe(0);
    replay.forward();
    expect(replay.canGoBack).toBe(true);
  });

  it("draws the outline from the stored target box", () => {
    const replay = new TraceReplayViewModel(sevenStepSession());
    replay.goTo(3); // the add_to_cart2 step
    expect(replay.step.record.target).toBe("add_to_cart2");
    expect(replay.highlight).toEqual({ x: 24, y: 420, w: 120, h: 28 });
  });

  it("shows no outline when no box was stored", () => {
    const replay = new TraceReplayViewModel(sevenStepSession());
    replay.goTo(6); // terminate has no target box
    expect(replay.highlight).toBeNull();
  });

  it("missing screenshot yields a placeholder, trace stays navigable", () => {
    const replay = new TraceReplayViewModel(sevenStepSession());
    replay.goTo(6);
    expect(replay.screenshotRef).toBeNull();
    replay.back();
    expect(replay.screenshotRef).toBe("a01_005.png");
  });

  it("reasoning entries never run ahead of the current step", () => {
    const replay = new TraceReplayViewModel(sevenStepSession());
    for (let step = 0; step < replay.totalSteps; step += 1) {
      replay.goTo(step);
      for (const entry of replay.visibleReasoning) {
        expect(entry.timestamp).toBeLessThanOrEqual(step);
      }
    }
  });

  it("reasoning accumulates as the replay advances", () => {
    const replay = new TraceReplayViewModel(sevenStepSession());
    expect(replay.visibleReasoning.map((e) => e.id)).toEqual(["m1", "m2"]);
    replay.goTo(2);
    expect(replay.visibleReasoning.map((e) => e.id)).toEqual(["m1", "m2", "m3", "m4", "m5"]);
    replay.goTo(5);
    expect(replay.visibleReasoning).toHaveLength(6);
  });

  it("entries toggle between collapsed and expanded", () => {
    const replay = new TraceReplayViewModel(sevenStepSession());
    expect(replay.isExpanded("m1")).toBe(false);
    replay.toggleExpanded("m1");
    expect(replay.isExpanded("m1")).toBe(true);
    replay.toggleExpanded("m1");
    expect(replay.isExpanded("m1")).toBe(false);
  });
});
