// Step-through replay of one agent's session: the action record, the page
// screenshot with the action target outlined, and the reasoning entries the
// agent had produced up to that step.

import type { AgentDetail, AgentStep, ReasoningEntry } from "./types.js";

export interface HighlightBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export class TraceReplayViewModel {
  stepIndex = 0;
  private expanded = new Set<string>();

  constructor(private detail: AgentDetail) {}

  get totalSteps(): number {
    return this.detail.steps.length;
  }

  get step(): AgentStep {
    return this.detail.steps[this.stepIndex];
  }

  get canGoBack(): boolean {
    return this.stepIndex > 0;
  }

  get canGoForward(): boolean {
    return this.stepIndex + 1 < this.totalSteps;
  }

  back(): void {
    if (this.canGoBack) this.stepIndex -= 1;
  }

  forward(): void {
    if (this.canGoForward) this.stepIndex += 1;
  }

  goTo(index: number): void {
    if (index >= 0 && index < this.totalSteps) this.stepIndex = index;
  }

  /** Screenshot reference for the current step, or null for a placeholder. */
  get screenshotRef(): string | null {
    return this.step.screenshot;
  }

  /** Outline geometry; only when this step's target has a stored box. */
  get highlight(): HighlightBox | null {
    const box = this.step.target_box;
    if (!box || !this.step.record.target) return null;
    const [x, y, w, h] = box;
    return { x, y, w, h };
  }

  /** Reasoning entries visible at this step: timestamp <= the step's clock. */
  get visibleReasoning(): ReasoningEntry[] {
    return this.detail.reasoning_trace.filter((entry) => entry.timestamp <= this.stepIndex);
  }

  toggleExpanded(entryId: string): void {
    if (this.expanded.has(entryId)) {
      this.expanded.delete(entryId);
    } else {
      this.expanded.add(entryId);
    }
  }

  isExpanded(entryId: string): boolean {
    return this.expanded.has(entryId);
  }
}
