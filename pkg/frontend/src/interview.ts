// Interview thread: researcher questions and agent answers, optionally
// injected at a chosen replay step. Messages are append-only; concurrent
// submissions are queued so the thread order always matches send order.

import type { ApiClient } from "./api.js";

export interface ThreadMessage {
  role: "researcher" | "agent";
  text: string;
  atTimestamp: number | null;
  state: "done" | "pending" | "failed";
}

export class InterviewThreadViewModel {
  messages: ThreadMessage[] = [];
  injectionTimestamp: number | null = null;
  private queue: Promise<void> = Promise.resolve();

  constructor(
    private api: ApiClient,
    private runId: string,
    private agentId: string,
    public personaHeader: string,
    public intent: string,
  ) {}

  /** Pick a replay step as the injection point (null = post-study). */
  setInjectionTimestamp(timestamp: number | null): void {
    this.injectionTimestamp = timestamp;
  }

  get pending(): boolean {
    return this.messages.some((m) => m.state === "pending");
  }

  /** Send one question; rapid repeat calls are answered in order. */
  ask(question: string): Promise<void> {
    const atTimestamp = this.injectionTimestamp;
    this.messages.push({ role: "researcher", text: question, atTimestamp, state: "done" });
    const placeholder: ThreadMessage = {
      role: "agent",
      text: "",
      atTimestamp,
      state: "pending",
    };
    this.messages.push(placeholder);
    this.queue = this.queue.then(async () => {
      try {
        const response = await this.api.interview(this.runId, this.agentId, question, atTimestamp);
        placeholder.text = response.answer;
        placeholder.state = "done";
      } catch (error) {
        placeholder.text = error instanceof Error ? error.message : String(error);
        placeholder.state = "failed";
      }
    });
    return this.queue;
  }

  /** Re-send the question behind a failed answer. */
  retry(messageIndex: number): Promise<void> {
    const failed = this.messages[messageIndex];
    const question = this.messages[messageIndex - 1];
    if (!failed || failed.state !== "failed" || !question || question.role !== "researcher") {
      return Promise.resolve();
    }
    this.messages.splice(messageIndex - 1, 2);
    this.setInjectionTimestamp(question.atTimestamp);
    return this.ask(question.text);
  }
}
