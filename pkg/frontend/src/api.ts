import type { AgentDetail, InterviewResponse, RunDetail, RunSummary } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`API ${status}: ${detail}`);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* body was not JSON */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  listRuns(): Promise<RunSummary[]> {
    return fetch(`${this.baseUrl}/api/runs`).then((r) => asJson<RunSummary[]>(r));
  }

  runDetail(runId: string): Promise<RunDetail> {
    return fetch(`${this.baseUrl}/api/runs/${runId}`).then((r) => asJson<RunDetail>(r));
  }

  agentDetail(runId: string, agentId: string): Promise<AgentDetail> {
    return fetch(`${this.baseUrl}/api/runs/${runId}/agents/${agentId}`).then((r) =>
      asJson<AgentDetail>(r),
    );
  }

  interview(
    runId: string,
    agentId: string,
    question: string,
    atTimestamp: number | null,
  ): Promise<InterviewResponse> {
    return fetch(`${this.baseUrl}/api/runs/${runId}/agents/${agentId}/interview`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question, at_timestamp: atTimestamp }),
    }).then((r) => asJson<InterviewResponse>(r));
  }

  createStudy(config: Record<string, unknown>): Promise<{ run_id: string; status: string }> {
    return fetch(`${this.baseUrl}/api/studies`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ config }),
    }).then((r) => asJson<{ run_id: string; status: string }>(r));
  }

  exportUrl(runId: string, format: "csv" | "xlsx" | "jsonl"): string {
    return `${this.baseUrl}/api/runs/${runId}/export?format=${format}`;
  }

  screenshotUrl(ref: string): string {
    return `${this.baseUrl}/api/screenshots/${ref}`;
  }
}
