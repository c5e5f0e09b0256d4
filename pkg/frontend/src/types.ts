// Payload shapes of the study-runner HTTP API. The console is a pure client:
// every number shown in the UI comes from these payloads, never from local
// recomputation.

export interface AggregateRow {
  agent_id: string;
  gender: string;
  shopping_frequency: string;
  total_actions: number;
  filter_clicks: number;
  sus_score: number | null;
  filter_satisfaction: number | null;
  flagged: boolean;
}

export interface RunSummary {
  run_id: string;
  status: string;
  started: number;
  finished: number | null;
  task: string;
  url: string;
  n_participants: number;
  agents: { agent_id: string; status: string; total_actions: number; persona_summary: string }[];
}

export interface RunDetail {
  run: RunSummary;
  config: Record<string, unknown>;
  aggregates: AggregateRow[];
  subgroups: Record<string, Record<string, unknown>>;
}

export interface ActionRecord {
  action: string;
  target?: string;
  description: string;
}

export interface AgentStep {
  index: number;
  record: ActionRecord;
  target_box: [number, number, number, number] | null;
  screenshot: string | null;
}

export interface ReasoningEntry {
  id: string;
  kind: string;
  content: string;
  timestamp: number;
  importance: number | null;
  metadata: Record<string, unknown>;
}

export interface InterviewEntry {
  timestamp: number | null;
  question: string;
  answer: string;
}

export interface AgentDetail {
  agent_id: string;
  persona: string;
  persona_summary: string;
  demographics: Record<string, string | number>;
  intent: string;
  status: string;
  termination_reason: string | null;
  action_trace: ActionRecord[];
  steps: AgentStep[];
  reasoning_trace: ReasoningEntry[];
  survey_answers: { question_id: string; answer: number | string }[];
  interviews: InterviewEntry[];
  final_answer: string | null;
}

export interface InterviewResponse {
  question: string;
  at_timestamp: number | null;
  answer: string;
}
