// Seeded API payloads used across the console tests: the reference 20-agent
// behavior table and a seven-step session trace in the exact API shape.

import type { AgentDetail, AggregateRow } from "../src/types.js";

type Row = [string, string, string, number, number, number, number];

const TABLE: Row[] = [
  ["1", "Male", "Monthly", 18, 7, 45.0, 2],
  ["2", "Non-Binary", "Monthly", 19, 2, 62.5, 5],
  ["3", "Female", "Monthly", 8, 2, 75.0, 5],
  ["4", "Non-Binary", "Weekly", 7, 2, 75.0, 5],
  ["5", "Non-Binary", "Monthly", 8, 2, 75.0, 5],
  ["6", "Female", "Monthly", 9, 0, 70.0, 3],
  ["7", "Female", "Weekly", 16, 2, 72.5, 5],
  ["8", "Male", "Yearly", 18, 1, 35.0, 4],
  ["9", "Male", "Weekly", 21, 0, 42.5, 3],
  ["10", "Non-Binary", "Weekly", 20, 11, 72.5, 4],
  ["11", "Female", "Monthly", 11, 0, 75.0, 3],
  ["12", "Female", "Yearly", 27, 0, 35.0, 2],
  ["13", "Non-Binary", "Monthly", 14, 0, 70.0, 3],
  ["14", "Non-Binary", "Monthly", 15, 1, 32.5, 4],
  ["15", "Female", "Weekly", 16, 0, 50.0, 3],
  ["16", "Non-Binary", "Monthly", 14, 2, 47.5, 4],
  ["17", "Male", "Yearly", 13, 2, 52.5, 4],
  ["18", "Male", "Monthly", 7, 0, 75.0, 3],
  ["19", "Non-Binary", "Weekly", 13, 5, 35.0, 4],
  ["20", "Male", "Monthly", 12, 1, 77.5, 5],
];

export function referenceRows(): AggregateRow[] {
  return TABLE.map(([agent_id, gender, shopping_frequency, total_actions,
                     filter_clicks, sus_score, filter_satisfaction]) => ({
    agent_id,
    gender,
    shopping_frequency,
    total_actions,
    filter_clicks,
    sus_score,
    filter_satisfaction,
    flagged: false,
  }));
}

export function personaSummaries(): { agent_id: string; persona_summary: string }[] {
  return TABLE.map(([agent_id]) => ({
    agent_id,
    persona_summary: `Participant ${agent_id}`,
  }));
}

export function sevenStepSession(): AgentDetail {
  const trace = [
    { action: "click", target: "grocery_gourmet_food", description: "Opening the grocery department" },
    { action: "click", target: "meat_substitutes_79", description: "Opening meat substitutes" },
    { action: "click", target: "100_00_199_99_4_item", description: "Applying the price filter" },
    { action: "click", target: "add_to_cart2", description: "Adding the top-rated item" },
    { action: "click", target: "my_cart_1_1_items", description: "Opening the cart" },
    { action: "click", target: "proceed_to_checkout", description: "Going to checkout" },
    { action: "terminate", description: "Reached the checkout page" },
  ];
  const boxes: ([number, number, number, number] | null)[] = [
    [0, 60, 180, 20],
    [0, 140, 160, 20],
    [0, 180, 170, 20],
    [24, 420, 120, 28],
    [0, 30, 140, 20],
    [12, 520, 170, 28],
    null,
  ];
  return {
    agent_id: "a01",
    persona: "Persona: Jordan\n...",
    persona_summary: "Jordan (34, Female, Logistics)",
    demographics: { age: 34, gender: "Female" },
    intent: "buy a meat substitute within budget",
    status: "terminated",
    termination_reason: "Reached the checkout page",
    action_trace: trace,
    steps: trace.map((record, index) => ({
      index,
      record,
      target_box: boxes[index],
      screenshot: index < 6 ? `a01_${String(index).padStart(3, "0")}.png` : null,
    })),
    reasoning_trace: [
      { id: "m1", kind: "plan", content: "Start in grocery", timestamp: 0, importance: null, metadata: {} },
      { id: "m2", kind: "observation", content: "A grocery landing page", timestamp: 0, importance: 0.4, metadata: {} },
      { id: "m3", kind: "observation", content: "Category sidebar with filters", timestamp: 1, importance: null, metadata: {} },
      { id: "m4", kind: "thought", content: "Filters will speed this up", timestamp: 2, importance: 0.8, metadata: {} },
      { id: "m5", kind: "action", content: "Applied the price filter", timestamp: 2, importance: null, metadata: {} },
      { id: "m6", kind: "thought", content: "Wondering about dinner", timestamp: 5, importance: null, metadata: { wonder: true } },
    ],
    survey_answers: [{ question_id: "sus1", answer: 4 }],
    interviews: [],
    final_answer: "reached checkout",
  };
}
