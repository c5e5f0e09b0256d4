// DOM wiring for the console. Three views: runs list, run results table,
// and agent replay with the interview panel; plus the new-study form.
// All state changes flow through the view models; this file only renders.

import { ApiClient } from "./api.js";
import { StudyConfigForm } from "./configForm.js";
import { InterviewThreadViewModel } from "./interview.js";
import { TraceReplayViewModel } from "./replay.js";
import { RunTableViewModel, TABLE_COLUMNS, joinRows, type TableRow } from "./table.js";
import type { AgentDetail, RunDetail } from "./types.js";

const api = new ApiClient("");
const root = document.getElementById("app") as HTMLElement;
let pollTimer: number | undefined;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function clear(): HTMLElement {
  if (pollTimer !== undefined) {
    window.clearInterval(pollTimer);
    pollTimer = undefined;
  }
  root.replaceChildren();
  return root;
}

function banner(message: string): HTMLElement {
  return el("div", { class: "banner error" }, message);
}

// -- runs list ---------------------------------------------------------------

async function showRuns(): Promise<void> {
  const host = clear();
  host.append(el("h1", {}, "Simulation runs"));
  const newButton = el("button", { class: "primary" }, "Configure new study");
  newButton.onclick = () => void showConfigForm();
  host.append(newButton);
  try {
    const runs = await api.listRuns();
    if (runs.length === 0) {
      host.append(el("p", { class: "empty-state" }, "No runs yet. Configure a study to begin."));
      return;
    }
    const list = el("ul", { class: "run-list" });
    for (const run of runs) {
      const link = el("a", { href: "#" }, `${run.run_id} — ${run.task} (${run.status})`);
      link.onclick = (event) => {
        event.preventDefault();
        void showRun(run.run_id);
      };
      list.append(el("li", {}, link));
    }
    host.append(list);
  } catch (error) {
    host.append(banner(`Could not load runs: ${String(error)}`));
  }
}

// -- results table -------------------------------------------------------------

async function showRun(runId: string): Promise<void> {
  const host = clear();
  try {
    const detail = await api.runDetail(runId);
    renderRunDetail(host, runId, detail);
    if (detail.run.status === "running") {
      pollTimer = window.setInterval(() => void showRun(runId), 2000);
    }
  } catch (error) {
    host.append(banner(`Could not load run: ${String(error)}`));
  }
}

function renderRunDetail(host: HTMLElement, runId: string, detail: RunDetail): void {
  host.append(el("h1", {}, `Run ${runId}`));
  host.append(el("p", {}, `${detail.run.task} — ${detail.run.status}`));
  const back = el("a", { href: "#" }, "← all runs");
  back.onclick = (e) => {
    e.preventDefault();
    void showRuns();
  };
  host.append(back);

  const table = new RunTableViewModel(joinRows(detail.aggregates, detail.run.agents));

  const controls = el("div", { class: "table-controls" });
  const genderFilter = el("select", {},
    el("option", { value: "" }, "all genders"),
    ...unique(detail.aggregates.map((r) => r.gender)).map((g) => el("option", { value: g }, g)),
  );
  genderFilter.onchange = () => {
    table.setFilter("gender", genderFilter.value || null);
    renderTable();
  };
  controls.append(el("label", {}, "Filter: ", genderFilter));
  for (const format of ["csv", "xlsx", "jsonl"] as const) {
    const download = el("a", { href: api.exportUrl(runId, format), class: "export" },
      `export ${format}`);
    controls.append(download);
  }
  host.append(controls);

  const tableHost = el("div", {});
  host.append(tableHost);

  function renderTable(): void {
    const header = el("tr", {});
    for (const column of TABLE_COLUMNS) {
      const cell = el("th", {}, String(column));
      if (table.sortKey === column) cell.append(table.sortDirection === "asc" ? " ↑" : " ↓");
      cell.onclick = () => {
        table.toggleSort(column);
        renderTable();
      };
      header.append(cell);
    }
    const body = table.visibleRows.map((row) => renderRow(row));
    tableHost.replaceChildren(el("table", { class: "results" }, header, ...body));
  }

  function renderRow(row: TableRow): HTMLElement {
    const tr = el("tr", {});
    for (const column of TABLE_COLUMNS) {
      tr.append(el("td", {}, row[column] === null ? "—" : String(row[column])));
    }
    const view = el("button", {}, "View details");
    view.onclick = () => void showAgent(runId, row.agent_id);
    tr.append(el("td", {}, view));
    return tr;
  }

  renderTable();
}

function unique(values: string[]): string[] {
  return [...new Set(values)].sort();
}

// -- replay + interview ------------------------------------------------------------

async function showAgent(runId: string, agentId: string): Promise<void> {
  const host = clear();
  try {
    const detail = await api.agentDetail(runId, agentId);
    renderAgent(host, runId, detail);
  } catch (error) {
    host.append(banner(`Could not load agent: ${String(error)}`));
  }
}

function renderAgent(host: HTMLElement, runId: string, detail: AgentDetail): void {
  host.append(el("h1", {}, `Agent ${detail.agent_id}`));
  host.append(el("p", {}, detail.persona_summary), el("p", {}, `Intent: ${detail.intent}`));
  const back = el("a", { href: "#" }, "← back to run");
  back.onclick = (e) => {
    e.preventDefault();
    void showRun(runId);
  };
  host.append(back);

  const replay = new TraceReplayViewModel(detail);
  const thread = new InterviewThreadViewModel(api, runId, detail.agent_id,
    detail.persona_summary, detail.intent);

  const stage = el("div", { class: "replay" });
  const reasoningPane = el("div", { class: "reasoning" });
  const interviewPane = el("div", { class: "interview" });
  host.append(stage, reasoningPane, interviewPane);

  function renderReplay(): void {
    const step = replay.step;
    const shotWrap = el("div", { class: "shot-wrap" });
    if (replay.screenshotRef) {
      shotWrap.append(el("img", { src: api.screenshotUrl(replay.screenshotRef), alt: "page" }));
    } else {
      shotWrap.append(el("div", { class: "placeholder" }, "no screenshot for this step"));
    }
    const highlight = replay.highlight;
    if (highlight) {
      shotWrap.append(
        el("div", {
          class: "target-outline",
          style: `left:${highlight.x}px; top:${highlight.y}px; width:${highlight.w}px; height:${highlight.h}px;`,
        }),
      );
    }
    const prev = el("button", {}, "◀ prev");
    const next = el("button", {}, "next ▶");
    (prev as HTMLButtonElement).disabled = !replay.canGoBack;
    (next as HTMLButtonElement).disabled = !replay.canGoForward;
    prev.onclick = () => {
      replay.back();
      renderReplay();
    };
    next.onclick = () => {
      replay.forward();
      renderReplay();
    };
    const pick = el("button", {}, "interview at this step");
    pick.onclick = () => {
      thread.setInjectionTimestamp(replay.stepIndex);
      renderInterview();
    };
    stage.replaceChildren(
      el("h2", {}, `Step ${replay.stepIndex + 1} of ${replay.totalSteps}`),
      el("p", { class: "action-line" },
        `${step.record.action}${step.record.target ? ` → ${step.record.target}` : ""}: ${step.record.description}`),
      el("div", { class: "stepper" }, prev, next, pick),
      shotWrap,
    );
    const entries = replay.visibleReasoning.map((entry) => {
      const line = el("div", { class: `entry ${entry.kind}` },
        el("span", { class: "stamp" }, `[${entry.kind} @ ${entry.timestamp}] `),
        replay.isExpanded(entry.id) ? entry.content : entry.content.slice(0, 80),
      );
      line.onclick = () => {
        replay.toggleExpanded(entry.id);
        renderReplay();
      };
      return line;
    });
    reasoningPane.replaceChildren(el("h2", {}, "Reasoning trace"), ...entries);
  }

  function renderInterview(): void {
    const input = el("input", { type: "text", placeholder: "Ask the agent..." }) as HTMLInputElement;
    const send = el("button", { class: "primary" }, "Send");
    const stampNote = thread.injectionTimestamp === null
      ? "post-study (full memory)"
      : `at step ${thread.injectionTimestamp}`;
    send.onclick = () => {
      const question = input.value.trim();
      if (!question) return;
      input.value = "";
      void thread.ask(question).then(renderInterview);
      renderInterview();
    };
    const messages = thread.messages.map((m, i) => {
      const node = el("div", { class: `msg ${m.role} ${m.state}` },
        `${m.role === "researcher" ? "You" : "Agent"}: ${m.state === "pending" ? "…" : m.text}`);
      if (m.state === "failed") {
        const retry = el("button", {}, "retry");
        retry.onclick = () => void thread.retry(i).then(renderInterview);
        node.append(" ", retry);
      }
      return node;
    });
    interviewPane.replaceChildren(
      el("h2", {}, `Interview (${stampNote})`),
      ...messages,
      el("div", { class: "composer" }, input, send),
    );
  }

  renderReplay();
  renderInterview();
}

// -- study config form ------------------------------------------------------------------

function showConfigForm(): void {
  const host = clear();
  host.append(el("h1", {}, "Configure a study"));
  const form = new StudyConfigForm();
  const errorPane = el("div", { class: "errors" });

  const url = el("input", { type: "text", placeholder: "https://site-under-study/" }) as HTMLInputElement;
  const task = el("textarea", { placeholder: "Participant task..." }) as HTMLTextAreaElement;
  const count = el("input", { type: "number", value: "1", min: "1" }) as HTMLInputElement;
  const persona = el("textarea", { placeholder: "Example persona sheet (optional)" }) as HTMLTextAreaElement;

  const fieldsPane = el("div", {});
  const addField = el("button", {}, "add demographic field");
  addField.onclick = () => {
    const name = window.prompt("Field name (e.g. gender)") ?? "";
    if (!name) return;
    const field = form.addDemographicField(name);
    const labels = window.prompt("Comma-separated labels (weight 1 each)") ?? "";
    for (const label of labels.split(",").map((s) => s.trim()).filter(Boolean)) {
      form.addValue(field, label, 1);
    }
    fieldsPane.append(el("p", {}, `${name}: ${field.values.map((v) => v.label).join(", ")}`));
  };

  const surveyPane = el("div", {});
  const importSus = el("button", {}, "import the 10-item usability scale");
  importSus.onclick = () => {
    form.importSus();
    surveyPane.append(el("p", {}, "added 10 tagged usability items"));
  };

  const submit = el("button", { class: "primary" }, "Create and launch");
  submit.onclick = () => {
    form.url = url.value;
    form.task = task.value;
    form.nParticipants = Number(count.value);
    form.examplePersona = persona.value;
    void form.submit(api).then((runId) => {
      if (runId) {
        void showRun(runId);
      } else {
        errorPane.replaceChildren(
          ...Object.entries(form.errors).map(([field, msg]) =>
            el("p", { class: "field-error" }, `${field}: ${msg}`)),
        );
      }
    });
  };
  const cancel = el("a", { href: "#" }, "cancel");
  cancel.onclick = (e) => {
    e.preventDefault();
    void showRuns();
  };

  host.append(
    el("label", {}, "Website URL", url),
    el("label", {}, "Participant task", task),
    el("label", {}, "Participants", count),
    el("label", {}, "Example persona", persona),
    el("div", {}, addField, fieldsPane),
    el("div", {}, importSus, surveyPane),
    errorPane,
    el("div", { class: "composer" }, submit, cancel),
  );
}

void showRuns();
