// Results-table view model: stable sorting and filtering over the aggregate
// rows served by the API. Sorting and filtering never touch the source array.

import type { AggregateRow } from "./types.js";

export interface TableRow extends AggregateRow {
  persona_summary: string;
}

export type SortDirection = "asc" | "desc";

export const TABLE_COLUMNS: (keyof TableRow)[] = [
  "agent_id",
  "persona_summary",
  "gender",
  "shopping_frequency",
  "total_actions",
  "filter_clicks",
  "sus_score",
  "filter_satisfaction",
];

export class RunTableViewModel {
  sortKey: keyof TableRow | null = null;
  sortDirection: SortDirection = "asc";
  private filters = new Map<keyof TableRow, string>();

  constructor(private rows: TableRow[]) {}

  /** Header click: first click sorts ascending, second flips, and so on. */
  toggleSort(key: keyof TableRow): void {
    if (this.sortKey === key) {
      this.sortDirection = this.sortDirection === "asc" ? "desc" : "asc";
    } else {
      this.sortKey = key;
      this.sortDirection = "asc";
    }
  }

  setFilter(key: keyof TableRow, value: string | null): void {
    if (value === null || value === "") {
      this.filters.delete(key);
    } else {
      this.filters.set(key, value);
    }
  }

  activeFilters(): [string, string][] {
    return [...this.filters.entries()].map(([k, v]) => [String(k), v]);
  }

  /** Filtered, stably sorted copy; always a subset of the API rows. */
  get visibleRows(): TableRow[] {
    let rows = this.rows.filter((row) =>
      [...this.filters.entries()].every(([key, value]) => String(row[key]) === value),
    );
    const key = this.sortKey;
    if (key !== null) {
      const direction = this.sortDirection === "asc" ? 1 : -1;
      rows = rows
        .map((row, index) => ({ row, index }))
        .sort((a, b) => direction * compare(a.row[key], b.row[key]) || a.index - b.index)
        .map((entry) => entry.row);
    }
    return rows;
  }
}

function compare(a: unknown, b: unknown): number {
  // nulls (missing surveys) always sort after real values
  if (a === null && b === null) return 0;
  if (a === null) return 1;
  if (b === null) return -1;
  if (typeof a === "number" && typeof b === "number") return a - b;
  return String(a) < String(b) ? -1 : String(a) > String(b) ? 1 : 0;
}

export function joinRows(
  aggregates: AggregateRow[],
  summaries: { agent_id: string; persona_summary: string }[],
): TableRow[] {
  const byId = new Map(summaries.map((s) => [s.agent_id, s.persona_summary]));
  return aggregates.map((row) => ({
    ...row,
    persona_summary: byId.get(row.agent_id) ?? "",
  }));
}
