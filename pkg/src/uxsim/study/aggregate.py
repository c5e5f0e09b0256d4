"""Per-agent metric rows and demographic subgroup summaries.

A row distills one session: action counts, clicks on the configured filter
elements, the usability score, and the filter-satisfaction rating. Subgroup
summaries give mean and population SD of each metric grouped by any
demographic field. Aggregation is a pure function of the session records;
recomputing from persisted files reproduces identical tables.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from ..errors import MissingItems
from .records import SessionRecord, StudyRun
from .sus import compute_sus

METRICS = ("total_actions", "filter_clicks", "sus_score", "filter_satisfaction")


@dataclass
class AggregateRow:
    agent_id: str
    gender: str
    shopping_frequency: str
    total_actions: int
    filter_clicks: int
    sus_score: float | None
    filter_satisfaction: int | None
    flagged: bool = False  # survey missing/incomplete; excluded from means

    def to_dict(self) -> dict:
        return {
            "agent_id": self.agent_id,
            "gender": self.gender,
            "shopping_frequency": self.shopping_frequency,
            "total_actions": self.total_actions,
            "filter_clicks": self.filter_clicks,
            "sus_score": self.sus_score,
            "filter_satisfaction": self.filter_satisfaction,
            "flagged": self.flagged,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AggregateRow":
        return cls(
            agent_id=str(data["agent_id"]),
            gender=data["gender"],
            shopping_frequency=data["shopping_frequency"],
            total_actions=int(data["total_actions"]),
            filter_clicks=int(data["filter_clicks"]),
            sus_score=None if data["sus_score"] in (None, "") else float(data["sus_score"]),
            filter_satisfaction=None if data["filter_satisfaction"] in (None, "")
            else int(data["filter_satisfaction"]),
            flagged=str(data.get("flagged", "False")) in ("True", "true", "1"),
        )


def count_filter_clicks(trace: list[dict], filter_targets: list[str]) -> int:
    """Clicks whose target is in the configured id set or matches an id prefix."""
    exact = {t for t in filter_targets if not t.endswith("*")}
    prefixes = [t[:-1] for t in filter_targets if t.endswith("*")]
    count = 0
    for record in trace:
        if record.get("action") != "click":
            continue
        target = record.get("target", "")
        if target in exact or any(target.startswith(p) for p in prefixes):
            count += 1
    return count


def sus_from_answers(answers: list[dict], questions) -> float:
    """Pull the sus:N-tagged answers out of a survey and score them."""
    tags = {q.id: q.instrument_tag for q in questions if q.instrument_tag}
    by_item: dict[int, int] = {}
    for entry in answers:
        tag = tags.get(entry["question_id"], "")
        if tag and tag.startswith("sus:"):
            by_item[int(tag.split(":")[1])] = int(entry["answer"])
    if not by_item:
        raise MissingItems("no usability-scale answers present")
    return compute_sus(by_item)


def row_for_session(record: SessionRecord, config) -> AggregateRow:
    demo = record.persona.demographics
    gender = str(demo.get("gender", ""))
    frequency = str(
        demo.get("shopping_frequency")
        or demo.get("online_shopping_frequency")
        or ""
    )
    filter_clicks = count_filter_clicks(record.action_trace, config.filter_click_targets)
    sus_score = None
    satisfaction = None
    flagged = False
    try:
        sus_score = sus_from_answers(record.survey_answers, config.survey)
    except Exception:
        flagged = True
    sat_ids = {q.id for q in config.survey if q.instrument_tag == "filter_satisfaction"}
    for entry in record.survey_answers:
        if entry["question_id"] in sat_ids:
            satisfaction = int(entry["answer"])
    if satisfaction is None:
        flagged = True
    return AggregateRow(
        agent_id=record.agent_id,
        gender=gender,
        shopping_frequency=frequency,
        total_actions=record.total_actions,
        filter_clicks=filter_clicks,
        sus_score=sus_score,
        filter_satisfaction=satisfaction,
        flagged=flagged,
    )


def aggregate(run: StudyRun) -> list[AggregateRow]:
    return [row_for_session(record, run.config) for record in run.sessions]


def subgroup_summary(rows: list[AggregateRow], by: str) -> dict:
    """Mean and population SD of every metric, grouped by a demographic field.

    ``by`` is "gender" or "shopping_frequency" (any row attribute). Flagged
    rows are excluded from survey-metric means but still counted for actions.
    """
    groups: dict[str, list[AggregateRow]] = {}
    for row in rows:
        groups.setdefault(str(getattr(row, by)), []).append(row)
    summary = {}
    for label, members in sorted(groups.items()):
        entry: dict = {"n": len(members)}
        for metric in METRICS:
            values = [
                getattr(r, metric) for r in members
                if getattr(r, metric) is not None
                and (metric in ("total_actions", "filter_clicks") or not r.flagged)
            ]
            if values:
                entry[metric] = {
                    "mean": statistics.fmean(values),
                    "sd": statistics.pstdev(values),
                    "n": len(values),
                }
            else:
                entry[metric] = {"mean": None, "sd": None, "n": 0}
        summary[label] = entry
    return summary
