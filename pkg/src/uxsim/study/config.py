"""Study configuration: task, participants, survey and runtime knobs.

One declarative JSON document mirrors these fields; the CLI and the HTTP API
both accept it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..persona import DemographicSpec, Persona, load_example_persona, parse_persona

FIXTURES = Path(__file__).parent.parent / "fixtures"


@dataclass
class SurveyQuestion:
    id: str
    kind: str  # likert | open
    text: str
    scale: tuple[int, int] | None = None
    instrument_tag: str | None = None  # e.g. "sus:1" .. "sus:10"

    def __post_init__(self):
        if self.kind not in ("likert", "open"):
            raise ValueError(f"unknown question kind {self.kind!r}")
        if self.kind == "likert" and self.scale is None:
            raise ValueError(f"likert question {self.id!r} needs a scale")
        if self.scale is not None:
            self.scale = (int(self.scale[0]), int(self.scale[1]))

    @classmethod
    def from_dict(cls, data: dict) -> "SurveyQuestion":
        return cls(
            id=data["id"],
            kind=data["kind"],
            text=data["text"],
            scale=tuple(data["scale"]) if data.get("scale") else None,
            instrument_tag=data.get("instrument_tag"),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "text": self.text,
            "scale": list(self.scale) if self.scale else None,
            "instrument_tag": self.instrument_tag,
        }


def sus_questions() -> list[SurveyQuestion]:
    """The standard 10-item usability scale, tagged sus:1..sus:10."""
    items = json.loads((FIXTURES / "sus_survey.json").read_text())
    return [SurveyQuestion.from_dict(item) for item in items]


def default_survey() -> list[SurveyQuestion]:
    questions = sus_questions()
    questions.append(SurveyQuestion(
        id="filter_satisfaction", kind="likert", scale=(1, 5),
        text=("To what extent do you agree that the left-side filter function helps "
              "you narrow your search and find your desired product?"),
        instrument_tag="filter_satisfaction",
    ))
    questions.append(SurveyQuestion(
        id="filter_feedback", kind="open",
        text=("Please explain your answer. What aspects of the filter function were "
              "helpful or unhelpful in your experience?"),
    ))
    return questions


def default_interview_protocol() -> list[str]:
    return json.loads((FIXTURES / "interview_protocol.json").read_text())


@dataclass
class StudyConfig:
    url: str
    task: str
    n_participants: int = 1
    example_persona: Persona = field(default_factory=load_example_persona)
    demographic_spec: DemographicSpec = field(
        default_factory=lambda: DemographicSpec(fields=[])
    )
    survey: list[SurveyQuestion] = field(default_factory=default_survey)
    interview_protocol: list[str] = field(default_factory=default_interview_protocol)
    step_budget: int = 50
    screenshot_mode: bool = True
    screenshot_in_prompt: bool = False
    parallelism: int = 4
    rng_seed: int = 0
    filter_click_targets: list[str] = field(default_factory=list)  # ids or prefixes
    slow_loop_enabled: bool = True
    quiescence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_participants < 1:
            raise ValueError("n_participants must be >= 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "StudyConfig":
        example = data.get("example_persona")
        if isinstance(example, str):
            example = parse_persona(example)
        elif example is None:
            example = load_example_persona()
        survey = [SurveyQuestion.from_dict(q) for q in data["survey"]] \
            if data.get("survey") else default_survey()
        spec = DemographicSpec.from_dict(data["demographic_spec"]) \
            if data.get("demographic_spec") else DemographicSpec(fields=[])
        return cls(
            url=data["url"],
            task=data["task"],
            n_participants=int(data.get("n_participants", 1)),
            example_persona=example,
            demographic_spec=spec,
            survey=survey,
            interview_protocol=data.get("interview_protocol", default_interview_protocol()),
            step_budget=int(data.get("step_budget", 50)),
            screenshot_mode=bool(data.get("screenshot_mode", True)),
            screenshot_in_prompt=bool(data.get("screenshot_in_prompt", False)),
            parallelism=int(data.get("parallelism", 4)),
            rng_seed=int(data.get("rng_seed", 0)),
            filter_click_targets=list(data.get("filter_click_targets", [])),
            slow_loop_enabled=bool(data.get("slow_loop_enabled", True)),
            quiescence=dict(data.get("quiescence", {})),
        )

    def to_dict(self) -> dict:
        return {
            "url": self.url,
            "task": self.task,
            "n_participants": self.n_participants,
            "example_persona": self.example_persona.to_sheet(),
            "demographic_spec": self.demographic_spec.to_dict(),
            "survey": [q.to_dict() for q in self.survey],
            "interview_protocol": self.interview_protocol,
            "step_budget": self.step_budget,
            "screenshot_mode": self.screenshot_mode,
            "screenshot_in_prompt": self.screenshot_in_prompt,
            "parallelism": self.parallelism,
            "rng_seed": self.rng_seed,
            "filter_click_targets": self.filter_click_targets,
            "slow_loop_enabled": self.slow_loop_enabled,
            "quiescence": self.quiescence,
        }

    @classmethod
    def load(cls, path: str | Path) -> "StudyConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))
