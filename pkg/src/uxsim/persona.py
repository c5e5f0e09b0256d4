"""Demographically controlled persona generation.

A batch starts from one user-provided seed persona. Demographic attributes are
sampled per the study's distribution (weighted-random, or exact quotas with
largest-remainder rounding), and each new persona is generated by the LLM from
an example drawn uniformly at random from the seed plus all personas generated
so far, which keeps the batch diverse instead of collapsing onto the seed.
"""

from __future__ import annotations

import json
import logging
import random
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SchemaViolation
from .llm.types import ChatRequest, Message

log = logging.getLogger(__name__)

SHEET_SECTIONS = [
    "Background",
    "Demographics",
    "Financial Situation",
    "Shopping Habits",
    "Professional Life",
    "Personal Style",
    "Intent",
]

GENERATION_PROMPT = """You are a helpful assistant that generates diverse personas.
Examples: {example}

Generate a persona using the above examples. The persona should be different from previous personas to ensure diversity.
The persona should:
{constraints}
Provide the persona in the same format as the examples.
Only output the persona, no other text.
"""


@dataclass
class DemographicField:
    name: str
    values: list[tuple[str, float]]

    def __post_init__(self):
        if not self.values:
            raise ValueError(f"field {self.name!r} needs at least one value")
        if any(w < 0 for _, w in self.values):
            raise ValueError(f"field {self.name!r} has a negative weight")
        if sum(w for _, w in self.values) <= 0:
            raise ValueError(f"field {self.name!r} weights sum to zero")


@dataclass
class DemographicSpec:
    fields: list[DemographicField]
    sampling_mode: str = "weighted-random"  # or "exact-quota"

    def __post_init__(self):
        names = [f.name for f in self.fields]
        if len(set(names)) != len(names):
            raise ValueError("demographic field names must be unique")
        if self.sampling_mode not in ("weighted-random", "exact-quota"):
            raise ValueError(f"unknown sampling mode {self.sampling_mode!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "DemographicSpec":
        fields = [
            DemographicField(f["name"], [(v["label"], float(v["weight"])) for v in f["values"]])
            for f in data.get("fields", [])
        ]
        return cls(fields=fields, sampling_mode=data.get("sampling_mode", "weighted-random"))

    def to_dict(self) -> dict:
        return {
            "sampling_mode": self.sampling_mode,
            "fields": [
                {"name": f.name, "values": [{"label": l, "weight": w} for l, w in f.values]}
                for f in self.fields
            ],
        }


@dataclass
class Persona:
    name: str
    background: str
    demographics: dict
    financial_situation: str
    shopping_habits: str
    professional_life: str
    personal_style: str
    intent: str
    flags: list[str] = field(default_factory=list)

    def __post_init__(self):
        for section in ("name", "background", "financial_situation", "shopping_habits",
                        "professional_life", "personal_style", "intent"):
            if not getattr(self, section):
                raise ValueError(f"persona section {section!r} is empty")
        if not self.demographics:
            raise ValueError("persona has no demographics")

    def to_sheet(self) -> str:
        """Serialize back into the character-sheet text format."""
        demo_lines = "\n".join(
            f"{_title(key)}: {value}" for key, value in self.demographics.items()
        )
        return (
            f"Persona: {self.name}\n\n"
            f"Background:\n{self.background}\n\n"
            f"Demographics:\n{demo_lines}\n\n"
            f"Financial Situation:\n{self.financial_situation}\n\n"
            f"Shopping Habits:\n{self.shopping_habits}\n\n"
            f"Professional Life:\n{self.professional_life}\n\n"
            f"Personal Style:\n{self.personal_style}\n\n"
            f"Intent:\n{self.intent}\n"
        )

    def summary(self) -> str:
        bits = [str(self.demographics.get("age", "?")), str(self.demographics.get("gender", "?")),
                str(self.demographics.get("profession", ""))]
        return f"{self.name} ({', '.join(b for b in bits if b)})"


@dataclass
class PersonaBatch:
    personas: list[Persona]
    seed_example: Persona
    rng_seed: int
    provenance: list[dict] = field(default_factory=list)  # one entry per attempt
    failures: list[dict] = field(default_factory=list)


def _title(key: str) -> str:
    return " ".join(w.capitalize() for w in key.replace("_", " ").split())


def _key(label: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", label.strip().lower()).strip("_")


def parse_persona(text: str) -> Persona:
    """Parse a character sheet in the canonical heading+paragraph format."""
    name_match = re.search(r"^Persona:\s*(.+)$", text, re.MULTILINE)
    if not name_match:
        raise ValueError("sheet is missing the 'Persona:' heading")
    name = name_match.group(1).strip()

    sections: dict[str, str] = {}
    heading_re = re.compile(
        r"^(" + "|".join(re.escape(s) for s in SHEET_SECTIONS) + r"):\s*$",
        re.MULTILINE,
    )
    matches = list(heading_re.finditer(text))
    if not matches:
        raise ValueError("sheet has no recognizable section headings")
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        sections[m.group(1)] = text[m.end():end].strip()
    missing = [s for s in SHEET_SECTIONS if not sections.get(s)]
    if missing:
        raise ValueError(f"sheet is missing sections: {', '.join(missing)}")

    demographics: dict = {}
    flags: list[str] = []
    for line in sections["Demographics"].splitlines():
        label, _, value = line.partition(":")
        if not _:
            continue
        demographics[_key(label)] = value.strip()
    if "age" in demographics:
        try:
            demographics["age"] = int(re.search(r"\d+", str(demographics["age"])).group())
        except (AttributeError, ValueError):
            flags.append("age_unparsed")

    return Persona(
        name=name,
        background=sections["Background"],
        demographics=demographics,
        financial_situation=sections["Financial Situation"],
        shopping_habits=sections["Shopping Habits"],
        professional_life=sections["Professional Life"],
        personal_style=sections["Personal Style"],
        intent=sections["Intent"],
        flags=flags,
    )


# -- demographic sampling ------------------------------------------------------


def sample_demographics(spec: DemographicSpec, rng: random.Random) -> dict:
    """Draw one label per field, independently, proportional to weights."""
    assignment = {}
    for f in spec.fields:
        labels = [label for label, _ in f.values]
        weights = [w for _, w in f.values]
        assignment[_key(f.name)] = rng.choices(labels, weights=weights, k=1)[0]
    return assignment


def quota_counts(field_: DemographicField, n: int) -> dict[str, int]:
    """Largest-remainder apportionment of ``n`` slots across the field's labels."""
    total = sum(w for _, w in field_.values)
    raw = [(label, n * w / total) for label, w in field_.values]
    counts = {label: int(exact) for label, exact in raw}
    leftover = n - sum(counts.values())
    remainders = sorted(raw, key=lambda lw: lw[1] - int(lw[1]), reverse=True)
    for label, _ in remainders[:leftover]:
        counts[label] += 1
    return counts


def quota_assignments(spec: DemographicSpec, n: int, rng: random.Random) -> list[dict]:
    """n assignment maps hitting each field's quota exactly (order shuffled)."""
    per_field: dict[str, list[str]] = {}
    for f in spec.fields:
        slots: list[str] = []
        for label, count in quota_counts(f, n).items():
            slots.extend([label] * count)
        rng.shuffle(slots)
        per_field[_key(f.name)] = slots
    return [{name: slots[i] for name, slots in per_field.items()} for i in range(n)]


# -- generation ------------------------------------------------------------------


def build_generation_request(example: Persona, assignment: dict) -> ChatRequest:
    constraints = "\n".join(f"- have the {_title(k)}: {v}" for k, v in assignment.items())
    prompt = GENERATION_PROMPT.format(example=example.to_sheet(), constraints=constraints)
    return ChatRequest.simple("You generate personas for simulated shopping studies.", prompt)


def generate_persona(example: Persona, assignment: dict, gateway) -> Persona:
    """One LLM-generated persona honoring ``assignment`` exactly.

    Malformed or constraint-violating sheets are re-prompted with the parse
    error appended, up to the gateway's retry budget.
    """
    req = build_generation_request(example, assignment)
    attempts = 1 + gateway.cfg.max_retries
    last_error = None
    for attempt in range(attempts):
        raw = gateway.complete(req)
        try:
            persona = parse_persona(raw)
        except ValueError as exc:
            last_error = str(exc)
        else:
            mismatch = [
                k for k, v in assignment.items()
                if str(persona.demographics.get(k, "")) != str(v)
            ]
            if not mismatch:
                return persona
            last_error = f"demographics do not honor the requested values for: {', '.join(mismatch)}"
        req = ChatRequest(
            messages=list(build_generation_request(example, assignment).messages)
            + [Message("user", f"Your previous sheet was rejected: {last_error}. Output a corrected sheet.")],
        )
    raise SchemaViolation(
        f"persona sheet invalid after {attempts - 1} retries: {last_error}",
        retry_count=attempts - 1,
    )


def generate_batch(spec: DemographicSpec, example: Persona, n: int, gateway,
                   rng: random.Random) -> PersonaBatch:
    """Generate ``n`` personas, recording example provenance for each.

    Persona 1 is generated from the user seed; persona i>1 from an example
    drawn uniformly from the seed plus all previously completed personas.
    Failed generations are recorded and skipped, never aborting the batch.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.sampling_mode == "exact-quota":
        assignments = quota_assignments(spec, n, rng)
    else:
        assignments = [sample_demographics(spec, rng) for _ in range(n)]

    batch = PersonaBatch(personas=[], seed_example=example, rng_seed=getattr(rng, "_seed", 0))
    pool: list[Persona] = [example]  # index 0 = user seed
    for i, assignment in enumerate(assignments):
        example_index = 0 if i == 0 else rng.randrange(len(pool))
        chosen = pool[example_index]
        try:
            persona = generate_persona(chosen, assignment, gateway)
        except Exception as exc:  # gateway or schema failure: mark and continue
            log.warning("persona %d failed: %s", i + 1, exc)
            batch.failures.append({"index": i + 1, "assignment": assignment, "error": str(exc)})
            batch.provenance.append(
                {"index": i + 1, "example_index": example_index, "status": "failed"}
            )
            continue
        batch.personas.append(persona)
        pool.append(persona)
        batch.provenance.append(
            {"index": i + 1, "example_index": example_index, "status": "ok",
             "assignment": assignment}
        )
    return batch


def save_batch(batch: PersonaBatch, out_dir: str | Path) -> Path:
    """Persist one sheet file per persona plus a JSON manifest with provenance."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, persona in enumerate(batch.personas, start=1):
        (out / f"persona_{i:04d}.txt").write_text(persona.to_sheet())
    manifest = {
        "rng_seed": batch.rng_seed,
        "count": len(batch.personas),
        "failures": batch.failures,
        "provenance": batch.provenance,
    }
    (out / "batch_manifest.json").write_text(json.dumps(manifest, indent=2))
    return out


def load_example_persona() -> Persona:
    """The default seed persona shipped with the package."""
    path = Path(__file__).parent / "fixtures" / "example_persona.txt"
    return parse_persona(path.read_text())
