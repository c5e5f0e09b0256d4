"""HTTP service over the run store: everything the web console consumes.

Read endpoints are side-effect-free views of the persisted run directories;
POST /api/studies launches a run in a background thread; the interview
endpoint round-trips through the agent with a time-bounded memory snapshot.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse, JSONResponse, Response
from pydantic import BaseModel

from ..errors import TimestampOutOfRange, UnknownAgent, UnknownRun
from .aggregate import aggregate, subgroup_summary
from .config import StudyConfig
from .export import FORMATS, export_bytes
from .records import RunStore

MEDIA_TYPES = {
    "csv": "text/csv",
    "jsonl": "application/x-ndjson",
    "xlsx": "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
}


class InterviewBody(BaseModel):
    question: str
    at_timestamp: int | None = None


class StudyBody(BaseModel):
    config: dict


def create_app(store: RunStore, runner=None, frontend_dist: str | None = None) -> FastAPI:
    app = FastAPI(title="uxsim", version="0.1.0")

    @app.get("/api/runs")
    def list_runs():
        return store.list_runs()

    @app.get("/api/runs/{run_id}")
    def run_detail(run_id: str):
        try:
            run = store.load_run(run_id)
        except UnknownRun:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        rows = aggregate(run)
        return {
            "run": store.load_manifest(run_id),
            "config": run.config.to_dict(),
            "aggregates": [r.to_dict() for r in rows],
            "subgroups": {
                "gender": subgroup_summary(rows, "gender"),
                "shopping_frequency": subgroup_summary(rows, "shopping_frequency"),
            },
        }

    @app.get("/api/runs/{run_id}/agents/{agent_id}")
    def agent_detail(run_id: str, agent_id: str):
        try:
            record = store.load_session(run_id, agent_id)
        except UnknownRun:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        except UnknownAgent:
            raise HTTPException(status_code=404, detail=f"unknown agent {agent_id}")
        reasoning = []
        if record.reasoning_trace_path and Path(record.reasoning_trace_path).exists():
            for line in Path(record.reasoning_trace_path).read_text().splitlines():
                if not line.strip():
                    continue
                piece = json.loads(line)
                if piece.get("update"):
                    continue
                reasoning.append({
                    "id": piece["id"],
                    "kind": piece["kind"],
                    "content": piece["content"],
                    "timestamp": piece["timestamp"],
                    "importance": piece.get("importance"),
                    "metadata": piece.get("metadata", {}),
                })
        steps = [
            {"index": i, "record": entry,
             "target_box": record.step_boxes[i] if i < len(record.step_boxes) else None,
             "screenshot": record.screenshots[i] if i < len(record.screenshots) else None}
            for i, entry in enumerate(record.action_trace)
        ]
        return {
            "agent_id": record.agent_id,
            "persona": record.persona.to_sheet(),
            "persona_summary": record.persona.summary(),
            "demographics": record.persona.demographics,
            "intent": record.intent,
            "status": record.status,
            "termination_reason": record.termination_reason,
            "action_trace": record.action_trace,
            "steps": steps,
            "reasoning_trace": reasoning,
            "survey_answers": record.survey_answers,
            "interviews": record.interviews,
            "final_answer": record.final_answer,
        }

    @app.get("/api/runs/{run_id}/export")
    def export_run(run_id: str, format: str = "csv"):
        if format not in FORMATS:
            raise HTTPException(status_code=422, detail=f"format must be one of {sorted(FORMATS)}")
        try:
            run = store.load_run(run_id)
        except UnknownRun:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        payload = export_bytes(aggregate(run), format)
        return Response(
            content=payload,
            media_type=MEDIA_TYPES[format],
            headers={"Content-Disposition": f'attachment; filename="{run_id}.{format}"'},
        )

    @app.post("/api/studies", status_code=201)
    def create_study(body: StudyBody):
        if runner is None:
            raise HTTPException(status_code=503, detail="no study runner attached")
        try:
            config = StudyConfig.from_dict(body.config)
        except (KeyError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        from .records import new_run_id

        run_id = new_run_id()
        thread = threading.Thread(
            target=runner.run_study, args=(config,), kwargs={"run_id": run_id},
            daemon=True,
        )
        thread.start()
        return {"run_id": run_id, "status": "launched"}

    @app.post("/api/runs/{run_id}/agents/{agent_id}/interview")
    def interview(run_id: str, agent_id: str, body: InterviewBody):
        if runner is None:
            raise HTTPException(status_code=503, detail="no study runner attached")
        if not body.question.strip():
            raise HTTPException(status_code=422, detail="question must be non-empty")
        try:
            answer = runner.interview(run_id, agent_id, body.question, body.at_timestamp)
        except UnknownRun:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        except UnknownAgent:
            raise HTTPException(status_code=404, detail=f"unknown agent {agent_id}")
        except TimestampOutOfRange as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"question": body.question, "at_timestamp": body.at_timestamp, "answer": answer}

    @app.get("/api/screenshots/{ref}")
    def screenshot(ref: str):
        if "/" in ref or ".." in ref:
            raise HTTPException(status_code=422, detail="bad screenshot ref")
        try:
            path = store.screenshot_path(ref)
        except FileNotFoundError:
            raise HTTPException(status_code=404, detail=f"unknown screenshot {ref}")
        return FileResponse(path, media_type="image/png")

    if frontend_dist and Path(frontend_dist).exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dist, html=True), name="console")

    return app
