"""Command-line entry points: persona generation, study runs, exports, and
the API/console server."""

from __future__ import annotations

import json
import os
import random
import sys
from pathlib import Path

import click

from .llm import Gateway, HttpProvider, MockChatProvider, ProviderConfig
from .persona import DemographicSpec, generate_batch, parse_persona, save_batch
from .study import RunStore, StudyConfig, StudyRunner, aggregate, create_app, export_rows
from .study.records import new_run_id

DEFAULT_STORE = "runs"


def build_gateway(mock_scripts: str | None, endpoint: str | None = None) -> Gateway:
    endpoint = endpoint or os.environ.get("UXSIM_LLM_ENDPOINT")
    if endpoint:
        cfg = ProviderConfig(endpoint=endpoint, api_key=os.environ.get("UXSIM_LLM_KEY", ""))
        return Gateway(HttpProvider(), cfg)
    scripts = mock_scripts or os.environ.get("UXSIM_MOCK_SCRIPTS")
    if scripts:
        provider = MockChatProvider.from_directory(scripts)
    else:
        provider = MockChatProvider()  # fails loudly on unscripted calls
    return Gateway(provider, ProviderConfig(rate_limit=60000))


@click.group()
def main():
    """Simulated usability testing with persona-driven agents."""


@main.group()
def persona():
    """Persona generation commands."""


@persona.command("generate")
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True,
              help="Demographic spec JSON.")
@click.option("--seed-persona", "seed_path", type=click.Path(exists=True), required=True,
              help="Example persona sheet (text).")
@click.option("-n", "count", type=int, required=True)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--seed", "rng_seed", type=int, default=0, show_default=True)
@click.option("--mock-scripts", type=click.Path(exists=True), default=None,
              help="Directory of scripted mock replies (offline mode).")
@click.option("--endpoint", default=None, help="Chat-completions endpoint URL.")
def persona_generate(spec_path, seed_path, count, out_dir, rng_seed, mock_scripts, endpoint):
    """Generate a demographically controlled persona batch."""
    spec = DemographicSpec.from_dict(json.loads(Path(spec_path).read_text()))
    example = parse_persona(Path(seed_path).read_text())
    gateway = build_gateway(mock_scripts, endpoint)
    batch = generate_batch(spec, example, count, gateway, random.Random(rng_seed))
    batch.rng_seed = rng_seed
    out = save_batch(batch, out_dir)
    click.echo(f"wrote {len(batch.personas)} personas to {out} "
               f"({len(batch.failures)} failures)")
    if batch.failures:
        sys.exit(1)


@main.group()
def study():
    """Study orchestration commands."""


@study.command("run")
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--store", "store_dir", type=click.Path(), default=DEFAULT_STORE, show_default=True)
@click.option("--mock-scripts", type=click.Path(exists=True), default=None)
@click.option("--endpoint", default=None)
def study_run(config_path, store_dir, mock_scripts, endpoint):
    """Run a configured study end to end."""
    config = StudyConfig.load(config_path)
    store = RunStore(store_dir)
    runner = StudyRunner(store, build_gateway(mock_scripts, endpoint))
    run = runner.run_study(config)
    terminated = sum(1 for r in run.sessions if r.status == "terminated")
    click.echo(f"run {run.run_id}: {terminated}/{len(run.sessions)} sessions terminated cleanly")
    click.echo(f"artifacts in {store.run_dir(run.run_id)}")


@study.command("export")
@click.argument("run_id")
@click.option("--format", "fmt", type=click.Choice(["csv", "xlsx", "jsonl"]), default="csv",
              show_default=True)
@click.option("--store", "store_dir", type=click.Path(exists=True), default=DEFAULT_STORE,
              show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
def study_export(run_id, fmt, store_dir, out_path):
    """Export a run's aggregate table."""
    store = RunStore(store_dir)
    run = store.load_run(run_id)
    rows = aggregate(run)
    out_path = out_path or f"{run_id}.{fmt}"
    export_rows(rows, fmt, out_path)
    click.echo(f"wrote {len(rows)} rows to {out_path}")


@main.command("serve")
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.option("--store", "store_dir", type=click.Path(), default=DEFAULT_STORE, show_default=True)
@click.option("--frontend", "frontend_dist", type=click.Path(), default=None,
              help="Directory of built console assets to serve at /.")
@click.option("--mock-scripts", type=click.Path(exists=True), default=None)
@click.option("--endpoint", default=None)
def serve(addr, store_dir, frontend_dist, mock_scripts, endpoint):
    """Serve the HTTP API (and the web console, when built)."""
    import uvicorn

    host, _, port = addr.partition(":")
    store = RunStore(store_dir)
    runner = StudyRunner(store, build_gateway(mock_scripts, endpoint))
    if frontend_dist is None:
        default_dist = Path(__file__).parent.parent.parent / "frontend" / "dist"
        frontend_dist = str(default_dist) if default_dist.exists() else None
    app = create_app(store, runner=runner, frontend_dist=frontend_dist)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


@main.command("shop-server")
@click.option("--addr", default="127.0.0.1:8777", show_default=True)
def shop_server(addr):
    """Serve the built-in fixture shop site (test environment)."""
    from .fixtures.shop_site import FixtureShopServer

    host, _, port = addr.partition(":")
    server = FixtureShopServer(host=host or "127.0.0.1", port=int(port or 8777))
    with server:
        click.echo(f"fixture shop at {server.url} (Ctrl-C to stop)")
        try:
            import time

            while True:
                time.sleep(3600)
        except KeyboardInterrupt:
            click.echo("bye")


if __name__ == "__main__":
    main()
