"""Command-line entry points for the retrofit toolkit."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .corpus import DEFAULT_HOLDOUT, MAX_MASK_FRACTION, MaskPolicy, build_corpus, read_samples
from .econ import default_rate_table, load_rate_table
from .gateway import (
    EndpointConfig,
    generate_batch,
    load_generations,
    mock_batch,
    save_generations,
)
from .evaluator import evaluate_run
from .pipeline import build_store, load_records, run_pipeline, save_records
from .ranking import GroundTruthStore
from .synth import export_results, gen_buildings, ingest_results


@click.group()
@click.version_option(version=__version__, prog_name="retrofitkit")
def main() -> None:
    """Ground-truth pipeline, corpus builder, evaluator, and advisor."""


def _rates(path: str | None):
    return load_rate_table(path) if path else default_rate_table()


@main.command()
@click.option("--n", default=500, show_default=True, help="Number of buildings.")
@click.option("--seed", default=0, show_default=True)
@click.option(
    "--store", "store_path", required=True, type=click.Path(), help="Output store path."
)
@click.option(
    "--rates", "rates_path", type=click.Path(exists=True), help="Rate table JSON."
)
@click.option(
    "--export-csv",
    type=click.Path(),
    help="Also write the surrogate's fuel results as CSV.",
)
@click.option(
    "--export-records",
    type=click.Path(),
    help="Also write records and geometry as JSONL for external simulation.",
)
def pipeline(store_path, n, seed, rates_path, export_csv, export_records) -> None:
    """Generate buildings, simulate, price, rank, and save the store."""
    store = run_pipeline(n, seed=seed, rates=_rates(rates_path))
    store.save(store_path)
    click.echo(f"wrote {len(store)} buildings to {store_path}")
    if export_records or export_csv:
        pairs = gen_buildings(n, seed=seed)
        if export_records:
            save_records(export_records, pairs)
            click.echo(f"wrote records to {export_records}")
        if export_csv:
            rows = {
                bid: (store.get(bid).baseline_fuels, store.get(bid).measure_fuels)
                for bid in store.building_ids()
            }
            export_results(export_csv, rows)
            click.echo(f"wrote fuel results to {export_csv}")


@main.command()
@click.option(
    "--records",
    "records_path",
    required=True,
    type=click.Path(exists=True),
    help="Records JSONL from the pipeline's --export-records.",
)
@click.option(
    "--results",
    "results_path",
    required=True,
    type=click.Path(exists=True),
    help="Per-scenario fuel results CSV from an external simulator.",
)
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--rates", "rates_path", type=click.Path(exists=True))
def ingest(records_path, results_path, store_path, rates_path) -> None:
    """Build a store from externally simulated fuel results."""
    pairs = load_records(records_path)
    simulations = ingest_results(results_path)
    store = build_store(pairs, simulations, _rates(rates_path))
    store.save(store_path)
    click.echo(f"wrote {len(store)} buildings to {store_path}")


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--holdout", default=DEFAULT_HOLDOUT, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option(
    "--mask/--no-mask",
    default=False,
    show_default=True,
    help="Also write a masked variant of the evaluation split.",
)
@click.option(
    "--mask-fraction", default=MAX_MASK_FRACTION, show_default=True, type=float
)
@click.option("--mask-seed", default=0, show_default=True)
def corpus(store_path, out_dir, holdout, seed, mask, mask_fraction, mask_seed) -> None:
    """Render the fine-tuning corpus from a ground-truth store."""
    store = GroundTruthStore.load(store_path)
    policy = (
        MaskPolicy(mask_fraction=mask_fraction, seed=mask_seed) if mask else None
    )
    manifest = build_corpus(
        store, out_dir, holdout=holdout, seed=seed, mask_policy=policy
    )
    click.echo(
        f"wrote {manifest['n_train']} train / {manifest['n_eval']} eval samples "
        f"to {out_dir}"
    )


@main.command()
@click.option(
    "--corpus",
    "corpus_path",
    required=True,
    type=click.Path(exists=True),
    help="Corpus JSONL holding the samples to answer.",
)
@click.option("--store", "store_path", type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option(
    "--mock",
    type=click.Choice(["perfect", "degraded"]),
    help="Answer from stored truth instead of a live endpoint.",
)
@click.option("--noise", default=0.10, show_default=True, type=float)
@click.option("--swap-prob", default=0.0, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True)
@click.option("--base-url", help="Chat-completions endpoint base URL.")
@click.option("--model", help="Model name sent to the endpoint.")
@click.option("--auth-env", default="RETROFIT_API_TOKEN", show_default=True)
@click.option("--timeout", default=60.0, show_default=True, type=float)
@click.option("--max-retries", default=3, show_default=True)
@click.option("--max-concurrent", default=4, show_default=True)
@click.option("--backoff-base", default=0.5, show_default=True, type=float)
def generate(
    corpus_path,
    store_path,
    out_path,
    mock,
    noise,
    swap_prob,
    seed,
    base_url,
    model,
    auth_env,
    timeout,
    max_retries,
    max_concurrent,
    backoff_base,
) -> None:
    """Produce model answers for a corpus, via mock or live endpoint."""
    samples = read_samples(corpus_path)
    if mock:
        if not store_path:
            raise click.UsageError("--mock requires --store")
        store = GroundTruthStore.load(store_path)
        records = mock_batch(
            samples, store, kind=mock, noise=noise, swap_prob=swap_prob, seed=seed
        )
    else:
        if not base_url or not model:
            raise click.UsageError("live generation requires --base-url and --model")
        config = EndpointConfig(
            base_url=base_url,
            model=model,
            auth_env_var=auth_env,
            timeout_s=timeout,
            max_retries=max_retries,
            max_concurrent=max_concurrent,
            backoff_base_s=backoff_base,
        )
        records = generate_batch(
            samples,
            config,
            progress=lambda done, total: click.echo(
                f"\r{done}/{total}", nl=done == total
            ),
        )
    save_generations(out_path, records)
    failures = sum(1 for r in records if r.error is not None)
    click.echo(f"wrote {len(records)} responses to {out_path} ({failures} failed)")


@main.command()
@click.option(
    "--generations", "gen_path", required=True, type=click.Path(exists=True)
)
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option(
    "--condition",
    type=click.Choice(["full", "masked"]),
    help="Score only records produced under this condition.",
)
@click.option("--out", "out_path", type=click.Path(), help="Write the report JSON.")
def evaluate(gen_path, store_path, condition, out_path) -> None:
    """Score a generation run against the ground-truth store."""
    store = GroundTruthStore.load(store_path)
    records = load_generations(gen_path)
    report = evaluate_run(records, store, condition=condition)
    click.echo(report.format_table())
    if out_path:
        report.save(out_path)
        click.echo(f"wrote report to {out_path}")
    if report.n_valid == 0:
        click.echo("no valid payloads; failing", err=True)
        sys.exit(2)


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8021, show_default=True)
def serve(store_path, host, port) -> None:
    """Run the advisor HTTP service."""
    import uvicorn

    from .advisor import create_app

    store = GroundTruthStore.load(store_path)
    uvicorn.run(create_app(store), host=host, port=port)


if __name__ == "__main__":
    main()
