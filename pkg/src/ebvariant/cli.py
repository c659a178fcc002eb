"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data/estimation error. The
``--threads`` flag (or EBVARIANT_THREADS) only affects speed, never any
output byte.
"""

from __future__ import annotations

import sys

import click

from . import accel, calling, evaluation, moments
from .io import ParseError, read_counts, write_calls, write_counts, write_truth
from .simulation import SimulationSpec, simulate
from .types import EstimationError, Hyperparameters, PoolDesign

EXIT_DATA_ERROR = 3


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_DATA_ERROR)


def _probability(ctx, param, value):
    if value is not None and not 0.0 < value < 1.0:
        raise click.BadParameter("must be strictly between 0 and 1")
    return value


def _design(pools: int, pool_size: int, error_rate: float) -> PoolDesign:
    try:
        return PoolDesign(pools=pools, pool_size=pool_size, error_rate=error_rate)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


design_options = [
    click.option("--pools", type=int, required=True, help="Number of pools M."),
    click.option("--pool-size", type=int, required=True, help="Haploids per pool N."),
    click.option("--error-rate", type=float, default=0.01, show_default=True,
                 help="Sequencing error rate."),
]


def _with(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn
    return wrap


@click.group()
@click.option("--threads", type=int, default=None,
              help="Worker threads for the scoring kernel (default: EBVARIANT_THREADS or all cores).")
def main(threads):
    """Pooled-sequencing variant calling via empirical Bayes local fdr scores."""
    try:
        accel.set_threads(threads if threads is not None else accel.threads_from_env())
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@_with(design_options)
@click.option("--alpha", type=float, default=0.05, show_default=True, callback=_probability)
@click.option("--oracle-pi1", type=float, default=None, callback=_probability)
@click.option("--oracle-a", type=float, default=None)
@click.option("--fixed-pi1", type=float, default=None, callback=_probability)
@click.option("--fixed-a", type=float, default=None)
@click.option("--output", required=True, type=click.Path(dir_okay=False, writable=True))
def call(input_path, pools, pool_size, error_rate, alpha, oracle_pi1, oracle_a,
         fixed_pi1, fixed_a, output):
    """Call variants from a count table with the step-up procedure."""
    design = _design(pools, pool_size, error_rate)
    oracle = (oracle_pi1, oracle_a)
    fixed = (fixed_pi1, fixed_a)
    if any(v is not None for v in oracle) and any(v is not None for v in fixed):
        raise click.UsageError("--oracle-* and --fixed-* are mutually exclusive")
    mode, hyper = "empirical", None
    for name, (pi1, a) in (("oracle", oracle), ("fixed", fixed)):
        if any(v is not None for v in (pi1, a)):
            if pi1 is None or a is None:
                raise click.UsageError(f"--{name}-pi1 and --{name}-a must be given together")
            try:
                hyper = Hyperparameters.from_pi1(pi1, a)
            except ValueError as exc:
                raise click.UsageError(str(exc)) from None
            mode = name
    try:
        data = read_counts(input_path, design)
        calls = calling.call_pipeline(data, design, alpha=alpha, mode=mode, hyper=hyper)
    except (ParseError, EstimationError, ValueError) as exc:
        _fail(str(exc))
    write_calls(calls, calls.scores, data.all_site_ids(), output)
    used = calls.hyper_used
    est = getattr(used, "hyper", used)
    click.echo(
        f"rejected={calls.num_rejected} pi1_hat={est.pi1:.6g} a_hat={est.a:.6g} "
        f"attained_bfdr={calls.attained_bfdr:.6g}",
        err=True,
    )


@main.command("simulate")
@click.option("--p", "n_sites", type=int, required=True, help="Number of sites.")
@_with(design_options)
@click.option("--pi1", type=float, required=True)
@click.option("--a", type=float, required=True)
@click.option("--coverage-mean", type=float, default=30.0, show_default=True)
@click.option("--coverage-shape", type=float, default=3.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-prefix", required=True)
def simulate_cmd(n_sites, pools, pool_size, error_rate, pi1, a, coverage_mean,
                 coverage_shape, seed, out_prefix):
    """Generate a synthetic count table plus a truth sidecar."""
    design = _design(pools, pool_size, error_rate)
    try:
        spec = SimulationSpec(
            p=n_sites, design=design, pi1=pi1, a=a, coverage_mean=coverage_mean,
            coverage_shape=coverage_shape, seed=seed,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    data, truth = simulate(spec)
    write_counts(data, f"{out_prefix}.counts.tsv")
    write_truth(truth, data.all_site_ids(), f"{out_prefix}.truth.tsv")
    click.echo(
        f"wrote {out_prefix}.counts.tsv and {out_prefix}.truth.tsv "
        f"({n_sites} sites, {truth.mu.sum()} variants)",
        err=True,
    )


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@_with(design_options)
def estimate(input_path, pools, pool_size, error_rate):
    """Print moment statistics and hyperparameter estimates for a count table."""
    design = _design(pools, pool_size, error_rate)
    try:
        data = read_counts(input_path, design)
        summary = moments.compute_moments(data, design)
        est = moments.estimate_hyperparameters(summary, design)
    except (ParseError, EstimationError, ValueError) as exc:
        _fail(str(exc))
    click.echo(f"m1={summary.m1:.10g}")
    click.echo(f"m2={summary.m2:.10g}")
    click.echo(f"n_terms={summary.n_terms}")
    click.echo(f"excluded_pairs={summary.excluded_pairs}")
    click.echo(f"raw_a={est.raw_a:.10g}")
    click.echo(f"raw_pi1={est.raw_pi1:.10g}")
    click.echo(f"a_hat={est.hyper.a:.10g} truncated={int(est.truncated_a)}")
    click.echo(f"pi1_hat={est.hyper.pi1:.10g} truncated={int(est.truncated_pi1)}")


def _parse_grid(preset, pi1_values, a_values):
    if preset == "table1":
        return list(evaluation.TABLE1_GRID)
    if not pi1_values or not a_values:
        raise click.UsageError("give --preset table1 or both --pi1 and --a")
    return [(pi1, a) for pi1 in pi1_values for a in a_values]


def _parse_methods(raw: str) -> list[str]:
    methods = [m.strip() for m in raw.split(",") if m.strip()]
    for m in methods:
        if m not in evaluation.METHODS:
            raise click.UsageError(
                f"unknown method {m!r}; choose from {', '.join(evaluation.METHODS)}"
            )
    return methods


@main.command()
@click.option("--preset", type=click.Choice(["table1"]), default=None)
@click.option("--pi1", "pi1_values", type=float, multiple=True)
@click.option("--a", "a_values", type=float, multiple=True)
@_with(design_options)
@click.option("--p", "n_sites", type=int, required=True)
@click.option("--replications", type=int, default=20, show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True, callback=_probability)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--methods", default="embayes,oracle,snver,meta", show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
def benchmark(preset, pi1_values, a_values, pools, pool_size, error_rate, n_sites,
              replications, alpha, seed, methods, out):
    """Simulate a grid of scenarios and tabulate ER/EV/FDR per method."""
    design = _design(pools, pool_size, error_rate)
    grid = _parse_grid(preset, pi1_values, a_values)
    try:
        rows = evaluation.run_benchmark(
            grid, design, p=n_sites, replications=replications, alpha=alpha,
            methods=_parse_methods(methods), seed=seed,
        )
    except EstimationError as exc:
        _fail(str(exc))
    with open(out, "w", encoding="utf-8", newline="") as handle:
        evaluation.write_benchmark_table(rows, handle)
    click.echo(f"wrote {out} ({len(rows)} rows)", err=True)


@main.command()
@click.option("--preset", type=click.Choice(["table1"]), default=None)
@click.option("--pi1", "pi1_values", type=float, multiple=True)
@click.option("--a", "a_values", type=float, multiple=True)
@_with(design_options)
@click.option("--p", "n_sites", type=int, required=True)
@click.option("--replications", type=int, default=10, show_default=True)
@click.option("--max-calls", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--methods", default="embayes,oracle,snver,meta", show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
def roc(preset, pi1_values, a_values, pools, pool_size, error_rate, n_sites,
        replications, max_calls, seed, methods, out):
    """Sweep top-k call sets and tabulate FDR/sensitivity ROC points."""
    design = _design(pools, pool_size, error_rate)
    grid = _parse_grid(preset, pi1_values, a_values)
    if max_calls <= 0:
        raise click.UsageError("--max-calls must be positive")
    try:
        curves = evaluation.run_roc(
            grid, design, p=n_sites, replications=replications,
            max_calls=max_calls, methods=_parse_methods(methods), seed=seed,
        )
    except EstimationError as exc:
        _fail(str(exc))
    with open(out, "w", encoding="utf-8", newline="") as handle:
        evaluation.write_roc_table(curves, handle)
    click.echo(f"wrote {out}", err=True)


if __name__ == "__main__":
    main()
