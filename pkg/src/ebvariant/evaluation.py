"""Scoring of call sets against latent truth, replication aggregation,
ROC sweeps, gold-standard FDR, and the simulation benchmark harness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import baselines, calling, model, moments
from .simulation import LatentTruth, SimulationSpec, simulate
from .types import CallSet, Hyperparameters, PoolDesign

METHODS = ("embayes", "oracle", "snver", "meta")

# (pi1, a) grid of the standard benchmark preset
TABLE1_GRID = [
    (0.01, 0.01), (0.01, 0.02),
    (0.007, 0.01), (0.007, 0.02),
    (0.004, 0.01), (0.004, 0.02),
    (0.001, 0.01), (0.001, 0.02),
]


@dataclass(frozen=True)
class ReplicationCounts:
    """Confusion counts of one call set against one truth."""

    rejections: int      # R
    false_rejections: int  # V
    acceptances: int     # A
    false_acceptances: int  # U
    n_nonnull: int
    n_sites: int


@dataclass(frozen=True)
class EvaluationReport:
    """Averages over replications; fdr is the mean of per-replication V/(R or 1)."""

    er: float
    ev: float
    fdr: float
    fnr: float
    sensitivity: float
    replications: int


@dataclass(frozen=True)
class RocCurve:
    """FDR/sensitivity at each top-k cutoff, averaged over replications."""

    k: np.ndarray
    fdr: np.ndarray
    sensitivity: np.ndarray


@dataclass(frozen=True)
class GoldStandardReport:
    """Calls checked against a partial external truth; fdr is None when no
    call overlaps the gold set."""

    tp: int
    fp: int
    other: int
    fdr: float | None


def score_callset(calls: CallSet, truth: LatentTruth) -> ReplicationCounts:
    """Exact confusion counts for one replication."""
    mu = np.asarray(truth.mu, dtype=bool)
    if calls.decisions.shape != mu.shape:
        raise ValueError(
            f"calls cover {calls.decisions.size} sites, truth covers {mu.size}"
        )
    rejected = calls.decisions
    r = int(rejected.sum())
    v = int((rejected & ~mu).sum())
    a = mu.size - r
    u = int((~rejected & mu).sum())
    return ReplicationCounts(
        rejections=r,
        false_rejections=v,
        acceptances=a,
        false_acceptances=u,
        n_nonnull=int(mu.sum()),
        n_sites=mu.size,
    )


def aggregate_replications(counts: Sequence[ReplicationCounts]) -> EvaluationReport:
    """Average confusion counts; FDR/FNR are means of per-replication ratios."""
    if len(counts) == 0:
        raise ValueError("need at least one replication")
    er = float(np.mean([c.rejections for c in counts]))
    ev = float(np.mean([c.false_rejections for c in counts]))
    fdr = float(np.mean([c.false_rejections / max(c.rejections, 1) for c in counts]))
    fnr = float(np.mean([c.false_acceptances / max(c.acceptances, 1) for c in counts]))
    sens = float(
        np.mean(
            [
                (c.rejections - c.false_rejections) / max(c.n_nonnull, 1)
                for c in counts
            ]
        )
    )
    return EvaluationReport(
        er=er, ev=ev, fdr=fdr, fnr=fnr, sensitivity=sens, replications=len(counts)
    )


def roc_from_scores(
    scores: Sequence[np.ndarray] | np.ndarray,
    truth: Sequence[LatentTruth] | LatentTruth,
    max_calls: int,
) -> RocCurve:
    """Sweep top-k call sets (ascending score = strongest first) for
    k = 1..max_calls, averaging FDR and sensitivity over replications.

    Accepts a single replication or aligned sequences of replications.
    """
    if max_calls <= 0:
        raise ValueError(f"max_calls must be positive, got {max_calls}")
    if isinstance(scores, np.ndarray):
        scores = [scores]
        truth = [truth]
    if len(scores) != len(truth):
        raise ValueError("scores and truth replication counts differ")
    kmax = min(max_calls, min(s.size for s in scores))
    fdr_sum = np.zeros(kmax)
    sens_sum = np.zeros(kmax)
    ks = np.arange(1, kmax + 1)
    for s, t in zip(scores, truth):
        mu = np.asarray(t.mu, dtype=bool)
        if s.size != mu.size:
            raise ValueError("scores and truth must be aligned")
        order = np.argsort(s, kind="stable")
        top_null = ~mu[order[:kmax]]
        fp = np.cumsum(top_null)
        tp = ks - fp
        fdr_sum += fp / ks
        sens_sum += tp / max(int(mu.sum()), 1)
    n = len(scores)
    return RocCurve(k=ks, fdr=fdr_sum / n, sensitivity=sens_sum / n)


def sensitivity_at_fdr(curve: RocCurve, fdr_level: float) -> float:
    """Highest sensitivity among sweep points whose averaged FDR <= level."""
    ok = curve.fdr <= fdr_level
    if not ok.any():
        return 0.0
    return float(curve.sensitivity[ok].max())


def gold_standard_fdr(
    calls: CallSet, site_ids: Sequence[str], gold: Mapping[str, bool]
) -> GoldStandardReport:
    """FP/(TP+FP) over the calls with known gold genotypes.

    Calls absent from ``gold`` are counted as "other" and excluded from
    the denominator; with no overlap at all the FDR is reported as None.
    """
    if len(site_ids) != calls.decisions.size:
        raise ValueError("site_ids and calls must be aligned")
    tp = fp = other = 0
    for i in np.nonzero(calls.decisions)[0]:
        known = gold.get(site_ids[i])
        if known is None:
            other += 1
        elif known:
            tp += 1
        else:
            fp += 1
    fdr = fp / (tp + fp) if (tp + fp) > 0 else None
    return GoldStandardReport(tp=tp, fp=fp, other=other, fdr=fdr)


# ---------------------------------------------------------------------------
# benchmark harness


@dataclass(frozen=True)
class BenchmarkRow:
    pi1: float
    a: float
    p: int
    method: str
    report: EvaluationReport


def _method_callset(method, data, design, alpha, truth_hyper, backend):
    if method == "embayes":
        return calling.call_pipeline(data, design, alpha, mode="empirical", backend=backend)
    if method == "oracle":
        return calling.call_pipeline(
            data, design, alpha, mode="oracle", hyper=truth_hyper, backend=backend
        )
    if method == "snver":
        return baselines.snver_call(data, design, alpha)
    if method == "meta":
        return baselines.meta_call(data, design, alpha)
    raise ValueError(f"unknown method {method!r}")


def _method_scores(method, data, design, truth_hyper, backend):
    if method == "embayes":
        est = moments.estimate_from_data(data, design)
        return model.batch_local_fdr(data, design, est.hyper, backend=backend)
    if method == "oracle":
        return model.batch_local_fdr(data, design, truth_hyper, backend=backend)
    if method == "snver":
        return baselines.snver_pvalues(data, design)
    if method == "meta":
        return baselines.meta_pvalues(data, design)
    raise ValueError(f"unknown method {method!r}")


def run_benchmark(
    grid: Sequence[tuple[float, float]],
    design: PoolDesign,
    p: int,
    replications: int,
    alpha: float = 0.05,
    methods: Sequence[str] = METHODS,
    seed: int = 0,
    coverage_mean: float = 30.0,
    coverage_shape: float = 3.0,
    backend: str | None = None,
) -> list[BenchmarkRow]:
    """ER/EV/FDR per method per (pi1, a) grid cell, averaged over replications.

    Replications run serially; determinism does not depend on thread count.
    """
    rows: list[BenchmarkRow] = []
    for cell_idx, (pi1, a) in enumerate(grid):
        spec = SimulationSpec(
            p=p,
            design=design,
            pi1=pi1,
            a=a,
            coverage_mean=coverage_mean,
            coverage_shape=coverage_shape,
            seed=seed + cell_idx,
            replications=replications,
        )
        truth_hyper = Hyperparameters.from_pi1(pi1, a)
        per_method: dict[str, list[ReplicationCounts]] = {m: [] for m in methods}
        for rep in range(replications):
            data, truth = simulate(spec, replication=rep)
            for m in methods:
                calls = _method_callset(m, data, design, alpha, truth_hyper, backend)
                per_method[m].append(score_callset(calls, truth))
        for m in methods:
            rows.append(
                BenchmarkRow(
                    pi1=pi1, a=a, p=p, method=m,
                    report=aggregate_replications(per_method[m]),
                )
            )
    return rows


def run_roc(
    grid: Sequence[tuple[float, float]],
    design: PoolDesign,
    p: int,
    replications: int,
    max_calls: int = 10000,
    methods: Sequence[str] = METHODS,
    seed: int = 0,
    coverage_mean: float = 30.0,
    coverage_shape: float = 3.0,
    backend: str | None = None,
) -> dict[tuple[float, float], dict[str, RocCurve]]:
    """Replication-averaged ROC sweep per method per grid cell."""
    out: dict[tuple[float, float], dict[str, RocCurve]] = {}
    for cell_idx, (pi1, a) in enumerate(grid):
        spec = SimulationSpec(
            p=p,
            design=design,
            pi1=pi1,
            a=a,
            coverage_mean=coverage_mean,
            coverage_shape=coverage_shape,
            seed=seed + cell_idx,
            replications=replications,
        )
        truth_hyper = Hyperparameters.from_pi1(pi1, a)
        scores: dict[str, list[np.ndarray]] = {m: [] for m in methods}
        truths: list[LatentTruth] = []
        for rep in range(replications):
            data, truth = simulate(spec, replication=rep)
            truths.append(truth)
            for m in methods:
                scores[m].append(_method_scores(m, data, design, truth_hyper, backend))
        out[(pi1, a)] = {
            m: roc_from_scores(scores[m], truths, max_calls) for m in methods
        }
    return out


def write_benchmark_table(rows: Sequence[BenchmarkRow], stream) -> None:
    """Tab-separated benchmark table, one row per (cell, method)."""
    stream.write("#format=ebvariant.v1\n#type=benchmark\n")
    stream.write("pi1\ta\tp\tmethod\treplications\tER\tEV\tFDR\tFNR\tsensitivity\n")
    for row in rows:
        r = row.report
        stream.write(
            f"{row.pi1:g}\t{row.a:g}\t{row.p}\t{row.method}\t{r.replications}\t"
            f"{r.er:.6g}\t{r.ev:.6g}\t{r.fdr:.6g}\t{r.fnr:.6g}\t{r.sensitivity:.6g}\n"
        )


def write_roc_table(
    curves: dict[tuple[float, float], dict[str, RocCurve]], stream
) -> None:
    """Tab-separated ROC points: one row per (cell, method, k)."""
    stream.write("#format=ebvariant.v1\n#type=roc\n")
    stream.write("pi1\ta\tmethod\tk\tfdr\tsensitivity\n")
    for (pi1, a), per_method in curves.items():
        for method, curve in per_method.items():
            for k, fdr, sens in zip(curve.k, curve.fdr, curve.sensitivity):
                stream.write(
                    f"{pi1:g}\t{a:g}\t{method}\t{k}\t{fdr:.6g}\t{sens:.6g}\n"
                )
