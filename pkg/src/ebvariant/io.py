"""Tab-separated readers and writers for count tables, call sets, truth
sidecars, and gold-standard genotype maps.

Every format starts with a ``#format=ebvariant.v1`` line, then optional
``#key=value`` metadata, then a column header. Writers produce the same
bytes for the same inputs.
"""

from __future__ import annotations

import contextlib
from typing import IO, Iterator

import numpy as np

from .simulation import LatentTruth
from .types import CallSet, PoolDesign, SiteCountMatrix

FORMAT_LINE = "#format=ebvariant.v1"
COUNTS_HEADER = "site_id\tpool_id\tdepth\talt_count"


class ParseError(ValueError):
    """Malformed input file; the message names the offending line."""


@contextlib.contextmanager
def _opened(file, mode: str) -> Iterator[IO[str]]:
    if hasattr(file, "read") or hasattr(file, "write"):
        yield file
    else:
        with open(file, mode, encoding="utf-8", newline="") as handle:
            yield handle


def _split_header(handle: IO[str]):
    """Consume leading #-metadata; return (metadata dict, header line, lineno)."""
    meta: dict[str, str] = {}
    lineno = 0
    for line in handle:
        lineno += 1
        line = line.rstrip("\n")
        if line.startswith("#"):
            if "=" in line:
                key, _, value = line[1:].partition("=")
                meta[key] = value
            if lineno == 1 and line != FORMAT_LINE and line.startswith("#format="):
                raise ParseError(f"line 1: unsupported format {line[8:]!r}")
            continue
        return meta, line, lineno
    return meta, None, lineno


def read_counts(file, design: PoolDesign) -> SiteCountMatrix:
    """Parse a long-format count table into a (sites x pools) matrix.

    Sites keep their order of first appearance; (site, pool) pairs that
    never appear get depth 0 and alt count 0.
    """
    with _opened(file, "r") as handle:
        meta, header, lineno = _split_header(handle)
        if header is None:
            raise ParseError("no sites: file has no data rows")
        if header != COUNTS_HEADER:
            raise ParseError(
                f"line {lineno}: expected header {COUNTS_HEADER!r}, got {header!r}"
            )
        ids: list[str] = []
        index: dict[str, int] = {}
        rows: list[tuple[int, int, int, int]] = []
        for line in handle:
            lineno += 1
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: expected 4 columns, got {len(parts)}")
            sid = parts[0]
            try:
                pool = int(parts[1])
                depth = int(parts[2])
                alt = int(parts[3])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
            if not 1 <= pool <= design.pools:
                raise ParseError(
                    f"line {lineno}: pool_id {pool} out of range 1..{design.pools}"
                )
            if depth < 0 or alt < 0 or alt > depth:
                raise ParseError(
                    f"line {lineno}: invalid counts depth={depth} alt_count={alt} "
                    f"for site {sid!r}"
                )
            if sid not in index:
                index[sid] = len(ids)
                ids.append(sid)
            rows.append((index[sid], pool - 1, depth, alt))
        if not ids:
            raise ParseError("no sites: file has no data rows")
        depths = np.zeros((len(ids), design.pools), dtype=np.int64)
        alts = np.zeros_like(depths)
        seen = np.zeros(depths.shape, dtype=bool)
        for i, j, depth, alt in rows:
            if seen[i, j]:
                raise ParseError(
                    f"duplicate (site, pool) pair: site {ids[i]!r}, pool {j + 1}"
                )
            seen[i, j] = True
            depths[i, j] = depth
            alts[i, j] = alt
        return SiteCountMatrix(depths, alts, site_ids=ids)


def write_counts(data: SiteCountMatrix, file) -> None:
    """Write the long-format count table (all pairs, including zeros)."""
    with _opened(file, "w") as handle:
        handle.write(f"{FORMAT_LINE}\n#type=counts\n{COUNTS_HEADER}\n")
        for i in range(data.n_sites):
            sid = data.site_id(i)
            for j in range(data.n_pools):
                handle.write(
                    f"{sid}\t{j + 1}\t{data.depths[i, j]}\t{data.alt_counts[i, j]}\n"
                )


def write_calls(calls: CallSet, scores, site_ids, file) -> None:
    """Write decisions with their fdr scores (6 significant digits) and ranks."""
    scores = np.asarray(scores, dtype=np.float64)
    if len(site_ids) != calls.decisions.size or scores.size != calls.decisions.size:
        raise ValueError("site_ids, scores and calls must be aligned")
    with _opened(file, "w") as handle:
        handle.write(f"{FORMAT_LINE}\n#type=calls\n")
        if calls.alpha is not None:
            handle.write(f"#alpha={calls.alpha:g}\n")
        if calls.mode is not None:
            handle.write(f"#mode={calls.mode}\n")
        hyper = calls.hyper_used
        if hyper is not None:
            est = getattr(hyper, "hyper", hyper)
            handle.write(f"#pi0={est.pi0:.10g}\n#pi1={est.pi1:.10g}\n#a={est.a:.10g}\n")
            if hasattr(hyper, "truncated_a"):
                handle.write(f"#truncated_pi1={int(hyper.truncated_pi1)}\n")
                handle.write(f"#truncated_a={int(hyper.truncated_a)}\n")
        handle.write(f"#num_rejected={calls.num_rejected}\n")
        if calls.attained_bfdr is not None:
            handle.write(f"#attained_bfdr={calls.attained_bfdr:.6g}\n")
        handle.write("site_id\tfdr\trank\trejected\n")
        for i in range(calls.decisions.size):
            handle.write(
                f"{site_ids[i]}\t{scores[i]:.6g}\t{calls.rank[i]}\t"
                f"{int(calls.decisions[i])}\n"
            )


def read_calls(file) -> tuple[CallSet, np.ndarray, list[str], dict[str, str]]:
    """Read a calls file back: (CallSet, scores, site_ids, metadata)."""
    with _opened(file, "r") as handle:
        meta, header, lineno = _split_header(handle)
        if header != "site_id\tfdr\trank\trejected":
            raise ParseError(f"line {lineno}: not a calls file")
        ids: list[str] = []
        scores: list[float] = []
        ranks: list[int] = []
        rejected: list[bool] = []
        for line in handle:
            lineno += 1
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: expected 4 columns")
            ids.append(parts[0])
            scores.append(float(parts[1]))
            ranks.append(int(parts[2]))
            rejected.append(parts[3] == "1")
        decisions = np.array(rejected, dtype=bool)
        alpha = float(meta["alpha"]) if "alpha" in meta else None
        attained = float(meta["attained_bfdr"]) if "attained_bfdr" in meta else None
        calls = CallSet(
            decisions=decisions,
            rank=np.array(ranks, dtype=np.int64),
            attained_bfdr=attained,
            num_rejected=int(decisions.sum()),
            alpha=alpha,
            mode=meta.get("mode"),
        )
        return calls, np.array(scores), ids, meta


def write_truth(truth: LatentTruth, site_ids, file) -> None:
    """Truth sidecar: variant flag, per-pool MAFs and carrier counts."""
    mu = np.asarray(truth.mu)
    m_pools = truth.theta.shape[1]
    theta_cols = "\t".join(f"theta_{j + 1}" for j in range(m_pools))
    n_cols = "\t".join(f"n_{j + 1}" for j in range(m_pools))
    with _opened(file, "w") as handle:
        handle.write(f"{FORMAT_LINE}\n#type=truth\n")
        handle.write(f"site_id\tmu\t{theta_cols}\t{n_cols}\n")
        for i in range(mu.size):
            thetas = "\t".join(f"{t:.17g}" for t in truth.theta[i])
            ns = "\t".join(str(int(n)) for n in truth.n_alt[i])
            handle.write(f"{site_ids[i]}\t{int(mu[i])}\t{thetas}\t{ns}\n")


def read_truth(file) -> tuple[LatentTruth, list[str]]:
    with _opened(file, "r") as handle:
        _, header, lineno = _split_header(handle)
        if header is None or not header.startswith("site_id\tmu\ttheta_1"):
            raise ParseError(f"line {lineno}: not a truth file")
        m_pools = sum(1 for col in header.split("\t") if col.startswith("theta_"))
        ids: list[str] = []
        mu: list[int] = []
        theta: list[list[float]] = []
        n_alt: list[list[int]] = []
        for line in handle:
            lineno += 1
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2 + 2 * m_pools:
                raise ParseError(f"line {lineno}: expected {2 + 2 * m_pools} columns")
            ids.append(parts[0])
            mu.append(int(parts[1]))
            theta.append([float(v) for v in parts[2:2 + m_pools]])
            n_alt.append([int(v) for v in parts[2 + m_pools:]])
        truth = LatentTruth(
            mu=np.array(mu, dtype=bool),
            theta=np.array(theta, dtype=np.float64),
            n_alt=np.array(n_alt, dtype=np.int64),
        )
        return truth, ids


def read_gold(file) -> dict[str, bool]:
    """Gold-standard map: site_id -> is_variant."""
    with _opened(file, "r") as handle:
        _, header, lineno = _split_header(handle)
        if header != "site_id\tis_variant":
            raise ParseError(f"line {lineno}: expected header 'site_id\\tis_variant'")
        gold: dict[str, bool] = {}
        for line in handle:
            lineno += 1
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2 or parts[1] not in ("0", "1"):
                raise ParseError(f"line {lineno}: expected 'site_id\\t0|1'")
            gold[parts[0]] = parts[1] == "1"
        return gold


def counts_matrix_equal(a: SiteCountMatrix, b: SiteCountMatrix) -> bool:
    return bool(
        np.array_equal(a.depths, b.depths) and np.array_equal(a.alt_counts, b.alt_counts)
    )
