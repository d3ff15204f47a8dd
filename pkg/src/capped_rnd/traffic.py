"""Capped hose demand universes: representation, strength metrics, generators.

A capped hose model is a set of per-node marginals U(i) and symmetric
per-pair peak demands U(i,j). A demand matrix D belongs to the universe iff
it is symmetric, nonnegative, zero on the diagonal, entrywise below the
peaks, and has row sums below the marginals.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

MEMBERSHIP_TOL = 1e-9

PairKey = tuple[str, str]


def pair_key(i: str, j: str) -> PairKey:
    return (i, j) if i < j else (j, i)


class CappedHoseModel:
    """Immutable marginals + peaks over a fixed node set."""

    def __init__(
        self,
        nodes: list[str] | tuple[str, ...],
        marginals: dict[str, float],
        peaks: dict[PairKey, float],
    ):
        self.nodes: tuple[str, ...] = tuple(sorted(nodes))
        node_set = set(self.nodes)
        self.marginals: dict[str, float] = {}
        for i in self.nodes:
            u = float(marginals.get(i, 0.0))
            if u < 0:
                raise ValueError(f"negative marginal for {i!r}")
            self.marginals[i] = u
        self.peaks: dict[PairKey, float] = {}
        for (i, j), u in peaks.items():
            if i == j:
                raise ValueError(f"peak on the diagonal: ({i!r},{i!r})")
            if i not in node_set or j not in node_set:
                raise ValueError(f"peak references unknown node: ({i!r},{j!r})")
            if u < 0:
                raise ValueError(f"negative peak for ({i!r},{j!r})")
            key = pair_key(i, j)
            if key in self.peaks and self.peaks[key] != float(u):
                raise ValueError(f"inconsistent symmetric peak for {key}")
            self.peaks[key] = float(u)

        self._row_sum = {i: 0.0 for i in self.nodes}
        self._max_peak = {i: 0.0 for i in self.nodes}
        for (i, j), u in self.peaks.items():
            self._row_sum[i] += u
            self._row_sum[j] += u
            if u > self._max_peak[i]:
                self._max_peak[i] = u
            if u > self._max_peak[j]:
                self._max_peak[j] = u

    def marginal(self, i: str) -> float:
        return self.marginals[i]

    def peak(self, i: str, j: str) -> float:
        return self.peaks.get(pair_key(i, j), 0.0)

    def peak_row_sum(self, i: str) -> float:
        """Sum of all peaks incident to i."""
        return self._row_sum[i]

    def max_peak(self, i: str) -> float:
        return self._max_peak[i]

    def trunc_marginal(self, i: str) -> float:
        """min(U(i), sum_j U(i,j)): the effective marginal."""
        return min(self.marginals[i], self._row_sum[i])


def marginal_strength(m: CappedHoseModel, i: str) -> float:
    """How binding U(i) is, in [0,1]; 1 at the bottom of the relevance
    interval [max_j U(i,j), sum_j U(i,j)], 0 at the top.

    A degenerate interval (at most one positive peak) counts as 0: the
    marginal adds nothing beyond the peak itself.
    """
    top = m.peak_row_sum(i)
    bottom = m.max_peak(i)
    denom = top - bottom
    if denom <= 0.0:
        return 0.0
    trunc = min(m.marginal(i), top)
    value = 1.0 - (trunc - bottom) / denom
    return min(1.0, max(0.0, value))


def peak_strength(m: CappedHoseModel, i: str, j: str) -> float:
    """How binding U(i,j) is, in [0,1]; 1 at zero peak, 0 once the peak
    saturates min(U(i),U(j)). Zero when no traffic is possible on the pair.
    """
    if i == j:
        raise ValueError("peak strength is undefined on the diagonal")
    cap = min(m.marginal(i), m.marginal(j))
    if cap <= 0.0:
        return 0.0
    trunc = min(m.peak(i, j), cap)
    return min(1.0, max(0.0, 1.0 - trunc / cap))


@dataclass(frozen=True)
class StrengthVectors:
    mu: dict[str, float]
    pi: dict[PairKey, float]
    mu_norm: float
    pi_norm: float


def strength_vectors(m: CappedHoseModel) -> StrengthVectors:
    mu = {i: marginal_strength(m, i) for i in m.nodes}
    pi = {
        (i, j): peak_strength(m, i, j)
        for i, j in itertools.combinations(m.nodes, 2)
    }
    mu_norm = math.sqrt(sum(v * v for v in mu.values()))
    pi_norm = math.sqrt(sum(v * v for v in pi.values()))
    return StrengthVectors(mu=mu, pi=pi, mu_norm=mu_norm, pi_norm=pi_norm)


def gravity_peaks(t, exponent: int = 1) -> dict[PairKey, float]:
    """Population-product peaks U(i,j) = Pop(i)*Pop(j)/distance(i,j)**exponent.

    The distance is the coordinate (geographical) distance, not the graph
    distance. exponent=2 gives the inverse-square variant.
    """
    peaks: dict[PairKey, float] = {}
    for i, j in itertools.combinations(t.node_ids, 2):
        ni, nj = t.nodes[i], t.nodes[j]
        if ni.population is None or nj.population is None:
            raise ValueError(f"node {i if ni.population is None else j!r} has no population")
        d = t.geo_distance(i, j)
        if d <= 0.0:
            raise ValueError(f"zero distance between distinct nodes {i!r},{j!r}")
        peaks[(i, j)] = ni.population * nj.population / d**exponent
    return peaks


@dataclass(frozen=True)
class SweepConfig:
    s: int
    k: int
    seed: int
    sample_count: int | None = None

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")


# Largest sigma set that gets fully enumerated when no sample_count is given.
DEFAULT_ENUMERATION_CAP = 10000

# Stream tags keep the sigma-sampling generator and the per-node marginal
# generators from ever colliding on a Philox key.
_SIGMA_STREAM = 0xFFFFFFFFFFFFFFFF


def _philox(seed: int, stream: int, index: int) -> np.random.Generator:
    entropy = np.random.SeedSequence((seed & 0xFFFFFFFFFFFFFFFF, stream, index))
    return np.random.Generator(np.random.Philox(entropy))


def sigma_vectors(cfg: SweepConfig) -> list[tuple[int, ...]]:
    """The sigma sweep: full lexicographic enumeration of {0..s}^k when small
    enough, otherwise a seeded uniform sample of sample_count vectors.
    """
    total = (cfg.s + 1) ** cfg.k
    cap = cfg.sample_count if cfg.sample_count is not None else DEFAULT_ENUMERATION_CAP
    if total <= cap:
        return list(itertools.product(range(cfg.s + 1), repeat=cfg.k))
    if cfg.sample_count is None:
        raise ValueError(
            f"(s+1)^k = {total} exceeds the enumeration cap; pass sample_count"
        )
    rng = _philox(cfg.seed, _SIGMA_STREAM, 0)
    draws = rng.integers(0, cfg.s + 1, size=(cfg.sample_count, cfg.k))
    return [tuple(int(x) for x in row) for row in draws]


def sample_marginals(
    nodes: list[str] | tuple[str, ...],
    peaks: dict[PairKey, float],
    cfg: SweepConfig,
    sigma: tuple[int, ...],
    instance_index: int = 0,
) -> dict[str, float]:
    """Instantiate marginals inside their relevance intervals.

    Each node draws one coordinate of sigma uniformly (its own Philox stream,
    keyed by (seed, instance, node rank)) and interpolates:
    U(i) = max_j U(i,j) + (sigma_drawn / s) * (sum_j U(i,j) - max_j U(i,j)).
    """
    if len(sigma) != cfg.k:
        raise ValueError(f"sigma has length {len(sigma)}, expected k={cfg.k}")
    if any(not 0 <= x <= cfg.s for x in sigma):
        raise ValueError("sigma coordinates must lie in {0..s}")
    row_sum: dict[str, float] = {i: 0.0 for i in nodes}
    max_peak: dict[str, float] = {i: 0.0 for i in nodes}
    for (i, j), u in peaks.items():
        row_sum[i] += u
        row_sum[j] += u
        max_peak[i] = max(max_peak[i], u)
        max_peak[j] = max(max_peak[j], u)

    marginals: dict[str, float] = {}
    for rank, i in enumerate(sorted(nodes)):
        rng = _philox(cfg.seed, instance_index, rank)
        coord = sigma[int(rng.integers(0, cfg.k))]
        lo, hi = max_peak[i], row_sum[i]
        marginals[i] = lo + (coord / cfg.s) * (hi - lo)
    return marginals


class DemandSeries:
    """Ordered demand snapshots over a fixed node set; entries may be
    asymmetric and default to 0."""

    def __init__(self, nodes: list[str] | tuple[str, ...], snapshots: list[dict[tuple[str, str], float]]):
        self.nodes = tuple(sorted(nodes))
        node_set = set(self.nodes)
        for t, snap in enumerate(snapshots):
            for (i, j), d in snap.items():
                if i not in node_set or j not in node_set:
                    raise ValueError(f"snapshot {t} references unknown node ({i!r},{j!r})")
                if d < 0:
                    raise ValueError(f"negative demand in snapshot {t}")
        self.snapshots = [dict(s) for s in snapshots]

    def __len__(self) -> int:
        return len(self.snapshots)


def load_demand_series(text: str, nodes: list[str] | None = None) -> DemandSeries:
    """Parse the `t,src,dst,demand` CSV form; rows in any order, missing
    pairs are 0."""
    reader = csv.DictReader(io.StringIO(text))
    expected = ["t", "src", "dst", "demand"]
    if reader.fieldnames != expected:
        raise ValueError(f"expected header {','.join(expected)}, got {reader.fieldnames}")
    by_t: dict[int, dict[tuple[str, str], float]] = {}
    seen_nodes: set[str] = set()
    for row in reader:
        t = int(row["t"])
        if t < 0:
            raise ValueError("snapshot index must be nonnegative")
        d = float(row["demand"])
        src, dst = row["src"], row["dst"]
        seen_nodes.update((src, dst))
        by_t.setdefault(t, {})[(src, dst)] = by_t.get(t, {}).get((src, dst), 0.0) + d
    if not by_t:
        raise ValueError("empty demand series")
    node_list = sorted(nodes) if nodes is not None else sorted(seen_nodes)
    snapshots = [by_t.get(t, {}) for t in sorted(by_t)]
    return DemandSeries(node_list, snapshots)


def symmetrize_snapshot(snap: dict[tuple[str, str], float]) -> dict[PairKey, float]:
    """Per-direction max: the smallest symmetric matrix dominating both
    directions of an asymmetric snapshot."""
    out: dict[PairKey, float] = {}
    for (i, j), d in snap.items():
        if i == j:
            continue
        key = pair_key(i, j)
        if d > out.get(key, 0.0):
            out[key] = d
    return out


def ingest_time_series(ds: DemandSeries, horizon: int) -> CappedHoseModel:
    """Build a capped hose model from the first `horizon` snapshots:
    peaks are entrywise maxima, marginals are max row sums, both taken on
    the symmetrized snapshots.
    """
    if not 1 <= horizon <= len(ds):
        raise ValueError(f"horizon {horizon} outside 1..{len(ds)}")
    peaks: dict[PairKey, float] = {}
    marginals: dict[str, float] = {i: 0.0 for i in ds.nodes}
    for snap in ds.snapshots[:horizon]:
        sym = symmetrize_snapshot(snap)
        row: dict[str, float] = {i: 0.0 for i in ds.nodes}
        for (i, j), d in sym.items():
            if d > peaks.get((i, j), 0.0):
                peaks[(i, j)] = d
            row[i] += d
            row[j] += d
        for i, r in row.items():
            if r > marginals[i]:
                marginals[i] = r
    return CappedHoseModel(ds.nodes, marginals, peaks)


def check_membership(m: CappedHoseModel, D: dict[tuple[str, str], float]) -> bool:
    """Whether a symmetric matrix (sparse dict form) lies in the universe,
    within MEMBERSHIP_TOL."""
    tol = MEMBERSHIP_TOL
    node_set = set(m.nodes)
    row: dict[str, float] = {i: 0.0 for i in m.nodes}
    seen: dict[PairKey, float] = {}
    for (i, j), d in D.items():
        if i not in node_set or j not in node_set:
            raise ValueError(f"entry ({i!r},{j!r}) outside the model's node set")
        if i == j:
            if abs(d) > tol:
                return False
            continue
        if d < -tol:
            return False
        key = pair_key(i, j)
        if key in seen:
            if abs(seen[key] - d) > tol:
                return False  # asymmetric
            continue
        seen[key] = d
        if d > m.peak(i, j) + tol:
            return False
        row[i] += d
        row[j] += d
    return all(row[i] <= m.marginal(i) + tol for i in m.nodes)
