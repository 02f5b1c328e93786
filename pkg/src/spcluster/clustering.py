"""Attractor-based clustering of S-P charts, its cost functions, and the
random-restart trial driver.

One run: pick M representative rows at random, store them in the network
by correlation learning, relax every student row to a fixed point, and
group students that share a terminal fixed point.  A clustering is scored
by ``f1`` (deviation of cluster sizes from uniform) and ``f2`` (worst
per-cluster average caution index); the driver repeats runs under a
counter-based seeding scheme so results are independent of execution
order and worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import hopfield, spchart
from .spchart import SPChart

WORKERS_ENV_VAR = "SPCLUSTER_WORKERS"


class ClusteringError(ValueError):
    pass


class MTooLarge(ClusteringError):
    def __init__(self, m: int, limit: int) -> None:
        super().__init__(f"cannot select {m} representatives from {limit} students")


class EmptyClustering(ClusteringError):
    def __init__(self) -> None:
        super().__init__("clustering has no clusters")


class ConvergenceFailure(RuntimeError):
    def __init__(self, student_index: int) -> None:
        self.student_index = student_index
        super().__init__(f"student row {student_index} exhausted the sweep budget")


class AllTrialsFailed(RuntimeError):
    def __init__(self, trials: int, first_error: str) -> None:
        super().__init__(f"all {trials} trials failed; first error: {first_error}")


@dataclass(frozen=True)
class Cluster:
    """One cluster: member row indices, the binary image of the fixed point
    the members fell into (None for the score baseline), and the average
    caution index of the members against the cluster's own rates."""

    member_indices: tuple[int, ...]
    fixed_point: tuple[int, ...] | None
    gamma: float

    @property
    def size(self) -> int:
        return len(self.member_indices)


@dataclass(frozen=True, eq=False)
class Clustering:
    """A partition of a chart's students into non-empty clusters."""

    clusters: tuple[Cluster, ...]
    chart: SPChart
    representatives: tuple[int, ...]

    def sizes(self) -> list[int]:
        return [c.size for c in self.clusters]


@dataclass(frozen=True)
class TrialSummary:
    trial_index: int
    seed: int
    f1: float
    f2: float
    n_clusters: int
    error: str | None = None


@dataclass(frozen=True, eq=False)
class TrialReport:
    clustering: Clustering
    f1: float
    f2: float
    seed: int
    trial_index: int
    sweeps_histogram: dict[int, int]


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Derive trial t's seed from (master_seed, t); order-independent."""
    seq = np.random.SeedSequence((master_seed, trial_index))
    return int(seq.generate_state(1, np.uint64)[0])


def select_representatives(chart: SPChart, m: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Draw m distinct student indices uniformly without replacement."""
    if m < 1:
        raise ClusteringError("need at least one representative")
    if m > chart.num_students:
        raise MTooLarge(m, chart.num_students)
    return tuple(int(i) for i in rng.choice(chart.num_students, size=m, replace=False))


def _cluster_gamma(bits: np.ndarray) -> float:
    mu = bits.mean(axis=0)
    return float(np.abs(bits - mu).mean())


def _group_by_fixed_point(chart: SPChart, terminal: np.ndarray) -> tuple[Cluster, ...]:
    # clusters appear in order of first discovery over student index
    groups: dict[bytes, list[int]] = {}
    keys: dict[bytes, tuple[int, ...]] = {}
    for i, row in enumerate(terminal):
        k = row.tobytes()
        groups.setdefault(k, []).append(i)
        if k not in keys:
            keys[k] = tuple(int(v) for v in hopfield.binary_from_bipolar(row))
    clusters = []
    for k, members in groups.items():
        sub = chart.bits[members]
        clusters.append(
            Cluster(
                member_indices=tuple(members),
                fixed_point=keys[k],
                gamma=_cluster_gamma(sub),
            )
        )
    return tuple(clusters)


def _cluster_with_sweeps(
    chart: SPChart, rep_indices, max_sweeps: int = hopfield.DEFAULT_MAX_SWEEPS
) -> tuple[Clustering, np.ndarray]:
    reps = tuple(int(i) for i in rep_indices)
    for i in reps:
        if not 0 <= i < chart.num_students:
            raise ClusteringError(f"representative index {i} out of range")
    w = hopfield.hebbian_learn(chart.bits[list(reps)])
    states = hopfield.bipolar_from_binary(chart.bits)
    terminal, sweeps, converged = hopfield.converge_many(states, w, max_sweeps)
    if not converged.all():
        raise ConvergenceFailure(int(np.flatnonzero(~converged)[0]))
    clusters = _group_by_fixed_point(chart, terminal)
    return Clustering(clusters, chart, reps), sweeps


def rnn_cluster(chart: SPChart, rep_indices) -> Clustering:
    """Cluster students by the fixed point their row relaxes to.

    Deterministic given the chart and representative indices; the number
    of clusters never exceeds the number of fixed points of the learned
    network.
    """
    clustering, _ = _cluster_with_sweeps(chart, rep_indices)
    return clustering


def f1(clustering: Clustering, m: int) -> float:
    """Normalized shortfall of the m-th largest cluster from size L/m.

    0 when the m-th largest cluster hits the uniform size exactly, 1 when
    fewer than m clusters exist.  Always in [0, 1].
    """
    if m < 1:
        raise ClusteringError("m must be at least 1")
    desired = clustering.chart.num_students / m
    sizes = sorted(clustering.sizes(), reverse=True)
    mth = sizes[m - 1] if len(sizes) >= m else 0
    return (desired - mth) / desired


def f2(clustering: Clustering) -> float:
    """Worst (largest) per-cluster average caution index."""
    if not clustering.clusters:
        raise EmptyClustering()
    return max(c.gamma for c in clustering.clusters)


def score_baseline(chart: SPChart, m: int) -> Clustering:
    """Split students into m contiguous groups of near-equal size by score.

    Students are ordered by total score descending (ties keep original
    order); the first L mod m groups take one extra student.  Clusters
    carry no fixed point.
    """
    if m < 1:
        raise ClusteringError("need at least one cluster")
    L = chart.num_students
    if m > L:
        raise MTooLarge(m, L)
    order = np.argsort(-chart.bits.sum(axis=1), kind="stable")
    base, extra = divmod(L, m)
    clusters = []
    at = 0
    for g in range(m):
        size = base + (1 if g < extra else 0)
        members = tuple(int(i) for i in order[at : at + size])
        at += size
        clusters.append(
            Cluster(
                member_indices=members,
                fixed_point=None,
                gamma=_cluster_gamma(chart.bits[list(members)]),
            )
        )
    return Clustering(tuple(clusters), chart, ())


def _run_one_trial(chart: SPChart, m: int, master_seed: int, t: int) -> TrialSummary:
    seed = trial_seed(master_seed, t)
    try:
        rng = np.random.default_rng(seed)
        reps = select_representatives(chart, m, rng)
        clustering = rnn_cluster(chart, reps)
        return TrialSummary(
            trial_index=t,
            seed=seed,
            f1=f1(clustering, m),
            f2=f2(clustering),
            n_clusters=len(clustering.clusters),
        )
    except Exception as exc:  # recorded, never aborts the whole run
        return TrialSummary(trial_index=t, seed=seed, f1=1.0, f2=1.0, n_clusters=0, error=str(exc))


def _trial_chunk(args) -> list[TrialSummary]:
    chart, m, master_seed, lo, hi = args
    return [_run_one_trial(chart, m, master_seed, t) for t in range(lo, hi)]


def workers_from_env() -> int:
    """Worker count from the SPCLUSTER_WORKERS variable (default 1)."""
    raw = os.environ.get(WORKERS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        count = 0
    if count < 1:
        raise ValueError(f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}")
    return count


def run_trials(
    chart: SPChart,
    m: int,
    trials: int,
    master_seed: int,
    *,
    workers: int | None = None,
    objective: str = "f2",
) -> tuple[TrialReport, list[TrialSummary]]:
    """Run independent clustering trials and return the best one.

    Trial t is seeded from (master_seed, t), so the outcome is identical
    for any worker count or execution order.  The best trial minimizes f2
    with f1 as tie-break (or the reverse with ``objective="f1"``), then
    the lowest trial index.  Per-trial failures are recorded in the
    summaries; the run only fails if every trial does.
    """
    if trials < 1:
        raise ClusteringError("need at least one trial")
    if m < 1:
        raise ClusteringError("need at least one cluster")
    if m > chart.num_students:
        raise MTooLarge(m, chart.num_students)
    if objective not in ("f2", "f1"):
        raise ClusteringError(f"unknown objective {objective!r}")

    if workers is None:
        workers = 1
    if workers <= 1 or trials == 1:
        summaries = _trial_chunk((chart, m, master_seed, 0, trials))
    else:
        bounds = np.linspace(0, trials, workers + 1, dtype=int)
        jobs = [
            (chart, m, master_seed, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            summaries = [s for part in pool.map(_trial_chunk, jobs) for s in part]

    ok = [s for s in summaries if s.error is None]
    if not ok:
        raise AllTrialsFailed(trials, summaries[0].error or "unknown")
    if objective == "f2":
        best_summary = min(ok, key=lambda s: (s.f2, s.f1, s.trial_index))
    else:
        best_summary = min(ok, key=lambda s: (s.f1, s.f2, s.trial_index))

    # rebuild the winning trial in full, including convergence statistics
    rng = np.random.default_rng(best_summary.seed)
    reps = select_representatives(chart, m, rng)
    clustering, sweeps = _cluster_with_sweeps(chart, reps)
    values, counts = np.unique(sweeps, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    report = TrialReport(
        clustering=clustering,
        f1=best_summary.f1,
        f2=best_summary.f2,
        seed=best_summary.seed,
        trial_index=best_summary.trial_index,
        sweeps_histogram=histogram,
    )
    return report, summaries
