"""Intrinsic quality metrics over ground-truth classes, and the benchmark runner.

All four metrics see the similarity matrix of a derived log and the clone
classes. Candidate and out-of-class sets always cover every activity of
the derived log, unreplaced originals included. I_nn, I_prec and I_tri
depend only on the ranking of similarities; I_comp alone reads values,
after min-max normalization of the off-diagonal cells.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ActsimError, DataError, ParameterError
from .groundtruth import BenchmarkPlan, PlanJob, enumerate_benchmark_plan, generate_ground_truth_log
from .log import EventLog
from .matrices import EmbeddingMatrix
from .pipeline import MethodConfig, build_embedding, shared_tables
from .similarity import PairwiseSimilarity, pairwise_distance_matrix


def _class_members(
    sim: PairwiseSimilarity, classes: Mapping[int, frozenset[int]]
) -> dict[int, list[int]]:
    """Validate the assignment against the matrix and index the members."""
    if not classes:
        raise ParameterError("no classes given")
    label_set = set(sim.labels)
    members: dict[int, list[int]] = {}
    for original, clones in classes.items():
        if len(clones) < 2:
            raise ParameterError(f"class of original {original} has fewer than 2 members")
        for clone in clones:
            if clone not in label_set:
                raise DataError(
                    f"class member {clone} (original {original}) has no row in the "
                    "similarity matrix; it never occurs in the derived log"
                )
        members[original] = sorted(clones)
    return members


def score_compactness(
    sim: PairwiseSimilarity, classes: Mapping[int, frozenset[int]]
) -> float:
    """Mean normalized in-class similarity (I_comp).

    Off-diagonal similarities of the full matrix are min-max scaled to
    [0, 1]; a degenerate matrix (max equals min) scales everything to 0.
    The score averages the scaled similarity over unordered in-class
    pairs, then over classes.
    """
    members = _class_members(sim, classes)
    values = sim.values
    n = values.shape[0]
    if n < 2:
        raise DataError("similarity matrix has fewer than 2 activities")
    off = ~np.eye(n, dtype=bool)
    lo = float(values[off].min())
    hi = float(values[off].max())
    span = hi - lo
    index = {aid: i for i, aid in enumerate(sim.labels)}
    per_class = []
    for clones in members.values():
        pair_scores = []
        for a, b in combinations(clones, 2):
            if span == 0.0:
                pair_scores.append(0.0)
            else:
                pair_scores.append((float(values[index[a], index[b]]) - lo) / span)
        per_class.append(sum(pair_scores) / len(pair_scores))
    return sum(per_class) / len(per_class)


def score_nearest_neighbor(
    sim: PairwiseSimilarity, classes: Mapping[int, frozenset[int]]
) -> float:
    """Fraction of members whose most similar activity is a classmate (I_nn).

    The candidate set of a member is every other activity of the derived
    log. A member succeeds only if every candidate attaining the maximum
    similarity is in its class; a tie with an outsider counts as failure.
    Fractions are averaged per class, then over classes.
    """
    members = _class_members(sim, classes)
    values = sim.values
    index = {aid: i for i, aid in enumerate(sim.labels)}
    per_class = []
    for clones in members.values():
        clone_set = set(clones)
        hits = 0
        for member in clones:
            row = values[index[member]]
            best = None
            winners: list[int] = []
            for candidate in sim.labels:
                if candidate == member:
                    continue
                s = float(row[index[candidate]])
                if best is None or s > best:
                    best = s
                    winners = [candidate]
                elif s == best:
                    winners.append(candidate)
            if winners and all(c in clone_set for c in winners):
                hits += 1
        per_class.append(hits / len(clones))
    return sum(per_class) / len(per_class)


def score_precision_at_k(
    sim: PairwiseSimilarity, classes: Mapping[int, frozenset[int]]
) -> float:
    """Precision of the top w-1 candidates (I_prec).

    For each member the k = w-1 most similar candidates are taken, ties
    broken by smallest activity id, and the in-class share among them is
    recorded; averaged per class, then over classes.
    """
    members = _class_members(sim, classes)
    values = sim.values
    index = {aid: i for i, aid in enumerate(sim.labels)}
    per_class = []
    for clones in members.values():
        clone_set = set(clones)
        k = len(clones) - 1
        precisions = []
        for member in clones:
            row = values[index[member]]
            candidates = [c for c in sim.labels if c != member]
            candidates.sort(key=lambda c: (-float(row[index[c]]), c))
            top = candidates[:k]
            precisions.append(sum(1 for c in top if c in clone_set) / k)
        per_class.append(sum(precisions) / len(precisions))
    return sum(per_class) / len(per_class)


def score_triplet(
    sim: PairwiseSimilarity, classes: Mapping[int, frozenset[int]]
) -> float:
    """Fraction of triples where classmates beat outsiders (I_tri).

    For every ordered in-class pair (a, b) and every out-of-class
    activity o, the triple succeeds when s(a, o) < s(a, b) strictly.
    Success rates are averaged per pair, per class, then over classes.
    A class covering the whole log has no outsiders and scores 1.0.
    """
    members = _class_members(sim, classes)
    values = sim.values
    index = {aid: i for i, aid in enumerate(sim.labels)}
    per_class = []
    for clones in members.values():
        clone_set = set(clones)
        outsiders = [aid for aid in sim.labels if aid not in clone_set]
        pair_scores = []
        for a, b in permutations(clones, 2):
            row = values[index[a]]
            target = float(row[index[b]])
            if outsiders:
                wins = sum(1 for o in outsiders if float(row[index[o]]) < target)
                pair_scores.append(wins / len(outsiders))
            else:
                pair_scores.append(1.0)
        per_class.append(sum(pair_scores) / len(pair_scores))
    return sum(per_class) / len(per_class)


def score_all(
    sim: PairwiseSimilarity, classes: Mapping[int, frozenset[int]]
) -> tuple[float, float, float, float]:
    """(I_comp, I_nn, I_prec, I_tri) in one call."""
    return (
        score_compactness(sim, classes),
        score_nearest_neighbor(sim, classes),
        score_precision_at_k(sim, classes),
        score_triplet(sim, classes),
    )


@dataclass(frozen=True)
class IntrinsicScores:
    """Metric values of one (job, config) combination."""

    method: str
    context: str
    weighting: str
    window: int
    r: int
    w: int
    sample: int
    i_comp: float
    i_nn: float
    i_prec: float
    i_tri: float
    log_id: str = "log"


@dataclass(frozen=True)
class FailedJob:
    """A (job, config) combination that raised; the run keeps going."""

    method: str
    context: str
    weighting: str
    window: int
    r: int
    w: int
    sample: int
    error: str
    log_id: str = "log"


def _run_job(
    log: EventLog, job: PlanJob, configs: tuple[MethodConfig, ...], log_id: str
) -> tuple[list[IntrinsicScores], list[FailedJob]]:
    scores: list[IntrinsicScores] = []
    failures: list[FailedJob] = []

    def fail(config: MethodConfig, error: Exception) -> None:
        failures.append(
            FailedJob(
                method=config.method,
                context=config.kind.value,
                weighting=config.weighting,
                window=config.window,
                r=job.r,
                w=job.w,
                sample=job.sample_index,
                error=str(error),
                log_id=log_id,
            )
        )

    try:
        gt = generate_ground_truth_log(
            log, set(job.selected), job.w, job.seed, sample_index=job.sample_index
        )
    except ActsimError as exc:
        for config in configs:
            fail(config, exc)
        return scores, failures

    tables = shared_tables(gt.log, configs)
    for config in configs:
        try:
            table = tables[(config.kind, config.window)]
            built = build_embedding(table, config)
            if isinstance(built, EmbeddingMatrix):
                sim = pairwise_distance_matrix(built)
            else:
                sim = built
            i_comp, i_nn, i_prec, i_tri = score_all(sim, gt.classes.psi)
        except ActsimError as exc:
            fail(config, exc)
            continue
        scores.append(
            IntrinsicScores(
                method=config.method,
                context=config.kind.value,
                weighting=config.weighting,
                window=config.window,
                r=job.r,
                w=job.w,
                sample=job.sample_index,
                i_comp=i_comp,
                i_nn=i_nn,
                i_prec=i_prec,
                i_tri=i_tri,
                log_id=log_id,
            )
        )
    return scores, failures


def _job_worker(args) -> tuple[list[IntrinsicScores], list[FailedJob]]:
    return _run_job(*args)


def run_intrinsic_benchmark(
    log: EventLog,
    configs: Sequence[MethodConfig],
    samples: int = 5,
    master_seed: int = 42,
    parallel: bool = False,
    log_id: str = "log",
    plan: "BenchmarkPlan | None" = None,
) -> tuple[list[IntrinsicScores], list[FailedJob]]:
    """Score every plan job under every config.

    Jobs are independent; with ``parallel`` they run in a process pool but
    results are collected in plan order, so the output is identical to a
    serial run. Per-job errors are recorded and never abort the sweep.
    """
    if not configs:
        raise ParameterError("no method configurations given")
    configs = tuple(config.validate() for config in configs)
    if plan is None:
        plan = enumerate_benchmark_plan(log, samples, master_seed)
    arguments = [(log, job, configs, log_id) for job in plan.jobs]
    if parallel and len(arguments) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_job_worker, arguments, chunksize=8))
    else:
        results = [_run_job(*args) for args in arguments]
    scores: list[IntrinsicScores] = []
    failures: list[FailedJob] = []
    for job_scores, job_failures in results:
        scores.extend(job_scores)
        failures.extend(job_failures)
    return scores, failures


@dataclass(frozen=True)
class AggregateRow:
    method: str
    context: str
    weighting: str
    window: int
    i_comp: float
    i_nn: float
    i_prec: float
    i_tri: float
    jobs_ok: int
    jobs_failed: int


@dataclass(frozen=True)
class AggregateReport:
    rows: tuple[AggregateRow, ...]


def aggregate_scores(
    scores: Sequence[IntrinsicScores], failures: Iterable[FailedJob] = ()
) -> AggregateReport:
    """Two-level mean per config: within each original log, then across logs.

    Failed jobs contribute nothing to the means; their count is reported
    next to the number of scored jobs.
    """
    if not scores:
        raise ParameterError("no scores to aggregate")

    def config_key(entry) -> tuple:
        return (entry.method, entry.context, entry.weighting, entry.window)

    by_config: dict[tuple, list[IntrinsicScores]] = {}
    for score in scores:
        by_config.setdefault(config_key(score), []).append(score)
    failed_counts: dict[tuple, int] = {}
    for failure in failures:
        failed_counts[config_key(failure)] = failed_counts.get(config_key(failure), 0) + 1

    rows = []
    for key in sorted(by_config):
        group = by_config[key]
        by_log: dict[str, list[IntrinsicScores]] = {}
        for score in group:
            by_log.setdefault(score.log_id, []).append(score)
        log_means = []
        for log_id in sorted(by_log):
            entries = by_log[log_id]
            log_means.append(
                tuple(
                    sum(getattr(e, field) for e in entries) / len(entries)
                    for field in ("i_comp", "i_nn", "i_prec", "i_tri")
                )
            )
        overall = tuple(
            sum(m[i] for m in log_means) / len(log_means) for i in range(4)
        )
        method, context, weighting, window = key
        rows.append(
            AggregateRow(
                method=method,
                context=context,
                weighting=weighting,
                window=window,
                i_comp=overall[0],
                i_nn=overall[1],
                i_prec=overall[2],
                i_tri=overall[3],
                jobs_ok=len(group),
                jobs_failed=failed_counts.get(key, 0),
            )
        )
    return AggregateReport(rows=tuple(rows))
