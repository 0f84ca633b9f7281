"""Synthetic ground truth: clone-replacement logs and the benchmark plan.

A derived log replaces each selected activity with members of a pool of w
fresh activities ("<label>__1" .. "<label>__w"). Within one trace every
occurrence of a selected activity maps to the same pool member; the member
is drawn uniformly from the pool's remaining entries and removed, and the
pool is refilled once empty, which keeps usage counts within one of each
other. Mapping every clone back to its original reconstructs the input
log exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import AbstractSet, Iterable, Mapping

from itertools import combinations

from .errors import EmptyLogError, ParameterError
from .log import EventLog

_MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One round of the splitmix64 finalizer (64-bit avalanche)."""
    z = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, *words: int) -> int:
    """Derive a 64-bit seed by chaining splitmix64 over the given words."""
    state = splitmix64(master_seed & _MASK64)
    for word in words:
        state = splitmix64(state ^ (word & _MASK64))
    return state


@dataclass(frozen=True)
class ClassAssignment:
    """phi maps each clone id to its original id; psi is the inverse grouping."""

    phi: Mapping[int, int]
    psi: Mapping[int, frozenset[int]]


@dataclass(frozen=True)
class GroundTruthLog:
    """A derived log plus the class structure and the parameters that made it."""

    log: EventLog
    classes: ClassAssignment
    r: int
    w: int
    sample_index: int
    seed: int

    def restore_traces(self) -> tuple[tuple[int, ...], ...]:
        """Traces with every clone mapped back through phi."""
        phi = self.classes.phi
        return tuple(
            tuple(phi.get(aid, aid) for aid in trace) for trace in self.log.traces
        )


def generate_ground_truth_log(
    log: EventLog,
    selected: "AbstractSet[int] | Iterable[int]",
    w: int,
    seed: int,
    sample_index: int = 0,
) -> GroundTruthLog:
    """Replace each selected activity by a balanced pool of w clones.

    Parameters
    ----------
    log
        The original log; its alphabet is extended, existing ids are kept.
    selected
        Activity ids to replace; each must occur in the log.
    w
        Pool size (at least 2). Clone labels are "<label>__k" for k = 1..w.
    seed
        Seed for the per-trace uniform pool draws.

    Traces are visited in log order; within a trace, pools are consulted
    at the first occurrence of each selected activity, so the derivation
    is a pure function of (log, selected, w, seed).
    """
    selected_set = frozenset(selected)
    if not selected_set:
        raise ParameterError("no activities selected for replacement")
    if w < 2:
        raise ParameterError(f"pool size must be at least 2, got {w}")
    counts = log.activity_counts()
    for aid in sorted(selected_set):
        if not 1 <= aid <= len(log.alphabet):
            raise ParameterError(f"selected id {aid} is not in the alphabet")
        if counts[aid] == 0:
            label = log.alphabet.label_of(aid)
            raise ParameterError(f"selected activity {label!r} does not occur in the log")

    clone_labels: list[str] = []
    for aid in sorted(selected_set):
        base = log.alphabet.label_of(aid)
        for k in range(1, w + 1):
            label = f"{base}__{k}"
            if label in log.alphabet:
                raise ParameterError(f"clone label {label!r} collides with an existing activity")
            clone_labels.append(label)
    alphabet = log.alphabet.extended(clone_labels)

    phi: dict[int, int] = {}
    psi: dict[int, frozenset[int]] = {}
    clone_ids: dict[int, tuple[int, ...]] = {}
    next_id = len(log.alphabet) + 1
    for aid in sorted(selected_set):
        ids = tuple(range(next_id, next_id + w))
        next_id += w
        clone_ids[aid] = ids
        psi[aid] = frozenset(ids)
        for cid in ids:
            phi[cid] = aid

    rng = random.Random(seed)
    pools: dict[int, list[int]] = {aid: list(ids) for aid, ids in clone_ids.items()}
    traces: list[tuple[int, ...]] = []
    for trace in log.traces:
        chosen: dict[int, int] = {}
        out: list[int] = []
        for aid in trace:
            if aid in selected_set:
                clone = chosen.get(aid)
                if clone is None:
                    pool = pools[aid]
                    if not pool:
                        pool = list(clone_ids[aid])
                        pools[aid] = pool
                    clone = pool.pop(rng.randrange(len(pool)))
                    chosen[aid] = clone
                out.append(clone)
            else:
                out.append(aid)
        traces.append(tuple(out))

    derived = EventLog(tuple(traces), alphabet)
    return GroundTruthLog(
        log=derived,
        classes=ClassAssignment(phi=phi, psi=psi),
        r=len(selected_set),
        w=w,
        sample_index=sample_index,
        seed=seed,
    )


def write_classes_json(gt: GroundTruthLog, target: str | Path) -> None:
    """Export the class assignment as {clone label: original label}."""
    alphabet = gt.log.alphabet
    mapping = {
        alphabet.label_of(clone): alphabet.label_of(orig)
        for clone, orig in gt.classes.phi.items()
    }
    with open(Path(target), "w", encoding="utf-8") as handle:
        json.dump(mapping, handle, indent=2, sort_keys=True)
        handle.write("\n")


@dataclass(frozen=True)
class PlanJob:
    r: int
    w: int
    selected: tuple[int, ...]
    sample_index: int
    seed: int


@dataclass(frozen=True)
class BenchmarkPlan:
    jobs: tuple[PlanJob, ...]
    master_seed: int
    samples: int


def enumerate_benchmark_plan(log: EventLog, samples: int, master_seed: int) -> BenchmarkPlan:
    """All (r, w, subset) jobs for the intrinsic benchmark.

    r ranges 1..min(|A|, 10) over the occurring activities and w over
    {2, 3, 4, 5}. When C(|A|, r) <= samples every r-subset is enumerated
    in lexicographic id order; otherwise ``samples`` distinct subsets are
    drawn without replacement from a seed derived for that (r, w) cell.
    Per-job seeds chain (master_seed, r, w, sample_index) through
    splitmix64 and are kept pairwise distinct.
    """
    if log.is_empty:
        raise EmptyLogError("empty log: nothing to plan")
    if samples < 1:
        raise ParameterError(f"samples must be at least 1, got {samples}")
    activities = sorted(log.activity_counts())
    jobs: list[PlanJob] = []
    used_seeds: set[int] = set()
    for r in range(1, min(len(activities), 10) + 1):
        for w in (2, 3, 4, 5):
            if comb(len(activities), r) <= samples:
                subsets = [tuple(c) for c in combinations(activities, r)]
            else:
                rng = random.Random(mix_seed(master_seed, r, w))
                picked: set[tuple[int, ...]] = set()
                subsets = []
                while len(subsets) < samples:
                    candidate = tuple(sorted(rng.sample(activities, r)))
                    if candidate not in picked:
                        picked.add(candidate)
                        subsets.append(candidate)
            for sample_index, subset in enumerate(subsets):
                seed = mix_seed(master_seed, r, w, sample_index)
                while seed in used_seeds:  # astronomically rare; keeps seeds distinct
                    seed = splitmix64(seed)
                used_seeds.add(seed)
                jobs.append(PlanJob(r, w, subset, sample_index, seed))
    return BenchmarkPlan(tuple(jobs), master_seed, samples)
