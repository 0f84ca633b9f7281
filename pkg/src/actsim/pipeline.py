"""Method configurations and the extract-build-weight-compare pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence, Union

from .contexts import ContextKind, OccurrenceTable, extract_occurrences
from .errors import ParameterError
from .log import EventLog
from .matrices import EmbeddingMatrix, build_aa, build_ac
from .similarity import PairwiseSimilarity, pairwise_distance_matrix, substitution_scores
from .weighting import WEIGHTINGS, apply_weighting

METHODS = ("aa", "ac", "substitution")


@dataclass(frozen=True)
class MethodConfig:
    """One embedding variant: method x context kind x weighting x window size.

    Substitution scores are only defined over sequence contexts and raw
    counts, so any other combination is rejected.
    """

    method: str
    kind: ContextKind
    weighting: str
    window: int

    def validate(self) -> "MethodConfig":
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r} (expected one of {METHODS})")
        if self.weighting not in WEIGHTINGS:
            raise ParameterError(
                f"unknown weighting {self.weighting!r} (expected one of {WEIGHTINGS})"
            )
        if self.window < 2:
            raise ParameterError(f"window size must be at least 2, got {self.window}")
        if self.method == "substitution":
            if self.kind is not ContextKind.SEQUENCE:
                raise ParameterError("substitution requires sequence contexts")
            if self.weighting != "none":
                raise ParameterError("substitution requires weighting none")
        return self

    def describe(self) -> str:
        return f"{self.method}/{self.kind.value}/{self.weighting}/{self.window}"


def make_config(method: str, kind: "ContextKind | str", weighting: str, window: int) -> MethodConfig:
    try:
        kind = ContextKind(kind)
    except ValueError:
        raise ParameterError(f"unknown context kind {kind!r} (expected mset or seq)") from None
    return MethodConfig(method, kind, weighting, window).validate()


def expand_grid(
    methods: Iterable[str],
    kinds: Iterable["ContextKind | str"],
    weightings: Iterable[str],
    windows: Iterable[int],
) -> list[MethodConfig]:
    """Cross product of the axes, silently dropping combinations that are
    invalid for substitution (which contributes one config per window)."""
    configs: list[MethodConfig] = []
    seen: set[MethodConfig] = set()
    for method, kind, weighting, window in product(methods, kinds, weightings, windows):
        if method == "substitution":
            candidate = MethodConfig("substitution", ContextKind.SEQUENCE, "none", window)
        else:
            candidate = MethodConfig(method, ContextKind(kind), weighting, window)
        candidate.validate()
        if candidate not in seen:
            seen.add(candidate)
            configs.append(candidate)
    return configs


def build_embedding(table: OccurrenceTable, config: MethodConfig) -> Union[
    EmbeddingMatrix, PairwiseSimilarity
]:
    """Build the configured matrix from an extracted table.

    For aa/ac the result is a (possibly weighted) EmbeddingMatrix; for
    substitution the score matrix itself is the final artifact.
    """
    config.validate()
    if table.kind != config.kind or table.window_size != config.window:
        raise ParameterError(
            f"table ({table.kind.value}, n={table.window_size}) does not match "
            f"config {config.describe()}"
        )
    if config.method == "substitution":
        return substitution_scores(table)
    raw = build_aa(table) if config.method == "aa" else build_ac(table)
    return apply_weighting(raw, table, config.weighting)


def similarity_for_config(log: EventLog, config: MethodConfig) -> PairwiseSimilarity:
    """Extract, build, weight and compare in one call."""
    table = extract_occurrences(log, config.window, config.kind)
    built = build_embedding(table, config)
    if isinstance(built, PairwiseSimilarity):
        return built
    return pairwise_distance_matrix(built)


def shared_tables(
    log: EventLog, configs: Sequence[MethodConfig]
) -> dict[tuple[ContextKind, int], OccurrenceTable]:
    """One extraction per distinct (kind, window) pair used by ``configs``."""
    tables: dict[tuple[ContextKind, int], OccurrenceTable] = {}
    for config in configs:
        key = (config.kind, config.window)
        if key not in tables:
            tables[key] = extract_occurrences(log, config.window, config.kind)
    return tables
