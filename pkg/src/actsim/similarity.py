"""Pairwise similarities: cosine over embedding rows, substitution scores over AA counts."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import sparse

from .contexts import ContextKind, OccurrenceTable
from .errors import ParameterError
from .log import Alphabet
from .matrices import EmbeddingMatrix, Provenance, build_aa


@dataclass(frozen=True, eq=False)
class PairwiseSimilarity:
    """Square symmetric similarity matrix over occurring activities.

    ``flavor`` is "cosine" (values in [-1, 1], distances are 1 - s) or
    "substitution" (log-ratio scores used directly as similarities).
    """

    labels: tuple[int, ...]
    values: np.ndarray
    flavor: str
    provenance: Provenance

    def index_of(self, activity_id: int) -> int:
        try:
            return self.labels.index(activity_id)
        except ValueError:
            raise ParameterError(f"activity id {activity_id} has no row") from None

    def similarity(self, a: int, b: int) -> float:
        return float(self.values[self.index_of(a), self.index_of(b)])

    def distance_matrix(self) -> np.ndarray:
        if self.flavor != "cosine":
            raise ParameterError("distances are defined for the cosine flavor only")
        return 1.0 - self.values


def cosine_distance(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine distance 1 - (u.v)/(|u||v|) with the zero-vector convention.

    Exactly one all-zero vector gives distance 1; two all-zero vectors
    give distance 0. Vectors must have equal positive length and finite
    entries.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or v.ndim != 1 or u.shape != v.shape or u.size == 0:
        raise ParameterError(
            f"expected two equal-length non-empty vectors, got shapes {u.shape} and {v.shape}"
        )
    if not (np.isfinite(u).all() and np.isfinite(v).all()):
        raise ParameterError("vectors must be finite")
    nu = math.sqrt(float(u @ u))
    nv = math.sqrt(float(v @ v))
    if nu == 0.0 and nv == 0.0:
        return 0.0
    if nu == 0.0 or nv == 0.0:
        return 1.0
    s = float(u @ v) / (nu * nv)
    return 1.0 - max(-1.0, min(1.0, s))


def pairwise_distance_matrix(matrix: EmbeddingMatrix) -> PairwiseSimilarity:
    """All-pairs cosine similarities of the embedding rows.

    The Gram matrix is computed once in float64. Rows with an exact
    Cauchy-Schwarz equality (G(a,b)^2 = G(a,a) G(b,b), proportional rows)
    are snapped to s = +/-1 so identical rows get distance 0.0 exactly;
    zero rows follow the cosine_distance convention.
    """
    values = matrix.values
    if sparse.issparse(values):
        gram = (values.astype(np.float64) @ values.T.astype(np.float64)).toarray()
    else:
        dense = values.astype(np.float64)
        gram = dense @ dense.T
    diag = np.diag(gram).copy()
    norms = np.sqrt(diag)
    outer = np.outer(norms, norms)
    with np.errstate(divide="ignore", invalid="ignore"):
        sims = np.where(outer > 0.0, gram / np.where(outer > 0.0, outer, 1.0), 0.0)
    exact = (gram * gram == np.outer(diag, diag)) & (outer > 0.0)
    sims[exact] = np.sign(gram[exact])
    zero = norms == 0.0
    sims[np.ix_(zero, zero)] = 1.0
    np.clip(sims, -1.0, 1.0, out=sims)
    np.fill_diagonal(sims, 1.0)
    return PairwiseSimilarity(
        labels=matrix.row_labels,
        values=sims,
        flavor="cosine",
        provenance=matrix.provenance,
    )


def substitution_scores(table: OccurrenceTable) -> PairwiseSimilarity:
    """Log-odds substitution scores from sequence-context AA counts.

    SS(a, b) = ln((AA(a,b)/N) / (2 p(a) p(b))) for a != b and
    ln((AA(a,a)/N) / (p(a)^2)) on the diagonal; cells with AA(a,b) = 0
    score 0. Requires a sequence-kind table.
    """
    if table.kind is not ContextKind.SEQUENCE:
        raise ParameterError("substitution scores are defined over sequence contexts only")
    aa = build_aa(table)
    counts = aa.values.astype(np.float64)
    totals = np.array([table.activity_totals[a] for a in aa.row_labels], dtype=np.float64)
    n = float(table.total_events)
    denom = np.outer(totals, totals) * 2.0
    np.fill_diagonal(denom, (totals * totals))
    scores = np.zeros_like(counts)
    mask = counts > 0
    scores[mask] = np.log(counts[mask] * n / denom[mask])
    return PairwiseSimilarity(
        labels=aa.row_labels,
        values=scores,
        flavor="substitution",
        provenance=Provenance("substitution", table.kind, table.window_size, "none"),
    )


def write_distance_csv(
    sim: PairwiseSimilarity, alphabet: Alphabet, target: str | Path
) -> None:
    """Write the square matrix plus a ``<name>.meta.json`` sidecar.

    Cosine flavor writes distances (1 - s); substitution flavor writes
    the raw scores. The sidecar records the flavor and provenance so a
    reader never has to guess what the numbers mean.
    """
    path = Path(target)
    cells = sim.distance_matrix() if sim.flavor == "cosine" else sim.values
    labels = [alphabet.label_of(aid) for aid in sim.labels]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["activity"] + labels)
        for i, label in enumerate(labels):
            writer.writerow([label] + [format(v, ".17g") for v in cells[i]])
    meta = {
        "schema": 1,
        "flavor": sim.flavor,
        "cells": "distance" if sim.flavor == "cosine" else "score",
        "method": sim.provenance.method,
        "context": sim.provenance.kind.value,
        "weighting": sim.provenance.weighting,
        "window": sim.provenance.window_size,
        "activities": labels,
    }
    meta_path = path.with_name(path.stem + ".meta.json")
    with open(meta_path, "w", encoding="utf-8") as handle:
        json.dump(meta, handle, indent=2, sort_keys=True)
        handle.write("\n")
