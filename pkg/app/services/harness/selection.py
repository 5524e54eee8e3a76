"""Choice of (r*, k*) from silhouette curves.

A grid point is a local maximum when its score is strictly above both grid
neighbours; the first and last points of a curve never qualify, and plateaus
are not maxima. r* is the smallest r whose curve has a local maximum and k* the
best-scoring local maximum of that curve, the lowest k on ties.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .config import Algorithm, SelectionMode
from .runner import CombinationResult

logger = logging.getLogger(__name__)

CurvePoint = tuple[int, float]


class SelectionError(RuntimeError):
    """Raised when no curve offers a local maximum; manual selection is needed."""

    def __init__(self, message: str, *, trace: Sequence[str] = ()) -> None:
        super().__init__(message)
        self.trace = tuple(trace)


@dataclass(frozen=True, slots=True)
class Selection:
    algorithm: Algorithm
    k: int
    r: int | None
    score: float | None
    mode: SelectionMode
    # Local maxima of the chosen curve as (k, score).
    candidates: tuple[CurvePoint, ...]
    trace: tuple[str, ...]


def local_maxima(curve: Sequence[CurvePoint]) -> list[CurvePoint]:
    """Strict interior local maxima of a curve already sorted by k."""
    maxima = []
    for index in range(1, len(curve) - 1):
        k, value = curve[index]
        if value > curve[index - 1][1] and value > curve[index + 1][1]:
            maxima.append((k, value))
    return maxima


def _describe(r: int | None) -> str:
    return "r=/" if r is None else f"r={r}"


def select_from_curves(
    algorithm: Algorithm,
    curves: Mapping[int | None, Sequence[CurvePoint]],
) -> Selection:
    if not curves:
        raise SelectionError(f"{algorithm.value}: no completed silhouette curve")
    trace = []
    ordered = sorted(curves.items(), key=lambda item: -1 if item[0] is None else item[0])
    for r, curve in ordered:
        points = sorted(curve)
        maxima = local_maxima(points)
        if not maxima:
            trace.append(f"{_describe(r)}: no local maximum over {len(points)} points")
            continue
        listed = ", ".join(f"k={k} ({value:.6f})" for k, value in maxima)
        trace.append(f"{_describe(r)}: local maxima {listed}")
        k_star, best = max(maxima, key=lambda item: (item[1], -item[0]))
        trace.append(f"selected {_describe(r)} k={k_star}")
        return Selection(
            algorithm=algorithm,
            k=k_star,
            r=r,
            score=best,
            mode=SelectionMode.AUTO,
            candidates=tuple(maxima),
            trace=tuple(trace),
        )
    raise SelectionError(
        f"{algorithm.value}: no silhouette curve has a local maximum; select k and r manually",
        trace=trace,
    )


def curves_for(
    results: Iterable[CombinationResult], algorithm: Algorithm
) -> dict[int | None, list[CurvePoint]]:
    curves: dict[int | None, list[CurvePoint]] = {}
    for result in results:
        if result.algorithm is not algorithm or not result.completed:
            continue
        if result.silhouette is None:
            continue
        curves.setdefault(result.r, []).append((result.k, result.silhouette))
    return curves


def select_model(results: Iterable[CombinationResult], algorithm: Algorithm) -> Selection:
    selection = select_from_curves(algorithm, curves_for(results, algorithm))
    logger.info(
        "Selected %s: %s k=%d", algorithm.value, _describe(selection.r), selection.k
    )
    return selection


def manual_selection(
    results: Iterable[CombinationResult],
    algorithm: Algorithm,
    k: int,
    r: int | None,
) -> Selection:
    if not algorithm.federated:
        r = None
    for result in results:
        if (result.algorithm, result.k, result.r) == (algorithm, k, r) and result.completed:
            return Selection(
                algorithm=algorithm,
                k=k,
                r=r,
                score=result.silhouette,
                mode=SelectionMode.MANUAL,
                candidates=(),
                trace=(f"manual {_describe(r)} k={k}",),
            )
    raise SelectionError(f"{algorithm.value}: no completed run at {_describe(r)} k={k}")
