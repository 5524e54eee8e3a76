from __future__ import annotations

import pytest

from app.services.harness.config import Algorithm, SelectionMode
from app.services.harness.runner import COMPLETED, SKIPPED, CombinationResult
from app.services.harness.selection import (
    SelectionError,
    curves_for,
    local_maxima,
    manual_selection,
    select_from_curves,
    select_model,
)

FED = Algorithm.FED_KMEANS_FED_INIT


def _curve(values, k_min=2):
    return [(k_min + offset, value) for offset, value in enumerate(values)]


def _result(algorithm, k, r, silhouette, status=COMPLETED):
    return CombinationResult(
        algorithm=algorithm, k=k, r=r, seed=0, status=status, silhouette=silhouette
    )


def test_single_peak():
    selection = select_from_curves(FED, {0: _curve([0.2, 0.5, 0.3])})

    assert (selection.r, selection.k) == (0, 3)
    assert selection.score == 0.5
    assert selection.mode is SelectionMode.AUTO


def test_smallest_r_with_a_maximum_wins():
    selection = select_from_curves(
        FED,
        {
            0: _curve([0.1, 0.2, 0.3, 0.4]),
            5: _curve([0.1, 0.6, 0.2, 0.3]),
            10: _curve([0.1, 0.9, 0.2, 0.3]),
        },
    )

    assert (selection.r, selection.k) == (5, 3)
    assert selection.trace[0] == "r=0: no local maximum over 4 points"


def test_flat_curve_has_no_maximum():
    curves = {0: _curve([0.4, 0.4, 0.4, 0.4]), 5: _curve([0.3, 0.35, 0.5, 0.2])}

    selection = select_from_curves(FED, curves)

    assert (selection.r, selection.k) == (5, 4)


def test_best_local_maximum_lowest_k_on_ties():
    selection = select_from_curves(FED, {2: _curve([0.1, 0.5, 0.2, 0.5, 0.1])})

    assert selection.k == 3
    assert selection.candidates == ((3, 0.5), (5, 0.5))


def test_boundaries_never_qualify():
    assert local_maxima(_curve([0.9, 0.5, 0.6])) == []
    assert local_maxima(_curve([0.1, 0.2])) == []


def test_unsorted_curve_points_are_ordered_by_k():
    selection = select_from_curves(FED, {1: [(4, 0.3), (2, 0.2), (3, 0.5)]})

    assert selection.k == 3


def test_no_maximum_anywhere_raises_with_trace():
    with pytest.raises(SelectionError) as excinfo:
        select_from_curves(FED, {0: _curve([0.1, 0.2, 0.3]), 5: _curve([0.3, 0.2, 0.1])})

    assert len(excinfo.value.trace) == 2
    with pytest.raises(SelectionError):
        select_from_curves(FED, {})


def test_curves_skip_skipped_and_undefined_points():
    results = [
        _result(FED, 1, 0, None),
        _result(FED, 2, 0, 0.4),
        _result(FED, 3, 0, None, status=SKIPPED),
        _result(Algorithm.CENTRALIZED, 2, None, 0.9),
    ]

    assert curves_for(results, FED) == {0: [(2, 0.4)]}


def test_select_model_on_results():
    results = [_result(Algorithm.CENTRALIZED, k, None, s) for k, s in _curve([0.2, 0.7, 0.4])]

    selection = select_model(results, Algorithm.CENTRALIZED)

    assert (selection.k, selection.r) == (3, None)


def test_manual_selection_ignores_r_for_centralized():
    results = [_result(Algorithm.CENTRALIZED, 4, None, 0.3)]

    selection = manual_selection(results, Algorithm.CENTRALIZED, 4, 7)

    assert (selection.k, selection.r, selection.mode) == (4, None, SelectionMode.MANUAL)
    with pytest.raises(SelectionError):
        manual_selection(results, FED, 4, 0)
