from __future__ import annotations

import numpy as np
import pytest

from app.services.federation.sampling import (
    client_selection_masses,
    local_d2_masses,
    local_uniform_masses,
)


def test_client_masses_are_normalised():
    np.testing.assert_allclose(client_selection_masses([1, 3]), [0.25, 0.75])


def test_client_with_zero_potential_gets_zero_mass():
    masses = client_selection_masses([0.0, 25.0])

    assert masses.tolist() == [0.0, 1.0]


@pytest.mark.parametrize("values", [[0.0, 0.0], []])
def test_client_masses_need_positive_total(values):
    with pytest.raises(ValueError):
        client_selection_masses(values)


def test_local_d2_masses_use_the_closest_centroid():
    points = np.array([[0.0, 0.0], [0.3, 0.0], [0.4, 0.0]])

    masses = local_d2_masses(points, np.array([[0.0, 0.0]]))

    np.testing.assert_allclose(masses, [0.0, 0.09, 0.16])
    np.testing.assert_allclose(masses / masses.sum(), [0.0, 9 / 25, 16 / 25])


def test_local_uniform_masses():
    assert local_uniform_masses(3).tolist() == [1.0, 1.0, 1.0]
