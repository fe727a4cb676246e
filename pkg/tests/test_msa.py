# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import math

import numpy as np
import pytest

from msalab.faces import binomial, face_rank
from msalab.msa import (
    ExistenceEvent,
    betti,
    betti_curve,
    kruskal_msa,
    nearest_face_distances,
    persistence_deaths,
    shadow,
)
from msalab.sampler import Seed, augmented_complex, weighted_linial_meshulam

FIELDS = ["gf2", "gfp:3", "rational"]


def test_triangle_msa(triangle):
    msa = kruskal_msa(triangle)
    assert msa.exists
    assert msa.ranks == [0, 1]
    assert msa.weights == [0.1, 0.2]
    assert msa.total_weight == pytest.approx(0.3)
    assert not ExistenceEvent.from_msa(msa)


def test_triangle_deaths(triangle):
    deaths = persistence_deaths(triangle)
    assert deaths.finite == [0.1, 0.2]
    assert deaths.at_ceiling == 0
    assert deaths.essential == 0
    assert len(deaths) == 2


@pytest.mark.parametrize(
    "threshold, dim, expected",
    [(0.05, 0, 2), (0.15, 0, 1), (0.2, 0, 0), (0.25, 1, 0), (0.3, 1, 1)],
)
def test_triangle_betti(triangle, threshold, dim, expected):
    assert betti(triangle, threshold, dim) == expected


def test_betti_rejects_other_dimensions(triangle):
    with pytest.raises(ValueError):
        betti(triangle, 0.5, 2)


def test_msa_of_a_path_fills_from_the_ceiling(make_complex):
    complex_ = make_complex(4, 1, {(0, 1): 0.4, (1, 2): 0.2})
    msa = kruskal_msa(complex_)
    assert msa.exists
    # the third spanning edge is the lowest ranked absent edge reaching vertex 3
    assert msa.faces == [
        (face_rank((1, 2), 4), 0.2),
        (face_rank((0, 1), 4), 0.4),
        (face_rank((0, 3), 4), 1.0),
    ]
    deaths = persistence_deaths(complex_)
    assert deaths.finite == [0.2, 0.4]
    assert deaths.at_ceiling == 1
    assert deaths.as_multiset() == [0.2, 0.4, 1.0]


def test_no_msa_without_ceiling():
    complex_ = weighted_linial_meshulam(6, 2, 0.0, 1)
    msa = kruskal_msa(complex_)
    assert not msa.exists
    assert len(msa) == 0
    assert ExistenceEvent.from_msa(msa)
    deaths = persistence_deaths(complex_)
    assert deaths.essential == binomial(5, 2)


@pytest.mark.parametrize("field", FIELDS)
@pytest.mark.parametrize("n, d, p", [(7, 1, 0.6), (7, 2, 0.8), (6, 3, 1.0)])
def test_msa_has_acycle_size_and_equals_deaths(field, n, d, p):
    complex_ = augmented_complex(n, d, p, Seed(3, n + d))
    msa = kruskal_msa(complex_, field)
    assert msa.exists
    assert len(msa) == binomial(n - 1, d)
    assert sorted(msa.weights) == persistence_deaths(complex_, field).as_multiset()


def test_betti_counts_msa_faces_above_threshold():
    complex_ = augmented_complex(8, 2, 0.7, Seed(12))
    weights = np.array(kruskal_msa(complex_).weights)
    thresholds = np.linspace(0.0, 0.99, 23)
    curve = betti_curve(complex_, thresholds)
    for r, value in zip(thresholds, curve.tolist()):
        assert value == int(np.sum(weights > r))
        assert value == betti(complex_, r, 1)


def test_betti_curve_is_nonincreasing():
    complex_ = augmented_complex(7, 2, 1.0, Seed(5))
    curve = betti_curve(complex_, np.linspace(0, 1, 30))
    assert np.all(np.diff(curve) <= 0)
    assert curve[-1] == 0


def test_path_shadow(make_complex):
    complex_ = make_complex(3, 1, {(0, 1): 0.1, (1, 2): 0.2})
    report = shadow(complex_, 0.5)
    assert report.faces == [face_rank((0, 2), 3)]
    assert report.count == 1
    assert report.density == pytest.approx(1 / 3)


def test_single_edge_shadow_is_empty(make_complex):
    complex_ = make_complex(3, 1, {(0, 1): 0.1})
    report = shadow(complex_, 0.5)
    assert report.faces == []
    assert report.density == 0.0


def test_faces_rejected_by_kruskal_are_in_the_shadow():
    complex_ = augmented_complex(6, 2, 1.0, Seed(9))
    kept = set(kruskal_msa(complex_).ranks)
    for weight, rank in complex_.filtration():
        report = shadow(complex_, (weight, rank))
        assert (rank in report.faces) == (rank not in kept)


def test_shadow_grows_with_threshold():
    complex_ = augmented_complex(7, 2, 1.0, Seed(4))
    thresholds = [0.1, 0.2, 0.35, 0.5, 0.8]
    for low, high in zip(thresholds, thresholds[1:]):
        entered = {r for w, r in complex_.filtration() if low <= w < high}
        before = set(shadow(complex_, low).faces)
        after = set(shadow(complex_, high).faces)
        assert before <= after | entered


def test_sampled_shadow_is_reproducible():
    complex_ = augmented_complex(8, 2, 1.0, Seed(2))
    a = shadow(complex_, 0.3, mode="sampled", k=500, seed=Seed(2))
    b = shadow(complex_, 0.3, mode="sampled", k=500, seed=Seed(2))
    exact = shadow(complex_, 0.3)
    assert a == b
    assert set(a.faces) <= set(exact.faces)
    assert 0 <= a.density <= 1
    assert abs(a.density - exact.density) < 5 * max(a.stderr, 0.01)


@pytest.mark.parametrize("mode, k", [("sampled", None), ("sampled", 0), ("approx", 5)])
def test_shadow_rejects_bad_modes(triangle, mode, k):
    with pytest.raises(ValueError):
        shadow(triangle, 0.5, mode=mode, k=k)


def test_nearest_face_distances(triangle):
    assert nearest_face_distances(triangle).tolist() == [0.1, 0.1, 0.2]


def test_nearest_face_of_isolated_vertex(make_complex):
    complex_ = make_complex(4, 1, {(0, 1): 0.3}, weight_ceiling=math.inf)
    assert nearest_face_distances(complex_).tolist() == [0.3, 0.3, math.inf, math.inf]
