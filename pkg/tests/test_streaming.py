# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import pytest

from msalab.errors import DoubleRevealError
from msalab.faces import binomial, face_rank
from msalab.limit import get_limit_law
from msalab.msa import kruskal_msa
from msalab.sampler import Seed
from msalab.streaming import (
    c1_constant,
    conjecture_curve,
    reveal,
    run_stream,
    stream_init,
)

ZETA_3 = 1.2020569031595942


def test_init_is_a_star():
    state = stream_init(4, 1)
    assert state.ranks == [face_rank(f, 4) for f in [(0, 1), (0, 2), (0, 3)]]
    assert state.total_weight == 3.0
    assert state.k == 0
    assert state.history == [3.0]


def test_init_has_acycle_size_in_dimension_two():
    state = stream_init(6, 2)
    assert len(state.faces) == binomial(5, 2)
    assert all(weight == 1.0 for _, weight in state.faces)


def test_reveal_exchanges_a_face():
    state = stream_init(4, 1)
    reveal(state, face_rank((1, 2), 4), 0.5)
    # 12 replaces one of 01, 02 at weight one; the ranks tie so 02 goes
    assert state.ranks == [face_rank(f, 4) for f in [(0, 1), (1, 2), (0, 3)]]
    assert state.total_weight == pytest.approx(2.5)
    assert state.k == 1


def test_reveal_rejects_repeats_and_bad_input():
    state = stream_init(5, 1)
    reveal(state, 3, 0.2)
    with pytest.raises(DoubleRevealError):
        reveal(state, 3, 0.1)
    with pytest.raises(ValueError):
        reveal(state, 4, 1.0)
    with pytest.raises(ValueError):
        reveal(state, binomial(5, 2), 0.5)
    assert state.k == 1


@pytest.mark.parametrize("n, d", [(7, 1), (7, 2)])
def test_final_state_equals_batch_msa(n, d):
    seed = Seed(8)
    weights = seed.generator("weights").random(binomial(n, d + 1))
    state = stream_init(n, d)
    for face in seed.generator("order").permutation(weights.size).tolist():
        reveal(state, face, float(weights[face]))

    batch = kruskal_msa(state.as_complex())
    assert state.ranks == sorted(batch.ranks)
    assert state.total_weight == pytest.approx(batch.total_weight, abs=1e-12)
    assert all(b <= a + 1e-12 for a, b in zip(state.history, state.history[1:]))


def test_run_stream_rows():
    rows = list(run_stream(6, 2, 3))
    assert [row["k"] for row in rows] == list(range(1, binomial(6, 3) + 1))
    mu_x = get_limit_law(2).mu_moment(1)
    assert rows[-1]["mu_x"] == pytest.approx(mu_x)
    assert rows[0]["conjecture"] == pytest.approx(binomial(6, 3) * mu_x)
    scale = c1_constant(6, 2)
    for row in rows:
        assert row["c1_scaled"] == pytest.approx(scale * row["total_weight"])


def test_run_stream_is_deterministic():
    assert list(run_stream(5, 1, 4)) == list(run_stream(5, 1, 4))
    in_rank_order = list(run_stream(5, 1, 4, order="rank"))
    assert len(in_rank_order) == binomial(5, 2)
    with pytest.raises(ValueError):
        list(run_stream(5, 1, 4, order="reverse"))


def test_conjecture_curve():
    assert conjecture_curve(10, 5, 1) == pytest.approx(ZETA_3, rel=1e-6)
    with pytest.raises(ValueError):
        conjecture_curve(0, 5, 1)


def test_c1_constant_choices():
    assert c1_constant(5, 2) == pytest.approx(5 / 6)
    assert c1_constant(5, 2, "text") == 1.0
    with pytest.raises(ValueError):
        c1_constant(5, 2, "abstract")


@pytest.mark.parametrize("n, d, seed", [(8, 1, 0), (6, 2, 1), (7, 2, 2)])
def test_every_reveal_matches_batch_msa(n, d, seed):
    seed = Seed(seed)
    total = binomial(n, d + 1)
    weights = seed.generator("weights").random(total)
    state = stream_init(n, d)
    for face in seed.generator("order").permutation(total).tolist():
        reveal(state, face, float(weights[face]))
        batch = kruskal_msa(state.as_complex())
        assert state.ranks == sorted(batch.ranks)
        assert state.total_weight == pytest.approx(batch.total_weight, abs=1e-12)
