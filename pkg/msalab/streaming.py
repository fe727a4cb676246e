# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import math

from msalab.errors import DoubleRevealError
from msalab.faces import WeightedComplex, binomial
from msalab.limit import get_limit_law
from msalab.linalg import ReductionState, SparseColumn, get_field
from msalab.msa import kruskal_msa
from msalab.sampler import Seed

logger = logging.getLogger(__name__)

C1_CHOICES = ("caption", "text")


class StreamState:
    """MSA of the complex in which revealed faces carry their weights and
    every other face sits at weight 1."""

    def __init__(self, n, d, faces, field="gf2", seed=None):
        self.n = n
        self.d = d
        self.field = get_field(field)
        self.seed = seed
        self.faces = list(faces)
        self.revealed = {}
        self.history = [self.total_weight]
        self._columns = {}

    @property
    def k(self):
        return len(self.revealed)

    @property
    def total_weight(self):
        return math.fsum(weight for _, weight in self.faces)

    @property
    def ranks(self):
        return sorted(rank for rank, _ in self.faces)

    def column(self, rank):
        column = self._columns.get(rank)
        if column is None:
            column = SparseColumn.from_face(rank, self.n, self.d, self.field)
            self._columns[rank] = column
        return column

    def as_complex(self):
        """The partially revealed complex."""
        ranks = sorted(self.revealed)
        return WeightedComplex(
            self.n,
            self.d,
            ranks,
            [self.revealed[r] for r in ranks],
            weight_floor=0.0,
            weight_ceiling=1.0,
        )


def stream_init(n, d, seed=None, field="gf2"):
    """Start from the MSA of the all-ones complex: the first C(n-1, d)
    independent faces in rank order."""
    empty = WeightedComplex(n, d, [], [], weight_floor=0.0, weight_ceiling=1.0)
    msa = kruskal_msa(empty, field)
    assert msa.exists, "The full complex always has a spanning acycle"
    return StreamState(n, d, msa.faces, field=field, seed=seed)


def reveal(state, face, weight):
    """Reveal one face weight and update the MSA in place.

    The new MSA is the minimum base of old MSA plus the revealed face.
    """
    face = int(face)
    if face in state.revealed:
        raise DoubleRevealError(f"Face {face} was already revealed")
    if not 0 <= face < binomial(state.n, state.d + 1):
        raise ValueError(f"Face rank {face} out of range")
    if not 0 <= weight < 1:
        raise ValueError(f"Revealed weights must lie in [0, 1), got {weight}")

    previous = state.total_weight
    candidates = [(w, r) for r, w in state.faces if r != face]
    candidates.append((float(weight), face))
    candidates.sort()

    target = binomial(state.n - 1, state.d)
    reduction = ReductionState(state.field)
    kept = []
    for w, r in candidates:
        if reduction.absorb(state.column(r)).independent:
            kept.append((r, w))
            if len(kept) == target:
                break

    assert len(kept) == target, "A spanning acycle must survive every reveal"
    state.faces = kept
    state.revealed[face] = float(weight)
    state.history.append(state.total_weight)
    assert state.total_weight <= previous + 1e-12, "Total weight cannot increase"
    return state


def conjecture_curve(k, n, d, law=None):
    """C(n, d+1) times the first moment of the limit law, over k."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    law = get_limit_law(d) if law is None else law
    return binomial(n, d + 1) * law.mu_moment(1) / k


def c1_constant(n, d, choice="caption"):
    if choice == "caption":
        return n / binomial(n - 1, d)
    if choice == "text":
        return n / binomial(n, d - 1)
    raise ValueError(f"Unknown c1 choice {choice!r}, expected one of {C1_CHOICES}")


def run_stream(n, d, seed, order="random", c1="caption", field="gf2"):
    """Reveal every face once with a uniform weight; yield one row per reveal."""
    if order not in ("random", "rank"):
        raise ValueError(f"Unknown reveal order {order!r}")

    seed = Seed.coerce(seed)
    total = binomial(n, d + 1)
    weights = seed.generator("weights").random(total)
    if order == "random":
        sequence = seed.generator("order").permutation(total).tolist()
    else:
        sequence = list(range(total))

    law = get_limit_law(d)
    mu_x = law.mu_moment(1)
    scale = c1_constant(n, d, c1)

    state = stream_init(n, d, seed, field)
    for face in sequence:
        reveal(state, face, float(weights[face]))
        yield {
            "k": state.k,
            "total_weight": state.total_weight,
            "c1_scaled": scale * state.total_weight,
            "conjecture": binomial(n, d + 1) * mu_x / state.k,
            "mu_x": mu_x,
        }
