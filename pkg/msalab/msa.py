# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import math
from collections import namedtuple

import numpy as np

from msalab.faces import binomial, boundary_row_array, boundary_signs
from msalab.linalg import ReductionState, SparseColumn, get_field, persistence_pairs
from msalab.sampler import Seed

logger = logging.getLogger(__name__)

CHUNK_SIZE = 4096


def filtration_columns(complex_, field="gf2"):
    """Yield (weight, rank, boundary column) for every d-face in filtration order."""
    field = get_field(field)
    n, d = complex_.n, complex_.d
    signs = boundary_signs(d)

    weights, ranks = complex_.sorted_faces()
    for start in range(0, ranks.size, CHUNK_SIZE):
        chunk = ranks[start : start + CHUNK_SIZE]
        rows = boundary_row_array(chunk, n, d).tolist()
        for weight, rank, row in zip(
            weights[start : start + CHUNK_SIZE].tolist(), chunk.tolist(), rows
        ):
            yield weight, rank, SparseColumn(zip(row, signs), field)

    for rank in complex_.ceiling_ranks():
        yield complex_.weight_ceiling, rank, SparseColumn.from_face(rank, n, d, field)


class Msa:
    """Minimal spanning acycle: kept faces as (rank, weight) in filtration order."""

    def __init__(self, faces, exists, n, d):
        self.faces = [(int(rank), float(weight)) for rank, weight in faces]
        self.exists = bool(exists)
        self.n = n
        self.d = d

    @property
    def ranks(self):
        return [rank for rank, _ in self.faces]

    @property
    def weights(self):
        return [weight for _, weight in self.faces]

    @property
    def total_weight(self):
        return math.fsum(self.weights)

    def __len__(self):
        return len(self.faces)

    def __eq__(self, other):
        return isinstance(other, Msa) and (self.faces, self.exists) == (
            other.faces,
            other.exists,
        )

    def __repr__(self):
        return f"Msa(n={self.n}, d={self.d}, faces={len(self)}, exists={self.exists})"

    def to_dict(self):
        return {
            "exists": self.exists,
            "faces": [[rank, weight] for rank, weight in self.faces],
            "total_weight": self.total_weight,
        }


class ExistenceEvent:
    """Set when beta_{d-1} of the whole complex is nonzero, i.e. no MSA exists."""

    def __init__(self, flag):
        self.flag = bool(flag)

    @classmethod
    def from_msa(cls, msa):
        return cls(not msa.exists)

    def __bool__(self):
        return self.flag

    def __repr__(self):
        return f"ExistenceEvent({self.flag})"


def kruskal_msa(complex_, field="gf2"):
    state = ReductionState(field)
    target = complex_.acycle_size
    kept = []

    for weight, rank, column in filtration_columns(complex_, state.field):
        if state.absorb(column).independent:
            kept.append((rank, weight))
            if len(kept) == target:
                break

    exists = len(kept) == target
    if not exists:
        logger.debug(f"No MSA: only {len(kept)} of {target} independent faces")
    return Msa(kept, exists, complex_.n, complex_.d)


def _check_dim(complex_, dim):
    if dim not in (complex_.d - 1, complex_.d):
        raise ValueError(
            f"Betti numbers are computed in dimensions {complex_.d - 1} and "
            f"{complex_.d}, got {dim}"
        )


def betti(complex_, threshold, dim, field="gf2"):
    """Reduced Betti number of the sub-complex of faces with weight <= threshold."""
    _check_dim(complex_, dim)
    state = ReductionState(field)
    count = 0
    for weight, _, column in filtration_columns(complex_, state.field):
        if weight > threshold:
            break
        state.absorb(column)
        count += 1

    if dim == complex_.d:
        return count - state.rank
    return complex_.acycle_size - state.rank


def betti_curve(complex_, thresholds, field="gf2"):
    """beta_{d-1} at every threshold, from a single pass over the filtration."""
    thresholds = np.asarray(thresholds, dtype=np.float64).reshape(-1)
    order = np.argsort(thresholds, kind="stable")
    top = complex_.acycle_size
    result = np.full(thresholds.size, top, dtype=np.int64)

    state = ReductionState(field)
    i = 0
    for weight, _, column in filtration_columns(complex_, state.field):
        while i < order.size and weight > thresholds[order[i]]:
            result[order[i]] = top - state.rank
            i += 1
        if i == order.size:
            return result
        state.absorb(column)
        if state.rank == top:
            break

    result[order[i:]] = top - state.rank
    return result


class DeathTimes:
    """Deaths of the (d-1)-classes of the weight filtration.

    `finite` holds deaths below the ceiling in increasing order, `at_ceiling`
    counts classes killed by faces at a finite ceiling, `essential` counts
    classes never killed.
    """

    def __init__(self, finite, at_ceiling, essential, ceiling):
        self.finite = sorted(float(w) for w in finite)
        self.at_ceiling = int(at_ceiling)
        self.essential = int(essential)
        self.ceiling = float(ceiling)

    def as_multiset(self):
        return self.finite + [self.ceiling] * self.at_ceiling

    def __len__(self):
        return len(self.finite) + self.at_ceiling

    def to_dict(self):
        return {
            "finite": self.finite,
            "at_ceiling": self.at_ceiling,
            "essential": self.essential,
            "ceiling": self.ceiling,
        }


def persistence_deaths(complex_, field="gf2"):
    total = complex_.acycle_size
    weights = []

    def columns():
        for weight, _, column in filtration_columns(complex_, field):
            weights.append(weight)
            yield column

    deaths = []
    for index, _ in persistence_pairs(columns(), field):
        deaths.append(weights[index])
        if len(deaths) == total:
            break

    ceiling = complex_.weight_ceiling
    finite = [w for w in deaths if w < ceiling]
    return DeathTimes(finite, len(deaths) - len(finite), total - len(deaths), ceiling)


ShadowReport = namedtuple(
    "ShadowReport", ["mode", "count", "density", "stderr", "threshold", "faces"]
)


def _before(weight, rank, threshold):
    if isinstance(threshold, tuple):
        return (weight, rank) < threshold
    return weight < threshold


def shadow(complex_, threshold, mode="exact", k=None, seed=0, field="gf2"):
    """Faces outside the sub-complex strictly below `threshold` whose boundary
    is dependent on it, so that adding them raises beta_d.

    `threshold` is a weight, or a (weight, rank) filtration key so that ties
    are cut exactly where Kruskal cuts them. Densities are relative to all
    C(n, d + 1) potential faces.
    """
    if mode not in ("exact", "sampled"):
        raise ValueError(f"Unknown shadow mode {mode!r}")
    if mode == "sampled" and (k is None or k < 1):
        raise ValueError(f"Sampled shadow needs k >= 1, got {k}")

    n, d = complex_.n, complex_.d
    state = ReductionState(field)
    members = set()
    for weight, rank, column in filtration_columns(complex_, state.field):
        if not _before(weight, rank, threshold):
            break
        state.absorb(column)
        members.add(rank)

    total = binomial(n, d + 1)

    def in_shadow(rank):
        if rank in members:
            return False
        return state.is_dependent(SparseColumn.from_face(rank, n, d, state.field))

    if mode == "exact":
        faces = [rank for rank in range(total) if in_shadow(rank)]
        return ShadowReport(
            "exact", len(faces), len(faces) / total, 0.0, threshold, faces
        )

    rng = Seed.coerce(seed).generator("shadow")
    draws = rng.integers(0, total, size=k).tolist()
    found = {rank for rank in set(draws) if in_shadow(rank)}
    faces = sorted(found)
    hits = sum(1 for rank in draws if rank in found)
    density = hits / k
    stderr = math.sqrt(density * (1 - density) / k)
    return ShadowReport("sampled", None, density, stderr, threshold, faces)


def nearest_face_distances(complex_):
    """C(tau) for every (d-1)-face tau, indexed by rank: the least weight of a
    coface, faces at the ceiling included."""
    distances = np.full(complex_.num_rows, complex_.weight_ceiling)
    rows = boundary_row_array(complex_.ranks, complex_.n, complex_.d)
    for i in range(complex_.d + 1):
        np.minimum.at(distances, rows[:, i], complex_.weights)
    return distances
