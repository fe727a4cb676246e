# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import json
import math
from functools import lru_cache

import jsonschema
import numpy as np

from msalab.errors import InvalidFaceError, RankOutOfRangeError

COMPLEX_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["n", "d", "faces"],
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "d": {"type": "integer", "minimum": 1},
        "weight_floor": {"type": "string"},
        "weight_ceiling": {"type": "string"},
        "faces": {
            "type": "array",
            "items": {
                "type": "array",
                "items": [{"type": "integer", "minimum": 0}, {"type": "string"}],
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}


def binomial(n, k):
    if k < 0 or n < k:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=32)
def binomial_table(n, k):
    """Table T[v, j] = C(v, j) for 0 <= v <= n, 0 <= j <= k, as int64."""
    table = np.zeros((n + 1, k + 1), dtype=np.int64)
    for v in range(n + 1):
        for j in range(min(v, k) + 1):
            table[v, j] = math.comb(v, j)
    table.flags.writeable = False
    return table


def check_face(face, n):
    face = tuple(int(v) for v in face)
    if len(face) == 0:
        raise InvalidFaceError("A face needs at least one vertex")
    if any(b <= a for a, b in zip(face, face[1:])):
        raise InvalidFaceError(f"Face {face} is not strictly increasing")
    if face[0] < 0 or face[-1] >= n:
        raise InvalidFaceError(f"Face {face} has labels outside [0, {n})")
    return face


def face_rank(face, n):
    """Colexicographic rank of a vertex subset (combinatorial number system)."""
    face = check_face(face, n)
    return sum(binomial(v, i + 1) for i, v in enumerate(face))


def face_unrank(rank, n, d):
    total = binomial(n, d + 1)
    if not 0 <= rank < total:
        raise RankOutOfRangeError(
            f"Rank {rank} outside [0, {total}) for n={n}, d={d}"
        )

    face = []
    upper = n
    for i in range(d, -1, -1):
        v = upper - 1
        while binomial(v, i + 1) > rank:
            v -= 1
        face.append(v)
        rank -= binomial(v, i + 1)
        upper = v
    return tuple(reversed(face))


def boundary(face):
    """Codimension-one faces of `face` with the sign (-1)^i of the dropped vertex."""
    face = tuple(face)
    return [
        (face[:i] + face[i + 1 :], 1 if i % 2 == 0 else -1) for i in range(len(face))
    ]


def boundary_rows(rank, n, d):
    """Boundary of the d-face with the given rank, as (row rank, sign) pairs."""
    face = face_unrank(rank, n, d)
    return [(face_rank(sub, n), sign) for sub, sign in boundary(face)]


def unrank_many(ranks, n, d):
    """Vectorized face_unrank: returns an (m, d + 1) array of sorted vertices."""
    ranks = np.asarray(ranks, dtype=np.int64).copy()
    table = binomial_table(n, d + 1)
    vertices = np.empty((ranks.shape[0], d + 1), dtype=np.int64)
    for i in range(d, -1, -1):
        column = table[:n, i + 1]
        v = np.searchsorted(column, ranks, side="right") - 1
        vertices[:, i] = v
        ranks -= column[v]
    return vertices


def rank_many(vertices):
    """Vectorized face_rank for an (m, k) array of sorted vertex rows."""
    vertices = np.asarray(vertices, dtype=np.int64)
    if vertices.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    k = vertices.shape[1]
    table = binomial_table(int(vertices.max()) + 1, k)
    ranks = np.zeros(vertices.shape[0], dtype=np.int64)
    for i in range(k):
        ranks += table[vertices[:, i], i + 1]
    return ranks


def boundary_signs(d):
    return [1 if i % 2 == 0 else -1 for i in range(d + 1)]


def boundary_row_array(ranks, n, d):
    """(m, d + 1) array whose column i holds the rank of face minus vertex i."""
    ranks = np.asarray(ranks, dtype=np.int64)
    rows = np.zeros((ranks.shape[0], d + 1), dtype=np.int64)
    if ranks.shape[0] == 0:
        return rows
    vertices = unrank_many(ranks, n, d)
    for i in range(d + 1):
        rows[:, i] = rank_many(np.delete(vertices, i, axis=1))
    return rows


def format_weight(weight):
    return repr(float(weight))


def parse_weight(text):
    value = float(text)
    if math.isnan(value):
        raise ValueError(f"Weight {text!r} is not a number")
    return value


class WeightedComplex:
    """Complete (d-1)-skeleton on n vertices plus weighted d-faces.

    Faces of dimension below d are implicit at `weight_floor`. d-faces that are
    not stored carry `weight_ceiling`; when the ceiling is +inf they are absent
    from the complex altogether.
    """

    def __init__(self, n, d, ranks, weights, weight_floor=0.0, weight_ceiling=1.0):
        if d < 1:
            raise ValueError(f"Dimension must be at least 1, got {d}")
        if n <= d:
            raise ValueError(f"Need n > d, got n={n}, d={d}")

        self.n = int(n)
        self.d = int(d)
        self.weight_floor = float(weight_floor)
        self.weight_ceiling = float(weight_ceiling)

        ranks = np.asarray(ranks, dtype=np.int64).reshape(-1)
        weights = np.asarray(weights, dtype=np.float64).reshape(-1)
        assert ranks.shape == weights.shape, "One weight per face is needed"

        order = np.argsort(ranks, kind="stable")
        ranks, weights = ranks[order], weights[order]

        if ranks.size:
            if ranks[0] < 0 or ranks[-1] >= self.num_faces:
                raise RankOutOfRangeError(
                    f"Face ranks must lie in [0, {self.num_faces})"
                )
            if np.any(np.diff(ranks) == 0):
                raise ValueError("Duplicate face ranks")
        if np.any(~np.isfinite(weights)):
            raise ValueError("Stored d-face weights must be finite")
        if np.any(weights < self.weight_floor) or np.any(
            weights > self.weight_ceiling
        ):
            raise ValueError(
                f"Weights must lie in [{self.weight_floor}, {self.weight_ceiling}]"
            )

        ranks.flags.writeable = False
        weights.flags.writeable = False
        self.ranks = ranks
        self.weights = weights
        self._present = None

    @property
    def num_faces(self):
        return binomial(self.n, self.d + 1)

    @property
    def num_rows(self):
        return binomial(self.n, self.d)

    @property
    def acycle_size(self):
        return binomial(self.n - 1, self.d)

    @property
    def present_faces(self):
        return dict(zip(self.ranks.tolist(), self.weights.tolist()))

    def __len__(self):
        return int(self.ranks.size)

    def __eq__(self, other):
        if not isinstance(other, WeightedComplex):
            return NotImplemented
        return (
            (self.n, self.d, self.weight_floor, self.weight_ceiling)
            == (other.n, other.d, other.weight_floor, other.weight_ceiling)
            and np.array_equal(self.ranks, other.ranks)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return (
            f"WeightedComplex(n={self.n}, d={self.d}, faces={len(self)}, "
            f"floor={self.weight_floor}, ceiling={self.weight_ceiling})"
        )

    def contains(self, rank):
        if self._present is None:
            self._present = set(self.ranks.tolist())
        return rank in self._present

    def weight_of(self, rank):
        i = np.searchsorted(self.ranks, rank)
        if i < self.ranks.size and self.ranks[i] == rank:
            return float(self.weights[i])
        return self.weight_ceiling

    def sorted_faces(self):
        """(weights, ranks) of stored faces below the ceiling, in filtration order."""
        order = np.lexsort((self.ranks, self.weights))
        weights, ranks = self.weights[order], self.ranks[order]
        below = weights < self.weight_ceiling
        return weights[below], ranks[below]

    def ceiling_ranks(self):
        """Ranks of the faces sitting at a finite ceiling, stored or implicit."""
        if math.isinf(self.weight_ceiling):
            return
        for rank in range(self.num_faces):
            if not self.contains(rank) or self.weight_of(rank) == self.weight_ceiling:
                yield rank

    def filtration(self):
        """Yield (weight, rank) for every d-face of the complex in filtration order.

        Ties are broken by rank. Faces at a finite ceiling come last, in rank
        order, whether stored or implicit.
        """
        weights, ranks = self.sorted_faces()
        yield from zip(weights.tolist(), ranks.tolist())
        for rank in self.ceiling_ranks():
            yield self.weight_ceiling, rank

    def absent_ranks(self):
        for rank in range(self.num_faces):
            if not self.contains(rank):
                yield rank

    def to_document(self):
        return {
            "n": self.n,
            "d": self.d,
            "weight_floor": format_weight(self.weight_floor),
            "weight_ceiling": format_weight(self.weight_ceiling),
            "faces": [
                [int(r), format_weight(w)] for r, w in zip(self.ranks, self.weights)
            ],
        }

    @classmethod
    def from_document(cls, document):
        jsonschema.validate(instance=document, schema=COMPLEX_SCHEMA)
        faces = document["faces"]
        return cls(
            document["n"],
            document["d"],
            [rank for rank, _ in faces],
            [parse_weight(weight) for _, weight in faces],
            weight_floor=parse_weight(document.get("weight_floor", "0.0")),
            weight_ceiling=parse_weight(document.get("weight_ceiling", "1.0")),
        )

    def dump(self, path):
        with open(path, "w") as f:
            json.dump(self.to_document(), f)

    @classmethod
    def load(cls, path):
        with open(path, "r") as f:
            return cls.from_document(json.load(f))
