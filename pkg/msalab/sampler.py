# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import math
import re

import numpy as np
from scipy import stats

from msalab.errors import DiscontinuousLawError
from msalab.faces import WeightedComplex, binomial

logger = logging.getLogger(__name__)

# Below this density present faces are found by geometric skipping.
SPARSE_THRESHOLD = 0.1


class Seed:
    """A run seed plus a replication index.

    Every consumer of randomness draws from its own named substream, derived
    as SeedSequence(seed, spawn_key=(index, stream)), so adding draws to one
    stream never shifts another.
    """

    STREAMS = {"faces": 0, "weights": 1, "noise": 2, "order": 3, "shadow": 4}

    def __init__(self, seed, index=0):
        seed, index = int(seed), int(index)
        if not 0 <= seed < 2 ** 64:
            raise ValueError(f"Seed must be a 64-bit unsigned integer, got {seed}")
        if index < 0:
            raise ValueError(f"Replication index must be nonnegative, got {index}")
        self.seed = seed
        self.index = index

    @classmethod
    def coerce(cls, seed):
        return seed if isinstance(seed, Seed) else cls(seed)

    def replication(self, index):
        return Seed(self.seed, index)

    def sequence(self, stream):
        return np.random.SeedSequence(
            self.seed, spawn_key=(self.index, self.STREAMS[stream])
        )

    def generator(self, stream):
        return np.random.default_rng(self.sequence(stream))

    def to_dict(self):
        return {"seed": self.seed, "index": self.index}

    def __eq__(self, other):
        return isinstance(other, Seed) and (self.seed, self.index) == (
            other.seed,
            other.index,
        )

    def __hash__(self):
        return hash((self.seed, self.index))

    def __repr__(self):
        return f"Seed({self.seed}, {self.index})"


class WeightLaw:
    name = None
    continuous = True
    default_ceiling = math.inf

    def cdf(self, x):
        raise NotImplementedError("The law must define a CDF")

    def sample(self, rng, size):
        raise NotImplementedError("The law must define a sampler")

    def __repr__(self):
        return self.name


class UniformLaw(WeightLaw):
    name = "uniform01"
    default_ceiling = 1.0

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)

    def sample(self, rng, size):
        return rng.random(size)


class ExponentialLaw(WeightLaw):
    def __init__(self, rate):
        rate = float(rate)
        if not rate > 0 or math.isinf(rate):
            raise ValueError(f"Exponential rate must be positive, got {rate}")
        self.rate = rate
        self.name = f"exp:{rate!r}"
        self._dist = stats.expon(scale=1.0 / rate)

    def cdf(self, x):
        return self._dist.cdf(x)

    def sample(self, rng, size):
        return rng.exponential(1.0 / self.rate, size)


class TableLaw(WeightLaw):
    """CDF given by (x, F) points, linearly interpolated.

    A repeated x with two different F values, or an atom at either end of the
    table, makes the law discontinuous.
    """

    def __init__(self, xs, fs, name="table"):
        xs = np.asarray(xs, dtype=np.float64)
        fs = np.asarray(fs, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 2:
            raise ValueError("A CDF table needs at least two (x, F) rows")
        if np.any(~np.isfinite(xs)) or np.any(~np.isfinite(fs)):
            raise ValueError("CDF table entries must be finite")
        if np.any(np.diff(xs) < 0) or np.any(np.diff(fs) < 0):
            raise ValueError("CDF table must be nondecreasing in x and F")
        if fs[0] < 0 or fs[-1] > 1:
            raise ValueError("CDF values must lie in [0, 1]")

        jumps = (np.diff(xs) == 0) & (np.diff(fs) > 0)
        self.continuous = bool(fs[0] == 0 and fs[-1] == 1 and not jumps.any())
        self.xs = xs
        self.fs = fs
        self.name = name

    @classmethod
    def from_csv(cls, path):
        table = np.genfromtxt(path, delimiter=",", names=True, dtype=np.float64)
        if "x" not in table.dtype.names or "F" not in table.dtype.names:
            raise ValueError(f"{path} needs an 'x,F' header")
        return cls(table["x"], table["F"], name=f"table:{path}")

    def cdf(self, x):
        return np.interp(x, self.xs, self.fs, left=0.0, right=1.0)

    def sample(self, rng, size):
        return np.interp(rng.random(size), self.fs, self.xs)


UNIFORM = UniformLaw()


def parse_law(spec):
    """uniform01, exp:LAMBDA or table:PATH."""
    if isinstance(spec, WeightLaw):
        return spec
    if spec is None or spec == "uniform01":
        return UNIFORM
    if spec.startswith("exp:"):
        try:
            rate = float(spec[4:])
        except ValueError:
            raise ValueError(f"Invalid exponential rate in {spec!r}")
        return ExponentialLaw(rate)
    if spec.startswith("table:"):
        return TableLaw.from_csv(spec[6:])

    raise ValueError(f"Unknown weight law {spec!r}")


def _check_parameters(n, d, p):
    if d < 1:
        raise ValueError(f"Dimension must be at least 1, got {d}")
    if n <= d:
        raise ValueError(f"Need n > d, got n={n}, d={d}")
    if not 0 <= p <= 1:
        raise ValueError(f"Probability must lie in [0, 1], got {p}")


def _geometric_ranks(rng, total, p):
    found = []
    position = -1
    chunk = max(16, int(1.2 * p * total) + 16)
    while True:
        gaps = rng.geometric(p, chunk)
        positions = position + np.cumsum(gaps)
        inside = positions[positions < total]
        found.append(inside)
        if inside.size < positions.size:
            break
        position = int(positions[-1])
    return np.concatenate(found).astype(np.int64)


def sample_Y(n, d, p, seed):
    """Ranks of the d-faces of a Linial-Meshulam complex Y_d(n, p), sorted."""
    _check_parameters(n, d, p)
    total = binomial(n, d + 1)
    rng = Seed.coerce(seed).generator("faces")

    if p == 0:
        return np.zeros(0, dtype=np.int64)
    if p > SPARSE_THRESHOLD:
        return np.flatnonzero(rng.random(total) < p).astype(np.int64)
    return _geometric_ranks(rng, total, p)


def augmented_complex(n, d, p, seed, law=UNIFORM, ceiling=None):
    """Y_d(n, p) with i.i.d. weights from `law` on its faces.

    Faces not sampled sit at the ceiling: 1 for uniform weights, +inf (absent)
    for other laws unless a ceiling is given.
    """
    law = parse_law(law)
    if not law.continuous:
        raise DiscontinuousLawError(f"Weight law {law} is not continuous")

    seed = Seed.coerce(seed)
    ranks = sample_Y(n, d, p, seed)
    weights = law.sample(seed.generator("weights"), ranks.size)
    if ceiling is None:
        ceiling = law.default_ceiling

    return WeightedComplex(
        n,
        d,
        ranks,
        weights,
        weight_floor=0.0 if isinstance(law, UniformLaw) else -math.inf,
        weight_ceiling=ceiling,
    )


def weighted_linial_meshulam(n, d, p, seed, law=UNIFORM):
    """Weighted Y(n, p): faces not sampled are missing, so an MSA may not exist."""
    return augmented_complex(n, d, p, seed, law=law, ceiling=math.inf)


_POWER_RE = re.compile(
    r"^(?:(?P<coef>[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*\*\s*)?n\s*(?:\^|\*\*)\s*"
    r"(?P<exp>[-+]?[0-9.]+)$"
)


class NoiseSpec:
    """Bounded noise: every draw lies in [-a(n), a(n)].

    mode "uniform" draws i.i.d. uniform noise per face; mode "shift" moves every
    face by one common uniform draw.
    """

    MODES = ("uniform", "shift")

    def __init__(self, coefficient=0.0, exponent=0.0, mode="uniform"):
        if coefficient < 0:
            raise ValueError(f"Noise amplitude must be nonnegative, got {coefficient}")
        if mode not in self.MODES:
            raise ValueError(
                f"Unknown noise mode {mode!r}, expected one of {self.MODES}"
            )
        self.coefficient = float(coefficient)
        self.exponent = float(exponent)
        self.mode = mode

    @classmethod
    def parse(cls, expr, mode="uniform"):
        """Parse "C", "n^-k", "n**-k" or "C*n^-k"."""
        expr = str(expr).replace(" ", "")
        match = _POWER_RE.match(expr)
        if match:
            coef = match.group("coef")
            return cls(float(coef) if coef else 1.0, float(match.group("exp")), mode)
        try:
            return cls(float(expr), 0.0, mode)
        except ValueError:
            raise ValueError(f"Cannot parse noise amplitude {expr!r}")

    def amplitude(self, n):
        return self.coefficient * float(n) ** self.exponent

    def draw(self, rng, size, n):
        a = self.amplitude(n)
        if a == 0 or size == 0:
            return np.zeros(size)
        if self.mode == "shift":
            return np.full(size, rng.uniform(-a, a))
        return rng.uniform(-a, a, size)

    def __repr__(self):
        return f"NoiseSpec({self.coefficient}*n^{self.exponent}, {self.mode})"


def perturb(complex_, noise, seed):
    """Add bounded noise to the stored d-face weights.

    Returns the perturbed complex and the realized sup-norm of the noise. The
    perturbed complex has floor -inf and ceiling +inf; an all-zero draw returns
    the input unchanged.
    """
    eps = noise.draw(Seed.coerce(seed).generator("noise"), len(complex_), complex_.n)
    norm = float(np.max(np.abs(eps))) if eps.size else 0.0
    assert norm <= noise.amplitude(complex_.n), "Noise exceeded its amplitude"

    if norm == 0:
        return complex_, 0.0

    logger.debug(f"Perturbing {len(complex_)} faces, realized sup-norm {norm}")
    return (
        WeightedComplex(
            complex_.n,
            complex_.d,
            complex_.ranks,
            complex_.weights + eps,
            weight_floor=-math.inf,
            weight_ceiling=math.inf,
        ),
        norm,
    )
