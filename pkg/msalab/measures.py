# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import math

import numpy as np
from scipy import integrate

from msalab.faces import binomial
from msalab.msa import DeathTimes, Msa, betti_curve
from msalab.sampler import UNIFORM, parse_law

logger = logging.getLogger(__name__)


class EmpiricalMeasure:
    """Point masses of weight 1 / normalization at the given points."""

    def __init__(self, points, normalization=1.0):
        if not normalization > 0:
            raise ValueError(f"Normalization must be positive, got {normalization}")
        self.points = np.sort(np.asarray(points, dtype=np.float64).reshape(-1))
        self.normalization = float(normalization)

    def __len__(self):
        return int(self.points.size)

    @property
    def total_mass(self):
        return len(self) / self.normalization

    def cdf(self, x):
        return np.searchsorted(self.points, x, side="right") / self.normalization

    def tail(self, c):
        return (len(self) - np.searchsorted(self.points, c, side="right")) / (
            self.normalization
        )

    def integrate(self, func):
        return math.fsum(func(x) for x in self.points.tolist()) / self.normalization

    def histogram(self, bins=50, range=None):
        counts, edges = np.histogram(self.points, bins=bins, range=range)
        return edges, counts / self.normalization

    @classmethod
    def pool(cls, measures):
        """Average of several measures, e.g. over replications."""
        measures = list(measures)
        points = np.concatenate([m.points for m in measures]) if measures else []
        normalization = math.fsum(m.normalization for m in measures) or 1.0
        return cls(points, normalization)


def bulk_measure(msa, n, p, d, law=UNIFORM, censored=False):
    """Bulk measure of n p F(w) over the MSA weights.

    Without an MSA the censored variant is the unit mass at 0.
    """
    if not msa.exists:
        if censored:
            return EmpiricalMeasure([0.0], 1.0)
        raise ValueError("The bulk measure needs an MSA; use the censored variant")
    law = parse_law(law)
    points = n * p * law.cdf(np.asarray(msa.weights))
    return EmpiricalMeasure(points, binomial(n - 1, d))


def death_bulk_measure(deaths, n, p, d, law=UNIFORM):
    """Bulk measure built from death times instead of MSA weights."""
    law = parse_law(law)
    points = n * p * law.cdf(np.asarray(deaths.as_multiset()))
    return EmpiricalMeasure(points, binomial(n - 1, d))


def kolmogorov_distance(emp, law):
    """sup_x |emp(-inf, x] - mu(-inf, x]| against the limit law, exactly."""
    m = emp.total_mass
    if len(emp) == 0:
        return 1.0

    values = np.unique(emp.points)
    below = np.searchsorted(emp.points, values, side="left") / emp.normalization
    upto = np.searchsorted(emp.points, values, side="right") / emp.normalization
    limit = np.array([law.mu_cdf(x) for x in values.tolist()])

    distance = max(np.max(np.abs(upto - limit)), np.max(np.abs(below - limit)))
    # past the last point the empirical CDF stays at m while mu climbs to 1
    return float(max(distance, abs(m - 1.0)))


def kolmogorov_between(first, second):
    """Kolmogorov distance between two empirical measures."""
    if len(first) == 0 and len(second) == 0:
        return 0.0
    values = np.unique(np.concatenate([first.points, second.points]))

    def one_sided(emp, side):
        return np.searchsorted(emp.points, values, side=side) / emp.normalization

    distance = max(
        np.max(np.abs(one_sided(first, "right") - one_sided(second, "right"))),
        np.max(np.abs(one_sided(first, "left") - one_sided(second, "left"))),
    )
    return float(max(distance, abs(first.total_mass - second.total_mass)))


def extremal_threshold(c, n, p, d):
    """Weight c(n) / p whose rescaled image is c."""
    return (c + d * math.log(n) - math.lgamma(d + 1)) / (n * p)


class ExtremalPoints:
    """Counting measure of n p F(x) - d ln n + ln d! over a set of values."""

    def __init__(self, points):
        self.points = np.sort(np.asarray(points, dtype=np.float64).reshape(-1))

    def __len__(self):
        return int(self.points.size)

    def count(self, a, b=math.inf):
        """Number of points in the open interval (a, b)."""
        lo = np.searchsorted(self.points, a, side="right")
        hi = np.searchsorted(self.points, b, side="left")
        return int(max(hi - lo, 0))

    def tail(self, c):
        return self.count(c, math.inf)


def extremal_points(source, n, p, d, law=UNIFORM):
    """Rescale MSA weights, death times or nearest face distances."""
    if isinstance(source, Msa):
        values = source.weights
    elif isinstance(source, DeathTimes):
        values = source.as_multiset()
    else:
        values = source
    law = parse_law(law)
    values = np.asarray(values, dtype=np.float64)
    return ExtremalPoints(
        n * p * law.cdf(values) - d * math.log(n) + math.lgamma(d + 1)
    )


def poisson_target(a, b, order=1):
    """(integral of e^{-x} over (a, b))^order."""
    mass = math.exp(-a) - (0.0 if math.isinf(b) else math.exp(-b))
    return mass ** order


def _falling(count, order):
    value = 1
    for j in range(order):
        value *= count - j
    return value


def _mean_and_se(values):
    values = [float(v) for v in values]
    r = len(values)
    mean = math.fsum(values) / r
    variance = math.fsum((v - mean) ** 2 for v in values) / (r - 1)
    return mean, variance, math.sqrt(variance / r)


class PoissonDiagnostics:
    """Per-interval counts of extremal points across replications.

    Counts are kept per replication so that merging two diagnostics is list
    concatenation and every summary is recomputed with compensated sums.
    """

    MAX_ORDER = 3

    def __init__(self, intervals, thresholds=()):
        self.intervals = [(float(a), float(b)) for a, b in intervals]
        self.thresholds = [float(c) for c in thresholds]
        self.counts = [[] for _ in self.intervals]
        self.discrepancies = [[] for _ in self.thresholds]

    @property
    def replications(self):
        return len(self.counts[0]) if self.counts else 0

    def add(self, points, companion=None):
        for counts, (a, b) in zip(self.counts, self.intervals):
            counts.append(points.count(a, b))
        if companion is not None:
            for values, c in zip(self.discrepancies, self.thresholds):
                values.append(abs(points.tail(c) - companion.tail(c)))

    def merge(self, other):
        assert self.intervals == other.intervals, "Intervals must match to merge"
        assert self.thresholds == other.thresholds, "Thresholds must match to merge"
        merged = PoissonDiagnostics(self.intervals, self.thresholds)
        merged.counts = [a + b for a, b in zip(self.counts, other.counts)]
        merged.discrepancies = [
            a + b for a, b in zip(self.discrepancies, other.discrepancies)
        ]
        return merged

    def summary(self):
        if self.replications < 2:
            raise ValueError(
                f"Poisson diagnostics need at least 2 replications, got "
                f"{self.replications}"
            )

        rows = []
        for (a, b), counts in zip(self.intervals, self.counts):
            mean, variance, mean_se = _mean_and_se(counts)
            row = {
                "a": a,
                "b": b,
                "mean": mean,
                "variance": variance,
                "dispersion": variance / mean if mean > 0 else math.nan,
                "target": poisson_target(a, b),
                "mean_se": mean_se,
                "factorial_moments": [],
            }
            for order in range(1, self.MAX_ORDER + 1):
                moment, _, se = _mean_and_se(_falling(c, order) for c in counts)
                target = poisson_target(a, b, order)
                row["factorial_moments"].append(
                    {
                        "order": order,
                        "value": moment,
                        "se": se,
                        "target": target,
                        "z": (moment - target) / se if se > 0 else math.nan,
                    }
                )
            rows.append(row)

        discrepancy = {
            c: math.fsum(values) / len(values)
            for c, values in zip(self.thresholds, self.discrepancies)
            if values
        }
        return {
            "replications": self.replications,
            "intervals": rows,
            "discrepancy": discrepancy,
        }


def poisson_diagnostics(replications, intervals, companions=None, thresholds=()):
    replications = list(replications)
    if len(replications) < 2:
        raise ValueError(
            f"Poisson diagnostics need at least 2 replications, got {len(replications)}"
        )
    if companions is not None:
        companions = list(companions)
        assert len(companions) == len(replications), "One companion per replication"

    diagnostics = PoissonDiagnostics(intervals, thresholds if companions else ())
    for i, points in enumerate(replications):
        diagnostics.add(points, companions[i] if companions is not None else None)
    return diagnostics


def matching_distance(first, second):
    """Bottleneck distance between two equal-size multisets on the line.

    Matching in sorted order minimises the largest displacement.
    """
    first, second = np.sort(np.asarray(first)), np.sort(np.asarray(second))
    if first.size != second.size:
        return math.inf
    if first.size == 0:
        return 0.0
    return float(np.max(np.abs(first - second)))


def stability_tolerance(weights):
    """Float slack allowed when comparing weight displacements with a noise norm.

    Adding noise to a weight and subtracting the result back each round once,
    at the scale of the largest finite weight.
    """
    weights = np.abs(np.asarray(weights, dtype=float))
    finite = weights[np.isfinite(weights)]
    scale = max(1.0, float(finite.max())) if finite.size else 1.0
    return 4 * np.finfo(float).eps * scale


def truncated_moment_gap(emp, alpha, b):
    """emp(f) - emp(f min b) for f(x) = x^alpha."""
    return emp.integrate(lambda x: max(x, 0.0) ** alpha - min(max(x, 0.0) ** alpha, b))


def betti_moment_integral(complex_, p, alpha, b, grid_size=20000, field="gf2"):
    """(alpha / C(n-1, d)) times the integral over s in [b^(1/alpha), np] of
    s^(alpha-1) beta_{d-1}(s / np), by the trapezoidal rule."""
    n, d = complex_.n, complex_.d
    top = n * p
    start = b ** (1.0 / alpha)
    if start >= top:
        return 0.0
    s = np.linspace(start, top, grid_size)
    bettis = betti_curve(complex_, s / top, field)
    values = alpha * s ** (alpha - 1) * bettis
    return float(integrate.trapezoid(values, s)) / binomial(n - 1, d)


def limit_histogram(law, edges):
    """Masses mu(e_i, e_{i+1}] of the limit law on the given bin edges."""
    tails = np.array([law.mu_tail(e) for e in np.asarray(edges).tolist()])
    return -np.diff(tails)
