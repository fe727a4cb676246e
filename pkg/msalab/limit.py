# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from msalab.utils import get_quad_tolerance

logger = logging.getLogger(__name__)

# The root of the threshold equation is searched on (TINY, 1 - EDGE).
TINY = 1e-300
EDGE = 1e-3
ROOT_XTOL = 1e-15
# scipy refuses rtol below 4 * machine epsilon
ROOT_RTOL = 4 * np.finfo(float).eps
DENSITY_CUTOFF = 1e-14
GRID_POINTS = 512


def threshold_equation(t, d):
    return (d + 1) * (1 - t) + (1 + d * t) * math.log(t)


@lru_cache(maxsize=None)
def compute_t_star_c_star(d):
    """(t_*, c_*) for dimension d; (1, 1) when d = 1."""
    if d < 1:
        raise ValueError(f"Dimension must be at least 1, got {d}")
    if d == 1:
        return 1.0, 1.0

    t_star = optimize.bisect(
        threshold_equation, TINY, 1 - EDGE, args=(d,), xtol=ROOT_XTOL, rtol=ROOT_RTOL
    )
    c_star = -math.log(t_star) / (1 - t_star) ** d
    logger.debug(f"d={d}: t_*={t_star!r}, c_*={c_star!r}")
    return t_star, c_star


def _psi_of_u(u, d):
    # psi(t) = -ln t / (1 - t)^d written in u = -ln t
    return u / (-math.expm1(-u)) ** d


class LimitLaw:
    """Limit law of the rescaled MSA weights in dimension d.

    mu has density (1 - s(x)) / (d + 1) on [0, inf) and tail h(c). t(c) is
    found by bisection in u = -ln t; a grid of (c, u) pairs built once at
    construction narrows every later bisection to one grid cell.
    """

    def __init__(self, d, quad_tol=None):
        self.d = int(d)
        self.t_star, self.c_star = compute_t_star_c_star(self.d)
        self.quad_tol = get_quad_tolerance() if quad_tol is None else float(quad_tol)
        self._u_star = -math.log(self.t_star)

        self.truncation = self._find_truncation()

        grid_c = np.linspace(self.c_star, self.truncation, GRID_POINTS)
        grid_u = np.empty_like(grid_c)
        lo = self._u_floor()
        for i, c in enumerate(grid_c):
            grid_u[i] = self._solve_u(c, lo, max(c, lo))
            lo = grid_u[i]
        grid_c.flags.writeable = False
        grid_u.flags.writeable = False
        self._grid_c = grid_c
        self._grid_u = grid_u

    def _u_floor(self):
        return max(self._u_star, 1e-12)

    def _solve_u(self, c, lo, hi):
        d = self.d
        if _psi_of_u(lo, d) >= c:
            return lo
        return optimize.bisect(lambda u: _psi_of_u(u, d) - c, lo, hi, xtol=ROOT_XTOL)

    def _find_truncation(self):
        x = max(2 * self.c_star, 8.0)
        while True:
            u = self._solve_u(x, self._u_floor(), x)
            if -math.expm1((self.d + 1) * math.log1p(-math.exp(-u))) / (
                self.d + 1
            ) < DENSITY_CUTOFF:
                return x
            x += 4.0

    def psi(self, t):
        if not 0 < t < 1:
            raise ValueError(f"psi is defined on (0, 1), got {t}")
        return -math.log(t) / (1 - t) ** self.d

    def t_of_c(self, c):
        """Smallest root of t = exp(-c (1 - t)^d), for c >= c_*."""
        if c < self.c_star:
            raise ValueError(f"t(c) needs c >= c_* = {self.c_star}, got {c}")
        if c == self.c_star:
            return self.t_star

        grid_c, grid_u = self._grid_c, self._grid_u
        i = int(np.searchsorted(grid_c, c, side="right"))
        if i >= grid_c.size:
            lo, hi = float(grid_u[-1]), c
        else:
            lo = float(grid_u[i - 1])
            hi = min(float(grid_u[i]) * (1 + 1e-9) + 1e-12, c)
        return math.exp(-self._solve_u(c, lo, hi))

    def _one_minus_s(self, t):
        # 1 - (1 - t)^{d+1} without cancellation for small t
        return -math.expm1((self.d + 1) * math.log1p(-t))

    def s_of_x(self, x):
        if x <= self.c_star:
            return 0.0
        return (1 - self.t_of_c(x)) ** (self.d + 1)

    def mu_density(self, x):
        if x < 0:
            return 0.0
        if x <= self.c_star:
            return 1.0 / (self.d + 1)
        return self._one_minus_s(self.t_of_c(x)) / (self.d + 1)

    def g(self, c):
        if c <= self.c_star:
            return 0.0
        t = self.t_of_c(c)
        d = self.d
        return c * t * (1 - t) ** d + c / (d + 1) * (1 - t) ** (d + 1) - (1 - t)

    def mu_tail(self, c):
        """mu(c, inf) in closed form, h(c) = g(c) + 1 - c / (d + 1)."""
        if c <= 0:
            return 1.0
        d = self.d
        if c <= self.c_star:
            return 1 - c / (d + 1)
        t = self.t_of_c(c)
        # same as g(c) + 1 - c/(d+1), regrouped so large c does not cancel
        return t + c * t * (1 - t) ** d - c / (d + 1) * self._one_minus_s(t)

    h = mu_tail

    def h_prime(self, c):
        """Derivative of h; the right derivative at c_*."""
        if c < self.c_star:
            return -1.0 / (self.d + 1)
        return -self._one_minus_s(self.t_of_c(c)) / (self.d + 1)

    def mu_cdf(self, x):
        if x < 0:
            return 0.0
        return 1.0 - self.mu_tail(x)

    def mu_quantile(self, q):
        if not 0 <= q <= 1:
            raise ValueError(f"Quantile level must lie in [0, 1], got {q}")
        if q == 0:
            return 0.0
        if q == 1:
            return math.inf
        hi = self.truncation
        while self.mu_cdf(hi) < q:
            hi *= 2
        return optimize.bisect(lambda x: self.mu_cdf(x) - q, 0.0, hi, xtol=1e-13)

    def _quad(self, func, a, b):
        if b <= a:
            return 0.0
        value, _ = integrate.quad(
            func, a, b, epsabs=1e-13, epsrel=self.quad_tol, limit=200
        )
        return value

    def mu_tail_numeric(self, c):
        """mu(c, inf) by quadrature of the density, split at c_*."""
        c = max(c, 0.0)
        lower = self._quad(self.mu_density, c, self.c_star)
        upper = self._quad(self.mu_density, max(c, self.c_star), self.truncation)
        return lower + upper

    def mu_moment(self, alpha):
        """Integral of x^alpha against mu, truncated where the density drops
        below DENSITY_CUTOFF."""
        if not alpha > 0:
            raise ValueError(f"Moment order must be positive, got {alpha}")
        c_star, d = self.c_star, self.d
        below = c_star ** (alpha + 1) / ((alpha + 1) * (d + 1))
        above = self._quad(
            lambda x: x ** alpha * self.mu_density(x), c_star, self.truncation
        )
        return below + above

    QUANTITIES = ("density", "tail", "cdf", "t", "s", "g", "h_prime")

    def evaluate(self, what, x):
        """Evaluate a named quantity at x: density, tail, cdf, t, s, g, h_prime."""
        functions = {
            "density": self.mu_density,
            "tail": self.mu_tail,
            "cdf": self.mu_cdf,
            "t": self.t_of_c,
            "s": self.s_of_x,
            "g": self.g,
            "h_prime": self.h_prime,
        }
        if what not in functions:
            raise ValueError(f"Unknown quantity {what!r}, expected {self.QUANTITIES}")
        return functions[what](x)

    def __repr__(self):
        return f"LimitLaw(d={self.d}, t_star={self.t_star}, c_star={self.c_star})"


@lru_cache(maxsize=8)
def get_limit_law(d):
    return LimitLaw(d)


def t_of_c(c, law):
    return law.t_of_c(c)


def s_of_x(x, law):
    return law.s_of_x(x)


def mu_density(x, law):
    return law.mu_density(x)


def mu_tail(c, law):
    return law.mu_tail(c)


def mu_moment(alpha, law):
    return law.mu_moment(alpha)
