# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import numpy as np

from msalab.experiment import Experiment, mean_and_se
from msalab.measures import (
    betti_moment_integral,
    bulk_measure,
    extremal_points,
    extremal_threshold,
    truncated_moment_gap,
)
from msalab.msa import betti_curve, kruskal_msa, nearest_face_distances
from msalab.sampler import augmented_complex


class CorollaryExperiment(Experiment):
    """Finite-n moment identities.

    For every replication the truncated moment gap mu_{n,p}(f) - mu_{n,p}(f min b),
    f(x) = x^alpha, is computed directly and as an integral of beta_{d-1}
    against alpha s^(alpha-1); alongside, the extremal count identities are
    checked exactly at a few levels c.
    """

    name = "corollary"

    def __init__(
        self,
        n,
        d,
        alphas=(1.0, 2.0),
        b=1.0,
        grid_size=20000,
        levels=(-1.0, 0.0, 1.0),
        **kwargs,
    ):
        super().__init__(n, d, **kwargs)
        if b <= 0:
            raise ValueError(f"Truncation level must be positive, got {b}")
        self.alphas = tuple(float(a) for a in alphas)
        self.b = float(b)
        self.grid_size = grid_size
        self.levels = tuple(levels)

    def params(self):
        params = super().params()
        params.update(
            {
                "alphas": self.alphas,
                "b": self.b,
                "grid_size": self.grid_size,
                "levels": self.levels,
            }
        )
        return params

    def replicate(self, index):
        n, d, p = self.n, self.d, self.p
        complex_ = augmented_complex(n, d, p, self.seed.replication(index), self.law)
        msa = kruskal_msa(complex_, self.field)
        measure = bulk_measure(msa, n, p, d, self.law)

        record = {"index": index}
        for alpha in self.alphas:
            direct = truncated_moment_gap(measure, alpha, self.b)
            integral = betti_moment_integral(
                complex_, p, alpha, self.b, self.grid_size, self.field
            )
            record[f"direct_a{alpha}"] = direct
            record[f"betti_a{alpha}"] = integral
            record[f"gap_a{alpha}"] = abs(direct - integral)

        thresholds = [extremal_threshold(c, n, p, d) for c in self.levels]
        bettis = betti_curve(complex_, thresholds, self.field)
        msa_points = extremal_points(msa, n, p, d, self.law)
        distances = nearest_face_distances(complex_)
        nearest_points = extremal_points(distances, n, p, d, self.law)

        mismatches = 0
        for c, threshold, beta in zip(self.levels, thresholds, bettis.tolist()):
            isolated = int(np.count_nonzero(distances > threshold))
            mismatches += msa_points.tail(c) != beta
            mismatches += nearest_points.tail(c) != isolated
        record["identity_mismatches"] = int(mismatches)
        return record

    def summarize(self, records):
        summary = {"alphas": {}}
        for alpha in self.alphas:
            summary["alphas"][str(alpha)] = {
                "direct": mean_and_se(r[f"direct_a{alpha}"] for r in records),
                "betti": mean_and_se(r[f"betti_a{alpha}"] for r in records),
                "gap": mean_and_se(r[f"gap_a{alpha}"] for r in records),
            }
        summary["identity_mismatches"] = sum(r["identity_mismatches"] for r in records)
        return summary

    def check(self, summary):
        if summary["identity_mismatches"]:
            return [f"{summary['identity_mismatches']} count identity mismatches"]
        return []
