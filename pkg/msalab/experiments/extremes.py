# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import math

from msalab.experiment import Experiment
from msalab.measures import ExtremalPoints, extremal_points, poisson_diagnostics
from msalab.msa import kruskal_msa, nearest_face_distances
from msalab.sampler import augmented_complex

DEFAULT_INTERVALS = [
    (-1.0, math.inf),
    (0.0, math.inf),
    (-1.0, 0.0),
    (0.0, 1.0),
    (1.0, 2.0),
    (2.0, math.inf),
]
DEFAULT_THRESHOLDS = (-1.0, 0.0, 1.0)


class ExtremesExperiment(Experiment):
    """Poisson diagnostics for the extremal MSA points and nearest face distances."""

    name = "extremes"

    def __init__(self, n, d, intervals=None, thresholds=DEFAULT_THRESHOLDS, **kwargs):
        super().__init__(n, d, **kwargs)
        self.intervals = list(intervals or DEFAULT_INTERVALS)
        self.thresholds = tuple(thresholds)

    def params(self):
        params = super().params()
        params.update({"intervals": self.intervals, "thresholds": self.thresholds})
        return params

    def replicate(self, index):
        complex_ = augmented_complex(
            self.n, self.d, self.p, self.seed.replication(index), self.law
        )
        msa = kruskal_msa(complex_, self.field)
        msa_points = extremal_points(msa, self.n, self.p, self.d, self.law)
        nearest_points = extremal_points(
            nearest_face_distances(complex_), self.n, self.p, self.d, self.law
        )
        # only the upper end of both point sets matters for the diagnostics
        floor = min(a for a, _ in self.intervals + [(min(self.thresholds), 0)])
        return {
            "index": index,
            "exists": msa.exists,
            "max_point": float(msa_points.points[-1]) if len(msa_points) else math.nan,
            "count_above_0": msa_points.tail(0.0),
            "msa_points": msa_points.points[msa_points.points > floor].tolist(),
            "nearest_points": nearest_points.points[
                nearest_points.points > floor
            ].tolist(),
        }

    def summarize(self, records):
        msa_points = [ExtremalPoints(r["msa_points"]) for r in records]
        nearest_points = [ExtremalPoints(r["nearest_points"]) for r in records]

        diagnostics = poisson_diagnostics(
            msa_points,
            self.intervals,
            companions=nearest_points,
            thresholds=self.thresholds,
        )
        nearest = poisson_diagnostics(nearest_points, self.intervals)
        return {
            "msa": diagnostics.summary(),
            "nearest_face": nearest.summary(),
            "max_point": [r["max_point"] for r in records],
        }
