# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import logging

import numpy as np

from msalab.experiment import Experiment, mean_and_se
from msalab.measures import (
    EmpiricalMeasure,
    bulk_measure,
    kolmogorov_distance,
    limit_histogram,
)
from msalab.msa import ExistenceEvent, kruskal_msa
from msalab.sampler import augmented_complex, weighted_linial_meshulam

logger = logging.getLogger(__name__)

VARIANTS = ("augmented", "ynp")


class BulkExperiment(Experiment):
    """Kolmogorov distance between the bulk measure of MSA weights and mu.

    The "ynp" variant samples weighted Y(n, p), where the MSA may not exist;
    such replications contribute the unit mass at 0.
    """

    name = "bulk"

    def __init__(self, n, d, variant="augmented", bins=40, **kwargs):
        super().__init__(n, d, **kwargs)
        if variant not in VARIANTS:
            raise ValueError(f"Unknown variant {variant!r}, expected one of {VARIANTS}")
        self.variant = variant
        self.bins = bins

    def params(self):
        params = super().params()
        params.update({"variant": self.variant, "bins": self.bins})
        return params

    def sample(self, index):
        seed = self.seed.replication(index)
        if self.variant == "ynp":
            return weighted_linial_meshulam(self.n, self.d, self.p, seed, self.law)
        return augmented_complex(self.n, self.d, self.p, seed, self.law)

    def replicate(self, index):
        complex_ = self.sample(index)
        msa = kruskal_msa(complex_, self.field)
        event = ExistenceEvent.from_msa(msa)
        if event:
            logger.warning(f"Replication {index}: no MSA, beta_(d-1) is nonzero")

        measure = bulk_measure(
            msa, self.n, self.p, self.d, self.law, censored=self.variant == "ynp"
        )
        return {
            "index": index,
            "exists": msa.exists,
            "kolmogorov": kolmogorov_distance(measure, self.limit_law),
            "first_moment": measure.integrate(lambda x: x),
            "total_mass": measure.total_mass,
            "points": measure.points.tolist(),
            "normalization": measure.normalization,
        }

    def summarize(self, records):
        law = self.limit_law
        pooled = EmpiricalMeasure.pool(
            EmpiricalMeasure(r["points"], r["normalization"]) for r in records
        )
        upper = max(float(pooled.points.max()) if len(pooled) else 0.0, law.c_star)
        edges, masses = pooled.histogram(bins=self.bins, range=(0.0, upper))

        return {
            "kolmogorov": mean_and_se(r["kolmogorov"] for r in records),
            "pooled_kolmogorov": kolmogorov_distance(pooled, law),
            "first_moment": mean_and_se(r["first_moment"] for r in records),
            "limit_first_moment": law.mu_moment(1),
            # frequency of the event that beta_(d-1) of Y(n, p) is nonzero
            "nonexistence_frequency": float(
                np.mean([not r["exists"] for r in records])
            ),
            "histogram": {
                "edges": edges.tolist(),
                "masses": masses.tolist(),
                "limit_masses": limit_histogram(law, edges).tolist(),
            },
        }
