# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import itertools

from msalab.experiment import Experiment, mean_and_se
from msalab.faces import binomial
from msalab.measures import (
    EmpiricalMeasure,
    bulk_measure,
    kolmogorov_between,
    kolmogorov_distance,
)
from msalab.msa import kruskal_msa
from msalab.sampler import Seed, augmented_complex

DEFAULT_PS = (0.5, 0.75, 1.0)


class RescaleExperiment(Experiment):
    """Bulk measures with the n p F(w) scaling at several p on the same n.

    Each replication samples every p twice on independent substreams, so that
    distances across p can be set against same-p resampling distances.
    """

    name = "rescale"

    def __init__(self, n, d, ps=DEFAULT_PS, **kwargs):
        super().__init__(n, d, **kwargs)
        self.ps = tuple(float(p) for p in ps)
        if not self.ps or any(not 0 < p <= 1 for p in self.ps):
            raise ValueError(f"Probabilities must lie in (0, 1], got {self.ps}")

    def params(self):
        params = super().params()
        params["ps"] = self.ps
        return params

    def _measure(self, index, j, copy):
        p = self.ps[j]
        stream = (index * len(self.ps) + j) * 2 + copy
        seed = Seed(self.seed.seed, stream)
        complex_ = augmented_complex(self.n, self.d, p, seed, self.law)
        msa = kruskal_msa(complex_, self.field)
        return bulk_measure(msa, self.n, p, self.d, self.law)

    def replicate(self, index):
        law = self.limit_law
        record = {"index": index}
        first = {}
        for j, p in enumerate(self.ps):
            measure = self._measure(index, j, 0)
            first[p] = measure
            record[f"kolmogorov_p{p}"] = kolmogorov_distance(measure, law)
            record[f"resample_p{p}"] = kolmogorov_between(
                measure, self._measure(index, j, 1)
            )
        for p, q in itertools.combinations(self.ps, 2):
            record[f"between_p{p}_p{q}"] = kolmogorov_between(first[p], first[q])
        record["points"] = {str(p): m.points.tolist() for p, m in first.items()}
        return record

    def summarize(self, records):
        law = self.limit_law
        summary = {"per_p": {}, "between": {}}
        for p in self.ps:
            pooled = EmpiricalMeasure.pool(
                EmpiricalMeasure(r["points"][str(p)], binomial(self.n - 1, self.d))
                for r in records
            )
            summary["per_p"][str(p)] = {
                "kolmogorov": mean_and_se(r[f"kolmogorov_p{p}"] for r in records),
                "resample": mean_and_se(r[f"resample_p{p}"] for r in records),
                "pooled_kolmogorov": kolmogorov_distance(pooled, law),
            }
        top = max(self.ps)
        for p, q in itertools.combinations(self.ps, 2):
            summary["between"][f"{p}-{q}"] = mean_and_se(
                r[f"between_p{p}_p{q}"] for r in records
            )
        summary["gap_to_top"] = {
            str(p): mean_and_se(
                abs(r[f"kolmogorov_p{p}"] - r[f"kolmogorov_p{top}"]) for r in records
            )
            for p in self.ps
            if p != top
        }
        return summary
