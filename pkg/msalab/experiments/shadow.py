# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

from msalab.experiment import Experiment, mean_and_se
from msalab.msa import shadow
from msalab.sampler import augmented_complex


class ShadowExperiment(Experiment):
    """Shadow density of Y(n, c/n), realised as the sub-complex of a full
    uniform complex below c/n, against s(c)."""

    name = "shadow"

    def __init__(self, n, d, c=3.0, samples=2000, **kwargs):
        super().__init__(n, d, **kwargs)
        if c <= 0:
            raise ValueError(f"c must be positive, got {c}")
        self.c = float(c)
        self.samples = samples

    def params(self):
        params = super().params()
        params.update({"c": self.c, "samples": self.samples})
        return params

    def replicate(self, index):
        seed = self.seed.replication(index)
        complex_ = augmented_complex(self.n, self.d, 1.0, seed)
        mode = "sampled" if self.samples else "exact"
        report = shadow(
            complex_,
            self.c / self.n,
            mode=mode,
            k=self.samples or None,
            seed=seed,
            field=self.field,
        )
        return {"index": index, "density": report.density, "stderr": report.stderr}

    def summarize(self, records):
        density = mean_and_se(r["density"] for r in records)
        target = self.limit_law.s_of_x(self.c)
        return {
            "density": density,
            "target": target,
            "gap": abs(density["mean"] - target),
        }
