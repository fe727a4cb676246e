# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

from msalab.experiment import Experiment, mean_and_se
from msalab.measures import (
    bulk_measure,
    kolmogorov_between,
    kolmogorov_distance,
    matching_distance,
    stability_tolerance,
)
from msalab.msa import kruskal_msa
from msalab.sampler import NoiseSpec, augmented_complex, perturb


class PerturbationExperiment(Experiment):
    """MSA weights before and after bounded noise on the face weights."""

    name = "perturbation"

    def __init__(self, n, d, noise="n^-2", noise_mode="uniform", **kwargs):
        super().__init__(n, d, **kwargs)
        if not isinstance(noise, NoiseSpec):
            noise = NoiseSpec.parse(noise, noise_mode)
        self.noise = noise

    def params(self):
        params = super().params()
        params["noise"] = repr(self.noise)
        return params

    def replicate(self, index):
        n, d, p = self.n, self.d, self.p
        seed = self.seed.replication(index)
        clean = augmented_complex(n, d, p, seed, self.law)
        noisy, norm = perturb(clean, self.noise, seed)

        clean_msa = kruskal_msa(clean, self.field)
        noisy_msa = kruskal_msa(noisy, self.field)
        # measures of the perturbed complex use F(w') as well
        clean_measure = bulk_measure(clean_msa, n, p, d, self.law)
        record = {
            "index": index,
            "noise_norm": norm,
            "scaled_noise_norm": n * norm,
            "noisy_exists": noisy_msa.exists,
            "matching_distance": matching_distance(
                clean_msa.weights, noisy_msa.weights
            ),
            "stability_tolerance": stability_tolerance(noisy.weights),
            "kolmogorov_clean": kolmogorov_distance(clean_measure, self.limit_law),
        }
        if noisy_msa.exists:
            noisy_measure = bulk_measure(noisy_msa, n, p, d, self.law)
            record["kolmogorov_noisy"] = kolmogorov_distance(
                noisy_measure, self.limit_law
            )
            record["kolmogorov_between"] = kolmogorov_between(
                noisy_measure, clean_measure
            )
        else:
            record["kolmogorov_noisy"] = float("nan")
            record["kolmogorov_between"] = float("nan")
        return record

    def summarize(self, records):
        return {
            "noise_norm": mean_and_se(r["noise_norm"] for r in records),
            "scaled_noise_norm": mean_and_se(r["scaled_noise_norm"] for r in records),
            "matching_distance": mean_and_se(r["matching_distance"] for r in records),
            "kolmogorov_clean": mean_and_se(r["kolmogorov_clean"] for r in records),
            "kolmogorov_noisy": mean_and_se(r["kolmogorov_noisy"] for r in records),
            "kolmogorov_between": mean_and_se(
                r["kolmogorov_between"] for r in records
            ),
            "matching_violations": sum(
                r["noisy_exists"]
                and r["matching_distance"] > r["noise_norm"] + r["stability_tolerance"]
                for r in records
            ),
            # absent faces cannot be used once perturbed, see perturb()
            "noisy_missing": sum(not r["noisy_exists"] for r in records),
        }

    def check(self, summary):
        if summary["matching_violations"]:
            return [
                f"{summary['matching_violations']} replications moved an MSA weight "
                f"by more than the noise norm"
            ]
        return []
