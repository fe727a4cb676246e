# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import csv
import json
import logging
import math
import os

from msalab import db
from msalab.limit import get_limit_law
from msalab.linalg import get_field
from msalab.sampler import Seed, parse_law
from msalab.utils import RunManifest, compensated_mean, dump_json, run_replications

logger = logging.getLogger(__name__)

RECORDS_VERSION = 2
RECORDS_FILE = "records.json.zstd"


def mean_and_se(values):
    values = [float(v) for v in values if not math.isnan(v)]
    if not values:
        return {"mean": math.nan, "se": math.nan, "count": 0}
    mean = compensated_mean(values)
    if len(values) < 2:
        return {"mean": mean, "se": math.nan, "count": len(values)}
    variance = math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return {"mean": mean, "se": math.sqrt(variance / len(values)), "count": len(values)}


class Experiment:
    """A Monte Carlo driver: `replicate` one index, `summarize` all records.

    `run` fans replications out over worker processes, then writes
    replications.csv, records.json.zstd, manifest.json and summary.json to the
    output directory. `resummarize` rebuilds summary.json from those records.
    """

    name = None

    def __init__(
        self,
        n,
        d,
        p=1.0,
        reps=20,
        seed=0,
        law="uniform01",
        field="gf2",
        jobs=1,
        output_dir=".",
    ):
        if d < 1:
            raise ValueError(f"Dimension must be at least 1, got {d}")
        if n <= d:
            raise ValueError(f"Need n > d, got n={n}, d={d}")
        if not 0 < p <= 1:
            raise ValueError(f"Probability must lie in (0, 1], got {p}")
        if reps < 1:
            raise ValueError(f"Need at least one replication, got {reps}")

        self.n = n
        self.d = d
        self.p = p
        self.reps = reps
        self.seed = Seed(seed)
        self.law = parse_law(law)
        self.field = get_field(field)
        self.jobs = jobs
        self.output_dir = output_dir

    @property
    def limit_law(self):
        return get_limit_law(self.d)

    def params(self):
        return {
            "experiment": self.name,
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "reps": self.reps,
            "law": self.law.name,
        }

    def replicate(self, index):
        raise NotImplementedError("Experiments must define replicate")

    def summarize(self, records):
        raise NotImplementedError("Experiments must define summarize")

    def check(self, summary):
        """Problems found in the summary; an empty list when all is well."""
        return []

    def run(self):
        logger.info(f"Running *{self.name}* experiment with {self.params()}")

        manifest = RunManifest(self.seed.seed, self.field.name, self.params())
        manifest.replication_seeds = [
            self.seed.replication(index).to_dict() for index in range(self.reps)
        ]

        records = run_replications(
            self.replicate, range(self.reps), self.jobs, desc=self.name
        )
        summary = self.summarize(records)
        problems = self.check(summary)
        for problem in problems:
            logger.warning(f"{self.name}: {problem}")
        summary["problems"] = problems

        manifest.finish()
        summary["manifest"] = manifest.to_dict()

        if self.output_dir is not None:
            self.write(records, summary, manifest)

        logger.info(f"Experiment *{self.name}* done in {manifest.wall_clock:.1f}s")
        return summary

    def record_store(self):
        return db.RecordStore(
            os.path.join(self.output_dir, RECORDS_FILE), RECORDS_VERSION
        )

    def resummarize(self):
        store = self.record_store()
        if store.is_stale():
            raise ValueError(
                f"{store.path} was written with record layout "
                f"{store.stamped_version()}, expected {RECORDS_VERSION}"
            )
        records = store.read()
        if not records:
            raise ValueError(f"No replication records in {self.output_dir}")

        logger.info(f"Summarizing {len(records)} stored *{self.name}* records")
        summary = self.summarize(records)
        summary["problems"] = self.check(summary)

        manifest_path = os.path.join(self.output_dir, "manifest.json")
        if os.path.exists(manifest_path):
            with open(manifest_path) as f:
                summary["manifest"] = json.load(f)

        dump_json(summary, os.path.join(self.output_dir, "summary.json"))
        return summary

    def write(self, records, summary, manifest):
        os.makedirs(self.output_dir, exist_ok=True)

        self.write_csv(records, os.path.join(self.output_dir, "replications.csv"))

        self.record_store().write(records)

        manifest.write(os.path.join(self.output_dir, "manifest.json"))
        dump_json(summary, os.path.join(self.output_dir, "summary.json"))

    @staticmethod
    def write_csv(records, path):
        scalar = (int, float, str, bool)
        fields = [k for k, v in records[0].items() if isinstance(v, scalar)]
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=fields, extrasaction="ignore")
            writer.writeheader()
            for record in records:
                writer.writerow(record)
