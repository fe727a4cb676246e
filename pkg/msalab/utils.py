# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import json
import logging
import math
import os
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import jsonschema
import numpy as np
from tqdm import tqdm

logger = logging.getLogger(__name__)

MANIFEST_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["command", "seed", "code_version", "field", "started", "params"],
    "properties": {
        "command": {"type": "array", "items": {"type": "string"}},
        "seed": {"type": "integer", "minimum": 0},
        "code_version": {"type": "string"},
        "field": {"type": "string"},
        "started": {"type": "number"},
        "wall_clock": {"type": ["number", "null"]},
        "params": {"type": "object"},
        "replication_seeds": {"type": "array"},
    },
}


def get_setting(setting_id, default=None):
    """ Return the value of the MSALAB_<setting_id> environment variable
    """
    value = os.environ.get(f"MSALAB_{setting_id}")

    if value:
        return value

    if default is not None:
        return default

    raise ValueError(f"Failed to find setting {setting_id}")


def get_field_setting(override=None):
    if override:
        return override
    return get_setting("FIELD", "gf2")


def get_jobs_setting(override=None):
    if override is not None:
        jobs = int(override)
    else:
        jobs = int(get_setting("JOBS", str(os.cpu_count() or 1)))
    if jobs < 1:
        raise ValueError(f"Number of jobs must be positive, got {jobs}")
    return jobs


def get_quad_tolerance():
    return float(get_setting("QUAD_TOL", "1e-8"))


class CustomJsonEncoder(json.JSONEncoder):
    """ A custom Json Encoder to support Numpy types
    """

    def default(self, obj):
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)

        return super().default(obj)


def dump_json(obj, path):
    with open(path, "w") as f:
        json.dump(obj, f, cls=CustomJsonEncoder, indent=2, sort_keys=True)


def compensated_mean(values):
    values = list(values)
    if not values:
        return math.nan
    return math.fsum(values) / len(values)


def code_version():
    try:
        return subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=os.path.dirname(os.path.abspath(__file__)),
            capture_output=True,
            text=True,
            check=True,
        ).stdout.strip()
    except (OSError, subprocess.CalledProcessError):
        from msalab import get_msalab_version

        return get_msalab_version()


class RunManifest:
    """Everything needed to replay a run: argv, seed, code version, field."""

    def __init__(self, seed, field, params, command=None):
        self.command = list(sys.argv if command is None else command)
        self.seed = int(seed)
        self.field = str(field)
        self.params = dict(params)
        self.code_version = code_version()
        self.started = time.time()
        self.wall_clock = None
        self.replication_seeds = []

    def finish(self):
        self.wall_clock = time.time() - self.started

    def to_dict(self):
        return {
            "command": [str(arg) for arg in self.command],
            "seed": self.seed,
            "code_version": self.code_version,
            "field": self.field,
            "started": self.started,
            "wall_clock": self.wall_clock,
            "params": self.params,
            "replication_seeds": self.replication_seeds,
        }

    def write(self, path):
        document = json.loads(json.dumps(self.to_dict(), cls=CustomJsonEncoder))
        jsonschema.validate(instance=document, schema=MANIFEST_SCHEMA)
        dump_json(document, path)

    @staticmethod
    def read(path):
        with open(path, "r") as f:
            document = json.load(f)
        jsonschema.validate(instance=document, schema=MANIFEST_SCHEMA)
        return document


def run_replications(func, indices, jobs=1, desc="Replications"):
    """Map func over indices, in order, on `jobs` worker processes."""
    indices = list(indices)

    if jobs <= 1 or len(indices) <= 1:
        return [func(index) for index in tqdm(indices, desc=desc)]

    chunksize = max(1, len(indices) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        results = executor.map(func, indices, chunksize=chunksize)
        return list(tqdm(results, total=len(indices), desc=desc))
