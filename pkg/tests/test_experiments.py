# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import csv
import json
import math

import pytest

from msalab import db
from msalab import experiment as experiment_module
from msalab.experiment import Experiment, mean_and_se
from msalab.experiments import EXPERIMENTS, get_experiment_class
from msalab.measures import stability_tolerance
from msalab.utils import RunManifest


@pytest.mark.parametrize("name", sorted(EXPERIMENTS))
def test_import_all_experiments(name):
    experiment_class = get_experiment_class(name)
    assert issubclass(experiment_class, Experiment)
    assert experiment_class.name == name


def test_unknown_experiment():
    with pytest.raises(ValueError):
        get_experiment_class("giant_component")


def test_mean_and_se():
    assert mean_and_se([1.0, 3.0]) == {"mean": 2.0, "se": 1.0, "count": 2}
    single = mean_and_se([2.0, math.nan])
    assert single["mean"] == 2.0
    assert math.isnan(single["se"])
    assert mean_and_se([])["count"] == 0


@pytest.mark.parametrize(
    "kwargs",
    [{"d": 0}, {"n": 2, "d": 2}, {"p": 0.0}, {"reps": 0}, {"field": "gfp:4"}],
)
def test_experiment_rejects_bad_parameters(kwargs):
    params = {"n": 6, "d": 1}
    params.update(kwargs)
    n, d = params.pop("n"), params.pop("d")
    with pytest.raises(ValueError):
        get_experiment_class("bulk")(n, d, **params)


def run_experiment(name, tmp_path, n=8, d=1, **kwargs):
    output_dir = tmp_path / name
    experiment = get_experiment_class(name)(
        n, d, reps=3, seed=5, output_dir=str(output_dir), **kwargs
    )
    return experiment.run(), output_dir


def test_bulk_experiment_writes_artifacts(tmp_path):
    summary, output_dir = run_experiment("bulk", tmp_path, bins=10)

    assert summary["problems"] == []
    assert 0 <= summary["kolmogorov"]["mean"] <= 1
    assert summary["nonexistence_frequency"] == 0.0
    assert len(summary["histogram"]["masses"]) == 10
    assert summary["limit_first_moment"] == pytest.approx(1.2020569, rel=1e-6)

    with open(output_dir / "replications.csv") as f:
        rows = list(csv.DictReader(f))
    assert [int(row["index"]) for row in rows] == [0, 1, 2]
    assert "points" not in rows[0]

    store = db.RecordStore(
        output_dir / "records.json.zstd", experiment_module.RECORDS_VERSION
    )
    assert [r["index"] for r in store.read()] == [0, 1, 2]
    assert not store.is_stale()

    manifest = RunManifest.read(output_dir / "manifest.json")
    assert manifest["seed"] == 5
    assert manifest["field"] == "gf2"
    assert len(manifest["replication_seeds"]) == 3

    with open(output_dir / "summary.json") as f:
        assert json.load(f)["manifest"]["params"]["experiment"] == "bulk"


def test_resummarize_from_stored_records(tmp_path):
    summary, output_dir = run_experiment("bulk", tmp_path, bins=10)
    (output_dir / "summary.json").unlink()

    experiment = get_experiment_class("bulk")(
        8, 1, reps=3, seed=5, bins=10, output_dir=str(output_dir)
    )
    again = experiment.resummarize()

    assert again["kolmogorov"] == summary["kolmogorov"]
    assert again["histogram"]["masses"] == summary["histogram"]["masses"]
    assert again["manifest"]["seed"] == 5
    assert (output_dir / "summary.json").exists()


def test_resummarize_needs_current_records(tmp_path, monkeypatch):
    experiment = get_experiment_class("bulk")(
        8, 1, output_dir=str(tmp_path / "empty")
    )
    with pytest.raises(ValueError, match="No replication records"):
        experiment.resummarize()

    _, output_dir = run_experiment("bulk", tmp_path)
    current = experiment_module.RECORDS_VERSION
    monkeypatch.setattr(experiment_module, "RECORDS_VERSION", current + 1)
    experiment = get_experiment_class("bulk")(8, 1, output_dir=str(output_dir))
    with pytest.raises(
        ValueError, match=f"record layout {current}, expected {current + 1}"
    ):
        experiment.resummarize()


def test_bulk_ynp_variant_censors_missing_msa(tmp_path):
    summary, _ = run_experiment("bulk", tmp_path, n=6, d=2, p=0.05, variant="ynp")
    assert summary["nonexistence_frequency"] == 1.0


def test_bulk_experiment_is_reproducible(tmp_path):
    first = get_experiment_class("bulk")(7, 2, reps=2, seed=9, output_dir=None)
    second = get_experiment_class("bulk")(7, 2, reps=2, seed=9, output_dir=None)
    assert [first.replicate(i) for i in range(2)] == [
        second.replicate(i) for i in range(2)
    ]


def test_bulk_experiment_in_worker_processes(tmp_path):
    experiment = get_experiment_class("bulk")(
        7, 1, reps=4, seed=2, jobs=2, output_dir=None, law="exp:1.0"
    )
    summary = experiment.run()
    serial = get_experiment_class("bulk")(
        7, 1, reps=4, seed=2, jobs=1, output_dir=None, law="exp:1.0"
    ).run()
    assert summary["kolmogorov"] == serial["kolmogorov"]


def test_extremes_experiment(tmp_path):
    summary, _ = run_experiment("extremes", tmp_path, n=10)
    assert summary["msa"]["replications"] == 3
    intervals = summary["msa"]["intervals"]
    assert intervals[0]["target"] == pytest.approx(math.e)
    assert set(summary["msa"]["discrepancy"]) == {-1.0, 0.0, 1.0}
    assert summary["nearest_face"]["replications"] == 3


def test_rescale_experiment(tmp_path):
    summary, _ = run_experiment("rescale", tmp_path, ps=(0.5, 1.0))
    assert set(summary["per_p"]) == {"0.5", "1.0"}
    assert set(summary["between"]) == {"0.5-1.0"}
    assert set(summary["gap_to_top"]) == {"0.5"}


def test_rescale_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        get_experiment_class("rescale")(6, 1, ps=(0.0, 1.0))


def test_corollary_experiment_identities_hold(tmp_path):
    summary, _ = run_experiment("corollary", tmp_path, n=7, d=2, grid_size=20000)
    assert summary["identity_mismatches"] == 0
    assert summary["problems"] == []
    for values in summary["alphas"].values():
        assert values["gap"]["mean"] < 5e-3


def test_perturbation_experiment(tmp_path):
    summary, _ = run_experiment("perturbation", tmp_path, n=10, noise="n^-2")
    assert summary["matching_violations"] == 0
    assert summary["noisy_missing"] == 0
    assert summary["matching_distance"]["mean"] <= summary["noise_norm"]["mean"] + 1e-12
    assert summary["noise_norm"]["mean"] <= 0.01


def perturbation_record(index, distance, norm=1e-4):
    return {
        "index": index,
        "noise_norm": norm,
        "scaled_noise_norm": 100 * norm,
        "noisy_exists": True,
        "matching_distance": distance,
        "stability_tolerance": stability_tolerance([0.2, 0.9]),
        "kolmogorov_clean": 0.1,
        "kolmogorov_noisy": 0.1,
        "kolmogorov_between": 0.0,
    }


def test_perturbation_tolerates_rounding():
    experiment = get_experiment_class("perturbation")(10, 1, output_dir=None)
    norm = 9.99948082961374e-05
    records = [
        perturbation_record(0, norm + 6.4e-19, norm),
        perturbation_record(1, 0.5 * norm, norm),
    ]
    summary = experiment.summarize(records)
    assert summary["matching_violations"] == 0
    assert experiment.check(summary) == []

    records.append(perturbation_record(2, norm + 1e-9, norm))
    summary = experiment.summarize(records)
    assert summary["matching_violations"] == 1
    assert len(experiment.check(summary)) == 1


def test_shadow_experiment(tmp_path):
    summary, _ = run_experiment("shadow", tmp_path, n=12, c=3.0, samples=200)
    assert 0 <= summary["density"]["mean"] <= 1
    assert summary["target"] == pytest.approx((1 - 0.0595) ** 2, abs=1e-3)
