# -*- coding: utf-8 -*-

import argparse
import csv
import json
import math
import os
import sys
from logging import INFO, basicConfig, getLogger

import jsonschema
import numpy as np

from msalab.errors import MsaLabError
from msalab.experiments import EXPERIMENTS, get_experiment_class
from msalab.faces import WeightedComplex
from msalab.limit import LimitLaw
from msalab.linalg import get_field
from msalab.msa import kruskal_msa, persistence_deaths, shadow
from msalab.oracle import brute_force_msa
from msalab.sampler import (
    NoiseSpec,
    Seed,
    augmented_complex,
    perturb,
    weighted_linial_meshulam,
)
from msalab.streaming import C1_CHOICES, run_stream
from msalab.utils import (
    CustomJsonEncoder,
    RunManifest,
    get_field_setting,
    get_jobs_setting,
)

basicConfig(level=INFO)
logger = getLogger(__name__)


def probability(text):
    value = float(text)
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return value


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def seed_value(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def grid(text):
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be A:B:STEP, got {text}")
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"grid needs A <= B and STEP > 0, got {text}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def shadow_mode(text):
    if text == "exact":
        return ("exact", None)
    if text.startswith("sample:"):
        return ("sampled", positive_int(text[len("sample:") :]))
    raise argparse.ArgumentTypeError(f"mode must be exact or sample:K, got {text}")


def float_list(text):
    return [float(part) for part in text.split(",") if part]


def write_json(document, path=None):
    text = json.dumps(document, cls=CustomJsonEncoder, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        with open(path, "w") as f:
            f.write(text + "\n")


def write_rows(rows, fieldnames, path=None):
    f = sys.stdout if path is None else open(path, "w", newline="")
    try:
        writer = csv.DictWriter(f, fieldnames=fieldnames, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    finally:
        if path is not None:
            f.close()


def write_manifest(args, output, params):
    if output is None:
        return
    manifest = RunManifest(getattr(args, "seed", 0) or 0, args.field, params)
    manifest.finish()
    manifest.write(f"{output}.manifest.json")


def add_complex_arguments(parser):
    parser.add_argument("--input", help="Complex JSON file instead of sampling")
    parser.add_argument("--n", type=int, help="Number of vertices")
    parser.add_argument("--d", type=int, help="Face dimension")
    parser.add_argument("--p", type=probability, default=1.0, help="Face probability")
    parser.add_argument("--seed", type=seed_value, default=0, help="Run seed")
    parser.add_argument(
        "--law", default="uniform01", help="uniform01, exp:LAMBDA or table:PATH"
    )
    parser.add_argument(
        "--variant",
        choices=["augmented", "ynp"],
        default="augmented",
        help="Augmented complex, or weighted Y(n, p) with missing faces",
    )
    parser.add_argument("--output", help="Write the result here instead of stdout")


class ComplexCommand(object):
    def complex_from_args(self, args):
        if args.input:
            return WeightedComplex.load(args.input)
        seed = Seed(args.seed)
        if args.variant == "ynp":
            return weighted_linial_meshulam(args.n, args.d, args.p, seed, args.law)
        return augmented_complex(args.n, args.d, args.p, seed, args.law)

    def params(self, args):
        return {
            key: getattr(args, key)
            for key in ("input", "n", "d", "p", "law", "variant")
            if hasattr(args, key)
        }


class SampleCommand(ComplexCommand):
    def go(self, args):
        complex_ = self.complex_from_args(args)
        if args.noise_amp is not None:
            noise = NoiseSpec.parse(args.noise_amp, args.noise_mode)
            complex_, norm = perturb(complex_, noise, Seed(args.seed))
            logger.info(f"Realized noise sup-norm {norm}")
        write_json(complex_.to_document(), args.output)
        write_manifest(args, args.output, self.params(args))


class MsaCommand(ComplexCommand):
    def go(self, args):
        msa = kruskal_msa(self.complex_from_args(args), args.field)
        write_json(msa.to_dict(), args.output)
        write_manifest(args, args.output, self.params(args))


class DeathsCommand(ComplexCommand):
    def go(self, args):
        deaths = persistence_deaths(self.complex_from_args(args), args.field)
        write_json(deaths.to_dict(), args.output)
        write_manifest(args, args.output, self.params(args))


class ShadowCommand(ComplexCommand):
    def go(self, args):
        mode, k = args.mode
        report = shadow(
            self.complex_from_args(args),
            args.threshold,
            mode=mode,
            k=k,
            seed=Seed(args.seed),
            field=args.field,
        )
        write_json(dict(report._asdict()), args.output)
        write_manifest(args, args.output, self.params(args))


class LimitCommand(object):
    def go(self, args):
        law = LimitLaw(args.d)

        if args.what == "constants":
            constants = {"d": args.d, "t_star": law.t_star, "c_star": law.c_star}
            write_json(constants, args.output)
        elif args.what.startswith("moment:"):
            alpha = float(args.what[len("moment:") :])
            moment = law.mu_moment(alpha)
            if args.output is None:
                print(repr(moment))
            else:
                write_json({"d": args.d, "alpha": alpha, "moment": moment}, args.output)
        else:
            if args.grid is None:
                raise MsaLabError(f"--grid is needed for --what {args.what}")
            rows = [{"x": x, "value": law.evaluate(args.what, x)} for x in args.grid]
            write_rows(rows, ["x", "value"], args.output)

        write_manifest(args, args.output, {"d": args.d, "what": args.what})


class ExperimentCommand(object):
    def go(self, args):
        experiment_class = get_experiment_class(args.name)
        kwargs = {
            "p": args.p,
            "reps": args.reps,
            "seed": args.seed,
            "law": args.law,
            "field": args.field,
            "jobs": args.jobs,
            "output_dir": args.output_dir,
        }
        extra = {
            "bulk": {"variant": args.variant, "bins": args.bins},
            "rescale": {"ps": args.ps},
            "perturbation": {"noise": args.noise_amp, "noise_mode": args.noise_mode},
            "shadow": {"c": args.c, "samples": args.samples},
            "corollary": {"alphas": args.alphas, "b": args.b},
        }.get(args.name, {})
        kwargs.update({k: v for k, v in extra.items() if v is not None})

        experiment = experiment_class(args.n, args.d, **kwargs)
        if args.from_records:
            summary = experiment.resummarize()
        else:
            summary = experiment.run()
        summary_path = os.path.join(args.output_dir, "summary.json")
        logger.info(f"Summary written to {summary_path}")
        if summary["problems"]:
            raise MsaLabError("; ".join(summary["problems"]))


class StreamCommand(object):
    def go(self, args):
        rows = run_stream(
            args.n, args.d, Seed(args.seed), args.order, args.c1, args.field
        )
        write_rows(
            rows, ["k", "total_weight", "c1_scaled", "conjecture", "mu_x"], args.output
        )
        write_manifest(
            args,
            args.output,
            {"n": args.n, "d": args.d, "order": args.order, "c1": args.c1},
        )


class OracleCommand(ComplexCommand):
    def go(self, args):
        complex_ = self.complex_from_args(args)
        greedy = kruskal_msa(complex_, args.field)
        exhaustive = brute_force_msa(complex_, args.field)
        agree = greedy.exists == exhaustive.exists and np.isclose(
            greedy.total_weight, exhaustive.total_weight, rtol=0, atol=1e-12
        )
        write_json(
            {
                "kruskal_total": greedy.total_weight,
                "oracle_total": exhaustive.total_weight,
                "agree": bool(agree),
            },
            args.output,
        )
        if not agree:
            raise MsaLabError("Kruskal and exhaustive search disagree")


COMMANDS = {
    "sample": SampleCommand,
    "msa": MsaCommand,
    "deaths": DeathsCommand,
    "shadow": ShadowCommand,
    "limit": LimitCommand,
    "experiment": ExperimentCommand,
    "stream": StreamCommand,
    "oracle": OracleCommand,
}


def parse_args(args):
    parser = argparse.ArgumentParser(
        prog="msa-lab", description="Minimal spanning acycles of random complexes"
    )
    parser.add_argument(
        "--field", help="gf2, gfp:P or rational (default: $MSALAB_FIELD or gf2)"
    )
    parser.add_argument(
        "--jobs", type=positive_int, help="Worker processes (default: $MSALAB_JOBS)"
    )
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    sample = subparsers.add_parser("sample", help="Sample a weighted complex")
    add_complex_arguments(sample)
    sample.add_argument("--noise-amp", help="Noise amplitude, e.g. 0.01 or n^-2")
    sample.add_argument(
        "--noise-mode", choices=NoiseSpec.MODES, default="uniform", help="Noise shape"
    )

    for name, help_text in (
        ("msa", "Minimal spanning acycle by Kruskal's algorithm"),
        ("deaths", "Death times of the (d-1)-persistence diagram"),
        ("oracle", "Compare Kruskal with exhaustive search"),
    ):
        add_complex_arguments(subparsers.add_parser(name, help=help_text))

    shadow_parser = subparsers.add_parser("shadow", help="Shadow below a threshold")
    add_complex_arguments(shadow_parser)
    shadow_parser.add_argument("--threshold", type=float, required=True)
    shadow_parser.add_argument(
        "--mode", type=shadow_mode, default=("exact", None), help="exact or sample:K"
    )

    limit = subparsers.add_parser("limit", help="Limit law numerics")
    limit.add_argument("--d", type=positive_int, required=True)
    limit.add_argument(
        "--what",
        default="density",
        help=f"{'|'.join(LimitLaw.QUANTITIES)}|constants|moment:ALPHA",
    )
    limit.add_argument("--grid", type=grid, help="A:B:STEP")
    limit.add_argument(
        "--output", help="JSON (constants, moments) or CSV file instead of stdout"
    )

    experiment = subparsers.add_parser("experiment", help="Monte Carlo experiment")
    experiment.add_argument("name", choices=sorted(EXPERIMENTS))
    experiment.add_argument("--n", type=int, required=True)
    experiment.add_argument("--d", type=int, required=True)
    experiment.add_argument("--p", type=probability, default=1.0)
    experiment.add_argument("--reps", type=positive_int, default=20)
    experiment.add_argument("--seed", type=seed_value, default=0)
    experiment.add_argument("--law", default="uniform01")
    experiment.add_argument("--output-dir", default="results")
    experiment.add_argument(
        "--from-records",
        action="store_true",
        help="Summarize the records already in --output-dir instead of sampling",
    )
    experiment.add_argument("--variant", choices=["augmented", "ynp"])
    experiment.add_argument("--bins", type=positive_int)
    experiment.add_argument("--ps", type=float_list, help="Comma-separated p values")
    experiment.add_argument("--noise-amp")
    experiment.add_argument("--noise-mode", choices=NoiseSpec.MODES)
    experiment.add_argument("--c", type=float)
    experiment.add_argument("--samples", type=int)
    experiment.add_argument("--alphas", type=float_list)
    experiment.add_argument("--b", type=float)

    stream = subparsers.add_parser("stream", help="Online MSA under weight reveals")
    stream.add_argument("--n", type=int, required=True)
    stream.add_argument("--d", type=int, required=True)
    stream.add_argument("--seed", type=seed_value, default=0)
    stream.add_argument("--order", choices=["random", "rank"], default="random")
    stream.add_argument("--c1", choices=C1_CHOICES, default="caption")
    stream.add_argument("--output", help="CSV file instead of stdout")

    parsed = parser.parse_args(args)

    if getattr(parsed, "input", None) is None and parsed.command != "limit":
        if parsed.n is None or parsed.d is None:
            parser.error("--n and --d are needed unless --input is given")
        if parsed.d < 1:
            parser.error(f"--d must be at least 1, got {parsed.d}")
        if parsed.n <= parsed.d:
            parser.error(f"--n must exceed --d, got n={parsed.n}, d={parsed.d}")
    if parsed.command == "experiment" and parsed.p == 0:
        parser.error("--p must be positive for experiments")

    try:
        parsed.field = get_field(get_field_setting(parsed.field)).name
        parsed.jobs = get_jobs_setting(parsed.jobs)
    except ValueError as e:
        parser.error(str(e))

    return parsed


def main(args=None):
    args = parse_args(sys.argv[1:] if args is None else args)

    try:
        COMMANDS[args.command]().go(args)
    except (MsaLabError, ValueError, OSError, jsonschema.ValidationError):
        logger.exception(f"msa-lab {args.command} failed")
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
