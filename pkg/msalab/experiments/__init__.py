# -*- coding: utf-8 -*-
import importlib
import logging

LOGGER = logging.getLogger()


EXPERIMENTS = {
    "bulk": "msalab.experiments.bulk.BulkExperiment",
    "corollary": "msalab.experiments.corollary.CorollaryExperiment",
    "extremes": "msalab.experiments.extremes.ExtremesExperiment",
    "perturbation": "msalab.experiments.perturbation.PerturbationExperiment",
    "rescale": "msalab.experiments.rescale.RescaleExperiment",
    "shadow": "msalab.experiments.shadow.ShadowExperiment",
}


def load_experiment_class(full_qualified_class_name):
    """ Load the class dynamically so that importing the registry stays cheap
    """
    module_name, class_name = full_qualified_class_name.rsplit(".", 1)

    LOGGER.debug(f"Loading {class_name} from {module_name}")
    module = importlib.import_module(module_name)

    return getattr(module, class_name)


def get_experiment_class(experiment_name):
    if experiment_name not in EXPERIMENTS:
        err_msg = f"Invalid name {experiment_name}, not in {list(EXPERIMENTS.keys())}"
        raise ValueError(err_msg)

    full_qualified_class_name = EXPERIMENTS[experiment_name]
    return load_experiment_class(full_qualified_class_name)
