# -*- coding: utf-8 -*-

import logging
import os

logging.basicConfig(level=logging.INFO)


def get_msalab_version():
    try:
        from importlib.metadata import PackageNotFoundError, version
    except ImportError:  # pragma: no cover
        PackageNotFoundError, version = Exception, None

    try:
        if version is not None:
            return version("msalab")
    except PackageNotFoundError:
        pass

    # Running from a source checkout.
    with open(os.path.join(os.path.dirname(__file__), "..", "VERSION")) as f:
        return f.read().strip()
