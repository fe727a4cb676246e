# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
import math

from msalab.linalg import ReductionState
from msalab.msa import Msa, filtration_columns

logger = logging.getLogger(__name__)

MAX_N = 7
MAX_D = 2


def brute_force_msa(complex_, field="gf2"):
    """Minimum-weight spanning acycle by exhaustive depth-first search.

    Every independent subset of the right size is reachable; branches are cut
    when dependent or when even the lightest remaining faces cannot beat the
    best total found so far.
    """
    if complex_.n > MAX_N or complex_.d > MAX_D:
        raise ValueError(
            f"Exhaustive search is limited to n <= {MAX_N}, d <= {MAX_D}, "
            f"got n={complex_.n}, d={complex_.d}"
        )

    faces = list(filtration_columns(complex_, field))
    weights = [weight for weight, _, _ in faces]
    target = complex_.acycle_size
    best = {"total": math.inf, "faces": None}
    visited = 0

    def search(start, state, chosen, total):
        nonlocal visited
        visited += 1

        need = target - len(chosen)
        if need == 0:
            if total < best["total"]:
                best["total"] = total
                best["faces"] = list(chosen)
            return

        for i in range(start, len(faces) - need + 1):
            if total + math.fsum(weights[i : i + need]) >= best["total"]:
                break
            weight, rank, column = faces[i]
            trial = state.copy()
            if not trial.absorb(column).independent:
                continue
            chosen.append((rank, weight))
            search(i + 1, trial, chosen, total + weight)
            chosen.pop()

    search(0, ReductionState(field), [], 0.0)
    logger.debug(f"Exhaustive search visited {visited} nodes")

    if best["faces"] is None:
        return Msa([], False, complex_.n, complex_.d)
    return Msa(best["faces"], True, complex_.n, complex_.d)
