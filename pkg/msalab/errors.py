# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.


class MsaLabError(ValueError):
    pass


class InvalidFaceError(MsaLabError):
    pass


class RankOutOfRangeError(MsaLabError):
    pass


class DiscontinuousLawError(MsaLabError):
    pass


class DoubleRevealError(MsaLabError):
    pass


class FieldDisagreementError(MsaLabError):
    """Raised when ranks computed over different fields disagree.

    `ranks` maps each field name to the rank found over it. Callers that
    need the complex itself serialize it from their own inputs.
    """

    def __init__(self, message, ranks=None):
        super().__init__(message)
        self.ranks = ranks or {}
