# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import os

import pytest

from msalab.faces import WeightedComplex, face_rank

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture
def isolated_workdir(tmp_path, monkeypatch):
    for name in list(os.environ):
        if name.startswith("MSALAB_"):
            monkeypatch.delenv(name)
    monkeypatch.setenv("MSALAB_JOBS", "1")
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def get_fixture_path():
    def _get_fixture_path(path):
        path = os.path.join(FIXTURES_DIR, path)
        assert os.path.exists(path)
        return path

    return _get_fixture_path


@pytest.fixture
def triangle(get_fixture_path):
    """Edges 01, 02, 12 of a triangle with weights 0.1, 0.2, 0.3."""
    return WeightedComplex.load(get_fixture_path("triangle.json"))


@pytest.fixture
def make_complex():
    def _make_complex(n, d, weighted_faces, **kwargs):
        ranks = [face_rank(face, n) for face in weighted_faces]
        return WeightedComplex(n, d, ranks, list(weighted_faces.values()), **kwargs)

    return _make_complex
