# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

"""Replication record stores.

A store is one file holding a record per replication. Its name picks the
serialization, ``json`` lines or ``pickle``, and an optional ``gz`` or
``zstd`` compression: ``records.json.zstd``, ``records.pickle``. A
``.version`` file next to it stamps the record layout it was written with.
"""

import gzip
import io
import json
import logging
import os
import pickle
from contextlib import contextmanager

import zstandard

from msalab.utils import CustomJsonEncoder

logger = logging.getLogger(__name__)

COMPRESSIONS = ("gz", "zstd")


def _dump_json_lines(records, fh):
    for record in records:
        line = json.dumps(record, cls=CustomJsonEncoder) + "\n"
        fh.write(line.encode("utf-8"))


def _load_json_lines(fh):
    for line in io.TextIOWrapper(fh, encoding="utf-8"):
        if line.strip():
            yield json.loads(line)


def _dump_pickles(records, fh):
    for record in records:
        fh.write(pickle.dumps(record))


def _load_pickles(fh):
    while True:
        try:
            yield pickle.load(fh)
        except EOFError:
            return


FORMATS = {
    "json": (_dump_json_lines, _load_json_lines),
    "pickle": (_dump_pickles, _load_pickles),
}


def parse_store_name(name):
    """Split a store file name into its (format, compression) suffixes."""
    suffixes = os.path.basename(str(name)).split(".")[1:]
    if len(suffixes) == 1:
        db_format, compression = suffixes[0], None
    elif len(suffixes) == 2:
        db_format, compression = suffixes
    else:
        raise ValueError(
            f"Cannot tell the record format of {name!r}, "
            "expected NAME.FORMAT[.COMPRESSION]"
        )

    if db_format not in FORMATS:
        raise ValueError(
            f"Unknown record format {db_format!r} in {name!r}, "
            f"expected one of {sorted(FORMATS)}"
        )
    if compression is not None and compression not in COMPRESSIONS:
        raise ValueError(
            f"Unknown compression {compression!r} in {name!r}, "
            f"expected one of {list(COMPRESSIONS)}"
        )
    return db_format, compression


class RecordStore:
    def __init__(self, path, version):
        self.path = str(path)
        self.version = version
        self.format, self.compression = parse_store_name(self.path)
        self._dump, self._load = FORMATS[self.format]

    @property
    def version_path(self):
        return f"{self.path}.version"

    def stamped_version(self):
        if not os.path.exists(self.version_path):
            return None
        with open(self.version_path) as f:
            return int(f.read())

    def is_stale(self):
        """True when the file on disk predates the current record layout."""
        stamped = self.stamped_version()
        return stamped is not None and stamped < self.version

    @contextmanager
    def _open(self, mode):
        if self.compression == "gz":
            with gzip.open(self.path, mode) as f:
                yield f
        elif self.compression == "zstd":
            with open(self.path, mode) as f:
                if "w" in mode:
                    with zstandard.ZstdCompressor().stream_writer(f) as writer:
                        yield writer
                else:
                    with zstandard.ZstdDecompressor().stream_reader(f) as reader:
                        yield reader
        else:
            with open(self.path, mode) as f:
                yield f

    def write(self, records):
        parent_dir = os.path.dirname(self.path)
        if parent_dir:
            os.makedirs(parent_dir, exist_ok=True)

        with self._open("wb") as fh:
            self._dump(records, fh)
        with open(self.version_path, "w") as f:
            f.write(str(self.version))

        logger.debug(f"Wrote records to {self.path} (layout {self.version})")

    def __iter__(self):
        if not os.path.exists(self.path):
            return

        with self._open("rb") as fh:
            yield from self._load(fh)

    def read(self):
        return list(self)
