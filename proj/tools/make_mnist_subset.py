#!/usr/bin/env python3
# Copyright 2026 The fockqnn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes a 5000-image MNIST subset as gzipped IDX files.

The subset (500 images per digit, taken from the MNIST training set) ships
inside the mlxtend wheel under the BSD-3 license. Usage:

    pip download mlxtend --no-deps -d /tmp/mlx
    python3 tools/make_mnist_subset.py /tmp/mlx/mlxtend-*.whl data/mnist
"""

import gzip
import io
import pathlib
import struct
import sys
import zipfile

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def write_gz(path, payload):
    # mtime=0 keeps the output byte-identical between runs.
    with open(path, "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0, filename="") as gz:
            gz.write(payload)


def main(argv):
    if len(argv) != 3:
        print(__doc__)
        return 2
    wheel, out_dir = argv[1], pathlib.Path(argv[2])
    out_dir.mkdir(parents=True, exist_ok=True)
    text = gzip.decompress(zipfile.ZipFile(wheel).read(MEMBER)).decode()
    rows = [line.split(",") for line in text.splitlines() if line]
    images = bytearray()
    labels = bytearray()
    for row in rows:
        if len(row) != 785:
            raise ValueError("unexpected row width %d" % len(row))
        images.extend(int(float(v)) for v in row[:784])
        labels.append(int(float(row[784])))
    count = len(rows)
    write_gz(out_dir / "train-images-idx3-ubyte.gz",
             struct.pack(">IIII", 0x803, count, 28, 28) + bytes(images))
    write_gz(out_dir / "train-labels-idx1-ubyte.gz",
             struct.pack(">II", 0x801, count) + bytes(labels))
    print("wrote %d images to %s" % (count, out_dir))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
