# Copyright 2026 The mppr Authors
# SPDX-License-Identifier: Apache-2.0
"""Convert the LINQS citation datasets (cora.content / cora.cites) to the
edge list, feature CSV and label files read by mppr.

    python tools/planetoid_to_mppr.py path/to/cora out_dir --name cora
"""

import argparse
import pathlib
import sys


def convert(src: pathlib.Path, out: pathlib.Path, name: str) -> None:
    content = src / f"{name}.content"
    cites = src / f"{name}.cites"
    ids = {}
    features = []
    raw_labels = []
    for line in content.read_text().splitlines():
        fields = line.split()
        if not fields:
            continue
        ids[fields[0]] = len(ids)
        features.append(fields[1:-1])
        raw_labels.append(fields[-1])
    classes = {c: i for i, c in enumerate(sorted(set(raw_labels)))}

    edges = set()
    skipped = 0
    for line in cites.read_text().splitlines():
        fields = line.split()
        if len(fields) != 2:
            continue
        cited, citing = fields
        if cited not in ids or citing not in ids or cited == citing:
            skipped += 1
            continue
        edges.add((ids[citing], ids[cited]))

    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"{name}.edges", "w") as f:
        f.write(f"# n={len(ids)}\n")
        for u, v in sorted(edges):
            f.write(f"{u}\t{v}\n")
    with open(out / f"{name}.features", "w") as f:
        for row in features:
            f.write(",".join(row) + "\n")
    with open(out / f"{name}.labels", "w") as f:
        for label in raw_labels:
            f.write(f"{classes[label]}\n")
    print(f"{len(ids)} nodes, {len(edges)} edges, {len(classes)} classes, {skipped} citations skipped",
          file=sys.stderr)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("src", type=pathlib.Path)
    parser.add_argument("out", type=pathlib.Path)
    parser.add_argument("--name", default="cora")
    args = parser.parse_args()
    convert(args.src, args.out, args.name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
