#!/usr/bin/env python3
# Copyright 2026 The autocash Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the bundled CSV fixtures under data/.

The synthetic sets are deterministic (fixed numpy seed). iris and wine are
copied from the copies that ship with scikit-learn.
"""

import csv
import json
import os
import sys

import numpy as np

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")


def fmt(x):
    if isinstance(x, str):
        return x
    return f"{x:.4f}".rstrip("0").rstrip(".") if not float(x).is_integer() else str(int(x))


def write(path, header, rows):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def blobs(rng, n, dims, classes, spread):
    centers = rng.uniform(-5, 5, size=(classes, dims))
    rows = []
    for i in range(n):
        c = i % classes
        x = centers[c] + rng.normal(0, spread, size=dims)
        rows.append(list(x) + [f"c{c}"])
    return rows


def xor(rng, n, noise_dims):
    rows = []
    for _ in range(n):
        a, b = rng.uniform(-1, 1, size=2)
        label = "pos" if (a > 0) != (b > 0) else "neg"
        rows.append([a, b] + list(rng.normal(0, 1, size=noise_dims)) + [label])
    return rows


def linear(rng, n, dims):
    w = rng.normal(0, 1, size=dims)
    rows = []
    for _ in range(n):
        x = rng.normal(0, 1, size=dims)
        rows.append(list(x) + ["yes" if x @ w + rng.normal(0, 0.3) > 0 else "no"])
    return rows


def categorical_rules(rng, n):
    colors = ["red", "green", "blue"]
    shapes = ["circle", "square"]
    sizes = ["s", "m", "l", "xl"]
    rows = []
    for _ in range(n):
        c, s, z = rng.choice(colors), rng.choice(shapes), rng.choice(sizes)
        t = rng.normal(0, 1)
        if c == "red" and s == "square":
            label = "A"
        elif z in ("l", "xl"):
            label = "B"
        else:
            label = "C"
        rows.append([c, s, z, rng.choice(["u", "v"]), t, label])
    return rows


def imbalanced(rng, n, minority, dims):
    rows = []
    for i in range(n):
        cls = "rare" if i < minority else "common"
        shift = 1.5 if cls == "rare" else 0.0
        rows.append(list(rng.normal(shift, 1, size=dims)) + [cls])
    return rows


def mixed_missing(rng, n, missing_rate):
    rows = []
    for _ in range(n):
        x = rng.normal(0, 1, size=3)
        g = rng.choice(["north", "south", "east"])
        h = rng.choice(["low", "high"])
        score = x[0] + (1.0 if g == "north" else -0.5) + (0.7 if h == "high" else 0)
        label = "k1" if score > 0.5 else ("k2" if score > -0.5 else "k3")
        row = list(x) + [g, h, label]
        for j in range(5):
            if rng.uniform() < missing_rate:
                row[j] = "?"
        rows.append(row)
    return rows


def rings(rng, n):
    rows = []
    for i in range(n):
        inner = i % 2 == 0
        r = rng.uniform(0, 1) if inner else rng.uniform(1.5, 2.5)
        t = rng.uniform(0, 2 * np.pi)
        rows.append([r * np.cos(t), r * np.sin(t), "inner" if inner else "outer"])
    return rows


def nb_friendly(rng, n):
    rows = []
    for i in range(n):
        c = i % 2
        scales = [0.5, 2.0, 1.0] if c == 0 else [2.0, 0.5, 1.0]
        rows.append(list(rng.normal(0, scales)) + [f"g{c}"])
    return rows


def noise(rng, n, dims, classes):
    return [list(rng.normal(0, 1, size=dims)) + [f"z{rng.integers(classes)}"] for _ in range(n)]


def moons(rng, n):
    rows = []
    for i in range(n):
        t = rng.uniform(0, np.pi)
        if i % 2 == 0:
            x, y, label = np.cos(t), np.sin(t), "upper"
        else:
            x, y, label = 1 - np.cos(t), 0.5 - np.sin(t), "lower"
        rows.append([x + rng.normal(0, 0.15), y + rng.normal(0, 0.15), label])
    return rows


def sklearn_table(name, header):
    import sklearn

    path = os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data", name)
    with open(path) as f:
        first = f.readline().strip().split(",")
        names = first[2:]
        rows = []
        for line in f:
            cells = line.strip().split(",")
            rows.append(cells[:-1] + [names[int(cells[-1])]])
    return header, rows


def main():
    rng = np.random.default_rng(20240607)

    corpus = os.path.join(ROOT, "corpus")
    specs = {
        "blobs_separated.csv": (["a1", "a2", "a3", "a4", "class"], blobs(rng, 120, 4, 2, 0.8)),
        "blobs_overlap.csv": ([f"f{i}" for i in range(6)] + ["class"], blobs(rng, 150, 6, 3, 3.0)),
        "xor_noise.csv": (["x", "y", "n1", "n2", "label"], xor(rng, 120, 2)),
        "linear_boundary.csv": ([f"v{i}" for i in range(5)] + ["answer"], linear(rng, 150, 5)),
        "categorical_rules.csv": (["color", "shape", "size", "flag", "t", "group"], categorical_rules(rng, 120)),
        "imbalanced.csv": (["m1", "m2", "m3", "status"], imbalanced(rng, 200, 20, 3)),
        "mixed_missing.csv": (["x1", "x2", "x3", "region", "level", "outcome"], mixed_missing(rng, 120, 0.05)),
        "rings.csv": (["px", "py", "ring"], rings(rng, 150)),
        "scale_pattern.csv": (["s1", "s2", "s3", "kind"], nb_friendly(rng, 100)),
        "pure_noise.csv": (["e1", "e2", "e3", "e4", "tag"], noise(rng, 100, 4, 3)),
    }
    for name, (header, rows) in specs.items():
        write(os.path.join(corpus, name), header, rows)

    # One target is deliberately not the last column.
    rows = specs["linear_boundary.csv"][1]
    write(
        os.path.join(corpus, "linear_boundary.csv"),
        ["answer"] + [f"v{i}" for i in range(5)],
        [[r[-1]] + r[:-1] for r in rows],
    )
    manifest = {name: header[-1] for name, (header, _) in specs.items()}
    manifest["linear_boundary.csv"] = "answer"
    with open(os.path.join(corpus, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")

    small = os.path.join(ROOT, "small")
    header, rows = sklearn_table(
        "wine_data.csv",
        ["alcohol", "malic_acid", "ash", "alcalinity", "magnesium", "phenols", "flavanoids",
         "nonflavanoid", "proanthocyanins", "color", "hue", "od280", "proline", "cultivar"],
    )
    write(os.path.join(small, "wine.csv"), header, rows)
    write(os.path.join(small, "moons.csv"), ["u", "v", "side"], moons(rng, 120))
    write(os.path.join(small, "xor.csv"), ["x", "y", "n1", "label"], xor(rng, 100, 1))
    write(os.path.join(small, "imbalanced.csv"), ["m1", "m2", "status"], imbalanced(rng, 150, 15, 2))
    write(os.path.join(small, "mixed.csv"), ["x1", "x2", "x3", "region", "level", "outcome"],
          mixed_missing(rng, 100, 0.08))

    header, rows = sklearn_table(
        "iris.csv", ["sepal_length", "sepal_width", "petal_length", "petal_width", "species"])
    write(os.path.join(ROOT, "heldout", "iris.csv"), header, rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
