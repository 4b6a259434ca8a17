"""File formats: layered edge lists, dense CSV matrices, labels, embeddings, models."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .embedding import KINDS, EmbeddingMatrix
from .model import CommunityAssignment, MultilayerModel
from .spectral import check_symmetric


def read_edge_list(path, n: int | None = None) -> list[np.ndarray]:
    """Read a TSV of ``layer_id  i  j  weight`` rows into dense layers.

    Vertex ids are 0-based, each undirected pair is listed once, and blank
    or ``#`` lines are skipped.  Layers are returned in sorted ``layer_id``
    order; ``n`` defaults to one more than the largest vertex id.
    """
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields")
            try:
                layer, i, j = parts[0], int(parts[1]), int(parts[2])
                w = float(parts[3])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed edge {line!r}") from None
            if i < 0 or j < 0:
                raise ValueError(f"{path}:{lineno}: negative vertex id")
            entries.append((layer, i, j, w))
    if not entries:
        raise ValueError(f"{path}: no edges")
    max_id = max(max(i, j) for _, i, j, _ in entries)
    if n is None:
        n = max_id + 1
    elif max_id >= n:
        raise ValueError(f"{path}: vertex id {max_id} out of range for n={n}")

    def key(layer):
        return (0, int(layer), "") if layer.lstrip("-").isdigit() else (1, 0, layer)

    ids = sorted({e[0] for e in entries}, key=key)
    index = {lid: k for k, lid in enumerate(ids)}
    layers = [np.zeros((n, n)) for _ in ids]
    for layer, i, j, w in entries:
        A = layers[index[layer]]
        A[i, j] += w
        if i != j:
            A[j, i] += w
    return layers


def write_edge_list(layers, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# layer_id\ti\tj\tweight\n")
        for l, A in enumerate(layers):
            iu, ju = np.nonzero(np.triu(A))
            for i, j in zip(iu, ju):
                fh.write(f"{l}\t{i}\t{j}\t{float(A[i, j])!r}\n")


def read_matrix_csv(path) -> np.ndarray:
    """Dense symmetric matrix from a header-less CSV."""
    M = np.loadtxt(path, delimiter=",", ndmin=2)
    return check_symmetric(M, name=str(path))


def write_matrix_csv(M, path) -> None:
    np.savetxt(path, np.asarray(M, dtype=float), delimiter=",", fmt="%.17g")


def read_layers(paths, n: int | None = None) -> list[np.ndarray]:
    """Layers from ``.csv`` dense matrices and/or ``.tsv`` edge lists, in order."""
    layers = []
    for p in paths:
        p = Path(p)
        if not p.exists():
            raise FileNotFoundError(f"cannot read {p}")
        if p.suffix.lower() in (".tsv", ".txt", ".edges"):
            layers.extend(read_edge_list(p, n))
        else:
            layers.append(read_matrix_csv(p))
    if not layers:
        raise ValueError("no layers given")
    sizes = {A.shape[0] for A in layers}
    if len(sizes) > 1:
        raise ValueError(f"layers have different sizes: {sorted(sizes)}")
    return layers


def write_labels_csv(labels, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["vertex", "label"])
        for i, z in enumerate(np.asarray(labels)):
            w.writerow([i, int(z)])


def read_labels_csv(path) -> np.ndarray:
    """Labels from ``vertex,label`` rows (header optional), ordered by vertex."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if rows and not rows[0][0].strip().lstrip("-").isdigit():
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no labels")
    if len(rows[0]) == 1:
        return np.array([int(r[0]) for r in rows])
    pairs = sorted((int(r[0]), int(r[1])) for r in rows)
    if [v for v, _ in pairs] != list(range(len(pairs))):
        raise ValueError(f"{path}: vertex ids must be 0..n-1 without gaps")
    return np.array([z for _, z in pairs])


def write_embedding_csv(embedding: EmbeddingMatrix, path) -> None:
    """CSV whose header names the embedding kind and column index, e.g. ``joint_U_0``."""
    header = ",".join(f"{embedding.kind}_{k}" for k in range(embedding.d))
    np.savetxt(path, embedding.rows, delimiter=",", fmt="%.17g", header=header, comments="")


def read_embedding_csv(path) -> EmbeddingMatrix:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    kind = header[0].rsplit("_", 1)[0]
    if kind not in KINDS:
        raise ValueError(f"{path}: unknown embedding kind {kind!r}")
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return EmbeddingMatrix(rows, kind)


def model_to_dict(model: MultilayerModel) -> dict:
    return {
        "n": model.n,
        "K": model.K,
        "L": model.L,
        "labels": model.labels.tolist(),
        "theta": model.theta.tolist(),
        "B": model.B.tolist(),
        "edge_mode": model.edge_mode,
    }


def model_from_dict(data: dict) -> MultilayerModel:
    for key in ("K", "labels", "theta", "B"):
        if key not in data:
            raise ValueError(f"model descriptor is missing {key!r}")
    model = MultilayerModel(CommunityAssignment(np.array(data["labels"]), int(data["K"])),
                            np.array(data["theta"]), np.array(data["B"]),
                            data.get("edge_mode", "bernoulli"))
    for key, value in (("n", model.n), ("L", model.L)):
        if key in data and int(data[key]) != value:
            raise ValueError(f"model descriptor {key!r}={data[key]} disagrees with arrays ({value})")
    return model


def save_model(model: MultilayerModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=2)


def load_model(path) -> MultilayerModel:
    with open(path) as fh:
        return model_from_dict(json.load(fh))
