"""Manifest + blob tensor container.

A store is a directory holding ``manifest.json`` (tensor names, shapes,
dtypes, byte offsets, blob checksum, free-form metadata) and ``data.bin``,
a single raw little-endian blob. Round-trips are bit-exact; any size or
checksum mismatch raises IntegrityError. Both checkpoints and datasets are
built on this container.
"""

from __future__ import annotations

import hashlib
import json
import os

import numpy as np

from .errors import IntegrityError

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"
BLOB_NAME = "data.bin"


def _little_endian(arr: np.ndarray) -> np.ndarray:
    dt = arr.dtype.newbyteorder("<")
    return np.ascontiguousarray(arr, dtype=dt)


def save_tensors(path: str, tensors: dict[str, np.ndarray], meta: dict | None = None) -> None:
    """Write ``tensors`` under directory ``path`` as manifest + blob."""
    os.makedirs(path, exist_ok=True)
    entries = []
    chunks = []
    offset = 0
    for name in sorted(tensors):
        arr = _little_endian(np.asarray(tensors[name]))
        raw = arr.tobytes(order="C")
        entries.append({
            "name": name,
            "dtype": arr.dtype.str,
            "shape": list(arr.shape),
            "offset": offset,
            "nbytes": len(raw),
        })
        chunks.append(raw)
        offset += len(raw)
    blob = b"".join(chunks)
    manifest = {
        "format_version": FORMAT_VERSION,
        "blob": {
            "file": BLOB_NAME,
            "nbytes": len(blob),
            "sha256": hashlib.sha256(blob).hexdigest(),
        },
        "tensors": entries,
        "meta": meta or {},
    }
    with open(os.path.join(path, BLOB_NAME), "wb") as f:
        f.write(blob)
    with open(os.path.join(path, MANIFEST_NAME), "w") as f:
        json.dump(manifest, f, indent=1, sort_keys=True)
        f.write("\n")


def load_manifest(path: str) -> dict:
    manifest_path = os.path.join(path, MANIFEST_NAME)
    if not os.path.exists(manifest_path):
        raise IntegrityError(f"no manifest at {manifest_path}")
    with open(manifest_path) as f:
        manifest = json.load(f)
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise IntegrityError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    return manifest


def load_tensors(path: str, names: list[str] | None = None) -> dict[str, np.ndarray]:
    """Read tensors back; verifies blob size and checksum before decoding."""
    manifest = load_manifest(path)
    blob_path = os.path.join(path, manifest["blob"]["file"])
    with open(blob_path, "rb") as f:
        blob = f.read()
    if len(blob) != manifest["blob"]["nbytes"]:
        raise IntegrityError(
            f"blob size mismatch: {len(blob)} bytes on disk, manifest says {manifest['blob']['nbytes']}"
        )
    digest = hashlib.sha256(blob).hexdigest()
    if digest != manifest["blob"]["sha256"]:
        raise IntegrityError("blob checksum mismatch")
    wanted = set(names) if names is not None else None
    out = {}
    for entry in manifest["tensors"]:
        if wanted is not None and entry["name"] not in wanted:
            continue
        start, nbytes = entry["offset"], entry["nbytes"]
        raw = blob[start:start + nbytes]
        if len(raw) != nbytes:
            raise IntegrityError(f"tensor {entry['name']} extends past end of blob")
        arr = np.frombuffer(raw, dtype=np.dtype(entry["dtype"]))
        out[entry["name"]] = arr.reshape(entry["shape"]).copy()
    if wanted is not None and wanted - set(out):
        raise IntegrityError(f"missing tensors: {sorted(wanted - set(out))}")
    return out
