"""Modality configuration, switch masks, and modality dropout.

A modality spec orders n dense and m sparse modalities; presence of each
modality in a batch is governed by an (n+m)-bit switch mask. Random masks
with all dense bits off are remapped to all dense bits on, so dense
prediction always keeps at least one dense input. The per-batch mask is
the entire training-time dropout state: n+m bits, independent of dataset
size. The alternative baseline strategy pre-assigns a missing condition
to a fixed fraction of samples before training.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, ConfigError, SpecError

DENSE = "dense"
SPARSE = "sparse"
DROPOUT_MODES = ("zero_fill", "drop_tokens")


@dataclass(frozen=True)
class ModalityEntry:
    """One modality: name, dense/sparse kind, channel count, spatial layout."""

    name: str
    kind: str
    channels: int
    spatial: str = "grid"

    def __post_init__(self):
        if self.kind not in (DENSE, SPARSE):
            raise SpecError(f"modality {self.name!r}: kind must be dense or sparse, got {self.kind!r}")
        if self.channels < 1:
            raise SpecError(f"modality {self.name!r}: channels must be positive")
        if self.spatial not in ("grid", "pointset"):
            raise SpecError(f"modality {self.name!r}: spatial must be grid or pointset")


@dataclass(frozen=True)
class ModalitySpec:
    """Ordered modality list; the entry order is the canonical bit order."""

    entries: tuple[ModalityEntry, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        names = [e.name for e in entries]
        if len(set(names)) != len(names):
            raise SpecError(f"duplicate modality names in {names}")
        if self.n_dense < 1:
            raise SpecError("dense prediction requires at least one dense modality")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    @property
    def n_dense(self) -> int:
        return sum(1 for e in self.entries if e.kind == DENSE)

    @property
    def m_sparse(self) -> int:
        return sum(1 for e in self.entries if e.kind == SPARSE)

    @property
    def dense_indices(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e.kind == DENSE)

    @property
    def sparse_indices(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e.kind == SPARSE)

    def __len__(self) -> int:
        return len(self.entries)

    def index_of(self, name: str) -> int:
        for i, e in enumerate(self.entries):
            if e.name == name:
                return i
        raise KeyError(name)

    def entry(self, name: str) -> ModalityEntry:
        return self.entries[self.index_of(name)]

    def to_config(self) -> list[dict]:
        return [
            {"name": e.name, "kind": e.kind, "channels": e.channels, "spatial": e.spatial}
            for e in self.entries
        ]

    @classmethod
    def from_config(cls, items: list[dict]) -> "ModalitySpec":
        entries = []
        for item in items:
            unknown = set(item) - {"name", "kind", "channels", "spatial"}
            if unknown:
                raise ConfigError(f"unknown modality keys: {sorted(unknown)}")
            entries.append(ModalityEntry(
                name=item["name"],
                kind=item["kind"],
                channels=int(item["channels"]),
                spatial=item.get("spatial", "grid"),
            ))
        return cls(tuple(entries))


def quad_spec() -> ModalitySpec:
    """Default RGB + depth (dense) and lidar + event (sparse) configuration."""
    return ModalitySpec((
        ModalityEntry("rgb", DENSE, 3),
        ModalityEntry("depth", DENSE, 1),
        ModalityEntry("lidar", SPARSE, 1),
        ModalityEntry("event", SPARSE, 1),
    ))


@dataclass
class SwitchMask:
    """Boolean presence vector aligned to the spec's entry order."""

    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool).reshape(-1)

    def validate(self, spec: ModalitySpec) -> None:
        if self.bits.shape != (len(spec),):
            raise AlignmentError(f"mask has {self.bits.size} bits for a {len(spec)}-modality spec")
        if not any(self.bits[i] for i in spec.dense_indices):
            raise AlignmentError("mask drops every dense modality")

    def present_names(self, spec: ModalitySpec) -> frozenset[str]:
        return frozenset(n for n, b in zip(spec.names, self.bits) if b)

    def bitstring(self, spec: ModalitySpec) -> str:
        """Loggable form: dense bits, '|', sparse bits (spec order within each group)."""
        dense = "".join("1" if self.bits[i] else "0" for i in spec.dense_indices)
        sparse = "".join("1" if self.bits[i] else "0" for i in spec.sparse_indices)
        return f"{dense}|{sparse}" if sparse else dense


@dataclass(frozen=True)
class MissingCondition:
    """One legal presence pattern; canonical_id indexes the full enumeration."""

    present: frozenset[str]
    canonical_id: int


def count_missing_conditions(n_dense: int, m_sparse: int) -> int:
    """Number of legal modality combinations: (sum_i C(n,i)) * (sum_j C(m,j)).

    Every combination keeps at least one of the n dense modalities; the m
    sparse modalities are unconstrained, so the product equals (2^n - 1) * 2^m.
    """
    if n_dense < 1:
        raise SpecError("dense prediction requires at least one dense modality")
    if m_sparse < 0:
        raise SpecError("sparse modality count must be non-negative")
    dense_ways = sum(math.comb(n_dense, i) for i in range(1, n_dense + 1))
    sparse_ways = sum(math.comb(m_sparse, j) for j in range(0, m_sparse + 1))
    return dense_ways * sparse_ways


def enumerate_conditions(spec: ModalitySpec) -> list[MissingCondition]:
    """All legal conditions, deterministically ordered.

    Sorted by descending presence count, ties broken by canonical modality
    order (so the all-present condition is element 0 and, e.g., {rgb}
    precedes {depth} for an rgb-depth spec).
    """
    n = len(spec)
    dense = set(spec.dense_indices)
    patterns = []
    for code in range(1, 1 << n):
        present_idx = tuple(i for i in range(n) if code & (1 << i))
        if not dense.intersection(present_idx):
            continue
        patterns.append(present_idx)
    patterns.sort(key=lambda idx: (-len(idx), idx))
    return [
        MissingCondition(frozenset(spec.names[i] for i in idx), canonical_id=cid)
        for cid, idx in enumerate(patterns)
    ]


def condition_mask(spec: ModalitySpec, condition: MissingCondition) -> SwitchMask:
    bits = np.array([name in condition.present for name in spec.names], dtype=bool)
    mask = SwitchMask(bits)
    mask.validate(spec)
    return mask


def condition_for_mask(spec: ModalitySpec, mask: SwitchMask) -> MissingCondition:
    mask.validate(spec)
    present = mask.present_names(spec)
    for cond in enumerate_conditions(spec):
        if cond.present == present:
            return cond
    raise AlignmentError(f"no condition matches present set {sorted(present)}")


def condition_by_names(spec: ModalitySpec, names) -> MissingCondition:
    """Resolve a present-modality name collection to its canonical condition."""
    present = frozenset(names)
    unknown = present - set(spec.names)
    if unknown:
        raise ConfigError(f"unknown modality names: {sorted(unknown)}")
    for cond in enumerate_conditions(spec):
        if cond.present == present:
            return cond
    raise ConfigError(f"condition {sorted(present)} keeps no dense modality")


def sample_switch_mask(spec: ModalitySpec, rng: np.random.Generator) -> SwitchMask:
    """Draw each bit independently uniform; remap all-zero dense bits to all-one."""
    bits = rng.integers(0, 2, size=len(spec)).astype(bool)
    dense_idx = list(spec.dense_indices)
    if not bits[dense_idx].any():
        bits[dense_idx] = True
    mask = SwitchMask(bits)
    mask.validate(spec)
    return mask


@dataclass
class ModalSample:
    """Per-modality arrays plus presence flags.

    Under zero_fill dropout an absent modality keeps its (zeroed) array and
    stays flagged present, so downstream token shapes are static. Under
    drop_tokens the array is kept but the flag marks it for omission from
    the token stream.
    """

    arrays: dict[str, np.ndarray]
    present: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        if not self.present:
            self.present = {name: True for name in self.arrays}


def apply_modality_dropout(sample: ModalSample, mask: SwitchMask, spec: ModalitySpec,
                           mode: str = "zero_fill") -> ModalSample:
    """Apply a switch mask to a sample; present modalities pass through bit-identical."""
    if mode not in DROPOUT_MODES:
        raise ConfigError(f"unknown dropout mode {mode!r}")
    mask.validate(spec)
    if set(sample.arrays) != set(spec.names):
        raise AlignmentError(
            f"sample modalities {sorted(sample.arrays)} do not match spec {sorted(spec.names)}"
        )
    arrays = {}
    present = {}
    for name, bit in zip(spec.names, mask.bits):
        arr = sample.arrays[name]
        if bit:
            arrays[name] = arr
            present[name] = sample.present.get(name, True)
        elif mode == "zero_fill":
            arrays[name] = np.zeros_like(arr)
            present[name] = True
        else:
            arrays[name] = arr
            present[name] = False
    return ModalSample(arrays=arrays, present=present)


def assign_fixed_missing_ratio(dataset_size: int, ratio: float, spec: ModalitySpec,
                               rng: np.random.Generator) -> list[MissingCondition]:
    """Static per-sample condition table for the fixed-missing-ratio baseline.

    round(ratio * dataset_size) samples get a non-complete condition drawn
    uniformly; the rest stay complete. The table is fixed before training,
    which is exactly the per-sample storage cost the switch-mask strategy
    avoids.
    """
    if not 0.0 <= ratio <= 1.0:
        raise ConfigError(f"missing ratio must be within [0, 1], got {ratio}")
    if dataset_size < 1:
        raise ConfigError("dataset_size must be positive")
    conditions = enumerate_conditions(spec)
    complete = conditions[0]
    incomplete = conditions[1:]
    n_missing = int(round(ratio * dataset_size))
    assignment = [complete] * dataset_size
    if n_missing and not incomplete:
        raise ConfigError("spec admits no incomplete condition")
    chosen = rng.permutation(dataset_size)[:n_missing]
    for idx in chosen:
        assignment[idx] = incomplete[rng.integers(0, len(incomplete))]
    return assignment
