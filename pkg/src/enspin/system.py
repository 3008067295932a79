"""Spin system definitions, field configuration and the .sys file format.

A spin system is one S=1/2 electron plus up to four I=1/2 nuclei, each
carrying a hyperfine tensor expressed in the molecular frame (the
alpha-proton hyperfine principal axis system).

The definition file is plain text with one block per tensor::

    [g]
    values = 2.00250 2.00373 2.00417
    axes = -0.1657 0.9779 0.1272 / -0.9811 -0.1766 0.0797 / 0.1004 -0.1115 0.9887

    [nucleus H]
    gamma_mhz_per_t = 42.577
    values = -26.6 -56.0 -91.5
    axes = 1 0 0 / 0 1 0 / 0 0 1

``values`` are principal values (dimensionless for g, MHz for hyperfine);
``axes`` rows are the direction cosines of each principal axis relative to
the alpha-proton principal frame, in the same order as ``values``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .constants import B0_DEFAULT, GAMMAS_BY_ISOTOPE
from .tensors import RankTwoTensor, unit

MAX_NUCLEI = 4


@dataclass(frozen=True)
class Nucleus:
    label: str
    gyromagnetic_ratio: float          # rad s^-1 T^-1
    hyperfine: RankTwoTensor           # MHz
    sign_convention: int = 1           # +-1 applied to the principal value set

    def __post_init__(self):
        if self.gyromagnetic_ratio == 0.0:
            raise ValueError(f"nucleus {self.label}: gyromagnetic ratio must be nonzero")
        if self.sign_convention not in (1, -1):
            raise ValueError("sign_convention must be +1 or -1")


@dataclass(frozen=True)
class SpinSystem:
    g_tensor: RankTwoTensor
    nuclei: tuple[Nucleus, ...] = ()

    def __post_init__(self):
        nuclei = tuple(self.nuclei)
        object.__setattr__(self, "nuclei", nuclei)
        if len(nuclei) > MAX_NUCLEI:
            raise ValueError(
                f"{len(nuclei)} nuclei exceeds the supported maximum of {MAX_NUCLEI} "
                f"(Hilbert dimension limit {2 ** (MAX_NUCLEI + 1)})"
            )
        labels = [n.label for n in nuclei]
        if len(set(labels)) != len(labels):
            raise ValueError("nucleus labels must be unique")

    @property
    def n_nuclei(self) -> int:
        return len(self.nuclei)

    @property
    def dim(self) -> int:
        return 2 ** (self.n_nuclei + 1)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(n.label for n in self.nuclei)

    def nucleus(self, label: str) -> Nucleus:
        for n in self.nuclei:
            if n.label == label:
                return n
        raise KeyError(f"no nucleus labelled {label!r}")

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def subset(self, labels) -> "SpinSystem":
        return SpinSystem(self.g_tensor, tuple(self.nucleus(l) for l in labels))


@dataclass(frozen=True)
class FieldConfig:
    """Static field magnitude (tesla) and orientation in the molecular frame."""

    b0: float = B0_DEFAULT
    orientation: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        v = np.asarray(self.orientation, dtype=float).reshape(3)
        n = np.linalg.norm(v)
        if abs(n - 1.0) > 1e-6:
            raise ValueError("orientation must be a unit vector (use from_angles or unit())")
        # snap to exact unit norm for downstream 1e-12 invariants
        object.__setattr__(self, "orientation", v / n)
        if self.b0 < 0:
            raise ValueError("field magnitude must be nonnegative")

    @classmethod
    def from_angles(cls, theta_deg: float, phi_deg: float, b0: float = B0_DEFAULT) -> "FieldConfig":
        if not 0.0 <= theta_deg <= 180.0:
            raise ValueError("theta must be in [0, 180] degrees")
        phi_deg = phi_deg % 360.0
        th, ph = math.radians(theta_deg), math.radians(phi_deg)
        return cls(b0, np.array([math.sin(th) * math.cos(ph),
                                 math.sin(th) * math.sin(ph),
                                 math.cos(th)]))

    @classmethod
    def from_direction(cls, direction, b0: float = B0_DEFAULT) -> "FieldConfig":
        return cls(b0, unit(direction))

    @property
    def angles_deg(self) -> tuple[float, float]:
        x, y, z = self.orientation
        theta = math.degrees(math.acos(max(-1.0, min(1.0, z))))
        phi = math.degrees(math.atan2(y, x)) % 360.0
        return theta, phi


# ---------------------------------------------------------------------------
# .sys file format
# ---------------------------------------------------------------------------

def _format_axes(axes: np.ndarray) -> str:
    return " / ".join(" ".join(f"{c:.6f}" for c in row) for row in axes)


def _parse_axes(text: str) -> np.ndarray:
    rows = [r.split() for r in text.split("/")]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("axes must be three '/'-separated rows of three cosines")
    return np.array([[float(c) for c in r] for r in rows])


def dump_system(system: SpinSystem) -> str:
    lines = ["[g]",
             "values = " + " ".join(f"{v:.6f}" for v in system.g_tensor.principal_values),
             "axes = " + _format_axes(system.g_tensor.principal_axes),
             ""]
    for n in system.nuclei:
        lines += [f"[nucleus {n.label}]",
                  f"gamma_mhz_per_t = {n.gyromagnetic_ratio / (2e6 * math.pi):.6f}",
                  "values = " + " ".join(f"{v:.6f}" for v in n.hyperfine.principal_values),
                  "axes = " + _format_axes(n.hyperfine.principal_axes),
                  f"sign = {n.sign_convention:+d}",
                  ""]
    return "\n".join(lines)


def parse_system(text: str) -> SpinSystem:
    blocks: list[tuple[str, dict]] = []
    current: dict | None = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ValueError(f"malformed section header: {raw!r}")
            current = {}
            blocks.append((line[1:-1].strip(), current))
        else:
            if current is None or "=" not in line:
                raise ValueError(f"unexpected line outside a section: {raw!r}")
            key, val = line.split("=", 1)
            current[key.strip()] = val.strip()

    g_tensor = None
    nuclei = []
    for header, kv in blocks:
        if header == "g":
            g_tensor = RankTwoTensor.from_table(
                [float(x) for x in kv["values"].split()], _parse_axes(kv["axes"]))
        elif header.startswith("nucleus"):
            label = header.split(None, 1)[1]
            gamma = 2e6 * math.pi * float(kv["gamma_mhz_per_t"])
            hyperfine = RankTwoTensor.from_table(
                [float(x) for x in kv["values"].split()], _parse_axes(kv["axes"]))
            nuclei.append(Nucleus(label, gamma, hyperfine,
                                  int(kv.get("sign", "1"))))
        else:
            raise ValueError(f"unknown section [{header}]")
    if g_tensor is None:
        raise ValueError("system file must contain a [g] section")
    return SpinSystem(g_tensor, tuple(nuclei))


def save_system(system: SpinSystem, path) -> None:
    Path(path).write_text(dump_system(system))


BUILTIN_SYSTEMS = {
    "2qubit": "table1_2qubit.sys",
    "3qubit": "table1_3qubit.sys",
    "carboxyl": "table2_carboxyl.sys",
    "5qubit": "tables12_5qubit.sys",
}


def load_system(name_or_path) -> SpinSystem:
    """Load a builtin system by name or any .sys file by path."""
    name = str(name_or_path)
    if name in BUILTIN_SYSTEMS:
        text = resources.files("enspin.data").joinpath(BUILTIN_SYSTEMS[name]).read_text()
        return parse_system(text)
    p = Path(name)
    if not p.exists():
        raise FileNotFoundError(
            f"{name!r} is neither a builtin system {sorted(BUILTIN_SYSTEMS)} nor a file")
    return parse_system(p.read_text())


def isotope_gamma(symbol: str) -> float:
    return GAMMAS_BY_ISOTOPE[symbol]
