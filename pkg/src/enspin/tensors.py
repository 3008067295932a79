"""Rank-two interaction tensors (g and hyperfine) and frame helpers.

All tensors live in the molecular reference frame, which is the principal
axis system of the alpha-proton hyperfine tensor. A tensor is stored as its
three principal values plus the 3x3 direction-cosine matrix whose *rows* are
the principal axes expressed in the molecular frame (the layout used in
crystallographic tables: one row of cosines per principal value).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ORTHO_TOL = 1e-10


def orthonormalize(axes: np.ndarray) -> np.ndarray:
    """Nearest orthogonal matrix (polar decomposition via SVD).

    Experimental direction-cosine tables are typically orthonormal only to
    ~1e-3; loaders polish them with this before constructing tensors.
    """
    u, _, vt = np.linalg.svd(np.asarray(axes, dtype=float))
    return u @ vt


def orthonormality_defect(axes: np.ndarray) -> float:
    a = np.asarray(axes, dtype=float)
    return float(np.abs(a @ a.T - np.eye(3)).max())


@dataclass(frozen=True)
class RankTwoTensor:
    """Symmetric 3x3 tensor given by principal values and principal axes.

    principal_values: three reals (dimensionless for g, MHz for hyperfine).
    principal_axes: 3x3 orthonormal matrix, row i = direction cosines of the
        axis belonging to principal_values[i], in the molecular frame.
    """

    principal_values: np.ndarray
    principal_axes: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        vals = np.asarray(self.principal_values, dtype=float).reshape(3)
        axes = np.asarray(self.principal_axes, dtype=float).reshape(3, 3)
        object.__setattr__(self, "principal_values", vals)
        object.__setattr__(self, "principal_axes", axes)
        if orthonormality_defect(axes) > ORTHO_TOL:
            raise ValueError(
                "principal_axes not orthonormal to within "
                f"{ORTHO_TOL:g} (defect {orthonormality_defect(axes):.2e}); "
                "use RankTwoTensor.from_table for table-precision input"
            )

    @classmethod
    def from_table(cls, values, axes, max_defect: float = 0.02) -> "RankTwoTensor":
        """Build from table-precision direction cosines, polishing them.

        Rejects input farther than ``max_defect`` from orthogonal, which
        would indicate a transcription error rather than rounding.
        """
        axes = np.asarray(axes, dtype=float).reshape(3, 3)
        defect = orthonormality_defect(axes)
        if defect > max_defect:
            raise ValueError(f"direction cosines defect {defect:.3f} exceeds {max_defect}")
        return cls(np.asarray(values, dtype=float), orthonormalize(axes))

    @classmethod
    def isotropic(cls, value: float) -> "RankTwoTensor":
        return cls(np.full(3, float(value)), np.eye(3))

    @classmethod
    def from_cartesian(cls, mat: np.ndarray) -> "RankTwoTensor":
        """Eigendecompose a symmetric matrix; principal values ascending."""
        mat = np.asarray(mat, dtype=float)
        if np.abs(mat - mat.T).max() > 1e-9 * max(1.0, np.abs(mat).max()):
            raise ValueError("matrix is not symmetric")
        vals, vecs = np.linalg.eigh((mat + mat.T) / 2)
        return cls(vals, vecs.T)

    def cartesian(self) -> np.ndarray:
        """Cartesian matrix in the molecular frame: R^T diag(v) R."""
        r = self.principal_axes
        return r.T @ np.diag(self.principal_values) @ r

    @property
    def isotropic_value(self) -> float:
        return float(np.mean(self.principal_values))

    def sorted(self) -> "RankTwoTensor":
        """Copy with principal values in ascending order."""
        order = np.argsort(self.principal_values)
        return RankTwoTensor(self.principal_values[order], self.principal_axes[order])

    def along(self, direction: np.ndarray) -> float:
        """Bilinear form l.T @ A @ l for a unit vector l."""
        l = unit(direction)
        return float(l @ self.cartesian() @ l)


def unit(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector has no direction")
    return v / n


def rotation_about(axis: np.ndarray, angle_rad: float) -> np.ndarray:
    """Rodrigues rotation matrix about ``axis`` by ``angle_rad``."""
    k = unit(axis)
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle_rad) * kx + (1 - np.cos(angle_rad)) * (kx @ kx)


def complete_frame(z: np.ndarray) -> np.ndarray:
    """Deterministic right-handed orthonormal frame with given z axis.

    Returns a matrix with rows (x, y, z) in molecular coordinates. Used to
    define the lab frame in which the static field is along z.
    """
    z = unit(z)
    ref = np.array([0.0, 0.0, 1.0]) if abs(z[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    x = ref - (ref @ z) * z
    x = unit(x)
    y = np.cross(z, x)
    return np.array([x, y, z])


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random rotation from a random axis and angle."""
    v = rng.normal(size=3)
    return rotation_about(v, rng.uniform(0, 2 * np.pi))
