"""Spin operators, full and secular Hamiltonians, per-nucleus control params.

Hilbert space ordering: the electron is site 0, nuclei follow in system
order. Basis index bits are (electron, nucleus 1, ..., nucleus K) from most
to least significant; bit 0 means m = +1/2 for that spin.

All Hamiltonians are returned in angular frequency units (rad/s).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, H_PLANCK, K_B, MU_B
from .system import FieldConfig, SpinSystem
from .tensors import complete_frame, unit

SX = np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex)
SY = np.array([[0.0, -0.5j], [0.5j, 0.0]], dtype=complex)
SZ = np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex)
SPIN_HALF = (SX, SY, SZ)


def site_operator(mat: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a single-spin operator at ``site`` in an n-site register."""
    out = np.array([[1.0 + 0j]])
    for k in range(n_sites):
        out = np.kron(out, mat if k == site else np.eye(2, dtype=complex))
    return out


def spin_vector(site: int, n_sites: int) -> list[np.ndarray]:
    """[Sx, Sy, Sz] for the spin at ``site``."""
    return [site_operator(m, site, n_sites) for m in SPIN_HALF]


def electron_ops(system: SpinSystem):
    n = system.n_nuclei + 1
    return spin_vector(0, n)


def nucleus_ops(system: SpinSystem, label: str):
    n = system.n_nuclei + 1
    return spin_vector(1 + system.index_of(label), n)


def lab_frame(field: FieldConfig) -> np.ndarray:
    """Rows (x, y, z) of the lab frame in molecular coordinates, z along B0."""
    return complete_frame(field.orientation)


def build_full_hamiltonian(system: SpinSystem, field: FieldConfig) -> np.ndarray:
    """Full electron-nuclear Hamiltonian in the lab frame (rad/s).

    Electron Zeeman + hyperfine + nuclear Zeeman:
        (mu_B/hbar) B.g.S + sum_n [ 2pi A_n(Hz) S.A.I_n - gamma_n B.I_n ]
    with every tensor rotated from the molecular frame into the lab frame in
    which B0 defines z.
    """
    if system.dim > 32:
        raise ValueError("Hilbert dimension above 32 (more than 4 nuclei) unsupported")
    rot = lab_frame(field)
    n_sites = system.n_nuclei + 1
    dim = system.dim
    b_lab = np.array([0.0, 0.0, field.b0])

    h = np.zeros((dim, dim), dtype=complex)
    s_ops = spin_vector(0, n_sites)
    g_lab = rot @ system.g_tensor.cartesian() @ rot.T
    coup = (MU_B / HBAR) * (b_lab @ g_lab)          # rad/s per spin component
    for beta in range(3):
        h += coup[beta] * s_ops[beta]

    for idx, nuc in enumerate(system.nuclei):
        i_ops = spin_vector(1 + idx, n_sites)
        a_lab = rot @ nuc.hyperfine.cartesian() @ rot.T
        for alpha in range(3):
            for beta in range(3):
                a = a_lab[alpha, beta]
                if a != 0.0:
                    h += (2e6 * math.pi * a) * (s_ops[alpha] @ i_ops[beta])
            zee = nuc.gyromagnetic_ratio * b_lab[alpha]
            if zee != 0.0:
                h -= zee * i_ops[alpha]
    return h


@dataclass(frozen=True)
class NucleusSecular:
    """Secular-frame quantities for one nucleus at a given orientation.

    A_zz and B_perp in MHz; eta angles in radians, defined from the
    arctangent of the transverse-to-longitudinal effective field ratio in
    the two electron manifolds and their half-difference.
    """

    label: str
    omega_i: float           # rad/s
    a_zz: float              # MHz
    b_perp: float            # MHz
    eta_up: float
    eta_down: float
    eta: float

    @property
    def nu_i_mhz(self) -> float:
        return self.omega_i / (2e6 * math.pi)

    @property
    def tan_eta(self) -> float:
        return math.tan(self.eta)

    def nu_hat(self, m_s: float) -> float:
        """Signed nuclear effective frequency in manifold m_s (MHz).

        Magnitude is the NMR transition frequency; the sign carries the
        longitudinal effective-field direction so that E(m_s, m_i) =
        m_i * nu_hat(m_s) with m_i the dominant-I_z label.
        """
        h_z = m_s * self.a_zz - self.nu_i_mhz
        h_x = m_s * self.b_perp
        return math.copysign(math.hypot(h_z, h_x), h_z if h_z != 0 else 1.0)

    @property
    def nu_nmr_up(self) -> float:
        """NMR frequency in the m_S=+1/2 manifold (MHz)."""
        return abs(self.nu_hat(0.5))

    @property
    def nu_nmr_down(self) -> float:
        return abs(self.nu_hat(-0.5))

    @property
    def allowed_half_shift(self) -> float:
        """Half the allowed-line splitting this nucleus produces (MHz)."""
        return 0.5 * (self.nu_hat(0.5) - self.nu_hat(-0.5))

    @property
    def forbidden_half_shift(self) -> float:
        """Half-shift replacing allowed_half_shift on its flipped lines."""
        return 0.5 * (self.nu_hat(0.5) + self.nu_hat(-0.5))


@dataclass(frozen=True)
class SecularParams:
    omega_s: float                      # rad/s electron Larmor (g_zz mu_B B0)
    b0: float
    g_zz: float
    nuclei: tuple[NucleusSecular, ...]

    def nucleus(self, label: str) -> NucleusSecular:
        for n in self.nuclei:
            if n.label == label:
                return n
        raise KeyError(label)


def _arctan_ratio(num: float, den: float) -> float:
    if den == 0.0:
        return math.copysign(math.pi / 2, num) if num != 0.0 else 0.0
    return math.atan(num / den)


def secular_params(system: SpinSystem, field: FieldConfig,
                   dominance_factor: float = 10.0) -> SecularParams:
    """Per-nucleus secular quantities with z along the field direction.

    For each nucleus, rotates A into the frame whose z axis is the field
    direction and returns A_zz = l.A.l, B_perp = |A l - (l.A.l) l| (azimuth
    free), the quantization-axis tilt angles
        eta_up   = arctan(-B / (A_zz + omega_I/pi)),
        eta_down = arctan(-B / (A_zz - omega_I/pi)),
    and eta = (eta_up - eta_down)/2, whose tangent is the forbidden-to-
    allowed transition rate ratio.
    """
    l = unit(field.orientation)
    g_zz = float(l @ system.g_tensor.cartesian() @ l)
    omega_s = g_zz * MU_B * field.b0 / HBAR

    out = []
    for nuc in system.nuclei:
        a_cart = nuc.hyperfine.cartesian()
        al = a_cart @ l
        a_zz = float(l @ al)
        b_perp = math.sqrt(max(float(al @ al) - a_zz**2, 0.0))
        omega_i = nuc.gyromagnetic_ratio * field.b0
        if omega_s != 0.0 and abs(omega_s) < dominance_factor * 2e6 * math.pi * np.abs(a_cart).max():
            warnings.warn(
                f"electron Zeeman ({omega_s:.3e} rad/s) does not dominate hyperfine of "
                f"{nuc.label} by a factor {dominance_factor:g}; secular treatment degraded",
                stacklevel=2)
        two_nu = omega_i / (1e6 * math.pi)          # 2 nu_I in MHz
        eta_up = _arctan_ratio(-b_perp, a_zz + two_nu)
        eta_down = _arctan_ratio(-b_perp, a_zz - two_nu)
        out.append(NucleusSecular(nuc.label, omega_i, a_zz, b_perp,
                                  eta_up, eta_down, 0.5 * (eta_up - eta_down)))
    return SecularParams(omega_s, field.b0, g_zz, tuple(out))


def build_secular_hamiltonian(params: SecularParams) -> np.ndarray:
    """Secular Hamiltonian (rad/s), block diagonal in the electron M_S:

        omega_S S_z - sum_n omega_I^n I_z^n
        + 2pi S_z sum_n (A_zz^n I_z^n + B^n I_x^n)
    """
    n_sites = len(params.nuclei) + 1
    dim = 2**n_sites
    h = np.zeros((dim, dim), dtype=complex)
    sz = site_operator(SZ, 0, n_sites)
    h += params.omega_s * sz
    for idx, nuc in enumerate(params.nuclei):
        iz = site_operator(SZ, 1 + idx, n_sites)
        ix = site_operator(SX, 1 + idx, n_sites)
        h -= nuc.omega_i * iz
        h += 2e6 * math.pi * sz @ (nuc.a_zz * iz + nuc.b_perp * ix)
    return h


def rotating_frame_drift(system: SpinSystem, field: FieldConfig,
                         carrier_hz: float | None = None) -> np.ndarray:
    """Secular Hamiltonian in the electron rotating frame (rad/s).

    The microwave carrier defaults to the electron Larmor frequency, leaving
    zero electron detuning at the nominal orientation.
    """
    params = secular_params(system, field)
    h = build_secular_hamiltonian(params)
    n_sites = system.n_nuclei + 1
    omega_c = params.omega_s if carrier_hz is None else 2 * math.pi * carrier_hz
    return h - omega_c * site_operator(SZ, 0, n_sites)


def thermal_polarization(frequency_hz: float, temperature_k: float) -> float:
    """Two-level thermal polarization tanh(h nu / 2 k_B T)."""
    if temperature_k <= 0:
        raise ValueError("temperature must be positive")
    return math.tanh(H_PLANCK * frequency_hz / (2 * K_B * temperature_k))
