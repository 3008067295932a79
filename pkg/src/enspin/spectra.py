"""ESR and ENDOR transition enumeration and spectrum rendering.

Two computation routes are provided for every observable: exact
diagonalization of the full Hamiltonian, and the first-order expressions in
the electron-Zeeman-dominant regime. Tests use one as the oracle for the
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import H_PLANCK, MU_B
from .hamiltonian import (SX, build_full_hamiltonian, secular_params,
                          site_operator, spin_vector)
from .system import FieldConfig, SpinSystem
from .tensors import unit

DEFAULT_ESR_LINEWIDTH_MHZ = 12.0
DEFAULT_ENDOR_LINEWIDTH_MHZ = 0.1


@dataclass(frozen=True)
class Transition:
    from_index: int
    to_index: int
    frequency: float            # MHz, nonnegative
    intensity: float            # |<i|Sx|j>|^2 (ESR) or |<i|Ix|j>|^2 (nmr)
    kind: str                   # "allowed" | "forbidden" | "nmr"
    nuclear_flips: tuple[str, ...] = ()
    ms_branch: float | None = None     # +-1/2 for nmr transitions
    ambiguous: bool = False     # no dominant basis component (anticrossing)

    def __post_init__(self):
        if self.frequency < 0 or self.intensity < 0:
            raise ValueError("frequency and intensity must be nonnegative")


@dataclass(frozen=True)
class SpectrumTrace:
    axis: np.ndarray            # MHz (frequency mode) or gauss (field mode)
    amplitude: np.ndarray
    linewidth: float            # MHz (FWHM)
    mode: str = "frequency"

    def __post_init__(self):
        a = np.asarray(self.axis, dtype=float)
        y = np.asarray(self.amplitude, dtype=float)
        if a.shape != y.shape:
            raise ValueError("axis and amplitude must match")
        if np.any(np.diff(a) < 0):
            raise ValueError("axis must be sorted ascending")
        if np.any(y < -1e-30):
            raise ValueError("amplitudes must be nonnegative")
        object.__setattr__(self, "axis", a)
        object.__setattr__(self, "amplitude", y)


# ---------------------------------------------------------------------------
# eigen labeling
# ---------------------------------------------------------------------------

def labeled_eigensystem(h: np.ndarray):
    """Eigensystem with each eigenvector labeled by its dominant basis state.

    Returns (energies, vectors, labels, ambiguous) where ambiguous marks
    vectors whose dominant component weight is <= 0.5 (near anticrossings).
    """
    energies, vectors = np.linalg.eigh(h)
    weights = np.abs(vectors) ** 2
    labels = np.argmax(weights, axis=0)
    ambiguous = weights[labels, np.arange(len(labels))] <= 0.5
    return energies, vectors, labels, ambiguous


def _flip_info(label_i: int, label_j: int, system: SpinSystem):
    diff = label_i ^ label_j
    n = system.n_nuclei
    electron_flip = bool((diff >> n) & 1)
    flips = tuple(system.labels[k] for k in range(n) if (diff >> (n - 1 - k)) & 1)
    return electron_flip, flips


# ---------------------------------------------------------------------------
# first-order machinery (lab-frame bilinear forms)
# ---------------------------------------------------------------------------

def _forms(system: SpinSystem, l: np.ndarray, nucleus):
    g = system.g_tensor.cartesian()
    a = nucleus.hyperfine.cartesian()
    gamma_full = g @ a @ a @ g
    ga = g @ a
    return float(l @ gamma_full @ l), float(l @ ga @ l)


def effective_g(system: SpinSystem, direction) -> float:
    """sqrt(l . g.g . l), the resonance-condition g value."""
    l = unit(direction)
    gg = system.g_tensor.cartesian()
    return math.sqrt(float(l @ (gg @ gg) @ l))


def first_order_levels(system: SpinSystem, field: FieldConfig, m_s: float,
                       m_i: dict[str, float]) -> float:
    """First-order energy level in MHz for quantum numbers (M_S, {M_I^n}).

    Includes the g.A.A.g and g.A bilinear forms with the field direction
    cosines and the exact nuclear Zeeman contribution.
    """
    if abs(m_s) != 0.5:
        raise ValueError("electron projection must be +-1/2")
    l = unit(field.orientation)
    g = effective_g(system, l)
    nu_e = g * MU_B * field.b0 / H_PLANCK / 1e6     # MHz
    e = nu_e * m_s
    for nuc in system.nuclei:
        mi = m_i[nuc.label]
        if abs(mi) != 0.5:
            raise ValueError("nuclear projections must be +-1/2")
        gamma_aa, ga = _forms(system, l, nuc)
        nu_i = nuc.gyromagnetic_ratio * field.b0 / (2e6 * math.pi)
        term = gamma_aa / g**2 + nu_i**2 / m_s**2 - 2 * nu_i * ga / (g * m_s)
        e += math.sqrt(max(term, 0.0)) * mi * m_s
    return e


def enumerate_esr_transitions(system: SpinSystem, field: FieldConfig,
                              exact: bool = True) -> list[Transition]:
    """All electron-flip transitions with frequencies (MHz) and intensities.

    Exact mode diagonalizes the full Hamiltonian and evaluates |<i|Sx|j>|^2
    between every pair whose dominant labels differ in the electron bit
    (including multi-nucleus flips). First-order mode enumerates the allowed
    and single-flip lines from the signed secular effective frequencies,
    with intensities from the tilt angles (cos^2/sin^2 eta).
    """
    if system.dim > 32:
        raise ValueError("Hilbert dimension above 32 unsupported")
    if exact:
        return _enumerate_exact(system, field)
    return _enumerate_first_order(system, field)


def _enumerate_exact(system: SpinSystem, field: FieldConfig) -> list[Transition]:
    h = build_full_hamiltonian(system, field)
    energies, vectors, labels, ambiguous = labeled_eigensystem(h)
    n_sites = system.n_nuclei + 1
    sx = site_operator(SX, 0, n_sites)
    sx_eig = vectors.conj().T @ sx @ vectors
    out = []
    dim = system.dim
    for i in range(dim):
        for j in range(dim):
            li, lj = int(labels[i]), int(labels[j])
            if li >= lj:
                continue
            electron_flip, flips = _flip_info(li, lj, system)
            if not electron_flip:
                continue
            kind = "allowed" if not flips else "forbidden"
            out.append(Transition(
                from_index=i, to_index=j,
                frequency=abs(energies[i] - energies[j]) / (2e6 * math.pi),
                intensity=float(abs(sx_eig[i, j]) ** 2),
                kind=kind, nuclear_flips=flips,
                ambiguous=bool(ambiguous[i] or ambiguous[j])))
    out.sort(key=lambda t: t.frequency)
    return out


def _enumerate_first_order(system: SpinSystem, field: FieldConfig) -> list[Transition]:
    l = unit(field.orientation)
    nu_e = effective_g(system, l) * MU_B * field.b0 / H_PLANCK / 1e6
    params = secular_params(system, field)
    k = system.n_nuclei
    out = []
    for flip_idx in [None] + list(range(k)):
        for conf in range(2 ** k):
            signs = [1 if (conf >> (k - 1 - q)) & 1 else -1 for q in range(k)]
            freq = nu_e
            inten = 0.25
            flips = ()
            for q, nuc in enumerate(params.nuclei):
                if q == flip_idx:
                    freq += signs[q] * nuc.forbidden_half_shift
                    inten *= math.sin(nuc.eta) ** 2
                    flips = (nuc.label,)
                else:
                    freq += signs[q] * nuc.allowed_half_shift
                    inten *= math.cos(nuc.eta) ** 2
            out.append(Transition(
                from_index=-1, to_index=-1, frequency=abs(freq),
                intensity=inten,
                kind="allowed" if flip_idx is None else "forbidden",
                nuclear_flips=flips))
    out.sort(key=lambda t: t.frequency)
    return out


def census(transitions: list[Transition]) -> dict[str, int]:
    """Counts of allowed and single-flip forbidden lines."""
    allowed = sum(1 for t in transitions if t.kind == "allowed")
    single = sum(1 for t in transitions if t.kind == "forbidden" and len(t.nuclear_flips) == 1)
    return {"allowed": allowed, "forbidden_single_flip": single,
            "total_labeled": allowed + single}


# ---------------------------------------------------------------------------
# ENDOR
# ---------------------------------------------------------------------------

def endor_frequencies(system: SpinSystem, field: FieldConfig, label: str,
                      exact: bool = False) -> tuple[float, float]:
    """(nu_plus, nu_minus) in MHz for the nucleus ``label``.

    First-order mode evaluates
        nu_pm^2 = nu_I^2 + (l.gAAg.l)/(4 g^2) -+ (nu_I/g) (l.gA.l);
    exact mode averages the eigen-gaps of the full Hamiltonian between
    states differing only in this nucleus within each electron manifold.
    """
    nuc = system.nucleus(label)
    if not exact:
        l = unit(field.orientation)
        g = effective_g(system, l)
        gamma_aa, ga = _forms(system, l, nuc)
        nu_i = nuc.gyromagnetic_ratio * field.b0 / (2e6 * math.pi)
        base = nu_i**2 + gamma_aa / (4 * g**2)
        plus2 = base - nu_i * ga / g
        minus2 = base + nu_i * ga / g
        if plus2 < 0 or minus2 < 0:
            raise ValueError("negative squared ENDOR frequency; outside first-order validity")
        return math.sqrt(plus2), math.sqrt(minus2)

    h = build_full_hamiltonian(system, field)
    energies, _, labels, _ = labeled_eigensystem(h)
    n = system.n_nuclei
    pos = 1 << (n - 1 - system.index_of(label))
    gaps = {0: [], 1: []}
    order = {int(l_): idx for idx, l_ in enumerate(labels)}
    for lab, idx in order.items():
        if lab & pos:
            continue
        partner = order.get(lab | pos)
        if partner is None:
            continue
        ms_bit = (lab >> n) & 1
        gaps[ms_bit].append(abs(energies[idx] - energies[partner]) / (2e6 * math.pi))
    # electron bit 0 is m_S=+1/2
    return float(np.mean(gaps[0])), float(np.mean(gaps[1]))


def enumerate_nmr_transitions(system: SpinSystem, field: FieldConfig,
                              exact: bool = False) -> list[Transition]:
    """Nuclear transitions per nucleus and electron manifold."""
    out = []
    for nuc in system.nuclei:
        plus, minus = endor_frequencies(system, field, nuc.label, exact=exact)
        for branch, freq in ((0.5, plus), (-0.5, minus)):
            out.append(Transition(
                from_index=-1, to_index=-1, frequency=freq, intensity=1.0,
                kind="nmr", nuclear_flips=(nuc.label,), ms_branch=branch))
    out.sort(key=lambda t: t.frequency)
    return out


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def cavity_transfer(freq_mhz, center_ghz: float, q: float):
    """Resonator voltage transfer magnitude |H| with FWHM = nu0/Q."""
    nu0 = center_ghz * 1e3
    return 1.0 / np.sqrt(1.0 + (2.0 * q * (np.asarray(freq_mhz, dtype=float) - nu0) / nu0) ** 2)


def pulse_length_factor(freq_mhz: float, center_ghz: float, q: float) -> float:
    """Duration stretch 1/|H| needed to keep a rotation angle off resonance."""
    return float(1.0 / cavity_transfer(freq_mhz, center_ghz, q))


def render_spectrum(transitions: list[Transition], linewidth: float,
                    mode: str = "frequency",
                    cavity: tuple[float, float] | None = None,
                    g_value: float = 2.0023, b0_tesla: float | None = None,
                    mw_freq_ghz: float | None = None,
                    n_points: int = 2000, pad_linewidths: float = 5.0) -> SpectrumTrace:
    """Lorentzian-broadened stick spectrum.

    mode="frequency": axis in MHz. mode="field-sweep": frequency offsets from
    the microwave frequency map to field via dB = h dnu / (g mu_B), axis in
    gauss around the resonance field. ``cavity=(center_ghz, Q)`` multiplies
    每 stick amplitude by the resonator transfer |H| at the transition
    frequency.
    """
    if linewidth <= 0:
        raise ValueError("linewidth must be positive")
    if not transitions:
        raise ValueError("no transitions to render")
    freqs = np.array([t.frequency for t in transitions])
    amps = np.array([t.intensity for t in transitions])
    if cavity is not None:
        center_ghz, q_factor = cavity
        amps = amps * cavity_transfer(freqs, center_ghz, q_factor)

    if mode == "frequency":
        x_sticks = freqs
        width = linewidth
    elif mode == "field-sweep":
        if mw_freq_ghz is None:
            mw_freq_ghz = (cavity[0] if cavity is not None
                           else float(np.mean(freqs)) / 1e3)
        if b0_tesla is None:
            b0_tesla = H_PLANCK * mw_freq_ghz * 1e9 / (g_value * MU_B)
        db_per_mhz = H_PLANCK * 1e6 / (g_value * MU_B) / 1e-4   # gauss per MHz
        x_sticks = b0_tesla / 1e-4 - (freqs - mw_freq_ghz * 1e3) * db_per_mhz
        width = linewidth * db_per_mhz
    else:
        raise ValueError(f"unknown mode {mode!r}")

    lo = x_sticks.min() - pad_linewidths * width
    hi = x_sticks.max() + pad_linewidths * width
    axis = np.linspace(lo, hi, n_points)
    hwhm = width / 2
    y = np.zeros_like(axis)
    for x0, a in zip(x_sticks, amps):
        y += a * hwhm**2 / ((axis - x0) ** 2 + hwhm**2)
    return SpectrumTrace(axis, y, linewidth, mode)


def transitions_to_rows(transitions: list[Transition]):
    """Rows (frequency_mhz, intensity, kind, flips, ms_branch) for CSV."""
    rows = []
    for t in transitions:
        rows.append((t.frequency, t.intensity, t.kind,
                     "+".join(t.nuclear_flips),
                     "" if t.ms_branch is None else t.ms_branch))
    return rows
