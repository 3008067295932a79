import math

import numpy as np
import pytest

from enspin.constants import B0_DEFAULT, GAMMA_13C, GAMMA_1H, HBAR, MU_B
from enspin.hamiltonian import (build_full_hamiltonian,
                                build_secular_hamiltonian, secular_params,
                                thermal_polarization)
from enspin.system import FieldConfig, Nucleus, SpinSystem, load_system
from enspin.tensors import RankTwoTensor, random_rotation

S3 = load_system("3qubit")
S5 = load_system("5qubit")


def bare_electron(g=2.0023):
    return SpinSystem(RankTwoTensor.isotropic(g))


def test_two_level_zeeman_gap():
    field = FieldConfig.from_angles(0, 0, 0.3568)
    h = build_full_hamiltonian(bare_electron(), field)
    w = np.linalg.eigvalsh(h)
    expected = 2.0023 * MU_B * 0.3568 / HBAR
    assert w[1] - w[0] == pytest.approx(expected, rel=1e-12)
    assert (w[1] - w[0]) / (2e9 * math.pi) == pytest.approx(10.0, rel=1e-3)
    assert np.allclose(w, [-expected / 2, expected / 2], rtol=1e-12)


def test_zero_field_zero_hyperfine_is_zero():
    sys0 = SpinSystem(RankTwoTensor.isotropic(2.0),
                      (Nucleus("H", GAMMA_1H, RankTwoTensor.isotropic(0.0)),))
    h = build_full_hamiltonian(sys0, FieldConfig(0.0, np.array([0, 0, 1.0])))
    assert np.abs(h).max() == 0.0


def test_hermitian_and_traceless_on_grid():
    for theta in range(0, 181, 45):
        for phi in range(0, 360, 45):
            field = FieldConfig.from_angles(theta, phi)
            h = build_full_hamiltonian(S3, field)
            scale = np.abs(h).max()
            assert np.abs(h - h.conj().T).max() < 1e-10 * scale
            w = np.linalg.eigvalsh(h)
            assert abs(w.sum()) < 1e-9 * np.abs(w).max()


def test_spectrum_invariant_under_joint_rotation():
    rng = np.random.default_rng(42)
    field = FieldConfig.from_angles(29, 13)
    w0 = np.sort(np.linalg.eigvalsh(build_full_hamiltonian(S3, field)))
    for _ in range(20):
        rot = random_rotation(rng)
        g = S3.g_tensor
        g2 = RankTwoTensor(g.principal_values, g.principal_axes @ rot.T)
        nuclei = tuple(
            Nucleus(n.label, n.gyromagnetic_ratio,
                    RankTwoTensor(n.hyperfine.principal_values,
                                  n.hyperfine.principal_axes @ rot.T),
                    n.sign_convention)
            for n in S3.nuclei)
        sys_rot = SpinSystem(g2, nuclei)
        field_rot = FieldConfig(field.b0, rot @ field.orientation)
        w1 = np.sort(np.linalg.eigvalsh(build_full_hamiltonian(sys_rot, field_rot)))
        assert np.abs(w1 - w0).max() < 1e-9 * np.abs(w0).max()


def test_secular_params_table3_values():
    field = FieldConfig.from_angles(29, 13)
    p = secular_params(S3, field)
    h = p.nucleus("H")
    cm = p.nucleus("Cm")
    assert h.a_zz == pytest.approx(-76.60, abs=0.05)
    assert h.b_perp == pytest.approx(27.07, abs=0.05)
    assert abs(h.tan_eta) == pytest.approx(0.1418, abs=0.001)
    assert cm.a_zz == pytest.approx(29.21, abs=0.05)
    assert cm.b_perp == pytest.approx(17.78, abs=0.05)
    assert abs(cm.tan_eta) == pytest.approx(0.1203, abs=0.001)


def test_secular_params_table4_endor_row():
    field = FieldConfig.from_angles(90, 90)
    p = secular_params(S3, field)
    h = p.nucleus("H")
    assert h.a_zz == pytest.approx(-56.0, abs=1e-6)
    assert h.b_perp == pytest.approx(0.0, abs=1e-9)
    assert h.tan_eta == pytest.approx(0.0, abs=1e-12)


def test_secular_params_table3_five_qubit():
    field = FieldConfig.from_angles(54, 123)
    p = secular_params(S5, field)
    expected = {"H": 0.1948, "Cm": 0.0303, "C1": 0.0161, "C2": 0.0093}
    for label, tan in expected.items():
        assert abs(p.nucleus(label).tan_eta) == pytest.approx(tan, abs=0.01)


def test_isotropic_hyperfine_has_no_anisotropy():
    sys_iso = SpinSystem(RankTwoTensor.isotropic(2.0),
                         (Nucleus("H", GAMMA_1H, RankTwoTensor.isotropic(50.0)),))
    for theta, phi in [(0, 0), (37, 120), (90, 45)]:
        p = secular_params(sys_iso, FieldConfig.from_angles(theta, phi))
        n = p.nuclei[0]
        assert n.b_perp == pytest.approx(0.0, abs=1e-9)
        assert n.eta == pytest.approx(0.0, abs=1e-12)


def test_secular_invariant_under_azimuthal_rotation():
    # rotating A about the quantization axis leaves A_zz and B_perp unchanged
    rng = np.random.default_rng(5)
    field = FieldConfig.from_angles(63, 200)
    l = field.orientation
    base = secular_params(S3, field).nucleus("H")
    from enspin.tensors import rotation_about
    for _ in range(10):
        rot = rotation_about(l, rng.uniform(0, 2 * np.pi))
        nuclei = tuple(
            Nucleus(n.label, n.gyromagnetic_ratio,
                    RankTwoTensor(n.hyperfine.principal_values,
                                  n.hyperfine.principal_axes @ rot.T),
                    n.sign_convention)
            for n in S3.nuclei)
        p = secular_params(SpinSystem(S3.g_tensor, nuclei), field)
        # g_zz changes (g not rotated); nuclear quantities must not
        assert p.nucleus("H").a_zz == pytest.approx(base.a_zz, abs=1e-9)
        assert p.nucleus("H").b_perp == pytest.approx(base.b_perp, abs=1e-9)


def test_secular_hamiltonian_diagonal_case_by_hand():
    sys1 = SpinSystem(
        RankTwoTensor.isotropic(2.0023),
        (Nucleus("X", 2e6 * math.pi * 15.0 / B0_DEFAULT,  # nu_I = 15 MHz
                 RankTwoTensor([100.0, 100.0, 100.0])),))
    field = FieldConfig.from_angles(0, 0)
    p = secular_params(sys1, field)
    n = p.nuclei[0]
    assert n.nu_i_mhz == pytest.approx(15.0, rel=1e-12)
    assert n.a_zz == pytest.approx(100.0, rel=1e-12)
    assert n.b_perp == pytest.approx(0.0, abs=1e-9)
    h = build_secular_hamiltonian(p)
    w = np.sort(np.diag(h).real)
    mhz = 2e6 * math.pi
    ws = p.omega_s
    expected = np.sort([
        ws / 2 - 15 * mhz / 2 + math.pi * 100e6 / 2,
        ws / 2 + 15 * mhz / 2 - math.pi * 100e6 / 2,
        -ws / 2 - 15 * mhz / 2 - math.pi * 100e6 / 2,
        -ws / 2 + 15 * mhz / 2 + math.pi * 100e6 / 2,
    ])
    assert np.allclose(w, expected, rtol=1e-12)
    assert np.abs(h - np.diag(np.diag(h))).max() == 0.0


def test_secular_vs_full_eigenvalues_first_order():
    # secular eigenvalues approximate the full ones to O((A/omega_S)^2)
    field = FieldConfig.from_angles(29, 13)
    w_full = np.sort(np.linalg.eigvalsh(build_full_hamiltonian(S3, field)))
    w_sec = np.sort(np.linalg.eigvalsh(build_secular_hamiltonian(secular_params(S3, field))))
    scale = np.abs(w_full).max()
    # second-order shifts ~ (2pi*100MHz)^2 / omega_S ~ 1e6 rad/s
    assert np.abs(w_full - w_sec).max() < 5e-4 * scale


def test_all_couplings_zero_pure_zeeman():
    sys0 = SpinSystem(RankTwoTensor.isotropic(2.0),
                      (Nucleus("H", GAMMA_1H, RankTwoTensor.isotropic(0.0)),))
    p = secular_params(sys0, FieldConfig.from_angles(0, 0))
    h = build_secular_hamiltonian(p)
    assert np.abs(h - np.diag(np.diag(h))).max() == 0.0
    w = np.sort(np.diag(h).real)
    expected = np.sort([p.omega_s / 2 - p.nuclei[0].omega_i / 2,
                        p.omega_s / 2 + p.nuclei[0].omega_i / 2,
                        -p.omega_s / 2 - p.nuclei[0].omega_i / 2,
                        -p.omega_s / 2 + p.nuclei[0].omega_i / 2])
    assert np.allclose(w, expected, rtol=1e-12)


def test_dominance_warning():
    sys_big = SpinSystem(RankTwoTensor.isotropic(2.0),
                         (Nucleus("H", GAMMA_1H, RankTwoTensor.isotropic(5000.0)),))
    with pytest.warns(UserWarning):
        secular_params(sys_big, FieldConfig.from_angles(0, 0, 0.01))


def test_tan_eta_matches_exact_matrix_elements():
    # ratio of forbidden to allowed |<Sx>| from exact diagonalization
    # equals tan(eta) to first order when the coupling is weak
    from enspin.spectra import enumerate_esr_transitions
    scale = 0.004  # |2 pi A| / omega_S ~ 0.004 < 0.01
    a = RankTwoTensor([40.0 * scale * 25, 40.0 * scale * 25, 110.0 * scale * 25],
                      np.eye(3))
    # use plain scaled tensor: principal values ~ (4, 4, 11) MHz
    a = RankTwoTensor(np.array([4.0, 4.0, 11.0]), np.eye(3))
    sys1 = SpinSystem(RankTwoTensor.isotropic(2.0023),
                      (Nucleus("H", GAMMA_1H, a),))
    field = FieldConfig.from_angles(47, 0)
    p = secular_params(sys1, field)
    trans = enumerate_esr_transitions(sys1, field, exact=True)
    allowed = [t for t in trans if t.kind == "allowed"]
    forbidden = [t for t in trans if t.kind == "forbidden"]
    ratio = math.sqrt(max(t.intensity for t in forbidden) /
                      max(t.intensity for t in allowed))
    assert ratio == pytest.approx(abs(p.nuclei[0].tan_eta), abs=1e-3)


def test_thermal_polarization_values():
    eps = thermal_polarization(10e9, 300.0)
    assert eps == pytest.approx(8.0e-4, rel=0.02)
    assert thermal_polarization(1.0, 300.0) == pytest.approx(0.0, abs=1e-12)
    nu_h = GAMMA_1H * B0_DEFAULT / (2 * math.pi)
    nu_c = GAMMA_13C * B0_DEFAULT / (2 * math.pi)
    assert eps / thermal_polarization(nu_h, 300.0) == pytest.approx(660, rel=0.01)
    assert eps / thermal_polarization(nu_c, 300.0) == pytest.approx(2620, rel=0.01)
    with pytest.raises(ValueError):
        thermal_polarization(10e9, 0.0)
