import math

import numpy as np
import pytest

from squeezed_qubits.qubits import (
    BASIS,
    S_MINUS,
    S_PLUS,
    collective_lowering,
    collective_raising,
    density_from_pure,
    dfs_state_phi1,
    dfs_state_phi2,
    dfs_state_phi3,
    dfs_state_phi4,
    initial_psi1,
    initial_psi2,
    ket,
    markov_lindblad_operator,
    squeeze_amplitudes,
)
from squeezed_qubits.entanglement import pure_state_concurrence

PHI1_00 = 0.95771099371086099  # M / sqrt(N^2 + M^2), r = 0.31
PHI1_11 = 0.28773191085688631  # N / sqrt(N^2 + M^2)


def test_basis_order_is_fixed():
    assert BASIS == ("00", "01", "10", "11")


def test_collective_operator_action():
    sm, sp = collective_lowering(), collective_raising()
    np.testing.assert_array_equal(sp @ ket("11"), 0)
    np.testing.assert_array_equal(sm @ ket("11"), ket("01") + ket("10"))
    np.testing.assert_array_equal(sm @ ket("01"), ket("00"))
    np.testing.assert_array_equal(sm @ ket("10"), ket("00"))
    np.testing.assert_array_equal(sm @ ket("00"), 0)


def test_raising_is_adjoint_of_lowering():
    np.testing.assert_array_equal(S_PLUS, S_MINUS.conj().T)


def test_raising_powers():
    sp2 = S_PLUS @ S_PLUS
    expected = np.zeros((4, 4))
    expected[3, 0] = 2
    np.testing.assert_array_equal(sp2, expected)
    np.testing.assert_array_equal(sp2 @ S_PLUS, 0)


def test_singlet_annihilated_exactly():
    phi2 = dfs_state_phi2()
    assert np.all(S_PLUS @ phi2 == 0)
    assert np.all(S_MINUS @ phi2 == 0)


def test_phi1_amplitudes():
    phi1 = dfs_state_phi1(0.31, 0.0)
    assert phi1[0] == pytest.approx(PHI1_00, abs=1e-14)
    assert phi1[3] == pytest.approx(PHI1_11, abs=1e-14)
    assert phi1[1] == phi1[2] == 0
    flipped = dfs_state_phi1(0.31, math.pi)
    assert flipped[0] == pytest.approx(-PHI1_00, abs=1e-14)
    assert flipped[3] == pytest.approx(PHI1_11, abs=1e-14)


def test_phi1_large_r_limit():
    phi1 = dfs_state_phi1(12.0, 0.0)
    np.testing.assert_allclose(np.abs(phi1[[0, 3]]), [1 / math.sqrt(2)] * 2, atol=1e-9)


def test_phi4_amplitudes():
    phi4 = dfs_state_phi4(0.31, 0.0)
    assert phi4[3] == pytest.approx(PHI1_00, abs=1e-14)
    assert phi4[0] == pytest.approx(-PHI1_11, abs=1e-14)


def test_r_zero_rejected():
    for f in (dfs_state_phi1, dfs_state_phi4):
        with pytest.raises(ValueError):
            f(0.0, 0.0)
    with pytest.raises(ValueError):
        initial_psi1(0.5, 0.0)


@pytest.mark.parametrize("r", [0.05, 0.31, 1.5])
@pytest.mark.parametrize("theta", [0.0, math.pi / 6, math.pi, 4.0])
def test_dfs_basis_orthonormal(r, theta):
    basis = np.array([dfs_state_phi1(r, theta), dfs_state_phi2(), dfs_state_phi3(), dfs_state_phi4(r, theta)])
    gram = basis.conj() @ basis.T
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("r", [0.05, 0.09, 0.3, 0.31])
@pytest.mark.parametrize("theta", [0.0, math.pi / 6, math.pi])
def test_markov_lindblad_operator_annihilates_dark_states(r, theta):
    n, _ = squeeze_amplitudes(r)
    L = markov_lindblad_operator(n, theta)
    assert np.linalg.norm(L @ dfs_state_phi1(r, theta)) < 1e-12
    assert np.linalg.norm(L @ dfs_state_phi2()) < 1e-12


def test_initial_state_endpoints():
    np.testing.assert_allclose(initial_psi1(1.0, 0.31), dfs_state_phi1(0.31), atol=1e-15)
    np.testing.assert_allclose(initial_psi1(0.0, 0.31), dfs_state_phi4(0.31), atol=1e-15)
    np.testing.assert_allclose(initial_psi2(1.0), dfs_state_phi2(), atol=1e-15)
    np.testing.assert_allclose(initial_psi2(0.0), dfs_state_phi3(), atol=1e-15)


def test_psi2_at_inverse_sqrt2_is_basis_state():
    np.testing.assert_allclose(initial_psi2(1 / math.sqrt(2)), ket("01"), atol=1e-15)


def test_psi2_concurrence():
    assert pure_state_concurrence(initial_psi2(0.54)) == pytest.approx(0.4168, abs=1e-12)


@pytest.mark.parametrize("eps", [-0.1, 1.1])
def test_epsilon_range(eps):
    with pytest.raises(ValueError):
        initial_psi2(eps)
    with pytest.raises(ValueError):
        initial_psi1(eps, 0.31)


def test_density_from_pure():
    rho = density_from_pure(dfs_state_phi2())
    expected = np.zeros((4, 4))
    expected[1:3, 1:3] = [[0.5, -0.5], [-0.5, 0.5]]
    np.testing.assert_allclose(rho, expected, atol=1e-15)
    rho = density_from_pure(ket("00"))
    assert rho[0, 0] == 1 and np.count_nonzero(rho) == 1
    rho = density_from_pure(dfs_state_phi1(0.31))
    assert rho[0, 3] == pytest.approx(0.27556401426907347, abs=1e-14)
    assert np.trace(rho) == pytest.approx(1)
    assert np.linalg.matrix_rank(rho) == 1


def test_density_from_pure_rejects_unnormalised():
    with pytest.raises(ValueError):
        density_from_pure(2 * ket("00"))
