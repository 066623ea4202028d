import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezed_qubits.bath import BathSpec, CoefficientSet, build_coefficient_table
from squeezed_qubits.dynamics import (
    GeneratorSpec,
    IntegrationError,
    IntegratorConfig,
    evolve,
    markov_parameters,
    markov_rhs,
    nonmarkov_rhs,
)
from squeezed_qubits.qubits import (
    S_MINUS,
    S_PLUS,
    density_from_pure,
    dfs_state_phi1,
    dfs_state_phi2,
    dfs_state_phi3,
    initial_psi1,
    ket,
    markov_lindblad_operator,
    squeeze_amplitudes,
)

from conftest import frozen, random_density

ZERO = CoefficientSet(0j, 0j, 0j)
SINGLET = density_from_pure(dfs_state_phi2())


# -- right-hand sides ----------------------------------------------------------


def test_zero_coefficients_give_zero(rng):
    rho = random_density(rng, 4)
    np.testing.assert_array_equal(nonmarkov_rhs(rho, ZERO), 0)


def test_singlet_is_stationary_for_any_coefficients():
    c = CoefficientSet(0.3 - 0.2j, 1.1 + 0.4j, -0.2 + 0.7j)
    np.testing.assert_allclose(nonmarkov_rhs(SINGLET, c), 0, atol=1e-15)
    np.testing.assert_allclose(markov_rhs(SINGLET, 1.0, 0.4, 0.3, 1.2), 0, atol=1e-15)


def test_ground_state_pumped_by_delta():
    rho = density_from_pure(ket("00"))
    out = nonmarkov_rhs(rho, CoefficientSet(1 + 0j, 0j, 0j))
    # 2 S+ rho S- - {S- S+, rho}: |00> depletes at rate 4, the symmetric manifold fills
    expected = np.zeros((4, 4))
    expected[0, 0] = -4
    expected[1:3, 1:3] = 2
    np.testing.assert_allclose(out, expected, atol=1e-15)
    assert abs(np.trace(out)) < 1e-15


def test_triplet_superradiant_rate():
    phi3 = dfs_state_phi3()
    out = markov_rhs(density_from_pure(phi3), 1.0, 0.0, 0.0, 0.0)
    assert np.vdot(phi3, out @ phi3).real == pytest.approx(-2.0, abs=1e-15)


@pytest.mark.parametrize("r", [0.05, 0.31, 1.0])
@pytest.mark.parametrize("theta", [0.0, math.pi / 6, math.pi])
def test_phi1_is_dark_for_markov(r, theta):
    n, m = squeeze_amplitudes(r)
    rho = density_from_pure(dfs_state_phi1(r, theta))
    np.testing.assert_allclose(markov_rhs(rho, 1.0, n, m, theta), 0, atol=1e-12)


def test_markov_equals_single_lindblad_form(rng):
    for r, theta in [(0.31, 0.0), (0.8, 2.1), (0.05, math.pi)]:
        n, m = squeeze_amplitudes(r)
        L = markov_lindblad_operator(n, theta)
        LdL = L.conj().T @ L
        for gamma in (1.0, 0.37):
            for _ in range(20):
                rho = random_density(rng, 4)
                ref = gamma * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
                np.testing.assert_allclose(markov_rhs(rho, gamma, n, m, theta), ref, atol=1e-12, rtol=0)


def test_frozen_nonmarkov_equals_markov(rng):
    for _ in range(100):
        gamma = rng.uniform(0.1, 3)
        n = rng.uniform(0, 3)
        m = rng.uniform(0, math.sqrt(n * (n + 1)))
        theta = rng.uniform(0, 2 * math.pi)
        rho = random_density(rng, int(rng.integers(1, 5)))
        np.testing.assert_allclose(
            nonmarkov_rhs(rho, frozen(gamma, n, m, theta)),
            markov_rhs(rho, gamma, n, m, theta),
            atol=1e-12, rtol=0,
        )


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
)
def test_nonmarkov_output_traceless_and_hermitian(seed, d, mu, al):
    rho = random_density(np.random.default_rng(seed), 4)
    out = nonmarkov_rhs(rho, CoefficientSet(d, mu, al))
    scale = 1 + max(abs(d), abs(mu), abs(al))
    assert abs(np.trace(out)) < 1e-13 * scale
    assert np.max(np.abs(out - out.conj().T)) < 1e-13 * scale


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 4), st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_markov_output_traceless_and_hermitian(seed, n, frac, theta):
    rho = random_density(np.random.default_rng(seed), 4)
    m = frac * math.sqrt(n * (n + 1))
    out = markov_rhs(rho, 1.0, n, m, theta)
    assert abs(np.trace(out)) < 1e-13 * (1 + n)
    assert np.max(np.abs(out - out.conj().T)) < 1e-13 * (1 + n)


# -- generator specs ---------------------------------------------------------------


def test_generator_validation():
    with pytest.raises(ValueError):
        GeneratorSpec.markov(0.0, 0.1, 0.1)
    with pytest.raises(ValueError):
        GeneratorSpec.markov(1.0, -0.1, 0.0)
    with pytest.raises(ValueError):
        GeneratorSpec("nonmarkov")
    with pytest.raises(ValueError):
        GeneratorSpec("bogus")
    assert GeneratorSpec("markov_unsqueezed", n=0.2, m=0.5).m == 0.0


def test_markov_parameters_zero_temperature():
    n, m, theta = markov_parameters(BathSpec(r=0.31, theta=1.0))
    assert n == pytest.approx(0.099218119860254134, abs=1e-15)
    assert m == pytest.approx(0.33024590106291689, abs=1e-15)
    assert theta == 1.0


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rel_tol=0)
    with pytest.raises(ValueError):
        IntegratorConfig(dt_min=1e-3, dt_max=1e-4)
    with pytest.raises(ValueError):
        IntegratorConfig(method="euler")


# -- evolution -------------------------------------------------------------------


def test_zero_generator_constant(rng):
    rho0 = random_density(rng, 3)
    gen = GeneratorSpec.nonmarkov(lambda t: ZERO)
    traj = evolve(rho0, gen, IntegratorConfig(t_max=1.0, sample_dt=0.1))
    assert np.all(np.diff(traj.times) > 0) and traj.times[0] == 0
    assert traj.times[-1] == 1.0
    np.testing.assert_allclose(traj.states, np.broadcast_to(rho0, traj.states.shape), atol=1e-15)


@pytest.mark.parametrize("regime", ["markov", "nonmarkov"])
def test_singlet_constant(regime):
    bath = BathSpec(r=0.31)
    if regime == "markov":
        gen = GeneratorSpec.markov_from_bath(bath)
    else:
        gen = GeneratorSpec.nonmarkov(build_coefficient_table(bath, 5.0))
    traj = evolve(SINGLET, gen, IntegratorConfig(t_max=5.0))
    assert np.max(np.abs(traj.states - SINGLET)) < 1e-8


def test_phi1_markov_constant():
    rho0 = density_from_pure(dfs_state_phi1(0.31, 0.0))
    traj = evolve(rho0, GeneratorSpec.markov_from_bath(BathSpec(r=0.31)), IntegratorConfig(t_max=5.0))
    assert np.max(np.abs(traj.states - rho0)) < 1e-6
    assert np.max(np.abs(traj.concurrence() - 0.55112802853814693)) < 1e-6


def test_adaptive_matches_fixed_step():
    rho0 = density_from_pure(initial_psi1(0.0, 0.31))
    gen = GeneratorSpec.markov_from_bath(BathSpec(r=0.31))
    a = evolve(rho0, gen, IntegratorConfig(t_max=2.0, sample_dt=0.1))
    b = evolve(rho0, gen, IntegratorConfig(method="rk4_fixed", t_max=2.0, dt=1e-3, sample_stride=100))
    np.testing.assert_allclose(a.times, b.times, atol=1e-12)
    np.testing.assert_allclose(a.states, b.states, atol=1e-8)


def test_rk4_step_halving_ratio():
    # fig1a initial state under the Markov generator
    rho0 = density_from_pure(initial_psi1(0.0, 0.31))
    gen = GeneratorSpec.markov_from_bath(BathSpec(r=0.31))

    def final(dt):
        return evolve(rho0, gen, IntegratorConfig(method="rk4_fixed", t_max=2.0, dt=dt, sample_stride=1)).states[-1]

    ref = final(0.0125)
    e1 = np.max(np.abs(final(0.2) - ref))
    e2 = np.max(np.abs(final(0.1) - ref))
    assert 16 * 0.7 < e1 / e2 < 16 * 1.3


def test_structure_diagnostics_recorded():
    rho0 = density_from_pure(initial_psi1(0.0, 0.31))
    traj = evolve(rho0, GeneratorSpec.markov_from_bath(BathSpec(r=0.31)), IntegratorConfig(t_max=2.0))
    assert traj.max_step_trace_dev < 1e-9
    assert traj.max_step_herm_dev < 1e-10
    assert np.min(traj.min_eig) > -1e-6
    np.testing.assert_allclose(np.trace(traj.states, axis1=1, axis2=2), 1, atol=1e-15)
    assert traj.n_steps > 0


def test_step_underflow_raises_with_time():
    gen = GeneratorSpec.markov(1e9, 0.1, 0.0)
    cfg = IntegratorConfig(t_max=1.0, dt_min=1e-6, dt_max=1.0)
    with pytest.raises(IntegrationError) as info:
        evolve(density_from_pure(ket("11")), gen, cfg)
    assert info.value.t >= 0


def test_non_finite_coefficients_raise():
    bad = CoefficientSet(complex("nan"), 0j, 0j)
    gen = GeneratorSpec.nonmarkov(lambda t: bad if t > 0.05 else ZERO)
    with pytest.raises(IntegrationError):
        evolve(density_from_pure(ket("00")), gen, IntegratorConfig(t_max=1.0))


def test_table_coverage_checked():
    table = build_coefficient_table(BathSpec(r=0.31), 1.0)
    gen = GeneratorSpec.nonmarkov(table)
    with pytest.raises(ValueError):
        evolve(SINGLET, gen, IntegratorConfig(t_max=2.0))


def test_direct_quadrature_source_matches_table():
    bath = BathSpec(r=0.31)
    rho0 = density_from_pure(initial_psi1(0.0, 0.31))
    cfg = IntegratorConfig(method="rk4_fixed", t_max=0.5, dt=0.05, sample_stride=1)
    a = evolve(rho0, GeneratorSpec.nonmarkov(bath), cfg)
    b = evolve(rho0, GeneratorSpec.nonmarkov(build_coefficient_table(bath, 0.5)), cfg)
    np.testing.assert_allclose(a.states, b.states, atol=1e-9)
