"""Forward problem: Jost data, bound states, endpoints and transmission eigenvalues."""

import numpy as np
import pytest

from src.spectral.errors import InvalidPotential
from src.spectral.forward import (
    EndpointClass,
    Potential,
    a_coefficients,
    bound_states,
    bound_states_from_jost,
    classify_endpoint,
    determinant_at_one,
    endpoint_is_transmission_eigenvalue,
    free_regular,
    jost_function,
    jost_table,
    regular_solution,
    regular_solution_at,
    scattering_matrix,
    spectral_data,
    sum_rule_residual,
    transmission_det,
    transmission_eigenvalues,
    wronskian,
)
from src.spectral.gelfand_levitan import potential_from_A


def test_potential_validation():
    with pytest.raises(InvalidPotential, match="b >= 1"):
        Potential(())
    with pytest.raises(InvalidPotential):
        Potential((1.0, float("nan")))
    V = Potential((1, 2))
    assert V.b == 2
    assert V.site(3) == 0.0
    assert V.edge == 2.0


def test_jost_single_site():
    f0 = jost_function(Potential((2.0,)))
    assert f0.dense(0, 1).tolist() == [1.0, 2.0]


def test_jost_two_sites():
    K = jost_table(Potential((1.5, -0.5)))
    np.testing.assert_allclose(K.rows[0], [1.0, 1.0, -0.75, -0.5])
    np.testing.assert_allclose(K.rows[1], [1.0, -0.5])
    assert K.entry(2, 2) == 1.0
    assert K.entry(0, 7) == 0.0


@pytest.mark.parametrize("b,seed", [(2, 0), (3, 1), (5, 2)])
def test_top_coefficient_is_edge(random_potential, b, seed):
    V = random_potential(b, seed)
    K = jost_table(V)
    assert len(K.rows[0]) == 2 * b
    assert K.entry(0, 2 * b - 1) == pytest.approx(V.edge, abs=1e-13)
    assert K.entry(0, 1) == pytest.approx(V.partial_sum(b), abs=1e-13)


@pytest.mark.parametrize("b,seed", [(1, 3), (3, 4), (4, 5)])
def test_wronskian_and_determinant_identities(random_potential, b, seed):
    K = jost_table(random_potential(b, seed))
    z = np.exp(1j * np.linspace(0.1, 3.0, 7)) * 0.8
    for n in range(0, b + 1):
        np.testing.assert_allclose(wronskian(K, n, z), 1.0 / z - z, atol=1e-10)
        assert determinant_at_one(K, n) == pytest.approx(1.0, abs=1e-10)


def test_scattering_matrix_unimodular_on_circle(random_potential):
    S = scattering_matrix(jost_function(random_potential(3, 6)))
    z = np.exp(1j * np.linspace(0.2, 3.0, 9))
    np.testing.assert_allclose(np.abs(S(z)), 1.0, atol=1e-12)


def test_single_site_bound_state():
    V = Potential((2.0,))
    states = bound_states(jost_function(V), V)
    assert len(states) == 1
    assert states[0].z == pytest.approx(-0.5)
    assert states[0].norm_marchenko == pytest.approx(np.sqrt(3.0))
    assert states[0].mu == pytest.approx(4.5)
    assert bound_states(jost_function(Potential((0.5,))), Potential((0.5,))) == []


def test_norming_constants_agree_across_routes(bound_state_potential):
    V = bound_state_potential
    f0 = jost_function(V)
    direct = bound_states(f0, V)
    residue = bound_states_from_jost(f0)
    assert len(direct) == len(residue) == 1
    assert direct[0].z == pytest.approx(residue[0].z)
    assert direct[0].norm_marchenko == pytest.approx(residue[0].norm_marchenko, rel=1e-8)
    assert direct[0].norm_gl == pytest.approx(residue[0].norm_gl, rel=1e-8)


def test_regular_solution():
    V = Potential((1.0, -2.0))
    phi = regular_solution(V, 3)
    assert phi[0].coeffs == (1.0,)
    assert phi[1].coeffs == (3.0, -1.0)
    at = regular_solution_at(V.values, 3, 0.5)
    assert at[2] == pytest.approx(phi[1](0.5))
    assert at[3] == pytest.approx(phi[2](0.5))


@pytest.mark.parametrize("b,seed", [(2, 7), (4, 8)])
def test_a_coefficients_recover_potential(random_potential, b, seed):
    V = random_potential(b, seed)
    A = a_coefficients(V, b + 1)
    np.testing.assert_allclose(potential_from_A(A, b).values, V.values, atol=1e-10)


@pytest.mark.parametrize(
    "values,end",
    [((-1.0,), 1), ((1.0,), -1), ((-np.sqrt(2.0), 1.0 / np.sqrt(2.0)), 1), ((-np.sqrt(2.0), 1.0 / np.sqrt(2.0)), -1)],
)
def test_exceptional_endpoints(values, end):
    f0 = jost_function(Potential(values))
    assert classify_endpoint(f0, end) is EndpointClass.EXCEPTIONAL
    assert not endpoint_is_transmission_eigenvalue(f0, end)


def test_exceptional_zero_is_not_a_bound_state():
    data = spectral_data(Potential((-1.0,)))
    assert data.bound_states == ()
    assert classify_endpoint(data.f0, -1) is EndpointClass.GENERIC


def test_single_site_determinant():
    det = transmission_det(Potential((2.0,)))
    assert det.D.coeffs == pytest.approx((2.0,))
    assert det.E.coeffs == pytest.approx((1.0,))


def test_determinant_none_when_edge_vanishes():
    assert transmission_det(Potential((1.0, 0.0))).E is None


@pytest.mark.parametrize("b,seed", [(2, 9), (3, 10), (4, 11), (6, 12)])
def test_sum_rule(random_potential, b, seed):
    V = random_potential(b, seed)
    spec = transmission_eigenvalues(V)
    assert len(spec.eigenvalues) == 2 * b - 2
    assert spec.b == b
    assert abs(sum_rule_residual(V, spec.eigenvalues)) < 1e-8


def test_eigenvalues_are_conjugate_closed(random_potential):
    eigs = np.array(transmission_eigenvalues(random_potential(5, 13, scale=3.0)).eigenvalues)
    np.testing.assert_allclose(np.sort_complex(eigs), np.sort_complex(np.conj(eigs)), atol=1e-12)


def test_b2_catalogue():
    eigs = transmission_eigenvalues(Potential((-4.0, 0.8))).eigenvalues
    np.testing.assert_allclose(sorted(e.real for e in eigs), [-3.0, 3.0], atol=1e-9)
    eigs = transmission_eigenvalues(Potential((-2.0, -1.0))).eigenvalues
    np.testing.assert_allclose(sorted(abs(e.imag) for e in eigs), [1.0, 1.0], atol=1e-9)


def test_zero_is_a_transmission_eigenvalue():
    V = Potential((1.0, -1.0 / 6.0))
    f0 = jost_function(V)
    assert endpoint_is_transmission_eigenvalue(f0, 1)
    assert min(abs(e) for e in transmission_eigenvalues(V).eigenvalues) < 1e-9


def test_transmission_eigenvalues_need_b2():
    with pytest.raises(InvalidPotential):
        transmission_eigenvalues(Potential((2.0,)))
    with pytest.raises(InvalidPotential):
        transmission_eigenvalues(Potential((2.0, 0.0)))


def test_endpoint_flag_is_a_plain_bool():
    f0 = jost_function(Potential((1.0, -1.0 / 6.0)))
    assert type(endpoint_is_transmission_eigenvalue(f0, 1)) is bool
    assert type(endpoint_is_transmission_eigenvalue(f0, -1)) is bool


def test_large_potential_keeps_unit_constant_term():
    f0 = jost_function(Potential((1e7, 1e7)))
    assert f0.lo == 0
    assert f0.coeff(0) == 1.0
    assert f0.hi == 3


def test_free_regular():
    assert free_regular(0).is_zero
    assert free_regular(1).coeffs == (1.0,)
    assert free_regular(3).coeffs == pytest.approx((3.0, -4.0, 1.0))
    assert free_regular(4).coeffs == pytest.approx((4.0, -10.0, 6.0, -1.0))


def test_regular_solution_unusual_b3():
    v1, v3 = 0.7, -1.3
    phi = regular_solution(Potential((v1, -v1, v3)), 4)
    assert phi[2].coeffs == pytest.approx((3.0 - v1**2, -4.0, 1.0))
    expected = (4.0 - v1 - 2.0 * v1**2 + 3.0 * v3 - v3 * v1**2, v1**2 - 4.0 * v3 - 10.0, 6.0 + v3, -1.0)
    assert phi[3].coeffs == pytest.approx(expected)


@pytest.mark.parametrize("b,seed", [(3, 14), (5, 15)])
def test_regular_solution_leading_terms(random_potential, b, seed):
    V = random_potential(b, seed)
    for n, phi in enumerate(regular_solution(V, b + 2), start=1):
        assert phi.degree == n - 1
        assert phi.leading == (-1.0) ** (n - 1)
        if n >= 2:
            subleading = (-1.0) ** (n - 2) * (2.0 * (n - 1) + V.partial_sum(n - 1))
            assert phi.coeff(n - 2) == pytest.approx(subleading, abs=1e-12)


@pytest.mark.parametrize("b,seed", [(2, 16), (4, 17)])
def test_regular_solution_from_jost_solutions(random_potential, b, seed):
    V = random_potential(b, seed)
    K = jost_table(V)
    theta = np.random.default_rng(seed).uniform(0.1, np.pi - 0.1, size=8)
    z = np.exp(1j * theta)
    phi = regular_solution_at(V.values, b + 2, 2.0 - 2.0 * np.cos(theta))
    for n in range(1, b + 3):
        combined = (K.jost_conj(0, z) * K.jost(n, z) - K.jost(0, z) * K.jost_conj(n, z)) / (z - 1.0 / z)
        np.testing.assert_allclose(combined, phi[n], atol=1e-9)


@pytest.mark.parametrize("values", [(1.5, -0.5), (0.4, -0.9, 0.6), (-0.3, 0.8, 0.5, -0.7)])
def test_scattering_is_one_at_transmission_eigenvalues(values):
    V = Potential(values)
    S = scattering_matrix(jost_function(V))
    inside = [e.real for e in transmission_eigenvalues(V).eigenvalues if e.imag == 0.0 and 1e-6 < e.real < 4.0 - 1e-6]
    for lam in inside:
        c = (2.0 - lam) / 2.0
        z = complex(c, np.sqrt(1.0 - c * c))
        assert abs(S(z) - 1.0) <= 1e-7
    if values == (1.5, -0.5):
        assert len(inside) == 1
