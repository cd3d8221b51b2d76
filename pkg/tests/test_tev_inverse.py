import numpy as np
import pytest

from src.spectral.errors import InvalidSpectrum, NotConjugateClosed, OddCount, UnusualCase
from src.spectral.forward import Potential, TransmissionSpectrum, jost_table, transmission_eigenvalues
from src.spectral.tev_inverse import (
    InversionStatus,
    Method,
    OneParameterFamily,
    build_E,
    f0_scaled,
    hausdorff_multiset,
    recover_Vb,
    tev_invert,
    unusual_criteria,
    unusual_family_b3,
)

SQRT57 = np.sqrt(57.0)
MARCHENKO_SPECTRUM = TransmissionSpectrum.from_eigenvalues(((11 + SQRT57) / 4, (11 - SQRT57) / 4))
GL_SPECTRUM = TransmissionSpectrum.from_eigenvalues((-1.0, 4.0))


def test_build_E():
    assert build_E(GL_SPECTRUM).coeffs == pytest.approx((-4.0, -3.0, 1.0))
    assert GL_SPECTRUM.b == 2


def test_build_E_rejects_bad_spectra():
    with pytest.raises(InvalidSpectrum):
        build_E(TransmissionSpectrum(1, ()))
    with pytest.raises(OddCount):
        build_E(TransmissionSpectrum(2, (1.0, 2.0, 3.0)))
    with pytest.raises(NotConjugateClosed):
        build_E(TransmissionSpectrum.from_eigenvalues((1j, 2.0)))


def test_scaled_jost():
    scaled = f0_scaled(build_E(GL_SPECTRUM))
    assert scaled.as_dict() == pytest.approx({1: -5.0, 2: -1.0, 3: 1.0})
    assert f0_scaled(build_E(MARCHENKO_SPECTRUM)).coeff(1) == pytest.approx(-2.0)


def test_recover_Vb():
    assert recover_Vb(GL_SPECTRUM, -5.0) == pytest.approx(1.0 / 6.0)
    assert recover_Vb(MARCHENKO_SPECTRUM, -2.0) == pytest.approx(-0.5)
    with pytest.raises(UnusualCase):
        recover_Vb(GL_SPECTRUM, 1.0)


@pytest.mark.parametrize("method", list(Method))
def test_invert_worked_spectra(method):
    report = tev_invert(MARCHENKO_SPECTRUM, method)
    assert report.status is InversionStatus.UNIQUE
    assert report.potential.values == pytest.approx((1.5, -0.5))

    report = tev_invert(GL_SPECTRUM, method.value)
    assert report.status is InversionStatus.UNIQUE
    assert report.potential.values == pytest.approx((-1.0, 1.0 / 6.0))
    assert report.diagnostics.k01_over_vb == pytest.approx(-5.0)


@pytest.mark.parametrize("method", list(Method))
@pytest.mark.parametrize("b,seed", [(2, 40), (3, 41), (4, 42)])
def test_round_trip(random_potential, method, b, seed):
    V = random_potential(b, seed)
    report = tev_invert(transmission_eigenvalues(V), method)
    assert report.status is InversionStatus.UNIQUE
    np.testing.assert_allclose(report.potential.values, V.values, atol=1e-6)


def test_unusual_spectrum():
    report = tev_invert(transmission_eigenvalues(Potential((0.0, 0.0, 1.0))))
    assert report.status is InversionStatus.UNUSUAL
    assert report.potential is None
    assert report.diagnostics.unusual_gap == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("values", [(0.0, 0.0, 1.0), (1.0, -1.0, 1.0 / 6.0), (2.0, -2.0, 2.0 / 3.0)])
def test_unusual_criteria_hold_together(values):
    assert all(unusual_criteria(Potential(values)).values())


def test_unusual_criteria_fail_together():
    assert not any(unusual_criteria(Potential((1.5, -0.5))).values())


def test_unusual_family():
    family = unusual_family_b3(7.0, 6.0)
    assert [p.values[0] for p in family] == pytest.approx([-3.0, 1.0, 2.0])
    assert [p.values[2] for p in family] == pytest.approx([1.5, 1.0 / 6.0, 2.0 / 3.0])
    shared = transmission_eigenvalues(family[0]).eigenvalues
    for member in family[1:]:
        assert hausdorff_multiset(transmission_eigenvalues(member).eigenvalues, shared) < 1e-8
    np.testing.assert_allclose(sorted(e.real for e in shared), [-1.17741, 1.32164, 3.85577, 4.0], atol=1e-4)


def test_unusual_family_edge_cases():
    pair = unusual_family_b3(3.0, 2.0)
    np.testing.assert_allclose([p.values for p in pair], [(-2.0, 2.0, 2.0), (1.0, -1.0, 0.5)], atol=1e-7)
    single = unusual_family_b3(0.0, 1.0)
    np.testing.assert_allclose([p.values for p in single], [(-1.0, 1.0, 1.0)], atol=1e-9)
    assert isinstance(unusual_family_b3(0.0, 0.0), OneParameterFamily)


def test_hausdorff_multiset():
    assert hausdorff_multiset([1.0, 2.0], [2.0, 1.0]) == 0.0
    assert hausdorff_multiset([1.0], [1.0, 2.0]) == float("inf")
    assert hausdorff_multiset([1.0, 1.0], [1.0, 1.5]) == pytest.approx(1.0 / 3.0)


@pytest.mark.parametrize("method", list(Method))
def test_round_trip_over_sample(potential_sample, method):
    sample = [V for V in potential_sample(40, seed=7, max_b=6, min_b=2) if abs(V.partial_sum(V.b - 1)) >= 0.1]
    for V in sample:
        report = tev_invert(transmission_eigenvalues(V), method)
        assert report.status is InversionStatus.UNIQUE, V.values
        np.testing.assert_allclose(report.potential.values, V.values, atol=1e-6)


@pytest.mark.parametrize("b,seed", [(2, 50), (3, 51), (4, 52), (5, 53)])
def test_vanishing_partial_sum_is_unusual(b, seed):
    rng = np.random.default_rng(seed)
    values = rng.uniform(-1.0, 1.0, size=b)
    values[b - 2] = -float(np.sum(values[: b - 2]))
    values[-1] = np.copysign(max(abs(values[-1]), 0.25), values[-1])
    V = Potential(tuple(values))

    assert abs(V.partial_sum(b - 1)) < 1e-14
    K = jost_table(V)
    assert K.entry(0, 1) == pytest.approx(V.edge, abs=1e-10)
    assert K.entry(0, 2 * b - 2) == pytest.approx(0.0, abs=1e-10)
    assert all(unusual_criteria(V).values())
    assert tev_invert(transmission_eigenvalues(V)).status is InversionStatus.UNUSUAL
