"""
Inversion from transmission eigenvalues.

The eigenvalues fix the monic polynomial E; the positive-power part of
(z - 1/z) E(2 - z - 1/z) is (f0 - 1)/V_b, and the sum rule recovers V_b
unless the spectrum sits in the unusual case. The rebuilt f0 is handed to
the Marchenko or Gel'fand-Levitan pipeline.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..config import TOL
from .algebra import (
    LambdaPoly,
    LaurentPoly,
    Z_MINUS_INVERSE,
    lambda_to_laurent,
    plus_part,
    roots,
    zero_coeff,
)
from .errors import (
    InvalidPotential,
    InvalidSpectrum,
    NotConjugateClosed,
    OddCount,
    SpectralError,
    UnusualCase,
    ZeroCoefficientResidual,
)
from .forward import (
    Potential,
    TransmissionSpectrum,
    jost_table,
    spectral_data_from_jost,
    transmission_eigenvalues,
)
from .gelfand_levitan import gl_invert
from .marchenko import marchenko_invert

logger = logging.getLogger(__name__)


class Method(str, Enum):
    MARCHENKO = "marchenko"
    GL = "gl"


class InversionStatus(str, Enum):
    UNIQUE = "unique"
    UNUSUAL = "unusual"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class Diagnostics:
    k01_over_vb: Optional[float]
    eigenvalue_sum: float
    expected_sum: float
    unusual_gap: float
    warnings: tuple = ()
    message: str = ""


@dataclass(frozen=True)
class InversionReport:
    status: InversionStatus
    potential: Optional[Potential]
    f0: Optional[LaurentPoly]
    diagnostics: Diagnostics


@dataclass(frozen=True)
class OneParameterFamily:
    """V_1 = V_2 = 0 with V_3 free: every member shares the spectrum {1, 1, 3, 3}."""

    fixed: tuple = ((1, 0.0), (2, 0.0))
    free_site: int = 3


METHODS: dict = {
    Method.MARCHENKO: marchenko_invert,
    Method.GL: lambda f0, b: gl_invert(spectral_data_from_jost(f0, b)),
}


def hausdorff_multiset(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Largest scaled distance in the best one-to-one matching of two equal-size multisets."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.size != b.size:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :]) / np.maximum(1.0, np.abs(b))[None, :]
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def build_E(spec: TransmissionSpectrum) -> LambdaPoly:
    eigs = spec.eigenvalues
    if not eigs:
        raise InvalidSpectrum("empty spectrum")
    if len(eigs) % 2:
        raise OddCount(f"eigenvalue count {len(eigs)} is odd")
    mismatch = hausdorff_multiset(eigs, np.conj(eigs))
    if mismatch > TOL.conjugate_closure:
        raise NotConjugateClosed(f"spectrum is not conjugate-closed (mismatch {mismatch:.3e})")
    return LambdaPoly.from_roots(eigs)


def f0_scaled(E: LambdaPoly) -> LaurentPoly:
    """plus_part((z - 1/z) E), which equals (f0 - 1)/V_b."""
    product = Z_MINUS_INVERSE * lambda_to_laurent(E)
    residual = abs(zero_coeff(product))
    if residual > TOL.zero_coefficient * max(1.0, product.scale):
        raise ZeroCoefficientResidual(f"z^0 coefficient {residual:.3e} should vanish")
    return plus_part(product)


def recover_Vb(spec: TransmissionSpectrum, k01_over_vb: float) -> float:
    total = spec.total
    expected = 4.0 * (spec.b - 1)
    if abs(total.imag) > 1e-9 * (1.0 + abs(total)):
        logger.warning(f"Discarding imaginary eigenvalue sum {total.imag:.3e}")
    gap = k01_over_vb - 1.0
    if abs(gap) <= TOL.unusual:
        raise UnusualCase(
            "sum rule cannot fix V_b: K01/V_b = 1",
            Diagnostics(k01_over_vb, total.real, expected, total.real - expected),
        )
    return (total.real - expected) / gap


def tev_invert(
    spec: TransmissionSpectrum, method: Union[Method, str] = Method.MARCHENKO
) -> InversionReport:
    invert: Callable = METHODS[Method(method)]
    E = build_E(spec)
    b = spec.b
    scaled = f0_scaled(E)
    ratio = scaled.coeff(1)
    total = spec.total.real
    expected = 4.0 * (b - 1)

    warnings = []

    def report(status, potential=None, f0=None, message=""):
        diag = Diagnostics(ratio, total, expected, total - expected, tuple(warnings), message)
        return InversionReport(InversionStatus(status), potential, f0, diag)

    by_sum = abs(total - expected) <= TOL.unusual * (1.0 + abs(total))
    by_ratio = abs(ratio - 1.0) <= TOL.unusual
    if by_sum and by_ratio:
        logger.info(f"Unusual case: eigenvalue sum {total!r} equals 4(b-1) for b={b}")
        return report(InversionStatus.UNUSUAL, message="V_b is not determined by the spectrum")
    if by_sum != by_ratio:
        return report(
            InversionStatus.INCONSISTENT,
            message=f"unusual-case detectors disagree (sum: {by_sum}, K01/V_b: {by_ratio})",
        )
    if abs(ratio - 1.0) < TOL.conditioning_warning:
        warnings.append(f"near-unusual: |K01/V_b - 1| = {abs(ratio - 1.0):.3e}, V_b error amplified")
        logger.warning(warnings[-1])

    vb = recover_Vb(spec, ratio)
    f0 = 1.0 + vb * scaled
    if f0.hi != 2 * b - 1 or abs(scaled.coeff(2 * b - 1) - 1.0) > TOL.conjugate_closure:
        return report(InversionStatus.INCONSISTENT, f0=f0, message="reconstructed f0 has the wrong degree")

    try:
        V = invert(f0, b)
        check = transmission_eigenvalues(V)
    except SpectralError as exc:
        return report(InversionStatus.INCONSISTENT, f0=f0, message=f"{type(exc).__name__}: {exc}")

    distance = hausdorff_multiset(check.eigenvalues, spec.eigenvalues)
    if distance > TOL.verification:
        return report(
            InversionStatus.INCONSISTENT,
            f0=f0,
            message=f"recovered potential reproduces the spectrum only to {distance:.3e}",
        )
    return report(InversionStatus.UNIQUE, potential=V, f0=f0)


def unusual_criteria(V: Potential) -> dict:
    """The six equivalent characterisations of the unusual case, each as a bool."""
    b = V.b
    if b < 2:
        raise InvalidPotential("unusual-case criteria need b >= 2")
    V.require_edge()
    table = jost_table(V)
    vb = V.edge
    k01, k_top, k_sub = table.entry(0, 1), table.entry(0, 2 * b - 1), table.entry(0, 2 * b - 2)
    total = transmission_eigenvalues(V).total.real
    tol = TOL.unusual
    return {
        "a": abs(total - 4.0 * (b - 1)) <= tol * (1.0 + abs(total)),
        "b": abs(V.partial_sum(b - 1)) <= tol * (1.0 + float(np.sum(np.abs(V.values)))),
        "c": abs(k01 - vb) <= tol * max(1.0, abs(vb)),
        "d": abs(k_sub) <= tol * max(1.0, float(np.max(np.abs(table.rows[0])))),
        "e": abs(k01 / vb - 1.0) <= tol and abs(k_top / vb - 1.0) <= tol,
        "f": abs(k_sub / vb) <= tol,
    }


def unusual_family_b3(gamma: float, epsilon: float):
    """Potentials (V1, -V1, V3) sharing the b=3 spectrum fixed by (gamma, epsilon).

    V1 runs over the real roots of V1^3 - gamma V1 + epsilon = 0.
    """
    if gamma == 0 and epsilon == 0:
        return OneParameterFamily()
    family = []
    for loc, _ in roots(LambdaPoly((epsilon, -gamma, 0.0, 1.0))):
        if loc.imag != 0.0 or abs(loc.real) <= TOL.support_edge:
            continue
        v1 = loc.real
        if epsilon != 0:
            v3 = v1**2 / epsilon
        else:
            denom = gamma - v1**2
            if abs(denom) <= TOL.support_edge * max(1.0, abs(gamma)):
                continue
            v3 = v1 / denom
        family.append(Potential((v1, -v1, v3)))
    return sorted(family, key=lambda p: p.values[0])
