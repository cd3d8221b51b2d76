"""
Forward spectral computations for a compactly supported potential.

Jost table and Jost function, scattering matrix, regular solutions in the
spectral parameter, bound states with both norming constants, endpoint
classification, the transmission determinant and transmission eigenvalues.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from ..config import TOL
from .algebra import (
    LambdaPoly,
    LaurentPoly,
    RootSet,
    divide_by_z_minus_inverse,
    laurent_to_lambda,
    roots,
)
from .errors import (
    ComplexInteriorRoot,
    InvalidPotential,
    RootToleranceConflict,
    SpectralError,
    TransmissionMismatch,
)

logger = logging.getLogger(__name__)


# ---- Domain types ----

@dataclass(frozen=True)
class Potential:
    """Real values V_1..V_b on lattice sites 1..b; zero beyond b."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise InvalidPotential("b >= 1 required: potential has no sites")
        if not all(np.isfinite(vals)):
            raise InvalidPotential(f"potential values must be finite: {vals}")
        object.__setattr__(self, "values", vals)

    @property
    def b(self) -> int:
        return len(self.values)

    @property
    def edge(self) -> float:
        return self.values[-1]

    def site(self, n: int) -> float:
        return self.values[n - 1] if 1 <= n <= self.b else 0.0

    def partial_sum(self, upto: int) -> float:
        return float(sum(self.values[: max(upto, 0)]))

    def require_edge(self):
        if abs(self.edge) <= TOL.support_edge:
            raise InvalidPotential(f"V_b must be nonzero, got {self.edge!r}")

    def array(self) -> np.ndarray:
        return np.array(self.values)


@dataclass(frozen=True)
class KTable:
    """Jost coefficients; rows[n][j] is K[n][n+j], the z^j coefficient of m_n."""

    b: int
    rows: tuple

    def entry(self, n: int, m: int) -> float:
        if n >= self.b:
            return 1.0 if m == n else 0.0
        j = m - n
        row = self.rows[n]
        return row[j] if 0 <= j < len(row) else 0.0

    def m_poly(self, n: int) -> LaurentPoly:
        if n >= self.b:
            return LaurentPoly.constant(1.0)
        return LaurentPoly.polynomial(self.rows[n])

    def f_poly(self, n: int) -> LaurentPoly:
        if n >= self.b:
            return LaurentPoly.monomial(n)
        return LaurentPoly(n, self.rows[n])

    def jost(self, n: int, z):
        """f_n(z)."""
        return self.f_poly(n)(z)

    def jost_conj(self, n: int, z):
        """g_n(z) = f_n(1/z)."""
        return self.f_poly(n)(1.0 / np.asarray(z))

    def matrix(self) -> np.ndarray:
        out = np.zeros((self.b, 2 * self.b))
        for n, row in enumerate(self.rows):
            out[n, n : n + len(row)] = row
        return out


@dataclass(frozen=True)
class ScatteringMatrix:
    """S = numerator / denominator = g0 / f0."""

    numerator: LaurentPoly
    denominator: LaurentPoly

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def residue_over_z(self, zs: float) -> float:
        """Res[S/z, zs] at a simple zero of f0."""
        return float(np.real(self.numerator(zs) / (zs * self.denominator.derivative()(zs))))


@dataclass(frozen=True)
class BoundState:
    z: float
    mu: float
    norm_marchenko: float
    norm_gl: float


@dataclass(frozen=True)
class SpectralData:
    f0: LaurentPoly
    bound_states: tuple
    b: int


class EndpointClass(str, Enum):
    GENERIC = "generic"
    EXCEPTIONAL = "exceptional"


@dataclass(frozen=True)
class TransmissionDeterminant:
    D: LambdaPoly
    E: Optional[LambdaPoly]


@dataclass(frozen=True)
class TransmissionSpectrum:
    """Eigenvalues repeated by multiplicity; b = count / 2 + 1."""

    b: int
    eigenvalues: tuple
    rootset: Optional[RootSet] = None

    @classmethod
    def from_eigenvalues(cls, values: Sequence[complex]) -> "TransmissionSpectrum":
        vals = tuple(complex(v) for v in values)
        return cls(len(vals) // 2 + 1, vals)

    @property
    def total(self) -> complex:
        return complex(sum(self.eigenvalues))


@dataclass(frozen=True)
class ATable:
    """Lower-triangular expansion coefficients; rows[n-1] holds A[n][1..n-1]."""

    size: int
    rows: tuple

    def entry(self, n: int, j: int) -> float:
        if j == n:
            return 1.0
        if j < 1 or j > n or n > self.size:
            return 0.0
        return self.rows[n - 1][j - 1]

    def matrix(self) -> np.ndarray:
        out = np.eye(self.size + 1)
        out[0, 0] = 0.0
        for n, row in enumerate(self.rows, start=1):
            out[n, 1:n] = row
        return out


# ---- Jost data ----

def _fit(arr: np.ndarray, length: int) -> np.ndarray:
    out = np.zeros(length)
    k = min(length, len(arr))
    out[:k] = arr[:k]
    return out


def jost_table(V: Potential) -> KTable:
    """Run m_{n-1} = -z^2 m_{n+1} + (z^2 + V_n z + 1) m_n down from m_b = m_{b+1} = 1."""
    b = V.b
    rows = [None] * b
    m_next, m_cur = np.ones(1), np.ones(1)
    for n in range(b, 0, -1):
        shifted = np.concatenate([np.zeros(2), m_next])
        m_prev = P.polysub(P.polymul([1.0, V.site(n), 1.0], m_cur), shifted)
        m_prev = _fit(m_prev, 2 * b - 2 * (n - 1))
        rows[n - 1] = tuple(float(c) for c in m_prev)
        m_next, m_cur = m_cur, m_prev
    return KTable(b, tuple(rows))


def jost_function(V: Potential) -> LaurentPoly:
    return jost_table(V).m_poly(0)


def g_from_f(f0: LaurentPoly) -> LaurentPoly:
    if f0.lo < 0:
        raise ValueError("f0 must be a polynomial in z")
    return f0.reflect()


def scattering_matrix(f0: LaurentPoly) -> ScatteringMatrix:
    return ScatteringMatrix(g_from_f(f0), f0)


def wronskian(K: KTable, n: int, z):
    """f_n g_{n+1} - f_{n+1} g_n; equals 1/z - z."""
    return K.jost(n, z) * K.jost_conj(n + 1, z) - K.jost(n + 1, z) * K.jost_conj(n, z)


def determinant_at_one(K: KTable, n: int) -> float:
    """f_n(1) f'_{n+1}(1) - f'_n(1) f_{n+1}(1); equals 1."""
    fn, fn1 = K.f_poly(n), K.f_poly(n + 1)
    return float(fn(1.0) * fn1.derivative()(1.0) - fn.derivative()(1.0) * fn1(1.0))


# ---- Regular solutions ----

def _regular_arrays(values: Sequence[float], n_max: int) -> list:
    """Coefficient arrays of phi_0..phi_{n_max}."""
    out = [np.zeros(1), np.ones(1)]
    for n in range(1, n_max):
        v = values[n - 1] if n <= len(values) else 0.0
        out.append(P.polysub(P.polymul([2.0 + v, -1.0], out[n]), out[n - 1]))
    return out[: n_max + 1]


def regular_solution(V: Potential, n_max: int) -> list:
    """phi_1..phi_{n_max} as polynomials in lambda."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return [LambdaPoly(a) for a in _regular_arrays(V.values, n_max)[1:]]


def free_regular(n: int) -> LambdaPoly:
    if n < 0:
        raise ValueError("n must be >= 0")
    return LambdaPoly(_regular_arrays((), max(n, 1))[n])


def regular_solution_at(values: Sequence[float], n_max: int, mu) -> np.ndarray:
    """phi_0..phi_{n_max} at lambda = mu (scalar or array) by the recurrence."""
    mu = np.asarray(mu, dtype=float)
    phi = np.zeros((n_max + 1,) + mu.shape)
    if n_max >= 1:
        phi[1] = 1.0
    for n in range(1, n_max):
        v = values[n - 1] if n <= len(values) else 0.0
        phi[n + 1] = (2.0 - mu + v) * phi[n] - phi[n - 1]
    return phi


def a_coefficients(V: Potential, n_max: int) -> ATable:
    """Coefficients of phi_n in the basis of unperturbed regular solutions."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    reg = _regular_arrays(V.values, n_max)
    free = _regular_arrays((), n_max)
    rows = []
    for n in range(1, n_max + 1):
        residual = _fit(reg[n], n)
        coeffs = np.zeros(n + 1)
        for j in range(n, 0, -1):
            basis = _fit(free[j], n)
            coeffs[j] = residual[j - 1] / basis[j - 1]
            residual = residual - coeffs[j] * basis
        rows.append(tuple(float(c) for c in coeffs[1:n]))
    return ATable(n_max, tuple(rows))


# ---- Endpoints and bound states ----

def classify_endpoint(f0: LaurentPoly, end: int) -> EndpointClass:
    if end not in (1, -1):
        raise ValueError("end must be +1 or -1")
    scale = f0.scale
    if abs(f0(float(end))) >= TOL.endpoint_zero * scale:
        return EndpointClass.GENERIC
    slope = abs(f0.derivative()(float(end)))
    if slope <= TOL.endpoint_zero * scale:
        logger.warning(f"f0 has a multiple zero at z={end}; expected a simple zero")
    return EndpointClass.EXCEPTIONAL


def endpoint_is_transmission_eigenvalue(f0: LaurentPoly, end: int) -> bool:
    """lambda = 0 (end=+1) or 4 (end=-1) is a transmission eigenvalue iff f0 != 0 and f0' = 0 there."""
    if classify_endpoint(f0, end) is EndpointClass.EXCEPTIONAL:
        return False
    return bool(abs(f0.derivative()(float(end))) < TOL.endpoint_zero * f0.scale)


def _kappa(f0: LaurentPoly, zs: float) -> float:
    return float(g_from_f(f0)(zs) / (zs - 1.0 / zs))


def bound_state_zeros(f0: LaurentPoly) -> list:
    """Real zeros of f0 in (-1, 0) and (0, 1), sorted."""
    if f0.hi < 1:
        return []
    window, margin = TOL.endpoint_window, TOL.bound_state_margin
    slope = f0.derivative()
    found = []
    for loc, mult in roots(f0):
        if loc.imag != 0.0:
            if abs(loc) < 1.0 - window:
                raise ComplexInteriorRoot(f"f0 has a non-real zero {loc} inside the unit disc")
            continue
        x = loc.real
        near = [end for end in (1, -1) if abs(x - end) < window]
        if near:
            if classify_endpoint(f0, near[0]) is EndpointClass.EXCEPTIONAL:
                continue
            raise RootToleranceConflict(f"zero of f0 at {x!r} lies within {window} of {near[0]}")
        if not margin < abs(x) < 1.0 - margin:
            continue
        if mult > 1 or abs(slope(x)) <= 1e-8:
            raise SpectralError(f"bound-state zero {x!r} of f0 is not simple")
        found.append(x)
    return sorted(found)


def bound_states(f0: LaurentPoly, V: Potential) -> list:
    """Bound states with norming constants from finite sums plus geometric tails."""
    table = jost_table(V)
    scatter = scattering_matrix(f0)
    b = V.b
    out = []
    for zs in bound_state_zeros(f0):
        mu = 2.0 - zs - 1.0 / zs
        tail = zs ** (2 * b) / (1.0 - zs**2)

        f_sq = sum(float(table.jost(n, zs)) ** 2 for n in range(1, b)) + tail
        c = 1.0 / np.sqrt(f_sq)
        c_res = scatter.residue_over_z(zs)
        if c_res <= 0 or abs(c_res - c * c) > TOL.norming_crosscheck * c * c:
            logger.warning(f"Norming constant mismatch at z={zs}: sum {c * c!r}, residue {c_res!r}")

        kappa = _kappa(f0, zs)
        phi = regular_solution_at(V.values, b - 1, mu)
        phi_sq = float(np.sum(phi[1:b] ** 2)) + kappa**2 * tail
        out.append(BoundState(z=zs, mu=mu, norm_marchenko=float(c), norm_gl=float(1.0 / np.sqrt(phi_sq))))
    return out


def bound_states_from_jost(f0: LaurentPoly) -> list:
    """Bound states with norming constants from f0 alone (residue formula)."""
    scatter = scattering_matrix(f0)
    out = []
    for zs in bound_state_zeros(f0):
        c_sq = scatter.residue_over_z(zs)
        if c_sq <= 0:
            raise SpectralError(f"Non-positive norming residue {c_sq!r} at z={zs}")
        c = float(np.sqrt(c_sq))
        out.append(BoundState(z=zs, mu=2.0 - zs - 1.0 / zs, norm_marchenko=c, norm_gl=c / abs(_kappa(f0, zs))))
    return out


def spectral_data(V: Potential) -> SpectralData:
    f0 = jost_function(V)
    return SpectralData(f0, tuple(bound_states(f0, V)), V.b)


def spectral_data_from_jost(f0: LaurentPoly, b: int) -> SpectralData:
    return SpectralData(f0, tuple(bound_states_from_jost(f0)), b)


# ---- Transmission eigenvalues ----

def _determinant_route(V: Potential) -> LambdaPoly:
    b = V.b
    reg = _regular_arrays(V.values, b + 1)
    free = _regular_arrays((), b + 1)
    return LambdaPoly(P.polysub(P.polymul(free[b], reg[b + 1]), P.polymul(reg[b], free[b + 1])))


def transmission_det(V: Potential) -> TransmissionDeterminant:
    f0 = jost_function(V)
    D = laurent_to_lambda(divide_by_z_minus_inverse(f0 - g_from_f(f0)))

    check = _determinant_route(V)
    gap = float(np.max(np.abs(_fit((D - check).array(), max(D.degree, check.degree) + 1))))
    scale = max(1.0, float(np.max(np.abs(check.array()))))
    if gap > TOL.determinant_failure * scale:
        raise TransmissionMismatch(f"D routes differ by {gap:.3e} (scale {scale:.3e})")
    if gap > TOL.determinant_agreement * scale:
        logger.warning(f"D routes agree only to {gap / scale:.3e} relative")

    E = D / V.edge if abs(V.edge) > TOL.support_edge else None
    return TransmissionDeterminant(D=D, E=E)


def sum_rule_residual(V: Potential, eigenvalues: Sequence[complex]) -> float:
    total = complex(sum(eigenvalues))
    return float(total.real) - 4.0 * (V.b - 1) - V.partial_sum(V.b - 1)


def transmission_eigenvalues(V: Potential) -> TransmissionSpectrum:
    if V.b < 2:
        raise InvalidPotential("transmission eigenvalues need b >= 2")
    V.require_edge()
    E = transmission_det(V).E
    rootset = roots(E)
    eigs = tuple(rootset.expanded())

    residual = sum_rule_residual(V, eigs)
    total = complex(sum(eigs))
    if abs(residual) > TOL.sum_rule * (1.0 + abs(total)):
        logger.warning(f"Sum rule residual {residual:.3e} for b={V.b}")
    return TransmissionSpectrum(V.b, eigs, rootset)
