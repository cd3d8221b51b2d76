"""
Marchenko inversion: kernel from the Jost function, the finite Marchenko
system for the K table, and recovery of the potential.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..config import TOL
from .algebra import LaurentPoly, reciprocal_fractions, solve_checked, to_floats
from .errors import SingularAtOrigin
from .forward import KTable, Potential, jost_function, scattering_matrix

logger = logging.getLogger(__name__)

TRAPEZOID_POINTS = 4096


@dataclass(frozen=True)
class MarchenkoKernel:
    """M_1..M_{2b-1}; M_n = 0 for n >= 2b."""

    b: int
    values: tuple

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "MarchenkoKernel":
        """Infer b as the smallest integer with M_n = 0 for every n >= 2b."""
        vals = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError("kernel values must be finite")
        nonzero = np.nonzero(np.abs(vals) > TOL.kernel_support)[0]
        last = int(nonzero[-1]) + 1 if nonzero.size else 0
        b = max(1, (last + 2) // 2)
        padded = np.zeros(2 * b - 1)
        padded[: min(len(vals), 2 * b - 1)] = vals[: 2 * b - 1]
        return cls(b, tuple(float(v) for v in padded))

    def at(self, n: int) -> float:
        return self.values[n - 1] if 1 <= n <= len(self.values) else 0.0


def kernel_values(f0: LaurentPoly, order: int) -> np.ndarray:
    """M_1..M_order as -Res[S z^(n-1), 0]; the bound-state terms cancel the interior poles.

    Summed in rationals: the Taylor coefficients of 1/f0 can reach 1e8 and
    cancel down to kernel values of order one.
    """
    if f0.lo < 0 or abs(f0.coeff(0) - 1.0) > TOL.endpoint_zero:
        raise SingularAtOrigin(f"f0 must be a polynomial with constant term 1, got {f0.as_dict()}")
    top = max(order, f0.hi)
    a = reciprocal_fractions(f0, top)
    k0 = [Fraction(float(c)) for c in f0.dense(0, top)]
    exact = [-sum(k0[n + j] * a[j] for j in range(top + 1 - n)) for n in range(1, order + 1)]
    return to_floats(exact)


def marchenko_kernel(f0: LaurentPoly, b: int) -> MarchenkoKernel:
    if f0.hi > 2 * b - 1:
        raise ValueError(f"f0 has degree {f0.hi} > 2b-1 = {2 * b - 1}")
    return MarchenkoKernel(b, tuple(float(m) for m in kernel_values(f0, 2 * b - 1)))


def marchenko_kernel_quadrature(
    f0: LaurentPoly, b: int, bound_states: Sequence = (), points: int = TRAPEZOID_POINTS
) -> MarchenkoKernel:
    """Contour form of the kernel: trapezoid rule on |z| = 1 plus the bound-state sum."""
    theta = 2.0 * np.pi * np.arange(points) / points
    z = np.exp(1j * theta)
    one_minus_s = 1.0 - scattering_matrix(f0)(z)
    values = []
    for n in range(1, 2 * b):
        m = np.mean(one_minus_s * z**n)
        m += sum(bs.norm_marchenko**2 * bs.z**n for bs in bound_states)
        values.append(float(np.real(m)))
    return MarchenkoKernel(b, tuple(values))


def marchenko_solve(M: MarchenkoKernel) -> KTable:
    """Solve K_nm + M_{n+m} + sum_j K_nj M_{j+m} = 0 row by row."""
    b = M.b
    rows = []
    for n in range(b):
        idx = range(n + 1, 2 * b - n)
        row = [1.0]
        if len(idx):
            hankel = np.array([[M.at(j + m) for j in idx] for m in idx])
            rhs = -np.array([M.at(n + m) for m in idx])
            row.extend(solve_checked(np.eye(len(idx)) + hankel, rhs, row=n))
        rows.append(tuple(float(k) for k in row))
    return KTable(b, tuple(rows))


def potential_from_K(K: KTable) -> Potential:
    return Potential(tuple(K.entry(n - 1, n) - K.entry(n, n + 1) for n in range(1, K.b + 1)))


def marchenko_invert(f0: LaurentPoly, b: int) -> Potential:
    V = potential_from_K(marchenko_solve(marchenko_kernel(f0, b)))
    drift = float(np.max(np.abs(jost_function(V).dense(0, 2 * b - 1) - f0.dense(0, 2 * b - 1))))
    if drift > TOL.reconstruction * max(1.0, f0.scale):
        logger.warning(f"Marchenko reconstruction reproduces f0 only to {drift:.3e}")
    logger.debug(f"Marchenko inversion b={b}: {V.values}")
    return V
