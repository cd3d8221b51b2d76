"""
Gel'fand-Levitan inversion.

The kernel G[n][m] integrates the unperturbed regular solutions against the
difference of the perturbed and unperturbed spectral measures. On the unit
circle the continuous density reduces to the Laurent coefficients h_k of
1/(f0(z) f0(1/z)), so that the continuous part of G[n][m] is
h_|n-m| - h_(n+m). Each h_k is a finite sum of residues. A Gauss-Legendre
quadrature in theta serves as oracle and as fallback when f0 has zeros on
or near |z| = 1.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import roots_legendre

from ..config import TOL
from .algebra import LaurentPoly, RootSet, reciprocal_series, roots, solve_checked
from .errors import RootNearCircle
from .forward import (
    ATable,
    Potential,
    SpectralData,
    jost_function,
    regular_solution_at,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GLKernel:
    """Symmetric matrix G[n][m], 1 <= n, m <= size; values[n-1][m-1]."""

    size: int
    values: tuple
    route: str = "residue"
    warnings: tuple = ()

    @classmethod
    def from_matrix(cls, G: np.ndarray, route: str = "residue", warnings: tuple = ()) -> "GLKernel":
        G = 0.5 * (G + G.T)
        return cls(G.shape[0], tuple(tuple(float(g) for g in row) for row in G), route, warnings)

    def entry(self, n: int, m: int) -> float:
        return self.values[n - 1][m - 1]

    def matrix(self) -> np.ndarray:
        return np.array(self.values)


# ---- Continuous part ----

def _laurent_density_coefficients(f0: LaurentPoly, zeros: Optional[RootSet], kmax: int) -> np.ndarray:
    """h_0..h_kmax of 1/(f0(z) f0(1/z)) on |z| = 1, by residues inside the circle."""
    d = f0.hi
    c = f0.dense(0, d)
    q = P.polymul(c, c[::-1])  # f0(z) * z^d f0(1/z)
    dq = P.polyder(q)

    # zeros of f0 inside, and reciprocals of zeros outside (zeros of the reversed f0)
    poles = []
    for w, _ in zeros or ():
        poles.append(w if abs(w) < 1.0 else 1.0 / w)
    poles = np.array(poles, dtype=complex)
    slopes = P.polyval(poles, dq)

    series = reciprocal_series(LaurentPoly.polynomial(q), max(kmax - d, 0))
    h = np.zeros(kmax + 1)
    for k in range(kmax + 1):
        total = np.sum(poles ** (d - k - 1) / slopes) if poles.size else 0.0
        if k >= d:
            total += series[k - d]
        h[k] = float(np.real(total))
    return h


def _continuous_residues(f0: LaurentPoly, zeros: Optional[RootSet], size: int) -> np.ndarray:
    h = _laurent_density_coefficients(f0, zeros, 2 * size)
    n = np.arange(1, size + 1)
    return h[np.abs(n[:, None] - n[None, :])] - h[n[:, None] + n[None, :]]


def _theta_nodes(nodes: int):
    x, w = roots_legendre(nodes)
    return 0.5 * np.pi * (x + 1.0), 0.5 * np.pi * w


def _continuous_quadrature(f0: LaurentPoly, size: int, nodes: int) -> np.ndarray:
    """(2/pi) int_0^pi sin(n t) sin(m t) / |f0(e^it)|^2 dt."""
    theta, weights = _theta_nodes(nodes)
    density = 1.0 / np.abs(f0(np.exp(1j * theta))) ** 2
    sines = np.sin(np.outer(np.arange(1, size + 1), theta))
    return (2.0 / np.pi) * (sines * (weights * density)) @ sines.T


def _discrete_part(data: SpectralData, size: int) -> np.ndarray:
    out = np.zeros((size, size))
    for bs in data.bound_states:
        free = regular_solution_at((), size, bs.mu)[1:]
        out += bs.norm_gl**2 * np.outer(free, free)
    return out


def gl_kernel(data: SpectralData, size: int) -> GLKernel:
    if size < 1:
        raise ValueError("size must be >= 1")
    f0 = data.f0
    zeros = roots(f0) if f0.hi >= 1 else None
    notes = []
    if zeros is not None:
        near = [w for w, _ in zeros if abs(abs(w) - 1.0) < TOL.near_circle]
        if near:
            notes.append(RootNearCircle(f"f0 has zeros near |z|=1: {near}"))
        elif any(m > 1 for _, m in zeros):
            notes.append(RootNearCircle("f0 has a multiple zero; residues need simple poles"))

    if notes:
        for note in notes:
            logger.warning(f"{note}; using quadrature")
        continuous = _continuous_quadrature(f0, size, TOL.quadrature_nodes)
        route = "quadrature"
    else:
        continuous = _continuous_residues(f0, zeros, size)
        route = "residue"

    G = continuous + _discrete_part(data, size) - np.eye(size)
    return GLKernel.from_matrix(G, route, tuple(str(n) for n in notes))


def gl_kernel_quadrature(data: SpectralData, size: int, nodes: Optional[int] = None) -> GLKernel:
    continuous = _continuous_quadrature(data.f0, size, nodes or TOL.quadrature_nodes)
    return GLKernel.from_matrix(continuous + _discrete_part(data, size) - np.eye(size), "quadrature")


# ---- Spectral measure ----

def spectral_density(f0: LaurentPoly, lam):
    """Continuous density sqrt(lam (4 - lam)) / (2 pi |f0|^2) on [0, 4]."""
    lam = np.asarray(lam, dtype=float)
    z = np.exp(1j * np.arccos(1.0 - lam / 2.0))
    return np.sqrt(lam * (4.0 - lam)) / (2.0 * np.pi * np.abs(f0(z)) ** 2)


def spectral_gram(data: SpectralData, V: Potential, size: int, nodes: Optional[int] = None) -> np.ndarray:
    """Gram matrix of phi_1..phi_size under the spectral measure of f0 and its bound states."""
    theta, weights = _theta_nodes(nodes or TOL.quadrature_nodes)
    lam = 2.0 - 2.0 * np.cos(theta)
    phi = regular_solution_at(V.values, size, lam)[1:]
    density = (2.0 / np.pi) * np.sin(theta) ** 2 / np.abs(data.f0(np.exp(1j * theta))) ** 2
    gram = (phi * (weights * density)) @ phi.T
    for bs in data.bound_states:
        at = regular_solution_at(V.values, size, bs.mu)[1:]
        gram += bs.norm_gl**2 * np.outer(at, at)
    return gram


# ---- Linear system and recovery ----

def gl_solve(G: GLKernel, b: int) -> ATable:
    """Solve A_nm + G_nm + sum_{j<n} A_nj G_jm = 0 for n = 2..b+1."""
    if G.size < b + 1:
        raise ValueError(f"kernel size {G.size} < b+1 = {b + 1}")
    Gm = G.matrix()
    rows = [()]
    for n in range(2, b + 2):
        system = (np.eye(n - 1) + Gm[: n - 1, : n - 1]).T
        rows.append(tuple(float(a) for a in solve_checked(system, -Gm[n - 1, : n - 1], row=n)))
    return ATable(b + 1, tuple(rows))


def potential_from_A(A: ATable, b: int) -> Potential:
    if A.size < b + 1:
        raise ValueError(f"A table size {A.size} < b+1 = {b + 1}")
    return Potential(tuple(A.entry(n + 1, n) - A.entry(n, n - 1) for n in range(1, b + 1)))


def gl_invert(data: SpectralData) -> Potential:
    b = data.b
    G = gl_kernel(data, b + 1)
    V = potential_from_A(gl_solve(G, b), b)
    drift = float(np.max(np.abs(jost_function(V).dense(0, 2 * b - 1) - data.f0.dense(0, 2 * b - 1))))
    if drift > TOL.reconstruction * max(1.0, data.f0.scale):
        logger.warning(f"Gel'fand-Levitan reconstruction reproduces f0 only to {drift:.3e}")
    logger.debug(f"GL inversion b={b} via {G.route}: {V.values}")
    return V
