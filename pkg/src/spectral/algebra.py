"""
Polynomial infrastructure shared by every pipeline.

Laurent polynomials in z, real polynomials in the spectral parameter
lambda = 2 - z - 1/z, conversion between the two, Taylor coefficients of
reciprocals, exact division by (z - 1/z) and root finding with multiplicity
clustering. All values are immutable.

Known limitation: the lambda <-> Laurent basis change is ill-conditioned in
float64. Round trips lose digits as the degree grows, reaching about 1e-9
relative at degree 10 and about 1e-6 relative at degree 16.
"""

import logging
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from ..config import TOL
from .errors import (
    DidNotConverge,
    DivisionRemainder,
    NonFiniteCoefficients,
    NotPalindromic,
    SingularAtOrigin,
    SingularSystem,
)

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)

# lambda = -z^{-1} + 2 - z
LAMBDA_STENCIL = np.array([-1.0, 2.0, -1.0])


def _finite_array(coeffs) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(coeffs, dtype=float)).ravel()
    if not np.all(np.isfinite(arr)):
        raise NonFiniteCoefficients(f"coefficients must be finite, got {arr.tolist()}")
    return arr


def _kept_range(arr: np.ndarray, tol: float):
    """First and last index above tol * max|arr|, or None when everything vanishes."""
    if arr.size == 0:
        return None
    scale = float(np.max(np.abs(arr)))
    if scale == 0.0:
        return None
    keep = np.nonzero(np.abs(arr) > tol * scale)[0]
    return int(keep[0]), int(keep[-1])


# ---- Polynomials in lambda ----

@dataclass(frozen=True)
class LambdaPoly:
    """Real polynomial in lambda, coeffs[j] multiplying lambda**j."""

    coeffs: tuple = ()

    def __post_init__(self):
        arr = _finite_array(self.coeffs) if len(np.atleast_1d(self.coeffs)) else np.zeros(0)
        kept = _kept_range(arr, TOL.zero_trim)
        trimmed = () if kept is None else tuple(float(c) for c in arr[: kept[1] + 1])
        object.__setattr__(self, "coeffs", trimmed)

    @classmethod
    def from_roots(cls, roots: Iterable[complex]) -> "LambdaPoly":
        return cls(np.real(P.polyfromroots(list(roots))))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    @property
    def leading(self) -> float:
        return self.coeffs[-1] if self.coeffs else 0.0

    def array(self) -> np.ndarray:
        return np.array(self.coeffs) if self.coeffs else np.zeros(1)

    def coeff(self, j: int) -> float:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0.0

    def monic(self) -> "LambdaPoly":
        return LambdaPoly(self.array() / self.leading)

    def __call__(self, lam):
        return P.polyval(lam, self.array())

    def __add__(self, other):
        return LambdaPoly(P.polyadd(self.array(), _as_lambda(other).array()))

    __radd__ = __add__

    def __sub__(self, other):
        return LambdaPoly(P.polysub(self.array(), _as_lambda(other).array()))

    def __neg__(self):
        return LambdaPoly(-self.array())

    def __mul__(self, other):
        if isinstance(other, LambdaPoly):
            return LambdaPoly(P.polymul(self.array(), other.array()))
        return LambdaPoly(self.array() * float(other))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return LambdaPoly(self.array() / float(scalar))


def _as_lambda(value) -> LambdaPoly:
    return value if isinstance(value, LambdaPoly) else LambdaPoly((float(value),))


# ---- Laurent polynomials in z ----

@dataclass(frozen=True)
class LaurentPoly:
    """Real Laurent polynomial sum_{k=lo}^{hi} coeffs[k - lo] * z**k.

    Only exact zeros are stripped from the ends; sums and quotients, where
    cancellation leaves rounding noise, go through trimmed().
    """

    lo: int = 0
    coeffs: tuple = (0.0,)

    def __post_init__(self):
        arr = _finite_array(self.coeffs) if len(np.atleast_1d(self.coeffs)) else np.zeros(0)
        kept = _kept_range(arr, 0.0)
        if kept is None:
            object.__setattr__(self, "lo", 0)
            object.__setattr__(self, "coeffs", (0.0,))
            return
        first, last = kept
        object.__setattr__(self, "lo", int(self.lo) + first)
        object.__setattr__(self, "coeffs", tuple(float(c) for c in arr[first : last + 1]))

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls(0, (0.0,))

    @classmethod
    def constant(cls, value: float) -> "LaurentPoly":
        return cls(0, (float(value),))

    @classmethod
    def polynomial(cls, coeffs) -> "LaurentPoly":
        return cls(0, tuple(coeffs))

    @classmethod
    def monomial(cls, power: int, value: float = 1.0) -> "LaurentPoly":
        return cls(power, (float(value),))

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def coeff(self, power: int) -> float:
        idx = power - self.lo
        return self.coeffs[idx] if 0 <= idx < len(self.coeffs) else 0.0

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for powers lo..hi, zero-padded."""
        return np.array([self.coeff(k) for k in range(lo, hi + 1)])

    def trimmed(self, tol: float | None = None) -> "LaurentPoly":
        """Drop end coefficients below tol * scale (default zero_trim)."""
        kept = _kept_range(self.array(), TOL.zero_trim if tol is None else tol)
        if kept is None:
            return LaurentPoly.zero()
        first, last = kept
        return LaurentPoly(self.lo + first, self.coeffs[first : last + 1])

    def as_dict(self) -> dict:
        return {k: c for k, c in zip(range(self.lo, self.hi + 1), self.coeffs) if c != 0.0}

    def __call__(self, z):
        z = np.asarray(z)
        if z.dtype.kind in "iub":
            z = z.astype(float)
        return P.polyval(z, self.array()) * np.power(z, self.lo)

    def derivative(self) -> "LaurentPoly":
        powers = np.arange(self.lo, self.hi + 1)
        return LaurentPoly(self.lo - 1, self.array() * powers)

    def reflect(self) -> "LaurentPoly":
        """L(1/z)."""
        return LaurentPoly(-self.hi, self.array()[::-1])

    def __add__(self, other):
        other = _as_laurent(other)
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return LaurentPoly(lo, self.dense(lo, hi) + other.dense(lo, hi)).trimmed()

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.lo, -self.array())

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return LaurentPoly(self.lo + other.lo, np.convolve(self.array(), other.array()))
        return LaurentPoly(self.lo, self.array() * float(other))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return LaurentPoly(self.lo, self.array() / float(scalar))


def _as_laurent(value) -> LaurentPoly:
    return value if isinstance(value, LaurentPoly) else LaurentPoly.constant(value)


Z_MINUS_INVERSE = LaurentPoly(-1, (-1.0, 0.0, 1.0))


def plus_part(L: LaurentPoly) -> LaurentPoly:
    """Terms with strictly positive powers of z."""
    if L.hi <= 0:
        return LaurentPoly.zero()
    start = max(L.lo, 1)
    return LaurentPoly(start, L.array()[start - L.lo :])


def minus_part(L: LaurentPoly) -> LaurentPoly:
    """Terms with strictly negative powers of z."""
    if L.lo >= 0:
        return LaurentPoly.zero()
    stop = min(L.hi, -1)
    return LaurentPoly(L.lo, L.array()[: stop - L.lo + 1])


def zero_coeff(L: LaurentPoly) -> float:
    return L.coeff(0)


def is_palindromic(L: LaurentPoly, tol: float | None = None) -> bool:
    d = max(abs(L.lo), abs(L.hi))
    c = L.dense(-d, d)
    tol = TOL.palindrome if tol is None else tol
    return float(np.max(np.abs(c - c[::-1]))) <= tol * L.scale


def lambda_to_laurent(p: LambdaPoly) -> LaurentPoly:
    """Expand p(2 - z - 1/z); the result runs over powers -d..d."""
    if p.is_zero:
        return LaurentPoly.zero()
    acc = np.array([p.coeffs[-1]])
    for c in reversed(p.coeffs[:-1]):
        acc = np.convolve(acc, LAMBDA_STENCIL)
        acc[len(acc) // 2] += c
    return LaurentPoly(-p.degree, acc)


def laurent_to_lambda(L: LaurentPoly) -> LambdaPoly:
    """Inverse of lambda_to_laurent for palindromic input.

    Uses z^k + z^-k = s_k(lambda) with s_0 = 2, s_1 = 2 - lambda and
    s_{k+1} = (2 - lambda) s_k - s_{k-1}.
    """
    if L.is_zero:
        return LambdaPoly(())
    d = max(abs(L.lo), abs(L.hi))
    c = L.dense(-d, d)
    asym = float(np.max(np.abs(c - c[::-1])))
    if asym > TOL.palindrome * L.scale:
        raise NotPalindromic(f"asymmetry {asym:.3e} exceeds tolerance on scale {L.scale:.3e}")
    sym = 0.5 * (c + c[::-1])

    result = np.zeros(d + 1)
    result[0] = sym[d]
    two_minus = np.array([2.0, -1.0])
    s_prev, s_cur = np.array([2.0]), two_minus
    for k in range(1, d + 1):
        result[: len(s_cur)] += sym[d + k] * s_cur
        s_prev, s_cur = s_cur, P.polysub(P.polymul(two_minus, s_cur), s_prev)
    return LambdaPoly(result)


def reciprocal_fractions(p: LaurentPoly, order: int) -> list:
    """Taylor coefficients a_0..a_order of 1/p at z = 0, exact over the float coefficients.

    The a_k grow like |z0|^-k for an interior zero z0 of p.
    """
    if p.lo < 0:
        raise ValueError("reciprocal_series needs a polynomial (lo >= 0)")
    c0 = p.coeff(0)
    if abs(c0) < TOL.singular_origin:
        raise SingularAtOrigin(f"|p(0)| = {abs(c0):.3e}")
    c = [Fraction(float(x)) for x in p.dense(0, order)]
    a = [1 / c[0]]
    for k in range(1, order + 1):
        a.append(-sum(c[j] * a[k - j] for j in range(1, k + 1)) / c[0])
    return a


def to_floats(values) -> np.ndarray:
    """Round exact values to float64; overflow raises NonFiniteCoefficients."""
    try:
        return np.array([float(v) for v in values], dtype=float)
    except OverflowError as exc:
        raise NonFiniteCoefficients(f"value out of float range: {exc}") from exc


def reciprocal_series(p: LaurentPoly, order: int) -> np.ndarray:
    """Taylor coefficients a_0..a_order of 1/p at z = 0."""
    return to_floats(reciprocal_fractions(p, order))


def divide_by_z_minus_inverse(L: LaurentPoly) -> LaurentPoly:
    """Exact quotient L / (z - 1/z) by synthetic division from the top power."""
    n = L.array()
    lo, hi = L.lo, L.hi
    if hi - lo < 2:
        remainder = 0.0 if L.is_zero else float(np.max(np.abs(n)))
        if remainder > 0.0:
            raise DivisionRemainder(f"remainder {remainder:.3e} dividing by (z - 1/z)")
        return LaurentPoly.zero()

    # quotient powers lo+1..hi-1; Q_{k-1} = n_k + Q_{k+1}
    q = np.zeros(hi - lo + 2)  # index power - lo, with slack for Q_{hi}, Q_{hi+1}
    for k in range(hi, lo + 1, -1):
        q[k - 1 - lo] = n[k - lo] + q[k + 1 - lo]
    remainder = max(abs(n[0] + q[1]), abs(n[1] + q[2]))
    if remainder > TOL.division_remainder * L.scale:
        raise DivisionRemainder(f"remainder {remainder:.3e} dividing by (z - 1/z)")
    return LaurentPoly(lo + 1, q[1 : hi - lo]).trimmed()


# ---- Roots ----

@dataclass(frozen=True)
class RootSet:
    """Distinct root locations with multiplicities, sorted by real then imaginary part."""

    entries: tuple = ()

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def locations(self) -> list:
        return [z for z, _ in self.entries]

    @property
    def multiplicities(self) -> list:
        return [m for _, m in self.entries]

    def expanded(self) -> list:
        return [z for z, m in self.entries for _ in range(m)]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _coefficient_array(p: Union[LambdaPoly, LaurentPoly]) -> np.ndarray:
    if isinstance(p, LambdaPoly):
        return p.array()
    if p.lo < 0:
        raise ValueError("roots of a Laurent polynomial need lo >= 0")
    return np.concatenate([np.zeros(p.lo), p.array()])


def _bound(c: np.ndarray, z) -> np.ndarray:
    """Rounding scale sum |c_k| |z|^k of a Horner evaluation."""
    return P.polyval(np.abs(z), np.abs(c))


def _aberth(c: np.ndarray, z: np.ndarray, max_iter: int):
    dc = P.polyder(c)
    z = z.astype(complex)
    best = z.copy()
    best_res = np.abs(P.polyval(z, c))
    floor = 4.0 * len(c) * EPS

    for _ in range(max_iter):
        p = P.polyval(z, c)
        res = np.abs(p)
        better = res < best_res
        best[better], best_res[better] = z[better], res[better]
        if np.all(res <= floor * _bound(c, z)):
            return best, True

        dp = P.polyval(z, dc)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            repel = np.where(diff == 0, 0.0, 1.0 / diff).sum(axis=1)
            denom = dp - p * repel
            step = np.where(denom != 0, p / denom, 0.0)
        step = np.nan_to_num(step, nan=0.0, posinf=0.0, neginf=0.0)
        if np.all(np.abs(step) <= 2.0 * EPS * np.maximum(np.abs(z), 1.0)):
            return best, True
        z = z - step
    return best, False


def _union_groups(z: np.ndarray, radius: float) -> list:
    parent = list(range(len(z)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    scale = np.maximum(1.0, np.abs(z))
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if abs(z[i] - z[j]) <= radius * max(scale[i], scale[j]):
                parent[find(i)] = find(j)

    groups = {}
    for i in range(len(z)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _multiple_root(c: np.ndarray, pts: np.ndarray):
    """Centre of an m-fold root if the group tests as one, else None."""
    m = len(pts)
    mean = complex(np.mean(pts))
    if len(c) - 1 < m:
        return None
    centre = mean
    dm, dm1 = P.polyder(c, m - 1), P.polyder(c, m)
    for _ in range(8):
        fp = P.polyval(centre, dm1)
        if fp == 0:
            break
        step = P.polyval(centre, dm) / fp
        centre -= step
        if abs(step) <= 4.0 * EPS * max(1.0, abs(centre)):
            break
    if abs(centre - mean) > TOL.root_cluster_candidate * max(1.0, abs(mean)):
        return None
    if abs(P.polyval(centre, c)) <= 16.0 * len(c) * EPS * _bound(c, centre):
        return centre
    return None


def _cluster(c: np.ndarray, z: np.ndarray) -> list:
    entries = []
    for group in _union_groups(z, TOL.root_cluster_candidate):
        pts = z[group]
        if len(pts) == 1:
            entries.append((complex(pts[0]), 1))
            continue
        centre = _multiple_root(c, pts)
        if centre is not None:
            entries.append((complex(centre), len(pts)))
            continue
        for tight in _union_groups(pts, TOL.root_cluster):
            entries.append((complex(np.mean(pts[tight])), len(tight)))
    return entries


def _pair_conjugates(entries: list) -> list:
    out, upper, lower = [], [], []
    for loc, m in entries:
        if abs(loc.imag) <= TOL.real_snap * max(1.0, abs(loc)):
            out.append((complex(loc.real, 0.0), m))
        elif loc.imag > 0:
            upper.append((loc, m))
        else:
            lower.append((loc, m))

    for loc, m in upper:
        if not lower:
            out.append((loc, m))
            continue
        j = int(np.argmin([abs(np.conj(l) - loc) for l, _ in lower]))
        partner, pm = lower.pop(j)
        centre = 0.5 * (loc + np.conj(partner))
        if pm != m:
            logger.warning(f"Conjugate pair {loc} / {partner} has multiplicities {m} and {pm}")
        out.append((complex(centre), m))
        out.append((complex(np.conj(centre)), pm))
    out.extend(lower)
    return sorted(out, key=lambda e: (e[0].real, e[0].imag))


def roots(p: Union[LambdaPoly, LaurentPoly]) -> RootSet:
    """All roots of a real polynomial, clustered by multiplicity.

    Companion-matrix eigenvalues seed an Aberth-Ehrlich iteration; nearby
    approximations are merged and conjugate pairs are symmetrised.
    """
    c = _coefficient_array(p)
    if len(c) < 2:
        raise ValueError("roots need a polynomial of degree >= 1")

    at_origin = 0
    while c[at_origin] == 0.0:
        at_origin += 1
    core = c[at_origin:]

    found = np.zeros(0, dtype=complex)
    if len(core) > 1:
        seeds = P.polyroots(core).astype(complex)
        found, converged = _aberth(core, seeds, TOL.root_max_iter)
        if not converged:
            resid = np.abs(P.polyval(found, core))
            if np.any(resid > 1e-8 * _bound(core, found)):
                raise DidNotConverge(
                    f"Aberth iteration hit {TOL.root_max_iter} steps, residual {resid.max():.3e}"
                )
            logger.debug("Root iteration capped; residuals acceptable")

    z = np.concatenate([np.zeros(at_origin, dtype=complex), found])
    return RootSet(tuple(_pair_conjugates(_cluster(c, z))))


# ---- Linear systems ----

def solve_checked(matrix: np.ndarray, rhs: np.ndarray, row: int) -> np.ndarray:
    """Partial-pivot LU solve; `row` names the system in the SingularSystem error."""
    matrix = np.asarray(matrix, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if smallest <= TOL.pivot * max(1.0, float(np.max(np.abs(matrix)))):
        raise SingularSystem(f"pivot {smallest:.3e} below tolerance", row)
    return lu_solve((lu, piv), rhs)
