"""
Worked cases with known closed-form answers, run end to end through the
forward and inverse pipelines.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from ..config import golden_tolerance
from .algebra import LaurentPoly
from .errors import SpectralError
from .forward import (
    Potential,
    TransmissionSpectrum,
    bound_states,
    endpoint_is_transmission_eigenvalue,
    jost_function,
    jost_table,
    spectral_data_from_jost,
    transmission_det,
    transmission_eigenvalues,
)
from .gelfand_levitan import gl_kernel, gl_solve, potential_from_A
from .marchenko import marchenko_kernel, marchenko_solve, potential_from_K
from .tev_inverse import (
    InversionStatus,
    OneParameterFamily,
    f0_scaled,
    build_E,
    tev_invert,
    unusual_criteria,
    unusual_family_b3,
)

logger = logging.getLogger(__name__)

SQRT57 = np.sqrt(57.0)
EIGENVALUE_TOL = 1e-4
ACCEPTANCE_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    label: str
    value: Union[float, complex]
    expected: Union[float, complex]
    tolerance: Optional[float] = None

    @property
    def residual(self) -> float:
        return float(abs(self.value - self.expected))

    def passed(self, default: float) -> bool:
        return self.residual <= (self.tolerance if self.tolerance is not None else default)


@dataclass(frozen=True)
class CaseResult:
    name: str
    title: str
    checks: tuple
    tolerance: float
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed(self.tolerance) for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)


def _sorted(values) -> list:
    return sorted((complex(v) for v in values), key=lambda w: (round(w.real, 6), w.imag))


def _eigenvalue_checks(label: str, V: Potential, expected, tol: Optional[float] = None) -> list:
    got = _sorted(transmission_eigenvalues(V).eigenvalues)
    want = _sorted(expected)
    checks = [Check(f"{label} count", len(got), len(want))]
    checks += [Check(f"{label} eig[{i}]", g, w, tol) for i, (g, w) in enumerate(zip(got, want))]
    return checks


def _flag(label: str, value: bool) -> Check:
    return Check(label, float(bool(value)), 1.0)


# ---- Cases ----

def single_site() -> list:
    strong = Potential((2.0,))
    f0 = jost_function(strong)
    states = bound_states(f0, strong)
    weak = Potential((0.5,))
    checks = [
        Check("V=(2) bound states", len(states), 1),
        Check("V=(2) z", states[0].z if states else 0.0, -0.5),
        Check("V=(2) c", states[0].norm_marchenko if states else 0.0, np.sqrt(3.0)),
        Check("V=(2) D", transmission_det(strong).D.coeff(0), 2.0),
        Check("V=(1/2) bound states", len(bound_states(jost_function(weak), weak)), 0),
    ]
    return checks


def unusual_b3_example() -> list:
    V = Potential((0.0, 0.0, 1.0))
    checks = _eigenvalue_checks("V=(0,0,1)", V, (1, 1, 3, 3))
    criteria = unusual_criteria(V)
    checks += [_flag(f"criterion {key}", ok) for key, ok in sorted(criteria.items())]
    report = tev_invert(transmission_eigenvalues(V))
    checks.append(_flag("status unusual", report.status is InversionStatus.UNUSUAL))
    return checks


def b2_catalogue() -> list:
    catalogue = [
        ((-4.0, -1.0), (0, 0)),
        ((-4.0, -0.8), (1j, -1j)),
        ((-4.0, 0.8), (3, -3)),
        ((-2.0, -1.0), (1 + 1j, 1 - 1j)),
    ]
    checks = []
    for values, eigs in catalogue:
        checks += _eigenvalue_checks(f"V={values}", Potential(values), eigs, ACCEPTANCE_TOL)
    return checks


def zero_eigenvalue() -> list:
    v1 = 1.0
    V = Potential((v1, -v1 / (4.0 + 2.0 * v1)))
    f0 = jost_function(V)
    eigs = transmission_eigenvalues(V).eigenvalues
    return [
        Check("min |eigenvalue|", min(abs(e) for e in eigs), 0.0, 1e-6),
        Check("f0'(1)", f0.derivative()(1.0), 0.0),
        _flag("lambda=0 is a transmission eigenvalue", endpoint_is_transmission_eigenvalue(f0, 1)),
    ]


def unusual_families() -> list:
    checks = []
    expected = {
        (7.0, 6.0): [(1.0, -1.0, 1.0 / 6.0), (2.0, -2.0, 2.0 / 3.0), (-3.0, 3.0, 1.5)],
        (3.0, 2.0): [(1.0, -1.0, 0.5), (-2.0, 2.0, 2.0)],
        (0.0, 1.0): [(-1.0, 1.0, 1.0)],
    }
    for (gamma, epsilon), members in expected.items():
        family = unusual_family_b3(gamma, epsilon)
        got = sorted(p.values for p in family)
        want = sorted(members)
        checks.append(Check(f"({gamma:g},{epsilon:g}) members", len(got), len(want)))
        for g, w in zip(got, want):
            checks += [Check(f"({gamma:g},{epsilon:g}) V{i + 1}", a, e, 1e-7) for i, (a, e) in enumerate(zip(g, w))]

    shared = (4.0, 3.85577, 1.32164, -1.17741)
    for member in unusual_family_b3(7.0, 6.0):
        checks += _eigenvalue_checks(f"V={member.values}", member, shared, EIGENVALUE_TOL)
    checks.append(_flag("(0,0) one-parameter family", isinstance(unusual_family_b3(0.0, 0.0), OneParameterFamily)))
    return checks


def marchenko_b2() -> list:
    spec = TransmissionSpectrum.from_eigenvalues(((11 + SQRT57) / 4, (11 - SQRT57) / 4))
    scaled = f0_scaled(build_E(spec))
    report = tev_invert(spec, "marchenko")
    f0 = report.f0 or LaurentPoly.zero()
    checks = [
        Check("K01/V_b", scaled.coeff(1), -2.0),
        _flag("status unique", report.status is InversionStatus.UNIQUE),
    ]
    checks += [Check(f"f0 z^{k}", f0.coeff(k), c) for k, c in enumerate((1.0, 1.0, -0.75, -0.5))]

    M = marchenko_kernel(f0, 2)
    checks += [Check(f"M{n}", M.at(n), m) for n, m in zip((1, 2, 3), (-0.875, 0.25, 0.5))]
    K = marchenko_solve(M)
    checks += [
        Check("K01", K.entry(0, 1), 1.0),
        Check("K02", K.entry(0, 2), -0.75),
        Check("K03", K.entry(0, 3), -0.5),
        Check("K12", K.entry(1, 2), -0.5),
    ]
    V = potential_from_K(K)
    checks += [Check("V1", V.site(1), 1.5), Check("V2", V.site(2), -0.5)]
    zs = spectral_data_from_jost(f0, 2).bound_states
    checks.append(Check("bound state z", zs[0].z if zs else 0.0, (1.0 - np.sqrt(17.0)) / 4.0))
    return checks


def gel_fand_levitan_b2() -> list:
    spec = TransmissionSpectrum.from_eigenvalues((-1.0, 4.0))
    E = build_E(spec)
    scaled = f0_scaled(E)
    report = tev_invert(spec, "gl")
    f0 = report.f0 or LaurentPoly.zero()
    checks = [Check(f"E lambda^{k}", E.coeff(k), c) for k, c in enumerate((-4.0, -3.0, 1.0))]
    checks += [Check(f"(f0-1)/V_b z^{k}", scaled.coeff(k), c) for k, c in ((1, -5.0), (2, -1.0), (3, 1.0))]
    checks += [Check(f"f0 z^{k}", f0.coeff(k), c) for k, c in enumerate((1.0, -5 / 6, -1 / 6, 1 / 6))]
    checks.append(_flag("status unique", report.status is InversionStatus.UNIQUE))

    G = gl_kernel(spectral_data_from_jost(f0, 2), 3)
    for (n, m), g in {(1, 1): 0.0, (2, 1): 1.0, (2, 2): 1.0, (3, 1): 1.0, (3, 2): 11 / 6}.items():
        checks.append(Check(f"G{n}{m}", G.entry(n, m), g, ACCEPTANCE_TOL))
    A = gl_solve(G, 2)
    for (n, j), a in {(2, 1): -1.0, (3, 1): -1 / 6, (3, 2): -5 / 6}.items():
        checks.append(Check(f"A{n}{j}", A.entry(n, j), a, ACCEPTANCE_TOL))
    V = potential_from_A(A, 2)
    checks += [Check("V1", V.site(1), -1.0, ACCEPTANCE_TOL), Check("V2", V.site(2), 1 / 6, ACCEPTANCE_TOL)]
    checks.append(Check("K01 of recovered V", jost_table(V).entry(0, 1), -5.0 / 6.0, ACCEPTANCE_TOL))
    return checks


GOLDEN_CASES: dict[str, tuple[str, Callable[[], list]]] = {
    "6.1": ("single-site potential, bound state and determinant", single_site),
    "6.2": ("b=3 potential in the unusual case", unusual_b3_example),
    "6.3": ("b=2 potentials with repeated, imaginary, real and complex pairs", b2_catalogue),
    "6.4": ("lambda = 0 as a transmission eigenvalue", zero_eigenvalue),
    "6.5": ("b=3 unusual families from the cubic", unusual_families),
    "6.6": ("Marchenko inversion from two transmission eigenvalues", marchenko_b2),
    "6.7": ("Gel'fand-Levitan inversion from two transmission eigenvalues", gel_fand_levitan_b2),
}


def run_case(name: str, tol: Optional[float] = None) -> CaseResult:
    if name not in GOLDEN_CASES:
        raise KeyError(f"unknown case: {name}")
    title, build = GOLDEN_CASES[name]
    tol = golden_tolerance() if tol is None else tol
    try:
        checks = tuple(build())
    except SpectralError as exc:
        logger.error(f"Case {name} raised {type(exc).__name__}: {exc}")
        return CaseResult(name, title, (), tol, f"{type(exc).__name__}: {exc}")
    result = CaseResult(name, title, checks, tol)
    for check in checks:
        if not check.passed(tol):
            logger.warning(f"Case {name}: {check.label} = {check.value!r}, expected {check.expected!r}")
    return result


def run_cases(only: Optional[str] = None, tol: Optional[float] = None) -> list:
    names = [only] if only else list(GOLDEN_CASES)
    return [run_case(name, tol) for name in names]
