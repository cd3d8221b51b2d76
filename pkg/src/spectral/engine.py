"""
Pipeline orchestration: parse a document, run the numerics, return a JSON-ready report.
"""

import logging
from typing import Optional

from ..models import (
    PROBLEM_ADAPTER,
    GLDataDocument,
    JostDocument,
    PotentialDocument,
    SpectrumDocument,
)
from .algebra import LambdaPoly, LaurentPoly
from .errors import SpectralError
from .forward import (
    BoundState,
    Potential,
    SpectralData,
    TransmissionSpectrum,
    classify_endpoint,
    endpoint_is_transmission_eigenvalue,
    jost_table,
    scattering_matrix,
    spectral_data,
    spectral_data_from_jost,
    sum_rule_residual,
    transmission_det,
    transmission_eigenvalues,
)
from .gelfand_levitan import gl_kernel, gl_solve, potential_from_A
from .golden import run_cases
from .marchenko import marchenko_kernel, marchenko_solve, potential_from_K
from .tev_inverse import (
    InversionReport,
    InversionStatus,
    OneParameterFamily,
    tev_invert,
    unusual_family_b3,
)

logger = logging.getLogger(__name__)


class DocumentKindError(ValueError):
    pass


STATUS_EXIT = {
    InversionStatus.UNIQUE: 0,
    InversionStatus.UNUSUAL: 4,
    InversionStatus.INCONSISTENT: 5,
}


def parse_document(raw: dict, *models):
    """Validate raw JSON against the accepted document models.

    A missing "kind" means the first accepted model.
    """
    if not isinstance(raw, dict):
        raise DocumentKindError("document must be a JSON object")
    if "kind" not in raw:
        return models[0].model_validate(raw)
    doc = PROBLEM_ADAPTER.validate_python(raw)
    if type(doc) not in models:
        accepted = ", ".join(m.model_fields["kind"].default for m in models)
        raise DocumentKindError(f"expected a document of kind {accepted}, got {raw['kind']!r}")
    return doc


# ---- Serialisers ----

def _pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _laurent(L: LaurentPoly) -> dict:
    return {"lo": L.lo, "coeffs": [float(c) for c in L.coeffs]}


def _lambda(p: Optional[LambdaPoly]):
    return None if p is None else [float(c) for c in p.coeffs]


def _bound_state(bs: BoundState) -> dict:
    return {"z": bs.z, "mu": bs.mu, "c": bs.norm_marchenko, "C": bs.norm_gl}


def _potential_doc(V: Potential, **meta) -> dict:
    return {"kind": "potential", "V": list(V.values), "meta": {k: str(v) for k, v in meta.items()}}


def _spectral_data(doc: JostDocument) -> SpectralData:
    f0 = LaurentPoly.polynomial(doc.f0)
    if isinstance(doc, GLDataDocument):
        states = []
        for entry in doc.bound_states:
            kappa = f0.reflect()(entry.z) / (entry.z - 1.0 / entry.z)
            states.append(
                BoundState(
                    z=entry.z,
                    mu=2.0 - entry.z - 1.0 / entry.z,
                    norm_marchenko=float(entry.C * abs(kappa)),
                    norm_gl=entry.C,
                )
            )
        return SpectralData(f0, tuple(states), doc.b)
    return spectral_data_from_jost(f0, doc.b)


# ---- Pipelines ----

def run_forward(raw: dict) -> dict:
    doc = parse_document(raw, PotentialDocument)
    V = Potential(tuple(doc.V))
    b = V.b
    logger.info(f"Forward problem for b={b}")

    data = spectral_data(V)
    f0 = data.f0
    S = scattering_matrix(f0)
    det = transmission_det(V)

    report = {
        "kind": "forward_report",
        "b": b,
        "V": list(V.values),
        "f0": [float(c) for c in f0.dense(0, 2 * b - 1)],
        "K": [list(row) for row in jost_table(V).rows],
        "scattering": {"numerator": _laurent(S.numerator), "denominator": _laurent(S.denominator)},
        "bound_states": [_bound_state(bs) for bs in data.bound_states],
        "endpoints": {
            str(end): {
                "class": classify_endpoint(f0, end).value,
                "transmission_eigenvalue": endpoint_is_transmission_eigenvalue(f0, end),
            }
            for end in (1, -1)
        },
        "D": _lambda(det.D),
        "E": _lambda(det.E),
        "eigenvalues": None,
        "jost": {"kind": "jost", "f0": [float(c) for c in f0.dense(0, 2 * b - 1)], "b": b},
    }

    if b >= 2 and det.E is not None:
        spec = transmission_eigenvalues(V)
        report["eigenvalues"] = [
            {"re": float(loc.real), "im": float(loc.imag), "multiplicity": m} for loc, m in spec.rootset
        ]
        report["eigenvalue_sum"] = _pair(spec.total)
        report["sum_rule_residual"] = sum_rule_residual(V, spec.eigenvalues)
        report["spectrum"] = {"kind": "spectrum", "eigs": [_pair(e) for e in spec.eigenvalues]}
    elif det.E is None:
        logger.warning(f"V_b = 0 for b={b}; no transmission eigenvalues")
    return report


def inversion_report(report: InversionReport, method: str) -> dict:
    diag = report.diagnostics
    return {
        "kind": "inversion_report",
        "status": report.status.value,
        "method": method,
        "potential": None if report.potential is None else list(report.potential.values),
        "f0": None if report.f0 is None else [float(c) for c in report.f0.dense(0, report.f0.hi)],
        "diagnostics": {
            "k01_over_vb": diag.k01_over_vb,
            "eigenvalue_sum": diag.eigenvalue_sum,
            "expected_sum": diag.expected_sum,
            "unusual_gap": diag.unusual_gap,
            "warnings": list(diag.warnings),
            "message": diag.message,
        },
    }


def run_invert(raw: dict, method: str = "marchenko") -> tuple[dict, int]:
    doc = parse_document(raw, SpectrumDocument)
    spec = TransmissionSpectrum.from_eigenvalues(doc.values())
    logger.info(f"Inverting {len(spec.eigenvalues)} transmission eigenvalues (b={spec.b}) via {method}")
    report = tev_invert(spec, method)
    if report.status is not InversionStatus.UNIQUE:
        logger.warning(f"Inversion {report.status.value}: {report.diagnostics.message}")
    return inversion_report(report, method), STATUS_EXIT[report.status]


def run_marchenko(raw: dict) -> dict:
    doc = parse_document(raw, JostDocument)
    f0 = LaurentPoly.polynomial(doc.f0)
    M = marchenko_kernel(f0, doc.b)
    K = marchenko_solve(M)
    V = potential_from_K(K)
    out = _potential_doc(V, method="marchenko", b=doc.b)
    out["kernel"] = list(M.values)
    out["K"] = [list(row) for row in K.rows]
    return out


def run_gl(raw: dict) -> dict:
    doc = parse_document(raw, GLDataDocument, JostDocument)
    data = _spectral_data(doc)
    b = data.b
    G = gl_kernel(data, b + 1)
    A = gl_solve(G, b)
    V = potential_from_A(A, b)
    out = _potential_doc(V, method="gl", b=b, route=G.route)
    out["G"] = [list(row) for row in G.values]
    out["A"] = [list(row) for row in A.rows]
    return out


def run_examples(only: Optional[str] = None) -> tuple[dict, int]:
    results = run_cases(only)
    cases = []
    for r in results:
        if r.passed:
            logger.info(f"Case {r.name} passed (max residual {r.max_residual:.2e})")
        else:
            logger.error(f"Case {r.name} failed: {r.error or 'residual above tolerance'}")
        cases.append(
            {
                "name": r.name,
                "title": r.title,
                "passed": r.passed,
                "max_residual": r.max_residual,
                "error": r.error,
                "checks": [
                    {
                        "label": c.label,
                        "residual": c.residual,
                        "passed": c.passed(r.tolerance),
                    }
                    for c in r.checks
                ],
            }
        )
    passed = all(c["passed"] for c in cases)
    return {"kind": "golden_report", "passed": passed, "cases": cases}, 0 if passed else 1


def run_unusual_b3(gamma: float, epsilon: float) -> dict:
    family = unusual_family_b3(gamma, epsilon)
    if isinstance(family, OneParameterFamily):
        return {
            "kind": "unusual_family",
            "gamma": gamma,
            "epsilon": epsilon,
            "one_parameter": True,
            "fixed": [{"site": n, "value": v} for n, v in family.fixed],
            "free_site": family.free_site,
            "spectrum": {"kind": "spectrum", "eigs": [[1.0, 0.0], [1.0, 0.0], [3.0, 0.0], [3.0, 0.0]]},
        }

    members = []
    for V in family:
        entry = {"V": list(V.values)}
        try:
            entry["eigs"] = [_pair(e) for e in transmission_eigenvalues(V).eigenvalues]
        except SpectralError as exc:
            logger.warning(f"Eigenvalues of {V.values} unavailable: {exc}")
        members.append(entry)
    return {"kind": "unusual_family", "gamma": gamma, "epsilon": epsilon, "one_parameter": False, "members": members}
