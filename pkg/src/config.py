"""Tolerance settings loaded from config/tolerances.yaml."""

import logging
import os
from dataclasses import dataclass, fields, replace

import yaml

logger = logging.getLogger(__name__)

CONFIG_PATH = os.environ.get(
    "LATTICE_IST_CONFIG",
    os.path.join(os.path.dirname(os.path.dirname(__file__)), "config", "tolerances.yaml"),
)


@dataclass(frozen=True)
class Tolerances:
    # algebra
    zero_trim: float = 1e-12
    palindrome: float = 1e-9
    singular_origin: float = 1e-14
    root_cluster: float = 1e-7
    root_cluster_candidate: float = 1e-4
    root_max_iter: int = 200
    real_snap: float = 1e-9
    # forward
    division_remainder: float = 1e-10
    determinant_agreement: float = 1e-10
    determinant_failure: float = 1e-6
    bound_state_margin: float = 1e-9
    endpoint_window: float = 1e-7
    endpoint_zero: float = 1e-9
    norming_crosscheck: float = 1e-8
    sum_rule: float = 1e-8
    support_edge: float = 1e-12
    # inverse
    pivot: float = 1e-12
    kernel_support: float = 1e-9
    near_circle: float = 1e-7
    quadrature_nodes: int = 2000
    reconstruction: float = 1e-7
    # transmission
    conjugate_closure: float = 1e-9
    zero_coefficient: float = 1e-10
    unusual: float = 1e-7
    conditioning_warning: float = 1e-3
    verification: float = 1e-6
    # golden
    golden: float = 1e-8


_SECTION_ALIASES = {("golden", "tolerance"): "golden"}


def load_tolerances(path: str = CONFIG_PATH) -> Tolerances:
    """Read the YAML tolerance file; sections are flattened onto Tolerances fields."""
    defaults = Tolerances()
    if not os.path.exists(path):
        logger.warning(f"Tolerance file not found at {path}, using defaults")
        return defaults

    with open(path) as fh:
        raw = yaml.safe_load(fh) or {}

    types = {f.name: type(getattr(defaults, f.name)) for f in fields(Tolerances)}
    values = {}
    for section, entries in raw.items():
        if not isinstance(entries, dict):
            logger.warning(f"Ignoring non-mapping section '{section}' in {path}")
            continue
        for key, value in entries.items():
            name = _SECTION_ALIASES.get((section, key), key)
            if name not in types:
                logger.warning(f"Unknown tolerance '{section}.{key}' in {path}")
                continue
            values[name] = types[name](value)
    return replace(defaults, **values)


def golden_tolerance(tol: Tolerances | None = None) -> float:
    """Golden-case tolerance, overridable with LATTICE_IST_TOL."""
    override = os.environ.get("LATTICE_IST_TOL")
    if override:
        return float(override)
    return (tol or TOL).golden


TOL = load_tolerances()
