"""
Runtime Defaults and Environment Overrides
"""

import json
import logging
import os
from typing import Dict, Optional

from .errors import ConfigurationError
from .numerics import SeriesConfig

logger = logging.getLogger(__name__)

ENV_PREFIX = "BIORTHO_"

FALLBACK_DEFAULTS = {
    "series": {"rel_tol": 1e-12, "abs_tol": 1e-300, "max_terms": 10000, "tail_window": 3},
    "chain": {
        "steps": 20000,
        "burn_in": 2000,
        "thin": 5,
        "proposal_scale": 0.1,
        "seed": 20240517,
        "chains": 4,
        "adapt_interval": 100,
    },
    "verification": {
        "thresholds": {
            "reproducing": 1e-6,
            "trace": 1e-6,
            "gram_residual": 1e-8,
            "dense_match": 1e-6,
            "biorthonormality": 1e-8,
            "general_pairs": 1e-9,
            "polynomial_kernel": 1e-9,
            "symmetry": 1e-8,
            "finite_symmetry_gap": 1e-3,
            "reduction": 1e-8,
            "wright_identity": 1e-10,
            "component_limit": 0.02,
            "convergence": 0.05,
            "numerics": 1e-12,
            "quadrature": 1e-9,
            "cross_method": 1e-9,
            "closed_form_match": 1e-10,
        },
        "parameters": [[0.0, 1.0], [0.5, 2.0], [1.5, 0.5]],
        "jacobi_n": [1, 2, 4, 6, 8],
        "laguerre_n": [1, 2, 4, 6, 8],
        "hermite_n": [1, 2, 3, 5, 8],
        "test_points": [0.1, 0.25, 0.4, 0.55, 0.7],
        "convergence_n": [50, 100, 200, 400],
        "gram_n": [1, 2, 4, 8, 12],
        "dense_n": [1, 2, 4, 6],
        "component_n": [100, 400],
        "component_points": [0.5, 1.0, 1.5, 2.0, 2.5],
        "seed": 7,
    },
}

# (field, environment variable, parser)
SERIES_ENV_FIELDS = (
    ("rel_tol", ENV_PREFIX + "REL_TOL", float),
    ("abs_tol", ENV_PREFIX + "ABS_TOL", float),
    ("max_terms", ENV_PREFIX + "MAX_TERMS", int),
    ("tail_window", ENV_PREFIX + "TAIL_WINDOW", int),
)


def load_defaults() -> Dict:
    """Load engine defaults from data/defaults.json."""
    try:
        data_path = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'data', 'defaults.json')
        with open(data_path, 'r') as f:
            data = json.load(f)
        # touch every section so a truncated file falls back as a whole
        for section in FALLBACK_DEFAULTS:
            data[section]
        return data
    except (FileNotFoundError, KeyError, json.JSONDecodeError):
        logger.warning("defaults.json unavailable, using built-in defaults")
        return json.loads(json.dumps(FALLBACK_DEFAULTS))


DEFAULTS = load_defaults()


def series_config_from_env(base: Optional[SeriesConfig] = None,
                           environ: Optional[Dict[str, str]] = None) -> SeriesConfig:
    """
    Apply BIORTHO_* environment overrides to a SeriesConfig.

    Args:
        base (SeriesConfig): Starting configuration (defaults.json when omitted)
        environ (dict): Environment mapping, os.environ when omitted

    Returns:
        SeriesConfig: Configuration with overrides applied
    """
    environ = os.environ if environ is None else environ
    values = base.as_dict() if base is not None else dict(DEFAULTS["series"])
    for field, variable, parse in SERIES_ENV_FIELDS:
        raw = environ.get(variable)
        if raw is None or raw.strip() == "":
            continue
        try:
            values[field] = parse(raw)
        except ValueError:
            raise ConfigurationError(f"{variable} must be a valid {parse.__name__}, got {raw!r}")
        logger.debug("%s overridden from %s", field, variable)
    try:
        return SeriesConfig(**values)
    except ValueError as e:
        raise ConfigurationError(str(e))


def default_series_config() -> SeriesConfig:
    """SeriesConfig from defaults.json with environment overrides."""
    return series_config_from_env()


def default_chain_config(**overrides):
    """
    ChainConfig from the defaults.json chain section.

    Args:
        **overrides: Field values replacing the defaults

    Returns:
        ChainConfig: Validated chain configuration
    """
    from .sampler import ChainConfig

    values = dict(DEFAULTS["chain"])
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ChainConfig(**values)


def verification_thresholds() -> Dict[str, float]:
    """Thresholds used by the verification suites."""
    thresholds = dict(FALLBACK_DEFAULTS["verification"]["thresholds"])
    thresholds.update(DEFAULTS["verification"].get("thresholds", {}))
    return thresholds


def verification_setting(name: str):
    """One entry of the verification section, falling back to built-ins."""
    return DEFAULTS["verification"].get(name, FALLBACK_DEFAULTS["verification"][name])
