from importlib.metadata import PackageNotFoundError, version

from hullcode.bounds import (
    epsilon0,
    entropy,
    gv_condition,
    simplified_condition,
    success_probability_lower_bound,
    theta,
)
from hullcode.codes import LinearCode, dual, hull_dimension, min_distance, verify
from hullcode.construct import ConstructionParams, construct, sample_orthogonal_set
from hullcode.gf import field_from_order, field_new

try:
    # Change here if project is renamed and does not equal the package name
    dist_name = __name__
    __version__ = version(dist_name)
except PackageNotFoundError:  # pragma: no cover
    __version__ = "unknown"
finally:
    del version, PackageNotFoundError

__all__ = [
    "ConstructionParams",
    "LinearCode",
    "construct",
    "dual",
    "entropy",
    "epsilon0",
    "field_from_order",
    "field_new",
    "gv_condition",
    "hull_dimension",
    "min_distance",
    "sample_orthogonal_set",
    "simplified_condition",
    "success_probability_lower_bound",
    "theta",
    "verify",
]
