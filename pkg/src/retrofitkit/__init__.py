"""Residential retrofit toolkit.

Physics-grounded retrofit outcomes for synthetic housing stock, a
fine-tuning corpus builder over those outcomes, an evaluation harness for
model answers, and a nearest-prototype advisor service.
"""

__version__ = "0.1.0"

from .core import (
    BuildingGeometry,
    BuildingRecord,
    FuelType,
    FuelVector,
    HvacSubtype,
    MeasureId,
    OutcomeRecord,
    RetrofitError,
    UNKNOWN,
    canonical_measure_order,
    is_unknown,
    resolve_hvac_subtype,
)
from .econ import (
    MEASURE_CATALOG,
    RateTable,
    compute_outcome,
    default_rate_table,
    discounted_payback,
    measure_cost,
)
from .ranking import (
    GroundTruth,
    GroundTruthStore,
    Objective,
    build_ground_truth,
    rank_co2,
    rank_dpy,
)

__all__ = [
    "BuildingGeometry",
    "BuildingRecord",
    "FuelType",
    "FuelVector",
    "GroundTruth",
    "GroundTruthStore",
    "HvacSubtype",
    "MEASURE_CATALOG",
    "MeasureId",
    "Objective",
    "OutcomeRecord",
    "RateTable",
    "RetrofitError",
    "UNKNOWN",
    "build_ground_truth",
    "canonical_measure_order",
    "compute_outcome",
    "default_rate_table",
    "discounted_payback",
    "is_unknown",
    "measure_cost",
    "rank_co2",
    "rank_dpy",
    "resolve_hvac_subtype",
    "__version__",
]
