"""Wire format for assistant answers: rendering, precision, strict parsing.

The assistant payload is a JSON object with one key per objective, each
holding a ranked list of at most three entries. Every entry carries the
rank, the measure name, and the five outcome numbers. Declared precision:
one decimal for kg, kWh, and USD-per-year figures; whole numbers for the
retrofit cost and the payback year; null for no payback. The evaluator
compares predictions against ground truth quantized through the same
helpers, so a model that reproduces the rendered numbers scores an exact
zero error.

Parsing is strict schema validation with no repair: unknown keys, extra
entries, unknown measure names, duplicated measures, misnumbered ranks,
and non-finite numbers all invalidate the output. The first violation, in
document order, becomes the invalid reason.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from .core import MeasureId, OutcomeRecord, RetrofitError, canonical_measure_order
from .ranking import TOP_K, GroundTruth, Objective
from .econ import round_half_up


class EmptyGroundTruth(RetrofitError):
    """Ground truth had no ranked options under any objective."""


# Entry keys, in rendering order.
ENTRY_KEYS = (
    "rank",
    "measure",
    "co2_reduction_kg",
    "net_site_energy_reduction_kwh",
    "energy_cost_saving_usd",
    "retrofit_cost_usd",
    "dpy",
)

ONE_DECIMAL_FIELDS = (
    "co2_reduction_kg",
    "net_site_energy_reduction_kwh",
    "energy_cost_saving_usd",
)

NUMERIC_FIELDS = ONE_DECIMAL_FIELDS + ("retrofit_cost_usd", "dpy")

_MEASURE_NAMES = {m.value for m in canonical_measure_order()}

# Invalid reasons, most specific first violation wins.
REASON_NOT_JSON = "not_json"
REASON_NOT_OBJECT = "not_object"
REASON_MISSING_OBJECTIVE = "missing_objective"
REASON_UNEXPECTED_KEY = "unexpected_key"
REASON_OBJECTIVE_NOT_LIST = "objective_not_list"
REASON_TOO_MANY_ENTRIES = "too_many_entries"
REASON_ENTRY_NOT_OBJECT = "entry_not_object"
REASON_MISSING_FIELD = "missing_field"
REASON_UNEXPECTED_FIELD = "unexpected_field"
REASON_BAD_RANK = "bad_rank"
REASON_UNKNOWN_MEASURE = "unknown_measure"
REASON_DUPLICATE_MEASURE = "duplicate_measure"
REASON_NON_NUMERIC = "non_numeric_value"


def quantize_value(field: str, value: float | int | None) -> float | int | None:
    """Bring one outcome figure to the declared payload precision."""
    if field in ONE_DECIMAL_FIELDS:
        return round(float(value), 1)
    if field == "retrofit_cost_usd":
        return round_half_up(float(value))
    if field == "dpy":
        return None if value is None else int(value)
    raise KeyError(field)


def quantize_outcome(outcome: OutcomeRecord) -> dict[str, float | int | None]:
    """Payload-precision view of an outcome's five reported numbers."""
    return {
        "co2_reduction_kg": quantize_value("co2_reduction_kg", outcome.co2_reduction_kg),
        "net_site_energy_reduction_kwh": quantize_value(
            "net_site_energy_reduction_kwh", outcome.net_site_energy_reduction_kwh
        ),
        "energy_cost_saving_usd": quantize_value(
            "energy_cost_saving_usd", outcome.energy_cost_saving_usd
        ),
        "retrofit_cost_usd": quantize_value("retrofit_cost_usd", outcome.retrofit_cost_usd),
        "dpy": quantize_value("dpy", outcome.dpy),
    }


def render_payload(truth: GroundTruth) -> dict:
    """Ground truth as the payload object, numbers at declared precision."""
    if all(not ranked for ranked in truth.rankings.values()):
        raise EmptyGroundTruth(truth.building_id)
    payload: dict[str, list[dict]] = {}
    for objective in Objective:
        entries = []
        for position, outcome in enumerate(truth.rankings.get(objective, []), start=1):
            entry: dict[str, Any] = {"rank": position, "measure": outcome.measure.value}
            entry.update(quantize_outcome(outcome))
            entries.append(entry)
        payload[objective.value] = entries
    return payload


def render_assistant(truth: GroundTruth) -> str:
    """Assistant message text: the payload serialized as indented JSON."""
    return json.dumps(render_payload(truth), indent=2)


@dataclass(frozen=True)
class ParsedEntry:
    """One validated ranking entry from a model answer.

    Numbers keep whatever precision the model emitted; dpy of None means
    the model reported no payback.
    """

    measure: MeasureId
    co2_reduction_kg: float
    net_site_energy_reduction_kwh: float
    energy_cost_saving_usd: float
    retrofit_cost_usd: float
    dpy: float | None

    def value(self, field: str) -> float | None:
        return getattr(self, field)


@dataclass
class ParsedOutput:
    """Outcome of strictly parsing one model answer."""

    valid: bool
    reason: str | None = None
    rankings: dict[Objective, list[ParsedEntry]] | None = None

    @classmethod
    def invalid(cls, reason: str) -> "ParsedOutput":
        return cls(valid=False, reason=reason)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def parse_payload(text: str) -> ParsedOutput:
    """Validate a model answer against the payload schema, with no repair."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, TypeError):
        return ParsedOutput.invalid(REASON_NOT_JSON)
    if not isinstance(doc, dict):
        return ParsedOutput.invalid(REASON_NOT_OBJECT)
    expected_keys = [objective.value for objective in Objective]
    for key in expected_keys:
        if key not in doc:
            return ParsedOutput.invalid(REASON_MISSING_OBJECTIVE)
    for key in doc:
        if key not in expected_keys:
            return ParsedOutput.invalid(REASON_UNEXPECTED_KEY)
    rankings: dict[Objective, list[ParsedEntry]] = {}
    for objective in Objective:
        block = doc[objective.value]
        if not isinstance(block, list):
            return ParsedOutput.invalid(REASON_OBJECTIVE_NOT_LIST)
        if len(block) > TOP_K:
            return ParsedOutput.invalid(REASON_TOO_MANY_ENTRIES)
        seen: set[str] = set()
        entries: list[ParsedEntry] = []
        for position, raw in enumerate(block, start=1):
            if not isinstance(raw, dict):
                return ParsedOutput.invalid(REASON_ENTRY_NOT_OBJECT)
            for key in ENTRY_KEYS:
                if key not in raw:
                    return ParsedOutput.invalid(REASON_MISSING_FIELD)
            for key in raw:
                if key not in ENTRY_KEYS:
                    return ParsedOutput.invalid(REASON_UNEXPECTED_FIELD)
            rank = raw["rank"]
            if not isinstance(rank, int) or isinstance(rank, bool) or rank != position:
                return ParsedOutput.invalid(REASON_BAD_RANK)
            measure_name = raw["measure"]
            if not isinstance(measure_name, str) or measure_name not in _MEASURE_NAMES:
                return ParsedOutput.invalid(REASON_UNKNOWN_MEASURE)
            if measure_name in seen:
                return ParsedOutput.invalid(REASON_DUPLICATE_MEASURE)
            seen.add(measure_name)
            for key in NUMERIC_FIELDS:
                value = raw[key]
                if key == "dpy" and value is None:
                    continue
                if not _is_number(value):
                    return ParsedOutput.invalid(REASON_NON_NUMERIC)
            entries.append(
                ParsedEntry(
                    measure=MeasureId(measure_name),
                    co2_reduction_kg=float(raw["co2_reduction_kg"]),
                    net_site_energy_reduction_kwh=float(
                        raw["net_site_energy_reduction_kwh"]
                    ),
                    energy_cost_saving_usd=float(raw["energy_cost_saving_usd"]),
                    retrofit_cost_usd=float(raw["retrofit_cost_usd"]),
                    dpy=None if raw["dpy"] is None else float(raw["dpy"]),
                )
            )
        rankings[objective] = entries
    return ParsedOutput(valid=True, rankings=rankings)
