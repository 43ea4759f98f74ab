"""Homeowner advisor: free-text query -> nearest prototype -> ranked plan.

The advisor turns a plain-language dwelling description into the partial
descriptor record the rule-based extractor can recover, finds the most
similar stored prototype under a mixed-type distance, and answers with
that prototype's ranked retrofit options in the same wire format the
corpus uses. Unreported descriptors carry zero distance, so a vaguer
query can only move candidates closer, never further away.

Economic overrides (discount rate, utility rates) recompute cost savings
and payback from the stored per-measure fuel vectors and re-rank, so
what-if answers stay exactly consistent with the engine instead of
scaling stored numbers.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .core import (
    CORE_FIELDS,
    NUMERIC_FIELDS,
    RECORD_FIELDS,
    BuildingRecord,
    FuelType,
    RetrofitError,
    is_unknown,
)
from .corpus.extract import extract_fields
from .econ import (
    MEASURE_CATALOG,
    RateTable,
    annual_energy_cost_usd,
    default_rate_table,
    discounted_payback,
)
from .ranking import (
    GroundTruth,
    GroundTruthStore,
    Objective,
    StoreEntry,
    rank_co2,
    rank_dpy,
)
from .payload import render_payload

from pydantic import BaseModel

CORE_FIELD_WEIGHT = 2.0
OTHER_FIELD_WEIGHT = 1.0

DISTANCE_TIE_EPS = 1e-12


class RecommendRequest(BaseModel):
    """Body of the recommendation endpoints."""

    description: str
    overrides: dict | None = None


class NoCoreFields(RetrofitError):
    """The description reveals none of the core dwelling descriptors."""


class EmptyStore(RetrofitError):
    """Prototype matching needs at least one stored building."""


def parse_description(text: str) -> BuildingRecord:
    """Recover a partial descriptor record from homeowner prose."""
    found = extract_fields(text)
    if not any(name in found for name in CORE_FIELDS):
        raise NoCoreFields(
            "description must mention at least one of: building type, "
            "conditioned floor area, construction vintage"
        )
    serialized: dict = {"building_id": "query"}
    for name in RECORD_FIELDS:
        if name not in found:
            serialized[name] = None
        elif name == "heating_fuel" and found[name] is None:
            serialized[name] = "none"
        else:
            serialized[name] = found[name]
    return BuildingRecord.from_dict(serialized)


def numeric_ranges(store: GroundTruthStore) -> dict[str, float]:
    """Observed spread of each numeric descriptor across the store."""
    ranges: dict[str, float] = {}
    for name in NUMERIC_FIELDS:
        values = [
            float(getattr(store.get(bid).record, name))
            for bid in store.building_ids()
            if not is_unknown(getattr(store.get(bid).record, name))
        ]
        ranges[name] = (max(values) - min(values)) if values else 0.0
    return ranges


def record_distance(
    query: BuildingRecord, candidate: BuildingRecord, ranges: dict[str, float]
) -> float:
    """Mixed-type dissimilarity; unknown on either side contributes zero.

    Categorical mismatches cost the field weight; numeric gaps cost the
    weight scaled by the gap over the store-wide spread, capped at 1.
    """
    total = 0.0
    for name in RECORD_FIELDS:
        query_value = getattr(query, name)
        candidate_value = getattr(candidate, name)
        if is_unknown(query_value) or is_unknown(candidate_value):
            continue
        weight = CORE_FIELD_WEIGHT if name in CORE_FIELDS else OTHER_FIELD_WEIGHT
        if name in NUMERIC_FIELDS:
            gap = abs(float(query_value) - float(candidate_value))
            spread = ranges.get(name, 0.0)
            if spread > 0:
                total += weight * min(1.0, gap / spread)
            elif gap > 0:
                total += weight
        else:
            if query_value != candidate_value:
                total += weight
    return total


def nearest_prototypes(
    query: BuildingRecord, store: GroundTruthStore, k: int = 1
) -> list[tuple[str, float]]:
    """The k closest stored buildings as (building_id, distance).

    Equal distances order by building id, which also makes the top match
    deterministic under ties.
    """
    if len(store) == 0:
        raise EmptyStore("ground-truth store holds no buildings")
    ranges = numeric_ranges(store)
    scored = [
        (bid, record_distance(query, store.get(bid).record, ranges))
        for bid in store.building_ids()
    ]
    scored.sort(key=lambda item: (item[1], item[0]))
    return scored[: max(1, k)]


@dataclass(frozen=True)
class EconOverrides:
    """What-if knobs applied on top of the default economic assumptions."""

    discount_rate: float | None = None
    utility_rates: dict[FuelType, float] | None = None

    def any_set(self) -> bool:
        return self.discount_rate is not None or bool(self.utility_rates)

    def apply(self, base: RateTable) -> RateTable:
        rates = dict(base.utility_rates)
        if self.utility_rates:
            rates.update(self.utility_rates)
        table = RateTable(
            emission_factors=dict(base.emission_factors),
            utility_rates=rates,
            discount_rate=(
                base.discount_rate
                if self.discount_rate is None
                else self.discount_rate
            ),
        )
        table.validate()
        return table


def _overrides_from_dict(data: dict | None) -> EconOverrides:
    if not data:
        return EconOverrides()
    allowed = {"discount_rate", "utility_rates"}
    extra = set(data) - allowed
    if extra:
        raise ValueError(f"unknown override keys: {sorted(extra)}")
    utility = None
    if data.get("utility_rates"):
        utility = {}
        for fuel_name, rate in data["utility_rates"].items():
            fuel = FuelType(fuel_name)
            rate = float(rate)
            if rate < 0:
                raise ValueError(f"negative utility rate for {fuel_name}")
            utility[fuel] = rate
    discount = data.get("discount_rate")
    return EconOverrides(
        discount_rate=None if discount is None else float(discount),
        utility_rates=utility,
    )


def rerank_with_overrides(entry: StoreEntry, overrides: EconOverrides) -> GroundTruth:
    """Recompute savings and payback under new rates, then re-rank.

    Emission-side numbers are untouched; installed costs do not depend on
    rates either, so only the cost saving and payback columns move.
    """
    rates = overrides.apply(default_rate_table())
    baseline_cost = annual_energy_cost_usd(entry.baseline_fuels, rates)
    adjusted = []
    for outcome in entry.outcomes:
        measure_cost_annual = annual_energy_cost_usd(
            entry.measure_fuels[outcome.measure], rates
        )
        saving = baseline_cost - measure_cost_annual
        dpy = discounted_payback(
            outcome.retrofit_cost_usd, saving, rates.discount_rate
        )
        adjusted.append(
            dataclasses.replace(outcome, energy_cost_saving_usd=saving, dpy=dpy)
        )
    return GroundTruth(
        building_id=entry.record.building_id,
        rankings={
            Objective.MAX_CO2_REDUCTION: rank_co2(adjusted),
            Objective.MIN_DPY: rank_dpy(adjusted),
        },
    )


def recommend(
    description: str,
    store: GroundTruthStore,
    *,
    overrides: EconOverrides | None = None,
) -> dict:
    """Full advisor pass: extract, match, (optionally re-price), rank."""
    query = parse_description(description)
    if len(store) == 0:
        raise EmptyStore("ground-truth store holds no buildings")
    ranges = numeric_ranges(store)
    scored = [
        (bid, record_distance(query, store.get(bid).record, ranges))
        for bid in store.building_ids()
    ]
    best = min(distance for _, distance in scored)
    tied = sorted(
        bid for bid, distance in scored if distance - best <= DISTANCE_TIE_EPS
    )
    chosen = tied[0]
    entry = store.get(chosen)

    overrides = overrides or EconOverrides()
    if overrides.any_set():
        truth = rerank_with_overrides(entry, overrides)
    else:
        truth = entry.truth

    serialized_query = query.to_dict()
    return {
        "query_fields": {
            name: serialized_query[name] for name in query.known_fields()
        },
        "prototype": {
            "building_id": chosen,
            "distance": best,
            "n_tied": len(tied),
        },
        "overrides_applied": overrides.any_set(),
        "recommendations": render_payload(truth),
    }


def measure_catalog_summary() -> list[dict]:
    """Catalog rows for the measures endpoint."""
    rows = []
    for spec in MEASURE_CATALOG:
        rows.append(
            {
                "measure": spec.measure.value,
                "hvac_subtype": (
                    None if spec.hvac_subtype is None else spec.hvac_subtype.value
                ),
                "label": spec.label,
                "modified_parameters": [
                    {"name": name, "value": value, "unit": unit}
                    for name, value, unit in spec.modified_parameters
                ],
                "cost_rule": spec.cost_rule,
            }
        )
    return rows


def create_app(store: GroundTruthStore, *, endpoint_config=None):
    """Build the advisor HTTP service around one loaded store."""
    from fastapi import FastAPI, HTTPException
    from fastapi.middleware.cors import CORSMiddleware

    app = FastAPI(title="retrofit advisor")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "buildings": len(store)}

    @app.get("/measures")
    def measures() -> dict:
        return {"measures": measure_catalog_summary()}

    @app.post("/recommend")
    def recommend_endpoint(request: RecommendRequest) -> dict:
        try:
            overrides = _overrides_from_dict(request.overrides)
            return recommend(request.description, store, overrides=overrides)
        except (NoCoreFields, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except EmptyStore as exc:
            raise HTTPException(status_code=503, detail=str(exc))

    @app.post("/recommend-llm")
    def recommend_llm(request: RecommendRequest) -> dict:
        if endpoint_config is None:
            raise HTTPException(
                status_code=503,
                detail="no generation endpoint is configured",
            )
        from .corpus import SYSTEM_MESSAGE, CorpusSample
        from .gateway import generate_batch
        from .payload import parse_payload

        sample = CorpusSample(
            building_id="query",
            template_id=0,
            split="live",
            masked_fields=(),
            messages=[
                {"role": "system", "content": SYSTEM_MESSAGE},
                {"role": "user", "content": request.description},
                {"role": "assistant", "content": ""},
            ],
        )
        record = generate_batch([sample], endpoint_config)[0]
        if record.error is not None:
            raise HTTPException(status_code=502, detail=record.error)
        parsed = parse_payload(record.response_text)
        return {
            "valid": parsed.valid,
            "reason": parsed.reason,
            "raw": record.response_text,
        }

    return app
