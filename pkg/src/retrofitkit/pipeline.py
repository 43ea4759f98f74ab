"""End-to-end assembly: buildings -> simulations -> outcomes -> store.

Composes the synthetic generator, the economics engine, and the ranking
rules into one pass that yields a saved ground-truth store. The same
assembly also accepts externally simulated results ingested from CSV, so
a higher-fidelity simulator can replace the surrogate without touching
anything downstream.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import (
    BuildingGeometry,
    BuildingRecord,
    FuelVector,
    MeasureId,
    RetrofitError,
    canonical_measure_order,
)
from .econ import RateTable, compute_outcome, default_rate_table
from .core import resolve_hvac_subtype
from .ranking import GroundTruthStore, build_ground_truth
from .synth import SurrogateParams, derive_geometry, gen_buildings, surrogate_simulate


class RecordMismatch(RetrofitError):
    """Simulation results and building records disagree on coverage."""


def compute_building_outcomes(
    record: BuildingRecord,
    geometry: BuildingGeometry,
    baseline: FuelVector,
    measure_fuels: dict[MeasureId, FuelVector],
    rates: RateTable,
) -> list:
    """Price and score every simulated measure for one building."""
    outcomes = []
    for measure in canonical_measure_order():
        if measure not in measure_fuels:
            continue
        subtype = (
            resolve_hvac_subtype(record)
            if measure is MeasureId.HVAC_UPGRADE
            else None
        )
        outcomes.append(
            compute_outcome(
                record.building_id,
                baseline,
                measure_fuels[measure],
                measure,
                geometry,
                rates,
                hvac_subtype=subtype,
            )
        )
    return outcomes


def build_store(
    pairs: list[tuple[BuildingRecord, BuildingGeometry]],
    simulations: dict[str, tuple[FuelVector, dict[MeasureId, FuelVector]]],
    rates: RateTable | None = None,
) -> GroundTruthStore:
    """Assemble a store from records plus per-building simulation output."""
    rates = rates or default_rate_table()
    record_ids = {record.building_id for record, _ in pairs}
    missing = sorted(record_ids - set(simulations))
    if missing:
        raise RecordMismatch(f"no simulation results for: {', '.join(missing)}")
    extra = sorted(set(simulations) - record_ids)
    if extra:
        raise RecordMismatch(f"results for unknown buildings: {', '.join(extra)}")
    items = []
    for record, geometry in pairs:
        baseline, measure_fuels = simulations[record.building_id]
        outcomes = compute_building_outcomes(
            record, geometry, baseline, measure_fuels, rates
        )
        items.append((record, geometry, baseline, measure_fuels, outcomes))
    return build_ground_truth(items)


def run_pipeline(
    n: int,
    *,
    seed: int = 0,
    rates: RateTable | None = None,
    params: SurrogateParams | None = None,
) -> GroundTruthStore:
    """Generate n buildings, simulate with the surrogate, build the store."""
    params = params or SurrogateParams(seed=seed)
    pairs = gen_buildings(n, seed=seed)
    simulations = {
        record.building_id: surrogate_simulate(record, geometry, params)
        for record, geometry in pairs
    }
    return build_store(pairs, simulations, rates)


def save_records(
    path: str | Path, pairs: list[tuple[BuildingRecord, BuildingGeometry]]
) -> None:
    """Records plus geometry as JSONL, for external simulation runs."""
    with open(path, "w", encoding="utf-8") as fh:
        for record, geometry in pairs:
            row = {"record": record.to_dict(), "geometry": geometry.to_dict()}
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def load_records(path: str | Path) -> list[tuple[BuildingRecord, BuildingGeometry]]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            pairs.append(
                (
                    BuildingRecord.from_dict(row["record"]),
                    BuildingGeometry.from_dict(row["geometry"]),
                )
            )
    return pairs
