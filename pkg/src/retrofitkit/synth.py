"""Synthetic building stock and a fast surrogate for annual simulation.

gen_buildings draws descriptor records and geometry with plausible
correlations (state fixes climate region, climate and vintage scale the
energy intensity, heating fuel follows the HVAC type). surrogate_simulate
turns a record into per-fuel annual consumption for the baseline and for
each retrofit measure by applying configured per-fuel multipliers; PV is
the exception and credits generation against electricity and net site
energy instead.

The surrogate stands in for a full building-physics engine so that the
downstream pipeline (ranking, corpus, evaluation) can run at desk scale.
ingest_results accepts externally simulated annual results in CSV form for
the same pipeline.

All randomness is derived from (seed, building_id, purpose) through
SHA-256, so datasets are reproducible byte-for-byte across runs and
platforms and are insensitive to iteration order.
"""

from __future__ import annotations

import csv
import hashlib
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .core import (
    ATTIC_TYPES,
    BUILDING_TYPES,
    FOUNDATION_TYPES,
    HVAC_TYPES,
    STATE_NAMES,
    VINTAGE_DECADES,
    WALL_CONSTRUCTIONS,
    WINDOW_TYPES,
    BuildingGeometry,
    BuildingRecord,
    FuelType,
    FuelVector,
    MeasureId,
    RetrofitError,
)
from . import econ


class ParseError(RetrofitError):
    """Malformed simulation-results CSV; message carries row and column."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
        self.row = row
        self.column = column


class MissingBaseline(RetrofitError):
    """A building has retrofit rows but no baseline row."""


def _rng(*parts: object) -> random.Random:
    key = "|".join(str(p) for p in parts).encode()
    return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))


STATE_CLIMATE = {
    "AZ": "hot_dry",
    "CA": "hot_dry",
    "CO": "cold",
    "FL": "hot_humid",
    "GA": "mixed_humid",
    "IL": "cold",
    "MA": "cold",
    "MI": "cold",
    "MN": "very_cold",
    "NC": "mixed_humid",
    "NY": "cold",
    "OH": "cold",
    "OR": "marine",
    "PA": "cold",
    "TX": "hot_humid",
    "WA": "marine",
}

CLIMATE_INTENSITY_FACTOR = {
    "very_cold": 1.25,
    "cold": 1.15,
    "mixed_humid": 1.00,
    "hot_humid": 1.00,
    "hot_dry": 0.95,
    "marine": 0.90,
}

VINTAGE_INTENSITY_FACTOR = {
    "pre_1950": 1.30,
    "1950s": 1.22,
    "1960s": 1.16,
    "1970s": 1.10,
    "1980s": 1.04,
    "1990s": 0.98,
    "2000s": 0.92,
    "2010s": 0.86,
}

# Annual end-use shares before renormalization. Cooling drops out when the
# home has no air conditioning.
END_USE_SHARES = {
    "heating": 0.38,
    "cooling": 0.12,
    "water_heating": 0.16,
    "lighting": 0.07,
    "appliances": 0.12,
    "dryer": 0.05,
    "other": 0.10,
}


def default_fuel_multipliers() -> dict[MeasureId, dict[FuelType, float]]:
    """Per-measure consumption multipliers by fuel; 1.0 leaves a fuel alone.

    Configuration defaults, not physics: heating-dominated fuels respond
    most to envelope work, electricity responds to equipment swaps. PV has
    no multiplier effect; its generation credit is handled separately.
    """
    e, g, p, o = FuelType
    return {
        MeasureId.WALL_INSULATION: {e: 0.94, g: 0.86, p: 0.86, o: 0.86},
        MeasureId.ROOF_CEILING_INSULATION: {e: 0.96, g: 0.91, p: 0.91, o: 0.91},
        MeasureId.WINDOW_REPLACEMENT: {e: 0.93, g: 0.90, p: 0.90, o: 0.90},
        MeasureId.AIR_SEALING: {e: 0.94, g: 0.88, p: 0.88, o: 0.88},
        MeasureId.HVAC_UPGRADE: {e: 0.82, g: 0.90, p: 0.90, o: 0.90},
        MeasureId.PV_INSTALLATION: {e: 1.0, g: 1.0, p: 1.0, o: 1.0},
        MeasureId.APPLIANCE_REPLACEMENT: {e: 0.95, g: 0.99, p: 0.99, o: 1.0},
        MeasureId.LIGHTING_REPLACEMENT: {e: 0.96, g: 1.0, p: 1.0, o: 1.0},
        MeasureId.WATER_HEATER_REPLACEMENT: {e: 0.90, g: 0.93, p: 0.93, o: 0.93},
    }


@dataclass
class SurrogateParams:
    """Tuning knobs for the surrogate; all values are configuration.

    fuel_multipliers must lie in [0, 1.5]. noise_amplitude is the relative
    half-width of the seeded jitter applied to a building's base intensity.
    existing_pv_fraction is how much of the full PV potential an already
    installed array covers.
    """

    fuel_multipliers: dict[MeasureId, dict[FuelType, float]] = field(
        default_factory=default_fuel_multipliers
    )
    base_intensity_kwh_m2: float = 150.0
    noise_amplitude: float = 0.10
    pv_capacity_factor: float = 0.15
    existing_pv_fraction: float = 0.25
    seed: int = 0

    def validate(self) -> None:
        if self.base_intensity_kwh_m2 <= 0:
            raise ValueError("base_intensity_kwh_m2 must be positive")
        if not 0 <= self.noise_amplitude < 1:
            raise ValueError("noise_amplitude must lie in [0, 1)")
        if not 0 < self.pv_capacity_factor <= 1:
            raise ValueError("pv_capacity_factor must lie in (0, 1]")
        if not 0 <= self.existing_pv_fraction <= 1:
            raise ValueError("existing_pv_fraction must lie in [0, 1]")
        for measure in MeasureId:
            table = self.fuel_multipliers.get(measure)
            if table is None:
                raise ValueError(f"fuel_multipliers missing {measure.value}")
            for fuel in FuelType:
                m = table.get(fuel)
                if m is None or not 0 <= m <= 1.5:
                    raise ValueError(
                        f"multiplier for {measure.value}/{fuel.value} must lie in [0, 1.5]"
                    )


def _round1(x: float) -> float:
    return round(x, 1)


def gen_buildings(
    n: int, seed: int = 0
) -> list[tuple[BuildingRecord, BuildingGeometry]]:
    """Draw n fully described buildings with correlated descriptors."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[tuple[BuildingRecord, BuildingGeometry]] = []
    states = sorted(STATE_NAMES)
    for i in range(n):
        building_id = f"bldg-{i:05d}"
        rng = _rng(seed, building_id, "record")
        state = rng.choice(states)
        building_type = rng.choices(BUILDING_TYPES, weights=[55, 15, 10, 20])[0]
        stories = 1 if building_type == "mobile_home" else rng.choice((1, 1, 2, 2, 3))
        if building_type == "mobile_home":
            cfa = _round1(rng.uniform(55, 110))
        elif building_type == "multi_family":
            cfa = _round1(rng.uniform(55, 160))
        else:
            cfa = _round1(rng.uniform(80, 350))
        hvac = rng.choices(HVAC_TYPES, weights=[18, 10, 8, 8, 8, 30, 12, 6])[0]
        if hvac in ("heat_pump", "mini_split", "electric_furnace", "electric_baseboard"):
            heating_fuel: FuelType | None = FuelType.ELECTRICITY
        elif hvac == "furnace":
            heating_fuel = rng.choices(
                [FuelType.NATURAL_GAS, FuelType.PROPANE, FuelType.FUEL_OIL],
                weights=[70, 15, 15],
            )[0]
        elif hvac == "boiler":
            heating_fuel = rng.choices(
                [FuelType.NATURAL_GAS, FuelType.FUEL_OIL], weights=[60, 40]
            )[0]
        else:  # central_ac_only, shared_cooling
            heating_fuel = None
        cooling_present = (
            True
            if hvac in ("heat_pump", "mini_split", "central_ac_only", "shared_cooling")
            else rng.random() < 0.7
        )
        heating_setpoint = rng.choice([18.0, 18.5, 19.0, 19.5, 20.0, 20.5, 21.0, 21.5, 22.0])
        cooling_setpoint = rng.choice([23.0, 23.5, 24.0, 24.5, 25.0, 25.5, 26.0, 26.5, 27.0])
        record = BuildingRecord(
            building_id=building_id,
            location_state=state,
            climate_region=STATE_CLIMATE[state],
            vintage_decade=rng.choice(VINTAGE_DECADES),
            building_type=building_type,
            conditioned_floor_area=cfa,
            num_stories=stories,
            num_bedrooms=rng.randint(1, 5),
            num_occupants=rng.randint(1, 6),
            foundation_type=rng.choice(FOUNDATION_TYPES),
            attic_type=rng.choice(ATTIC_TYPES),
            wall_construction=rng.choice(WALL_CONSTRUCTIONS),
            window_type=rng.choice(WINDOW_TYPES),
            garage_present=rng.random() < 0.55,
            hvac_type=hvac,
            heating_fuel=heating_fuel,
            cooling_present=cooling_present,
            heating_setpoint=heating_setpoint,
            cooling_setpoint=cooling_setpoint,
            water_heater_fuel=rng.choices(
                [FuelType.ELECTRICITY, FuelType.NATURAL_GAS, FuelType.PROPANE, FuelType.FUEL_OIL],
                weights=[45, 40, 8, 7],
            )[0],
            dryer_fuel=rng.choices(
                [FuelType.ELECTRICITY, FuelType.NATURAL_GAS, FuelType.PROPANE],
                weights=[70, 25, 5],
            )[0],
            existing_pv_present=rng.random() < 0.08,
        )
        record.validate()
        out.append((record, derive_geometry(record, seed)))
    return out


def derive_geometry(record: BuildingRecord, seed: int = 0) -> BuildingGeometry:
    """Surfaces and capacities from footprint, story count, and climate."""
    rng = _rng(seed, record.building_id, "geometry")
    cfa = float(record.conditioned_floor_area)
    stories = int(record.num_stories)
    footprint = cfa / stories
    side = math.sqrt(footprint)
    shape = rng.uniform(1.0, 1.3)  # plan aspect bump over a square footprint
    wall_area = 4.0 * side * shape * 2.6 * stories
    roof_area = footprint * rng.uniform(1.05, 1.30)
    window_area = wall_area * rng.uniform(0.10, 0.18)
    climate = CLIMATE_INTENSITY_FACTOR[record.climate_region]
    return BuildingGeometry(
        exterior_wall_area_m2=round(wall_area, 2),
        roof_area_m2=round(roof_area, 2),
        total_window_area_m2=round(window_area, 2),
        conditioned_floor_area_m2=cfa,
        cooling_capacity_kw=round(cfa * rng.uniform(0.035, 0.060), 2),
        heating_capacity_kw=round(cfa * rng.uniform(0.045, 0.075) * climate, 2),
    )


def _end_use_fuels(record: BuildingRecord, total_kwh: float) -> dict[FuelType, float]:
    """Split total consumption across fuels through the end-use shares."""
    shares = dict(END_USE_SHARES)
    if record.cooling_present is False:
        shares["cooling"] = 0.0
    norm = sum(shares.values())
    comps = {fuel: 0.0 for fuel in FuelType}
    heating_fuel = record.heating_fuel or FuelType.ELECTRICITY
    water_fuel = record.water_heater_fuel
    dryer_fuel = record.dryer_fuel
    for use, share in shares.items():
        energy = total_kwh * share / norm
        if use == "heating":
            comps[heating_fuel] += energy
        elif use == "water_heating":
            comps[water_fuel] += energy
        elif use == "dryer":
            comps[dryer_fuel] += energy
        else:  # cooling, lighting, appliances, other
            comps[FuelType.ELECTRICITY] += energy
    return comps


def surrogate_simulate(
    record: BuildingRecord,
    geom: BuildingGeometry,
    params: SurrogateParams | None = None,
) -> tuple[FuelVector, dict[MeasureId, FuelVector]]:
    """Annual baseline and per-measure fuel vectors for one building.

    Requires a fully known record (simulation precedes any masking).
    """
    params = params or SurrogateParams()
    params.validate()
    rng = _rng(params.seed, record.building_id, "intensity")
    intensity = (
        params.base_intensity_kwh_m2
        * CLIMATE_INTENSITY_FACTOR[record.climate_region]
        * VINTAGE_INTENSITY_FACTOR[record.vintage_decade]
        * (1.0 + params.noise_amplitude * rng.uniform(-1.0, 1.0))
    )
    total = intensity * float(record.conditioned_floor_area)
    gross = _end_use_fuels(record, total)
    potential_gen = econ.pv_annual_generation_kwh(geom, params.pv_capacity_factor)
    existing_gen = (
        params.existing_pv_fraction * potential_gen
        if record.existing_pv_present is True
        else 0.0
    )
    baseline = FuelVector.from_components(gross, pv_generation_kwh=existing_gen)
    by_measure: dict[MeasureId, FuelVector] = {}
    for measure in MeasureId:
        mult = params.fuel_multipliers[measure]
        comps = {fuel: gross[fuel] * mult[fuel] for fuel in FuelType}
        gen = existing_gen
        if measure is MeasureId.PV_INSTALLATION:
            gen += potential_gen
        by_measure[measure] = FuelVector.from_components(comps, pv_generation_kwh=gen)
    return baseline, by_measure


CSV_COLUMNS = (
    "building_id",
    "scenario",
    "electricity_kwh",
    "natural_gas_kwh",
    "propane_kwh",
    "fuel_oil_kwh",
    "net_site_energy_kwh",
)

BASELINE_SCENARIO = "baseline"


def export_results(
    path: str | Path,
    results: dict[str, tuple[FuelVector, dict[MeasureId, FuelVector]]],
) -> None:
    """Write annual results to CSV, one row per (building, scenario)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for bid in sorted(results):
            baseline, by_measure = results[bid]
            rows = [(BASELINE_SCENARIO, baseline)]
            rows += [(m.value, by_measure[m]) for m in sorted(by_measure)]
            for scenario, vec in rows:
                writer.writerow(
                    [
                        bid,
                        scenario,
                        repr(vec.electricity_kwh),
                        repr(vec.natural_gas_kwh),
                        repr(vec.propane_kwh),
                        repr(vec.fuel_oil_kwh),
                        repr(vec.net_site_energy_kwh),
                    ]
                )


def ingest_results(
    path: str | Path,
) -> dict[str, tuple[FuelVector, dict[MeasureId, FuelVector]]]:
    """Read annual simulation results from CSV.

    Raises ParseError for schema violations (bad header, unknown scenario,
    non-numeric or negative energy, duplicate rows) with the offending row
    and column, and MissingBaseline when retrofit rows arrive without a
    baseline row for the same building.
    """
    valid_scenarios = {BASELINE_SCENARIO} | {m.value for m in MeasureId}
    baselines: dict[str, FuelVector] = {}
    measures: dict[str, dict[MeasureId, FuelVector]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty results file") from None
        if tuple(header) != CSV_COLUMNS:
            raise ParseError(f"bad header {header!r}", row=1)
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_COLUMNS):
                raise ParseError(f"expected {len(CSV_COLUMNS)} cells", row=row_no)
            data = dict(zip(CSV_COLUMNS, row))
            bid = data["building_id"]
            if not bid:
                raise ParseError("empty building_id", row=row_no, column="building_id")
            scenario = data["scenario"]
            if scenario not in valid_scenarios:
                raise ParseError(
                    f"unknown scenario {scenario!r}", row=row_no, column="scenario"
                )
            values: dict[str, float] = {}
            for col in CSV_COLUMNS[2:]:
                try:
                    values[col] = float(data[col])
                except ValueError:
                    raise ParseError(
                        f"non-numeric value {data[col]!r}", row=row_no, column=col
                    ) from None
                if col != "net_site_energy_kwh" and values[col] < 0:
                    raise ParseError(
                        f"negative energy {data[col]!r}", row=row_no, column=col
                    )
            vec = FuelVector(
                electricity_kwh=values["electricity_kwh"],
                natural_gas_kwh=values["natural_gas_kwh"],
                propane_kwh=values["propane_kwh"],
                fuel_oil_kwh=values["fuel_oil_kwh"],
                net_site_energy_kwh=values["net_site_energy_kwh"],
            )
            try:
                vec.validate()
            except ValueError as exc:
                raise ParseError(str(exc), row=row_no) from None
            if scenario == BASELINE_SCENARIO:
                if bid in baselines:
                    raise ParseError(f"duplicate baseline for {bid}", row=row_no)
                baselines[bid] = vec
            else:
                measure = MeasureId(scenario)
                bucket = measures.setdefault(bid, {})
                if measure in bucket:
                    raise ParseError(
                        f"duplicate scenario {scenario} for {bid}", row=row_no
                    )
                bucket[measure] = vec
    missing = sorted(set(measures) - set(baselines))
    if missing:
        raise MissingBaseline(", ".join(missing))
    return {
        bid: (baselines[bid], measures.get(bid, {})) for bid in sorted(baselines)
    }
