"""Techno-economic engine: measure costing, emissions, bills, and payback.

The measure catalog pins, for each retrofit option, the physical parameter
changes it applies and the installed-cost rule. Cost rules are linear in a
single building surface, or unit-count based for packaged equipment, or
capacity-tiered for PV. Unit counts use round-half-up with a minimum of
one unit whenever the building has non-zero conditioned floor area.

Annual CO2 is the sum over fuels of consumption times emission factor;
the annual bill is the sum of consumption times utility rate. Discounted
payback is the first year n such that savings discounted at rate d,
accumulated over years 1..n, reach the investment.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from .core import (
    BuildingGeometry,
    FuelType,
    FuelVector,
    HvacSubtype,
    MeasureId,
    OutcomeRecord,
    RateTable,
    RetrofitError,
)

# Analysis horizon for payback search, years. Savings discounted at 3%
# are negligible beyond this, so anything unpaid by then never pays back.
DEFAULT_HORIZON_YEARS = 300


class MissingGeometry(RetrofitError):
    """A cost rule needed a geometry quantity that is absent."""


def round_half_up(x: float) -> int:
    """Round-half-up for non-negative quantities (2.5 -> 3).

    Python's built-in round() is half-even and would undercount equipment
    at exact half-unit capacities.
    """
    if x < 0:
        raise ValueError("round_half_up expects a non-negative value")
    return math.floor(x + 0.5)


def unit_count(capacity_kw: float, per_unit_kw: float, floor_area_m2: float) -> int:
    """Equipment units needed for a capacity, minimum one for occupied floor area."""
    n = round_half_up(capacity_kw / per_unit_kw)
    if floor_area_m2 > 0:
        n = max(1, n)
    return n


@dataclass(frozen=True)
class MeasureSpec:
    """One catalog row: what the measure changes and how its cost is formed.

    modified_parameters holds (name, value, unit) triples; values may be
    formula strings when the retrofit value derives from an existing
    component dimension. cost_params feed the rule identified by cost_rule.
    """

    measure: MeasureId
    hvac_subtype: HvacSubtype | None
    label: str
    modified_parameters: tuple[tuple[str, Any, str], ...]
    cost_rule: str
    cost_params: dict[str, float] = field(default_factory=dict)


# Appliance package: installed cost per replaced appliance, and the
# consumption multiplier each replacement applies to its end use.
APPLIANCE_COSTS_USD = {
    "refrigerator": 1159.02,
    "clothes_washer": 1350.76,
    "dishwasher": 1079.79,
    "clothes_dryer": 453.69,
}

APPLIANCE_MULTIPLIERS = {
    "refrigerator": 0.76,
    "clothes_washer": 0.333,
    "dishwasher": 0.76,
    "clothes_dryer_electric": 0.9467,
    "clothes_dryer_gas": 0.9456,
}

# PV sizing and pricing constants.
PV_ACTIVE_AREA_FRACTION = 0.22
PV_CELL_EFFICIENCY = 0.21
PV_INVERTER_EFFICIENCY = 0.95
PV_TIER_LOW_W = 880.0
PV_TIER_HIGH_W = 14080.0
PV_UNIT_COST_SMALL = 4.30
PV_UNIT_COST_LARGE = 3.10
PV_UNIT_COST_INTERCEPT = 4.37
PV_UNIT_COST_SLOPE = 0.000091

MEASURE_CATALOG: tuple[MeasureSpec, ...] = (
    MeasureSpec(
        measure=MeasureId.WALL_INSULATION,
        hvac_subtype=None,
        label="Wall insulation",
        modified_parameters=(
            ("wall_thermal_conductivity", "thickness / 6.34", "W/m-K"),
        ),
        cost_rule="per_wall_area",
        cost_params={"usd_per_m2": 150.4},
    ),
    MeasureSpec(
        measure=MeasureId.ROOF_CEILING_INSULATION,
        hvac_subtype=None,
        label="Roof and ceiling insulation",
        modified_parameters=(
            ("roof_thermal_conductivity", "thickness / 8.63", "W/m-K"),
        ),
        cost_rule="per_roof_area",
        cost_params={"usd_per_m2": 19.7},
    ),
    MeasureSpec(
        measure=MeasureId.WINDOW_REPLACEMENT,
        hvac_subtype=None,
        label="Window replacement",
        modified_parameters=(
            ("glazing_u_value", 1.476, "W/m2-K"),
            ("solar_heat_gain_coefficient", 0.22, ""),
        ),
        cost_rule="per_window_area",
        cost_params={"usd_per_m2": 974.4},
    ),
    MeasureSpec(
        measure=MeasureId.AIR_SEALING,
        hvac_subtype=None,
        label="Air sealing",
        modified_parameters=(
            ("effective_leakage_area_fraction_of_baseline", 0.08, ""),
        ),
        cost_rule="per_floor_area",
        cost_params={"usd_per_m2": 11.8},
    ),
    MeasureSpec(
        measure=MeasureId.HVAC_UPGRADE,
        hvac_subtype=HvacSubtype.DX_COOLING_PLUS_DX_HEATING,
        label="HVAC upgrade: DX cooling plus DX heating",
        modified_parameters=(
            ("cooling_cop", 8.32, ""),
            ("heating_cop", 3.2, ""),
        ),
        cost_rule="hvac_cooling_units",
        cost_params={"kw_per_unit": 7.03, "usd_per_unit": 1623.0, "fixed_usd": 634.41},
    ),
    MeasureSpec(
        measure=MeasureId.HVAC_UPGRADE,
        hvac_subtype=HvacSubtype.DX_COOLING_ONLY,
        label="HVAC upgrade: DX cooling only",
        modified_parameters=(("cooling_cop", 7.39, ""),),
        cost_rule="hvac_cooling_units",
        cost_params={"kw_per_unit": 7.03, "usd_per_unit": 1623.0, "fixed_usd": 634.41},
    ),
    MeasureSpec(
        measure=MeasureId.HVAC_UPGRADE,
        hvac_subtype=HvacSubtype.ELECTRIC_FURNACE_BASEBOARD,
        label="HVAC upgrade: electric furnace or baseboard",
        modified_parameters=(("heating_cop", 3.2, ""),),
        cost_rule="hvac_heating_units",
        cost_params={"kw_per_unit": 3.52, "usd_per_unit": 1699.0, "fixed_usd": 634.41},
    ),
    MeasureSpec(
        measure=MeasureId.HVAC_UPGRADE,
        hvac_subtype=HvacSubtype.NATURAL_GAS_FURNACE,
        label="HVAC upgrade: natural gas furnace",
        modified_parameters=(("burner_efficiency", 0.98, ""),),
        cost_rule="hvac_heating_and_cooling_units",
        cost_params={
            "heating_kw_per_unit": 3.52,
            "heating_usd_per_unit": 1699.0,
            "cooling_kw_per_unit": 25.11,
            "cooling_usd_per_unit": 3472.93,
            "fixed_usd": 2217.75,
        },
    ),
    MeasureSpec(
        measure=MeasureId.HVAC_UPGRADE,
        hvac_subtype=HvacSubtype.FUEL_FURNACE,
        label="HVAC upgrade: fuel furnace (oil, propane, other)",
        modified_parameters=(("burner_efficiency", 0.80, ""),),
        cost_rule="hvac_heating_and_cooling_units",
        cost_params={
            "heating_kw_per_unit": 3.52,
            "heating_usd_per_unit": 1699.0,
            "cooling_kw_per_unit": 39.32,
            "cooling_usd_per_unit": 3232.0,
            "fixed_usd": 2217.75,
        },
    ),
    MeasureSpec(
        measure=MeasureId.HVAC_UPGRADE,
        hvac_subtype=HvacSubtype.HOT_WATER_BOILER,
        label="HVAC upgrade: hot-water boiler (shared heating)",
        modified_parameters=(("boiler_efficiency", 0.95, ""),),
        cost_rule="hvac_heating_and_cooling_units",
        cost_params={
            "heating_kw_per_unit": 3.52,
            "heating_usd_per_unit": 1699.0,
            "cooling_kw_per_unit": 21.98,
            "cooling_usd_per_unit": 3472.93,
            "fixed_usd": 4399.77,
        },
    ),
    MeasureSpec(
        measure=MeasureId.HVAC_UPGRADE,
        hvac_subtype=HvacSubtype.SHARED_COOLING,
        label="HVAC upgrade: shared cooling system",
        modified_parameters=(("cooling_cop", 8.32, ""),),
        cost_rule="hvac_cooling_units",
        cost_params={"kw_per_unit": 7.03, "usd_per_unit": 3073.0, "fixed_usd": 2309.70},
    ),
    MeasureSpec(
        measure=MeasureId.PV_INSTALLATION,
        hvac_subtype=None,
        label="Photovoltaic installation",
        modified_parameters=(
            ("active_roof_area_fraction", PV_ACTIVE_AREA_FRACTION, ""),
            ("cell_efficiency", PV_CELL_EFFICIENCY, ""),
            ("inverter_efficiency", PV_INVERTER_EFFICIENCY, ""),
        ),
        cost_rule="pv_tiered",
    ),
    MeasureSpec(
        measure=MeasureId.APPLIANCE_REPLACEMENT,
        hvac_subtype=None,
        label="Appliance replacement",
        modified_parameters=(
            ("refrigerator_energy_multiplier", APPLIANCE_MULTIPLIERS["refrigerator"], ""),
            ("clothes_washer_energy_multiplier", APPLIANCE_MULTIPLIERS["clothes_washer"], ""),
            ("dishwasher_energy_multiplier", APPLIANCE_MULTIPLIERS["dishwasher"], ""),
            ("clothes_dryer_electric_energy_multiplier", APPLIANCE_MULTIPLIERS["clothes_dryer_electric"], ""),
            ("clothes_dryer_gas_energy_multiplier", APPLIANCE_MULTIPLIERS["clothes_dryer_gas"], ""),
        ),
        cost_rule="appliance_sum",
    ),
    MeasureSpec(
        measure=MeasureId.LIGHTING_REPLACEMENT,
        hvac_subtype=None,
        label="Lighting replacement",
        modified_parameters=(("lighting_power_multiplier", 0.47, ""),),
        cost_rule="per_fixture",
        cost_params={"m2_per_fixture": 6.97, "usd_per_fixture": 7.87},
    ),
    MeasureSpec(
        measure=MeasureId.WATER_HEATER_REPLACEMENT,
        hvac_subtype=None,
        label="Water heater replacement (heat pump water heater)",
        modified_parameters=(("water_heater_cop", 4.07, ""),),
        cost_rule="fixed",
        cost_params={"usd": 3707.0},
    ),
)


def catalog_spec(
    measure: MeasureId, hvac_subtype: HvacSubtype | None = None
) -> MeasureSpec:
    for spec in MEASURE_CATALOG:
        if spec.measure is measure and spec.hvac_subtype is hvac_subtype:
            return spec
    raise KeyError(f"no catalog entry for {measure.value}/{hvac_subtype}")


def _require(geom: BuildingGeometry, attr: str, measure: MeasureId) -> float:
    value = getattr(geom, attr)
    if value is None:
        raise MissingGeometry(f"{measure.value} needs {attr}")
    if value < 0:
        raise ValueError(f"{attr} must be >= 0")
    return value


def pv_sizing_and_cost(geom: BuildingGeometry) -> tuple[float, float]:
    """System capacity in W from roof area, and tier-priced installed cost.

    Capacity = roof area x active-area fraction x cell efficiency x 1000.
    Unit cost (USD/W) is flat below the low tier bound, linear in capacity
    on the closed interval between the bounds, and flat above.
    """
    roof = _require(geom, "roof_area_m2", MeasureId.PV_INSTALLATION)
    capacity_w = roof * PV_ACTIVE_AREA_FRACTION * PV_CELL_EFFICIENCY * 1000.0
    if capacity_w < PV_TIER_LOW_W:
        unit_cost = PV_UNIT_COST_SMALL
    elif capacity_w <= PV_TIER_HIGH_W:
        unit_cost = PV_UNIT_COST_INTERCEPT - PV_UNIT_COST_SLOPE * capacity_w
    else:
        unit_cost = PV_UNIT_COST_LARGE
    return capacity_w, capacity_w * unit_cost


def pv_annual_generation_kwh(geom: BuildingGeometry, capacity_factor: float) -> float:
    """AC energy from the sized array at a given capacity factor."""
    capacity_w, _ = pv_sizing_and_cost(geom)
    return capacity_w / 1000.0 * PV_INVERTER_EFFICIENCY * capacity_factor * 8760.0


def measure_cost(
    measure: MeasureId,
    geom: BuildingGeometry,
    *,
    hvac_subtype: HvacSubtype | None = None,
    appliances: Iterable[str] | None = None,
) -> float:
    """Installed cost in USD for one measure on one building.

    appliances limits the appliance-replacement package; default replaces
    all four. HVAC upgrades require the equipment subtype.
    """
    if measure is MeasureId.HVAC_UPGRADE:
        if hvac_subtype is None:
            raise ValueError("hvac_upgrade cost needs an hvac_subtype")
        spec = catalog_spec(measure, hvac_subtype)
    else:
        spec = catalog_spec(measure)
    params = spec.cost_params

    if spec.cost_rule == "per_wall_area":
        return params["usd_per_m2"] * _require(geom, "exterior_wall_area_m2", measure)
    if spec.cost_rule == "per_roof_area":
        return params["usd_per_m2"] * _require(geom, "roof_area_m2", measure)
    if spec.cost_rule == "per_window_area":
        return params["usd_per_m2"] * _require(geom, "total_window_area_m2", measure)
    if spec.cost_rule == "per_floor_area":
        return params["usd_per_m2"] * _require(geom, "conditioned_floor_area_m2", measure)
    if spec.cost_rule == "hvac_cooling_units":
        cfa = _require(geom, "conditioned_floor_area_m2", measure)
        capacity = _require(geom, "cooling_capacity_kw", measure)
        units = unit_count(capacity, params["kw_per_unit"], cfa)
        return units * params["usd_per_unit"] + params["fixed_usd"]
    if spec.cost_rule == "hvac_heating_units":
        cfa = _require(geom, "conditioned_floor_area_m2", measure)
        capacity = _require(geom, "heating_capacity_kw", measure)
        units = unit_count(capacity, params["kw_per_unit"], cfa)
        return units * params["usd_per_unit"] + params["fixed_usd"]
    if spec.cost_rule == "hvac_heating_and_cooling_units":
        cfa = _require(geom, "conditioned_floor_area_m2", measure)
        heating = _require(geom, "heating_capacity_kw", measure)
        cooling = _require(geom, "cooling_capacity_kw", measure)
        heating_units = unit_count(heating, params["heating_kw_per_unit"], cfa)
        cooling_units = unit_count(cooling, params["cooling_kw_per_unit"], cfa)
        return (
            heating_units * params["heating_usd_per_unit"]
            + cooling_units * params["cooling_usd_per_unit"]
            + params["fixed_usd"]
        )
    if spec.cost_rule == "pv_tiered":
        return pv_sizing_and_cost(geom)[1]
    if spec.cost_rule == "appliance_sum":
        chosen = tuple(APPLIANCE_COSTS_USD) if appliances is None else tuple(appliances)
        unknown = [a for a in chosen if a not in APPLIANCE_COSTS_USD]
        if unknown:
            raise ValueError(f"unknown appliances: {unknown}")
        return sum(APPLIANCE_COSTS_USD[a] for a in chosen)
    if spec.cost_rule == "per_fixture":
        cfa = _require(geom, "conditioned_floor_area_m2", measure)
        fixtures = unit_count(cfa, params["m2_per_fixture"], cfa)
        return fixtures * params["usd_per_fixture"]
    if spec.cost_rule == "fixed":
        return params["usd"]
    raise ValueError(f"unknown cost rule {spec.cost_rule!r}")


def annual_emissions_kg(fuels: FuelVector, rates: RateTable) -> float:
    """Annual CO2 in kg: sum over fuels of consumption times emission factor."""
    return sum(
        fuels.component(fuel) * rates.emission_factors[fuel] for fuel in FuelType
    )


def annual_energy_cost_usd(fuels: FuelVector, rates: RateTable) -> float:
    """Annual utility bill in USD: sum over fuels of consumption times rate."""
    return sum(fuels.component(fuel) * rates.utility_rates[fuel] for fuel in FuelType)


def discounted_payback(
    investment_usd: float,
    annual_saving_usd: float,
    discount_rate: float,
    horizon_years: int = DEFAULT_HORIZON_YEARS,
) -> int | None:
    """First year n >= 1 whose cumulative discounted savings reach the investment.

    Savings for year t are discounted by (1 + d) ** t. Returns None when the
    target is not reached within the horizon; with a zero investment the
    first year trivially qualifies for any non-negative saving.
    """
    if investment_usd < 0:
        raise ValueError("investment_usd must be >= 0")
    if not 0 <= discount_rate < 1:
        raise ValueError("discount_rate must lie in [0, 1)")
    if horizon_years < 1:
        raise ValueError("horizon_years must be >= 1")
    if annual_saving_usd <= 0 and investment_usd > 0:
        return None
    factor = 1.0 / (1.0 + discount_rate)
    term = annual_saving_usd
    cumulative = 0.0
    for year in range(1, horizon_years + 1):
        term *= factor
        cumulative += term
        if cumulative >= investment_usd:
            return year
    return None


def compute_outcome(
    building_id: str,
    baseline: FuelVector,
    retrofitted: FuelVector,
    measure: MeasureId,
    geom: BuildingGeometry,
    rates: RateTable,
    *,
    hvac_subtype: HvacSubtype | None = None,
    appliances: Iterable[str] | None = None,
    horizon_years: int = DEFAULT_HORIZON_YEARS,
) -> OutcomeRecord:
    """Assemble the full outcome record for one measure on one building."""
    cost = measure_cost(
        measure, geom, hvac_subtype=hvac_subtype, appliances=appliances
    )
    saving = annual_energy_cost_usd(baseline, rates) - annual_energy_cost_usd(
        retrofitted, rates
    )
    outcome = OutcomeRecord(
        building_id=building_id,
        measure=measure,
        hvac_subtype=hvac_subtype,
        co2_reduction_kg=annual_emissions_kg(baseline, rates)
        - annual_emissions_kg(retrofitted, rates),
        net_site_energy_reduction_kwh=baseline.net_site_energy_kwh
        - retrofitted.net_site_energy_kwh,
        energy_cost_saving_usd=saving,
        retrofit_cost_usd=cost,
        dpy=discounted_payback(cost, saving, rates.discount_rate, horizon_years),
    )
    outcome.validate()
    return outcome


# Placeholder rate defaults. These are plausible national-scale figures for
# smoke tests and demos only; analyses that matter should load a RateTable
# for the actual jurisdiction via load_rate_table.
DEFAULT_EMISSION_FACTORS = {
    FuelType.ELECTRICITY: 0.417,
    FuelType.NATURAL_GAS: 0.181,
    FuelType.PROPANE: 0.215,
    FuelType.FUEL_OIL: 0.249,
}

DEFAULT_UTILITY_RATES = {
    FuelType.ELECTRICITY: 0.15,
    FuelType.NATURAL_GAS: 0.035,
    FuelType.PROPANE: 0.085,
    FuelType.FUEL_OIL: 0.095,
}


def default_rate_table() -> RateTable:
    rates = RateTable(
        emission_factors=dict(DEFAULT_EMISSION_FACTORS),
        utility_rates=dict(DEFAULT_UTILITY_RATES),
        discount_rate=0.03,
    )
    rates.validate()
    return rates


def load_rate_table(path: str | Path) -> RateTable:
    """Read a RateTable from a JSON file.

    Expected shape::

        {"discount_rate": 0.03,
         "emission_factors_kg_per_kwh": {"electricity": 0.417, ...},
         "utility_rates_usd_per_kwh": {"electricity": 0.15, ...}}
    """
    data = json.loads(Path(path).read_text())
    try:
        rates = RateTable(
            emission_factors={
                FuelType(k): float(v)
                for k, v in data["emission_factors_kg_per_kwh"].items()
            },
            utility_rates={
                FuelType(k): float(v)
                for k, v in data["utility_rates_usd_per_kwh"].items()
            },
            discount_rate=float(data.get("discount_rate", 0.03)),
        )
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad rate table {path}: {exc}") from exc
    rates.validate()
    return rates


def save_rate_table(rates: RateTable, path: str | Path) -> None:
    rates.validate()
    payload = {
        "discount_rate": rates.discount_rate,
        "emission_factors_kg_per_kwh": {
            fuel.value: rates.emission_factors[fuel] for fuel in FuelType
        },
        "utility_rates_usd_per_kwh": {
            fuel.value: rates.utility_rates[fuel] for fuel in FuelType
        },
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
