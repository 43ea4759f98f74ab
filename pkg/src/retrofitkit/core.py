"""Core domain types for residential retrofit analytics.

Unit conventions, fixed package-wide: energy in kWh site energy, areas in
m2, thermal capacities in kW, temperatures in degrees C, money in USD,
emissions in kg CO2. Everything here is a plain value type with no I/O.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Any


class RetrofitError(Exception):
    """Base class for errors raised by this package."""


class UnresolvableHvac(RetrofitError):
    """The building's HVAC description cannot be mapped to an upgrade option."""


class _UnknownType:
    """Singleton marker for a descriptor the homeowner did not report.

    Distinct from None: ``heating_fuel`` uses None for "no heating fuel at
    all", while UNKNOWN means "not stated". Copy and deepcopy preserve
    identity so ``is UNKNOWN`` checks survive record duplication.
    """

    _instance: "_UnknownType | None" = None

    def __new__(cls) -> "_UnknownType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNKNOWN"

    def __copy__(self) -> "_UnknownType":
        return self

    def __deepcopy__(self, memo: dict) -> "_UnknownType":
        return self

    def __reduce__(self):
        return (_unknown_instance, ())


def _unknown_instance() -> "_UnknownType":
    return UNKNOWN


UNKNOWN = _UnknownType()


def is_unknown(value: Any) -> bool:
    return value is UNKNOWN


class FuelType(str, Enum):
    ELECTRICITY = "electricity"
    NATURAL_GAS = "natural_gas"
    PROPANE = "propane"
    FUEL_OIL = "fuel_oil"


class MeasureId(str, Enum):
    """The nine retrofit measure categories, in canonical catalog order.

    Declaration order is the tie-break order used by the rankers and the
    order reported by catalog listings; do not reorder members.
    """

    WALL_INSULATION = "wall_insulation"
    ROOF_CEILING_INSULATION = "roof_ceiling_insulation"
    WINDOW_REPLACEMENT = "window_replacement"
    AIR_SEALING = "air_sealing"
    HVAC_UPGRADE = "hvac_upgrade"
    PV_INSTALLATION = "pv_installation"
    APPLIANCE_REPLACEMENT = "appliance_replacement"
    LIGHTING_REPLACEMENT = "lighting_replacement"
    WATER_HEATER_REPLACEMENT = "water_heater_replacement"


def canonical_measure_order() -> list[MeasureId]:
    """Catalog order of the nine measures; index = deterministic tie-break key."""
    return list(MeasureId)


class HvacSubtype(str, Enum):
    """Equipment class installed when the HVAC upgrade measure is applied."""

    DX_COOLING_PLUS_DX_HEATING = "dx_cooling_plus_dx_heating"
    DX_COOLING_ONLY = "dx_cooling_only"
    ELECTRIC_FURNACE_BASEBOARD = "electric_furnace_baseboard"
    NATURAL_GAS_FURNACE = "natural_gas_furnace"
    FUEL_FURNACE = "fuel_furnace"
    HOT_WATER_BOILER = "hot_water_boiler"
    SHARED_COOLING = "shared_cooling"


# Closed vocabularies for the categorical descriptors. The generator, the
# description templates, and the description parser all share these.
STATE_NAMES: dict[str, str] = {
    "AZ": "Arizona",
    "CA": "California",
    "CO": "Colorado",
    "FL": "Florida",
    "GA": "Georgia",
    "IL": "Illinois",
    "MA": "Massachusetts",
    "MI": "Michigan",
    "MN": "Minnesota",
    "NC": "North Carolina",
    "NY": "New York",
    "OH": "Ohio",
    "OR": "Oregon",
    "PA": "Pennsylvania",
    "TX": "Texas",
    "WA": "Washington",
}

CLIMATE_REGIONS = ("very_cold", "cold", "mixed_humid", "hot_humid", "hot_dry", "marine")

VINTAGE_DECADES = (
    "pre_1950",
    "1950s",
    "1960s",
    "1970s",
    "1980s",
    "1990s",
    "2000s",
    "2010s",
)

BUILDING_TYPES = (
    "single_family_detached",
    "single_family_attached",
    "mobile_home",
    "multi_family",
)

FOUNDATION_TYPES = (
    "slab",
    "crawlspace",
    "unconditioned_basement",
    "conditioned_basement",
    "pier_and_beam",
)

ATTIC_TYPES = ("vented_attic", "unvented_attic", "finished_attic", "flat_roof")

WALL_CONSTRUCTIONS = ("wood_frame", "brick", "concrete_block", "steel_frame")

WINDOW_TYPES = ("single_pane", "double_pane", "double_pane_low_e", "triple_pane")

HVAC_TYPES = (
    "heat_pump",
    "mini_split",
    "central_ac_only",
    "electric_furnace",
    "electric_baseboard",
    "furnace",
    "boiler",
    "shared_cooling",
)

# The 21 homeowner-facing descriptors carried by a BuildingRecord.
# building_id is bookkeeping, not a descriptor.
RECORD_FIELDS = (
    "location_state",
    "climate_region",
    "vintage_decade",
    "building_type",
    "conditioned_floor_area",
    "num_stories",
    "num_bedrooms",
    "num_occupants",
    "foundation_type",
    "attic_type",
    "wall_construction",
    "window_type",
    "garage_present",
    "hvac_type",
    "heating_fuel",
    "cooling_present",
    "heating_setpoint",
    "cooling_setpoint",
    "water_heater_fuel",
    "dryer_fuel",
    "existing_pv_present",
)

# Core descriptors: always reported, never maskable.
CORE_FIELDS = ("building_type", "conditioned_floor_area", "vintage_decade")

NUMERIC_FIELDS = (
    "conditioned_floor_area",
    "num_stories",
    "num_bedrooms",
    "num_occupants",
    "heating_setpoint",
    "cooling_setpoint",
)

FLAG_FIELDS = ("garage_present", "cooling_present", "existing_pv_present")

FUEL_FIELDS = ("heating_fuel", "water_heater_fuel", "dryer_fuel")

_CATEGORICAL_VOCAB: dict[str, tuple[str, ...]] = {
    "location_state": tuple(STATE_NAMES),
    "climate_region": CLIMATE_REGIONS,
    "vintage_decade": VINTAGE_DECADES,
    "building_type": BUILDING_TYPES,
    "foundation_type": FOUNDATION_TYPES,
    "attic_type": ATTIC_TYPES,
    "wall_construction": WALL_CONSTRUCTIONS,
    "window_type": WINDOW_TYPES,
    "hvac_type": HVAC_TYPES,
}


@dataclass
class BuildingRecord:
    """One dwelling as described by its owner: 21 descriptors plus an id.

    Any descriptor may hold UNKNOWN. heating_fuel additionally admits None
    for homes with no dedicated heating fuel (for example, cooling-only
    HVAC). Use :func:`is_unknown` rather than truthiness to test for the
    UNKNOWN state.
    """

    building_id: str
    location_state: Any = UNKNOWN
    climate_region: Any = UNKNOWN
    vintage_decade: Any = UNKNOWN
    building_type: Any = UNKNOWN
    conditioned_floor_area: Any = UNKNOWN
    num_stories: Any = UNKNOWN
    num_bedrooms: Any = UNKNOWN
    num_occupants: Any = UNKNOWN
    foundation_type: Any = UNKNOWN
    attic_type: Any = UNKNOWN
    wall_construction: Any = UNKNOWN
    window_type: Any = UNKNOWN
    garage_present: Any = UNKNOWN
    hvac_type: Any = UNKNOWN
    heating_fuel: Any = UNKNOWN
    cooling_present: Any = UNKNOWN
    heating_setpoint: Any = UNKNOWN
    cooling_setpoint: Any = UNKNOWN
    water_heater_fuel: Any = UNKNOWN
    dryer_fuel: Any = UNKNOWN
    existing_pv_present: Any = UNKNOWN

    def known_fields(self) -> list[str]:
        return [f for f in RECORD_FIELDS if not is_unknown(getattr(self, f))]

    def validate(self) -> None:
        """Raise ValueError on any out-of-vocabulary or inconsistent value."""
        if not self.building_id or not isinstance(self.building_id, str):
            raise ValueError("building_id must be a non-empty string")
        for name, vocab in _CATEGORICAL_VOCAB.items():
            value = getattr(self, name)
            if is_unknown(value):
                continue
            if value not in vocab:
                raise ValueError(f"{name}={value!r} not in vocabulary")
        for name in NUMERIC_FIELDS:
            value = getattr(self, name)
            if is_unknown(value):
                continue
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"{name}={value!r} is not numeric")
            if not math.isfinite(float(value)):
                raise ValueError(f"{name} must be finite")
        cfa = self.conditioned_floor_area
        if not is_unknown(cfa) and cfa <= 0:
            raise ValueError("conditioned_floor_area must be positive")
        for name in ("num_stories", "num_bedrooms", "num_occupants"):
            value = getattr(self, name)
            if not is_unknown(value) and (int(value) != value or value < 1):
                raise ValueError(f"{name} must be a positive integer")
        for name in FLAG_FIELDS:
            value = getattr(self, name)
            if not is_unknown(value) and not isinstance(value, bool):
                raise ValueError(f"{name} must be a bool")
        for name in FUEL_FIELDS:
            value = getattr(self, name)
            if is_unknown(value) or value is None:
                if value is None and name != "heating_fuel":
                    raise ValueError(f"{name} does not admit None")
                continue
            if not isinstance(value, FuelType):
                raise ValueError(f"{name}={value!r} is not a FuelType")
        hsp, csp = self.heating_setpoint, self.cooling_setpoint
        if not is_unknown(hsp) and not is_unknown(csp) and hsp >= csp:
            raise ValueError("heating_setpoint must be below cooling_setpoint")

    def to_dict(self) -> dict:
        """JSON-safe mapping. UNKNOWN becomes null; heating_fuel None becomes "none"."""
        out: dict[str, Any] = {"building_id": self.building_id}
        for name in RECORD_FIELDS:
            value = getattr(self, name)
            if is_unknown(value):
                out[name] = None
            elif isinstance(value, FuelType):
                out[name] = value.value
            elif value is None:
                out[name] = "none"
            else:
                out[name] = value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BuildingRecord":
        kwargs: dict[str, Any] = {"building_id": data["building_id"]}
        for name in RECORD_FIELDS:
            raw = data.get(name)
            if raw is None:
                kwargs[name] = UNKNOWN
            elif name in FUEL_FIELDS:
                kwargs[name] = None if raw == "none" else FuelType(raw)
            else:
                kwargs[name] = raw
        record = cls(**kwargs)
        record.validate()
        return record


@dataclass(frozen=True)
class FuelVector:
    """Annual site-energy consumption by fuel, plus net site energy.

    net_site_energy_kwh equals the component sum minus any on-site PV
    generation credit, so it is at most the sum (and may go negative for a
    net exporter). Components are non-negative.
    """

    electricity_kwh: float
    natural_gas_kwh: float
    propane_kwh: float
    fuel_oil_kwh: float
    net_site_energy_kwh: float

    _FIELD_BY_FUEL = {
        FuelType.ELECTRICITY: "electricity_kwh",
        FuelType.NATURAL_GAS: "natural_gas_kwh",
        FuelType.PROPANE: "propane_kwh",
        FuelType.FUEL_OIL: "fuel_oil_kwh",
    }

    def component(self, fuel: FuelType) -> float:
        return getattr(self, self._FIELD_BY_FUEL[fuel])

    def components(self) -> dict[FuelType, float]:
        return {fuel: self.component(fuel) for fuel in FuelType}

    def total(self) -> float:
        return sum(self.components().values())

    def validate(self) -> None:
        for fuel in FuelType:
            value = self.component(fuel)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{fuel.value} consumption must be finite and >= 0")
        if not math.isfinite(self.net_site_energy_kwh):
            raise ValueError("net_site_energy_kwh must be finite")
        if self.net_site_energy_kwh > self.total() + 1e-6:
            raise ValueError("net_site_energy_kwh exceeds the component sum")

    @classmethod
    def from_components(
        cls, components: dict[FuelType, float], pv_generation_kwh: float = 0.0
    ) -> "FuelVector":
        """Build a vector from gross per-fuel consumption and a PV credit.

        Generation first offsets electricity; any excess is exported and
        credited against net site energy only.
        """
        if pv_generation_kwh < 0:
            raise ValueError("pv_generation_kwh must be >= 0")
        comps = {fuel: float(components.get(fuel, 0.0)) for fuel in FuelType}
        offset = min(pv_generation_kwh, comps[FuelType.ELECTRICITY])
        export = pv_generation_kwh - offset
        comps[FuelType.ELECTRICITY] -= offset
        net = sum(comps.values()) - export
        vec = cls(
            electricity_kwh=comps[FuelType.ELECTRICITY],
            natural_gas_kwh=comps[FuelType.NATURAL_GAS],
            propane_kwh=comps[FuelType.PROPANE],
            fuel_oil_kwh=comps[FuelType.FUEL_OIL],
            net_site_energy_kwh=net,
        )
        vec.validate()
        return vec

    def to_dict(self) -> dict:
        return {
            "electricity_kwh": self.electricity_kwh,
            "natural_gas_kwh": self.natural_gas_kwh,
            "propane_kwh": self.propane_kwh,
            "fuel_oil_kwh": self.fuel_oil_kwh,
            "net_site_energy_kwh": self.net_site_energy_kwh,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FuelVector":
        vec = cls(
            electricity_kwh=float(data["electricity_kwh"]),
            natural_gas_kwh=float(data["natural_gas_kwh"]),
            propane_kwh=float(data["propane_kwh"]),
            fuel_oil_kwh=float(data["fuel_oil_kwh"]),
            net_site_energy_kwh=float(data["net_site_energy_kwh"]),
        )
        vec.validate()
        return vec


@dataclass
class BuildingGeometry:
    """Derived surfaces and capacities consumed by the cost rules.

    A None field means the quantity is unavailable; cost rules that need it
    raise MissingGeometry.
    """

    exterior_wall_area_m2: float | None = None
    roof_area_m2: float | None = None
    total_window_area_m2: float | None = None
    conditioned_floor_area_m2: float | None = None
    cooling_capacity_kw: float | None = None
    heating_capacity_kw: float | None = None

    def to_dict(self) -> dict:
        return {
            "exterior_wall_area_m2": self.exterior_wall_area_m2,
            "roof_area_m2": self.roof_area_m2,
            "total_window_area_m2": self.total_window_area_m2,
            "conditioned_floor_area_m2": self.conditioned_floor_area_m2,
            "cooling_capacity_kw": self.cooling_capacity_kw,
            "heating_capacity_kw": self.heating_capacity_kw,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BuildingGeometry":
        return cls(**{key: data.get(key) for key in cls().to_dict()})


@dataclass
class RateTable:
    """Per-fuel emission factors (kg CO2/kWh), utility rates (USD/kWh), and
    the discount rate used for payback analysis."""

    emission_factors: dict[FuelType, float]
    utility_rates: dict[FuelType, float]
    discount_rate: float = 0.03

    def validate(self) -> None:
        for table, label in (
            (self.emission_factors, "emission_factors"),
            (self.utility_rates, "utility_rates"),
        ):
            for fuel in FuelType:
                if fuel not in table:
                    raise ValueError(f"{label} missing {fuel.value}")
                value = table[fuel]
                if not math.isfinite(value) or value < 0:
                    raise ValueError(f"{label}[{fuel.value}] must be finite and >= 0")
        if not 0 <= self.discount_rate < 1:
            raise ValueError("discount_rate must lie in [0, 1)")


@dataclass
class OutcomeRecord:
    """Annualized effect of applying one measure to one building.

    dpy is the discounted payback year: the first whole year in which
    cumulative discounted savings cover the retrofit cost, or None when the
    investment never pays back within the analysis horizon.
    """

    building_id: str
    measure: MeasureId
    co2_reduction_kg: float
    net_site_energy_reduction_kwh: float
    energy_cost_saving_usd: float
    retrofit_cost_usd: float
    dpy: int | None
    hvac_subtype: HvacSubtype | None = None

    def validate(self) -> None:
        for name in (
            "co2_reduction_kg",
            "net_site_energy_reduction_kwh",
            "energy_cost_saving_usd",
            "retrofit_cost_usd",
        ):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.retrofit_cost_usd < 0:
            raise ValueError("retrofit_cost_usd must be >= 0")
        if self.dpy is not None and (self.dpy < 1 or int(self.dpy) != self.dpy):
            raise ValueError("dpy must be a positive integer or None")
        has_subtype = self.hvac_subtype is not None
        if (self.measure is MeasureId.HVAC_UPGRADE) != has_subtype:
            raise ValueError("hvac_subtype is required exactly for hvac_upgrade")

    def to_dict(self) -> dict:
        return {
            "building_id": self.building_id,
            "measure": self.measure.value,
            "hvac_subtype": self.hvac_subtype.value if self.hvac_subtype else None,
            "co2_reduction_kg": self.co2_reduction_kg,
            "net_site_energy_reduction_kwh": self.net_site_energy_reduction_kwh,
            "energy_cost_saving_usd": self.energy_cost_saving_usd,
            "retrofit_cost_usd": self.retrofit_cost_usd,
            "dpy": self.dpy,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OutcomeRecord":
        record = cls(
            building_id=data["building_id"],
            measure=MeasureId(data["measure"]),
            hvac_subtype=(
                HvacSubtype(data["hvac_subtype"]) if data.get("hvac_subtype") else None
            ),
            co2_reduction_kg=float(data["co2_reduction_kg"]),
            net_site_energy_reduction_kwh=float(data["net_site_energy_reduction_kwh"]),
            energy_cost_saving_usd=float(data["energy_cost_saving_usd"]),
            retrofit_cost_usd=float(data["retrofit_cost_usd"]),
            dpy=int(data["dpy"]) if data.get("dpy") is not None else None,
        )
        record.validate()
        return record


def resolve_hvac_subtype(record: BuildingRecord) -> HvacSubtype:
    """Map a building's HVAC description to the upgrade equipment class.

    Total over every in-vocabulary (hvac_type, heating_fuel) pair; raises
    UnresolvableHvac when either descriptor is UNKNOWN or the hvac_type is
    out of vocabulary.
    """
    hvac = record.hvac_type
    fuel = record.heating_fuel
    if is_unknown(hvac) or is_unknown(fuel):
        raise UnresolvableHvac(
            f"{record.building_id}: hvac_type and heating_fuel must be known"
        )
    if hvac in ("heat_pump", "mini_split"):
        return HvacSubtype.DX_COOLING_PLUS_DX_HEATING
    if hvac == "central_ac_only":
        return HvacSubtype.DX_COOLING_ONLY
    if hvac in ("electric_furnace", "electric_baseboard"):
        return HvacSubtype.ELECTRIC_FURNACE_BASEBOARD
    if hvac == "furnace":
        if fuel is FuelType.NATURAL_GAS:
            return HvacSubtype.NATURAL_GAS_FURNACE
        if fuel is FuelType.ELECTRICITY:
            return HvacSubtype.ELECTRIC_FURNACE_BASEBOARD
        # propane, fuel oil, or no dedicated fuel: the generic fuel furnace
        return HvacSubtype.FUEL_FURNACE
    if hvac == "boiler":
        return HvacSubtype.HOT_WATER_BOILER
    if hvac == "shared_cooling":
        return HvacSubtype.SHARED_COOLING
    raise UnresolvableHvac(f"{record.building_id}: unrecognized hvac_type {hvac!r}")
