"""Homeowner description templates.

Fourteen semantically equivalent ways to describe the same dwelling. All
templates draw from one pool of per-field clause variants, then differ in
information ordering, sentence framing, and which variant each field uses.
A rendered description contains every known descriptor exactly once and
omits unknown ones entirely, so the rule-based extractor can recover the
reported field set precisely.

Three framing styles are used: flowing prose sentences, a single
semicolon-separated profile line, and a dashed fact list.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import (
    RECORD_FIELDS,
    STATE_NAMES,
    BuildingRecord,
    FuelType,
    is_unknown,
)

N_VARIANTS = 3

CLIMATE_TEXT = {
    "very_cold": "very cold",
    "cold": "cold",
    "mixed_humid": "mixed-humid",
    "hot_humid": "hot-humid",
    "hot_dry": "hot-dry",
    "marine": "marine",
}

BUILDING_TYPE_TEXT = {
    "single_family_detached": "single-family detached house",
    "single_family_attached": "single-family attached house",
    "mobile_home": "mobile home",
    "multi_family": "multi-family unit",
}

FOUNDATION_TEXT = {
    "slab": "slab",
    "crawlspace": "crawlspace",
    "unconditioned_basement": "unconditioned basement",
    "conditioned_basement": "conditioned basement",
    "pier_and_beam": "pier-and-beam",
}

ATTIC_TEXT = {
    "vented_attic": "vented attic",
    "unvented_attic": "unvented attic",
    "finished_attic": "finished attic",
    "flat_roof": "flat roof",
}

WALL_TEXT = {
    "wood_frame": "wood-frame",
    "brick": "brick",
    "concrete_block": "concrete-block",
    "steel_frame": "steel-frame",
}

WINDOW_TEXT = {
    "single_pane": "single-pane",
    "double_pane": "double-pane",
    "double_pane_low_e": "double-pane low-E",
    "triple_pane": "triple-pane",
}

# Pre-articled equipment phrases; articles vary by value so they live here.
HVAC_TEXT = {
    "heat_pump": "an electric heat pump",
    "mini_split": "a mini-split system",
    "central_ac_only": "central AC only",
    "electric_furnace": "an electric furnace",
    "electric_baseboard": "electric baseboard heating",
    "furnace": "a forced-air furnace",
    "boiler": "a hot-water boiler",
    "shared_cooling": "a shared cooling system",
}

FUEL_NOUN = {
    FuelType.ELECTRICITY: "electricity",
    FuelType.NATURAL_GAS: "natural gas",
    FuelType.PROPANE: "propane",
    FuelType.FUEL_OIL: "fuel oil",
}

FUEL_ADJECTIVE = {
    FuelType.ELECTRICITY: "electric",
    FuelType.NATURAL_GAS: "natural gas",
    FuelType.PROPANE: "propane",
    FuelType.FUEL_OIL: "oil-fired",
}


def _article(phrase: str) -> str:
    return "an" if phrase[:1].lower() in "aeiou" else "a"


def _number(x: float | int) -> str:
    s = f"{float(x):.1f}"
    return s[:-2] if s.endswith(".0") else s


def _count(n: int, singular: str, plural: str) -> str:
    return f"{n} {singular if n == 1 else plural}"


def _vintage(value: str, variant: int) -> str:
    if value == "pre_1950":
        return ("built before 1950", "a pre-1950 build", "constructed before 1950")[variant]
    return (
        f"built in the {value}",
        f"a {value}-era build",
        f"constructed in the {value}",
    )[variant]


def render_clause(field: str, value, variant: int) -> str:
    """One descriptor as a text fragment; variant selects the surface form."""
    v = variant % N_VARIANTS
    if field == "location_state":
        name = STATE_NAMES[value]
        return (f"located in {name}", f"in {name}", f"the house is in {name}")[v]
    if field == "climate_region":
        text = CLIMATE_TEXT[value]
        return (
            f"in {_article(text)} {text} climate zone",
            f"the local climate is {text}",
            f"{_article(text)} {text} climate area",
        )[v]
    if field == "vintage_decade":
        return _vintage(value, v)
    if field == "building_type":
        text = BUILDING_TYPE_TEXT[value]
        return (
            f"{_article(text)} {text}",
            f"the property is {_article(text)} {text}",
            f"{_article(text)} {text}",
        )[v]
    if field == "conditioned_floor_area":
        n = _number(value)
        return (
            f"about {n} m² of conditioned floor area",
            f"a conditioned floor area of {n} m²",
            f"{n} square meters of conditioned space",
        )[v]
    if field == "num_stories":
        return (
            _count(int(value), "story", "stories"),
            f"a {int(value)}-story layout",
            f"built over {_count(int(value), 'story', 'stories')}",
        )[v]
    if field == "num_bedrooms":
        return (
            _count(int(value), "bedroom", "bedrooms"),
            f"a {int(value)}-bedroom home",
            f"with {_count(int(value), 'bedroom', 'bedrooms')}",
        )[v]
    if field == "num_occupants":
        return (
            _count(int(value), "occupant", "occupants"),
            f"a household of {int(value)}",
            f"{_count(int(value), 'person', 'people')} living there",
        )[v]
    if field == "foundation_type":
        text = FOUNDATION_TEXT[value]
        art = _article(text)
        return (
            f"built on {art} {text} foundation",
            f"with {art} {text} foundation",
            f"the foundation is {art} {text}",
        )[v]
    if field == "attic_type":
        text = ATTIC_TEXT[value]
        art = _article(text)
        return (f"{art} {text}", f"topped by {art} {text}", f"with {art} {text}")[v]
    if field == "wall_construction":
        text = WALL_TEXT[value]
        return (
            f"{text} walls",
            f"walls of {text} construction",
            f"{text} wall construction",
        )[v]
    if field == "window_type":
        text = WINDOW_TEXT[value]
        return (
            f"{text} windows",
            f"the windows are {text}",
            f"fitted with {text} windows",
        )[v]
    if field == "garage_present":
        if value:
            return ("an attached garage", "with a garage", "a garage on site")[v]
        return ("no garage", "without a garage", "no garage on site")[v]
    if field == "hvac_type":
        text = HVAC_TEXT[value]
        return (
            f"the HVAC system is {text}",
            f"equipped with {text}",
            f"served by {text}",
        )[v]
    if field == "heating_fuel":
        if value is None:
            return "no dedicated heating fuel"
        noun = FUEL_NOUN[value]
        return (
            f"heated with {noun}",
            f"the heating fuel is {noun}",
            f"uses {noun} for heating",
        )[v]
    if field == "cooling_present":
        if value:
            return (
                "has air conditioning",
                "air conditioning is available",
                "the home is air-conditioned",
            )[v]
        return ("no air conditioning", "without air conditioning", "not air-conditioned")[v]
    if field == "heating_setpoint":
        t = _number(value)
        return (
            f"a heating setpoint of {t} °C",
            f"the thermostat is set to {t} °C for heating",
            f"kept at {t} °C in winter",
        )[v]
    if field == "cooling_setpoint":
        t = _number(value)
        return (
            f"a cooling setpoint of {t} °C",
            f"the thermostat is set to {t} °C for cooling",
            f"kept at {t} °C in summer",
        )[v]
    if field == "water_heater_fuel":
        adj = FUEL_ADJECTIVE[value]
        art = _article(adj)
        return (
            f"{art} {adj} water heater",
            f"the water heater runs on {FUEL_NOUN[value]}",
            f"hot water comes from {art} {adj} water heater",
        )[v]
    if field == "dryer_fuel":
        adj = FUEL_ADJECTIVE[value]
        art = _article(adj)
        return (
            f"{art} {adj} clothes dryer",
            f"the clothes dryer runs on {FUEL_NOUN[value]}",
            f"laundry is dried with {art} {adj} dryer",
        )[v]
    if field == "existing_pv_present":
        if value:
            return (
                "rooftop solar panels are already installed",
                "there is existing rooftop PV",
                "the roof already has solar panels",
            )[v]
        return (
            "no rooftop solar yet",
            "no existing rooftop PV",
            "no solar panels on the roof",
        )[v]
    raise KeyError(field)


# Descriptors grouped into sentence-sized topics.
GROUPS: dict[str, tuple[str, ...]] = {
    "location": ("location_state", "climate_region"),
    "basics": (
        "building_type",
        "vintage_decade",
        "conditioned_floor_area",
        "num_stories",
    ),
    "household": ("num_bedrooms", "num_occupants"),
    "envelope": (
        "foundation_type",
        "attic_type",
        "wall_construction",
        "window_type",
        "garage_present",
    ),
    "hvac": ("hvac_type", "heating_fuel", "cooling_present"),
    "setpoints": ("heating_setpoint", "cooling_setpoint"),
    "appliances": ("water_heater_fuel", "dryer_fuel"),
    "solar": ("existing_pv_present",),
}

_FIELD_INDEX = {name: i for i, name in enumerate(RECORD_FIELDS)}


@dataclass(frozen=True)
class Template:
    """One description style: a group ordering plus framing choices."""

    template_id: int
    intro: str
    group_order: tuple[str, ...]
    style: str  # "prose" | "semicolon" | "lines"
    variant_shift: int

    def fields_in_order(self) -> list[str]:
        return [f for group in self.group_order for f in GROUPS[group]]


TEMPLATES: tuple[Template, ...] = (
    Template(1, "I would like advice on upgrading my home.",
             ("basics", "location", "household", "envelope", "hvac", "setpoints", "appliances", "solar"),
             "prose", 0),
    Template(2, "We are exploring options to cut our bills.",
             ("location", "basics", "envelope", "household", "hvac", "setpoints", "appliances", "solar"),
             "prose", 1),
    Template(3, "Looking for improvement suggestions.",
             ("basics", "household", "location", "hvac", "appliances", "setpoints", "envelope", "solar"),
             "prose", 2),
    Template(4, "Home profile:",
             ("basics", "envelope", "location", "household", "setpoints", "hvac", "solar", "appliances"),
             "semicolon", 0),
    Template(5, "Property summary:",
             ("location", "household", "basics", "appliances", "hvac", "envelope", "solar", "setpoints"),
             "semicolon", 1),
    Template(6, "Dwelling details:",
             ("basics", "hvac", "envelope", "appliances", "setpoints", "household", "location", "solar"),
             "semicolon", 2),
    Template(7, "Here are the facts about my house:",
             ("basics", "location", "hvac", "household", "envelope", "appliances", "setpoints", "solar"),
             "lines", 0),
    Template(8, "House description:",
             ("location", "basics", "hvac", "setpoints", "envelope", "household", "solar", "appliances"),
             "lines", 1),
    Template(9, "Key characteristics of our home:",
             ("basics", "solar", "appliances", "setpoints", "hvac", "envelope", "household", "location"),
             "lines", 2),
    Template(10, "Please suggest improvements for this place.",
             ("basics", "appliances", "hvac", "envelope", "location", "setpoints", "household", "solar"),
             "prose", 1),
    Template(11, "Our place could use some work.",
             ("location", "envelope", "basics", "hvac", "household", "solar", "setpoints", "appliances"),
             "prose", 2),
    Template(12, "Owner notes:",
             ("basics", "setpoints", "hvac", "appliances", "envelope", "solar", "location", "household"),
             "semicolon", 0),
    Template(13, "Building facts:",
             ("basics", "hvac", "appliances", "solar", "envelope", "setpoints", "location", "household"),
             "lines", 1),
    Template(14, "What would suit this home best?",
             ("location", "solar", "basics", "envelope", "appliances", "hvac", "setpoints", "household"),
             "prose", 0),
)

TEMPLATES_BY_ID = {t.template_id: t for t in TEMPLATES}


def _clauses_for(record: BuildingRecord, template: Template, group: str) -> list[str]:
    out = []
    for field in GROUPS[group]:
        value = getattr(record, field)
        if is_unknown(value):
            continue
        variant = (template.variant_shift + _FIELD_INDEX[field]) % N_VARIANTS
        out.append(render_clause(field, value, variant))
    return out


def render_user(record: BuildingRecord, template: Template) -> str:
    """The homeowner message for one record under one template."""
    groups = [
        _clauses_for(record, template, g)
        for g in template.group_order
    ]
    groups = [g for g in groups if g]
    if template.style == "prose":
        sentences = []
        for clauses in groups:
            body = clauses[0] if len(clauses) == 1 else ", ".join(clauses[:-1]) + " and " + clauses[-1]
            sentences.append(body[0].upper() + body[1:] + ".")
        return template.intro + " " + " ".join(sentences)
    if template.style == "semicolon":
        return template.intro + " " + "; ".join(c for g in groups for c in g) + "."
    if template.style == "lines":
        return template.intro + "\n" + "\n".join(f"- {c}" for g in groups for c in g)
    raise ValueError(f"unknown style {template.style!r}")
