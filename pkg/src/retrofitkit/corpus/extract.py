"""Rule-based extraction of building descriptors from free text.

The inverse of the description templates: every clause variant a template
can emit is covered by a pattern here, and each pattern is anchored with
enough context that fuels, setpoints, and equipment never bleed between
fields. Matching is case-insensitive so sentence capitalization does not
matter. Fields without a match are simply absent from the result; the
caller decides whether that is acceptable.

Also tolerates common free-text forms that the templates never produce,
such as spelled-out story counts ("two-story").
"""

from __future__ import annotations

import re
from typing import Any, Callable

from ..core import STATE_NAMES, FuelType

_WORD_NUMBERS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11, "twelve": 12,
}

_NUM = r"(\d+(?:\.\d+)?)"
_COUNT = r"(\d+|" + "|".join(_WORD_NUMBERS) + r")"
_FUEL_NOUNS = r"(electricity|natural gas|propane|fuel oil)"
_FUEL_ADJS = r"(electric|natural gas|propane|oil-fired)"

_STATE_ALTERNATION = "|".join(
    sorted((re.escape(name) for name in STATE_NAMES.values()), key=len, reverse=True)
)
_STATE_BY_NAME = {name.lower(): code for code, name in STATE_NAMES.items()}

_CLIMATES = r"(very cold|mixed[- ]humid|hot[- ]humid|hot[- ]dry|marine|cold)"


def _slug(text: str) -> str:
    return text.lower().replace("-", "_").replace(" ", "_")


def _to_count(text: str) -> int:
    return _WORD_NUMBERS.get(text.lower(), 0) or int(text)


def _to_fuel(text: str) -> FuelType:
    key = text.lower()
    if key == "electric":
        key = "electricity"
    if key == "oil-fired":
        key = "fuel_oil"
    return FuelType(key.replace(" ", "_"))


# Each field: ordered (pattern, converter) attempts; first match wins.
# Negated forms come before their positive counterparts.
_FIELD_RULES: dict[str, list[tuple[str, Callable[[re.Match], Any]]]] = {
    "location_state": [
        (rf"\b({_STATE_ALTERNATION})\b", lambda m: _STATE_BY_NAME[m.group(1).lower()]),
    ],
    "climate_region": [
        (rf"{_CLIMATES}[- ]climate", lambda m: _slug(m.group(1))),
        (rf"climate is {_CLIMATES}", lambda m: _slug(m.group(1))),
    ],
    "vintage_decade": [
        (r"(?:built|constructed) before 1950|pre-1950", lambda m: "pre_1950"),
        (r"\b(19[5-9]0s|20[01]0s)\b", lambda m: m.group(1)),
    ],
    "building_type": [
        (
            r"(single-family detached|single-family attached|mobile home|multi-family)",
            lambda m: _slug(m.group(1)),
        ),
    ],
    "conditioned_floor_area": [
        (rf"{_NUM}\s*(?:m²|m2)", lambda m: float(m.group(1))),
        (rf"{_NUM} square meters", lambda m: float(m.group(1))),
    ],
    "num_stories": [
        (rf"{_COUNT}[- ]stor(?:y|ies)", lambda m: _to_count(m.group(1))),
        (rf"(?:over|across) {_COUNT} stor", lambda m: _to_count(m.group(1))),
    ],
    "num_bedrooms": [
        (rf"{_COUNT}[- ]bedroom", lambda m: _to_count(m.group(1))),
    ],
    "num_occupants": [
        (rf"{_COUNT} occupants?\b", lambda m: _to_count(m.group(1))),
        (rf"household of {_COUNT}", lambda m: _to_count(m.group(1))),
        (rf"{_COUNT} (?:person|people)", lambda m: _to_count(m.group(1))),
    ],
    "foundation_type": [
        (
            r"(slab|crawlspace|unconditioned basement|conditioned basement|pier-and-beam) foundation",
            lambda m: _slug(m.group(1)),
        ),
        (
            r"foundation is an? (slab|crawlspace|unconditioned basement|conditioned basement|pier-and-beam)",
            lambda m: _slug(m.group(1)),
        ),
    ],
    "attic_type": [
        (
            r"(vented attic|unvented attic|finished attic|flat roof)",
            lambda m: _slug(m.group(1)),
        ),
    ],
    "wall_construction": [
        (r"(wood-frame|brick|concrete-block|steel-frame) wall", lambda m: _slug(m.group(1))),
        (
            r"walls of (wood-frame|brick|concrete-block|steel-frame) construction",
            lambda m: _slug(m.group(1)),
        ),
    ],
    "window_type": [
        (
            r"(double-pane low-E|double-pane|single-pane|triple-pane) windows",
            lambda m: _slug(m.group(1)),
        ),
        (
            r"windows are (double-pane low-E|double-pane|single-pane|triple-pane)",
            lambda m: _slug(m.group(1)),
        ),
    ],
    "garage_present": [
        (r"no garage|without a garage", lambda m: False),
        (r"\bgarage\b", lambda m: True),
    ],
    "hvac_type": [
        (r"heat pump", lambda m: "heat_pump"),
        (r"mini-split", lambda m: "mini_split"),
        (r"central (?:AC|air conditioning) only", lambda m: "central_ac_only"),
        (r"electric furnace", lambda m: "electric_furnace"),
        (r"electric baseboard", lambda m: "electric_baseboard"),
        (r"forced-air furnace", lambda m: "furnace"),
        (r"\bboiler\b", lambda m: "boiler"),
        (r"shared cooling", lambda m: "shared_cooling"),
        (r"\bfurnace\b", lambda m: "furnace"),
    ],
    "heating_fuel": [
        (r"no dedicated heating fuel", lambda m: None),
        (rf"heated with {_FUEL_NOUNS}", lambda m: _to_fuel(m.group(1))),
        (rf"heating fuel is {_FUEL_NOUNS}", lambda m: _to_fuel(m.group(1))),
        (rf"uses {_FUEL_NOUNS} for heating", lambda m: _to_fuel(m.group(1))),
    ],
    "cooling_present": [
        (
            r"no air conditioning|without air conditioning|not air-conditioned",
            lambda m: False,
        ),
        (r"air conditioning|air-conditioned", lambda m: True),
    ],
    "heating_setpoint": [
        (rf"heating setpoint of {_NUM} ?°C", lambda m: float(m.group(1))),
        (rf"set to {_NUM} ?°C for heating", lambda m: float(m.group(1))),
        (rf"kept at {_NUM} ?°C in winter", lambda m: float(m.group(1))),
    ],
    "cooling_setpoint": [
        (rf"cooling setpoint of {_NUM} ?°C", lambda m: float(m.group(1))),
        (rf"set to {_NUM} ?°C for cooling", lambda m: float(m.group(1))),
        (rf"kept at {_NUM} ?°C in summer", lambda m: float(m.group(1))),
    ],
    "water_heater_fuel": [
        (rf"{_FUEL_ADJS} water heater", lambda m: _to_fuel(m.group(1))),
        (rf"water heater runs on {_FUEL_NOUNS}", lambda m: _to_fuel(m.group(1))),
    ],
    "dryer_fuel": [
        (rf"{_FUEL_ADJS} (?:clothes )?dryer", lambda m: _to_fuel(m.group(1))),
        (rf"dryer runs on {_FUEL_NOUNS}", lambda m: _to_fuel(m.group(1))),
    ],
    "existing_pv_present": [
        (
            r"no rooftop solar|no existing rooftop PV|no solar panels",
            lambda m: False,
        ),
        (r"rooftop solar|rooftop PV|solar panels", lambda m: True),
    ],
}

_COMPILED = {
    field: [(re.compile(pattern, re.IGNORECASE), conv) for pattern, conv in rules]
    for field, rules in _FIELD_RULES.items()
}


def extract_fields(text: str) -> dict[str, Any]:
    """Descriptors found in the text. Unmentioned fields are absent.

    heating_fuel maps to None when the text states there is no dedicated
    heating fuel, so use ``"heating_fuel" in result`` rather than a None
    check to see whether it was reported.
    """
    found: dict[str, Any] = {}
    for field, rules in _COMPILED.items():
        for pattern, convert in rules:
            match = pattern.search(text)
            if match:
                found[field] = convert(match)
                break
    return found
