"""Objective-based ranking of retrofit outcomes and the ground-truth store.

Two homeowner objectives are supported: largest annual CO2 reduction and
fastest discounted payback. Each ranking keeps at most the top three
options and never pads. The payback ranking drops options that never pay
back or that pay back beyond the retention limit; the CO2 ranking keeps
them, since an emissions-driven homeowner may accept a long payback.

The store persists, per building: the descriptor record, simulated fuel
consumption for the baseline and every measure, all outcome records, and
both rankings. One JSON object per line, preceded by a manifest line with
a schema tag and a content hash, sorted by building_id so rebuilds are
byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .core import (
    BuildingGeometry,
    BuildingRecord,
    FuelVector,
    MeasureId,
    OutcomeRecord,
    RetrofitError,
    canonical_measure_order,
)

STORE_SCHEMA = "retrofit-ground-truth/1"

# Options whose discounted payback exceeds this many years are excluded
# from the payback objective. The bound is inclusive: exactly this value
# is retained.
DPY_RETENTION_LIMIT_YEARS = 100

TOP_K = 3


class Objective(str, Enum):
    MAX_CO2_REDUCTION = "max_co2_reduction"
    MIN_DPY = "min_dpy"


class EmptyOutcomeSet(RetrofitError):
    """A ranking was requested over zero outcomes."""


class DuplicateBuildingId(RetrofitError):
    """Two store entries share a building_id."""


_MEASURE_ORDER_INDEX = {m: i for i, m in enumerate(canonical_measure_order())}


def rank_co2(outcomes: Iterable[OutcomeRecord]) -> list[OutcomeRecord]:
    """Top options by descending CO2 reduction; catalog order breaks ties.

    Options with no payback stay eligible here.
    """
    pool = list(outcomes)
    if not pool:
        raise EmptyOutcomeSet("rank_co2 needs at least one outcome")
    pool.sort(key=lambda o: (-o.co2_reduction_kg, _MEASURE_ORDER_INDEX[o.measure]))
    return pool[:TOP_K]


def rank_dpy(outcomes: Iterable[OutcomeRecord]) -> list[OutcomeRecord]:
    """Top options by ascending discounted payback.

    Options that never pay back, or whose payback exceeds the retention
    limit, are dropped before ranking; the result may therefore be shorter
    than the usual three, including empty. Ties on payback year prefer the
    larger annual bill saving, then catalog order.
    """
    pool = list(outcomes)
    if not pool:
        raise EmptyOutcomeSet("rank_dpy needs at least one outcome")
    eligible = [
        o for o in pool if o.dpy is not None and o.dpy <= DPY_RETENTION_LIMIT_YEARS
    ]
    eligible.sort(
        key=lambda o: (
            o.dpy,
            -o.energy_cost_saving_usd,
            _MEASURE_ORDER_INDEX[o.measure],
        )
    )
    return eligible[:TOP_K]


@dataclass
class GroundTruth:
    """Per-building answer key: the ranked option list for each objective."""

    building_id: str
    rankings: dict[Objective, list[OutcomeRecord]]

    def ranked(self, objective: Objective) -> list[OutcomeRecord]:
        return self.rankings[objective]


@dataclass
class StoreEntry:
    """Everything persisted for one building."""

    record: BuildingRecord
    geometry: BuildingGeometry
    baseline_fuels: FuelVector
    measure_fuels: dict[MeasureId, FuelVector]
    outcomes: list[OutcomeRecord]
    truth: GroundTruth

    def to_dict(self) -> dict:
        return {
            "building_id": self.record.building_id,
            "record": self.record.to_dict(),
            "geometry": self.geometry.to_dict(),
            "baseline_fuels": self.baseline_fuels.to_dict(),
            "measure_fuels": {
                m.value: v.to_dict() for m, v in sorted(self.measure_fuels.items())
            },
            "outcomes": [o.to_dict() for o in self.outcomes],
            "rankings": {
                obj.value: [o.measure.value for o in ranked]
                for obj, ranked in self.truth.rankings.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StoreEntry":
        record = BuildingRecord.from_dict(data["record"])
        outcomes = [OutcomeRecord.from_dict(o) for o in data["outcomes"]]
        by_measure = {o.measure: o for o in outcomes}
        rankings = {
            Objective(obj): [by_measure[MeasureId(m)] for m in measures]
            for obj, measures in data["rankings"].items()
        }
        return cls(
            record=record,
            geometry=BuildingGeometry.from_dict(data["geometry"]),
            baseline_fuels=FuelVector.from_dict(data["baseline_fuels"]),
            measure_fuels={
                MeasureId(m): FuelVector.from_dict(v)
                for m, v in data["measure_fuels"].items()
            },
            outcomes=outcomes,
            truth=GroundTruth(building_id=record.building_id, rankings=rankings),
        )


class GroundTruthStore:
    """In-memory map of building_id to StoreEntry with JSONL persistence."""

    def __init__(self) -> None:
        self.entries: dict[str, StoreEntry] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, building_id: str) -> bool:
        return building_id in self.entries

    def add(self, entry: StoreEntry) -> None:
        bid = entry.record.building_id
        if bid in self.entries:
            raise DuplicateBuildingId(bid)
        self.entries[bid] = entry

    def get(self, building_id: str) -> StoreEntry:
        return self.entries[building_id]

    def truth(self, building_id: str) -> GroundTruth:
        return self.entries[building_id].truth

    def building_ids(self) -> list[str]:
        return sorted(self.entries)

    def save(self, path: str | Path) -> None:
        lines = [
            json.dumps(self.entries[bid].to_dict(), sort_keys=True) + "\n"
            for bid in self.building_ids()
        ]
        body = "".join(lines)
        manifest = {
            "schema": STORE_SCHEMA,
            "records": len(lines),
            "content_sha256": hashlib.sha256(body.encode()).hexdigest(),
        }
        Path(path).write_text(json.dumps(manifest, sort_keys=True) + "\n" + body)

    @classmethod
    def load(cls, path: str | Path) -> "GroundTruthStore":
        text = Path(path).read_text()
        first, _, body = text.partition("\n")
        manifest = json.loads(first)
        if manifest.get("schema") != STORE_SCHEMA:
            raise ValueError(f"unsupported store schema in {path}")
        digest = hashlib.sha256(body.encode()).hexdigest()
        if digest != manifest.get("content_sha256"):
            raise ValueError(f"store content hash mismatch in {path}")
        store = cls()
        for line in body.splitlines():
            if line.strip():
                store.add(StoreEntry.from_dict(json.loads(line)))
        if len(store) != manifest.get("records"):
            raise ValueError(f"store record count mismatch in {path}")
        return store


def build_ground_truth(
    items: Iterable[
        tuple[
            BuildingRecord,
            BuildingGeometry,
            FuelVector,
            dict[MeasureId, FuelVector],
            list[OutcomeRecord],
        ]
    ],
) -> GroundTruthStore:
    """Rank each building's outcomes under both objectives and assemble a store."""
    store = GroundTruthStore()
    for record, geometry, baseline, measure_fuels, outcomes in items:
        if not outcomes:
            raise EmptyOutcomeSet(record.building_id)
        truth = GroundTruth(
            building_id=record.building_id,
            rankings={
                Objective.MAX_CO2_REDUCTION: rank_co2(outcomes),
                Objective.MIN_DPY: rank_dpy(outcomes),
            },
        )
        store.add(
            StoreEntry(
                record=record,
                geometry=geometry,
                baseline_fuels=baseline,
                measure_fuels=measure_fuels,
                outcomes=outcomes,
                truth=truth,
            )
        )
    return store
