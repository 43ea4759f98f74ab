"""Fine-tuning corpus construction: samples, masking, splits, and files.

Each corpus sample is a three-message conversation: a fixed system
message, a homeowner description rendered by one of the fourteen
templates, and the assistant answer holding the ground-truth payload.
Template choice, the train/eval split, and masking draws are all keyed by
(seed, building_id) through SHA-256, so corpus builds are byte-identical
across reruns and insensitive to iteration order.

Masking models incomplete homeowner reports for robustness evaluation: a
per-building masked-fraction draw hides that share of the maskable
descriptors, while the three core descriptors (building type, conditioned
floor area, vintage) are never hidden. Masked evaluation corpora re-render
the homeowner message from the masked record; the assistant answer keeps
the full ground truth.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from ..core import CORE_FIELDS, RECORD_FIELDS, BuildingRecord, RetrofitError, UNKNOWN
from ..econ import round_half_up
from ..payload import render_assistant
from ..ranking import GroundTruthStore
from .templates import TEMPLATES, TEMPLATES_BY_ID, Template, render_user

CORPUS_SCHEMA = "retrofit-corpus/1"

SYSTEM_MESSAGE = (
    "You are a residential retrofit advisor. From the homeowner's "
    "description of the dwelling, recommend the most suitable retrofit "
    "options and report the expected annual impact of each. Answer with a "
    "JSON object holding the ranked option lists for both objectives."
)

DEFAULT_HOLDOUT = 2000

# Descriptors eligible for masking: everything except the core three.
DEFAULT_MASKABLE = tuple(f for f in RECORD_FIELDS if f not in CORE_FIELDS)

MAX_MASK_FRACTION = 0.4


class InsufficientRecords(RetrofitError):
    """Too few buildings to hold out the requested evaluation split."""


def _rng(*parts: object) -> random.Random:
    key = "|".join(str(p) for p in parts).encode()
    return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))


@dataclass(frozen=True)
class MaskPolicy:
    """How much of a record may be hidden, and which fields qualify."""

    maskable_fields: tuple[str, ...] = DEFAULT_MASKABLE
    mask_fraction: float = MAX_MASK_FRACTION
    seed: int = 0

    def validate(self) -> None:
        for name in self.maskable_fields:
            if name not in RECORD_FIELDS:
                raise ValueError(f"unknown field {name!r}")
            if name in CORE_FIELDS:
                raise ValueError(f"core field {name!r} is not maskable")
        if len(set(self.maskable_fields)) != len(self.maskable_fields):
            raise ValueError("maskable_fields contains duplicates")
        if not 0 <= self.mask_fraction <= MAX_MASK_FRACTION:
            raise ValueError(f"mask_fraction must lie in [0, {MAX_MASK_FRACTION}]")


def mask_record(
    record: BuildingRecord, policy: MaskPolicy
) -> tuple[BuildingRecord, tuple[str, ...]]:
    """Hide a seeded draw of maskable descriptors; core fields survive.

    The per-building masked fraction is uniform on [0, mask_fraction]; the
    field count is that fraction of the maskable set, rounded half-up, and
    fields are drawn without replacement.
    """
    policy.validate()
    rng = _rng(policy.seed, record.building_id, "mask")
    fraction = rng.uniform(0.0, policy.mask_fraction)
    k = round_half_up(fraction * len(policy.maskable_fields))
    chosen = tuple(sorted(rng.sample(list(policy.maskable_fields), k)))
    masked = dataclasses.replace(record, **{name: UNKNOWN for name in chosen})
    return masked, chosen


@dataclass
class CorpusSample:
    """One conversation: system, homeowner description, assistant answer."""

    building_id: str
    template_id: int
    split: str
    masked_fields: tuple[str, ...]
    messages: list[dict]

    def to_dict(self) -> dict:
        return {
            "building_id": self.building_id,
            "template_id": self.template_id,
            "split": self.split,
            "masked_fields": list(self.masked_fields),
            "messages": self.messages,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusSample":
        sample = cls(
            building_id=data["building_id"],
            template_id=int(data["template_id"]),
            split=data["split"],
            masked_fields=tuple(data["masked_fields"]),
            messages=data["messages"],
        )
        roles = [m.get("role") for m in sample.messages]
        if roles != ["system", "user", "assistant"]:
            raise ValueError(f"{sample.building_id}: bad message roles {roles}")
        return sample

    @property
    def user_text(self) -> str:
        return self.messages[1]["content"]

    @property
    def assistant_text(self) -> str:
        return self.messages[2]["content"]


def uniform_template_weights() -> dict[int, float]:
    return {t.template_id: 1.0 / len(TEMPLATES) for t in TEMPLATES}


def validate_template_weights(weights: dict[int, float]) -> None:
    if set(weights) != set(TEMPLATES_BY_ID):
        raise ValueError("weights must cover exactly the template ids")
    if any(w < 0 for w in weights.values()):
        raise ValueError("weights must be non-negative")
    if abs(sum(weights.values()) - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")


def choose_template(
    building_id: str, seed: int, weights: dict[int, float] | None = None
) -> Template:
    """Seeded weighted template draw, stable per building."""
    weights = weights or uniform_template_weights()
    validate_template_weights(weights)
    u = _rng(seed, building_id, "template").random()
    cumulative = 0.0
    ordered = sorted(weights)
    for template_id in ordered:
        cumulative += weights[template_id]
        if u < cumulative:
            return TEMPLATES_BY_ID[template_id]
    return TEMPLATES_BY_ID[ordered[-1]]


def split_holdout(
    building_ids: Sequence[str], holdout: int, seed: int
) -> tuple[list[str], list[str]]:
    """Deterministic uniform split into (train_ids, eval_ids)."""
    ids = sorted(building_ids)
    if holdout < 0:
        raise ValueError("holdout must be >= 0")
    if len(ids) <= holdout:
        raise InsufficientRecords(
            f"{len(ids)} records cannot support a holdout of {holdout}"
        )
    eval_ids = set(_rng(seed, "holdout").sample(ids, holdout))
    return [i for i in ids if i not in eval_ids], sorted(eval_ids)


def make_sample(
    record: BuildingRecord,
    truth_text: str,
    template: Template,
    split: str,
    masked_fields: tuple[str, ...] = (),
) -> CorpusSample:
    return CorpusSample(
        building_id=record.building_id,
        template_id=template.template_id,
        split=split,
        masked_fields=masked_fields,
        messages=[
            {"role": "system", "content": SYSTEM_MESSAGE},
            {"role": "user", "content": render_user(record, template)},
            {"role": "assistant", "content": truth_text},
        ],
    )


def write_samples(path: Path, samples: Iterable[CorpusSample]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            fh.write(json.dumps(sample.to_dict(), ensure_ascii=False) + "\n")


def read_samples(path: str | Path) -> list[CorpusSample]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(CorpusSample.from_dict(json.loads(line)))
    return out


def build_corpus(
    store: GroundTruthStore,
    out_dir: str | Path,
    *,
    holdout: int = DEFAULT_HOLDOUT,
    seed: int = 0,
    template_weights: dict[int, float] | None = None,
    mask_policy: MaskPolicy | None = None,
) -> dict:
    """Write train.jsonl and eval.jsonl (plus eval_masked.jsonl when a
    mask policy is given) and a manifest; returns the manifest mapping.

    Every stored building appears exactly once across train and eval. The
    eval split holds exactly ``holdout`` buildings.
    """
    weights = template_weights or uniform_template_weights()
    validate_template_weights(weights)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    train_ids, eval_ids = split_holdout(store.building_ids(), holdout, seed)
    split_of = {bid: "train" for bid in train_ids}
    split_of.update({bid: "eval" for bid in eval_ids})

    samples: dict[str, list[CorpusSample]] = {"train": [], "eval": [], "masked": []}
    for bid in store.building_ids():
        entry = store.get(bid)
        template = choose_template(bid, seed, weights)
        truth_text = render_assistant(entry.truth)
        split = split_of[bid]
        samples[split].append(make_sample(entry.record, truth_text, template, split))
        if mask_policy is not None and split == "eval":
            masked_record, masked_fields = mask_record(entry.record, mask_policy)
            samples["masked"].append(
                make_sample(masked_record, truth_text, template, "eval", masked_fields)
            )

    write_samples(out / "train.jsonl", samples["train"])
    write_samples(out / "eval.jsonl", samples["eval"])
    if mask_policy is not None:
        write_samples(out / "eval_masked.jsonl", samples["masked"])

    manifest = {
        "schema": CORPUS_SCHEMA,
        "seed": seed,
        "holdout": holdout,
        "n_train": len(samples["train"]),
        "n_eval": len(samples["eval"]),
        "system_sha256": hashlib.sha256(SYSTEM_MESSAGE.encode()).hexdigest(),
        "template_weights": {str(k): weights[k] for k in sorted(weights)},
        "mask_policy": (
            None
            if mask_policy is None
            else {
                "maskable_fields": list(mask_policy.maskable_fields),
                "mask_fraction": mask_policy.mask_fraction,
                "seed": mask_policy.seed,
            }
        ),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest
