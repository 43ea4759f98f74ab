"""Evaluation harness scoring generated answers against stored truth.

Three layers of accounting keep the metrics honest. ``n_total`` counts
every generation record handed in; ``n_valid`` counts those whose
response text survives strict payload parsing (the invalid remainder is
broken down by first-violation reason); per objective, ``n_evaluable``
counts valid records whose ground-truth list is non-empty, and is the
denominator for the ranking metrics. An empty model list against a
non-empty truth list scores zero rather than vanishing from the mean.

Ranking quality uses Top-1 and Top-3 accuracy on the best ground-truth
option plus NDCG@3 with graded relevance 3/2/1 for the true first,
second, and third options. Numeric quality uses mean absolute percentage
error per reported field, pooled across both objectives over matched
entries (same option name at the same rank). Pairs with a zero truth
value are excluded from MAPE but counted; payback comparisons are also
skipped when either side has no payback or the truth exceeds the
retention limit used by the ranking rules.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .core import RetrofitError
from .gateway import GenerationRecord
from .payload import (
    NUMERIC_FIELDS,
    ParsedEntry,
    ParsedOutput,
    parse_payload,
    quantize_outcome,
)
from .ranking import DPY_RETENTION_LIMIT_YEARS, TOP_K, GroundTruthStore, Objective

REPORT_SCHEMA = "retrofit-eval/1"


class EmptyBaseline(RetrofitError):
    """NDCG is undefined against an empty ground-truth list."""


class MissingTruth(RetrofitError):
    """A generation record references a building the store lacks."""


def parse_output(text: str) -> ParsedOutput:
    return parse_payload(text)


def ndcg_at_3(model: Sequence[str], baseline: Sequence[str]) -> float:
    """Graded ranking agreement in [0, 1].

    Relevance of the true best option is 3, then 2, then 1; options
    outside the truth list score 0. Both lists hold at most three names.
    """
    if not baseline:
        raise EmptyBaseline("ground-truth list is empty")
    if len(baseline) > TOP_K or len(model) > TOP_K:
        raise ValueError(f"lists must hold at most {TOP_K} options")
    relevance = {name: 3 - i for i, name in enumerate(baseline)}
    dcg = sum(
        (2 ** relevance.get(name, 0) - 1) / math.log2(position + 1)
        for position, name in enumerate(model, start=1)
    )
    ideal = sum(
        (2 ** relevance[name] - 1) / math.log2(position + 1)
        for position, name in enumerate(baseline, start=1)
    )
    return dcg / ideal


def match_positions(model: Sequence[ParsedEntry], truth) -> list[tuple[ParsedEntry, dict]]:
    """Entries comparable for numeric error: same option at the same rank.

    Pairs each matched model entry with the truth outcome's quantized
    numbers, since the payload reports at declared precision.
    """
    pairs = []
    for model_entry, truth_outcome in zip(model, truth):
        if model_entry.measure is truth_outcome.measure:
            pairs.append((model_entry, quantize_outcome(truth_outcome)))
    return pairs


@dataclass
class FieldError:
    """Accumulated absolute percentage error for one reported field."""

    n_matched: int = 0
    n_excluded_zero: int = 0
    n_excluded_dpy: int = 0
    total_ape: float = 0.0

    def add(self, truth: float | None, predicted: float | None, is_dpy: bool) -> None:
        if is_dpy:
            unusable = (
                truth is None
                or truth > DPY_RETENTION_LIMIT_YEARS
                or predicted is None
            )
            if unusable:
                self.n_excluded_dpy += 1
                return
        if truth == 0:
            self.n_excluded_zero += 1
            return
        assert truth is not None and predicted is not None
        self.n_matched += 1
        self.total_ape += abs(truth - predicted) / abs(truth) * 100.0

    def mape(self) -> float | None:
        if self.n_matched == 0:
            return None
        return self.total_ape / self.n_matched

    def to_dict(self) -> dict:
        return {
            "mape_pct": self.mape(),
            "n_matched": self.n_matched,
            "n_excluded_zero": self.n_excluded_zero,
            "n_excluded_dpy": self.n_excluded_dpy,
        }


@dataclass
class ObjectiveMetrics:
    """Ranking metrics for one objective."""

    n_evaluable: int = 0
    top1_hits: int = 0
    top3_hits: int = 0
    ndcg_total: float = 0.0

    def top1(self) -> float | None:
        return self.top1_hits / self.n_evaluable if self.n_evaluable else None

    def top3(self) -> float | None:
        return self.top3_hits / self.n_evaluable if self.n_evaluable else None

    def ndcg(self) -> float | None:
        return self.ndcg_total / self.n_evaluable if self.n_evaluable else None

    def to_dict(self) -> dict:
        return {
            "n_evaluable": self.n_evaluable,
            "top1_accuracy": self.top1(),
            "top3_accuracy": self.top3(),
            "ndcg_at_3": self.ndcg(),
        }


@dataclass
class EvalReport:
    """Full scorecard for one generation run."""

    condition: str
    n_total: int
    n_valid: int
    n_generation_errors: int
    invalid_reasons: dict[str, int]
    objectives: dict[str, ObjectiveMetrics]
    fields: dict[str, FieldError]

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "condition": self.condition,
            "n_total": self.n_total,
            "n_valid": self.n_valid,
            "n_generation_errors": self.n_generation_errors,
            "invalid_reasons": dict(sorted(self.invalid_reasons.items())),
            "objectives": {k: v.to_dict() for k, v in sorted(self.objectives.items())},
            "field_errors": {k: v.to_dict() for k, v in self.fields.items()},
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    def format_table(self) -> str:
        lines = [
            f"condition          {self.condition}",
            f"records            {self.n_total}",
            f"valid payloads     {self.n_valid}",
            f"generation errors  {self.n_generation_errors}",
        ]
        if self.invalid_reasons:
            worst = ", ".join(
                f"{reason}={count}"
                for reason, count in sorted(self.invalid_reasons.items())
            )
            lines.append(f"invalid reasons    {worst}")
        for name, metrics in sorted(self.objectives.items()):
            lines.append(f"[{name}]")
            lines.append(f"  evaluable        {metrics.n_evaluable}")
            for label, value in (
                ("top-1 accuracy", metrics.top1()),
                ("top-3 accuracy", metrics.top3()),
                ("ndcg@3", metrics.ndcg()),
            ):
                shown = "n/a" if value is None else f"{value:.4f}"
                lines.append(f"  {label:<16} {shown}")
        lines.append("[field errors, matched entries]")
        for name, err in self.fields.items():
            value = err.mape()
            shown = "n/a" if value is None else f"{value:.3f}%"
            lines.append(f"  {name:<28} {shown}  (n={err.n_matched})")
        return "\n".join(lines)


def evaluate_run(
    generations: Sequence[GenerationRecord],
    store: GroundTruthStore,
    *,
    condition: str | None = None,
) -> EvalReport:
    """Score a generation run against the ground-truth store.

    When ``condition`` is given, only records tagged with it are scored;
    otherwise all records count and the report is tagged "mixed" if they
    disagree.
    """
    records = [
        r for r in generations if condition is None or r.condition == condition
    ]
    seen_conditions = sorted({r.condition for r in records})
    report_condition = (
        condition
        if condition is not None
        else (seen_conditions[0] if len(seen_conditions) == 1 else "mixed")
    )

    invalid_reasons: Counter[str] = Counter()
    objectives = {obj.value: ObjectiveMetrics() for obj in Objective}
    fields = {name: FieldError() for name in NUMERIC_FIELDS}
    n_valid = 0
    n_generation_errors = 0

    for record in records:
        if record.building_id not in store:
            raise MissingTruth(f"no ground truth for {record.building_id}")
        if record.error is not None:
            n_generation_errors += 1
        parsed = parse_output(record.response_text)
        if not parsed.valid:
            assert parsed.reason is not None
            invalid_reasons[parsed.reason] += 1
            continue
        n_valid += 1
        truth = store.truth(record.building_id)
        for objective in Objective:
            truth_outcomes = truth.ranked(objective)
            if not truth_outcomes:
                continue
            metrics = objectives[objective.value]
            metrics.n_evaluable += 1
            truth_names = [o.measure.value for o in truth_outcomes]
            model_entries = parsed.rankings[objective]
            model_names = [e.measure.value for e in model_entries]
            if model_names and model_names[0] == truth_names[0]:
                metrics.top1_hits += 1
            if truth_names[0] in model_names:
                metrics.top3_hits += 1
            metrics.ndcg_total += ndcg_at_3(model_names, truth_names)

            for model_entry, truth_entry in match_positions(
                model_entries, truth_outcomes
            ):
                for field_name in NUMERIC_FIELDS:
                    fields[field_name].add(
                        truth_entry[field_name],
                        model_entry.value(field_name),
                        is_dpy=field_name == "dpy",
                    )

    return EvalReport(
        condition=report_condition,
        n_total=len(records),
        n_valid=n_valid,
        n_generation_errors=n_generation_errors,
        invalid_reasons=dict(invalid_reasons),
        objectives=objectives,
        fields=fields,
    )
