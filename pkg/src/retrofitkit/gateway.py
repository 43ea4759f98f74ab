"""Model-generation gateway: batched chat-completions calls plus mocks.

The gateway sends each corpus sample's system and user messages to an
OpenAI-compatible chat-completions endpoint and records the raw response
text for the evaluator. Requests run through a bounded thread pool;
transport errors, 429s, and 5xx responses retry with exponential backoff,
while auth and routing errors (401/403/404) abort the run since no retry
can fix them. A building whose retries are exhausted is kept as a record
with an empty response and the error message, never dropped, so
evaluation denominators stay honest.

Two mock generators close the loop without a live model. The perfect mock
replays the stored ground-truth payload. The degraded mock re-renders the
truth with seeded noise applied to the quantized numbers and an optional
swap of the top two entries per objective, giving analytically known
error rates for calibrating the evaluator.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import os
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import httpx

from .core import RetrofitError
from .corpus import CorpusSample
from .payload import ENTRY_KEYS, NUMERIC_FIELDS, render_payload
from .ranking import GroundTruthStore

GENERATION_SCHEMA = "retrofit-generations/1"

CONDITION_FULL = "full"
CONDITION_MASKED = "masked"


class ConfigError(RetrofitError):
    """Endpoint rejected the configuration; retrying cannot help."""


@dataclass(frozen=True)
class EndpointConfig:
    """Where and how to reach a chat-completions service."""

    base_url: str
    model: str
    auth_env_var: str = "RETROFIT_API_TOKEN"
    timeout_s: float = 60.0
    max_retries: int = 3
    max_concurrent: int = 4
    temperature: float = 0.0
    backoff_base_s: float = 0.5

    def validate(self) -> None:
        if not self.base_url:
            raise ConfigError("base_url is required")
        if not self.model:
            raise ConfigError("model is required")
        if self.max_retries < 0 or self.max_concurrent < 1:
            raise ConfigError("bad retry/concurrency settings")

    def token(self) -> str | None:
        return os.environ.get(self.auth_env_var)


@dataclass
class GenerationRecord:
    """One model response (or failure) for one corpus sample."""

    building_id: str
    condition: str
    response_text: str
    prompt_sha256: str
    attempts: int = 1
    latency_s: float = 0.0
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "building_id": self.building_id,
            "condition": self.condition,
            "response_text": self.response_text,
            "prompt_sha256": self.prompt_sha256,
            "attempts": self.attempts,
            "latency_s": self.latency_s,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GenerationRecord":
        return cls(
            building_id=data["building_id"],
            condition=data["condition"],
            response_text=data["response_text"],
            prompt_sha256=data["prompt_sha256"],
            attempts=int(data.get("attempts", 1)),
            latency_s=float(data.get("latency_s", 0.0)),
            error=data.get("error"),
        )


def save_generations(path: str | Path, records: Iterable[GenerationRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict(), ensure_ascii=False) + "\n")


def load_generations(path: str | Path) -> list[GenerationRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(GenerationRecord.from_dict(json.loads(line)))
    return out


def _prompt_hash(sample: CorpusSample) -> str:
    body = json.dumps(sample.messages[:2], ensure_ascii=False, sort_keys=True)
    return hashlib.sha256(body.encode()).hexdigest()


def sample_condition(sample: CorpusSample) -> str:
    return CONDITION_MASKED if sample.masked_fields else CONDITION_FULL


def _call_once(
    client: httpx.Client, config: EndpointConfig, sample: CorpusSample
) -> str:
    payload = {
        "model": config.model,
        "messages": sample.messages[:2],
        "temperature": config.temperature,
    }
    headers = {}
    token = config.token()
    if token:
        headers["Authorization"] = f"Bearer {token}"
    response = client.post(
        "/chat/completions", json=payload, headers=headers, timeout=config.timeout_s
    )
    if response.status_code in (401, 403, 404):
        raise ConfigError(
            f"endpoint rejected request: HTTP {response.status_code}"
        )
    response.raise_for_status()
    body = response.json()
    return body["choices"][0]["message"]["content"]


def _generate_one(
    client: httpx.Client, config: EndpointConfig, sample: CorpusSample
) -> GenerationRecord:
    start = time.monotonic()
    condition = sample_condition(sample)
    prompt_hash = _prompt_hash(sample)
    last_error = "no attempts made"
    attempt = 0
    for attempt in range(config.max_retries + 1):
        try:
            text = _call_once(client, config, sample)
            return GenerationRecord(
                building_id=sample.building_id,
                condition=condition,
                response_text=text,
                prompt_sha256=prompt_hash,
                attempts=attempt + 1,
                latency_s=time.monotonic() - start,
            )
        except ConfigError:
            raise
        except httpx.HTTPStatusError as exc:
            status = exc.response.status_code
            if status != 429 and status < 500:
                # Other 4xx are our fault; retrying with the same body is futile.
                last_error = f"HTTP {status}"
                break
            last_error = f"HTTP {status}"
        except (httpx.TransportError, json.JSONDecodeError, KeyError) as exc:
            last_error = f"{type(exc).__name__}: {exc}"
        if attempt < config.max_retries:
            time.sleep(config.backoff_base_s * (2**attempt))
    return GenerationRecord(
        building_id=sample.building_id,
        condition=condition,
        response_text="",
        prompt_sha256=prompt_hash,
        attempts=attempt + 1,
        latency_s=time.monotonic() - start,
        error=last_error,
    )


def generate_batch(
    samples: Sequence[CorpusSample],
    config: EndpointConfig,
    *,
    progress: Callable[[int, int], None] | None = None,
) -> list[GenerationRecord]:
    """Query the endpoint for every sample; results keep input order."""
    config.validate()
    results: list[GenerationRecord | None] = [None] * len(samples)
    with httpx.Client(base_url=config.base_url) as client:
        with concurrent.futures.ThreadPoolExecutor(
            max_workers=config.max_concurrent
        ) as pool:
            futures = {
                pool.submit(_generate_one, client, config, sample): i
                for i, sample in enumerate(samples)
            }
            done = 0
            for future in concurrent.futures.as_completed(futures):
                i = futures[future]
                results[i] = future.result()
                done += 1
                if progress is not None:
                    progress(done, len(samples))
    return [r for r in results if r is not None]


# --- mock generators ------------------------------------------------------


def mock_perfect(sample: CorpusSample, store: GroundTruthStore) -> GenerationRecord:
    """Replay the stored ground-truth answer verbatim."""
    truth = store.truth(sample.building_id)
    payload = render_payload(truth)
    return GenerationRecord(
        building_id=sample.building_id,
        condition=sample_condition(sample),
        response_text=json.dumps(payload, indent=2),
        prompt_sha256=_prompt_hash(sample),
    )


def mock_degraded(
    sample: CorpusSample,
    store: GroundTruthStore,
    *,
    noise: float = 0.10,
    swap_prob: float = 0.0,
    seed: int = 0,
) -> GenerationRecord:
    """Perturb the truth payload by a known amount.

    Every numeric field moves by exactly +/- ``noise`` (relative, random
    sign) from its quantized value, so the evaluation error rate is
    noise * 100 percent by construction. With probability ``swap_prob``
    the top two entries of each objective list trade places (ranks are
    renumbered by position, so the payload stays well-formed).
    """
    if not 0 <= noise < 1:
        raise ValueError("noise must lie in [0, 1)")
    if not 0 <= swap_prob <= 1:
        raise ValueError("swap_prob must lie in [0, 1]")
    truth = store.truth(sample.building_id)
    payload = render_payload(truth)
    key = f"{seed}|{sample.building_id}|degrade".encode()
    rng = random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))
    for objective in sorted(payload):
        entries = payload[objective]
        if len(entries) >= 2 and rng.random() < swap_prob:
            entries[0], entries[1] = entries[1], entries[0]
            for position, entry in enumerate(entries, start=1):
                entry["rank"] = position
        for entry in entries:
            for field_name in NUMERIC_FIELDS:
                value = entry[field_name]
                if value is None:
                    continue
                sign = 1.0 if rng.random() < 0.5 else -1.0
                entry[field_name] = value * (1.0 + sign * noise)
    return GenerationRecord(
        building_id=sample.building_id,
        condition=sample_condition(sample),
        response_text=json.dumps(payload, indent=2),
        prompt_sha256=_prompt_hash(sample),
    )


def mock_batch(
    samples: Sequence[CorpusSample],
    store: GroundTruthStore,
    *,
    kind: str = "perfect",
    noise: float = 0.10,
    swap_prob: float = 0.0,
    seed: int = 0,
) -> list[GenerationRecord]:
    if kind == "perfect":
        return [mock_perfect(s, store) for s in samples]
    if kind == "degraded":
        return [
            mock_degraded(s, store, noise=noise, swap_prob=swap_prob, seed=seed)
            for s in samples
        ]
    raise ValueError(f"unknown mock kind {kind!r}")
