import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from retrofitkit.corpus import CorpusSample, SYSTEM_MESSAGE, build_corpus, read_samples
from retrofitkit.gateway import (
    ConfigError,
    EndpointConfig,
    GenerationRecord,
    generate_batch,
    load_generations,
    mock_batch,
    mock_degraded,
    mock_perfect,
    save_generations,
)
from retrofitkit.payload import NUMERIC_FIELDS, parse_payload, render_assistant
from retrofitkit.ranking import Objective


def sample(building_id="b-1", user_text="describe me", masked=()):
    return CorpusSample(
        building_id=building_id,
        template_id=1,
        split="eval",
        masked_fields=tuple(masked),
        messages=[
            {"role": "system", "content": SYSTEM_MESSAGE},
            {"role": "user", "content": user_text},
            {"role": "assistant", "content": "truth"},
        ],
    )


class StubState:
    """Scripted behavior plus per-run instrumentation for the stub server."""

    def __init__(self):
        self.lock = threading.Lock()
        self.fail_first = 0
        self.status_for_failures = 500
        self.fixed_status = None
        self.attempts = {}
        self.active = 0
        self.high_water = 0
        self.auth_headers = []

    def register(self, building_id, auth):
        with self.lock:
            self.attempts[building_id] = self.attempts.get(building_id, 0) + 1
            self.auth_headers.append(auth)
            self.active += 1
            self.high_water = max(self.high_water, self.active)
            return self.attempts[building_id]

    def release(self):
        with self.lock:
            self.active -= 1


class Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def do_POST(self):
        state: StubState = self.server.state
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length))
        user_text = body["messages"][1]["content"]
        attempt = state.register(user_text, self.headers.get("Authorization"))
        try:
            import time

            time.sleep(0.01)  # overlap window for the concurrency check
            if state.fixed_status is not None:
                self.send_response(state.fixed_status)
                self.end_headers()
                return
            if attempt <= state.fail_first:
                self.send_response(state.status_for_failures)
                self.end_headers()
                return
            answer = {
                "choices": [
                    {"message": {"role": "assistant", "content": f"echo:{user_text}"}}
                ]
            }
            raw = json.dumps(answer).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(raw)))
            self.end_headers()
            self.wfile.write(raw)
        finally:
            state.release()


@pytest.fixture()
def stub_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    server.state = StubState()
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    thread.join(timeout=5)


def config_for(server, **overrides):
    defaults = dict(
        base_url=f"http://127.0.0.1:{server.server_address[1]}",
        model="test-model",
        max_retries=3,
        max_concurrent=4,
        backoff_base_s=0.0,
        timeout_s=10.0,
    )
    defaults.update(overrides)
    return EndpointConfig(**defaults)


class TestGenerateBatch:
    def test_round_trip_in_input_order(self, stub_server):
        samples = [sample(f"b-{i}", user_text=f"house {i}") for i in range(10)]
        records = generate_batch(samples, config_for(stub_server))
        assert [r.building_id for r in records] == [s.building_id for s in samples]
        for i, record in enumerate(records):
            assert record.response_text == f"echo:house {i}"
            assert record.error is None
            assert record.attempts == 1
            assert record.latency_s > 0

    def test_retries_recover_from_transient_failures(self, stub_server):
        stub_server.state.fail_first = 2
        records = generate_batch([sample(user_text="x")], config_for(stub_server))
        assert records[0].error is None
        assert records[0].attempts == 3

    def test_429_is_retried(self, stub_server):
        stub_server.state.fail_first = 1
        stub_server.state.status_for_failures = 429
        records = generate_batch([sample(user_text="x")], config_for(stub_server))
        assert records[0].error is None
        assert records[0].attempts == 2

    def test_exhausted_retries_keep_the_record(self, stub_server):
        stub_server.state.fixed_status = 500
        samples = [sample(f"b-{i}", user_text=f"h{i}") for i in range(3)]
        records = generate_batch(samples, config_for(stub_server, max_retries=2))
        assert [r.building_id for r in records] == ["b-0", "b-1", "b-2"]
        for record in records:
            assert record.response_text == ""
            assert record.error == "HTTP 500"
            assert record.attempts == 3

    def test_client_error_is_not_retried(self, stub_server):
        stub_server.state.fixed_status = 422
        records = generate_batch([sample(user_text="x")], config_for(stub_server))
        assert records[0].error == "HTTP 422"
        assert stub_server.state.attempts["x"] == 1

    @pytest.mark.parametrize("status", [401, 403, 404])
    def test_auth_and_routing_errors_abort(self, stub_server, status):
        stub_server.state.fixed_status = status
        with pytest.raises(ConfigError):
            generate_batch([sample()], config_for(stub_server))

    def test_concurrency_stays_within_bound(self, stub_server):
        samples = [sample(f"b-{i}", user_text=f"h{i}") for i in range(24)]
        generate_batch(samples, config_for(stub_server, max_concurrent=3))
        assert 1 <= stub_server.state.high_water <= 3

    def test_bearer_token_from_environment(self, stub_server, monkeypatch):
        monkeypatch.setenv("RETROFIT_API_TOKEN", "sekret")
        generate_batch([sample(user_text="x")], config_for(stub_server))
        assert stub_server.state.auth_headers[-1] == "Bearer sekret"
        monkeypatch.delenv("RETROFIT_API_TOKEN")
        generate_batch([sample(user_text="y")], config_for(stub_server))
        assert stub_server.state.auth_headers[-1] is None

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            EndpointConfig(base_url="", model="m").validate()
        with pytest.raises(ConfigError):
            EndpointConfig(base_url="http://x", model="").validate()


class TestGenerationFiles:
    def test_save_load_round_trip(self, tmp_path):
        records = [
            GenerationRecord(
                building_id="b-1",
                condition="full",
                response_text='{"a": 1}',
                prompt_sha256="ab" * 32,
                attempts=2,
                latency_s=0.5,
                error=None,
            ),
            GenerationRecord(
                building_id="b-2",
                condition="masked",
                response_text="",
                prompt_sha256="cd" * 32,
                error="HTTP 500",
            ),
        ]
        path = tmp_path / "gen.jsonl"
        save_generations(path, records)
        assert load_generations(path) == records


@pytest.fixture(scope="module")
def mock_setup(small_store, tmp_path_factory):
    out = tmp_path_factory.mktemp("gen")
    build_corpus(small_store, out, holdout=20, seed=0)
    return small_store, read_samples(out / "eval.jsonl")


class TestMocks:
    def test_perfect_replays_stored_truth(self, mock_setup):
        store, samples = mock_setup
        for s in samples[:5]:
            record = mock_perfect(s, store)
            assert record.response_text == render_assistant(store.truth(s.building_id))
            assert record.condition == "full"
            assert record.error is None

    def test_masked_samples_get_masked_condition(self, mock_setup):
        store, samples = mock_setup
        masked = sample(samples[0].building_id, masked=("attic_type",))
        assert mock_perfect(masked, store).condition == "masked"

    def test_degraded_is_deterministic(self, mock_setup):
        store, samples = mock_setup
        a = mock_degraded(samples[0], store, noise=0.1, swap_prob=0.5, seed=4)
        b = mock_degraded(samples[0], store, noise=0.1, swap_prob=0.5, seed=4)
        assert a.response_text == b.response_text

    def test_degraded_noise_is_exact_relative_shift(self, mock_setup):
        store, samples = mock_setup
        for s in samples[:8]:
            degraded = json.loads(
                mock_degraded(s, store, noise=0.10, swap_prob=0.0, seed=0).response_text
            )
            clean = json.loads(render_assistant(store.truth(s.building_id)))
            for objective in clean:
                for clean_entry, noisy_entry in zip(
                    clean[objective], degraded[objective]
                ):
                    assert noisy_entry["measure"] == clean_entry["measure"]
                    for field in NUMERIC_FIELDS:
                        truth_value = clean_entry[field]
                        noisy_value = noisy_entry[field]
                        if truth_value is None:
                            assert noisy_value is None
                        elif truth_value == 0:
                            assert noisy_value == 0
                        else:
                            ratio = noisy_value / truth_value
                            assert abs(abs(ratio - 1.0) - 0.10) < 1e-9

    def test_degraded_swap_renumbers_ranks(self, mock_setup):
        store, samples = mock_setup
        for s in samples:
            swapped = json.loads(
                mock_degraded(s, store, noise=0.0, swap_prob=1.0, seed=0).response_text
            )
            clean = json.loads(render_assistant(store.truth(s.building_id)))
            for objective in clean:
                clean_measures = [e["measure"] for e in clean[objective]]
                swapped_measures = [e["measure"] for e in swapped[objective]]
                if len(clean_measures) >= 2:
                    expected = (
                        [clean_measures[1], clean_measures[0]] + clean_measures[2:]
                    )
                    assert swapped_measures == expected
                assert [e["rank"] for e in swapped[objective]] == list(
                    range(1, len(swapped_measures) + 1)
                )
            parsed = parse_payload(json.dumps(swapped))
            assert parsed.valid

    def test_mock_batch_kinds(self, mock_setup):
        store, samples = mock_setup
        assert len(mock_batch(samples[:3], store, kind="perfect")) == 3
        assert len(mock_batch(samples[:3], store, kind="degraded")) == 3
        with pytest.raises(ValueError):
            mock_batch(samples[:1], store, kind="sloppy")

    def test_degraded_parameter_validation(self, mock_setup):
        store, samples = mock_setup
        with pytest.raises(ValueError):
            mock_degraded(samples[0], store, noise=1.5)
        with pytest.raises(ValueError):
            mock_degraded(samples[0], store, swap_prob=-0.1)
