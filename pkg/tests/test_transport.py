import json

import pytest

from ideaforge.errors import FixtureMiss, ProviderUnavailable
from ideaforge.transport import (FailingTransport, ProviderFixtureStore,
                                 RecordReplayTransport, ScriptedTransport,
                                 TransportResponse, provider_digest,
                                 request_with_retry)


def test_scripted_transport_queues_by_request():
    t = ScriptedTransport()
    t.enqueue("GET", "http://x/a", body={"ok": 1})
    t.enqueue("GET", "http://x/a", body={"ok": 2})
    assert t.request("GET", "http://x/a").json() == {"ok": 1}
    assert t.request("GET", "http://x/a").json() == {"ok": 2}
    with pytest.raises(ProviderUnavailable):
        t.request("GET", "http://x/a")


def test_record_then_replay_round_trip(tmp_path):
    inner = ScriptedTransport()
    inner.enqueue("GET", "http://x/paper", body={"data": [1, 2]})
    store = ProviderFixtureStore(tmp_path)
    recorder = RecordReplayTransport(mode="record", store=store, inner=inner)
    resp = recorder.request("GET", "http://x/paper", params={"q": "ai"})
    assert resp.json() == {"data": [1, 2]}
    assert len(list(tmp_path.glob("*.json"))) == 1

    replayer = RecordReplayTransport(mode="replay",
                                     store=ProviderFixtureStore(tmp_path),
                                     inner=FailingTransport())
    again = replayer.request("GET", "http://x/paper", params={"q": "ai"})
    assert again.json() == {"data": [1, 2]}


def test_replay_miss_raises_and_touches_no_network():
    replayer = RecordReplayTransport(mode="replay", store=ProviderFixtureStore(),
                                     inner=FailingTransport())
    with pytest.raises(FixtureMiss):
        replayer.request("GET", "http://x/unknown")


def test_binary_bodies_survive_record_replay(tmp_path):
    pdf = b"%PDF-1.4\x00\x01binary"
    inner = ScriptedTransport()
    inner.enqueue("GET", "http://x/file.pdf", content=pdf)
    store = ProviderFixtureStore(tmp_path)
    RecordReplayTransport(mode="record", store=store, inner=inner).request(
        "GET", "http://x/file.pdf")
    replayed = RecordReplayTransport(mode="replay", store=store).request(
        "GET", "http://x/file.pdf")
    assert replayed.content == pdf


def test_digest_includes_params_and_body():
    base = provider_digest("GET", "http://x", {"a": 1}, None)
    assert provider_digest("GET", "http://x", {"a": 2}, None) != base
    assert provider_digest("POST", "http://x", {"a": 1}, None) != base
    assert provider_digest("GET", "http://x", {"a": 1}, b"body") != base
    assert provider_digest("GET", "http://x", {"a": 1}, None) == base


def test_retry_backoff_then_provider_unavailable():
    class Flaky:
        def __init__(self, failures, status=500):
            self.failures = failures
            self.calls = 0
            self.status = status

        def request(self, method, url, **kwargs):
            self.calls += 1
            if self.calls <= self.failures:
                return TransportResponse(status=self.status, content=b"")
            return TransportResponse(status=200, content=json.dumps({"ok": True}).encode())

    delays = []
    flaky = Flaky(failures=2)
    resp = request_with_retry(flaky, "GET", "http://x", sleep=delays.append)
    assert resp.json() == {"ok": True}
    assert delays == [0.5, 1.0]

    delays.clear()
    dead = Flaky(failures=10)
    with pytest.raises(ProviderUnavailable):
        request_with_retry(dead, "GET", "http://x", sleep=delays.append)
    assert dead.calls == 3
    assert delays == [0.5, 1.0]


def test_retry_does_not_mask_fixture_miss():
    replayer = RecordReplayTransport(mode="replay", store=ProviderFixtureStore())
    with pytest.raises(FixtureMiss):
        request_with_retry(replayer, "GET", "http://x", sleep=lambda s: None)


def test_client_error_status_returned_without_retry():
    class NotFound:
        def __init__(self):
            self.calls = 0

        def request(self, method, url, **kwargs):
            self.calls += 1
            return TransportResponse(status=404, content=b"{}")

    t = NotFound()
    resp = request_with_retry(t, "GET", "http://x", sleep=lambda s: None)
    assert resp.status == 404 and t.calls == 1
