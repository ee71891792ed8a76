"""HTTP transport for provider traffic, with record/replay fixtures.

The scholarly index, the extraction service, and PDF downloads all go through
a Transport so that every provider exchange can be recorded to fixture files
(request digest -> response body) and replayed offline.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Protocol

import httpx

from .errors import FixtureMiss, ProviderUnavailable

RETRY_ATTEMPTS = 3
RETRY_BASE_DELAY = 0.5


@dataclass
class TransportResponse:
    status: int
    content: bytes

    @property
    def text(self) -> str:
        return self.content.decode("utf-8", errors="replace")

    def json(self):
        return json.loads(self.content)


class Transport(Protocol):
    def request(self, method: str, url: str, *, params: Optional[Dict] = None,
                headers: Optional[Dict] = None,
                content: Optional[bytes] = None) -> TransportResponse: ...


class HttpxTransport:
    def __init__(self, timeout: float = 60.0):
        self.timeout = timeout

    def request(self, method, url, *, params=None, headers=None, content=None):
        try:
            resp = httpx.request(method, url, params=params, headers=headers,
                                 content=content, timeout=self.timeout)
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"request to {url} failed: {exc}") from exc
        return TransportResponse(status=resp.status_code, content=resp.content)


class ScriptedTransport:
    """Maps request keys to queued responses; the live side of recording in tests."""

    def __init__(self):
        self._responses: Dict[str, List[TransportResponse]] = {}
        self.calls: List[Dict] = []

    @staticmethod
    def key(method: str, url: str) -> str:
        return f"{method.upper()} {url}"

    def enqueue(self, method: str, url: str, *, status: int = 200,
                body: object = None, content: Optional[bytes] = None) -> "ScriptedTransport":
        if content is None:
            content = json.dumps(body).encode("utf-8")
        self._responses.setdefault(self.key(method, url), []).append(
            TransportResponse(status=status, content=content))
        return self

    def request(self, method, url, *, params=None, headers=None, content=None):
        self.calls.append({"method": method, "url": url, "params": params})
        queue = self._responses.get(self.key(method, url))
        if not queue:
            raise ProviderUnavailable(f"no scripted response for {method} {url}")
        return queue.pop(0)


class FailingTransport:
    """Raises on any use; proves replay paths perform no network I/O."""

    def request(self, method, url, *, params=None, headers=None, content=None):
        raise AssertionError(f"network request attempted in replay mode: {method} {url}")


def provider_digest(method: str, url: str, params: Optional[Dict],
                    content: Optional[bytes]) -> str:
    payload = json.dumps({
        "method": method.upper(),
        "url": url,
        "params": sorted((params or {}).items()),
        "bodySha": hashlib.sha256(content or b"").hexdigest(),
    }, sort_keys=True, ensure_ascii=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class ProviderFixtureStore:
    """One JSON file per recorded provider exchange; bodies are base64."""

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory) if directory else None
        self._entries: Dict[str, Dict] = {}
        self._lock = threading.Lock()
        if self.directory and self.directory.is_dir():
            for path in sorted(self.directory.glob("*.json")):
                doc = json.loads(path.read_text(encoding="utf-8"))
                self._entries[doc["digest"]] = doc

    def get(self, digest: str) -> Optional[Dict]:
        with self._lock:
            return self._entries.get(digest)

    def put(self, doc: Dict) -> None:
        with self._lock:
            self._entries[doc["digest"]] = doc
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
            path = self.directory / f"{doc['digest']}.json"
            tmp = path.with_suffix(".json.tmp")
            tmp.write_text(json.dumps(doc, indent=2), encoding="utf-8")
            os.replace(tmp, path)

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class RecordReplayTransport:
    """Wraps an inner transport with record or replay semantics.

    mode "replay" never touches the inner transport; mode "record" forwards
    and persists every exchange; mode "live" just forwards.
    """

    mode: str
    store: ProviderFixtureStore = field(default_factory=ProviderFixtureStore)
    inner: Optional[Transport] = None
    clock: Callable[[], datetime] = lambda: datetime.now(timezone.utc)

    def request(self, method, url, *, params=None, headers=None, content=None):
        digest = provider_digest(method, url, params, content)
        if self.mode == "replay":
            doc = self.store.get(digest)
            if doc is None:
                raise FixtureMiss(f"no provider fixture for {method} {url}", digest=digest)
            return TransportResponse(status=doc["response"]["status"],
                                     content=base64.b64decode(doc["response"]["bodyB64"]))
        if self.inner is None:
            raise ProviderUnavailable("no live transport configured")
        resp = self.inner.request(method, url, params=params, headers=headers,
                                  content=content)
        if self.mode == "record":
            self.store.put({
                "digest": digest,
                "request": {"method": method.upper(), "url": url,
                            "params": dict(params or {})},
                "response": {"status": resp.status,
                             "bodyB64": base64.b64encode(resp.content).decode("ascii")},
                "recordedAt": self.clock().isoformat(),
            })
        return resp


def request_with_retry(transport: Transport, method: str, url: str, *,
                       params: Optional[Dict] = None, headers: Optional[Dict] = None,
                       content: Optional[bytes] = None,
                       sleep: Callable[[float], None] = time.sleep) -> TransportResponse:
    """3 attempts with exponential backoff from 500 ms, then ProviderUnavailable.

    Retries connection failures and 429/5xx; other statuses return to the
    caller (4xx fixture replies are part of recorded behavior).
    """
    delay = RETRY_BASE_DELAY
    last: Optional[Exception] = None
    for attempt in range(RETRY_ATTEMPTS):
        try:
            resp = transport.request(method, url, params=params, headers=headers,
                                     content=content)
        except FixtureMiss:
            raise
        except ProviderUnavailable as exc:
            last = exc
        else:
            if resp.status == 429 or resp.status >= 500:
                last = ProviderUnavailable(f"{method} {url} returned {resp.status}")
            else:
                return resp
        if attempt < RETRY_ATTEMPTS - 1:
            sleep(delay)
            delay *= 2
    raise ProviderUnavailable(f"{method} {url} failed after {RETRY_ATTEMPTS} attempts: {last}")
