"""Model access chokepoint: two tiers, per-project chat memory, record/replay.

Every model call in the system goes through ``LlmGateway.complete``. In replay
mode responses come from a fixture store keyed by a digest of (tier, prompt,
memory window), which makes every pipeline deterministic and network-free.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Protocol, Sequence, Tuple

import httpx

from .errors import FixtureMiss, ProviderError
from .prompts import system_prompt

# Oldest turns beyond this window are left out of requests; the system prompt
# is never truncated.
MEMORY_WINDOW_TURNS = 20

TEMPERATURES = {"main": 0.7, "summarizer": 0.2}


class ModelTier(str, Enum):
    MAIN = "main"
    SUMMARIZER = "summarizer"


class GatewayMode(str, Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


@dataclass
class ChatSession:
    """Append-only transcript for one project; entry 0 is the system prompt."""

    project_id: str
    transcript: List[Tuple[str, str]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if not self.transcript:
            self.transcript.append(("system", system_prompt()))

    def window(self) -> List[Tuple[str, str]]:
        head = self.transcript[0]
        tail = self.transcript[1:]
        if len(tail) > MEMORY_WINDOW_TURNS:
            tail = tail[-MEMORY_WINDOW_TURNS:]
        return [head] + tail


class ChatProvider(Protocol):
    def complete(self, messages: Sequence[Dict[str, str]], model: str,
                 temperature: float) -> str: ...


class OpenAICompatProvider:
    """Chat-completions provider for any OpenAI-style HTTP endpoint."""

    def __init__(self, base_url: str, api_key: str = "", timeout: float = 120.0):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.timeout = timeout

    def complete(self, messages, model, temperature):
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {"model": model, "messages": list(messages), "temperature": temperature}
        try:
            resp = httpx.post(f"{self.base_url}/chat/completions", json=payload,
                              headers=headers, timeout=self.timeout)
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise ProviderError(f"model provider request failed: {exc}") from exc
        except (KeyError, IndexError, ValueError) as exc:
            raise ProviderError(f"unexpected provider response shape: {exc}") from exc


class ScriptedProvider:
    """Returns queued responses in order; used for tests and fixture recording."""

    def __init__(self, responses: Optional[Sequence[str]] = None):
        self.responses: List[str] = list(responses or [])
        self.calls: List[Dict] = []

    def push(self, *responses: str) -> "ScriptedProvider":
        self.responses.extend(responses)
        return self

    def complete(self, messages, model, temperature):
        self.calls.append({"messages": list(messages), "model": model,
                           "temperature": temperature})
        if not self.responses:
            raise ProviderError("scripted provider exhausted")
        return self.responses.pop(0)


class FailingProvider:
    """Raises on any use; injected in replay-mode tests to prove no network I/O."""

    def complete(self, messages, model, temperature):
        raise AssertionError("provider invoked in replay mode")


@dataclass
class FixtureEntry:
    digest: str
    tier: str
    prompt: str
    response: str
    recorded_at: str

    def to_doc(self) -> Dict[str, str]:
        return {"digest": self.digest, "tier": self.tier, "prompt": self.prompt,
                "response": self.response, "recordedAt": self.recorded_at}

    @classmethod
    def from_doc(cls, doc: Dict[str, str]) -> "FixtureEntry":
        return cls(digest=doc["digest"], tier=doc["tier"], prompt=doc["prompt"],
                   response=doc["response"], recorded_at=doc.get("recordedAt", ""))


class FixtureStore:
    """Digest-keyed response store; optionally backed by one JSON file per entry."""

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory) if directory else None
        self._entries: Dict[str, FixtureEntry] = {}
        self._lock = threading.Lock()
        if self.directory and self.directory.is_dir():
            for path in sorted(self.directory.glob("*.json")):
                entry = FixtureEntry.from_doc(json.loads(path.read_text(encoding="utf-8")))
                self._entries[entry.digest] = entry

    def get(self, digest: str) -> Optional[FixtureEntry]:
        with self._lock:
            return self._entries.get(digest)

    def put(self, entry: FixtureEntry) -> None:
        with self._lock:
            self._entries[entry.digest] = entry
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
            path = self.directory / f"{entry.digest}.json"
            tmp = path.with_suffix(".json.tmp")
            tmp.write_text(json.dumps(entry.to_doc(), indent=2, ensure_ascii=False),
                           encoding="utf-8")
            os.replace(tmp, path)

    def __len__(self) -> int:
        return len(self._entries)


def request_digest(tier: ModelTier, prompt: str,
                   window: Sequence[Tuple[str, str]]) -> str:
    """Stable digest of one request; canonical serialization keeps it identical
    across process restarts."""
    payload = json.dumps(
        {"tier": tier.value, "prompt": prompt, "window": [list(t) for t in window]},
        sort_keys=True, ensure_ascii=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class LlmGateway:
    def __init__(self, mode: GatewayMode = GatewayMode.REPLAY,
                 provider: Optional[ChatProvider] = None,
                 fixtures: Optional[FixtureStore] = None,
                 main_model: str = "main-model",
                 summarizer_model: str = "summarizer-model",
                 clock: Optional[Callable[[], datetime]] = None):
        self.mode = GatewayMode(mode)
        self.provider = provider
        self.fixtures = fixtures if fixtures is not None else FixtureStore()
        self.models = {ModelTier.MAIN: main_model, ModelTier.SUMMARIZER: summarizer_model}
        self.clock = clock or (lambda: datetime.now(timezone.utc))
        # (tier, prompt) per complete(), for tier-routing assertions in tests
        self.call_log: List[Tuple[ModelTier, str]] = []

    @classmethod
    def from_env(cls, env: Optional[Dict[str, str]] = None) -> "LlmGateway":
        env = dict(os.environ if env is None else env)
        mode = GatewayMode(env.get("LLM_MODE", "replay"))
        fixture_dir = env.get("FIXTURE_DIR")
        fixtures = FixtureStore(Path(fixture_dir)) if fixture_dir else FixtureStore()
        provider: Optional[ChatProvider] = None
        if mode != GatewayMode.REPLAY:
            provider = OpenAICompatProvider(env.get("LLM_BASE_URL", ""),
                                            env.get("LLM_API_KEY", ""))
        return cls(mode=mode, provider=provider, fixtures=fixtures,
                   main_model=env.get("LLM_MAIN_MODEL", "main-model"),
                   summarizer_model=env.get("LLM_SUMMARIZER_MODEL", "summarizer-model"))

    def new_session(self, project_id: str) -> ChatSession:
        return ChatSession(project_id=project_id)

    def complete(self, session: ChatSession, prompt: str, tier: ModelTier) -> str:
        if not prompt:
            raise ProviderError("empty prompt")
        tier = ModelTier(tier)
        with session.lock:
            window = session.window()
            digest = request_digest(tier, prompt, window)
            self.call_log.append((tier, prompt))
            if self.mode == GatewayMode.REPLAY:
                entry = self.fixtures.get(digest)
                if entry is None:
                    raise FixtureMiss(f"no fixture for digest {digest}", digest=digest)
                text = entry.response
            else:
                if self.provider is None:
                    raise ProviderError("no provider configured")
                messages = [{"role": role, "content": content} for role, content in window]
                messages.append({"role": "user", "content": prompt})
                text = self.provider.complete(messages, self.models[tier],
                                              TEMPERATURES[tier.value])
                if self.mode == GatewayMode.RECORD:
                    self.fixtures.put(FixtureEntry(
                        digest=digest, tier=tier.value, prompt=prompt, response=text,
                        recorded_at=self.clock().isoformat()))
            session.transcript.append(("user", prompt))
            session.transcript.append(("assistant", text))
            return text
