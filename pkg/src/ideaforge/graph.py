"""Project state: typed facet nodes, directed edges, paper references, briefs,
chat history, and an append-only action log.

A project is the single unit of persistence (one versioned JSON document) and
of locking (one exclusive lock serializes all mutations). Every mutation bumps
the revision counter exactly once and appends one log entry.
"""

from __future__ import annotations

import json
import math
import random
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .errors import (CorruptDocument, DuplicateEdge, EmptySelection, SelfLoop,
                     UnknownBrief, UnknownEdge, UnknownNode)
from .papers import PaperCollection, PaperRecord
from .prompts import labels

SCHEMA_VERSION = 1


class FacetType(str, Enum):
    PROBLEM_DESCRIPTION_AND_RQ = labels.PROBLEM_DESCRIPTION_AND_RQ
    PROPOSED_DESIGN_AND_SOLUTION = labels.PROPOSED_DESIGN_AND_SOLUTION
    EVALUATION_METHOD = labels.EVALUATION_METHOD
    CONTRIBUTION_AND_IMPACT = labels.CONTRIBUTION_AND_IMPACT

    @classmethod
    def from_label(cls, label: str) -> Optional["FacetType"]:
        canonical = labels.normalize_facet_label(label)
        return cls(canonical) if canonical else None


# Canonical facet order: problem first, contribution last.
FACET_ORDER: Tuple[FacetType, ...] = (
    FacetType.PROBLEM_DESCRIPTION_AND_RQ,
    FacetType.PROPOSED_DESIGN_AND_SOLUTION,
    FacetType.EVALUATION_METHOD,
    FacetType.CONTRIBUTION_AND_IMPACT,
)


class CreatedBy(str, Enum):
    USER = "user"
    GENERATED = "generated"


class Actor(str, Enum):
    USER = "user"
    SYSTEM = "system"


class SuggestionAction(str, Enum):
    REGENERATE_CURRENT_IDEA_FACET = labels.REGENERATE_CURRENT_IDEA_FACET
    GENERATE_ALTERNATIVES = labels.GENERATE_ALTERNATIVES
    GENERATE_NEW_IDEA_FACETS = labels.GENERATE_NEW_IDEA_FACETS


class IdFactory:
    """Random 128-bit identifiers as lowercase hex; seedable for replay."""

    def __init__(self, seed: Optional[int] = None):
        self._rng = random.Random(seed) if seed is not None else random.SystemRandom()

    def __call__(self) -> str:
        return f"{self._rng.getrandbits(128):032x}"


class TickClock:
    """Deterministic clock: starts at a fixed instant, advances per call."""

    def __init__(self, start: Optional[datetime] = None, step_seconds: float = 1.0):
        self._current = start or datetime(2026, 1, 1, tzinfo=timezone.utc)
        self._step = step_seconds

    def __call__(self) -> datetime:
        now = self._current
        self._current = now + timedelta(seconds=self._step)
        return now


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _parse_timestamp(value: str) -> datetime:
    try:
        return datetime.fromisoformat(value.replace("Z", "+00:00"))
    except (TypeError, ValueError) as exc:
        raise CorruptDocument(f"bad timestamp: {value!r}") from exc


@dataclass
class Position:
    x: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        self.x = float(self.x)
        self.y = float(self.y)

    def to_doc(self) -> Dict[str, float]:
        return {"x": self.x, "y": self.y}

    @classmethod
    def from_doc(cls, doc) -> "Position":
        if (not isinstance(doc, dict) or
                not all(isinstance(doc.get(k), (int, float)) and math.isfinite(doc.get(k))
                        for k in ("x", "y"))):
            raise CorruptDocument(f"bad position: {doc!r}")
        return cls(x=float(doc["x"]), y=float(doc["y"]))


@dataclass
class SuggestionItem:
    idea_facet: FacetType
    action: SuggestionAction
    suggestion: str

    def to_doc(self) -> Dict:
        return {"ideaFacet": self.idea_facet.value, "action": self.action.value,
                "suggestion": self.suggestion}

    @classmethod
    def from_doc(cls, doc: Dict) -> "SuggestionItem":
        facet = FacetType.from_label(doc.get("ideaFacet", ""))
        if facet is None:
            raise CorruptDocument(f"bad suggestion facet: {doc.get('ideaFacet')!r}")
        try:
            action = SuggestionAction(doc.get("action"))
        except ValueError as exc:
            raise CorruptDocument(f"bad suggestion action: {doc.get('action')!r}") from exc
        if not doc.get("suggestion"):
            raise CorruptDocument("suggestion text must be non-empty")
        return cls(idea_facet=facet, action=action, suggestion=doc["suggestion"])


@dataclass
class SuggestionSet:
    items: List[SuggestionItem]
    generated_at_revision: int

    def to_doc(self) -> Dict:
        return {"items": [i.to_doc() for i in self.items],
                "generatedAtRevision": self.generated_at_revision}

    @classmethod
    def from_doc(cls, doc: Dict) -> "SuggestionSet":
        items = [SuggestionItem.from_doc(d) for d in doc.get("items", [])]
        if not items:
            raise CorruptDocument("suggestion set must have at least one item")
        return cls(items=items, generated_at_revision=int(doc.get("generatedAtRevision", 0)))


@dataclass
class AnalysisSection:
    """One paper-section-to-idea connection (node-level analysis entry)."""

    section_title: str
    paper_title: str
    key_section: str
    connection_to_ideas: str
    corpus_id: Optional[str] = None
    dangling: bool = False

    def to_doc(self) -> Dict:
        return {"sectionTitle": self.section_title, "paperTitle": self.paper_title,
                "keySection": self.key_section,
                "connectionToIdeas": self.connection_to_ideas,
                "corpusId": self.corpus_id, "dangling": self.dangling}

    @classmethod
    def from_doc(cls, doc: Dict) -> "AnalysisSection":
        return cls(section_title=doc.get("sectionTitle", ""),
                   paper_title=doc.get("paperTitle", ""),
                   key_section=doc.get("keySection", ""),
                   connection_to_ideas=doc.get("connectionToIdeas", ""),
                   corpus_id=doc.get("corpusId"),
                   dangling=bool(doc.get("dangling", False)))


@dataclass
class AnalysisItem(AnalysisSection):
    """Canvas-level analysis entry; next steps are draggable onto the canvas."""

    next_steps: List[str] = field(default_factory=list)

    def to_doc(self) -> Dict:
        doc = super().to_doc()
        doc["nextSteps"] = list(self.next_steps)
        return doc


@dataclass
class NodeAnalysis:
    sections: List[AnalysisSection]
    suggestions: List[str]
    generated_at_revision: int = 0

    def to_doc(self) -> Dict:
        return {"mostRelevantSections": [s.to_doc() for s in self.sections],
                "suggestions": list(self.suggestions),
                "generatedAtRevision": self.generated_at_revision}

    @classmethod
    def from_doc(cls, doc: Dict) -> "NodeAnalysis":
        sections = [AnalysisSection.from_doc(d) for d in doc.get("mostRelevantSections", [])]
        suggestions = list(doc.get("suggestions", []))
        if not sections or not suggestions:
            raise CorruptDocument("node analysis requires sections and suggestions")
        return cls(sections=sections, suggestions=suggestions,
                   generated_at_revision=int(doc.get("generatedAtRevision", 0)))


@dataclass
class IdeaNode:
    id: str
    facet: FacetType
    title: str
    content: str
    position: Position
    created_by: CreatedBy = CreatedBy.USER
    # revision of the last title/content/facet edit; staleness comparisons
    # for caches and edge assessments key off this
    content_revision: int = 0
    suggestion_cache: Optional[SuggestionSet] = None
    node_analysis_cache: Optional[NodeAnalysis] = None

    def to_doc(self) -> Dict:
        return {
            "id": self.id,
            "facet": self.facet.value,
            "title": self.title,
            "content": self.content,
            "position": self.position.to_doc(),
            "createdBy": self.created_by.value,
            "contentRevision": self.content_revision,
            "suggestionCache": self.suggestion_cache.to_doc() if self.suggestion_cache else None,
            "nodeAnalysisCache": (self.node_analysis_cache.to_doc()
                                  if self.node_analysis_cache else None),
        }

    @classmethod
    def from_doc(cls, doc: Dict) -> "IdeaNode":
        if not isinstance(doc, dict) or not doc.get("id"):
            raise CorruptDocument("node requires an id")
        facet = FacetType.from_label(doc.get("facet", ""))
        if facet is None:
            raise CorruptDocument(f"unknown facet: {doc.get('facet')!r}")
        try:
            created_by = CreatedBy(doc.get("createdBy", "user"))
        except ValueError as exc:
            raise CorruptDocument(f"unknown createdBy: {doc.get('createdBy')!r}") from exc
        cache_doc = doc.get("suggestionCache")
        analysis_doc = doc.get("nodeAnalysisCache")
        return cls(
            id=str(doc["id"]),
            facet=facet,
            title=doc.get("title", ""),
            content=doc.get("content", ""),
            position=Position.from_doc(doc.get("position", {"x": 0, "y": 0})),
            created_by=created_by,
            content_revision=int(doc.get("contentRevision", 0)),
            suggestion_cache=SuggestionSet.from_doc(cache_doc) if cache_doc else None,
            node_analysis_cache=NodeAnalysis.from_doc(analysis_doc) if analysis_doc else None,
        )


@dataclass
class IdeaEdge:
    id: str
    source: str
    target: str
    strength: Optional[float] = None
    suggestion: Optional[str] = None
    assessed_at_revision: Optional[int] = None

    def to_doc(self) -> Dict:
        return {"id": self.id, "source": self.source, "target": self.target,
                "strength": self.strength, "suggestion": self.suggestion,
                "assessedAtRevision": self.assessed_at_revision}

    @classmethod
    def from_doc(cls, doc: Dict) -> "IdeaEdge":
        if not isinstance(doc, dict) or not doc.get("id"):
            raise CorruptDocument("edge requires an id")
        strength = doc.get("strength")
        if strength is not None:
            if not isinstance(strength, (int, float)) or not 0.0 <= float(strength) <= 1.0:
                raise CorruptDocument(f"edge strength out of [0,1]: {strength!r}")
            strength = float(strength)
        assessed = doc.get("assessedAtRevision")
        return cls(id=str(doc["id"]), source=str(doc.get("source", "")),
                   target=str(doc.get("target", "")), strength=strength,
                   suggestion=doc.get("suggestion"),
                   assessed_at_revision=int(assessed) if assessed is not None else None)


@dataclass
class BriefReference:
    citation_id: int
    corpus_id: Optional[str]
    paper_title: str
    dangling: bool = False

    def to_doc(self) -> Dict:
        return {"citationId": self.citation_id, "corpusId": self.corpus_id,
                "paperTitle": self.paper_title, "dangling": self.dangling}

    @classmethod
    def from_doc(cls, doc: Dict) -> "BriefReference":
        cid = doc.get("citationId")
        if not isinstance(cid, int) or cid < 1:
            raise CorruptDocument(f"citationId must be a positive integer: {cid!r}")
        return cls(citation_id=cid, corpus_id=doc.get("corpusId"),
                   paper_title=doc.get("paperTitle", ""),
                   dangling=bool(doc.get("dangling", False)))


@dataclass
class ResearchBrief:
    id: str
    title: str
    problem_description: str
    proposed_design: str
    evaluation_method: str
    contribution_impact: str
    literature_references: List[BriefReference] = field(default_factory=list)
    source_node_ids: List[str] = field(default_factory=list)
    source_edge_ids: List[str] = field(default_factory=list)

    def sections(self) -> List[str]:
        return [self.problem_description, self.proposed_design,
                self.evaluation_method, self.contribution_impact]

    def to_doc(self) -> Dict:
        return {
            "id": self.id,
            "title": self.title,
            "problemDescription": self.problem_description,
            "proposedDesign": self.proposed_design,
            "evaluationMethod": self.evaluation_method,
            "contributionImpact": self.contribution_impact,
            "literatureReferences": [r.to_doc() for r in self.literature_references],
            "sourceNodeIds": list(self.source_node_ids),
            "sourceEdgeIds": list(self.source_edge_ids),
        }

    @classmethod
    def from_doc(cls, doc: Dict) -> "ResearchBrief":
        if not isinstance(doc, dict) or not doc.get("id"):
            raise CorruptDocument("brief requires an id")
        return cls(
            id=str(doc["id"]),
            title=doc.get("title", ""),
            problem_description=doc.get("problemDescription", ""),
            proposed_design=doc.get("proposedDesign", ""),
            evaluation_method=doc.get("evaluationMethod", ""),
            contribution_impact=doc.get("contributionImpact", ""),
            literature_references=[BriefReference.from_doc(d)
                                   for d in doc.get("literatureReferences", [])],
            source_node_ids=[str(n) for n in doc.get("sourceNodeIds", [])],
            source_edge_ids=[str(e) for e in doc.get("sourceEdgeIds", [])],
        )


@dataclass
class ActionLogEntry:
    timestamp: datetime
    actor: Actor
    action: str
    payload: Dict = field(default_factory=dict)

    def to_doc(self) -> Dict:
        return {"timestamp": self.timestamp.isoformat(), "actor": self.actor.value,
                "action": self.action, "payload": self.payload}

    @classmethod
    def from_doc(cls, doc: Dict) -> "ActionLogEntry":
        try:
            actor = Actor(doc.get("actor"))
        except ValueError as exc:
            raise CorruptDocument(f"unknown actor: {doc.get('actor')!r}") from exc
        if not isinstance(doc.get("action"), str) or not doc["action"]:
            raise CorruptDocument("log entry requires an action kind")
        payload = doc.get("payload", {})
        if not isinstance(payload, dict):
            raise CorruptDocument("log payload must be an object")
        return cls(timestamp=_parse_timestamp(doc.get("timestamp", "")),
                   actor=actor, action=doc["action"], payload=payload)


@dataclass
class ChatTurn:
    role: str
    text: str

    def to_doc(self) -> Dict:
        return {"role": self.role, "text": self.text}

    @classmethod
    def from_doc(cls, doc: Dict) -> "ChatTurn":
        role = doc.get("role")
        if role not in ("user", "assistant"):
            raise CorruptDocument(f"unknown chat role: {role!r}")
        return cls(role=role, text=doc.get("text", ""))


@dataclass
class LitSummary:
    summary: str
    corpus_ids: List[str]
    generated_at_revision: int = 0

    def to_doc(self) -> Dict:
        return {"summary": self.summary, "corpusIds": list(self.corpus_ids),
                "generatedAtRevision": self.generated_at_revision}

    @classmethod
    def from_doc(cls, doc: Dict) -> "LitSummary":
        return cls(summary=doc.get("summary", ""),
                   corpus_ids=[str(c) for c in doc.get("corpusIds", [])],
                   generated_at_revision=int(doc.get("generatedAtRevision", 0)))


@dataclass
class Neighborhood:
    """A node plus everything one edge away, in creation order."""

    node: IdeaNode
    neighbors: List[IdeaNode]
    edges: List[IdeaEdge]

    @property
    def nodes(self) -> List[IdeaNode]:
        return [self.node] + self.neighbors


@dataclass
class FacetBundle:
    """Brief-selection subgraph: nodes grouped by facet in canonical order,
    plus the edges induced by the selection."""

    groups: Dict[FacetType, List[IdeaNode]]
    edges: List[IdeaEdge]

    @property
    def nodes(self) -> List[IdeaNode]:
        out: List[IdeaNode] = []
        for facet in FACET_ORDER:
            out.extend(self.groups[facet])
        return out


class Project:
    """Mutable project aggregate guarded by one exclusive lock."""

    def __init__(self, name: str, project_id: Optional[str] = None,
                 id_factory: Optional[IdFactory] = None,
                 clock: Optional[Callable[[], datetime]] = None,
                 collection: Optional[PaperCollection] = None):
        self.ids = id_factory or IdFactory()
        self.clock = clock or utc_now
        self.id = project_id or self.ids()
        self.name = name
        self.nodes: Dict[str, IdeaNode] = {}
        self.edges: Dict[str, IdeaEdge] = {}
        self.collection = collection if collection is not None else PaperCollection()
        self.briefs: List[ResearchBrief] = []
        self.chat_history: List[ChatTurn] = []
        self.action_log: List[ActionLogEntry] = []
        self.revision = 0
        self.lit_summary_cache: Optional[LitSummary] = None
        self.lock = threading.RLock()

    # --- internals ---

    def _mutate(self, action: str, payload: Dict, actor: Actor = Actor.USER) -> None:
        """Single revision bump plus one log entry; call while holding the lock."""
        self.revision += 1
        timestamp = self.clock()
        if self.action_log and timestamp < self.action_log[-1].timestamp:
            timestamp = self.action_log[-1].timestamp
        self.action_log.append(ActionLogEntry(timestamp=timestamp, actor=actor,
                                              action=action, payload=payload))

    # --- lookups ---

    @property
    def paper_ids(self) -> List[str]:
        return self.collection.ids

    def node(self, node_id: str) -> IdeaNode:
        node = self.nodes.get(node_id)
        if node is None:
            raise UnknownNode(f"no node {node_id}", node_id=node_id)
        return node

    def edge(self, edge_id: str) -> IdeaEdge:
        edge = self.edges.get(edge_id)
        if edge is None:
            raise UnknownEdge(f"no edge {edge_id}", edge_id=edge_id)
        return edge

    def brief(self, brief_id: str) -> ResearchBrief:
        for brief in self.briefs:
            if brief.id == brief_id:
                return brief
        raise UnknownBrief(f"no brief {brief_id}", brief_id=brief_id)

    def edge_between(self, source: str, target: str) -> Optional[IdeaEdge]:
        for edge in self.edges.values():
            if edge.source == source and edge.target == target:
                return edge
        return None

    # --- canvas mutations ---

    def create_node(self, facet: FacetType = FacetType.PROBLEM_DESCRIPTION_AND_RQ,
                    title: str = "", content: str = "",
                    position: Optional[Position] = None,
                    created_by: CreatedBy = CreatedBy.USER,
                    actor: Actor = Actor.USER) -> IdeaNode:
        with self.lock:
            node = IdeaNode(id=self.ids(), facet=FacetType(facet), title=title,
                            content=content, position=position or Position(),
                            created_by=created_by,
                            content_revision=self.revision + 1)
            self.nodes[node.id] = node
            self._mutate("create_node", {"nodeId": node.id, "facet": node.facet.value,
                                         "createdBy": created_by.value}, actor)
            return node

    def update_node(self, node_id: str, title: Optional[str] = None,
                    content: Optional[str] = None, facet: Optional[FacetType] = None,
                    position: Optional[Position] = None,
                    actor: Actor = Actor.USER) -> IdeaNode:
        with self.lock:
            node = self.node(node_id)
            changed = {}
            if title is not None and title != node.title:
                node.title = title
                changed["title"] = True
            if content is not None and content != node.content:
                node.content = content
                changed["content"] = True
            if facet is not None and FacetType(facet) != node.facet:
                node.facet = FacetType(facet)
                changed["facet"] = node.facet.value
            if position is not None:
                node.position = position
                changed["position"] = True
            if changed and set(changed) != {"position"}:
                node.content_revision = self.revision + 1
            self._mutate("update_node", {"nodeId": node_id, "changed": sorted(changed)},
                         actor)
            return node

    def delete_node(self, node_id: str, actor: Actor = Actor.USER) -> None:
        with self.lock:
            self.node(node_id)
            removed_edges = [e.id for e in self.edges.values()
                             if e.source == node_id or e.target == node_id]
            for edge_id in removed_edges:
                del self.edges[edge_id]
            for brief in self.briefs:
                brief.source_node_ids = [n for n in brief.source_node_ids if n != node_id]
                brief.source_edge_ids = [e for e in brief.source_edge_ids
                                         if e not in removed_edges]
            del self.nodes[node_id]
            self._mutate("delete_node", {"nodeId": node_id,
                                         "cascadedEdges": removed_edges}, actor)

    def link_nodes(self, source: str, target: str, actor: Actor = Actor.USER) -> IdeaEdge:
        with self.lock:
            if source == target:
                raise SelfLoop(f"cannot link node {source} to itself")
            self.node(source)
            self.node(target)
            if self.edge_between(source, target) is not None:
                raise DuplicateEdge(f"edge {source} -> {target} already exists")
            edge = IdeaEdge(id=self.ids(), source=source, target=target)
            self.edges[edge.id] = edge
            self._mutate("link_nodes", {"edgeId": edge.id, "source": source,
                                        "target": target}, actor)
            return edge

    def delete_edge(self, edge_id: str, actor: Actor = Actor.USER) -> None:
        with self.lock:
            self.edge(edge_id)
            del self.edges[edge_id]
            for brief in self.briefs:
                brief.source_edge_ids = [e for e in brief.source_edge_ids if e != edge_id]
            self._mutate("delete_edge", {"edgeId": edge_id}, actor)

    def apply_edge_assessment(self, edge_id: str, strength: float, suggestion: str,
                              assessed_at_revision: Optional[int] = None) -> IdeaEdge:
        with self.lock:
            edge = self.edge(edge_id)
            edge.strength = min(1.0, max(0.0, float(strength)))
            edge.suggestion = suggestion
            edge.assessed_at_revision = (assessed_at_revision
                                         if assessed_at_revision is not None
                                         else self.revision)
            self._mutate("assess_edge", {"edgeId": edge_id, "strength": edge.strength},
                         Actor.USER)
            return edge

    # --- caches ---

    def cache_suggestions(self, node_id: str, suggestions: SuggestionSet) -> None:
        with self.lock:
            self.node(node_id).suggestion_cache = suggestions
            self._mutate("get_ai_suggestions", {"nodeId": node_id,
                                                "count": len(suggestions.items)},
                         Actor.USER)

    def cache_node_analysis(self, node_id: str, analysis: NodeAnalysis) -> None:
        with self.lock:
            self.node(node_id).node_analysis_cache = analysis
            self._mutate("node_lit_review", {"nodeId": node_id}, Actor.USER)

    def cache_lit_summary(self, summary: LitSummary) -> None:
        with self.lock:
            self.lit_summary_cache = summary
            self._mutate("lit_review_summary", {"corpusIds": list(summary.corpus_ids)},
                         Actor.USER)

    def suggestion_cache_stale(self, node_id: str) -> bool:
        node = self.node(node_id)
        cache = node.suggestion_cache
        return cache is not None and node.content_revision > cache.generated_at_revision

    def edge_assessment_stale(self, edge_id: str) -> bool:
        edge = self.edge(edge_id)
        if edge.assessed_at_revision is None:
            return False
        latest = max(self.node(edge.source).content_revision,
                     self.node(edge.target).content_revision)
        return latest > edge.assessed_at_revision

    # --- papers ---

    def add_paper(self, record: PaperRecord, actor: Actor = Actor.USER) -> PaperRecord:
        with self.lock:
            self.collection.add(record)
            self._mutate("add_paper", {"corpusId": record.corpus_id,
                                       "ingestState": record.ingest_state.value}, actor)
            return record

    def remove_paper(self, corpus_id: str, actor: Actor = Actor.USER) -> None:
        with self.lock:
            self.collection.remove(corpus_id)
            self._mutate("remove_paper", {"corpusId": corpus_id}, actor)

    # --- briefs and chat ---

    def add_brief(self, brief: ResearchBrief) -> ResearchBrief:
        with self.lock:
            self.briefs.append(brief)
            self._mutate("generate_research_brief",
                         {"briefId": brief.id,
                          "sourceNodeIds": list(brief.source_node_ids)},
                         Actor.USER)
            return brief

    def delete_brief(self, brief_id: str, actor: Actor = Actor.USER) -> None:
        with self.lock:
            brief = self.brief(brief_id)
            self.briefs.remove(brief)
            self._mutate("delete_brief", {"briefId": brief_id}, actor)

    def append_chat(self, user_text: str, assistant_text: str) -> None:
        with self.lock:
            self.chat_history.append(ChatTurn("user", user_text))
            self.chat_history.append(ChatTurn("assistant", assistant_text))
            self._mutate("qa_exchange", {"chars": len(assistant_text)}, Actor.USER)

    def rename(self, name: str, actor: Actor = Actor.USER) -> None:
        with self.lock:
            self.name = name
            self._mutate("rename_project", {"name": name}, actor)

    def log_action(self, action: str, payload: Optional[Dict] = None,
                   actor: Actor = Actor.SYSTEM) -> None:
        """Record an event with no other state change (still bumps revision)."""
        with self.lock:
            self._mutate(action, payload or {}, actor)

    # --- context extraction ---

    def neighborhood(self, node_id: str) -> Neighborhood:
        node = self.node(node_id)
        neighbor_ids = []
        edges = []
        for edge in self.edges.values():
            if edge.source == node_id:
                neighbor_ids.append(edge.target)
                edges.append(edge)
            elif edge.target == node_id:
                neighbor_ids.append(edge.source)
                edges.append(edge)
        wanted = set(neighbor_ids)
        neighbors = [n for n in self.nodes.values() if n.id in wanted]
        return Neighborhood(node=node, neighbors=neighbors, edges=edges)

    def select_brief_subgraph(self, node_ids: Iterable[str]) -> FacetBundle:
        selected = list(dict.fromkeys(node_ids))
        if not selected:
            raise EmptySelection("brief selection must include at least one node")
        for node_id in selected:
            self.node(node_id)
        chosen = set(selected)
        groups: Dict[FacetType, List[IdeaNode]] = {facet: [] for facet in FACET_ORDER}
        for node in self.nodes.values():
            if node.id in chosen:
                groups[node.facet].append(node)
        edges = [e for e in self.edges.values()
                 if e.source in chosen and e.target in chosen]
        return FacetBundle(groups=groups, edges=edges)

    # --- persistence ---

    def to_document(self) -> Dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "id": self.id,
            "name": self.name,
            "revision": self.revision,
            "nodes": [n.to_doc() for n in self.nodes.values()],
            "edges": [e.to_doc() for e in self.edges.values()],
            "papers": self.collection.to_doc(),
            "paperIds": self.paper_ids,
            "briefs": [b.to_doc() for b in self.briefs],
            "chatHistory": [t.to_doc() for t in self.chat_history],
            "actionLog": [e.to_doc() for e in self.action_log],
            "litSummaryCache": (self.lit_summary_cache.to_doc()
                                if self.lit_summary_cache else None),
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, Project):
            return NotImplemented
        return self.to_document() == other.to_document()


def save_project(project: Project) -> str:
    """Canonical JSON document: sorted keys, two-space indent, trailing newline."""
    with project.lock:
        doc = project.to_document()
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


_INDEX_GROUP = re.compile(r"\[(\d+(?:\s*,\s*\d+)*)\]")

# Bracketed numbers above this are years or identifiers, not citation indices.
MAX_CITATION_INDEX = 99


def cited_indices(text: str) -> List[int]:
    """Bracketed in-text citation indices like [1] or [2, 5], in order."""
    out: List[int] = []
    for match in _INDEX_GROUP.finditer(text or ""):
        for token in match.group(1).split(","):
            value = int(token.strip())
            if 1 <= value <= MAX_CITATION_INDEX and value not in out:
                out.append(value)
    return out


def load_project(document, id_factory: Optional[IdFactory] = None,
                 clock: Optional[Callable[[], datetime]] = None) -> Project:
    """Parse and validate a project document; raises CorruptDocument on any
    schema, type, or referential-integrity violation."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise CorruptDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise CorruptDocument("project document must be a JSON object")
    if "schemaVersion" not in document:
        raise CorruptDocument("missing schemaVersion")
    if document["schemaVersion"] != SCHEMA_VERSION:
        raise CorruptDocument(f"unsupported schemaVersion: {document['schemaVersion']!r}")
    if not isinstance(document.get("id"), str) or not document["id"]:
        raise CorruptDocument("project id must be a non-empty string")
    if not isinstance(document.get("name"), str):
        raise CorruptDocument("project name must be a string")
    revision = document.get("revision")
    if not isinstance(revision, int) or isinstance(revision, bool) or revision < 0:
        raise CorruptDocument(f"revision must be a non-negative integer: {revision!r}")

    project = Project(name=document["name"], project_id=document["id"],
                      id_factory=id_factory, clock=clock)
    project.revision = revision

    for node_doc in _expect_list(document, "nodes"):
        node = IdeaNode.from_doc(node_doc)
        if node.id in project.nodes:
            raise CorruptDocument(f"duplicate node id {node.id}")
        project.nodes[node.id] = node

    seen_pairs = set()
    for edge_doc in _expect_list(document, "edges"):
        edge = IdeaEdge.from_doc(edge_doc)
        if edge.id in project.edges:
            raise CorruptDocument(f"duplicate edge id {edge.id}")
        if edge.source == edge.target:
            raise CorruptDocument(f"edge {edge.id} is a self-loop")
        if edge.source not in project.nodes or edge.target not in project.nodes:
            raise CorruptDocument(f"edge {edge.id} references a missing node")
        if (edge.source, edge.target) in seen_pairs:
            raise CorruptDocument(f"duplicate edge for pair {edge.source} -> {edge.target}")
        seen_pairs.add((edge.source, edge.target))
        project.edges[edge.id] = edge

    project.collection = PaperCollection.from_doc(_expect_list(document, "papers"))
    if document.get("paperIds") != project.collection.ids:
        raise CorruptDocument("paperIds does not match the papers list")

    seen_briefs = set()
    for brief_doc in _expect_list(document, "briefs"):
        brief = ResearchBrief.from_doc(brief_doc)
        if brief.id in seen_briefs:
            raise CorruptDocument(f"duplicate brief id {brief.id}")
        seen_briefs.add(brief.id)
        for node_id in brief.source_node_ids:
            if node_id not in project.nodes:
                raise CorruptDocument(f"brief {brief.id} references missing node {node_id}")
        for edge_id in brief.source_edge_ids:
            if edge_id not in project.edges:
                raise CorruptDocument(f"brief {brief.id} references missing edge {edge_id}")
        for ref in brief.literature_references:
            if ref.corpus_id is not None and ref.corpus_id not in project.collection:
                raise CorruptDocument(
                    f"brief {brief.id} cites uncollected paper {ref.corpus_id}")
        project.briefs.append(brief)

    project.chat_history = [ChatTurn.from_doc(d) for d in _expect_list(document, "chatHistory")]

    last_ts = None
    for entry_doc in _expect_list(document, "actionLog"):
        entry = ActionLogEntry.from_doc(entry_doc)
        if last_ts is not None and entry.timestamp < last_ts:
            raise CorruptDocument("action log timestamps decrease")
        last_ts = entry.timestamp
        project.action_log.append(entry)

    cache_doc = document.get("litSummaryCache")
    if cache_doc is not None:
        cache = LitSummary.from_doc(cache_doc)
        for corpus_id in cache.corpus_ids:
            if corpus_id not in project.collection:
                raise CorruptDocument(
                    f"literature summary cache cites uncollected paper {corpus_id}")
        project.lit_summary_cache = cache

    return project


def _expect_list(document: Dict, key: str) -> List:
    value = document.get(key)
    if not isinstance(value, list):
        raise CorruptDocument(f"{key} must be an array")
    return value
