"""Orchestration of every literature-grounded generation.

Each operation follows the same shape: snapshot project state, render a
template, call the gateway (no project lock held across the call), parse and
police the reply (cardinality clamps, facet checks, grounding checks), then
commit results back to the project. Responses that violate their schema get
one policy repair (range clamp, facet override) or one model re-ask before
the operation fails.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .errors import (EmptyCollection, EmptyFacetContent, EmptyNodeContent,
                     EmptyPrompt, FixtureMiss, MalformedResponse, ProviderError,
                     SchemaViolation, UnknownAction)
from .gateway import ChatSession, LlmGateway, ModelTier
from .graph import (Actor, AnalysisItem, AnalysisSection, BriefReference, CreatedBy,
                    FACET_ORDER, FacetType, IdeaEdge, IdeaNode, LitSummary,
                    NodeAnalysis, Position, Project, ResearchBrief,
                    SuggestionAction, SuggestionItem, SuggestionSet, cited_indices)
from .papers import REASK_PROMPT, PaperCollection, PaperLibrary, PaperRecord
from .prompts import (ContextBundle, TemplateId, citation_ids, dangling_ids,
                      format_ideas_context, format_node_entry,
                      normalize_action_label, normalize_facet_label,
                      parse_json_response, render_prompt, validate_document)

# Auto-placement: children one row below the source, fanned horizontally;
# alternatives beside the source on the same row.
ROW_DY = 180.0
FAN_DX = 260.0
CHAIN_DY = 180.0

MAX_ALTERNATIVES = 3
MAX_NEW_FACETS = 3
MAX_SUGGESTION_ITEMS = 5
MAX_ANALYSIS_SECTIONS = 3
MAX_ANALYSIS_SUGGESTIONS = 2


@dataclass
class GenerationAction:
    """What generate_nodes should do: refine in place, fan out alternatives,
    or expand into a chosen facet."""

    kind: str  # "regenerate" | "alternatives" | "new_facet"
    facet: Optional[FacetType] = None

    @classmethod
    def regenerate(cls) -> "GenerationAction":
        return cls(kind="regenerate")

    @classmethod
    def alternatives(cls) -> "GenerationAction":
        return cls(kind="alternatives")

    @classmethod
    def new_facet(cls, facet: FacetType) -> "GenerationAction":
        return cls(kind="new_facet", facet=FacetType(facet))

    @classmethod
    def parse(cls, label: str) -> "GenerationAction":
        """Accepts the suggestion-action vocabulary or a facet label."""
        action = normalize_action_label(label or "")
        if action == SuggestionAction.REGENERATE_CURRENT_IDEA_FACET.value:
            return cls.regenerate()
        if action == SuggestionAction.GENERATE_ALTERNATIVES.value:
            return cls.alternatives()
        facet_label = normalize_facet_label(label or "")
        if facet_label:
            return cls.new_facet(FacetType(facet_label))
        raise UnknownAction(f"unknown generation action: {label!r}")

    def to_take(self, source_facet: FacetType) -> str:
        if self.kind == "regenerate":
            return SuggestionAction.REGENERATE_CURRENT_IDEA_FACET.value
        if self.kind == "alternatives":
            return SuggestionAction.GENERATE_ALTERNATIVES.value
        return self.facet.value

    def expected_facet(self, source_facet: FacetType) -> FacetType:
        return self.facet if self.kind == "new_facet" else source_facet

    def max_nodes(self) -> int:
        return 1 if self.kind == "regenerate" else MAX_ALTERNATIVES


@dataclass
class GeneratedNode:
    idea_facet: FacetType
    title: str
    content: str

    def to_doc(self) -> Dict:
        return {"ideaFacet": self.idea_facet.value, "title": self.title,
                "content": self.content}


@dataclass
class GenerationResult:
    generated: List[GeneratedNode]
    nodes: List[IdeaNode]
    edges: List[IdeaEdge]
    rejected: List[Dict] = field(default_factory=list)


@dataclass
class EdgeAssessment:
    connection_strength: float
    suggestion: str
    assessed_at_revision: Optional[int] = None

    def to_doc(self) -> Dict:
        return {"connectionStrength": self.connection_strength,
                "suggestion": self.suggestion,
                "assessedAtRevision": self.assessed_at_revision}


@dataclass
class QaAnswer:
    response: str
    dangling: List[str] = field(default_factory=list)


@dataclass
class ChainResult:
    nodes: List[IdeaNode]
    edges: List[IdeaEdge]
    completed: bool
    failed_facet: Optional[FacetType] = None
    error_code: Optional[str] = None


class SuggestionService:
    def __init__(self, gateway: LlmGateway, library: Optional[PaperLibrary] = None):
        self.gateway = gateway
        self.library = library
        self._sessions: Dict[str, ChatSession] = {}
        self._sessions_lock = threading.Lock()

    def session(self, project: Project) -> ChatSession:
        with self._sessions_lock:
            session = self._sessions.get(project.id)
            if session is None:
                session = self.gateway.new_session(project.id)
                self._sessions[project.id] = session
            return session

    # --- gateway plumbing ---

    def _ask_parsed(self, project: Project, prompt: str, template_id: TemplateId,
                    tier: ModelTier = ModelTier.MAIN,
                    on_violation: Optional[Callable[[SchemaViolation], Optional[dict]]] = None):
        """complete() then parse; one policy repair or one re-ask before failing."""
        session = self.session(project)
        raw = self.gateway.complete(session, prompt, tier)
        first: Exception
        try:
            return parse_json_response(raw, template_id).value
        except SchemaViolation as exc:
            if on_violation is not None:
                repaired = on_violation(exc)
                if repaired is not None:
                    return repaired
            first = exc
        except MalformedResponse as exc:
            first = exc
        try:
            raw = self.gateway.complete(session, REASK_PROMPT, tier)
            return parse_json_response(raw, template_id).value
        except SchemaViolation as exc:
            if on_violation is not None:
                repaired = on_violation(exc)
                if repaired is not None:
                    return repaired
            raise MalformedResponse(
                f"response still violates {template_id.value} schema after re-ask: {exc}"
            ) from exc
        except (MalformedResponse, FixtureMiss, ProviderError) as exc:
            raise MalformedResponse(
                f"response unusable after repairs and re-ask: {first}") from exc

    def _stale_check(self, project: Project, snapshot_revision: int, op: str) -> None:
        if project.revision != snapshot_revision:
            project.log_action("context_stale", {
                "op": op, "snapshotRevision": snapshot_revision,
                "revision": project.revision})

    def _flag_dangling(self, project: Project, text: str, op: str) -> List[str]:
        dangling = dangling_ids(text, project.collection)
        if dangling:
            project.log_action("dangling_citation", {"op": op, "corpusIds": dangling})
        return dangling

    # --- node suggestions ---

    def node_suggestions(self, project: Project, node_id: str) -> SuggestionSet:
        node = project.node(node_id)
        if not node.content.strip():
            raise EmptyNodeContent(f"node {node_id} has no content to analyze")
        r0 = project.revision
        if len(project.collection) == 0:
            project.log_action("ungrounded_suggestions", {"nodeId": node_id})
        prompt = render_prompt(TemplateId.NODE_SUGGESTION, ContextBundle(
            papers_block=project.collection.rendered_context(),
            extra={"idea_facet": node.facet.value, "node_title": node.title,
                   "node_content": node.content}))
        value = self._ask_parsed(project, prompt, TemplateId.NODE_SUGGESTION)
        raw_items = value["ai_suggestion"]
        if len(raw_items) > MAX_SUGGESTION_ITEMS:
            project.log_action("cardinality_clamped", {
                "op": "node_suggestions", "kept": MAX_SUGGESTION_ITEMS,
                "dropped": len(raw_items) - MAX_SUGGESTION_ITEMS})
            raw_items = raw_items[:MAX_SUGGESTION_ITEMS]
        items = [SuggestionItem(idea_facet=FacetType(i["idea_facet"]),
                                action=SuggestionAction(i["action"]),
                                suggestion=i["suggestion"]) for i in raw_items]
        for item in items:
            self._flag_dangling(project, item.suggestion, "node_suggestions")
        suggestions = SuggestionSet(items=items, generated_at_revision=r0)
        self._stale_check(project, r0, "node_suggestions")
        project.cache_suggestions(node_id, suggestions)
        return suggestions

    # --- node generation ---

    def _facet_override_policy(self, project: Project, expected: FacetType):
        """Unparseable facet labels lose to the requested facet (schema over
        model); any other violation falls through to the re-ask."""
        def policy(exc: SchemaViolation) -> Optional[dict]:
            doc = exc.document
            if not isinstance(doc, dict):
                return None
            if not exc.violations or not all(
                    v.kind == "enum" and len(v.path) == 3 and v.path[0] == "new_nodes"
                    and v.path[2] == "ideaFacet" for v in exc.violations):
                return None
            for v in exc.violations:
                item = doc["new_nodes"][v.path[1]]
                project.log_action("facet_overridden", {
                    "model": item.get("ideaFacet"), "requested": expected.value})
                item["ideaFacet"] = expected.value
            if validate_document(doc, TemplateId.NODE_GENERATION):
                return None
            return doc
        return policy

    def generate_nodes(self, project: Project, node_id: str, action: GenerationAction,
                       user_prompt: Optional[str] = None) -> GenerationResult:
        if not isinstance(action, GenerationAction):
            action = GenerationAction.parse(str(action))
        source = project.node(node_id)
        expected = action.expected_facet(source.facet)
        r0 = project.revision

        hood = project.neighborhood(node_id)
        context = format_ideas_context(hood.neighbors, hood.edges,
                                       titles={n.id: n.title for n in hood.nodes})
        if user_prompt and user_prompt.strip():
            steer = f"User steering prompt: {user_prompt.strip()}"
            context = f"{context}\n\n{steer}" if context else steer
        prompt = render_prompt(TemplateId.NODE_GENERATION, ContextBundle(extra={
            "current_node_data": format_node_entry(source),
            "node_context": context,
            "action_to_take": action.to_take(source.facet)}))
        value = self._ask_parsed(project, prompt, TemplateId.NODE_GENERATION,
                                 on_violation=self._facet_override_policy(project, expected))

        accepted: List[GeneratedNode] = []
        rejected: List[Dict] = []
        for item in value["new_nodes"]:
            facet = FacetType(item["ideaFacet"])
            if facet != expected:
                rejected.append(dict(item))
                project.log_action("facet_mismatch", {
                    "nodeId": node_id, "requested": expected.value,
                    "model": facet.value, "title": item.get("title", "")})
                continue
            accepted.append(GeneratedNode(idea_facet=facet, title=item["title"],
                                          content=item["content"]))
        if not accepted:
            raise SchemaViolation(
                f"model returned no node of the requested facet {expected.value}",
                document=value, rejected=rejected)
        limit = action.max_nodes()
        if len(accepted) > limit:
            project.log_action("cardinality_clamped", {
                "op": "generate_nodes", "action": action.kind,
                "kept": limit, "dropped": len(accepted) - limit})
            accepted = accepted[:limit]

        self._stale_check(project, r0, "generate_nodes")
        nodes, edges = self._commit_generated(project, source, action, accepted)
        project.log_action("generate_idea_facets", {
            "nodeId": node_id, "action": action.to_take(source.facet),
            "created": [n.id for n in nodes]}, actor=Actor.USER)
        return GenerationResult(generated=accepted, nodes=nodes, edges=edges,
                                rejected=rejected)

    def _commit_generated(self, project: Project, source: IdeaNode,
                          action: GenerationAction,
                          accepted: List[GeneratedNode]):
        nodes: List[IdeaNode] = []
        edges: List[IdeaEdge] = []
        with project.lock:
            if action.kind == "regenerate":
                spec = accepted[0]
                node = project.create_node(
                    facet=spec.idea_facet, title=spec.title, content=spec.content,
                    position=Position(source.position.x + FAN_DX, source.position.y),
                    created_by=CreatedBy.GENERATED, actor=Actor.SYSTEM)
                nodes.append(node)
            elif action.kind == "alternatives":
                parents = [e.source for e in project.edges.values()
                           if e.target == source.id]
                for k, spec in enumerate(accepted):
                    node = project.create_node(
                        facet=spec.idea_facet, title=spec.title, content=spec.content,
                        position=Position(source.position.x + FAN_DX * (k + 1),
                                          source.position.y),
                        created_by=CreatedBy.GENERATED, actor=Actor.SYSTEM)
                    nodes.append(node)
                    for parent in parents:
                        edges.append(project.link_nodes(parent, node.id,
                                                        actor=Actor.SYSTEM))
            else:
                n = len(accepted)
                for k, spec in enumerate(accepted):
                    node = project.create_node(
                        facet=spec.idea_facet, title=spec.title, content=spec.content,
                        position=Position(source.position.x + FAN_DX * (k - (n - 1) / 2),
                                          source.position.y + ROW_DY),
                        created_by=CreatedBy.GENERATED, actor=Actor.SYSTEM)
                    nodes.append(node)
                    edges.append(project.link_nodes(source.id, node.id,
                                                    actor=Actor.SYSTEM))
        return nodes, edges

    # --- edge assessment ---

    def evaluate_edge(self, project: Project, edge_id: str) -> EdgeAssessment:
        edge = project.edge(edge_id)
        source = project.node(edge.source)
        target = project.node(edge.target)
        if not source.content.strip() or not target.content.strip():
            raise EmptyFacetContent("both endpoints need content before assessment")
        r0 = project.revision
        prompt = render_prompt(TemplateId.EDGE_GENERATION, ContextBundle(extra={
            "source_node_data": format_node_entry(source),
            "target_node_data": format_node_entry(target)}))

        def clamp_policy(exc: SchemaViolation) -> Optional[dict]:
            doc = exc.document
            if (isinstance(doc, dict) and exc.violations and
                    all(v.kind == "range" and v.path == ("connectionStrength",)
                        for v in exc.violations)):
                raw = float(doc["connectionStrength"])
                clamped = min(1.0, max(0.0, raw))
                project.log_action("strength_clamped", {
                    "edgeId": edge_id, "model": raw, "stored": clamped})
                repaired = dict(doc)
                repaired["connectionStrength"] = clamped
                if validate_document(repaired, TemplateId.EDGE_GENERATION):
                    return None
                return repaired
            return None

        value = self._ask_parsed(project, prompt, TemplateId.EDGE_GENERATION,
                                 on_violation=clamp_policy)
        strength = float(value["connectionStrength"])
        suggestion = value["suggestion"]
        self._flag_dangling(project, suggestion, "evaluate_edge")
        self._stale_check(project, r0, "evaluate_edge")
        project.apply_edge_assessment(edge_id, strength, suggestion,
                                      assessed_at_revision=r0)
        return EdgeAssessment(connection_strength=min(1.0, max(0.0, strength)),
                              suggestion=suggestion, assessed_at_revision=r0)

    # --- research brief ---

    def generate_research_brief(self, project: Project,
                                node_ids: List[str]) -> ResearchBrief:
        bundle = project.select_brief_subgraph(node_ids)
        r0 = project.revision
        prompt = render_prompt(TemplateId.BRIEF_GENERATION, ContextBundle(
            papers_block=project.collection.rendered_context(),
            ideas_block=format_ideas_context(bundle.nodes, bundle.edges)))
        value = self._ask_parsed(project, prompt, TemplateId.BRIEF_GENERATION)

        brief_doc = value["researchBrief"]
        references: List[BriefReference] = []
        seen_ids = set()
        for ref in value["literatureReferences"]:
            citation_id = ref["citation_id"]
            if citation_id in seen_ids:
                project.log_action("duplicate_reference", {"citationId": citation_id})
                continue
            seen_ids.add(citation_id)
            corpus_id = self._resolve_reference_title(project.collection,
                                                      ref["paper_title"])
            if corpus_id is None:
                project.log_action("unresolved_reference", {
                    "citationId": citation_id, "paperTitle": ref["paper_title"]})
            references.append(BriefReference(
                citation_id=citation_id, corpus_id=corpus_id,
                paper_title=ref["paper_title"], dangling=corpus_id is None))

        sections = [brief_doc["title"], brief_doc["problemDescription"],
                    brief_doc["proposedDesign"], brief_doc["evaluationMethod"],
                    brief_doc["contributionImpact"]]
        cited = []
        for text in sections:
            for index in cited_indices(text):
                if index not in cited:
                    cited.append(index)
        for index in cited:
            if index not in seen_ids:
                project.log_action("unresolved_citation_index", {"citationId": index})
                references.append(BriefReference(citation_id=index, corpus_id=None,
                                                 paper_title="", dangling=True))
                seen_ids.add(index)
        references.sort(key=lambda r: r.citation_id)

        brief = ResearchBrief(
            id=project.ids(),
            title=brief_doc["title"],
            problem_description=brief_doc["problemDescription"],
            proposed_design=brief_doc["proposedDesign"],
            evaluation_method=brief_doc["evaluationMethod"],
            contribution_impact=brief_doc["contributionImpact"],
            literature_references=references,
            source_node_ids=[n.id for n in bundle.nodes],
            source_edge_ids=[e.id for e in bundle.edges],
        )
        self._stale_check(project, r0, "generate_research_brief")
        project.add_brief(brief)
        return brief

    @staticmethod
    def _normalize_title(title: str) -> str:
        import re
        return " ".join(re.findall(r"[a-z0-9]+", (title or "").lower()))

    def _resolve_reference_title(self, collection: PaperCollection,
                                 title: str) -> Optional[str]:
        lowered = (title or "").strip().lower()
        for record in collection:
            if record.title.strip().lower() == lowered:
                return record.corpus_id
        normalized = self._normalize_title(title)
        if normalized:
            for record in collection:
                if self._normalize_title(record.title) == normalized:
                    return record.corpus_id
        return None

    # --- literature review ---

    def literature_summary(self, project: Project) -> LitSummary:
        if len(project.collection) == 0:
            raise EmptyCollection("collect papers before requesting a summary")
        r0 = project.revision
        prompt = render_prompt(TemplateId.LIT_REVIEW_SUMMARY, ContextBundle(
            papers_block=project.collection.rendered_context(),
            extra={"corpusIds": ", ".join(project.collection.ids)}))
        value = self._ask_parsed(project, prompt, TemplateId.LIT_REVIEW_SUMMARY)
        text = value["litReviewSummary"]
        mentioned: List[str] = []
        dropped: List[str] = []
        for raw_id in list(value["corpusIds"]) + citation_ids(text):
            corpus_id = str(raw_id)
            if corpus_id in mentioned or corpus_id in dropped:
                continue
            if corpus_id in project.collection:
                mentioned.append(corpus_id)
            else:
                dropped.append(corpus_id)
        if dropped:
            project.log_action("ungrounded_corpus_id", {
                "op": "literature_summary", "corpusIds": dropped})
        self._flag_dangling(project, text, "literature_summary")
        summary = LitSummary(summary=text, corpus_ids=mentioned,
                             generated_at_revision=r0)
        self._stale_check(project, r0, "literature_summary")
        project.cache_lit_summary(summary)
        return summary

    def literature_analysis(self, project: Project) -> List[AnalysisItem]:
        if len(project.collection) == 0:
            raise EmptyCollection("collect papers before requesting an analysis")
        prompt = render_prompt(TemplateId.LIT_REVIEW_ANALYSIS, ContextBundle(
            papers_block=project.collection.rendered_context(),
            ideas_block=format_ideas_context(list(project.nodes.values()),
                                             list(project.edges.values()))))
        value = self._ask_parsed(project, prompt, TemplateId.LIT_REVIEW_ANALYSIS)
        items: List[AnalysisItem] = []
        for entry in value["analysis"]:
            corpus_id = str(entry["corpus_id"])
            if corpus_id not in project.collection:
                # anti-fabrication: items keyed to uncollected papers are dropped
                project.log_action("ungrounded_analysis_item", {
                    "corpusId": corpus_id, "paperTitle": entry.get("paper_title", "")})
                continue
            self._flag_dangling(project, entry["paper_title"], "literature_analysis")
            items.append(AnalysisItem(
                section_title=entry["section_title"],
                paper_title=entry["paper_title"],
                key_section=entry["key_section"],
                connection_to_ideas=entry["connection_to_ideas"],
                corpus_id=corpus_id,
                next_steps=list(entry["next_steps"])))
        project.log_action("lit_review_analysis", {"items": len(items)},
                           actor=Actor.USER)
        return items

    def node_literature_analysis(self, project: Project, node_id: str) -> NodeAnalysis:
        node = project.node(node_id)
        if not node.content.strip():
            raise EmptyNodeContent(f"node {node_id} has no content to analyze")
        if len(project.collection) == 0:
            raise EmptyCollection("collect papers before requesting a node analysis")
        r0 = project.revision
        if project.lit_summary_cache is not None:
            summary_text = project.lit_summary_cache.summary
        else:
            summary_text = self.literature_summary(project).summary
        prompt = render_prompt(TemplateId.NODE_LIT_REVIEW, ContextBundle(
            papers_block=project.collection.rendered_context(),
            extra={"idea_facet": node.facet.value, "title": node.title,
                   "content": node.content, "lit_review_summary": summary_text}))
        value = self._ask_parsed(project, prompt, TemplateId.NODE_LIT_REVIEW)

        raw_sections = value["most_relevant_sections"]
        if len(raw_sections) > MAX_ANALYSIS_SECTIONS:
            project.log_action("cardinality_clamped", {
                "op": "node_literature_analysis", "field": "most_relevant_sections",
                "kept": MAX_ANALYSIS_SECTIONS,
                "dropped": len(raw_sections) - MAX_ANALYSIS_SECTIONS})
            raw_sections = raw_sections[:MAX_ANALYSIS_SECTIONS]
        raw_suggestions = value["suggestions"]
        if len(raw_suggestions) > MAX_ANALYSIS_SUGGESTIONS:
            project.log_action("cardinality_clamped", {
                "op": "node_literature_analysis", "field": "suggestions",
                "kept": MAX_ANALYSIS_SUGGESTIONS,
                "dropped": len(raw_suggestions) - MAX_ANALYSIS_SUGGESTIONS})
            raw_suggestions = raw_suggestions[:MAX_ANALYSIS_SUGGESTIONS]

        sections: List[AnalysisSection] = []
        for entry in raw_sections:
            tags = citation_ids(entry["paper_title"])
            corpus_id = tags[0] if tags else None
            dangling = corpus_id is None or corpus_id not in project.collection
            if dangling:
                project.log_action("dangling_citation", {
                    "op": "node_literature_analysis",
                    "paperTitle": entry["paper_title"]})
            sections.append(AnalysisSection(
                section_title=entry["section_title"],
                paper_title=entry["paper_title"],
                key_section=entry["key_section"],
                connection_to_ideas=entry["connection_to_ideas"],
                corpus_id=corpus_id,
                dangling=dangling))
        analysis = NodeAnalysis(sections=sections, suggestions=list(raw_suggestions),
                                generated_at_revision=r0)
        self._stale_check(project, r0, "node_literature_analysis")
        project.cache_node_analysis(node_id, analysis)
        return analysis

    # --- Q&A ---

    def answer_question(self, project: Project, user_prompt: str) -> QaAnswer:
        if not user_prompt or not user_prompt.strip():
            raise EmptyPrompt("question must be non-empty")
        prompt = render_prompt(TemplateId.QA_RESPONSE, ContextBundle(
            papers_block=project.collection.rendered_context(),
            ideas_block=format_ideas_context(list(project.nodes.values()),
                                             list(project.edges.values())),
            extra={"user_prompt": user_prompt}))
        value = self._ask_parsed(project, prompt, TemplateId.QA_RESPONSE)
        text = value["litReviewResponse"]
        dangling = self._flag_dangling(project, text, "answer_question")
        project.append_chat(user_prompt, text)
        return QaAnswer(response=text, dangling=dangling)

    # --- drag-to-chain ---

    def materialize_suggestion_chain(self, project: Project, suggestion_text: str,
                                     drop_position: Position,
                                     start_facet: Optional[FacetType] = None) -> ChainResult:
        if not suggestion_text or not suggestion_text.strip():
            raise EmptyPrompt("suggestion text must be non-empty")
        start = FacetType(start_facet) if start_facet else FacetType.PROBLEM_DESCRIPTION_AND_RQ
        facets = FACET_ORDER[FACET_ORDER.index(start):]

        created_nodes: List[IdeaNode] = []
        created_edges: List[IdeaEdge] = []
        previous: Optional[IdeaNode] = None
        for step, facet in enumerate(facets):
            if previous is None:
                current_data = (f"Idea Facet: {start.value}\nTitle: Adopted suggestion\n"
                                f"Content: {suggestion_text.strip()}")
                context = f"User suggestion to execute: {suggestion_text.strip()}"
            else:
                current_data = format_node_entry(previous)
                chain_context = format_ideas_context(created_nodes, created_edges)
                context = (f"{chain_context}\n\nUser suggestion to execute: "
                           f"{suggestion_text.strip()}")
            prompt = render_prompt(TemplateId.NODE_GENERATION, ContextBundle(extra={
                "current_node_data": current_data,
                "node_context": context,
                "action_to_take": facet.value}))
            try:
                value = self._ask_parsed(
                    project, prompt, TemplateId.NODE_GENERATION,
                    on_violation=self._facet_override_policy(project, facet))
                spec = self._first_of_facet(project, value["new_nodes"], facet)
            except (MalformedResponse, SchemaViolation) as exc:
                if not created_nodes:
                    raise
                project.log_action("chain_step_failed", {
                    "facet": facet.value, "error": exc.code})
                return ChainResult(nodes=created_nodes, edges=created_edges,
                                   completed=False, failed_facet=facet,
                                   error_code=exc.code)
            node = project.create_node(
                facet=facet, title=spec["title"], content=spec["content"],
                position=Position(drop_position.x, drop_position.y + step * CHAIN_DY),
                created_by=CreatedBy.GENERATED)
            if previous is not None:
                created_edges.append(project.link_nodes(previous.id, node.id))
            created_nodes.append(node)
            previous = node
        return ChainResult(nodes=created_nodes, edges=created_edges, completed=True)

    def _first_of_facet(self, project: Project, items: List[Dict],
                        facet: FacetType) -> Dict:
        matches = [i for i in items if FacetType(i["ideaFacet"]) == facet]
        if not matches:
            raise SchemaViolation(
                f"model returned no node of facet {facet.value}", document=items)
        if len(matches) > 1:
            project.log_action("cardinality_clamped", {
                "op": "materialize_suggestion_chain", "kept": 1,
                "dropped": len(matches) - 1})
        return matches[0]

    # --- paper operations (delegation with project logging) ---

    def search_papers(self, project: Project, query: str,
                      limit: Optional[int] = None) -> List[PaperRecord]:
        records = self.library.search_papers(query, limit)
        project.log_action("search_paper", {"query": query, "hits": len(records)},
                           actor=Actor.USER)
        return records

    def recommend_papers(self, project: Project) -> List[PaperRecord]:
        records = self.library.recommend_papers(project.collection)
        project.log_action("recommend_papers", {"hits": len(records)}, actor=Actor.USER)
        return records

    def ingest_paper(self, project: Project, record: PaperRecord) -> PaperRecord:
        enriched = self.library.ingest_paper(record)
        project.add_paper(enriched)
        return enriched
