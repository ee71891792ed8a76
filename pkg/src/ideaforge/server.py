"""HTTP JSON API over the whole service.

Every response is an envelope {ok, data, error, revision}; error codes are
the module error class names. Routing is a thin adapter: handlers validate
the request shape, call one module operation, and serialize its result.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import (ExtractionFailed, FixtureMiss, IdeaForgeError,
                     MalformedResponse, ProviderError, ProviderUnavailable,
                     RevisionConflict, SchemaViolation, UnknownBrief, UnknownEdge,
                     UnknownNode, UnknownPaper, UnknownProject)
from .gateway import LlmGateway
from .graph import (FacetType, IdFactory, Position, Project, load_project,
                    save_project, utc_now)
from .papers import PaperLibrary, PaperRecord
from .service import GenerationAction, SuggestionService

_STATUS_404 = (UnknownProject, UnknownNode, UnknownEdge, UnknownBrief, UnknownPaper)
_STATUS_409 = (RevisionConflict,)
_STATUS_502 = (ProviderUnavailable, ProviderError, FixtureMiss, MalformedResponse,
               ExtractionFailed, SchemaViolation)


def _status_for(error: IdeaForgeError) -> int:
    if isinstance(error, _STATUS_404):
        return 404
    if isinstance(error, _STATUS_409):
        return 409
    if isinstance(error, _STATUS_502):
        return 502
    return 400


def envelope(data=None, error=None, revision=None) -> Dict:
    return {"ok": error is None, "data": data, "error": error, "revision": revision}


class ProjectStore:
    """In-memory project registry with one JSON document per project on disk."""

    def __init__(self, data_dir: Optional[Path] = None,
                 id_factory: Optional[IdFactory] = None,
                 clock: Optional[Callable] = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self.id_factory = id_factory or IdFactory()
        self.clock = clock or utc_now
        self.projects: Dict[str, Project] = {}
        self._lock = threading.Lock()
        if self.data_dir and self.data_dir.is_dir():
            for path in sorted(self.data_dir.glob("*.json")):
                project = load_project(path.read_text(encoding="utf-8"),
                                       id_factory=self.id_factory, clock=self.clock)
                self.projects[project.id] = project

    def create(self, name: str) -> Project:
        with self._lock:
            project = Project(name=name, id_factory=self.id_factory, clock=self.clock)
            self.projects[project.id] = project
        self.save(project)
        return project

    def get(self, project_id: str) -> Project:
        project = self.projects.get(project_id)
        if project is None:
            raise UnknownProject(f"no project {project_id}", project_id=project_id)
        return project

    def delete(self, project_id: str) -> None:
        with self._lock:
            self.get(project_id)
            del self.projects[project_id]
        if self.data_dir:
            path = self.data_dir / f"{project_id}.json"
            if path.exists():
                path.unlink()

    def list(self) -> List[Dict]:
        return [{"id": p.id, "name": p.name, "revision": p.revision}
                for p in self.projects.values()]

    def save(self, project: Project) -> None:
        if not self.data_dir:
            return
        self.data_dir.mkdir(parents=True, exist_ok=True)
        path = self.data_dir / f"{project.id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(save_project(project), encoding="utf-8")
        os.replace(tmp, path)

    def find_node(self, node_id: str) -> Tuple[Project, str]:
        for project in self.projects.values():
            if node_id in project.nodes:
                return project, node_id
        raise UnknownNode(f"no node {node_id}", node_id=node_id)

    def find_edge(self, edge_id: str) -> Tuple[Project, str]:
        for project in self.projects.values():
            if edge_id in project.edges:
                return project, edge_id
        raise UnknownEdge(f"no edge {edge_id}", edge_id=edge_id)


# --- request bodies ---

class ProjectBody(BaseModel):
    name: str = "Untitled project"


class ProjectPatch(BaseModel):
    name: Optional[str] = None
    expectedRevision: Optional[int] = None


class PositionBody(BaseModel):
    x: float = 0.0
    y: float = 0.0


class NodeBody(BaseModel):
    facet: Optional[str] = None
    title: str = ""
    content: str = ""
    position: PositionBody = PositionBody()


class NodePatch(BaseModel):
    facet: Optional[str] = None
    title: Optional[str] = None
    content: Optional[str] = None
    position: Optional[PositionBody] = None
    expectedRevision: Optional[int] = None


class EdgeBody(BaseModel):
    source: str
    target: str


class GenerateBody(BaseModel):
    action: str
    userPrompt: Optional[str] = None


class BriefBody(BaseModel):
    nodeIds: List[str]


class SearchBody(BaseModel):
    query: str
    limit: Optional[int] = None


class IngestBody(BaseModel):
    corpusId: str
    title: str = ""
    authors: List[str] = []
    year: Optional[int] = None
    abstract: Optional[str] = None
    tldr: Optional[str] = None
    openAccessPdfUrl: Optional[str] = None


class QaBody(BaseModel):
    prompt: str


class ChainBody(BaseModel):
    suggestionText: str
    position: PositionBody = PositionBody()
    startFacet: Optional[str] = None


def _facet_or_400(label: Optional[str]) -> Optional[FacetType]:
    if label is None:
        return None
    facet = FacetType.from_label(label)
    if facet is None:
        raise SchemaViolation(f"unknown facet label: {label!r}")
    return facet


def _check_expected_revision(project: Project, expected: Optional[int]) -> None:
    if expected is not None and expected != project.revision:
        raise RevisionConflict(
            f"expected revision {expected} but project is at {project.revision}",
            expected=expected, revision=project.revision)


def create_app(store: ProjectStore, gateway: LlmGateway, library: PaperLibrary,
               cors_origins: Optional[List[str]] = None) -> FastAPI:
    app = FastAPI(title="ideaforge", version="0.1.0", openapi_url="/api/schema")
    service = SuggestionService(gateway=gateway, library=library)
    app.state.store = store
    app.state.service = service

    if cors_origins:
        app.add_middleware(CORSMiddleware, allow_origins=cors_origins,
                           allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(IdeaForgeError)
    async def on_domain_error(request: Request, exc: IdeaForgeError):
        return JSONResponse(status_code=_status_for(exc),
                            content=envelope(error={"code": exc.code,
                                                    "message": exc.message}))

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content=envelope(error={"code": "SchemaViolation",
                                                    "message": str(exc.errors())}))

    def done(project: Project, data) -> Dict:
        store.save(project)
        return envelope(data=data, revision=project.revision)

    # --- projects ---

    @app.post("/projects")
    def create_project(body: ProjectBody):
        project = store.create(body.name)
        return envelope(data=project.to_document(), revision=project.revision)

    @app.get("/projects")
    def list_projects():
        return envelope(data=store.list())

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        project = store.get(project_id)
        return envelope(data=project.to_document(), revision=project.revision)

    @app.patch("/projects/{project_id}")
    def patch_project(project_id: str, body: ProjectPatch):
        project = store.get(project_id)
        _check_expected_revision(project, body.expectedRevision)
        if body.name is not None:
            project.rename(body.name)
        return done(project, project.to_document())

    @app.delete("/projects/{project_id}")
    def delete_project(project_id: str):
        store.delete(project_id)
        return envelope(data={"deleted": project_id})

    # --- nodes and edges ---

    @app.post("/projects/{project_id}/nodes")
    def create_node(project_id: str, body: NodeBody):
        project = store.get(project_id)
        facet = _facet_or_400(body.facet) or FacetType.PROBLEM_DESCRIPTION_AND_RQ
        node = project.create_node(facet=facet, title=body.title, content=body.content,
                                   position=Position(body.position.x, body.position.y))
        return done(project, node.to_doc())

    @app.patch("/projects/{project_id}/nodes/{node_id}")
    def update_node(project_id: str, node_id: str, body: NodePatch):
        project = store.get(project_id)
        _check_expected_revision(project, body.expectedRevision)
        position = Position(body.position.x, body.position.y) if body.position else None
        node = project.update_node(node_id, title=body.title, content=body.content,
                                   facet=_facet_or_400(body.facet), position=position)
        return done(project, node.to_doc())

    @app.delete("/projects/{project_id}/nodes/{node_id}")
    def delete_node(project_id: str, node_id: str,
                    expectedRevision: Optional[int] = None):
        project = store.get(project_id)
        _check_expected_revision(project, expectedRevision)
        project.delete_node(node_id)
        return done(project, {"deleted": node_id})

    @app.post("/projects/{project_id}/edges")
    def create_edge(project_id: str, body: EdgeBody):
        project = store.get(project_id)
        edge = project.link_nodes(body.source, body.target)
        return done(project, edge.to_doc())

    @app.delete("/projects/{project_id}/edges/{edge_id}")
    def delete_edge(project_id: str, edge_id: str,
                    expectedRevision: Optional[int] = None):
        project = store.get(project_id)
        _check_expected_revision(project, expectedRevision)
        project.delete_edge(edge_id)
        return done(project, {"deleted": edge_id})

    # --- generation ---

    @app.post("/nodes/{node_id}/suggestions")
    def node_suggestions(node_id: str):
        project, node_id = store.find_node(node_id)
        suggestions = service.node_suggestions(project, node_id)
        return done(project, suggestions.to_doc())

    @app.post("/nodes/{node_id}/generate")
    def generate_nodes(node_id: str, body: GenerateBody):
        project, node_id = store.find_node(node_id)
        action = GenerationAction.parse(body.action)
        result = service.generate_nodes(project, node_id, action, body.userPrompt)
        return done(project, {
            "generated": [g.to_doc() for g in result.generated],
            "nodes": [n.to_doc() for n in result.nodes],
            "edges": [e.to_doc() for e in result.edges],
            "rejected": result.rejected,
        })

    @app.post("/edges/{edge_id}/assess")
    def assess_edge(edge_id: str):
        project, edge_id = store.find_edge(edge_id)
        assessment = service.evaluate_edge(project, edge_id)
        return done(project, assessment.to_doc())

    @app.post("/projects/{project_id}/brief")
    def generate_brief(project_id: str, body: BriefBody):
        project = store.get(project_id)
        brief = service.generate_research_brief(project, body.nodeIds)
        return done(project, brief.to_doc())

    @app.delete("/projects/{project_id}/briefs/{brief_id}")
    def delete_brief(project_id: str, brief_id: str):
        project = store.get(project_id)
        project.delete_brief(brief_id)
        return done(project, {"deleted": brief_id})

    # --- papers ---

    @app.post("/projects/{project_id}/papers/search")
    def search_papers(project_id: str, body: SearchBody):
        project = store.get(project_id)
        records = service.search_papers(project, body.query, body.limit)
        return done(project, [r.to_doc() for r in records])

    @app.post("/projects/{project_id}/papers/recommend")
    def recommend_papers(project_id: str):
        project = store.get(project_id)
        records = service.recommend_papers(project)
        return done(project, [r.to_doc() for r in records])

    @app.post("/projects/{project_id}/papers/ingest")
    def ingest_paper(project_id: str, body: IngestBody):
        project = store.get(project_id)
        record = PaperRecord(corpus_id=body.corpusId, title=body.title,
                             authors=list(body.authors), year=body.year,
                             abstract=body.abstract, tldr=body.tldr,
                             open_access_pdf_url=body.openAccessPdfUrl)
        enriched = service.ingest_paper(project, record)
        return done(project, enriched.to_doc())

    @app.delete("/projects/{project_id}/papers/{corpus_id}")
    def remove_paper(project_id: str, corpus_id: str):
        project = store.get(project_id)
        project.remove_paper(corpus_id)
        return done(project, {"deleted": corpus_id})

    # --- literature review ---

    @app.post("/projects/{project_id}/lit/summary")
    def lit_summary(project_id: str):
        project = store.get(project_id)
        summary = service.literature_summary(project)
        return done(project, summary.to_doc())

    @app.post("/projects/{project_id}/lit/analysis")
    def lit_analysis(project_id: str):
        project = store.get(project_id)
        items = service.literature_analysis(project)
        return done(project, {"items": [i.to_doc() for i in items]})

    @app.post("/nodes/{node_id}/lit-analysis")
    def node_lit_analysis(node_id: str):
        project, node_id = store.find_node(node_id)
        analysis = service.node_literature_analysis(project, node_id)
        return done(project, analysis.to_doc())

    # --- Q&A and chains ---

    @app.post("/projects/{project_id}/qa")
    def qa(project_id: str, body: QaBody):
        project = store.get(project_id)
        answer = service.answer_question(project, body.prompt)
        return done(project, {"response": answer.response,
                              "dangling": answer.dangling})

    @app.post("/projects/{project_id}/chain")
    def chain(project_id: str, body: ChainBody):
        project = store.get(project_id)
        result = service.materialize_suggestion_chain(
            project, body.suggestionText,
            Position(body.position.x, body.position.y),
            start_facet=_facet_or_400(body.startFacet))
        return done(project, {
            "nodes": [n.to_doc() for n in result.nodes],
            "edges": [e.to_doc() for e in result.edges],
            "completed": result.completed,
            "failedFacet": result.failed_facet.value if result.failed_facet else None,
            "errorCode": result.error_code,
        })

    return app
