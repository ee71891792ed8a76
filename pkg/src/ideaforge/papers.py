"""Paper collection: scholarly search, recommendations, full-text ingestion,
and per-facet summaries.

Records are strict pass-throughs of provider fields; nothing is fabricated.
Each collected paper is enriched at ingestion with five facet summaries
produced on the cheap model tier, or falls back to abstract/TLDR context when
no full text can be extracted.
"""

from __future__ import annotations

import json
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional

from .errors import (CollectionBudgetExceeded, CorruptDocument, EmptyCollection,
                     EmptyQuery, EmptyText, ExtractionFailed, FixtureMiss,
                     MalformedResponse, ProviderUnavailable, SchemaViolation,
                     UnknownPaper)
from .gateway import ChatSession, LlmGateway, ModelTier
from .prompts import (ContextBundle, TemplateId, format_papers_context,
                      is_no_answer, parse_json_response, render_prompt)
from .transport import HttpxTransport, Transport, request_with_retry

DEFAULT_TOKEN_BUDGET = 100_000
CHARS_PER_TOKEN = 4
DEFAULT_SEARCH_MAX = 20
DEFAULT_RECOMMEND_LIMIT = 10

SEARCH_FIELDS = "corpusId,title,authors,year,abstract,tldr,openAccessPdf"

# Corrective follow-up for the one permitted model re-ask.
REASK_PROMPT = ("Your previous response was not valid or did not follow the "
                "required JSON format. Respond again with ONLY the corrected "
                "JSON object, exactly in the format specified earlier.")


class IngestState(str, Enum):
    METADATA_ONLY = "metadataOnly"
    FULL_TEXT = "fullText"
    FALLBACK = "fallback"


@dataclass
class FacetSummaries:
    """The five per-paper grounding paragraphs produced at ingestion."""

    problem_description_and_rq: str
    proposed_design_and_solution: str
    evaluation_method: str
    contribution_and_impact: str
    limitation_and_future_work: str

    _DOC_KEYS = (
        ("problemDescriptionAndRQ", "problem_description_and_rq"),
        ("proposedDesignAndSolution", "proposed_design_and_solution"),
        ("evaluationMethod", "evaluation_method"),
        ("contributionAndImpact", "contribution_and_impact"),
        ("limitationAndFutureWork", "limitation_and_future_work"),
    )

    def to_doc(self) -> Dict[str, str]:
        return {doc_key: getattr(self, attr) for doc_key, attr in self._DOC_KEYS}

    @classmethod
    def from_doc(cls, doc: Dict[str, str]) -> "FacetSummaries":
        expected = {doc_key for doc_key, _ in cls._DOC_KEYS}
        if not isinstance(doc, dict) or set(doc) != expected:
            raise CorruptDocument(f"facetSummaries must have exactly keys {sorted(expected)}")
        return cls(**{attr: doc[doc_key] for doc_key, attr in cls._DOC_KEYS})


@dataclass
class PaperRecord:
    corpus_id: str
    title: str
    authors: List[str] = field(default_factory=list)
    year: Optional[int] = None
    abstract: Optional[str] = None
    tldr: Optional[str] = None
    open_access_pdf_url: Optional[str] = None
    ingest_state: IngestState = IngestState.METADATA_ONLY
    facet_summaries: Optional[FacetSummaries] = None

    def to_doc(self) -> Dict:
        return {
            "corpusId": self.corpus_id,
            "title": self.title,
            "authors": list(self.authors),
            "year": self.year,
            "abstract": self.abstract,
            "tldr": self.tldr,
            "openAccessPdfUrl": self.open_access_pdf_url,
            "ingestState": self.ingest_state.value,
            "facetSummaries": self.facet_summaries.to_doc() if self.facet_summaries else None,
        }

    @classmethod
    def from_doc(cls, doc: Dict) -> "PaperRecord":
        if not isinstance(doc, dict) or not doc.get("corpusId"):
            raise CorruptDocument("paper record requires a corpusId")
        try:
            state = IngestState(doc.get("ingestState", "metadataOnly"))
        except ValueError as exc:
            raise CorruptDocument(f"unknown ingestState: {doc.get('ingestState')}") from exc
        summaries_doc = doc.get("facetSummaries")
        summaries = FacetSummaries.from_doc(summaries_doc) if summaries_doc else None
        if state == IngestState.FULL_TEXT and summaries is None:
            raise CorruptDocument("fullText record without facetSummaries")
        if state == IngestState.FALLBACK and summaries is not None:
            raise CorruptDocument("fallback record must not carry facetSummaries")
        return cls(
            corpus_id=str(doc["corpusId"]),
            title=doc.get("title", ""),
            authors=list(doc.get("authors") or []),
            year=doc.get("year"),
            abstract=doc.get("abstract"),
            tldr=doc.get("tldr"),
            open_access_pdf_url=doc.get("openAccessPdfUrl"),
            ingest_state=state,
            facet_summaries=summaries,
        )


def record_from_provider(item: Dict) -> Optional[PaperRecord]:
    """Map one provider result to a record, echoing fields verbatim.

    Returns None when the result has no corpus id (unusable for citation).
    """
    corpus_id = item.get("corpusId")
    if corpus_id is None:
        corpus_id = (item.get("externalIds") or {}).get("CorpusId")
    if corpus_id is None:
        return None
    tldr = item.get("tldr")
    if isinstance(tldr, dict):
        tldr = tldr.get("text")
    open_access = item.get("openAccessPdf")
    pdf_url = open_access.get("url") if isinstance(open_access, dict) else None
    authors = [a["name"] for a in item.get("authors") or []
               if isinstance(a, dict) and a.get("name")]
    return PaperRecord(corpus_id=str(corpus_id), title=item.get("title") or "",
                       authors=authors, year=item.get("year"),
                       abstract=item.get("abstract"), tldr=tldr,
                       open_access_pdf_url=pdf_url)


class PaperCollection:
    """Ordered collection with a rendered-context budget guard."""

    def __init__(self, records: Optional[List[PaperRecord]] = None,
                 token_budget: int = DEFAULT_TOKEN_BUDGET):
        self.token_budget = token_budget
        self._records: Dict[str, PaperRecord] = {}
        for record in records or []:
            self.add(record)

    @property
    def char_budget(self) -> int:
        return self.token_budget * CHARS_PER_TOKEN

    @property
    def ids(self) -> List[str]:
        return list(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[PaperRecord]:
        return iter(self._records.values())

    def __contains__(self, corpus_id: str) -> bool:
        return str(corpus_id) in self._records

    def get(self, corpus_id: str) -> Optional[PaperRecord]:
        return self._records.get(str(corpus_id))

    def add(self, record: PaperRecord) -> PaperRecord:
        """Add or update a record; rejects additions that would overflow the
        rendered-context budget."""
        candidate = dict(self._records)
        candidate[record.corpus_id] = record
        rendered = format_papers_context(candidate.values())
        if len(rendered) > self.char_budget:
            raise CollectionBudgetExceeded(
                f"adding paper {record.corpus_id} would exceed the context budget "
                f"({len(rendered)} > {self.char_budget} characters, "
                f"~{self.token_budget} tokens); remove papers before adding more",
                corpus_id=record.corpus_id)
        self._records = candidate
        return record

    def remove(self, corpus_id: str) -> PaperRecord:
        record = self._records.pop(str(corpus_id), None)
        if record is None:
            raise UnknownPaper(f"paper {corpus_id} is not in the collection")
        return record

    def rendered_context(self) -> str:
        return format_papers_context(self)

    def to_doc(self) -> List[Dict]:
        return [record.to_doc() for record in self]

    @classmethod
    def from_doc(cls, docs: List[Dict], token_budget: int = DEFAULT_TOKEN_BUDGET) -> "PaperCollection":
        collection = cls(token_budget=token_budget)
        for doc in docs or []:
            record = PaperRecord.from_doc(doc)
            if record.corpus_id in collection:
                raise CorruptDocument(f"duplicate corpusId {record.corpus_id}")
            collection.add(record)
        return collection


class ScholarClient:
    """Client for a Semantic Scholar Graph API compatible index."""

    def __init__(self, transport: Optional[Transport] = None,
                 base_url: str = "https://api.semanticscholar.org",
                 api_key: str = "",
                 sleep: Callable[[float], None] = time.sleep):
        self.transport = transport or HttpxTransport()
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.sleep = sleep

    def _headers(self) -> Dict[str, str]:
        return {"x-api-key": self.api_key} if self.api_key else {}

    def search(self, query: str, limit: int) -> List[PaperRecord]:
        resp = request_with_retry(
            self.transport, "GET", f"{self.base_url}/graph/v1/paper/search",
            params={"query": query, "limit": limit, "fields": SEARCH_FIELDS},
            headers=self._headers(), sleep=self.sleep)
        if resp.status != 200:
            raise ProviderUnavailable(f"paper search returned {resp.status}")
        try:
            items = resp.json().get("data") or []
        except ValueError as exc:
            raise ProviderUnavailable(f"unreadable search response: {exc}") from exc
        records = [record_from_provider(item) for item in items]
        return [r for r in records if r is not None]

    def recommend(self, positive_corpus_ids: List[str], limit: int) -> List[PaperRecord]:
        body = json.dumps(
            {"positivePaperIds": [f"CorpusId:{cid}" for cid in positive_corpus_ids]}
        ).encode("utf-8")
        headers = {"Content-Type": "application/json", **self._headers()}
        resp = request_with_retry(
            self.transport, "POST", f"{self.base_url}/recommendations/v1/papers",
            params={"fields": SEARCH_FIELDS, "limit": limit},
            headers=headers, content=body, sleep=self.sleep)
        if resp.status != 200:
            raise ProviderUnavailable(f"recommendations returned {resp.status}")
        try:
            items = resp.json().get("recommendedPapers") or []
        except ValueError as exc:
            raise ProviderUnavailable(f"unreadable recommendation response: {exc}") from exc
        records = [record_from_provider(item) for item in items]
        return [r for r in records if r is not None]


class ExtractionClient:
    """Structure-extraction provider: PDF bytes in, ordered section texts out.

    The reference integration posts to a TEI-XML-emitting service (GROBID's
    processFulltextDocument endpoint shape).
    """

    TEI_NS = "{http://www.tei-c.org/ns/1.0}"

    def __init__(self, base_url: str, transport: Optional[Transport] = None,
                 sleep: Callable[[float], None] = time.sleep):
        self.base_url = base_url.rstrip("/")
        self.transport = transport or HttpxTransport()
        self.sleep = sleep

    def extract(self, pdf_bytes: bytes) -> List[str]:
        if not pdf_bytes:
            raise ExtractionFailed("empty PDF payload")
        resp = request_with_retry(
            self.transport, "POST", f"{self.base_url}/api/processFulltextDocument",
            headers={"Content-Type": "application/pdf"}, content=pdf_bytes,
            sleep=self.sleep)
        if resp.status != 200:
            raise ExtractionFailed(f"extraction service returned {resp.status}")
        return self._sections_from_tei(resp.text)

    @classmethod
    def _sections_from_tei(cls, xml_text: str) -> List[str]:
        try:
            root = ET.fromstring(xml_text)
        except ET.ParseError as exc:
            raise ExtractionFailed(f"unparseable TEI response: {exc}") from exc
        ns = cls.TEI_NS
        sections: List[str] = []
        for abstract in root.iter(f"{ns}abstract"):
            text = " ".join(t.strip() for t in abstract.itertext() if t.strip())
            if text:
                sections.append(f"Abstract\n{text}")
        body = root.find(f".//{ns}body")
        if body is not None:
            for div in body.findall(f"{ns}div"):
                head = div.find(f"{ns}head")
                title = "".join(head.itertext()).strip() if head is not None else ""
                paragraphs = [" ".join(t.strip() for t in p.itertext() if t.strip())
                              for p in div.findall(f"{ns}p")]
                paragraphs = [p for p in paragraphs if p]
                if title or paragraphs:
                    sections.append("\n".join(filter(None, [title] + paragraphs)))
        if not sections:
            raise ExtractionFailed("no sections extracted from TEI")
        return sections


class PaperLibrary:
    """Search, recommendation, and ingestion against injected providers."""

    def __init__(self, scholar: ScholarClient, extractor: Optional[ExtractionClient],
                 gateway: LlmGateway, pdf_transport: Optional[Transport] = None,
                 search_max: int = DEFAULT_SEARCH_MAX,
                 recommend_limit: int = DEFAULT_RECOMMEND_LIMIT,
                 sleep: Callable[[float], None] = time.sleep,
                 log: Optional[Callable[[str, Dict], None]] = None):
        self.scholar = scholar
        self.extractor = extractor
        self.gateway = gateway
        self.pdf_transport = pdf_transport or getattr(scholar, "transport", None) or HttpxTransport()
        self.search_max = search_max
        self.recommend_limit = recommend_limit
        self.sleep = sleep
        self._log = log or (lambda kind, payload: None)

    @classmethod
    def from_env(cls, gateway: LlmGateway, env: Optional[Dict[str, str]] = None,
                 transport: Optional[Transport] = None, **kwargs) -> "PaperLibrary":
        import os
        env = dict(os.environ if env is None else env)
        transport = transport or HttpxTransport()
        scholar = ScholarClient(transport=transport,
                                base_url=env.get("SCHOLAR_BASE_URL",
                                                 "https://api.semanticscholar.org"),
                                api_key=env.get("SCHOLAR_API_KEY", ""))
        extractor_url = env.get("EXTRACTOR_URL", "")
        extractor = ExtractionClient(extractor_url, transport=transport) if extractor_url else None
        return cls(scholar=scholar, extractor=extractor, gateway=gateway,
                   pdf_transport=transport, **kwargs)

    def search_papers(self, query: str, limit: Optional[int] = None) -> List[PaperRecord]:
        if not query or not query.strip():
            raise EmptyQuery("search query must be non-empty")
        limit = self.search_max if limit is None else max(1, min(limit, self.search_max))
        return self.scholar.search(query.strip(), limit)

    def recommend_papers(self, collection: PaperCollection) -> List[PaperRecord]:
        if len(collection) == 0:
            raise EmptyCollection("cannot recommend from an empty collection")
        records = self.scholar.recommend(collection.ids, self.recommend_limit)
        return [r for r in records if r.corpus_id not in collection]

    def ingest_paper(self, record: PaperRecord) -> PaperRecord:
        """Enrich a record with extracted full text and facet summaries.

        Extraction problems downgrade to fallback and are logged, never
        raised; re-ingesting a fullText record is a no-op.
        """
        if not record.corpus_id:
            raise UnknownPaper("record has no corpusId")
        if record.ingest_state == IngestState.FULL_TEXT:
            return record
        if not record.open_access_pdf_url:
            return replace(record, ingest_state=IngestState.FALLBACK, facet_summaries=None)
        try:
            full_text = self._fetch_full_text(record)
            summaries = self.summarize_paper_facets(full_text)
        except (ExtractionFailed, ProviderUnavailable, FixtureMiss, MalformedResponse) as exc:
            self._log("extraction_failed", {"corpusId": record.corpus_id,
                                            "error": exc.code, "message": str(exc)})
            return replace(record, ingest_state=IngestState.FALLBACK, facet_summaries=None)
        if summaries is None:
            self._log("summarization_no_answer", {"corpusId": record.corpus_id})
            return replace(record, ingest_state=IngestState.FALLBACK, facet_summaries=None)
        return replace(record, ingest_state=IngestState.FULL_TEXT, facet_summaries=summaries)

    def _fetch_full_text(self, record: PaperRecord) -> str:
        if self.extractor is None:
            raise ExtractionFailed("no extraction service configured")
        resp = request_with_retry(self.pdf_transport, "GET", record.open_access_pdf_url,
                                  sleep=self.sleep)
        if resp.status != 200 or not resp.content:
            raise ExtractionFailed(f"PDF fetch returned {resp.status}")
        sections = self.extractor.extract(resp.content)
        return "\n\n".join(sections)

    def summarize_paper_facets(self, full_text: str) -> Optional[FacetSummaries]:
        """Run the paper-processing prompt on the summarizer tier.

        Returns None when the model answers the no-answer sentinel; raises
        MalformedResponse once the repair budget (mechanical repairs plus one
        re-ask) is exhausted.
        """
        if not full_text or not full_text.strip():
            raise EmptyText("cannot summarize empty text")
        prompt = render_prompt(TemplateId.PAPER_PROCESSING,
                               ContextBundle(extra={"full_text": full_text}))
        # Fresh session per paper: summarization is stateless extraction.
        session = self.gateway.new_session("paper-processing")
        value = self._ask_summarizer(session, prompt)
        if is_no_answer(value):
            return None
        return FacetSummaries(
            problem_description_and_rq=value["Problem Description and RQ"],
            proposed_design_and_solution=value["Proposed Design and Solution"],
            evaluation_method=value["Evaluation Method"],
            contribution_and_impact=value["Contribution and Impact"],
            limitation_and_future_work=value["Limitation and Future Work"],
        )

    def _ask_summarizer(self, session: ChatSession, prompt: str):
        raw = self.gateway.complete(session, prompt, ModelTier.SUMMARIZER)
        try:
            return parse_json_response(raw, TemplateId.PAPER_PROCESSING).value
        except (MalformedResponse, SchemaViolation) as first:
            try:
                raw = self.gateway.complete(session, REASK_PROMPT, ModelTier.SUMMARIZER)
                return parse_json_response(raw, TemplateId.PAPER_PROCESSING).value
            except (MalformedResponse, SchemaViolation, FixtureMiss) as exc:
                raise MalformedResponse(
                    f"summary response unusable after repairs and re-ask: {first}",
                    cause=str(exc)) from exc
