"""Inline citation tags: parsing and resolution.

Generated text cites collected papers with ``@ref[<corpusId>]`` markers. The
parser is total and lossless: concatenating the surface forms of the returned
segments reproduces the input byte for byte, and malformed near-tags stay
plain text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Union

TAG_PATTERN = re.compile(r"@ref\[([^\[\]]+)\]")


@dataclass(frozen=True)
class TextSegment:
    text: str

    @property
    def surface(self) -> str:
        return self.text


@dataclass(frozen=True)
class CitationSegment:
    corpus_id: str
    surface: str
    span: tuple
    resolved: bool = False
    dangling: bool = False
    paper_title: Optional[str] = None


Segment = Union[TextSegment, CitationSegment]


def parse_citation_tags(text: str) -> List[Segment]:
    """Split text into Text and Citation segments, left to right."""
    segments: List[Segment] = []
    pos = 0
    for match in TAG_PATTERN.finditer(text):
        if match.start() > pos:
            segments.append(TextSegment(text[pos:match.start()]))
        segments.append(CitationSegment(corpus_id=match.group(1),
                                        surface=match.group(0),
                                        span=(match.start(), match.end())))
        pos = match.end()
    if pos < len(text) or not segments:
        segments.append(TextSegment(text[pos:]))
    return segments


def resolve_citations(segments: Iterable[Segment], collection) -> List[Segment]:
    """Mark each citation resolved (with the paper title) or dangling.

    ``collection`` is anything supporting ``corpus_id in collection`` and
    ``collection.get(corpus_id)`` returning a record with a title, e.g. a
    PaperCollection or a plain dict of records. Dangling tags keep their
    surface form; they are flagged, never dropped.
    """
    resolved: List[Segment] = []
    for seg in segments:
        if isinstance(seg, CitationSegment):
            record = collection.get(seg.corpus_id) if hasattr(collection, "get") else None
            if record is not None:
                seg = replace(seg, resolved=True, dangling=False,
                              paper_title=getattr(record, "title", None))
            else:
                seg = replace(seg, resolved=False, dangling=True)
        resolved.append(seg)
    return resolved


def citation_ids(text: str) -> List[str]:
    """All tag tokens in order of appearance (duplicates preserved)."""
    return [m.group(1) for m in TAG_PATTERN.finditer(text)]


def dangling_ids(text: str, collection) -> List[str]:
    """Tag tokens that do not resolve against the collection."""
    out = []
    for cid in citation_ids(text):
        record = collection.get(cid) if hasattr(collection, "get") else None
        if record is None and cid not in out:
            out.append(cid)
    return out
