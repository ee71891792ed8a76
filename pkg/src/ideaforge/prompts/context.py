"""Context-block rendering for prompt slots.

The two formatters turn domain objects into the deterministic text blocks the
templates consume. They access records and nodes through plain attributes so
this module stays import-free of the library and graph modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional


@dataclass
class ContextBundle:
    """Slot bindings for one prompt rendering.

    ``papers_block`` feeds the {papers_data}/{paper_summaries} slots,
    ``ideas_block`` feeds {research_ideas}; everything template-specific goes
    in ``extra`` keyed by slot name.
    """

    papers_block: str = ""
    ideas_block: str = ""
    extra: Dict[str, str] = field(default_factory=dict)


_SUMMARY_LABELS = (
    ("problem_description_and_rq", "Problem Description and RQ"),
    ("proposed_design_and_solution", "Proposed Design and Solution"),
    ("evaluation_method", "Evaluation Method"),
    ("contribution_and_impact", "Contribution and Impact"),
    ("limitation_and_future_work", "Limitation and Future Work"),
)


def format_paper_entry(record) -> str:
    """Render one collected paper: metadata plus facet summaries, or
    abstract/TLDR when no summaries exist (fallback and metadata-only)."""
    lines = [f"[corpusId: {record.corpus_id}] {record.title}"]
    authors = ", ".join(record.authors) if record.authors else "unknown authors"
    year = record.year if record.year is not None else "n.d."
    lines.append(f"Authors: {authors} ({year})")
    if record.facet_summaries is not None:
        for attr, label in _SUMMARY_LABELS:
            lines.append(f"{label}: {getattr(record.facet_summaries, attr)}")
    else:
        if record.tldr:
            lines.append(f"TLDR: {record.tldr}")
        if record.abstract:
            lines.append(f"Abstract: {record.abstract}")
    return "\n".join(lines)


def format_papers_context(records: Iterable) -> str:
    """Render the collected papers in collection order; empty collection
    renders an empty block (callers decide whether that is an error)."""
    return "\n\n".join(format_paper_entry(r) for r in records)


def format_node_entry(node) -> str:
    facet = getattr(node.facet, "value", node.facet)
    return f"Idea Facet: {facet}\nTitle: {node.title}\nContent: {node.content}"


def format_ideas_context(nodes: List, edges: List,
                         titles: Optional[Dict[str, str]] = None) -> str:
    """Render nodes then edges, each in the given (creation) order.

    ``titles`` supplies node-id -> title lookups for edge endpoints; when
    omitted it is built from ``nodes``.
    """
    if titles is None:
        titles = {n.id: n.title for n in nodes}
    parts = [format_node_entry(n) for n in nodes]
    for e in edges:
        strength = "unassessed" if e.strength is None else f"{e.strength:g}"
        line = (f"Connection: \"{titles.get(e.source, e.source)}\" -> "
                f"\"{titles.get(e.target, e.target)}\" (strength: {strength})")
        if e.suggestion:
            line += f"\nSuggestion: {e.suggestion}"
        parts.append(line)
    return "\n\n".join(parts)
