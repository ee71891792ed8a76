"""Prompt template registry and rendering.

Template bodies ship as text assets and are treated as opaque bytes: rendering
substitutes the declared slots and changes nothing else, so the output is
byte-stable and the bodies can be diffed against golden files.
"""

from __future__ import annotations

import re
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Dict, Tuple

from ..errors import MissingSlot
from .context import ContextBundle


class TemplateId(str, Enum):
    SYSTEM = "system"
    PAPER_PROCESSING = "paperProcessing"
    NODE_SUGGESTION = "nodeSuggestion"
    NODE_GENERATION = "nodeGeneration"
    EDGE_GENERATION = "edgeGeneration"
    BRIEF_GENERATION = "briefGeneration"
    QA_RESPONSE = "qaResponse"
    LIT_REVIEW_SUMMARY = "litReviewSummary"
    LIT_REVIEW_ANALYSIS = "litReviewAnalysis"
    NODE_LIT_REVIEW = "nodeLitReview"


TEMPLATE_FILES: Dict[TemplateId, str] = {
    TemplateId.SYSTEM: "system.txt",
    TemplateId.PAPER_PROCESSING: "paper_processing.txt",
    TemplateId.NODE_SUGGESTION: "node_suggestion.txt",
    TemplateId.NODE_GENERATION: "node_generation.txt",
    TemplateId.EDGE_GENERATION: "edge_generation.txt",
    TemplateId.BRIEF_GENERATION: "brief_generation.txt",
    TemplateId.QA_RESPONSE: "qa_response.txt",
    TemplateId.LIT_REVIEW_SUMMARY: "lit_review_summary.txt",
    TemplateId.LIT_REVIEW_ANALYSIS: "lit_review_analysis.txt",
    TemplateId.NODE_LIT_REVIEW: "node_lit_review.txt",
}

# Declared slot names per template; substitution touches only these.
TEMPLATE_SLOTS: Dict[TemplateId, Tuple[str, ...]] = {
    TemplateId.SYSTEM: (),
    TemplateId.PAPER_PROCESSING: ("full_text",),
    TemplateId.NODE_SUGGESTION: ("idea_facet", "node_title", "node_content", "papers_data"),
    TemplateId.NODE_GENERATION: ("current_node_data", "node_context", "action_to_take"),
    TemplateId.EDGE_GENERATION: ("source_node_data", "target_node_data"),
    TemplateId.BRIEF_GENERATION: ("research_ideas", "papers_data"),
    TemplateId.QA_RESPONSE: ("user_prompt", "papers_data", "research_ideas"),
    TemplateId.LIT_REVIEW_SUMMARY: ("corpusIds", "papers_data"),
    TemplateId.LIT_REVIEW_ANALYSIS: ("paper_summaries", "research_ideas"),
    TemplateId.NODE_LIT_REVIEW: ("idea_facet", "title", "content", "paper_summaries",
                                 "lit_review_summary"),
}

# Slots fed by the bundle's named blocks rather than its extra map.
_BLOCK_SLOTS = {
    "papers_data": "papers_block",
    "paper_summaries": "papers_block",
    "research_ideas": "ideas_block",
}


@lru_cache(maxsize=None)
def template_text(template_id: TemplateId) -> str:
    path = resources.files(__package__).joinpath("assets", "templates",
                                                 TEMPLATE_FILES[template_id])
    return path.read_text(encoding="utf-8")


def render_prompt(template_id: TemplateId, bindings: ContextBundle) -> str:
    """Substitute the template's declared slots from ``bindings``.

    Raises MissingSlot if any declared slot has no binding. All other bytes,
    including the doubled-brace JSON format examples, pass through untouched.
    """
    template_id = TemplateId(template_id)
    slots = TEMPLATE_SLOTS[template_id]
    body = template_text(template_id)
    if not slots:
        return body

    values: Dict[str, str] = {}
    missing = []
    for slot in slots:
        if slot in bindings.extra:
            values[slot] = str(bindings.extra[slot])
        elif slot in _BLOCK_SLOTS:
            values[slot] = getattr(bindings, _BLOCK_SLOTS[slot])
        else:
            missing.append(slot)
    if missing:
        raise MissingSlot(f"unbound slots for {template_id.value}: {', '.join(missing)}",
                          slots=missing)

    pattern = re.compile("|".join(r"\{%s\}" % re.escape(s) for s in slots))
    return pattern.sub(lambda m: values[m.group(0)[1:-1]], body)


def system_prompt() -> str:
    """The verbatim system prompt used to seed every chat session."""
    return template_text(TemplateId.SYSTEM)
