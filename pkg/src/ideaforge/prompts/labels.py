"""Canonical facet and action labels with tolerant normalization.

The templates spell the four facets one way but their own few-shot examples
use variants ("Problem Description and Research Question", "Proposed
Design/Solution"), so model output is normalized to the canonical spellings
before schema validation.
"""

from __future__ import annotations

from typing import Optional

PROBLEM_DESCRIPTION_AND_RQ = "Problem Description and RQ"
PROPOSED_DESIGN_AND_SOLUTION = "Proposed Design and Solution"
EVALUATION_METHOD = "Evaluation Method"
CONTRIBUTION_AND_IMPACT = "Contribution and Impact"
LIMITATION_AND_FUTURE_WORK = "Limitation and Future Work"

FACET_LABELS = (
    PROBLEM_DESCRIPTION_AND_RQ,
    PROPOSED_DESIGN_AND_SOLUTION,
    EVALUATION_METHOD,
    CONTRIBUTION_AND_IMPACT,
)

_FACET_ALIASES = {
    "problem description and rq": PROBLEM_DESCRIPTION_AND_RQ,
    "problem description and research question": PROBLEM_DESCRIPTION_AND_RQ,
    "proposed design and solution": PROPOSED_DESIGN_AND_SOLUTION,
    "proposed design/solution": PROPOSED_DESIGN_AND_SOLUTION,
    "evaluation method": EVALUATION_METHOD,
    "evaluation methods": EVALUATION_METHOD,
    "contribution and impact": CONTRIBUTION_AND_IMPACT,
}

REGENERATE_CURRENT_IDEA_FACET = "Regenerate Current Idea Facet"
GENERATE_ALTERNATIVES = "Generate Alternatives"
GENERATE_NEW_IDEA_FACETS = "Generate New Idea Facets"

ACTION_LABELS = (
    REGENERATE_CURRENT_IDEA_FACET,
    GENERATE_ALTERNATIVES,
    GENERATE_NEW_IDEA_FACETS,
)

_ACTION_ALIASES = {
    "regenerate current idea facet": REGENERATE_CURRENT_IDEA_FACET,
    "regenerate current node": REGENERATE_CURRENT_IDEA_FACET,
    "generate alternatives": GENERATE_ALTERNATIVES,
    "generate new idea facets": GENERATE_NEW_IDEA_FACETS,
    "generate new idea facet": GENERATE_NEW_IDEA_FACETS,
}

_LIMITATION_ALIASES = {
    "limitation and future work": LIMITATION_AND_FUTURE_WORK,
    "limitations and future work": LIMITATION_AND_FUTURE_WORK,
    "limitation and future works": LIMITATION_AND_FUTURE_WORK,
    "limitations and future works": LIMITATION_AND_FUTURE_WORK,
}


def normalize_facet_label(label: str) -> Optional[str]:
    """Canonical facet spelling, or None when the label is not a facet."""
    if not isinstance(label, str):
        return None
    return _FACET_ALIASES.get(label.strip().lower())


def normalize_action_label(label: str) -> Optional[str]:
    if not isinstance(label, str):
        return None
    return _ACTION_ALIASES.get(label.strip().lower())


def normalize_summary_key(key: str) -> Optional[str]:
    """Facet-summary keys: the four facets plus limitation/future work and
    the no-answer sentinel."""
    if not isinstance(key, str):
        return None
    low = key.strip().lower()
    if low == "no answer":
        return "No answer"
    return _FACET_ALIASES.get(low) or _LIMITATION_ALIASES.get(low)
