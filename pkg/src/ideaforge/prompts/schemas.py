"""Response parsing: mechanical JSON repair plus schema validation.

Each template with a structured reply has one JSON Schema asset. Parsing is a
pure function: it never talks to the model. The one model-level repair the
service layer may apply (a single re-ask) happens outside this module.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Dict, List, Optional, Tuple

import jsonschema

from ..errors import MalformedResponse, SchemaViolation
from .labels import normalize_action_label, normalize_facet_label, normalize_summary_key
from .templates import TemplateId

SCHEMA_FILES: Dict[TemplateId, str] = {
    TemplateId.PAPER_PROCESSING: "paper_processing.json",
    TemplateId.NODE_SUGGESTION: "node_suggestion.json",
    TemplateId.NODE_GENERATION: "node_generation.json",
    TemplateId.EDGE_GENERATION: "edge_generation.json",
    TemplateId.BRIEF_GENERATION: "brief_generation.json",
    TemplateId.QA_RESPONSE: "qa_response.json",
    TemplateId.LIT_REVIEW_SUMMARY: "lit_review_summary.json",
    TemplateId.LIT_REVIEW_ANALYSIS: "lit_review_analysis.json",
    TemplateId.NODE_LIT_REVIEW: "node_lit_review.json",
}

NO_ANSWER_KEY = "No answer"

_KIND_BY_VALIDATOR = {
    "minimum": "range",
    "maximum": "range",
    "exclusiveMinimum": "range",
    "exclusiveMaximum": "range",
    "enum": "enum",
    "type": "type",
    "required": "required",
    "minItems": "cardinality",
    "maxItems": "cardinality",
    "minLength": "empty",
    "oneOf": "shape",
    "additionalProperties": "shape",
}


@dataclass
class Violation:
    path: Tuple[Any, ...]
    kind: str
    message: str


@dataclass
class ParsedResponse:
    schema_id: TemplateId
    value: Any
    repairs_applied: List[str] = field(default_factory=list)
    raw_text: str = ""


@lru_cache(maxsize=None)
def schema_for(template_id: TemplateId) -> Dict[str, Any]:
    path = resources.files(__package__).joinpath("assets", "schemas",
                                                 SCHEMA_FILES[template_id])
    return json.loads(path.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def _validator_for(template_id: TemplateId) -> jsonschema.Draft7Validator:
    return jsonschema.Draft7Validator(schema_for(template_id))


def _strip_fences(text: str) -> Optional[str]:
    """Extract the JSON payload from a fenced block or surrounding prose.

    Returns None when nothing strippable was found.
    """
    fence = re.search(r"```[a-zA-Z0-9]*[ \t]*\n(.*?)```", text, re.DOTALL)
    if fence:
        return fence.group(1).strip()
    inner = _first_balanced_json(text)
    if inner is not None and inner != text.strip():
        return inner
    return None


def _first_balanced_json(text: str) -> Optional[str]:
    start = None
    depth = 0
    in_string = False
    escape = False
    opener, closer = "", ""
    for i, ch in enumerate(text):
        if start is None:
            if ch in "{[":
                start = i
                opener, closer = ch, "}" if ch == "{" else "]"
                depth = 1
            continue
        if in_string:
            if escape:
                escape = False
            elif ch == "\\":
                escape = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == opener:
            depth += 1
        elif ch == closer:
            depth -= 1
            if depth == 0:
                return text[start:i + 1]
    return None


def _drop_trailing_commas(text: str) -> str:
    return re.sub(r",(\s*[}\]])", r"\1", text)


def _load_with_repairs(raw_text: str) -> Tuple[Any, List[str]]:
    """json.loads with at most two mechanical repairs (fence strip, trailing
    comma removal); raises MalformedResponse when both fail."""
    candidates: List[Tuple[str, List[str]]] = [(raw_text.strip(), [])]
    stripped = _strip_fences(raw_text)
    if stripped is not None:
        candidates.append((stripped, ["fence-strip"]))
    base_text, base_repairs = candidates[-1]
    candidates.append((_drop_trailing_commas(base_text), base_repairs + ["trailing-comma"]))

    last_error: Optional[Exception] = None
    for text, repairs in candidates:
        try:
            return json.loads(text), repairs
        except json.JSONDecodeError as exc:
            last_error = exc
    raise MalformedResponse(f"response is not valid JSON after repairs: {last_error}")


def _normalize(template_id: TemplateId, value: Any) -> Any:
    doc = copy.deepcopy(value)
    if template_id == TemplateId.PAPER_PROCESSING and isinstance(doc, dict):
        renamed = {}
        for key, val in doc.items():
            canonical = normalize_summary_key(key)
            renamed[canonical if canonical else key] = val
        return renamed
    if template_id == TemplateId.NODE_SUGGESTION and isinstance(doc, dict):
        for item in doc.get("ai_suggestion") or []:
            if isinstance(item, dict):
                facet = normalize_facet_label(item.get("idea_facet"))
                if facet:
                    item["idea_facet"] = facet
                action = normalize_action_label(item.get("action"))
                if action:
                    item["action"] = action
    if template_id == TemplateId.NODE_GENERATION and isinstance(doc, dict):
        for item in doc.get("new_nodes") or []:
            if isinstance(item, dict):
                facet = normalize_facet_label(item.get("ideaFacet"))
                if facet:
                    item["ideaFacet"] = facet
    return doc


def validate_document(value: Any, template_id: TemplateId) -> List[Violation]:
    validator = _validator_for(template_id)
    violations = []
    for err in validator.iter_errors(value):
        kind = _KIND_BY_VALIDATOR.get(err.validator, err.validator)
        violations.append(Violation(tuple(err.absolute_path), kind, err.message))
    return violations


def parse_json_response(raw_text: str, template_id: TemplateId) -> ParsedResponse:
    """Parse and validate a model reply against its template's schema.

    Raises MalformedResponse when the text cannot be read as JSON within the
    mechanical repair budget, SchemaViolation (carrying the parsed document
    and structured violations) when it parses but has the wrong shape.
    """
    template_id = TemplateId(template_id)
    if template_id not in SCHEMA_FILES:
        raise MalformedResponse(f"template {template_id.value} has no response schema")
    if not raw_text or not raw_text.strip():
        raise MalformedResponse("empty response")

    value, repairs = _load_with_repairs(raw_text)
    value = _normalize(template_id, value)
    violations = validate_document(value, template_id)
    if violations:
        summary = "; ".join(f"{'/'.join(map(str, v.path)) or '<root>'}: {v.message}"
                            for v in violations[:4])
        raise SchemaViolation(f"response violates {template_id.value} schema: {summary}",
                              document=value, violations=violations)
    return ParsedResponse(schema_id=template_id, value=value,
                          repairs_applied=repairs, raw_text=raw_text)


def is_no_answer(value: Any) -> bool:
    return isinstance(value, dict) and NO_ANSWER_KEY in value
