"""Prompt engine: verbatim templates, response schemas, citation tags, and
context-block rendering."""

from .citations import (CitationSegment, Segment, TextSegment, citation_ids,
                        dangling_ids, parse_citation_tags, resolve_citations)
from .context import (ContextBundle, format_ideas_context, format_node_entry,
                      format_paper_entry, format_papers_context)
from .labels import (ACTION_LABELS, FACET_LABELS, GENERATE_ALTERNATIVES,
                     GENERATE_NEW_IDEA_FACETS, REGENERATE_CURRENT_IDEA_FACET,
                     normalize_action_label, normalize_facet_label,
                     normalize_summary_key)
from .schemas import (NO_ANSWER_KEY, ParsedResponse, Violation, is_no_answer,
                      parse_json_response, schema_for, validate_document)
from .templates import (TEMPLATE_FILES, TEMPLATE_SLOTS, TemplateId,
                        render_prompt, system_prompt, template_text)

__all__ = [
    "ACTION_LABELS", "FACET_LABELS", "GENERATE_ALTERNATIVES",
    "GENERATE_NEW_IDEA_FACETS", "REGENERATE_CURRENT_IDEA_FACET",
    "CitationSegment", "ContextBundle", "NO_ANSWER_KEY", "ParsedResponse",
    "Segment", "TemplateId", "TextSegment", "TEMPLATE_FILES", "TEMPLATE_SLOTS",
    "Violation", "citation_ids", "dangling_ids", "format_ideas_context",
    "format_node_entry", "format_paper_entry", "format_papers_context",
    "is_no_answer", "normalize_action_label", "normalize_facet_label",
    "normalize_summary_key", "parse_citation_tags", "parse_json_response",
    "render_prompt", "resolve_citations", "schema_for", "system_prompt",
    "template_text", "validate_document",
]
