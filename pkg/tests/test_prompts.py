from pathlib import Path

import pytest

from helpers import make_record, make_summaries

from ideaforge.errors import MissingSlot
from ideaforge.graph import FacetType, IdeaEdge, IdeaNode, Position
from ideaforge.prompts import (TEMPLATE_FILES, TEMPLATE_SLOTS, ContextBundle,
                               TemplateId, format_ideas_context,
                               format_papers_context, render_prompt,
                               system_prompt, template_text)

GOLDEN_DIR = Path(__file__).parent / "golden" / "templates"


@pytest.mark.parametrize("template_id", list(TemplateId))
def test_template_matches_golden_file_byte_for_byte(template_id):
    golden = (GOLDEN_DIR / TEMPLATE_FILES[template_id]).read_bytes()
    assert template_text(template_id).encode("utf-8") == golden


def test_system_prompt_opener():
    assert system_prompt().startswith("You are a helpful research assistant.")


def test_declared_slots_match_template_bodies():
    import re
    for template_id in TemplateId:
        body = template_text(template_id)
        found = set(re.findall(r"(?<!\{)\{([A-Za-z_][A-Za-z0-9_]*)\}(?!\})", body))
        assert found == set(TEMPLATE_SLOTS[template_id]), template_id


def test_render_edge_generation_contains_both_nodes_and_range_rule():
    out = render_prompt(TemplateId.EDGE_GENERATION, ContextBundle(extra={
        "source_node_data": "Idea Facet: Proposed Design and Solution\nTitle: Editor",
        "target_node_data": "Idea Facet: Evaluation Method\nTitle: Study"}))
    assert "Title: Editor" in out and "Title: Study" in out
    assert "number value from 0 to 1" in out
    assert "{source_node_data}" not in out


def test_render_missing_slot_raises():
    with pytest.raises(MissingSlot):
        render_prompt(TemplateId.NODE_GENERATION, ContextBundle(extra={
            "current_node_data": "x", "node_context": "y"}))


def test_render_is_deterministic():
    bundle = ContextBundle(papers_block="PAPERS", ideas_block="IDEAS",
                           extra={"user_prompt": "q"})
    first = render_prompt(TemplateId.QA_RESPONSE, bundle)
    second = render_prompt(TemplateId.QA_RESPONSE, bundle)
    assert first == second


def test_render_preserves_doubled_braces_verbatim():
    out = render_prompt(TemplateId.QA_RESPONSE, ContextBundle(
        papers_block="P", ideas_block="I", extra={"user_prompt": "q"}))
    assert "{{" in out and "}}" in out


def test_render_does_not_rescan_substituted_values():
    out = render_prompt(TemplateId.QA_RESPONSE, ContextBundle(
        papers_block="{research_ideas}", ideas_block="IDEAS",
        extra={"user_prompt": "q"}))
    # the slot-shaped value must land verbatim, not get substituted again
    assert "{research_ideas}" in out


def test_paper_processing_template_keeps_single_brace_example():
    body = template_text(TemplateId.PAPER_PROCESSING)
    assert '{"key": "value"}' in body
    assert '{"No answer": ""}' in body


def test_format_papers_context_empty_collection():
    assert format_papers_context([]) == ""


def test_format_papers_context_fallback_vs_fulltext():
    fallback = make_record(corpus_id="1", title="Fallback Paper")
    fulltext = make_record(corpus_id="2", title="Full Paper",
                           state="fullText", facet_summaries=make_summaries())
    out = format_papers_context([fallback, fulltext])
    assert out.index("Fallback Paper") < out.index("Full Paper")
    assert "TLDR: AI helps writers iterate." in out
    assert "Abstract: A study of AI-assisted writing support." in out
    assert "Summary: problem paragraph." in out
    assert "[corpusId: 1]" in out and "[corpusId: 2]" in out
    # the fallback entry must not show facet summaries
    fallback_block = out.split("\n\n")[0]
    assert "Problem Description and RQ:" not in fallback_block


def test_papers_block_mentions_only_collection_ids():
    import re
    from ideaforge.papers import PaperCollection
    collection = PaperCollection([make_record(corpus_id=str(i), title=f"P{i}")
                                  for i in range(5)])
    block = format_papers_context(collection)
    mentioned = set(re.findall(r"\[corpusId: ([^\]]+)\]", block))
    assert mentioned == set(collection.ids)


def test_format_ideas_context_counts_and_order():
    nodes = [IdeaNode(id=f"n{i}", facet=FacetType.PROBLEM_DESCRIPTION_AND_RQ,
                      title=f"title{i}", content=f"content{i}",
                      position=Position(0, 0)) for i in range(3)]
    edges = [IdeaEdge(id="e1", source="n0", target="n1", strength=0.8,
                      suggestion="tighten"),
             IdeaEdge(id="e2", source="n1", target="n2")]
    out = format_ideas_context(nodes, edges)
    assert out.count("Idea Facet:") == 3
    assert out.count("Connection:") == 2
    assert '"title0" -> "title1" (strength: 0.8)' in out
    assert '"title1" -> "title2" (strength: unassessed)' in out
    assert "Suggestion: tighten" in out
