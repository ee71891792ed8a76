import random

from helpers import make_record, naive_citation_scan as naive_scan, random_tagged_text

from ideaforge.papers import PaperCollection
from ideaforge.prompts import (CitationSegment, TextSegment, citation_ids,
                               dangling_ids, parse_citation_tags,
                               resolve_citations)


def as_pairs(segments):
    return [("cite", s.corpus_id) if isinstance(s, CitationSegment)
            else ("text", s.text) for s in segments]


def test_no_tags():
    assert parse_citation_tags("no tags here") == [TextSegment("no tags here")]


def test_basic_tag_segmentation():
    segments = parse_citation_tags("like in paper @ref[249921] shows")
    assert as_pairs(segments) == [("text", "like in paper "), ("cite", "249921"),
                                  ("text", " shows")]


def test_malformed_near_tags_stay_text():
    for text in ["@ref[]", "@ref[abc", "@ref abc]", "@ref[a[b]c]", "@REF[1]"]:
        segments = parse_citation_tags(text)
        surface = "".join(s.surface for s in segments)
        assert surface == text
    assert as_pairs(parse_citation_tags("@ref[]")) == [("text", "@ref[]")]


def test_nested_prefix_recovers_inner_tag():
    segments = parse_citation_tags("@ref[@ref[x]]")
    assert as_pairs(segments) == [("text", "@ref["), ("cite", "x"), ("text", "]")]


def test_empty_string():
    assert parse_citation_tags("") == [TextSegment("")]


def test_round_trip_and_oracle_agreement_on_random_strings():
    rng = random.Random(1234)
    for _ in range(2000):
        text = random_tagged_text(rng)
        segments = parse_citation_tags(text)
        assert "".join(s.surface for s in segments) == text
        assert as_pairs(segments) == naive_scan(text)


def test_resolution_marks_resolved_and_dangling():
    collection = PaperCollection([make_record(corpus_id="249921", title="Known Paper")])
    segments = parse_citation_tags("see @ref[249921] and @ref[777]")
    resolved = resolve_citations(segments, collection)
    cites = [s for s in resolved if isinstance(s, CitationSegment)]
    assert cites[0].resolved and cites[0].paper_title == "Known Paper"
    assert cites[1].dangling and not cites[1].resolved
    # dangling tags keep their surface form
    assert "".join(s.surface for s in resolved) == "see @ref[249921] and @ref[777]"


def test_mixed_text_exactly_one_dangling():
    collection = PaperCollection([make_record(corpus_id="1", title="One"),
                                  make_record(corpus_id="2", title="Two")])
    text = "a @ref[1] b @ref[2] c @ref[3]"
    resolved = resolve_citations(parse_citation_tags(text), collection)
    dangling = [s for s in resolved
                if isinstance(s, CitationSegment) and s.dangling]
    assert len(dangling) == 1 and dangling[0].corpus_id == "3"
    assert dangling_ids(text, collection) == ["3"]


def test_citation_ids_order_and_duplicates():
    assert citation_ids("x @ref[2] y @ref[1] z @ref[2]") == ["2", "1", "2"]
