"""Shared builders for the test suite."""

import json

from ideaforge.gateway import FixtureStore, GatewayMode, LlmGateway, ScriptedProvider
from ideaforge.graph import FacetType, IdFactory, Position, Project, TickClock
from ideaforge.papers import FacetSummaries, IngestState, PaperRecord


def make_project(name="demo", seed=7):
    return Project(name, id_factory=IdFactory(seed=seed), clock=TickClock())


def make_record(corpus_id="249921", title="Writing with AI", state=IngestState.FALLBACK,
                **overrides):
    fields = dict(
        corpus_id=corpus_id,
        title=title,
        authors=["A. Author", "B. Author"],
        year=2023,
        abstract="A study of AI-assisted writing support.",
        tldr="AI helps writers iterate.",
        ingest_state=state,
    )
    fields.update(overrides)
    if fields["ingest_state"] == IngestState.FULL_TEXT and "facet_summaries" not in overrides:
        fields["facet_summaries"] = make_summaries()
    return PaperRecord(**fields)


def make_summaries(prefix="Summary"):
    return FacetSummaries(
        problem_description_and_rq=f"{prefix}: problem paragraph.",
        proposed_design_and_solution=f"{prefix}: design paragraph.",
        evaluation_method=f"{prefix}: evaluation paragraph.",
        contribution_and_impact=f"{prefix}: contribution paragraph.",
        limitation_and_future_work=f"{prefix}: limitation paragraph.",
    )


def scripted_gateway(*responses, mode=GatewayMode.LIVE):
    provider = ScriptedProvider(list(responses))
    return LlmGateway(mode=mode, provider=provider, fixtures=FixtureStore()), provider


def suggestion_reply(items=None):
    if items is None:
        items = [{"idea_facet": "Problem Description and RQ",
                  "action": "Regenerate Current Idea Facet",
                  "suggestion": "Could you narrow the audience? See @ref[249921]."}]
    return json.dumps({"ai_suggestion": items})


def generation_reply(nodes):
    return json.dumps({"new_nodes": nodes})


def nodes_of(facet, count, prefix="Idea"):
    label = facet.value if isinstance(facet, FacetType) else facet
    return [{"ideaFacet": label, "title": f"{prefix} {i + 1}",
             "content": f"{prefix} {i + 1} content."} for i in range(count)]


def edge_reply(strength=0.8, suggestion="The connection is relatively strong."):
    return json.dumps({"connectionStrength": strength, "suggestion": suggestion})


def brief_reply(title="A brief", refs=None, sections=None):
    refs = refs if refs is not None else [{"citation_id": 1, "paper_title": "Writing with AI"}]
    body = {"title": title, "problemDescription": "Problem [1].",
            "proposedDesign": "Design.", "evaluationMethod": "Evaluation.",
            "contributionImpact": "Impact."}
    if sections:
        body.update(sections)
    return json.dumps({"researchBrief": body, "literatureReferences": refs})


def summary_reply(text="Prior work @ref[249921] studies AI writing.", ids=("249921",)):
    return json.dumps({"litReviewSummary": text, "corpusIds": list(ids)})


def analysis_reply(entries=None):
    if entries is None:
        entries = [{
            "section_title": "Evaluation practices in AI writing tools",
            "paper_title": "Writing with AI @ref[249921]",
            "corpus_id": "249921",
            "key_section": "The paper evaluates with 20 writers over two weeks.",
            "connection_to_ideas": "Relates to the evaluation facet on the canvas.",
            "next_steps": ["Design a comparative writer study."],
        }]
    return json.dumps({"analysis": entries})


def node_analysis_reply(sections=1, suggestions=1):
    secs = [{
        "section_title": f"Relevant section {i + 1}",
        "paper_title": "Writing with AI @ref[249921]",
        "key_section": "Describes a feedback loop for character design.",
        "connection_to_ideas": "Supports the proposed design node.",
    } for i in range(sections)]
    sugg = [f"Actionable refinement {i + 1}." for i in range(suggestions)]
    return json.dumps({"most_relevant_sections": secs, "suggestions": sugg})


def qa_reply(text="One paper interviewed 20 writers @ref[249921]."):
    return json.dumps({"litReviewResponse": text})


def naive_citation_scan(text):
    """Character-by-character reference scanner, independent of the regex
    parser: a tag is "@ref[" + non-empty bracket-free token + "]"."""
    segments = []
    buffer = []
    i = 0
    while i < len(text):
        if text.startswith("@ref[", i):
            close = text.find("]", i + 5)
            token = text[i + 5:close] if close != -1 else None
            if token and "[" not in token:
                if buffer:
                    segments.append(("text", "".join(buffer)))
                    buffer = []
                segments.append(("cite", token))
                i = close + 1
                continue
        buffer.append(text[i])
        i += 1
    if buffer or not segments:
        segments.append(("text", "".join(buffer)))
    return segments


def random_tagged_text(rng):
    import string
    alphabet = string.ascii_letters + string.digits + " @[]rf.,!"
    parts = []
    for _ in range(rng.randint(0, 8)):
        kind = rng.random()
        if kind < 0.4:
            parts.append("".join(rng.choice(alphabet)
                         for _ in range(rng.randint(0, 12))))
        elif kind < 0.7:
            token = "".join(rng.choice(string.digits)
                            for _ in range(rng.randint(1, 7)))
            parts.append(f"@ref[{token}]")
        elif kind < 0.85:
            parts.append(rng.choice(["@ref[", "@ref[]", "@ref[x", "ref[1]", "@ref"]))
        else:
            parts.append(rng.choice(["[", "]", "@", "@@ref[7]"]))
    return "".join(parts)
