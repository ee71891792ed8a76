"""Shared error taxonomy.

Every error carries a stable ``code`` (its class name) that the HTTP layer
echoes verbatim in response envelopes, so clients can switch on codes without
parsing messages.
"""

from __future__ import annotations

from typing import Any, Optional


class IdeaForgeError(Exception):
    """Base class for all service errors."""

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.details = details

    @property
    def code(self) -> str:
        return self.__class__.__name__


# --- idea-graph ---

class UnknownProject(IdeaForgeError):
    pass


class UnknownNode(IdeaForgeError):
    pass


class UnknownEdge(IdeaForgeError):
    pass


class UnknownBrief(IdeaForgeError):
    pass


class SelfLoop(IdeaForgeError):
    pass


class DuplicateEdge(IdeaForgeError):
    pass


class EmptySelection(IdeaForgeError):
    pass


class CorruptDocument(IdeaForgeError):
    pass


class RevisionConflict(IdeaForgeError):
    pass


# --- paper-library ---

class EmptyQuery(IdeaForgeError):
    pass


class EmptyCollection(IdeaForgeError):
    pass


class EmptyText(IdeaForgeError):
    pass


class UnknownPaper(IdeaForgeError):
    pass


class ProviderUnavailable(IdeaForgeError):
    pass


class ExtractionFailed(IdeaForgeError):
    pass


class CollectionBudgetExceeded(IdeaForgeError):
    pass


# --- prompt-engine ---

class MissingSlot(IdeaForgeError):
    pass


class MalformedResponse(IdeaForgeError):
    pass


class SchemaViolation(IdeaForgeError):
    """Response parsed as JSON but does not satisfy its schema.

    ``document`` holds the parsed value and ``violations`` the individual
    failures, so callers may apply a policy repair (clamp a range, override a
    facet label) instead of failing outright.
    """

    def __init__(self, message: str = "", document: Any = None,
                 violations: Optional[list] = None, **details: Any):
        super().__init__(message, **details)
        self.document = document
        self.violations = violations or []


# --- suggestion-service ---

class EmptyNodeContent(IdeaForgeError):
    pass


class EmptyFacetContent(IdeaForgeError):
    pass


class EmptyPrompt(IdeaForgeError):
    pass


class UnknownAction(IdeaForgeError):
    pass


class UnresolvedReference(IdeaForgeError):
    pass


# --- llm-gateway ---

class ProviderError(IdeaForgeError):
    pass


class FixtureMiss(IdeaForgeError):
    pass
