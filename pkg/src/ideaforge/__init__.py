"""ideaforge: literature-grounded research idea development.

Represents a research idea as a graph of typed facet nodes, grounds all
generation in a user-curated paper collection, and composes selected nodes
into cited research briefs. The HTTP API in ``ideaforge.server`` exposes the
whole service to the canvas UI and scripted clients.
"""

__version__ = "0.1.0"
