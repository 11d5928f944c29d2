"""yeargraph: explore per-year tabular records as a time-varying property graph.

The package converts heterogeneous per-year CSV tables into a single
multi-partite property graph (applicants on one side, one partition per
attribute type on the other), answers bipartite attribute-vs-attribute
subgraph queries, lays the result out with a pinned force simulation, and
serves everything over an HTTP/JSON API for a browser companion UI.
"""

__version__ = "0.1.0"

from yeargraph.graph import EdgeRecord, NodeRecord, PropertyGraph, SubgraphView

__all__ = ["EdgeRecord", "NodeRecord", "PropertyGraph", "SubgraphView", "__version__"]
