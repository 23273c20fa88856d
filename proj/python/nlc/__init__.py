"""Hybrid node/link community detection."""

from ._core import (
    Graph,
    ParseError,
    UndefinedMetricError,
    __version__,
    conductance,
    detect,
    enmi,
    fit,
    map_equation,
    wac,
)

__all__ = [
    "Graph",
    "ParseError",
    "UndefinedMetricError",
    "__version__",
    "conductance",
    "detect",
    "enmi",
    "fit",
    "map_equation",
    "wac",
]
