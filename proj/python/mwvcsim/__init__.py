"""Deterministic simulator and verifier for a distributed (2+eps)-approximation
of minimum weight vertex cover.

The heavy lifting happens in the C++ extension; this wrapper decodes its JSON
results into dictionaries. Exact rationals are reported as "p/q" strings next
to float convenience values.
"""

from __future__ import annotations

import json
from typing import Optional

from ._core import (  # noqa: F401
    __version__,
    canonicalize_graph,
    feasible_k_delta,
    feasible_k_n,
    generate_graph,
    lower_bound_ratio_from_degree,
    lower_bound_ratio_from_n,
)
from . import _core


def run(
    graph: str,
    eps: str = "1",
    variant: str = "local",
    schedule: Optional[dict[int, int]] = None,
    order_seed: Optional[int] = None,
    round_cap: int = 0,
    verify: bool = True,
    with_trace: bool = False,
) -> dict:
    """Simulate one run on a graph given in text form; returns the report."""
    return json.loads(
        _core.run(graph, eps, variant, schedule, order_seed, round_cap, verify, with_trace)
    )


def brute_force(graph: str) -> dict:
    """Exact minimum weight vertex cover for small graphs (n <= 24)."""
    return json.loads(_core.brute_force(graph))


def sequential(graph: str, eps: str = "1") -> dict:
    """Sequential reference reduction and its threshold set."""
    return json.loads(_core.sequential(graph, eps))


def round_bound(d: int, eps: str = "1") -> dict:
    """Iteration bound and cap for a vertex of degree d."""
    return json.loads(_core.round_bound(d, eps))
