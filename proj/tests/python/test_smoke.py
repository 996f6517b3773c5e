"""Smoke tests for the python bindings."""

from fractions import Fraction

import pytest

import mwvcsim


def frac(s: str) -> Fraction:
    return Fraction(s)


def test_generate_and_canonicalize():
    text = mwvcsim.generate_graph("star", 7, weights="int:1:100", seed=3)
    assert text.splitlines()[0] == "7 6"
    assert mwvcsim.canonicalize_graph(text) == text
    again = mwvcsim.generate_graph("star", 7, weights="int:1:100", seed=3)
    assert again == text


def test_run_verifies_within_bound():
    for variant in ("local", "congest"):
        for eps in ("1/10", "1/2", "2"):
            graph = mwvcsim.generate_graph(
                "erdos_renyi", 10, weights="int:1:100", seed=5, p="0.5"
            )
            report = mwvcsim.run(graph, eps=eps, variant=variant)
            ver = report["verification"]
            assert ver["ok"] is True
            assert ver["cover_valid"] is True
            assert ver["payment_valid"] is True
            if "ratio" in ver:
                assert frac(ver["ratio"]) <= 2 + frac(eps)


def test_run_is_deterministic():
    graph = mwvcsim.generate_graph("complete", 8, weights="rat:16", seed=1)
    a = mwvcsim.run(graph, eps="1/2", variant="congest", with_trace=True)
    b = mwvcsim.run(graph, eps="1/2", variant="congest", with_trace=True)
    assert a == b


def test_trace_has_wire_kinds():
    graph = mwvcsim.generate_graph("cycle", 6, weights="int:1:100", seed=4)
    report = mwvcsim.run(graph, eps="1/2", variant="congest", with_trace=True)
    trace = report["trace_jsonl"]
    assert '"kind":"initial_weight"' in trace
    assert '"kind":"request_degree"' in trace
    assert '"kind":"budget_accept"' in trace
    local = mwvcsim.run(graph, eps="1/2", variant="local", with_trace=True)
    assert '"kind":"request"' in local["trace_jsonl"]


def test_staggered_schedule():
    graph = mwvcsim.generate_graph("path", 6, weights="int:1:20", seed=9)
    report = mwvcsim.run(graph, eps="1", schedule={0: 3, 4: 5})
    assert report["verification"]["ok"] is True


def test_brute_force_exact():
    graph = "3 3\n0 1\n1 1\n2 1\n0 1\n0 2\n1 2\n"
    result = mwvcsim.brute_force(graph)
    assert result["weight"] == "2"
    assert result["cover"] == [0, 1]


def test_sequential_reference():
    graph = mwvcsim.generate_graph("cycle", 9, weights="int:1:50", seed=2)
    result = mwvcsim.sequential(graph, eps="1/2")
    assert result["payment_valid"] is True
    assert result["cover_valid"] is True
    assert result["matches_threshold_set"] is True


def test_bounds_surface():
    assert mwvcsim.lower_bound_ratio_from_n("64", 2) == "5/2"
    assert mwvcsim.lower_bound_ratio_from_degree("16", 3) == "5/2"
    assert mwvcsim.feasible_k_n("1/4", "100") == 3
    assert mwvcsim.feasible_k_delta("1/2", "20") == 4
    bound = mwvcsim.round_bound(1, "2")
    assert bound["bound"] == "4"
    assert bound["cap"] == 5
    assert mwvcsim.round_bound(256, "2")["kv"] == "8/3"


def test_errors_surface_as_exceptions():
    with pytest.raises(ValueError):
        mwvcsim.run("2 1\n0 1\n1 1\n0 1\n", eps="0")
    with pytest.raises(ValueError):
        mwvcsim.generate_graph("nonsense", 3)
    with pytest.raises(RuntimeError):
        mwvcsim.canonicalize_graph("not a graph")
