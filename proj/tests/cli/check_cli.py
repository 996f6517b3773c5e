#!/usr/bin/env python3
"""End-to-end checks for the command-line tool. Usage: check_cli.py <binary>"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = []


def run(*args, expect=0):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    if expect is not None and proc.returncode != expect:
        failures.append(f"{args}: exit {proc.returncode} != {expect}\n{proc.stderr}")
    return proc


def check(cond, label):
    if not cond:
        failures.append(label)


def main():
    tmp = Path(tempfile.mkdtemp())

    # single verified run on the smallest graph
    p = run("run", "--family", "single_edge", "--n", "2", "--eps", "2", "--no-meta")
    doc = json.loads(p.stdout)
    check(doc["result"]["cover"] == [0, 1], "run: cover")
    check(doc["verification"]["ratio"] == "2", "run: exact ratio")
    check(doc["verification"]["ok"] is True, "run: verification ok")

    # config errors carry exit code 2 and name the field
    p = run("run", "--family", "single_edge", "--n", "2", "--eps", "0", expect=2)
    check("epsilon" in p.stderr, "run: eps error names the field")
    run("run", "--graph", str(tmp / "missing.graph"), expect=2)
    run("run", "--family", "star", "--n", "0", expect=2)
    run("run", "--family", "single_edge", "--n", "2", "--variant", "bogus", expect=2)

    # edgeless: no ratio, vacuous cover, success
    p = run("run", "--family", "path", "--n", "1", "--no-meta")
    doc = json.loads(p.stdout)
    check("ratio" not in doc["verification"], "run: edgeless has no ratio")
    check(doc["verification"]["cover_valid"] is True, "run: edgeless cover valid")

    # gen writes a file that parses back; same seed is byte-identical
    g1 = tmp / "a.graph"
    g2 = tmp / "b.graph"
    run("gen", "--family", "star", "--n", "7", "--weights", "int:1:100", "--seed", "3",
        "--out", str(g1))
    run("gen", "--family", "star", "--n", "7", "--weights", "int:1:100", "--seed", "3",
        "--out", str(g2))
    check(g1.read_bytes() == g2.read_bytes(), "gen: deterministic")
    p = run("run", "--graph", str(g1), "--eps", "1/2", "--no-meta")
    doc = json.loads(p.stdout)
    check(doc["graph"]["max_degree"] == 6, "gen: parses back to a star")

    # sweep: full grid, deterministic csv, all rows verified
    args = ("sweep", "--family", "erdos_renyi", "--n-list", "5,7", "--p", "0.4",
            "--weights", "int:1:100", "--eps", "1/2,2", "--seeds", "0..2",
            "--variant", "both")
    p1 = run(*args)
    p2 = run(*args)
    rows = [r for r in p1.stdout.splitlines() if r and not r.startswith("family,")]
    check(len(rows) == 2 * 2 * 3 * 2, "sweep: row count")
    check(all(",ok," in r for r in rows), "sweep: all rows ok")
    check(p1.stdout == p2.stdout, "sweep: deterministic")
    run("sweep", "--family", "path", "--n-list", "", "--eps", "", expect=2)

    # bounds: feasibility flips exactly where the inequality does
    p = run("bounds", "--k", "1..5", "--log2n", "100", "--eps", "1/4", "--no-meta")
    doc = json.loads(p.stdout)
    flips = [r["feasible_n"] for r in doc["rows"]]
    check(flips == [True, True, True, False, False], "bounds: feasibility flips at k=4")
    check(doc["feasible_k_n"] == 3, "bounds: largest feasible k")
    p = run("bounds", "--k", "3", "--log2Delta", "16", "--eps", "1", "--no-meta")
    doc = json.loads(p.stdout)
    check(doc["rows"][0]["log2_delta_Delta"] == "5/2", "bounds: degree ratio value")
    p = run("bounds", "--k", "", "--log2n", "8", "--no-meta")
    check(json.loads(p.stdout)["rows"] == [], "bounds: empty range is an empty table")

    # determinism of a full run artifact (trace and report bytes)
    t1, t2 = tmp / "t1.jsonl", tmp / "t2.jsonl"
    a1 = run("run", "--family", "cycle", "--n", "9", "--weights", "int:1:100", "--seed",
             "11", "--eps", "1/2", "--variant", "congest", "--schedule", "stagger:4",
             "--no-meta", "--trace-out", str(t1))
    a2 = run("run", "--family", "cycle", "--n", "9", "--weights", "int:1:100", "--seed",
             "11", "--eps", "1/2", "--variant", "congest", "--schedule", "stagger:4",
             "--no-meta", "--trace-out", str(t2))
    check(a1.stdout == a2.stdout, "run: deterministic report")
    check(t1.read_bytes() == t2.read_bytes(), "run: deterministic trace")

    # csv single-row format
    p = run("run", "--family", "single_edge", "--n", "2", "--eps", "2", "--format", "csv")
    lines = p.stdout.splitlines()
    check(len(lines) == 2 and lines[0].startswith("family,"), "run: csv layout")

    if failures:
        print("FAILURES:")
        for f in failures:
            print(" -", f)
        sys.exit(1)
    print(f"cli checks passed")


if __name__ == "__main__":
    main()
