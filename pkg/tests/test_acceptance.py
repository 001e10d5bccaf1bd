"""Acceptance criteria, each run at its stated scope and time budget.

Every test records one PASS/FAIL line, printed by the terminal summary hook in
conftest.py, then asserts.
"""

import subprocess
import sys
import time

from grouphier.families import Dicyclic, GenQuaternion, InfiniteDihedralWindow, LocallyDihedralTrunc, LocallyQuaternionTrunc, build_family
from grouphier.graphs import Kind, build_graph, decomposition_signature, edge_difference, edge_set_equal, edge_subset, graphs_isomorphic
from grouphier.theorems import (
    check_thm1,
    check_thm2,
    expected_dicyclic_com_signature,
    expected_genq_signature,
    iso_agreement,
    oracle_agreement,
    oracle_truncations,
    qinf_strictness,
    restriction_consistency,
    theorem4_witness,
    theorem5_witness,
    theorem_corpus,
)


def graphs(spec):
    view = build_family(spec)
    return view, {k: build_graph(view, k) for k in Kind}


def test_01_lq_hierarchy_collapses(record):
    start = time.perf_counter()
    bad = []
    for n in range(2, 8):
        _, g = graphs(LocallyQuaternionTrunc(n))
        if not (edge_set_equal(g[Kind.POW], g[Kind.EPOW]) and edge_set_equal(g[Kind.EPOW], g[Kind.COM])):
            bad.append(n)
    elapsed = time.perf_counter() - start
    ok = record(1, "LQ truncations: Pow = EPow = Com, n = 2..7, < 5 s", not bad and elapsed < 5,
                f"{elapsed:.2f}s, failing levels {bad}" if bad else f"{elapsed:.2f}s")
    assert ok, (bad, elapsed)


def test_02_ld_split(record):
    bad = []
    for n in range(2, 8):
        view, g = graphs(LocallyDihedralTrunc(n))
        flipped = {lab for x, lab in zip(view.elements, view.labels) if x.flip}
        missing = edge_difference(g[Kind.COM], g[Kind.EPOW])
        named = [p for p in missing if p[0] in flipped and p[1] in flipped]
        ok = edge_set_equal(g[Kind.POW], g[Kind.EPOW]) and edge_subset(g[Kind.EPOW], g[Kind.COM]) and named
        if not ok:
            bad.append(n)
    ok = record(2, "LD truncations: Pow = EPow, EPow < Com with two-reflection witness, n = 2..7", not bad,
                f"failing levels {bad}" if bad else "")
    assert ok


def test_03_decomposition_formulas(record):
    bad = []
    for n in range(2, 8):
        sig = decomposition_signature(build_graph(build_family(GenQuaternion(n)), Kind.POW))
        if sig != expected_genq_signature(n):
            bad.append((f"genq:{n}", str(sig)))
    for m in range(2, 9):
        sig = decomposition_signature(build_graph(build_family(Dicyclic(m)), Kind.COM))
        if sig != expected_dicyclic_com_signature(m):
            bad.append((f"dicyclic:{m}", str(sig)))
    ok = record(3, "signatures of Pow(genq:n), n = 2..7 and Com(dicyclic:m), m = 2..8", not bad, str(bad) if bad else "")
    assert ok


def test_04_quaternion_power_to_dihedral_commuting(record):
    bad = []
    for n in range(2, 8):
        r = theorem4_witness(n)
        g1 = build_graph(build_family(LocallyQuaternionTrunc(n)), Kind.POW)
        g2 = build_graph(build_family(LocallyDihedralTrunc(n)), Kind.COM)
        iso = graphs_isomorphic(g1, g2)
        if not (r.passed and iso.isomorphic and iso.method == "signature"):
            bad.append(n)
    ok = record(4, "Pow(lq:n) ~ Com(ld:n) by explicit map and signature, n = 2..7", not bad,
                f"failing levels {bad}" if bad else "")
    assert ok


def test_05_dinf_commuting_to_dihedral_power(record):
    bad = [n for n in range(2, 8) if not theorem5_witness(n).passed]
    ok = record(5, "Com(dinf window) ~ Pow(ld:n) by explicit map, n = 2..7", not bad,
                f"failing levels {bad}" if bad else "")
    assert ok


def test_06_equality_criteria_corpus(record):
    start = time.perf_counter()
    corpus = theorem_corpus()
    bad = []
    for spec in corpus:
        view = build_family(spec)
        for check in (check_thm1, check_thm2):
            if not check(view).consistent:
                bad.append(f"{check.__name__}:{spec}")
    elapsed = time.perf_counter() - start
    ok = record(6, f"equality criteria consistent on {len(corpus)} groups, < 30 s", not bad and elapsed < 30,
                f"{elapsed:.2f}s" + (f", inconsistent {bad}" if bad else ""))
    assert ok


def test_07_restriction_consistency(record):
    bad = [(chain, str(kind), n) for chain in ("lq", "ld") for kind in Kind for n in range(2, 7)
           if not restriction_consistency(chain, kind, n)]
    ok = record(7, "chain restriction consistency, lq and ld, all kinds, n = 2..6", not bad, str(bad) if bad else "")
    assert ok


def test_08_dinf_windows(record):
    bad = []
    for n in range(2, 7):
        _, g = graphs(InfiniteDihedralWindow.default(n))
        diff = edge_difference(g[Kind.EPOW], g[Kind.POW])
        ok = (edge_subset(g[Kind.POW], g[Kind.EPOW]) and ("r(2)", "r(3)") in diff
              and edge_set_equal(g[Kind.EPOW], g[Kind.COM]))
        if not ok:
            bad.append(n)
    ok = record(8, "dinf windows 0..2^n-1: Pow < EPow = Com with (r(2), r(3)), n = 2..6", not bad,
                f"failing levels {bad}" if bad else "")
    assert ok


def test_09_qinf_strictness(record):
    q = qinf_strictness()
    ok = (q["passed"]
          and q["pow_epow"]["witness"] == ["c(0/1|2,0)", "c(0/1|3,0)"]
          and q["epow_com"]["witness"] == ["c(0/1|1,0)", "c(0/1|0,1)"])
    ok = record(9, "qinf default window: Pow < EPow < Com with (x_g^2, x_g^3) and (x_g, x_h)", ok,
                f"{q['pow_epow']['witness']} {q['epow_com']['witness']}")
    assert ok


def test_10_oracle_agreement(record):
    specs = oracle_truncations(64)
    bad = [d for d in (oracle_agreement(s) for s in specs) if d is not None]
    iso = iso_agreement(12)
    ok = record(10, f"fast path = generic on {len(specs)} truncations <= 64; signature = backtracking on {iso['pairs']} pairs",
                not bad and iso["disagreement"] is None,
                (str(bad[:3]) if bad else "") + (f" iso {iso['disagreement']}" if iso["disagreement"] else ""))
    assert ok


def test_11_suite_is_deterministic(record):
    cmd = [sys.executable, "-m", "grouphier", "suite", "--max-level", "5", "--format", "json"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    all_pass = all(r.returncode == 0 for r in runs)
    ok = record(11, "two `suite --max-level 5 --format json` runs are byte-identical", same and all_pass,
                f"{len(runs[0].stdout)} bytes, exit codes {[r.returncode for r in runs]}")
    assert ok
