"""The full verification matrix, run as one deterministic report."""

from __future__ import annotations

import json

from . import theorems
from .families import Dicyclic, GenQuaternion, family_size
from .graphs import Kind

MIN_LEVEL = 2


def _row(criterion, claim, target, passed, detail=None):
    return {"criterion": criterion, "claim": claim, "target": target, "passed": bool(passed), "detail": detail}


def _guarded(criterion, claim, target, check):
    """Run ``check() -> (passed, detail)``; an exception becomes a failed row."""
    try:
        passed, detail = check()
    except Exception as exc:  # a broken family table must fail the row, not the run
        passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return _row(criterion, claim, target, passed, detail)


def _cor32_rows(n):
    try:
        c = theorems.cor32(n)
    except Exception as exc:
        err = {"error": f"{type(exc).__name__}: {exc}"}
        return [_row(1, "cor32.lq", f"level {n}", False, err), _row(2, "cor32.ld", f"level {n}", False, err)]
    return [
        _row(1, "cor32.lq", c["lq"]["family"], c["lq"]["passed"], c["lq"]),
        _row(2, "cor32.ld", c["ld"]["family"], c["ld"]["passed"], c["ld"]),
    ]


def _thm4(n):
    r = theorems.theorem4_witness(n)
    detail = {k: v for k, v in r.as_dict().items() if k != "mapping"}
    return r.passed and r.isomorphic_by_signature, detail


def _thm5(n):
    r = theorems.theorem5_witness(n)
    return r.passed, {k: v for k, v in r.as_dict().items() if k != "mapping"}


def _decomp(spec, kind, expected):
    d = theorems.decomposition_check(spec, kind, expected)
    return d["passed"], d


def _cor34(n):
    c = theorems.cor34(n)
    return c["passed"] and c["witness"] == ["r(2)", "r(3)"], c


def _prop33():
    q = theorems.qinf_strictness()
    return q["passed"], q


def _iso(max_vertices):
    iso = theorems.iso_agreement(max_vertices)
    return iso["disagreement"] is None, iso


def run_suite(max_level: int = 5) -> dict:
    """Run every check; level-indexed claims cover levels ``2 .. max_level``.

    Fixed-scope checks (the equality corpus, oracle agreement, isomorphism
    agreement) are restricted to groups with at most ``2**(max_level + 1)``
    elements, so from level 5 on they run at full scope. The report holds no timings or other run-dependent values, so identical
    arguments give identical output.
    """
    levels = range(MIN_LEVEL, max_level + 1)
    bound = 2 ** (max_level + 1)
    rows = []

    for n in levels:
        rows += _cor32_rows(n)

    for n in levels:
        target = str(GenQuaternion(n))
        rows.append(_guarded(3, "decomp.pow.genq", target,
                             lambda: _decomp(GenQuaternion(n), Kind.POW, theorems.expected_genq_signature(n))))
    for m in range(2, 9):
        target = str(Dicyclic(m))
        rows.append(_guarded(3, "decomp.com.dicyclic", target,
                             lambda: _decomp(Dicyclic(m), Kind.COM, theorems.expected_dicyclic_com_signature(m))))

    for n in levels:
        rows.append(_guarded(4, "thm4", f"level {n}", lambda: _thm4(n)))
    for n in levels:
        rows.append(_guarded(5, "thm5", f"level {n}", lambda: _thm5(n)))

    for spec in (s for s in theorems.theorem_corpus() if family_size(s) <= bound):
        for claim, check in (("thm1", theorems.check_thm1), ("thm2", theorems.check_thm2)):
            rows.append(_guarded(6, claim, str(spec), lambda: (lambda v: (v.consistent, v.as_dict()))(check(spec))))

    for chain in ("lq", "ld"):
        for kind in Kind:
            for n in levels:
                rows.append(_guarded(7, f"chain.{chain}.{kind}", f"level {n}",
                                     lambda: (theorems.restriction_consistency(chain, kind, n), None)))

    for n in levels:
        rows.append(_guarded(8, "cor34", str(theorems.CHAINS["dinf"](n)), lambda: _cor34(n)))

    rows.append(_guarded(9, "prop33", "qinf:default", _prop33))

    for spec in theorems.oracle_truncations(min(64, bound)):
        rows.append(_guarded(10, "oracle.adjacency", str(spec),
                             lambda: (lambda bad: (bad is None, bad))(theorems.oracle_agreement(spec))))
    iso_n = min(12, bound)
    rows.append(_guarded(10, "oracle.isomorphism", f"recognized graphs <= {iso_n} vertices", lambda: _iso(iso_n)))

    failed = [r for r in rows if not r["passed"]]
    return {
        "max_level": max_level,
        "rows": rows,
        "n_rows": len(rows),
        "n_failed": len(failed),
        "first_failure": {k: failed[0][k] for k in ("criterion", "claim", "target")} if failed else None,
        "passed": not failed,
    }


def suite_json(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True) + "\n"


def suite_text(report: dict) -> str:
    """One line per (claim, target) plus a per-criterion summary."""
    lines = []
    width = max(len(r["claim"]) for r in report["rows"])
    for r in report["rows"]:
        mark = "PASS" if r["passed"] else "FAIL"
        lines.append(f"[{r['criterion']:>2}] {r['claim']:<{width}}  {r['target']:<36} {mark}")
    lines.append("")
    by_crit: dict[int, list] = {}
    for r in report["rows"]:
        by_crit.setdefault(r["criterion"], []).append(r["passed"])
    for c in sorted(by_crit):
        ok = by_crit[c]
        lines.append(f"criterion {c:>2}: {sum(ok)}/{len(ok)} {'PASS' if all(ok) else 'FAIL'}")
    total = "PASS" if report["passed"] else "FAIL"
    lines.append(f"overall: {report['n_rows'] - report['n_failed']}/{report['n_rows']} {total}")
    return "\n".join(lines) + "\n"
