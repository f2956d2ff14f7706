"""Acceptance gate: each criterion reports one PASS/FAIL line."""
import random
import time
from fractions import Fraction

import pytest

from approxvert.addm import CoreAddm, addm_run
from approxvert.common import HashedPartition, IdRegistry
from approxvert.cover import CutRegions, basic_cut, h_correctness, is_strong_approx_vrep
from approxvert.errors import ApproxVertError
from approxvert.ga import CoreGa, ga_run
from approxvert.generators import gen_example_A2, gen_polar_minkowski_seq, gen_zonotope3, grid_generators, suite
from approxvert.hrep import index_set
from approxvert.numerics import to_rational
from approxvert.pipeline import approximate, with_prefix
from approxvert.verify import (
    brute_force_vertices,
    check_face_incidence,
    check_kappa,
    check_parity,
    check_sandwich,
    check_subgraph,
    float_error_audit,
)

EPS = ["1", "1/10", "1/100", "1/1000"]


def _verdict(report_line, n, name, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    extra = f" ({detail})" if detail else ""
    report_line(f"{status} criterion {n}: {name}{extra}")
    for f in failures[:10]:
        report_line(f"    {f}")
    assert not failures


# ---------------------------------------------------------------------------
# one instrumented sweep over the suite serves criteria 2, 4, 5 and 8


@pytest.fixture(scope="module")
def sweep():
    out = {"sandwich": [], "parity": [], "subset": [], "audit": [], "runs": 0, "probes": 0,
           "seconds": 0.0}
    t0 = time.monotonic()
    for F in suite():
        Q = with_prefix(F.P)
        verts = F.vertices if F.vertices is not None else brute_force_vertices(F.P)
        for eps_text in EPS:
            eps = to_rational(eps_text)
            tag = f"{F.name} eps={eps_text}"
            reg = IdRegistry(Q.d)

            def observe(i, st, tag=tag):
                try:
                    check_parity(st.g, Q, 32, seed=i, independence_pairs=8)
                    check_kappa(st.g, Q)
                    out["probes"] += 32
                except ApproxVertError as exc:
                    out["parity"].append(f"{tag} iteration {i}: {exc}")

            try:
                g, gc, grep = ga_run(Q, eps, registry=reg, audit=True, observer=observe)
            except ApproxVertError as exc:
                out["audit"].append(f"{tag}: {type(exc).__name__}: {exc}")
                continue
            a, ac, arep = addm_run(Q, eps, registry=reg)
            out["runs"] += 2
            for alg, rep in (("ga", grep), ("addm", arep)):
                s = check_sandwich(Q, rep.points, eps, vertices_P=verts)
                if not s.ok:
                    out["sandwich"].append(f"{tag} {alg}: missing {len(s.missing)}, outside {len(s.outside)}")
            try:
                check_subgraph(g, a)
            except ApproxVertError as exc:
                out["subset"].append(f"{tag}: {exc}")
            bad = [v for v in gc if gc[v] != ac.get(v)]
            if bad:
                out["subset"].append(f"{tag}: coordinates differ on {bad[:5]}")
    out["seconds"] = time.monotonic() - t0
    return out


def test_criterion_1_example_exact(report_line):
    t0 = time.monotonic()
    failures = []
    ex = gen_example_A2()
    u = ex.u
    if brute_force_vertices(ex.P) != sorted(u[k] for k in range(1, 8)):
        failures.append("vertices of P differ from u1..u7")
    if brute_force_vertices(ex.P8) != sorted(u[k] for k in (1, 3, 4, 6, 7, 8, 9, 10, 11, 12)):
        failures.append("vertices of P' differ from the printed list")
    for k, J in ex.J_eq.items():
        P = ex.P if k <= 7 else ex.P8
        if set(index_set(P, u[k], "=")) != J:
            failures.append(f"J_=(u{k}) != {sorted(J)}")
    if set(index_set(ex.P, ex.v[2], ">=")) != {1, 2, 3, 5, 6}:
        failures.append("J_>=(v2)")
    if set(index_set(ex.P8, ex.v[9], ">=")) != {1, 2, 5, 8}:
        failures.append("J_>=(v9)")
    if set(index_set(ex.P8, ex.v[10], ">=")) != {1, 3, 6, 8}:
        failures.append("J_>=(v10)")
    if not is_strong_approx_vrep(ex.P, ex.V, Fraction(3, 10)):
        failures.append("V is not strong before the cut")
    cut = CutRegions(ex.h, ex.eps)
    out = basic_cut(ex.P, ex.eps, cut, ex.V)
    if is_strong_approx_vrep(ex.P8, out, ex.eps):
        failures.append("basic cut output is unexpectedly strong")
    hc = h_correctness(ex.P, ex.V, cut)
    if hc.ok or hc.violated != {"A2"}:
        failures.append(f"h-correctness verdict {hc.ok} violated {hc.violated}")
    dt = time.monotonic() - t0
    if dt >= 1.0:
        failures.append(f"runtime {dt:.2f}s >= 1s")
    _verdict(report_line, 1, "cover example, exact", failures, f"{dt:.2f}s")


def test_criterion_2_sandwich(sweep, report_line):
    _verdict(report_line, 2, "sandwich on the suite", sweep["sandwich"] + sweep["audit"],
             f"{sweep['runs']} runs, {sweep['seconds']:.0f}s")


def test_criterion_3_core_subgraph(report_line):
    t0 = time.monotonic()
    rng = random.Random(20240101)
    failures = []
    for script in range(500):
        d = rng.choice((2, 3))
        m = rng.randint(d + 2, 12)
        rule = HashedPartition(seed=script)
        reg = IdRegistry(d)
        ga, ad = CoreGa(d, reg, audit=True), CoreAddm(d, reg)
        try:
            for i in range(d + 2, m + 1):
                anchor = min(ga.g.vertices)
                ga.iterate(i, rule, anchor)
                ad.iterate(i, rule, anchor)
                check_subgraph(ga.g, ad.g)
                check_face_incidence(ga.g, ad.g.I, d)
        except ApproxVertError as exc:
            failures.append(f"script {script} (d={d}, m={m}): {exc}")
    dt = time.monotonic() - t0
    if dt >= 60:
        failures.append(f"runtime {dt:.0f}s >= 60s")
    _verdict(report_line, 3, "core subgraph and face incidence, 500 scripts", failures, f"{dt:.1f}s")


def test_criterion_4_parity(sweep, report_line):
    _verdict(report_line, 4, "crossing parity after every iteration", sweep["parity"],
             f"{sweep['probes']} probes")


def test_criterion_5_ga_subset_addm(sweep, report_line):
    _verdict(report_line, 5, "GA vertices and edges inside ADDM, equal coordinates", sweep["subset"])


def test_criterion_6_float_audit(report_line):
    t0 = time.monotonic()
    failures = []
    n = 0
    for F in suite():
        Q = with_prefix(F.P)
        verts = F.vertices
        for eps in ("1/10", "1/1000", "1/1000000"):
            for alg in ("ga", "addm"):
                try:
                    rep, _ = float_error_audit(Q, eps, alg)
                except ApproxVertError as exc:
                    failures.append(f"{F.name} {alg} eps={eps}: aborted with {type(exc).__name__}: {exc}")
                    continue
                n += 1
                if not rep.passed:
                    failures.append(
                        f"{F.name} {alg} eps={eps}: E={rep.E:.3e} bound={rep.bound:.3e} "
                        f"bad={rep.bad_decisions} sandwich={rep.sandwich.ok}"
                    )
        del verts
    dt = time.monotonic() - t0
    _verdict(report_line, 6, "float error audit", failures, f"{n} paired runs, {dt:.0f}s")


def test_criterion_7_trends(report_line):
    t0 = time.monotonic()
    failures = []
    Z = with_prefix(gen_zonotope3(grid_generators(13)).P)
    counts = {}
    for alg in ("ga", "addm"):
        counts[alg] = [len(approximate(Z, to_rational(e), alg)[2]) for e in EPS]
        # EPS is decreasing, so counts must be non-decreasing along it
        if any(a > b for a, b in zip(counts[alg], counts[alg][1:])):
            failures.append(f"zonotope {alg} counts not monotone: {counts[alg]}")
    for k, e in enumerate(EPS):
        if counts["ga"][k] > counts["addm"][k]:
            failures.append(f"zonotope eps={e}: GA {counts['ga'][k]} > ADDM {counts['addm'][k]}")
    F = gen_polar_minkowski_seq(2)[-1]
    for e in ("1/10", "1/100"):
        for alg in ("ga", "addm"):
            try:
                _, _, rep, Q = approximate(F.P, to_rational(e), alg)
            except ApproxVertError as exc:
                failures.append(f"polar seq(2) {alg} eps={e}: {type(exc).__name__}: {exc}")
                continue
            if not check_sandwich(Q, rep.points, e, vertices_P=F.vertices).ok:
                failures.append(f"polar seq(2) {alg} eps={e}: sandwich fails")
    dt = time.monotonic() - t0
    if dt >= 600:
        failures.append(f"runtime {dt:.0f}s")
    _verdict(report_line, 7, "trends on zonotope and polar sequence", failures,
             f"GA {counts['ga']} ADDM {counts['addm']} for eps {EPS}, {dt:.0f}s")


def test_criterion_8_structural_audits(sweep, report_line):
    _verdict(report_line, 8, "structural audits after every mutation", sweep["audit"],
             f"{len(EPS) * len(suite())} audited GA runs")
