"""The ten acceptance criteria, one test each.

Every test records a PASS/FAIL line (printed in the terminal summary) before
asserting, so a failing criterion still reports what it measured.
"""
import time
import timeit

import numpy as np
import pytest

from apa import oracle
from apa.apa import VARIANTS, buchi_apa, cobuchi_apa, naive_live_groups, parity_apa
from apa.fixpoint import buchi_mask, cobuchi_mask, parity_coop_mask, tbuchi_mask, tcobuchi_mask
from apa.genbench import chain, clique, loglog_slope, random_suite, time_call
from apa.templates import Assumption, ConditionalLiveGroup, render_ltl

import suite


def _groups(a: Assumption):
    return [(set(c.condition), [set(h) for h in c.groups]) for c in a.cond_live]


def _failures(kinds, check, variants=VARIANTS):
    bad = []
    count = 0
    for i, G, obj, variant, r in suite.cases(kinds, variants):
        count += 1
        v = suite.verdicts(i, obj.kind, variant)
        if not check(v):
            bad.append((i, obj.kind, variant))
    return count, bad


def test_criterion_01_seven_vertex_golden(report):
    G = suite.load("seven")
    v = {f"v{k}": G.vertex_id(f"v{k}") for k in range(1, 8)}
    expected_groups = [
        ({v["v1"]}, [{(v["v1"], v["v2"])}]),
        ({v["v3"]}, [{(v["v2"], v["v4"])}, {(v["v1"], v["v2"])}]),
    ]
    exact = True
    for variant in VARIANTS:
        r = parity_apa(G, variant=variant)
        a = r.assumption
        exact &= r.region == {v[f"v{k}"] for k in range(1, 7)}
        exact &= a.unsafe == {(v["v6"], v["v7"])}
        exact &= a.colive == {(v["v5"], v["v5"]), (v["v6"], v["v5"])}
        exact &= _groups(a) == expected_groups
    # timeit switches the garbage collector off while timing.
    times = sorted(timeit.repeat(lambda: parity_apa(G), number=1, repeat=500))
    best, median = times[0] * 1000, times[len(times) // 2] * 1000
    ok = exact and best < 1.0
    report(1, ok, f"exact match for all variants={exact}; best {best:.3f} ms, median {median:.3f} ms (limit 1 ms)")
    assert exact
    assert best < 1.0


def test_criterion_02_introductory_goldens(report):
    trap, ret, tri = suite.load("trap"), suite.load("return"), suite.load("triangle")
    p, q, r_ = (tri.vertex_id(x) for x in "pqr")
    ok = True
    for variant in VARIANTS:
        a = cobuchi_apa(trap, {trap.vertex_id("p")}, variant).assumption
        ok &= a.unsafe == {(trap.vertex_id("p"), trap.vertex_id("q"))} and not a.colive and not a.cond_live
        b = cobuchi_apa(ret, {ret.vertex_id("p")}, variant).assumption
        ok &= b.colive == {(ret.vertex_id("p"), ret.vertex_id("q"))} and not b.unsafe and not b.cond_live
        c = buchi_apa(tri, {p}, variant).assumption
        ok &= not c.unsafe and not c.colive
        ok &= [set().union(*c_.groups) for c_ in c.cond_live] == [{(q, p), (r_, p)}]
        ok &= all(len(c_.groups) == 1 for c_ in c.cond_live)
    report(2, ok, "trap: unsafe (p,q); return: co-live (p,q); triangle: one group {(q,p),(r,p)}; all variants")
    assert ok


def test_criterion_03_forced_progress_needs_no_assumption(report):
    G = suite.load("forced")
    target = {G.vertex_id("v0")}
    trivial = all(buchi_apa(G, target, variant).assumption.is_trivial for variant in VARIANTS)
    ltl = render_ltl(buchi_apa(G, target).assumption, G)
    naive = naive_live_groups(G, target)
    ok = trivial and ltl == "true" and naive == [{(G.vertex_id("v2"), G.vertex_id("v0"))}]
    report(3, ok, f"frontier extraction gives '{ltl}'; pre-based extraction would give {len(naive)} group(s)")
    assert ok


def test_criterion_04_acceleration(report):
    start = time.perf_counter()
    failures = []
    nu_larger = 0
    games = random_suite(1000, 12, d=4, seed=4)
    for i, G in enumerate(games):
        U = suite.even_target(G)
        U = G.mask(U)
        b, tb = buchi_mask(G, U), tbuchi_mask(G, U)
        c, tc = cobuchi_mask(G, U), tcobuchi_mask(G, U)
        if not np.array_equal(b.result_mask, tb.result_mask):
            failures.append((i, "buchi region"))
        if not np.array_equal(c.result_mask, tc.result_mask):
            failures.append((i, "cobuchi region"))
        # tpre drives the least fixpoint: the inner one for Büchi, the outer
        # one for co-Büchi.
        if tb.inner_iterations > b.inner_iterations:
            failures.append((i, "buchi iterations"))
        if tc.count > c.count:
            failures.append((i, "cobuchi iterations"))
        nu_larger += tc.inner_iterations > c.inner_iterations
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    report(4, ok, f"{len(games)} games n<=12, {len(failures)} failures, {elapsed:.1f} s "
                  f"(co-Büchi nested greatest-fixpoint steps larger with tpre in {nu_larger} games)")
    assert not failures, failures[:5]
    assert elapsed < 60


def test_criterion_05_region_correctness(report):
    failures = []
    for i, G in enumerate(suite.games()):
        Z, _ = parity_coop_mask(G)
        if set(np.flatnonzero(Z).tolist()) != oracle.coop_region_bruteforce(G):
            failures.append(i)
    report(5, not failures, f"{len(suite.games())} games n<=8 d<=4, {len(failures)} mismatches")
    assert not failures


def test_criterion_06_permissiveness(report):
    count, bad = _failures(suite.KINDS, lambda v: v["permissive"].ok)
    G = suite.load("triangle")
    p, q, r = (G.vertex_id(x) for x in "pqr")
    live_edges = Assumption(cond_live=(
        ConditionalLiveGroup({q}, ({(q, p)},)),
        ConditionalLiveGroup({r}, ({(r, p)},)),
    ))
    verdict = oracle.check_permissive(G, oracle.Objective("buchi", {p}), live_edges)
    witness = verdict.counterexample.render(G) if verdict.counterexample else "-"
    ok = not bad and not verdict.ok and witness == "(p q r)^w"
    report(6, ok, f"{count} outputs, {len(bad)} not permissive; live-edge assumption rejected with {witness}")
    assert not bad, bad[:5]
    assert not verdict.ok and witness == "(p q r)^w"


def test_criterion_07_implementability(report):
    count, bad = _failures(suite.KINDS, lambda v: v["implementable"].ok and v["separated"].ok)
    report(7, not bad, f"{count} outputs, {len(bad)} violations")
    assert not bad, bad[:5]


def _parity_sufficiency(games):
    bad, switching, max_options = [], 0, 0
    obj = oracle.Objective("parity")
    for i, G in enumerate(games):
        for variant in VARIANTS:
            r = parity_apa(G, variant=variant)
            strategy = oracle.build_proof_strategy(G, "parity", r)
            max_options = max([max_options] + [len(o) for o in strategy.options.values()])
            switching += bool(strategy.options)
            if not oracle.check_sufficient(G, obj, r.assumption, strategy, r.region):
                bad.append((i, variant))
    return bad, switching, max_options


def test_criterion_08_sufficiency(report):
    count, bad = _failures(("safety", "buchi", "cobuchi"), lambda v: v["sufficient"].ok)
    gated = random_suite(200, 6, d=4, seed=8)
    gated_bad, gated_switching, gated_options = _parity_sufficiency(gated)
    # The n <= 6 sample never needs a switching strategy; the wider one does.
    wide = random_suite(300, 8, d=4, seed=8)
    wide_bad, wide_switching, wide_options = _parity_sufficiency(wide)
    max_options = max(gated_options, wide_options)
    ok = not bad and not gated_bad and not wide_bad and max_options <= 3
    report(8, ok, f"{count} safety/Büchi/co-Büchi outputs, {len(bad)} insufficient; "
                  f"parity n<=6: {len(gated)} games x {len(VARIANTS)} variants, {len(gated_bad)} insufficient; "
                  f"parity n<=8: {len(wide)} games, {len(wide_bad)} insufficient, "
                  f"{wide_switching} switching strategies")
    assert not bad, bad[:5]
    assert not gated_bad, gated_bad[:5]
    assert not wide_bad, wide_bad[:5]
    assert max_options <= 3


def test_criterion_09_variant_agreement(report):
    mismatched = []
    for i, G in enumerate(suite.games()):
        for kind in suite.KINDS:
            regions = {suite.result(i, kind, v).region for v in VARIANTS}
            if len(regions) != 1:
                mismatched.append((i, kind))

    def all_pass(v):
        return all(x.ok for x in v.values())

    count, bad = _failures(suite.KINDS, all_pass, variants=("linear",))
    ok = not mismatched and not bad
    report(9, ok, f"regions differ in {len(mismatched)} cases; linear variant fails {len(bad)} of {count} suite checks")
    assert not mismatched, mismatched[:5]
    assert not bad, bad[:5]


@pytest.mark.parametrize("family", ["chain", "clique"])
def test_criterion_10_performance(report, family):
    build = {"chain": chain, "clique": clique}[family]
    sizes = [250, 500, 1000, 2000]
    micros = []
    for n in sizes:
        G = build(n)
        _, us = time_call(parity_apa, G)
        micros.append(us)
    slope = loglog_slope(sizes, micros)
    worst = max(micros) / 1e6
    ok = worst < 10 and slope <= 4.5
    report(10, ok, f"{family}: n up to {sizes[-1]}, slowest {worst:.2f} s, log-log slope {slope:.2f}")
    assert worst < 10
    assert slope <= 4.5
