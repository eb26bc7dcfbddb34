"""The seven acceptance criteria, each printing one PASS/FAIL line."""

import random
import time

import pytest

from cfl.bridge import descend, lift_chain_details
from cfl.cubillage import (
    bits,
    capsid_flip,
    color_subsets,
    contract,
    cubillage_flip_graph,
    dense_capsids,
    expand,
    extreme_cubillage,
    inversions,
    random_membrane,
    tunnel,
    validate_cubillage,
    ziegler_sets,
)
from cfl.digraph import two_route_graph, path_graph, small_dags
from cfl.orders import (
    apply_flip,
    brute_force_orders,
    check_convex,
    extreme_order,
    flip_graph,
    is_dense,
    mirror_is_antiisomorphism,
    separators,
    verify_poset,
)
from cfl.zonotope import default_configuration

from conftest import P1, P2, P2R, ROUTE_PRIME

FROZEN_PATH4_D2 = 8


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok

    return emit


def corpus():
    return small_dags(4) + [two_route_graph()]


def test_criterion_1_example(report, example_order):
    start = time.perf_counter()
    sigma = check_convex(example_order)
    checks = [sigma.anti_standard == {(P1, P2), (P1, P2R)}]
    checks.append(not is_dense(sigma, (P1, P2)))
    checks.append(any(r == (ROUTE_PRIME,) for _, r in separators(sigma, (P1, P2))))
    checks.append(is_dense(sigma, (P1, P2R)))
    lowered = apply_flip(sigma, (P1, P2R))
    checks.append(lowered.anti_standard == {(P1, P2)})
    checks.append(is_dense(lowered, (P1, P2)))
    minimal = apply_flip(lowered, (P1, P2))
    checks.append(minimal.anti_standard == frozenset())
    elapsed = time.perf_counter() - start
    ok = all(checks) and elapsed < 1.0
    report(1, ok, f"({sum(checks)}/{len(checks)} checks, {elapsed:.3f}s)")
    assert ok


def test_criterion_2_corpus(report):
    start = time.perf_counter()
    violations = []
    instances = 0
    for g in corpus():
        for d in (2, 3):
            instances += 1
            fg = flip_graph(g, d)
            rep = verify_poset(fg, strict=True)
            violations.extend(f"{g.to_json()['edges']} d={d}: {v}" for v in rep.violations)
            if not (rep.acyclic and len(rep.sources) == 1 and len(rep.sinks) == 1 and rep.graded):
                violations.append(f"{g.to_json()['edges']} d={d}: structural check failed")
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 120
    report(2, ok, f"({instances} instances, {len(violations)} violations, {elapsed:.2f}s)")
    assert ok, violations[:5]


def test_criterion_3_oracle(report):
    compared = mismatches = 0
    for g in corpus():
        for d in (2, 3):
            fg = flip_graph(g, d)
            if fg.system.m > 8:
                continue
            compared += 1
            if brute_force_orders(g, d) != fg.node_sets():
                mismatches += 1
    ok = mismatches == 0 and compared > 0
    report(3, ok, f"({compared} instances compared, {mismatches} mismatches)")
    assert ok


def test_criterion_4_bijection(report):
    start = time.perf_counter()
    rows = []
    for d in (2, 3):
        for n in (3, 4, 5):
            if n < d:
                continue
            counts = (len(flip_graph(path_graph(n), d)), len(cubillage_flip_graph(n, d)), len(ziegler_sets(n, d)))
            rows.append(((n, d), counts))
    agree = all(len(set(c)) == 1 for _, c in rows)
    frozen = dict(rows)[(4, 2)] == (FROZEN_PATH4_D2,) * 3
    elapsed = time.perf_counter() - start
    ok = agree and frozen and elapsed < 60
    table = " ".join(f"{n},{d}:{c[0]}" for (n, d), c in rows)
    report(4, ok, f"({table}; {elapsed:.2f}s)")
    assert ok, rows


def _flip_walk(n, d, steps, rng):
    """Random walk of raising and lowering flips from the standard cubillage."""
    q = extreme_cubillage(default_configuration(n, d), "front")
    for _ in range(steps):
        c = rng.choice(dense_capsids(q))
        yield q, c
        q = capsid_flip(q, c.packet)


def test_criterion_5_engine(report):
    failures = []
    for d in (2, 3):
        for n in range(d, 8):
            for side in ("front", "rear"):
                if not validate_cubillage(extreme_cubillage(default_configuration(n, d), side)).ok:
                    failures.append(f"extreme {side} ({n},{d})")
    flips = 0
    for n, d in [(4, 2), (5, 2), (6, 2), (4, 3), (5, 3), (6, 3)]:
        fg = cubillage_flip_graph(n, d)
        for a, b, pm in fg.arcs:
            flips += 1
            q = fg.cubillages[a]
            new = capsid_flip(q, bits(pm))
            if not validate_cubillage(new).ok:
                failures.append(f"flip {bits(pm)} in ({n},{d}) invalid")
            if len(inversions(new) ^ inversions(q)) != 1:
                failures.append(f"flip {bits(pm)} in ({n},{d}) changed several inversions")
        for q in fg.cubillages:
            for s in color_subsets(n, d - 1):
                if len(tunnel(q, bits(s))) != n - d + 1:
                    failures.append(f"tunnel {bits(s)} in ({n},{d})")
    rng = random.Random(2024)
    for n, d in [(7, 2), (7, 3)]:
        for q, c in _flip_walk(n, d, 40, rng):
            flips += 1
            new = capsid_flip(q, c.packet)
            if not validate_cubillage(new).ok or len(inversions(new) ^ inversions(q)) != 1:
                failures.append(f"walk flip {c.packet} in ({n},{d})")
    cases = 0
    for _ in range(50):
        n, d = rng.choice([(3, 2), (4, 2), (5, 2), (6, 2), (4, 3), (5, 3), (6, 3)])
        fg = cubillage_flip_graph(n, d)
        q = fg.cubillages[rng.randrange(len(fg))]
        side = rng.choice(["high", "low"])
        e = expand(q, random_membrane(q, rng), side)
        cases += 1
        if not validate_cubillage(e).ok or contract(e, n + 1 if side == "high" else 1).cubes != q.cubes:
            failures.append(f"expand/contract ({n},{d}) {side}")
    ok = not failures
    report(5, ok, f"({flips} flips, {cases} expansions, {len(failures)} violations)")
    assert ok, failures[:5]


def test_criterion_6_round_trip(report):
    start = time.perf_counter()
    classes = failures = 0
    for g in [two_route_graph(), path_graph(3), path_graph(4), path_graph(5)]:
        for sigma_prime in flip_graph(g, 3).nodes():
            classes += 1
            chain = descend(sigma_prime)
            chain.assignments()
            if lift_chain_details(chain).assignment != sigma_prime:
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 120
    report(6, ok, f"({classes} classes, {failures} failures, {elapsed:.2f}s)")
    assert ok


def test_criterion_7_mirror(report):
    instances = failures = 0
    for g in corpus():
        rg = g.reversed()
        for d in (2, 3):
            instances += 1
            fg, fg_mirror = flip_graph(g, d), flip_graph(rg, d)
            # lexicographic order under the reversed labeling must land on the sink of G's graph
            sink_from_labels = check_convex(extreme_order(g, d, "max")).mask == fg.masks[-1]
            if not (mirror_is_antiisomorphism(fg, fg_mirror) and sink_from_labels):
                failures += 1
    ok = failures == 0
    report(7, ok, f"({instances} instances, {failures} failures)")
    assert ok
