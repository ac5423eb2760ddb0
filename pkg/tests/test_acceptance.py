"""Acceptance criteria 1-11, each reported as one PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import json
import math
import random
import time
from fractions import Fraction as Q

import pytest

from fairfan import io
from fairfan.adversarial import (
    gen_adversarial,
    interval_coverage,
    oracle_1d,
    oracle_1d_brute,
    random_interval_cuts,
    random_line_candidates,
)
from fairfan.arrangement import A, A_TILDE, compare_formulas, small_fiber_report
from fairfan.cli import main as cli_main
from fairfan.fan import build_fan
from fairfan.geometry import check_partition
from fairfan.hamsandwich import equipartition_2pow, region_masses
from fairfan.measures import DiscreteMeasure, MeasureFamily, coverage_counts, evaluate_matrix, random_family
from fairfan.pipelines import (
    NU_MEASURE,
    POINT_MEASURE,
    alpha_ratio,
    claim_extremal,
    claim_threshold,
    equal_total_sums,
    epsilon_bound,
    fraction_pipeline,
    plan_alpha_groups,
    plan_epsilon_groups,
    theorem5_pipeline,
)

RESULTS = {}


def record(k, ok, detail):
    RESULTS[k] = (ok, detail)
    assert ok, detail


def fan_instances():
    for d in (2, 3):
        for n in range(2, 6):
            for c in range(d, d + 4):
                m = n * (c - d) + d
                for s in range(50):
                    fam = random_family(random.Random(s * 1000 + d * 100 + n * 10 + c), d, m)
                    yield d, n, c, m, fam


@pytest.fixture(scope="module")
def fans():
    start = time.perf_counter()
    out = [(d, n, c, m, fam, build_fan(fam, n, c)) for d, n, c, m, fam in fan_instances()]
    return out, time.perf_counter() - start


def test_criterion_01_fan_coverage(fans):
    runs, elapsed = fans
    start = time.perf_counter()
    bad = []
    for d, n, c, m, fam, fp in runs:
        cov = coverage_counts(fam, fp.partition, 0)
        if not fp.is_valid() or check_partition(fp.partition) or min(cov) < c:
            bad.append((d, n, c, m))
    elapsed += time.perf_counter() - start
    ok = not bad and elapsed < 60
    record(1, ok, f"{len(runs)} instances, {len(bad)} failures, {elapsed:.1f}s (limit 60s)")


def test_criterion_02_wedge_bookkeeping(fans):
    runs, _ = fans
    checked, bad = 0, []
    for d, n, c, m, fam, fp in runs:
        if c == d:
            continue
        checked += 1
        want = [c] * n
        want[fp.surplus_region] = (m - n * c + n * d - d) + c
        if fp.anchor_counts() != want:
            bad.append((d, n, c, m, fp.anchor_counts()))
    record(2, not bad, f"{checked} instances with c > d, {len(bad)} mismatches")


def cloud(rng, k, label, spread=1000):
    pts = set()
    while len(pts) < k:
        pts.add((rng.randint(-spread, spread), rng.randint(-spread, spread)))
    return DiscreteMeasure(tuple((p, rng.randint(1, 9)) for p in sorted(pts)), Q(1, 8), label)


def test_criterion_03_ham_sandwich_exactness():
    rng = random.Random(3)
    runs, bad = 0, []
    for nr, nb in [(1, 1), (2, 5), (17, 9), (60, 75), (250, 180), (500, 500)]:
        for spread in (20, 1000):
            red, blue = cloud(rng, nr, "red", spread), cloud(rng, nb, "blue", spread)
            for k in (1, 2, 3):
                part = equipartition_2pow(red, blue, k)
                n = 1 << k
                runs += 1
                if region_masses(part, red) != [red.total / n] * n or region_masses(part, blue) != [blue.total / n] * n:
                    bad.append((nr, nb, spread, k))
    record(3, not bad, f"{runs} equipartitions, {len(bad)} inexact")


@pytest.fixture(scope="module")
def coverage_runs():
    out = []
    for n in (2, 4):
        for c in (2, 3, 4):
            m = n * (c - 2) + 2
            for s in range(4):
                raw = random_family(random.Random(700 + 10 * n + c + 1000 * s), 2, m)
                for proof in (NU_MEASURE, POINT_MEASURE):
                    part, rep = theorem5_pipeline(raw, n, c, proof)
                    out.append((n, c, m, proof, raw, part, rep))
    return out


def test_criterion_04_coverage_pipeline(coverage_runs):
    bad = []
    for n, c, m, proof, fam, part, rep in coverage_runs:
        mat = evaluate_matrix(fam, part)
        fine = list(mat.entries[0]) == [fam.measures[0].total / n] * n
        fine &= min(coverage_counts(fam, part, 0)) >= c
        if proof == NU_MEASURE:
            fine &= rep.auxiliary == [Q(n * (c - 2) + 1, n)] * n
        fine &= rep.certified
        if not fine:
            bad.append((n, c, proof))
    record(4, not bad, f"{len(coverage_runs)} runs over both variants, {len(bad)} failures")


def test_criterion_05_equal_totals():
    bad, runs = [], 0
    for n in (2, 4):
        for c in (2, 3, 4):
            m = n * (c - 2) + 2
            for s in range(3):
                raw = random_family(random.Random(900 + 10 * n + c + 1000 * s), 2, m)
                fam = MeasureFamily(tuple(mu.scaled(Q(3) / mu.total) for mu in raw.measures), 2)
                part, _ = theorem5_pipeline(fam, n, c, NU_MEASURE)
                tail, full = equal_total_sums(fam, part)
                runs += 1
                if tail != [Q(3 * (m - 1), n)] * n or full != [Q(3 * m, n)] * n:
                    bad.append((n, c, s))
    record(5, not bad, f"{runs} equal-total families, {len(bad)} not equiparted")


def test_criterion_06_pigeonhole():
    rng = random.Random(6)
    done, bad = 0, 0
    while done < 10_000:
        m = rng.randint(1, 12)
        xs = [Q(rng.randint(0, 20), 20) for _ in range(m)]
        r = rng.randint(1, m)
        room = sum(xs) - (r - 1)
        if room < 0:
            continue
        eps = min(Q(1), room / (m - r + 1)) * Q(rng.randint(0, 20), 20)
        assert sum(xs) >= claim_threshold(m, r, eps)
        done += 1
        if sorted(xs, reverse=True)[r - 1] < eps:
            bad += 1
    contra = 0
    for _ in range(2000):
        m = rng.randint(1, 12)
        r = rng.randint(1, m)
        eps = Q(rng.randint(1, 20), 20)
        below = eps * Q(rng.randint(0, 19), 20)
        xs = claim_extremal(m, r, eps, below)
        if not sum(xs) < claim_threshold(m, r, eps):
            contra += 1
    record(6, bad == 0 and contra == 0, f"{done} instances, {bad} violations; 2000 extremal vectors, {contra} reach the threshold")


def test_criterion_07_fractions():
    bad, runs = [], 0
    d = 2
    for n in (2, 4):
        for c in range(2, 7):
            m = n * (c - d) + d
            fam = random_family(random.Random(70 + 10 * n + c), d, m)
            plan = plan_epsilon_groups(m, n, c, d)
            part, rep = fraction_pipeline(fam, n, c, plan, "epsilon")
            eps, _ = epsilon_bound(n, c, d)
            mat = evaluate_matrix(fam, part)
            totals = fam.totals()
            counts = [sum(1 for j in range(m) if mat.entries[j][i] >= eps * totals[j]) for i in range(n)]
            runs += 1
            if not rep.ok or min(counts) < c:
                bad.append((n, c))
    arith = 0
    for n in range(2, 9):
        for dd in range(2, 6):
            for c in range(dd, 4 * dd + 1):
                eps = Q(1, n * ((n - 1) * (math.ceil(c / dd) - 1) + 1))
                arith += 1
                if eps < Q(dd, c * n * n) or epsilon_bound(n, c, dd)[0] != eps:
                    bad.append(("bound", n, c, dd))
    record(7, not bad, f"{runs} pipeline runs, {arith} arithmetic grid points, {len(bad)} failures")


def test_criterion_08_alpha_planner():
    bad = []
    for n in range(2, 7):
        for d in (2, 3):
            for c in range(2 * d, 2 * d + 5):
                _, m = plan_alpha_groups(n, c, d, Q(1, 2 * n - 1))
                if m != 2 * n * (c - d):
                    bad.append(("identity", n, c, d, m))
                alphas = [Q(1, 2 * n - 1), Q(1, 3 * n), Q(1, 10 * n), Q(1, 100 * n), Q(1, 10**4 * n), Q(1, 10**8 * n)]
                ms = [plan_alpha_groups(n, c, d, a)[1] for a in alphas]
                real = [(c - d) * alpha_ratio(n, a) for a in alphas]
                gaps = [x - n * (c - d) for x in real]
                if any(a < b for a, b in zip(ms, ms[1:])):
                    bad.append(("monotone", n, c, d, ms))
                if any(g2 > g1 for g1, g2 in zip(gaps, gaps[1:])) or gaps[-1] > Q(1, 10**6):
                    bad.append(("limit", n, c, d))
                if ms[-1] != n * (c - d) + d:
                    bad.append(("integer limit", n, c, d, ms[-1]))
    record(8, not bad, f"small-alpha identity exact; (c-d)(1-a)/(1/n-a) -> n(c-d); integer m nonincreasing, settles at n(c-d)+d; {len(bad)} failures")


def test_criterion_09_optimality_1d():
    bad = []
    for n in range(2, 9):
        for c in range(2, 9):
            for m in range(0, n * (c - 1) + 4):
                if oracle_1d(m, n, c) != (m >= n * (c - 1) + 1):
                    bad.append((m, n, c))
    for n in range(2, 4):
        for c in range(2, 4):
            for m in range(0, n * (c - 1) + 3):
                if oracle_1d(m, n, c) != oracle_1d_brute(m, n, c):
                    bad.append(("brute", m, n, c))
    rng = random.Random(9)
    combinatorial = geometric = 0
    for n in range(2, 9):
        for c in range(2, 9):
            m = n * (c - 1)
            for _ in range(200):
                combinatorial += 1
                if min(interval_coverage(m, random_interval_cuts(rng, m, n))) >= c:
                    bad.append(("cuts", n, c))
    for n, c in [(2, 2), (2, 4), (3, 3), (4, 2), (5, 3)]:
        fam = gen_adversarial(1, n, c)
        for part in random_line_candidates(rng, fam, n, 2000):
            geometric += 1
            if min(coverage_counts(fam, part, 0)) >= c:
                bad.append(("geometric", n, c))
    record(9, not bad, f"closed form over 2<=n,c<=8; {combinatorial} combinatorial + {geometric} geometric candidates; {len(bad)} failures")


def test_criterion_10_arrangement():
    bad, count = [], 0
    for variant in (A, A_TILDE):
        for m in range(2, 8):
            for n in range(1, 5):
                for c in range(2, m + 1):
                    rep = compare_formulas(m, n, c, variant)
                    count += 1
                    if not rep.ok:
                        bad.append(rep.to_json())
    fig = small_fiber_report()
    reported = fig["discrepancy"] and fig["fiber_size"] == 0 and not fig["has_top"]
    detail = (
        f"{count} parameter sets, {len(bad)} formula mismatches; "
        f"(4,2,3) fiber has {fig['fiber_size']} elements vs 2 claimed (discrepancy reported)"
    )
    record(10, not bad and reported, detail)


def test_criterion_11_determinism(tmp_path, capsys):
    runs = [
        ["run", "fan", "--d", "2", "--n", "5", "--c", "4", "--seed", "7"],
        ["run", "fan", "--d", "3", "--n", "3", "--c", "5", "--seed", "2"],
        ["run", "t5", "--n", "4", "--c", "3", "--seed", "1"],
        ["run", "t7", "--n", "2", "--c", "4", "--d", "2", "--seed", "1"],
        ["run", "t8", "--n", "2", "--c", "4", "--alpha", "1/3", "--seed", "1"],
        ["run", "optimal", "--d", "2", "--n", "2", "--c", "3", "--count", "20"],
        ["run", "poset", "--m", "4", "--n", "2", "--c", "3"],
    ]
    bad = []
    for k, argv in enumerate(runs):
        outs = []
        for rep in range(2):
            path = tmp_path / f"r{k}_{rep}.json"
            extra = ["--out", str(path)]
            if "--d" not in argv or argv[argv.index("--d") + 1] == "2":
                extra += ["--svg", str(tmp_path / f"r{k}_{rep}.svg")]
            code = cli_main(argv + extra)
            svg = tmp_path / f"r{k}_{rep}.svg"
            outs.append((code, path.read_bytes(), svg.read_bytes() if svg.exists() else b""))
        if outs[0] != outs[1] or outs[0][0] != 0:
            bad.append(argv[1])
    capsys.readouterr()
    trips = 0
    for seed in range(30):
        fam = random_family(random.Random(seed), 1 + seed % 3, 1 + seed % 7)
        text = io.dumps(io.family_to_json(fam))
        again = io.dumps(io.family_to_json(io.family_from_json(json.loads(text))))
        trips += 1
        if again != text:
            bad.append(("family", seed))
    fam = gen_adversarial(2, 3, 3)
    text = io.dumps(io.family_to_json(fam))
    if io.dumps(io.family_to_json(io.family_from_json(json.loads(text)))) != text:
        bad.append("adversarial")
    record(11, not bad, f"{len(runs)} CLI runs repeated, {trips + 1} JSON round trips, {len(bad)} differences")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
