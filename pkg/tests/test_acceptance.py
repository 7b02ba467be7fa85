"""Exit criteria. Each test records one PASS/FAIL line, printed in the terminal summary."""
import csv
import io
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from monoclt import bounds, exact, verify
from monoclt.cli import main
from monoclt.coloring import set_threads
from monoclt.exact import exact_moments, exact_pmf, exact_pmf_component
from monoclt.graph import edge_stats, generate, write_edge_list
from monoclt.metrics import tv_to_poisson, wasserstein_to_normal

SEEDS = {7: 7, 8: 8, 9: 9}
MC_SAMPLES = 10**6
TAU = verify.mc_tolerance(MC_SAMPLES)
CYCLE_SIZES = (100, 400, 1600, 6400)
COMPLETE_SIZES = (10, 20, 40)
LEMMA_TIMES: dict[str, float] = {}


def best_time(fn, repeat=7):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


# -- 1-2: oracle correctness -------------------------------------------------

def test_criterion_1_k3_oracle(acceptance):
    g = generate("complete", 3)
    d = exact_pmf(g, 2)
    pmf = {k: Fraction(v, d.total) for k, v in d.exact.items()}
    mo = exact_moments(d)
    elapsed = best_time(lambda: exact_pmf(g, 2))
    ok = (pmf == {1: Fraction(3, 4), 3: Fraction(1, 4)} and abs(mo.mean - 1.5) <= 1e-12
          and abs(mo.variance - 0.75) <= 1e-12 and elapsed < 1e-3)
    acceptance("1", ok, f"pmf={dict((k, str(v)) for k, v in pmf.items())} mean={mo.mean} "
                        f"var={mo.variance} time={elapsed * 1e3:.3f}ms (<1ms)")


def test_criterion_2_binomial_cross_oracle(acceptance):
    ref = np.array([math.comb(5, k) * (1 / 3) ** k * (2 / 3) ** (5 - k) for k in range(6)])
    star, matching = generate("star", 6), generate("matching", 5)

    def both():
        return exact_pmf_component(star, 3, allow_tree_rule=False), exact_pmf(matching, 3)

    ds, dm = both()
    err = max(np.max(np.abs(ds.probs - ref)), np.max(np.abs(dm.probs - ref)))
    elapsed = best_time(both)
    acceptance("2", err <= 1e-12 and elapsed < 1e-2,
               f"max |pmf - Binomial(5,1/3)| = {err:.2e} (<=1e-12), time={elapsed * 1e3:.2f}ms (<10ms)")


# -- 3-5: exact verification over the frozen test set ------------------------

@pytest.fixture(scope="module")
def standard_results():
    t0 = time.perf_counter()
    rows = []
    for name, g, c in verify.standard_cases():
        law = exact_pmf(g, c)
        mo = exact_moments(law)
        w1, tv = verify.measured_distances(law, g.m, c)
        rows.append(dict(name=name, g=g, c=c, mean=mo.mean, var=mo.variance, w1=w1, tv=tv))
    return rows, time.perf_counter() - t0


def test_criterion_3_standardization_identity(acceptance, standard_results):
    rows, elapsed = standard_results
    worst = max(max(abs(r["mean"] - r["g"].m / r["c"]),
                    abs(r["var"] - r["g"].m / r["c"] * (1 - 1 / r["c"]))) for r in rows)
    acceptance("3", worst <= 1e-12 and elapsed < 30,
               f"{len(rows)} graph/c cases, worst moment error {worst:.1e} (<=1e-12), "
               f"time={elapsed:.1f}s (<30s, includes criterion 4)")


def test_criterion_4_theorem_bound(acceptance, standard_results):
    rows, _ = standard_results
    slack = [bounds.wasserstein_bound(r["g"].m, r["c"]) - r["w1"] for r in rows]
    worst = min(range(len(rows)), key=lambda k: slack[k])
    acceptance("4", min(slack) >= 0,
               f"W1 <= bound on all {len(rows)} cases; min slack {slack[worst]:.4f} at "
               f"{rows[worst]['name']} c={rows[worst]['c']}")


def test_criterion_5_poisson_bound(acceptance, standard_results):
    rows, _ = standard_results
    viol = [r["name"] for r in rows if r["tv"] > min(1.0, bounds.poisson_tv_bound(r["g"].m, r["c"]))]
    g = generate("matching", 1000)
    t0 = time.perf_counter()
    tv = tv_to_poisson(exact_pmf(g, 2000), 0.5)
    elapsed = time.perf_counter() - t0
    bound = bounds.poisson_tv_bound(1000, 2000)
    ok = not viol and tv <= bound and bound <= 0.0448 and tv <= 1e-3 and elapsed < 1.0
    acceptance("5", ok, f"{len(viol)} violations on test set; matching m=1000 c=2000: TV={tv:.3e} "
                        f"(<=1e-3) bound={bound:.4f} time={elapsed:.2f}s (<1s)")


# -- 6: lemma suite ------------------------------------------------------------

def _timed(key, fn):
    t0 = time.perf_counter()
    out = fn()
    LEMMA_TIMES[key] = time.perf_counter() - t0
    return out


def test_criterion_6a_lemma1(acceptance):
    def run():
        bad = []
        for m in range(1, 101):
            for c in range(2, 51):
                checks = bounds.lemma1_check(m, c)
                if not all(ch.passed for ch in checks) or abs(checks[1].value - 1 / m) > 1e-15:
                    bad.append((m, c))
        return bad

    bad = _timed("6a", run)
    acceptance("6a", not bad, f"Lemma 1 moment inequalities on m=1..100 x c=2..50: {len(bad)} failures")


def _lemma_graphs():
    graphs = [(name, g) for name, g, _ in verify.standard_cases()]
    ps = (0.05, 0.1, 0.2)
    graphs += [(f"er{k}", generate("erdos_renyi", 50, p=ps[k % 3], seed=k)) for k in range(100)]
    return graphs


def test_criterion_6b_lemma2_lemma3(acceptance):
    def run():
        bad, n = [], 0
        for name, g in _lemma_graphs():
            st = edge_stats(g)
            n += 1
            if not (bounds.lemma2_check(st).passed and bounds.lemma3_check(st).passed):
                bad.append(name)
        return bad, n

    bad, n = _timed("6b", run)
    acceptance("6b", not bad, f"K_m <= sqrt2 m^1.5 and triangles <= (sqrt2/3) m^1.5 on {n} graphs "
                              f"(test set + 100 ER): {len(bad)} failures")


def test_criterion_6c_pairwise_uncorrelated(acceptance):
    def run():
        worst, diag, pairs = 0.0, 0.0, 0
        for _, g, c in verify.standard_cases():
            mat = exact.pair_covariance_matrix(g, c)
            off = mat - np.diag(np.diag(mat))
            worst = max(worst, float(np.max(np.abs(off))))
            diag = max(diag, float(np.max(np.abs(np.diag(mat) - 1 / g.m))))
            pairs += g.m * (g.m - 1)
        return worst, diag, pairs

    worst, diag, pairs = _timed("6c", run)
    acceptance("6c", worst <= 1e-14 and diag <= 1e-14,
               f"max |Cov(X_i,X_j)| over {pairs} ordered pairs i!=j = {worst:.1e} (<=1e-14); "
               f"max |Var X_i - 1/m| = {diag:.1e}")


def test_criterion_6d_triangle_moment(acceptance):
    def run():
        bad, n = [], 0
        for name, g, c in verify.standard_cases():
            if edge_stats(g).triangle_count:
                n += 1
                if exact.triangle_mixed_moment(c, g.m) > 1 / g.m**2:
                    bad.append((name, c))
        return bad, n

    bad, n = _timed("6d", run)
    acceptance("6d", not bad, f"E X_i X_j^2 X_k <= 1/m^2 on {n} triangle-containing cases: {len(bad)} failures")


def test_criterion_6e_pair_sum_variance_chain(acceptance):
    def run():
        fails, n = [], 0
        for name, g, c in verify.standard_cases():
            if len(exact.neighbourhood_pairs(g)) ** 2 > 10**7:
                continue
            res = exact.pair_sum_variance(g, c)
            n += 1
            if not res.chain_holds:
                fails.append((name, c, res))
        return fails, n

    fails, n = _timed("6e", run)
    detail = f"Var(pair sum) <= (2 sum|N_i\\i| + 6 #tri)/m^2 <= 4 sqrt2/sqrt m on {n} cases: {len(fails)} failures"
    if fails:
        name, c, res = max(fails, key=lambda f: f[2].value - f[2].intermediate_bound)
        detail += (f"; worst {name} c={c}: var={res.value:.4f} > {res.intermediate_bound:.4f} "
                   f"(4-cycle-type terms {res.other:.4f})")
    acceptance("6e", not fails, detail)


def test_criterion_6_runtime(acceptance):
    total = sum(LEMMA_TIMES.values())
    acceptance("6", len(LEMMA_TIMES) == 5 and total < 60,
               f"lemma suite runtime {total:.1f}s (<60s) over parts {sorted(LEMMA_TIMES)}")


# -- 7-10: Monte Carlo ---------------------------------------------------------

def _cli(argv) -> None:
    assert main(argv) == 0


@pytest.fixture(scope="module")
def k6_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("acc") / "k6.edges"
    write_edge_list(generate("complete", 6), path)
    return str(path)


def _simulate_csv(k6_file, out, threads, partitions):
    _cli(["simulate", k6_file, "--c", "3", "--samples", str(MC_SAMPLES), "--seed", str(SEEDS[7]),
          "--threads", str(threads), "--partitions", str(partitions), "-o", out])
    with open(out) as fh:
        return fh.read()


def _sweep_csv(family, sizes, rule, seed, out, threads):
    _cli(["sweep", "--family", family, "--sizes", ",".join(map(str, sizes)), "--c-rule", rule,
          "--method", "mc", "--samples", str(MC_SAMPLES), "--seed", str(seed),
          "--threads", str(threads), "-o", out])
    with open(out) as fh:
        return fh.read()


@pytest.fixture(scope="module")
def mc_outputs(k6_file, tmp_path_factory):
    d = tmp_path_factory.mktemp("mc")
    out, times = {}, {}
    t0 = time.perf_counter()
    out[7] = _simulate_csv(k6_file, str(d / "c7.csv"), threads=1, partitions=1)
    times[7] = time.perf_counter() - t0
    t0 = time.perf_counter()
    out[8] = _sweep_csv("cycle", CYCLE_SIZES, "sqrt", SEEDS[8], str(d / "c8.csv"), threads=1)
    times[8] = time.perf_counter() - t0
    t0 = time.perf_counter()
    out[9] = _sweep_csv("complete", COMPLETE_SIZES, "const:2", SEEDS[9], str(d / "c9.csv"), threads=1)
    times[9] = time.perf_counter() - t0
    return out, times


def _parse(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_criterion_7_mc_matches_exact(acceptance, mc_outputs):
    out, times = mc_outputs
    hist = {int(r["y"]): int(r["count"]) for r in _parse(out[7])}
    emp = exact.DiscreteDistribution.from_counts(hist).standardize(15, 3)
    w_emp = wasserstein_to_normal(emp)
    w_exact = wasserstein_to_normal(exact_pmf(generate("complete", 6), 3).standardize(15, 3))
    gap = abs(w_emp - w_exact)
    acceptance("7", gap <= 0.01 and times[7] < 30,
               f"K6 c=3 n=1e6: empirical W1={w_emp:.5f} exact W1={w_exact:.5f} gap={gap:.2e} (<=0.01) "
               f"time={times[7]:.1f}s (<30s)")


def test_criterion_8_clt_sweep(acceptance, mc_outputs):
    out, times = mc_outputs
    rows = _parse(out[8])
    w1 = [float(r["w1"]) for r in rows]
    decreasing = all(a > b for a, b in zip(w1, w1[1:]))
    below = all(float(r["w1"]) <= float(r["w1_bound"]) + TAU for r in rows)
    ok = decreasing and below and [int(r["m"]) for r in rows] == list(CYCLE_SIZES) and times[8] < 300
    acceptance("8", ok, f"cycles m={list(CYCLE_SIZES)} c=ceil(sqrt m): W1={[round(x, 4) for x in w1]} "
                        f"strictly decreasing={decreasing}, all <= bound+{TAU}={below}, time={times[8]:.1f}s (<300s)")


def test_criterion_9_complete_graph_regime(acceptance, mc_outputs):
    out, times = mc_outputs
    rows = _parse(out[9])
    w1 = [float(r["w1"]) for r in rows]
    mids = [bounds.remark_terms(int(r["m"]), 2, int(r["K_m"]))[1] for r in rows]
    ok = min(w1) >= 0.05 and min(mids) >= 0.5 and times[9] < 120
    acceptance("9", ok, f"K_n n={list(COMPLETE_SIZES)} c=2: W1={[round(x, 4) for x in w1]} (>=0.05), "
                        f"K_m/(sqrt(c) m^1.5)={[round(x, 4) for x in mids]} (>=0.5), time={times[9]:.1f}s (<120s)")


def test_criterion_10_determinism(acceptance, mc_outputs, k6_file, tmp_path):
    out, _ = mc_outputs
    threads = max(2, set_threads(None))
    again = {
        7: _simulate_csv(k6_file, str(tmp_path / "c7.csv"), threads=threads, partitions=4),
        8: _sweep_csv("cycle", CYCLE_SIZES, "sqrt", SEEDS[8], str(tmp_path / "c8.csv"), threads=threads),
        9: _sweep_csv("complete", COMPLETE_SIZES, "const:2", SEEDS[9], str(tmp_path / "c9.csv"), threads=threads),
    }
    same = {k: again[k] == out[k] for k in out}
    acceptance("10", all(same.values()),
               f"reruns of 7-9 with --threads {threads} (simulate also --partitions 4) byte-identical: {same}")
