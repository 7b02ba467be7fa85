"""End-to-end checks: measured distances against the theoretical bounds.

The measured law of W is always the affine image of the (exact or empirical)
law of Y under the exact mean m/c and variance (m/c)(1 - 1/c); sample moments
are never used for standardization.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Callable, Sequence

from . import bounds
from .coloring import ColoringConfig, simulate
from .exact import DEFAULT_CAP, DiscreteDistribution, exact_pmf
from .graph import Graph, edge_stats, from_edge_list, generate
from .metrics import tv_to_poisson, wasserstein_to_normal

SCHEMA = "mono-clt/1"
METHODS = ("exact", "monte-carlo")
SWEEP_HEADER = ("family", "n", "m", "c", "K_m", "triangles", "method", "w1", "w1_bound",
                "tv", "tv_bound", "remark_rate", "verdict")


def mc_tolerance(n_samples: int) -> float:
    """Additive Monte Carlo tolerance on a measured distance: 0.01 at 10**6 samples."""
    return 10.0 / math.sqrt(n_samples)


@dataclass
class VerificationReport:
    graph: str
    graph_hash: str
    vertex_count: int
    m: int
    c: int
    method: str
    K_m: int
    triangles: int
    measured_wasserstein: float | None
    measured_tv_poisson: float | None
    bounds: dict
    lemma_results: list[dict]
    statistical_tolerance: float | None = None
    n_samples: int | None = None
    seed: int | None = None
    verdicts: dict[str, bool] = field(default_factory=dict)
    schema: str = SCHEMA

    def compute_verdicts(self) -> dict[str, bool]:
        tau = self.statistical_tolerance or 0.0
        w1_bound = self.bounds["wasserstein_bound"]
        tv_bound = min(1.0, self.bounds["poisson_tv_bound"])
        out = {}
        if self.measured_wasserstein is not None:
            out["theorem1_wasserstein"] = self.measured_wasserstein - tau <= w1_bound
        if self.measured_tv_poisson is not None:
            out["poisson_tv"] = self.measured_tv_poisson - tau <= tv_bound
        for lr in self.lemma_results:
            out[lr["name"]] = lr["value"] <= lr["bound"] * (1 + 1e-12)
        return out

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(**data)


def measured_distances(y_law: DiscreteDistribution, m: int, c: int) -> tuple[float, float]:
    w1 = wasserstein_to_normal(y_law.standardize(m, c))
    tv = tv_to_poisson(y_law, m / c)
    return w1, tv


def verify_graph(g: Graph, c: int, method: str = "exact", *, samples: int = 10**6, seed: int = 0,
                 stream_id: int = 0, cap: int = DEFAULT_CAP, C0: float = 1.0,
                 partitions: int = 1, name: str | None = None) -> VerificationReport:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if g.m < 1:
        raise ValueError("graph has no edges; W is undefined")
    st = edge_stats(g)
    tau = None
    if method == "exact":
        law = exact_pmf(g, c, cap)
        n_samples = seed = None
    else:
        if samples < 1:
            raise ValueError("monte-carlo needs a positive sample budget")
        summary = simulate(g, ColoringConfig(c, seed, stream_id), samples, partitions)
        law = summary.distribution()
        tau = mc_tolerance(samples)
        n_samples = samples
    w1, tv = measured_distances(law, g.m, c)
    lemmas = bounds.lemma1_check(g.m, c) + [bounds.lemma2_check(st), bounds.lemma3_check(st)]
    rep = VerificationReport(
        graph=name or f"graph(n={g.vertex_count}, m={g.m})",
        graph_hash=g.digest,
        vertex_count=g.vertex_count,
        m=g.m, c=c, method=method,
        K_m=st.K_m, triangles=st.triangle_count,
        measured_wasserstein=w1,
        measured_tv_poisson=tv,
        bounds=bounds.bound_report(g.m, c, st.K_m, C0).to_dict(),
        lemma_results=[lr.to_dict() for lr in lemmas],
        statistical_tolerance=tau,
        n_samples=n_samples,
        seed=seed,
    )
    rep.verdicts = rep.compute_verdicts()
    return rep


# -- sweeps -------------------------------------------------------------------

def ceil_sqrt(m: int) -> int:
    return 0 if m <= 0 else math.isqrt(m - 1) + 1


def parse_c_rule(rule: str) -> Callable[[int], int]:
    """``sqrt`` (ceil sqrt m), ``const:K`` (K), ``mul:K`` (K*m)."""
    name, _, arg = rule.partition(":")
    if name == "sqrt" and not arg:
        return lambda m: max(2, ceil_sqrt(m))
    if name in ("const", "mul") and arg.isdigit():
        k = int(arg)
        if name == "const":
            if k < 2:
                raise ValueError("const c must be >= 2")
            return lambda m: k
        if k < 1:
            raise ValueError("mul factor must be >= 1")
        return lambda m: max(2, k * m)
    raise ValueError(f"bad c-rule {rule!r}; expected sqrt, const:K or mul:K")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def sweep(family: str, sizes: Sequence[int], c_rule: Callable[[int], int] | str,
          method: str = "monte-carlo", *, samples: int = 10**6, seed: int = 0,
          cap: int = DEFAULT_CAP, C0: float = 1.0) -> list[dict]:
    """One verification row per size; row ``k`` uses stream ``k`` of ``seed``."""
    if isinstance(c_rule, str):
        c_rule = parse_c_rule(c_rule)
    rows = []
    for k, n in enumerate(sizes):
        g = generate(family, n, b=n if family == "complete_bipartite" else None)
        c = c_rule(g.m)
        rep = verify_graph(g, c, method, samples=samples, seed=seed, stream_id=k, cap=cap,
                           C0=C0, name=f"{family}({n})")
        rows.append({
            "family": family, "n": n, "m": g.m, "c": c, "K_m": rep.K_m,
            "triangles": rep.triangles, "method": method,
            "w1": rep.measured_wasserstein, "w1_bound": rep.bounds["wasserstein_bound"],
            "tv": rep.measured_tv_poisson, "tv_bound": rep.bounds["poisson_tv_bound"],
            "remark_rate": rep.bounds["remark_rate"],
            "verdict": "pass" if rep.passed else "fail",
        })
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([_fmt(r[h]) for h in SWEEP_HEADER])
    return buf.getvalue()


# -- frozen standard test set -------------------------------------------------

STANDARD_STATE_CAP = 10**6
SMALL_C = (2, 3, 4)


def _canonical(n: int, edges: Sequence[tuple[int, int]]) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        form = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or form < best:
            best = form
    return best


def small_graphs(max_vertices: int = 5) -> list[tuple[int, tuple]]:
    """All simple graphs up to isomorphism on 1..max_vertices vertices."""
    out = []
    for n in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        forms = set()
        for mask in range(1 << len(pairs)):
            forms.add(_canonical(n, [pairs[k] for k in range(len(pairs)) if mask >> k & 1]))
        out.extend((n, f) for f in sorted(forms, key=lambda f: (len(f), f)))
    return out


def build_standard_set() -> list[dict]:
    """Graph/c combinations for exact verification; regenerated by tests against the frozen file."""
    entries = []

    def add(name: str, g: Graph, cs: Sequence[int], family: str | None = None, n: int | None = None):
        entries.append({"name": name, "family": family, "n": n, "vertex_count": g.vertex_count,
                        "edges": [list(e) for e in g.edges], "m": g.m, "hash": g.digest,
                        "c_values": list(cs)})

    for k, (n, form) in enumerate(small_graphs(5)):
        if form:
            add(f"small{n}_{k}", from_edge_list(form, n), SMALL_C)
    for n in (6, 7):
        add(f"complete{n}", generate("complete", n), (2, 3), "complete", n)
    for family, n_min in (("cycle", 3), ("path", 2), ("star", 2)):
        for c in SMALL_C:
            n = n_min
            while c ** n <= STANDARD_STATE_CAP:
                g = generate(family, n)
                add(f"{family}{n}_c{c}", g, (c,), family, n)
                n += 1
    for m in (1, 2, 5, 10, 100, 1000):
        add(f"matching{m}", generate("matching", m), SMALL_C, "matching", m)
    return entries


def load_standard_set() -> list[dict]:
    text = resources.files("monoclt").joinpath("data/standard_set.json").read_text()
    data = json.loads(text)
    if data.get("schema") != SCHEMA:
        raise ValueError("unexpected manifest schema")
    return data["graphs"]


def manifest_text(entries: list[dict] | None = None) -> str:
    entries = build_standard_set() if entries is None else entries
    return json.dumps({"schema": SCHEMA, "graphs": entries}, separators=(",", ":")) + "\n"


def standard_cases() -> list[tuple[str, Graph, int]]:
    cases = []
    for e in load_standard_set():
        g = from_edge_list([tuple(x) for x in e["edges"]], e["vertex_count"])
        if g.digest != e["hash"]:
            raise ValueError(f"manifest hash mismatch for {e['name']}")
        cases.extend((e["name"], g, c) for c in e["c_values"])
    return cases
