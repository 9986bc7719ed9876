"""Named check suites over seeded random instances.

Every suite is a pure function of (config, master seed). Instance objects
draw from substreams keyed as (suite_id, instance, slot), so replaying a
seed reproduces each report bit for bit and instances are independent,
which makes parallel evaluation safe. Reports are emitted in (suite,
instance) order regardless of how they were computed.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import checks, wehrl
from .checks import ConcavityInstance
from .linalg import as_dims
from .measurement import KrausSet
from .randgen import (
    RNG_NAME,
    random_density,
    random_hermitian,
    random_kraus,
    random_positive,
    random_povm,
    rng_for,
)
from .report import InequalityReport, make_report

# Fixed substream identifiers; changing these changes every replayed stream.
SUITE_IDS = {
    "ssa": 1,
    "stronger-ssa": 2,
    "sandwich": 3,
    "concavity": 4,
    "gibbs": 5,
    "cpt": 6,
    "improved-subadd": 7,
    "mutual-info": 8,
    "cq-chain": 9,
    "cqq": 10,
    "convexity": 11,
    "holevo": 12,
    "wehrl": 13,
    "counterexample": 14,
}


@dataclass
class SuiteConfig:
    suites: Sequence[str] = ("all",)
    dims: Sequence[int] = (2, 2, 2)
    trials: int = 50
    seed: int = 0
    tol: float | None = None
    d: int = 2
    two_j: int = 1
    out: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.fmt!r}")
        self.dims = as_dims(self.dims).dims


def thread_count() -> int:
    raw = os.environ.get("QSSA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def map_instances(fn: Callable[[int], list], n: int) -> list:
    """Evaluate fn(0..n-1); results concatenated in index order."""
    workers = thread_count()
    if workers == 1:
        batches = [fn(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(fn, range(n)))
    out = []
    for b in batches:
        out.extend(b)
    return out


def _finish(reports: list[InequalityReport], cfg: SuiteConfig, suite: str, index: int) -> list[InequalityReport]:
    for r in reports:
        r.seed = cfg.seed
        r.meta.setdefault("suite", suite)
        r.meta.setdefault("instance", index)
        r.meta.setdefault("rng", RNG_NAME)
    return reports


def _two_factor(cfg: SuiteConfig) -> tuple[int, int]:
    if len(cfg.dims) < 2:
        raise ValueError(f"suite needs at least two factors, got dims {cfg.dims}")
    return cfg.dims[0], cfg.dims[1]


def suite_ssa(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["ssa"]
    total = int(np.prod(cfg.dims))

    def one(i: int):
        rank = total if i % 2 == 0 else max(1, total // 2)
        rho = random_density(cfg.dims, rank, cfg.seed, (sid, i, 0))
        r = checks.check_ssa(rho, tol=cfg.tol)
        r.meta["rank"] = rank
        return _finish([r], cfg, "ssa", i)

    return map_instances(one, cfg.trials)


def suite_stronger_ssa(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["stronger-ssa"]
    total = int(np.prod(cfg.dims))
    counts = (1, 2, 4)

    def one(i: int):
        rho = random_density(cfg.dims, total, cfg.seed, (sid, i, 0))
        count = counts[i % len(counts)]
        k = random_kraus(cfg.dims[0] * cfg.dims[1], count, cfg.seed, (sid, i, 1), acts_on=(1, 2))
        r = checks.check_stronger_ssa(rho, k, tol=cfg.tol)
        return _finish([r], cfg, "stronger-ssa", i)

    return map_instances(one, cfg.trials)


def suite_sandwich(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["sandwich"]
    total = int(np.prod(cfg.dims))
    counts = (2, 3, 4)

    def one(i: int):
        rho = random_density(cfg.dims, total, cfg.seed, (sid, i, 0))
        count = counts[i % len(counts)]
        k = random_kraus(cfg.dims[0], count, cfg.seed, (sid, i, 1), acts_on=(1,))
        left, right = checks.check_sandwich(rho, k, tol=cfg.tol)
        return _finish([left, right], cfg, "sandwich", i)

    return map_instances(one, cfg.trials)


def suite_concavity(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["concavity"]
    dims_cycle = (2, 3, 4)
    m_cycle = (1, 2, 3)

    def one(i: int):
        dim = dims_cycle[i % len(dims_cycle)]
        m = m_cycle[(i // 3) % len(m_cycle)]
        l_op = random_hermitian(dim, cfg.seed, (sid, i, 0))
        k = random_kraus(dim, m, cfg.seed, (sid, i, 1), acts_on=(1,))
        if i % 3 == 2:
            # exercise the sub-complete case sum K†K < I
            k = KrausSet([op * np.sqrt(0.9) for op in k.ops], acts_on=(1,),
                         tol=k.tol, sub_complete=True)
        a_ops = [random_positive(dim, cfg.seed, (sid, i, 2, j)) for j in range(m)]
        b_ops = [random_positive(dim, cfg.seed, (sid, i, 3, j)) for j in range(m)]
        r = checks.check_concave_map(
            ConcavityInstance(l_op, k, a_ops),
            ConcavityInstance(l_op, k, b_ops),
            tol=cfg.tol,
        )
        r.meta["sub_complete"] = k.sub_complete
        return _finish([r], cfg, "concavity", i)

    return map_instances(one, cfg.trials)


def suite_gibbs(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["gibbs"]
    total = int(np.prod(cfg.dims))

    def one(i: int):
        rho = random_density(cfg.dims, total if i % 2 == 0 else 1, cfg.seed, (sid, i, 0))
        h = random_hermitian(total, cfg.seed, (sid, i, 1))
        r = checks.check_gibbs_variational(rho, h, tol=cfg.tol)
        return _finish([r], cfg, "gibbs", i)

    return map_instances(one, cfg.trials)


def suite_cpt(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["cpt"]
    total = int(np.prod(cfg.dims))
    counts = (2, 3)

    def one(i: int):
        rho = random_density(cfg.dims, total, cfg.seed, (sid, i, 0))
        count = counts[i % len(counts)]
        k = random_kraus(cfg.dims[0] * cfg.dims[1], count, cfg.seed, (sid, i, 1), acts_on=(1, 2))
        r = checks.check_cpt_monotonicity(rho, k, tol=cfg.tol)
        return _finish([r], cfg, "cpt", i)

    return map_instances(one, cfg.trials)


def suite_improved_subadd(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["improved-subadd"]
    d1, d2 = _two_factor(cfg)
    counts = (2, 3, 4)

    def one(i: int):
        rho = random_density((d1, d2), d1 * d2, cfg.seed, (sid, i, 0))
        p = random_povm(d1, counts[i % len(counts)], cfg.seed, (sid, i, 1))
        left, right = checks.check_improved_subadd(rho, p, tol=cfg.tol)
        return _finish([left, right], cfg, "improved-subadd", i)

    return map_instances(one, cfg.trials)


def suite_mutual_info(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["mutual-info"]
    d1, d2 = _two_factor(cfg)
    counts = (2, 3, 4)

    def one(i: int):
        rho = random_density((d1, d2), d1 * d2, cfg.seed, (sid, i, 0))
        p = random_povm(d1, counts[i % len(counts)], cfg.seed, (sid, i, 1))
        q = random_povm(d2, counts[(i + 1) % len(counts)], cfg.seed, (sid, i, 2))
        r = checks.check_classical_mutual_info(rho, p, q, tol=cfg.tol)
        return _finish([r], cfg, "mutual-info", i)

    return map_instances(one, cfg.trials)


def suite_cq_chain(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["cq-chain"]
    d1, d2 = _two_factor(cfg)
    counts = (2, 3)

    def one(i: int):
        rho = random_density((d1, d2), d1 * d2, cfg.seed, (sid, i, 0))
        p = random_povm(d1, counts[i % len(counts)], cfg.seed, (sid, i, 1))
        q = random_povm(d2, counts[(i + 1) % len(counts)], cfg.seed, (sid, i, 2))
        first, second = checks.check_cq_chain(rho, p, q, tol=cfg.tol)
        return _finish([first, second], cfg, "cq-chain", i)

    return map_instances(one, cfg.trials)


def suite_cqq(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["cqq"]
    total = int(np.prod(cfg.dims))
    counts = (2, 3, 4)

    def one(i: int):
        rho = random_density(cfg.dims, total, cfg.seed, (sid, i, 0))
        p = random_povm(cfg.dims[0], counts[i % len(counts)], cfg.seed, (sid, i, 1))
        r = checks.check_cqq(rho, p, tol=cfg.tol)
        return _finish([r], cfg, "cqq", i)

    return map_instances(one, cfg.trials)


def suite_convexity(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["convexity"]
    d1, d2 = _two_factor(cfg)

    def one(i: int):
        a = random_density((d1, d2), d1 * d2, cfg.seed, (sid, i, 0))
        b = random_density((d1, d2), max(1, d1 * d2 // 2), cfg.seed, (sid, i, 1))
        p = random_povm(d1, 2 + i % 2, cfg.seed, (sid, i, 2))
        r = checks.check_convexity_cl_minus_q(a, b, p, tol=cfg.tol)
        return _finish([r], cfg, "convexity", i)

    return map_instances(one, cfg.trials)


def suite_holevo(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["holevo"]
    d = cfg.dims[0] * cfg.dims[1]
    sizes = (2, 3, 4)

    def one(i: int):
        m = sizes[i % len(sizes)]
        weights = rng_for(cfg.seed, (sid, i, 0)).dirichlet(np.ones(m))
        states = [random_density((d,), d if j % 2 == 0 else 1, cfg.seed, (sid, i, 1, j))
                  for j in range(m)]
        q = random_povm(d, 2 + i % 3, cfg.seed, (sid, i, 2))
        r = checks.check_holevo(weights, states, q, tol=cfg.tol)
        return _finish([r], cfg, "holevo", i)

    return map_instances(one, cfg.trials)


def suite_wehrl(cfg: SuiteConfig) -> list[InequalityReport]:
    sid = SUITE_IDS["wehrl"]
    dim = cfg.two_j + 1

    def one(i: int):
        rho12 = random_density((dim, dim), dim * dim, cfg.seed, (sid, i, 0))
        a = random_density((dim,), dim, cfg.seed, (sid, i, 1))
        b = random_density((dim,), max(1, dim // 2) if i % 2 else dim, cfg.seed, (sid, i, 2))
        out = [
            wehrl.check_wehrl_dominates(rho12, tol=cfg.tol),
            wehrl.check_wehrl_mutual_info(rho12, tol=cfg.tol),
            wehrl.check_wehrl_convexity(a, b, tol=cfg.tol),
        ]
        return _finish(out, cfg, "wehrl", i)

    return map_instances(one, cfg.trials)


def suite_counterexample(cfg: SuiteConfig) -> list[InequalityReport]:
    lhs, rhs = checks.counterexample_two_sided(cfg.d)
    r = make_report(
        "counterexample_two_sided", lhs, rhs, relation="<=", tol=cfg.tol,
        status="expected-violation", dims=(cfg.d, cfg.d),
        note="two-sided split of the subadditivity bound fails by ln d",
        gap=lhs - rhs,
    )
    return _finish([r], cfg, "counterexample", 0)


SUITES: dict[str, Callable[[SuiteConfig], list[InequalityReport]]] = {
    "ssa": suite_ssa,
    "stronger-ssa": suite_stronger_ssa,
    "sandwich": suite_sandwich,
    "concavity": suite_concavity,
    "gibbs": suite_gibbs,
    "cpt": suite_cpt,
    "improved-subadd": suite_improved_subadd,
    "mutual-info": suite_mutual_info,
    "cq-chain": suite_cq_chain,
    "cqq": suite_cqq,
    "convexity": suite_convexity,
    "holevo": suite_holevo,
    "wehrl": suite_wehrl,
    "counterexample": suite_counterexample,
}


def resolve_suites(names: Sequence[str]) -> list[str]:
    requested = []
    for n in names:
        requested.extend(s.strip() for s in n.split(",") if s.strip())
    if "all" in requested:
        return list(SUITES)
    unknown = [n for n in requested if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}; known: {', '.join(SUITES)}, all")
    # keep registry order, drop duplicates
    return [n for n in SUITES if n in requested]


def run_suites(cfg: SuiteConfig) -> list[InequalityReport]:
    reports = []
    for name in resolve_suites(cfg.suites):
        reports.extend(SUITES[name](cfg))
    return reports


# --- serialization ----------------------------------------------------------


def reports_to_ndjson(reports: Sequence[InequalityReport]) -> str:
    lines = [json.dumps(r.to_json_dict(), separators=(",", ":")) for r in reports]
    return "\n".join(lines) + ("\n" if lines else "")


CSV_HEADER = "name,seed,dims,lhs,rhs,slack,tol,pass,status,meta"


def reports_to_csv(reports: Sequence[InequalityReport]) -> str:
    rows = [CSV_HEADER]
    for r in reports:
        d = r.to_json_dict()
        dims = "x".join(str(x) for x in d["dims"]) if d["dims"] else ""
        meta = json.dumps(d["meta"], separators=(",", ":")).replace('"', "'")
        cells = [
            d["name"],
            "" if d["seed"] is None else str(d["seed"]),
            dims,
            "" if d["lhs"] is None else repr(d["lhs"]),
            "" if d["rhs"] is None else repr(d["rhs"]),
            "" if d["slack"] is None else repr(d["slack"]),
            repr(d["tol"]),
            str(d["pass"]).lower(),
            d["status"],
            '"' + meta + '"',
        ]
        rows.append(",".join(cells))
    return "\n".join(rows) + "\n"
