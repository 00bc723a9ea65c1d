"""Experiment sweeps, CSV output, and the formula verification table."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, TextIO

from . import analysis as an
from .analysis import PairType, TheoremParams
from .core import verify_cycle
from .generators import gen_gadget, gen_random_two_matchings
from .rng import trial_seed
from .sampler import DEFAULT_RETRIES, FinderFailure, find_short_rainbow_cycle


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


@dataclass
class ExperimentConfig:
    n_list: list[int]
    trials: int = 50
    base_seed: int = 0
    family: str = "matchings"
    color_factor: float = 1.0  # colors = round(color_factor * n)
    alpha: float = 1.0
    p: float | None = None
    eps: float | None = None
    max_retries: int = DEFAULT_RETRIES
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_list:
            raise ValueError("n list is empty")
        if self.family != "matchings":
            raise ValueError(f"experiments run on the 'matchings' family, got {self.family!r}")

    def params(self) -> TheoremParams:
        if self.p is None:
            if self.eps is not None:
                raise ValueError("eps override needs an explicit p")
            return an.select_parameters(self.alpha)
        return an.make_params(self.alpha, self.p, self.eps)


@dataclass
class TrialRecord:
    family: str
    n: int
    colors: int
    seed: int
    p: float
    eps: float
    delta: float
    retries: int | None
    size_S: int | None
    X: int | None
    k: int | None
    bound: float | None
    cycle_len: int | None
    success: bool
    elapsed_ms: float | None = None


CSV_FIELDS = [f.name for f in fields(TrialRecord)]


def run_trial(config: ExperimentConfig, n: int, index: int) -> TrialRecord:
    params = config.params()
    seed = trial_seed(config.base_seed, index)
    colors = round(config.color_factor * n)
    start = time.perf_counter()
    g = gen_random_two_matchings(n, colors, seed)
    common = dict(family=config.family, n=n, colors=colors, seed=seed,
                  p=params.p, eps=params.eps, delta=params.delta)
    try:
        # separate stream from the one that built the instance
        rep = find_short_rainbow_cycle(g, params, trial_seed(seed, 1), config.max_retries)
    except FinderFailure as exc:
        return TrialRecord(**common, retries=len(exc.attempts) or None, size_S=None, X=None,
                           k=None, bound=None, cycle_len=None, success=False)
    check = verify_cycle(g, rep.cycle)
    if not (check.valid and check.rainbow and len(rep.cycle) <= rep.bound):
        raise RuntimeError(f"certificate check failed for n={n} seed={seed}: {check}")
    elapsed = (time.perf_counter() - start) * 1000 if config.timing else None
    return TrialRecord(**common, retries=rep.retries, size_S=rep.size_S, X=rep.X, k=rep.k,
                       bound=rep.bound, cycle_len=len(rep.cycle), success=True, elapsed_ms=elapsed)


def _run_job(job):
    return run_trial(*job)


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> list[TrialRecord]:
    """All trials in (n, index) order; ``workers`` > 1 fans out to processes."""
    jobs = [(config, n, i) for n in config.n_list for i in range(config.trials)]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(jobs) == 1:
        return [_run_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def summarize(records: Iterable[TrialRecord]) -> list[dict]:
    by_n: dict[int, list[TrialRecord]] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r)
    out = []
    for n, rs in by_n.items():
        lens = [r.cycle_len for r in rs if r.success]
        med = statistics.median(lens) if lens else None
        out.append({
            "n": n,
            "trials": len(rs),
            "success_rate": len(lens) / len(rs),
            "median_cycle_len": med,
            "median_over_log2n": None if med is None else med / math.log2(n),
        })
    return out


def write_csv(records: list[TrialRecord], config: ExperimentConfig, fh: TextIO) -> None:
    fh.write("# rgl experiment\n")
    fh.write("# config " + json.dumps(asdict(config), sort_keys=True) + "\n")
    for r in records:
        if r.success and r.cycle_len > r.bound:
            raise RuntimeError(f"row n={r.n} seed={r.seed}: cycle_len exceeds bound")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow([fmt(getattr(r, name)) for name in CSV_FIELDS])
    for s in summarize(records):
        fh.write("# summary " + " ".join(f"{k}={fmt(v)}" for k, v in s.items()) + "\n")


def experiment_csv(config: ExperimentConfig, workers: int | None = None) -> str:
    buf = io.StringIO()
    write_csv(run_experiment(config, workers), config, buf)
    return buf.getvalue()


def read_csv_rows(text: str) -> list[dict[str, str]]:
    body = [line for line in text.splitlines() if line and not line.startswith("#")]
    return list(csv.DictReader(body))


# --- formula verification ---------------------------------------------------

@dataclass
class IdentityCheck:
    name: str
    value: float
    tolerance: float
    ok: bool


@dataclass
class FormulaReport:
    identities: list[IdentityCheck] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.identities)


def p_grid(step: float) -> list[float]:
    count = round(1 / step)
    return [round(i * step, 12) for i in range(1, count)]


def central_diff(f, x: float, h: float = 1e-4) -> float:
    return (f(x + h) - f(x - h)) / (2 * h)


def verify_formulas(step: float = 0.05) -> FormulaReport:
    rep = FormulaReport()

    def ident(name: str, residual: float, tol: float) -> None:
        rep.identities.append(IdentityCheck(name, residual, tol, abs(residual) <= tol))

    gp = an.GOLDEN_P
    ident("fixed_point |2p^2-p^4-p| at (sqrt5-1)/2", an.marginal_prob(gp) - gp, 1e-12)
    ident("f_paper(1) - 1", an.poly_caseI_paper(1.0) - 1.0, 0.0)
    ident("g(1) - 1", an.poly_g(1.0) - 1.0, 0.0)
    ident("f_paper'(1) - 3", central_diff(an.poly_caseI_paper, 1.0) - 3.0, 1e-6)
    ident("g'(1)", central_diff(an.poly_g, 1.0), 1e-6)
    a0, p0 = an.alpha_threshold()
    ident("tangency p0 - a0(2p0^2-p0^4)", p0 - a0 * an.marginal_prob(p0), 1e-12)
    ident("tangency a0(4p0-4p0^3) - 1", a0 * (4 * p0 - 4 * p0**3) - 1.0, 1e-12)
    lo, _ = an.feasible_p_interval(1.0)
    ident("feasible(1) lower - (sqrt5-1)/2", lo - gp, 1e-6)

    gadgets = {t: gen_gadget(t) for t in PairType}
    worst_ie = worst_fact = 0.0
    for p in p_grid(step):
        m = an.marginal_prob(p)
        row = {"p": p, "marginal": m, "g": an.poly_g(p),
               "caseI_paper": an.poly_caseI_paper(p), "caseII_paper": an.poly_caseII_paper(p)}
        for t, gad in gadgets.items():
            joint = an.joint_prob_exact(gad, p)
            worst_ie = max(worst_ie, abs(joint - an.joint_prob_inclusion_exclusion(gad, p)))
            row[f"joint_{t}"] = joint
            row[f"cov_{t}"] = joint - m * m
        worst_fact = max(worst_fact, abs(row[f"joint_{PairType.DISJOINT}"] - m * m))
        row["diff_TypeI"] = row[f"joint_{PairType.TYPE_I}"] - row["caseI_paper"]
        row["diff_TypeII"] = row[f"joint_{PairType.TYPE_II}"] - row["caseII_paper"]
        rep.rows.append(row)
    ident("max |enumeration - inclusion/exclusion|", worst_ie, 1e-12)
    ident("max |joint(Disjoint) - marginal^2|", worst_fact, 1e-12)
    return rep


def format_formula_report(rep: FormulaReport) -> str:
    out = ["# identities"]
    for c in rep.identities:
        out.append(f"{'PASS' if c.ok else 'FAIL'}  {c.name}  residual={c.value:.3e}  tol={c.tolerance:g}")
    out.append("# grid (joint probabilities by subset enumeration; diff_* = enumeration - printed polynomial)")
    if rep.rows:
        cols = list(rep.rows[0])
        out.append(",".join(cols))
        for row in rep.rows:
            out.append(",".join(fmt(row[c]) for c in cols))
    return "\n".join(out) + "\n"
