"""Random sampling campaigns over bounded-degree polynomial space.

Draws are uniform on the unit sphere of the zero-at-origin coefficient
hyperplane (normalized complex Gaussians with the constant term removed,
so a branch through the origin can exist at all).  Per-draw randomness is
counter-based: sample index -> an independent substream of the campaign
seed, so results do not depend on evaluation order.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import analysis as A
from . import poly as P
from .branch import BranchEvaluator, ContinuationOptions, origin_branch
from .curve import is_class_b
from .errors import (GcdIllConditioned, MultipleZeroBranches, NashkitError,
                     NoZeroBranch, NotClassB)

SEQ_TOL = 1e-5
DOMAIN_MARGIN = 1e-6


@dataclass(frozen=True)
class Tolerances:
    branch_res: float = 1e-9
    gcd_eps: float = P.GCD_EPS
    dedup_eps: float = 1e-7
    seq_tol: float = SEQ_TOL
    growth_slack: float = A.GROWTH_SLACK
    domain_margin: float = DOMAIN_MARGIN

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in
                ("branch_res", "gcd_eps", "dedup_eps", "seq_tol",
                 "growth_slack", "domain_margin")}


@dataclass(frozen=True)
class CampaignConfig:
    k: int
    rho: float
    K: A.CompactSpec
    Omega: A.OpenDisk
    n_samples: int
    seed: int
    tolerances: Tolerances = field(default_factory=Tolerances)
    taylor_terms: int = 16
    valency_probes: int = 6
    tijdeman_s: float = 2.0
    tijdeman_t: float = 1.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.n_samples < 0:
            raise ValueError("n_samples must be non-negative")
        if isinstance(self.K, A.FinitePoints) and self.K.cardinality <= self.k:
            raise ValueError("finite K must have cardinality > k")
        reach = abs(self.Omega.center) + self.Omega.radius
        if reach > self.rho * (1.0 - self.tolerances.domain_margin):
            raise ValueError("the closure of Omega must sit inside the "
                             "analyticity disk with margin")

    @property
    def m(self) -> int:
        """Complex dimension of the degree-k coefficient space."""
        return (self.k + 1) * (self.k + 2) // 2

    def to_json(self) -> dict:
        return {
            "k": self.k, "rho": self.rho,
            "K": A.spec_to_json(self.K), "Omega": A.spec_to_json(self.Omega),
            "n_samples": self.n_samples, "seed": self.seed,
            "tolerances": self.tolerances.to_json(),
            "taylor_terms": self.taylor_terms,
            "valency_probes": self.valency_probes,
            "tijdeman": {"s": self.tijdeman_s, "t": self.tijdeman_t},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CampaignConfig":
        if "config" in obj and isinstance(obj["config"], dict):
            obj = obj["config"]  # accept a run.json header as well
        tol = Tolerances(**obj.get("tolerances", {}))
        tij = obj.get("tijdeman", {})
        return cls(
            k=int(obj["k"]), rho=float(obj["rho"]),
            K=A.spec_from_json(obj["K"]), Omega=A.spec_from_json(obj["Omega"]),
            n_samples=int(obj["n_samples"]), seed=int(obj["seed"]),
            tolerances=tol,
            taylor_terms=int(obj.get("taylor_terms", 16)),
            valency_probes=int(obj.get("valency_probes", 6)),
            tijdeman_s=float(tij.get("s", 2.0)),
            tijdeman_t=float(tij.get("t", 1.0)),
        )


@dataclass(frozen=True)
class DrawResult:
    index: int
    S: P.BivarPoly
    accepted: bool
    reason: str              # "" when accepted
    g: BranchEvaluator | None


@dataclass(frozen=True)
class SampleRecord:
    index: int
    accepted: bool
    reason: str
    B: float | None = None
    empirical_K: float | None = None
    max_domain: float | None = None
    max_K: float | None = None
    valency: int | None = None
    tijdeman_ok: bool | None = None


@dataclass(frozen=True)
class CampaignResult:
    config: CampaignConfig
    accepted: int
    rejected_reasons: dict
    B_values: tuple
    empirical_C: float | None
    empirical_Cauchy_K: float | None
    runtime: float
    records: tuple
    stability: dict | None   # running-max heuristic, reported not asserted

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "accepted": self.accepted,
            "rejected_reasons": dict(self.rejected_reasons),
            "empirical_C": self.empirical_C,
            "empirical_Cauchy_K": self.empirical_Cauchy_K,
            "runtime_seconds": self.runtime,
            "n_b_values": len(self.B_values),
            "stability": self.stability,
            "empty": self.accepted == 0,
        }


# ---------------------------------------------------------------------------
# sampling


def _coefficient_slots(k: int) -> list:
    return [(i, j) for i in range(k + 1) for j in range(k + 1 - i)]


def draw_polynomial(cfg: CampaignConfig, index: int) -> P.BivarPoly:
    """The index-th unit-sphere draw of the campaign (constant term zeroed
    so that a branch through the origin is possible)."""
    ss = np.random.SeedSequence(entropy=cfg.seed, spawn_key=(index,))
    rng = np.random.Generator(np.random.Philox(ss))
    vec = rng.standard_normal(cfg.m) + 1j * rng.standard_normal(cfg.m)
    slots = _coefficient_slots(cfg.k)
    c = np.zeros((cfg.k + 1, cfg.k + 1), dtype=complex)
    for (i, j), v in zip(slots, vec):
        c[i, j] = v
    c[0, 0] = 0.0
    nrm = np.linalg.norm(c)
    if nrm < 1e-12:
        raise ZeroDivisionError("degenerate draw")
    return P.BivarPoly(c / nrm)


def iter_draws(cfg: CampaignConfig):
    """Yield a DrawResult for every one of the n_samples draws."""
    opts = ContinuationOptions(branch_res=cfg.tolerances.branch_res)
    for index in range(cfg.n_samples):
        try:
            S = draw_polynomial(cfg, index)
        except ZeroDivisionError:
            yield DrawResult(index, P.BivarPoly(np.zeros((1, 1))), False,
                             "degenerate_draw", None)
            continue
        try:
            if not is_class_b(S, cfg.rho, gcd_eps=cfg.tolerances.gcd_eps):
                yield DrawResult(index, S, False, "not_class_b", None)
                continue
            g = origin_branch(S, cfg.rho, cfg.K, opts)
        except NotClassB:
            yield DrawResult(index, S, False, "not_class_b", None)
            continue
        except NoZeroBranch:
            yield DrawResult(index, S, False, "no_zero_branch", None)
            continue
        except MultipleZeroBranches:
            yield DrawResult(index, S, False, "multiple_zero_branches", None)
            continue
        except GcdIllConditioned:
            yield DrawResult(index, S, False, "gcd_ill_conditioned", None)
            continue
        yield DrawResult(index, S, True, "", g)


def sample_class_a(cfg: CampaignConfig):
    """Stream of accepted (S, branch) pairs among the n_samples draws."""
    for d in iter_draws(cfg):
        if d.accepted:
            yield d.S, d.g


# ---------------------------------------------------------------------------
# the campaign


def _evaluate_sample(cfg: CampaignConfig, d: DrawResult) -> SampleRecord:
    g = d.g
    rep = A.bernstein_constant(g, cfg.K, cfg.Omega)
    r_taylor = 1.0 if cfg.rho > 1 else 0.5 * cfg.rho
    trep = A.taylor_coeffs(g, r_taylor, cfg.taylor_terms)
    emp_k, _profile = A.cauchy_bound_check(
        trep, rep.max_on_K, cfg.rho,
        growth_slack=cfg.tolerances.growth_slack)
    val = A.valency_check(d.S, g, cfg.Omega, cfg.valency_probes,
                          seed=cfg.seed * 1000003 + d.index)
    s, t = cfg.tijdeman_s, cfg.tijdeman_t
    R_tij = 0.9 * cfg.rho / (s * t + s + t)
    _, _, tij_ok = A.tijdeman_check(g, R_tij, s, t)
    return SampleRecord(d.index, True, "", B=rep.B, empirical_K=emp_k,
                        max_domain=rep.max_on_domain, max_K=rep.max_on_K,
                        valency=val, tijdeman_ok=tij_ok)


def run_campaign(cfg: CampaignConfig, out_dir=None) -> CampaignResult:
    """Evaluate every accepted draw, aggregate, and optionally persist
    run.json + samples.csv (written whole, then renamed into place)."""
    t0 = time.perf_counter()
    records = []
    reasons: dict = {}
    b_values = []
    emp_ks = []
    for d in iter_draws(cfg):
        if not d.accepted:
            reasons[d.reason] = reasons.get(d.reason, 0) + 1
            records.append(SampleRecord(d.index, False, d.reason))
            continue
        try:
            rec = _evaluate_sample(cfg, d)
        except NashkitError as exc:
            reason = f"analysis:{type(exc).__name__}"
            reasons[reason] = reasons.get(reason, 0) + 1
            records.append(SampleRecord(d.index, False, reason))
            continue
        records.append(rec)
        b_values.append(rec.B)
        emp_ks.append(rec.empirical_K)
    accepted = sum(1 for r in records if r.accepted)
    stability = None
    if len(b_values) >= 2:
        half = len(b_values) // 2
        first = max(b_values[:half]) if half else max(b_values)
        second = max(b_values[half:])
        stability = {"first_half_max": first, "second_half_max": second,
                     "running_max_growth": second / first if first > 0 else None}
    result = CampaignResult(
        config=cfg,
        accepted=accepted,
        rejected_reasons=reasons,
        B_values=tuple(b_values),
        empirical_C=max(b_values) if b_values else None,
        empirical_Cauchy_K=max(emp_ks) if emp_ks else None,
        runtime=time.perf_counter() - t0,
        records=tuple(records),
        stability=stability,
    )
    if out_dir is not None:
        persist_result(result, Path(out_dir))
    return result


_CSV_COLUMNS = ["index", "accepted", "reason", "B", "empirical_K",
                "max_domain", "max_K", "valency", "tijdeman_ok"]


def records_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.index, int(r.accepted), r.reason,
            "" if r.B is None else repr(r.B),
            "" if r.empirical_K is None else repr(r.empirical_K),
            "" if r.max_domain is None else repr(r.max_domain),
            "" if r.max_K is None else repr(r.max_K),
            "" if r.valency is None else r.valency,
            "" if r.tijdeman_ok is None else int(r.tijdeman_ok),
        ])
    return buf.getvalue()


def _write_atomic(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def persist_result(result: CampaignResult, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    header = result.to_json()
    header["written_at"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    _write_atomic(out_dir / "run.json", json.dumps(header, indent=2) + "\n")
    _write_atomic(out_dir / "samples.csv", records_csv(result.records))


# ---------------------------------------------------------------------------
# sequence experiments


@dataclass(frozen=True)
class SequenceExperiment:
    S_limit: P.BivarPoly
    direction: P.BivarPoly
    deltas: tuple
    B_sequence: tuple        # entry None when the perturbed draw was skipped
    B_limit: float
    converged: bool
    skipped: tuple           # ((delta, reason), ...)

    def to_json(self) -> dict:
        return {
            "deltas": list(self.deltas),
            "B_sequence": [b for b in self.B_sequence],
            "B_limit": self.B_limit,
            "converged": self.converged,
            "skipped": [[d, r] for d, r in self.skipped],
        }


def sequence_experiment(S_limit: P.BivarPoly, direction: P.BivarPoly,
                        deltas, cfg: CampaignConfig) -> SequenceExperiment:
    """Growth-ratio convergence of perturbed polynomials along a direction.

    Each S_n = normalize(S_limit + delta_n * direction) is evaluated like a
    campaign sample; the experiment converges when the gap |B_n - B_limit|
    decreases over the last three computed deltas and ends below seq_tol.
    """
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas) or any(b <= a for a, b in
                                          zip(deltas[1:], deltas[:-1])):
        raise ValueError("deltas must be positive and strictly decreasing")
    opts = ContinuationOptions(branch_res=cfg.tolerances.branch_res)
    g_limit = origin_branch(S_limit, cfg.rho, cfg.K, opts)  # class-A pre
    B_limit = A.bernstein_constant(g_limit, cfg.K, cfg.Omega).B
    b_seq = []
    skipped = []
    for d in deltas:
        Sn_raw = S_limit + d * direction
        try:
            Sn = P.sphere_normalize(Sn_raw)
            g = origin_branch(Sn, cfg.rho, cfg.K, opts)
            b_seq.append(A.bernstein_constant(g, cfg.K, cfg.Omega).B)
        except NashkitError as exc:
            b_seq.append(None)
            skipped.append((d, type(exc).__name__))
    diffs = [abs(b - B_limit) for b in b_seq if b is not None]
    tail = diffs[-3:]
    converged = (len(tail) >= 1 and tail[-1] <= cfg.tolerances.seq_tol
                 and all(y <= x + 1e-12 for x, y in zip(tail, tail[1:])))
    return SequenceExperiment(S_limit, direction, tuple(deltas),
                              tuple(b_seq), float(B_limit), bool(converged),
                              tuple(skipped))
