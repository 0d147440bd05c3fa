"""Exact-arithmetic certification suites.

Every check here runs over complete enumerations of lattice walks with
rational probabilities and asserts identities with total-variation distance
exactly zero (or residuals below rigorous tail bounds).  Windowing
conventions, chosen so the identities are theorems on finite windows rather
than approximations:

* Ladder-segment reversal (part 1).  The reversed pre-T_k path is compared
  with the excursion-rebuilt path truncated at T_k; both sides carry marks
  counting completed segment starts strictly before the current index, and
  the event "k ladder epochs not observed" is kept as an explicit atom.
  The mark convention matters: counting *at* rather than *strictly before*
  segment boundaries shifts discrete marks by one step and breaks exact
  equality.
* Last-maximum reversal (part 2) restricts to windows whose last maximum
  contact is a ladder epoch; on diffuse laws that event has full
  probability, and on lattices it is exactly the windowable core (trailing
  weak revisits of the maximum are a window artifact).
* The strict local-time variants are used on lattice laws throughout: the
  weak-record forms of the same identities fail pathwise on paths that
  revisit the running maximum from below, e.g. steps (+1, -1, +1, +1)
  starting from 0, while the strict forms hold on every path.
* The conditioned-walk comparison is at the endpoint law.  On lattice
  windows the kernel chain and the excursion rebuild differ as path laws at
  the zero boundary (total variation 1/8 already at three steps for the
  fair walk), but their endpoints agree exactly: the rebuilt endpoint is
  twice the running maximum minus the walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence

from .conditioning import (hchain_endpoint_distribution, hchain_path_distribution,
                           renewal_function, survival_sequence)
from .fluctuation import ladder_epochs, local_time_strict, local_time_verbatim
from .increments import IncrementLaw, derive_seed, sample_walk
from .oracle import ExactDistribution, distribution_equality, iter_paths
from .scaling import fristedt_residual
from .transforms import future_min_local_time, tanaka_transform

__all__ = [
    "CheckResult",
    "certify_fristedt",
    "certify_reversal",
    "certify_idloc",
    "certify_meander_ac",
    "certify_h_kernel",
    "DEFAULT_LAWS",
]


def DEFAULT_LAWS() -> List[IncrementLaw]:
    return [IncrementLaw.fair_pm1(),
            IncrementLaw.biased_pm1(Fraction(3, 4)),
            IncrementLaw.uniform3()]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    rows: List[list] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


# ---------------------------------------------------------------------------
# ladder-pair identity


def certify_fristedt(laws: Sequence[IncrementLaw] = None,
                     alphas=(0.5, 1.0, 2.0), betas=(0.0, 0.5, 1.0),
                     K: int = 60, bound: float = 1e-6) -> CheckResult:
    laws = DEFAULT_LAWS() if laws is None else laws
    rows = [["law", "alpha", "beta", "lhs", "rhs", "residual", "tail_bound"]]
    ok = True
    worst = 0.0
    for law in laws:
        for a in alphas:
            for b in betas:
                rep = fristedt_residual(law, a, b, K)
                rows.append([law.description, a, b, rep.lhs, rep.rhs,
                             rep.residual, rep.tail_bound])
                good = rep.residual <= rep.tail_bound and rep.tail_bound <= bound
                ok = ok and good
                worst = max(worst, rep.residual)
    return CheckResult("fristedt", ok,
                       f"worst residual {worst:.3e} over {len(rows) - 1} cases",
                       rows)


# ---------------------------------------------------------------------------
# time reversal at ladder epochs and at the last maximum


def _reversal_pair_distributions(law: IncrementLaw, m: int, k: int):
    """Exact laws of both sides of the ladder-segment reversal at level k."""
    d_rev: Dict = {}
    d_fwd: Dict = {}
    for _, vals, prob in iter_paths(law, m):
        T = ladder_epochs(vals)
        if len(T) - 1 < k:
            for d in (d_rev, d_fwd):
                d["unrealized"] = d.get("unrealized", Fraction(0)) + prob
            continue
        t_k = T[k]
        lam = local_time_strict(vals).counts
        rev = tuple(vals[t_k] - vals[t_k - i] for i in range(t_k + 1))
        rev_marks = tuple(k - lam[t_k - i] for i in range(t_k + 1))
        key1 = (rev, rev_marks)
        d_rev[key1] = d_rev.get(key1, Fraction(0)) + prob
        fwd = tuple(tanaka_transform(vals)[: t_k + 1])
        starts = T[:k]
        fwd_marks = tuple(sum(1 for s in starts if s < i) for i in range(t_k + 1))
        key2 = (fwd, fwd_marks)
        d_fwd[key2] = d_fwd.get(key2, Fraction(0)) + prob
    return ExactDistribution(d_rev), ExactDistribution(d_fwd)


def _last_max_pair_distributions(law: IncrementLaw, m: int):
    """Both sides of the last-maximum reversal, on the windowable core.

    Windows whose last maximum contact is not a ladder epoch are kept as an
    explicit common atom; on diffuse laws they would be null.
    """
    d_rev: Dict = {}
    d_fwd: Dict = {}
    for _, vals, prob in iter_paths(law, m):
        T = ladder_epochs(vals)
        mx = vals[0]
        g = 0
        for j in range(1, m + 1):
            if vals[j] > mx:
                mx = vals[j]
            if vals[j] == mx:
                g = j
        if g != T[-1]:
            for d in (d_rev, d_fwd):
                d["boundary"] = d.get("boundary", Fraction(0)) + prob
            continue
        lam = local_time_strict(vals).counts
        rev = tuple(vals[g] - vals[g - i] for i in range(g + 1))
        rev_marks = tuple(lam[g] - lam[g - i] for i in range(g + 1))
        d_rev[(rev, rev_marks)] = d_rev.get((rev, rev_marks), Fraction(0)) + prob
        fwd = tuple(tanaka_transform(vals)[: g + 1])
        starts = T[:-1]
        fwd_marks = tuple(sum(1 for s in starts if s < i) for i in range(g + 1))
        d_fwd[(fwd, fwd_marks)] = d_fwd.get((fwd, fwd_marks), Fraction(0)) + prob
    return ExactDistribution(d_rev), ExactDistribution(d_fwd)


def certify_reversal(laws: Sequence[IncrementLaw] = None,
                     max_length: int = 10) -> CheckResult:
    laws = DEFAULT_LAWS() if laws is None else laws
    rows = [["law", "length", "check", "k", "tv"]]
    ok = True
    for law in laws:
        for m in range(1, max_length + 1):
            for k in range(1, m + 1):
                d1, d2 = _reversal_pair_distributions(law, m, k)
                tv = distribution_equality(d1, d2)
                rows.append([law.description, m, "ladder_segment", k, str(tv)])
                ok = ok and tv == 0
            d1, d2 = _last_max_pair_distributions(law, m)
            tv = distribution_equality(d1, d2)
            rows.append([law.description, m, "last_maximum", "", str(tv)])
            ok = ok and tv == 0
    return CheckResult("reversal", ok,
                       f"{len(rows) - 1} marked-law comparisons, all exact" if ok
                       else "nonzero total variation found", rows)


# ---------------------------------------------------------------------------
# local-time identity under the excursion rebuild


def certify_idloc(enum_length: int = 12, gaussian_paths: int = 10_000,
                  gaussian_length: int = 1_000, seed: int = 20240808) -> CheckResult:
    law = IncrementLaw.fair_pm1()
    violations = 0
    checked = 0
    for _, vals, _ in iter_paths(law, enum_length):
        T = ladder_epochs(vals)
        if len(T) < 2:
            continue
        t_last = T[-1]
        up = tanaka_transform(vals)
        a = local_time_strict(vals).counts
        b = future_min_local_time(up, variant="strict").counts
        checked += 1
        if any(a[j] != b[j] for j in range(t_last)):
            violations += 1

    g_viol = 0
    glaw = IncrementLaw.gaussian(0.0, 1.0)
    for t in range(gaussian_paths):
        w = sample_walk(glaw, gaussian_length, derive_seed(seed, t))
        vals = w.values
        T = ladder_epochs(vals)
        if len(T) < 2:
            continue
        t_last = T[-1]
        up = tanaka_transform(vals)
        a = local_time_verbatim(vals).counts
        b = future_min_local_time(up, variant="verbatim").counts
        if any(a[j] != b[j] for j in range(t_last)):
            g_viol += 1

    passed = violations == 0 and g_viol == 0
    detail = (f"{checked} enumerated lattice windows and {gaussian_paths} sampled "
              f"diffuse paths, {violations + g_viol} violations")
    return CheckResult("idloc", passed, detail,
                       [["family", "violations"],
                        ["lattice_enumeration_strict", violations],
                        ["gaussian_sampled_verbatim", g_viol]])


# ---------------------------------------------------------------------------
# meander absolute continuity and weight normalization


def certify_meander_ac(max_length: int = 10, weight_n: int = 32,
                       weight_trials: int = 100_000,
                       seed: int = 20240808) -> CheckResult:
    law = IncrementLaw.fair_pm1()
    V = renewal_function(law, mode="exact")
    surv = survival_sequence(law, range(1, max_length + 1))
    rows = [["length", "paths_checked", "mismatches"]]
    ok = True
    for m in range(1, max_length + 1):
        chain = hchain_path_distribution(law, m, V)
        mism = 0
        total = 0
        seen = set()
        for _, vals, prob in iter_paths(law, m):
            if min(vals[1:]) < 0:
                continue
            total += 1
            seen.add(vals)
            # meander mass of this path times P(C_m) V(endpoint) must equal
            # the conditioned-chain mass, path by path
            lhs = prob * V(Fraction(vals[-1]))
            rhs = chain.atoms.get(tuple(vals), Fraction(0))
            if lhs != rhs:
                mism += 1
        # the chain must place no mass outside the surviving paths
        extra = [k for k in chain.atoms if k not in seen]
        if extra:
            mism += len(extra)
        ok = ok and mism == 0
        rows.append([m, total, mism])

    # weight normalization: mean of 1/(P(C_n) V(endpoint)) over chain samples
    from .experiments import pm1_conditioned_endpoints
    x = pm1_conditioned_endpoints(weight_n, weight_trials, derive_seed(seed, 7))
    pc = float(surv[weight_n]) if weight_n in surv else float(
        survival_sequence(law, [weight_n])[weight_n])
    w = 1.0 / (pc * (x + 1.0))
    mean = float(w.mean())
    se = float(w.std(ddof=1) / math.sqrt(w.size))
    weight_ok = abs(mean - 1.0) <= 3 * se
    rows.append(["weight_mean", mean, f"se={se:.2e}"])
    ok = ok and weight_ok
    return CheckResult(
        "meander_ac", ok,
        f"path-by-path identity exact to length {max_length}; "
        f"weight mean {mean:.5f} (3 se = {3 * se:.2e})", rows)


# ---------------------------------------------------------------------------
# conditioned kernel rows and endpoint equivalence


def certify_h_kernel(max_length: int = 10) -> CheckResult:
    from .conditioning import h_kernel_row
    law = IncrementLaw.fair_pm1()
    V = renewal_function(law, mode="exact")
    rows = [["check", "value", "pass"]]
    ok = True

    row0 = h_kernel_row(0, law, V)
    up_only = row0 == [(Fraction(1), Fraction(1))]
    rows.append(["row_at_0_forces_up", repr(row0), up_only])
    ok = ok and up_only

    row1 = dict(h_kernel_row(1, law, V))
    expect = {Fraction(2): Fraction(3, 4), Fraction(0): Fraction(1, 4)}
    rows.append(["row_at_1", repr(sorted(row1.items())), row1 == expect])
    ok = ok and row1 == expect

    sums_ok = True
    for x in range(0, 16):
        s = sum(p for _, p in h_kernel_row(x, law, V))
        sums_ok = sums_ok and s == 1
    rows.append(["rows_sum_to_one_x<16", "", sums_ok])
    ok = ok and sums_ok

    # endpoint law of the excursion rebuild equals the kernel-chain endpoint law
    endpoint_ok = True
    worst = Fraction(0)
    for m in range(1, max_length + 1):
        td_end: Dict = {}
        for _, vals, prob in iter_paths(law, m):
            e = tanaka_transform(vals)[-1]
            td_end[e] = td_end.get(e, Fraction(0)) + prob
        chain_end = hchain_endpoint_distribution(law, m, V)
        tv = distribution_equality(ExactDistribution(td_end), chain_end)
        worst = max(worst, tv)
        endpoint_ok = endpoint_ok and tv == 0
    rows.append([f"endpoint_equivalence_to_{max_length}", str(worst), endpoint_ok])
    ok = ok and endpoint_ok
    return CheckResult("h_kernel", ok,
                       "kernel rows exact and endpoint laws identical" if ok
                       else "kernel certification failed", rows)
