"""Path transformations: reflected-excursion reversal and time reversals.

The central object is the pathwise transform that rebuilds a walk from the
time-reversed excursions of its reflected process M - S, stacked above the
ladder heights:

    out_i = H_k + (H_{k+1} - S(T_{k+1} - (i - T_k)))   for T_k <= i <= T_{k+1}.

On each complete ladder interval this reverses the excursion about its
endpoint.  The trailing incomplete excursion, which the interval formula
does not define, is emitted as H_last + (M - S)_i: the reflected gap riding
on the last observed ladder height.  Consequences of that window rule, all
exercised by tests:

* the output endpoint always equals 2 * max - last value of the input;
* law-level statements hold on complete ladder intervals, while the trailing
  segment is a window construction whose boundary effect is quantified
  rather than hidden.

Time reversals at ladder epochs, at the last maximum, and the post-minimum
split are the building blocks for the distributional identities certified in
the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .errors import InsufficientLadderError, ParameterError
from .fluctuation import LocalTimeCurve, ladder_epochs
from .increments import WalkPath, path_values

__all__ = [
    "ExcursionDecomposition",
    "decompose_excursions",
    "tanaka_transform",
    "future_min_local_time",
    "reverse_at_ladder",
    "reverse_at_last_max",
    "post_min_process",
]


@dataclass(frozen=True)
class ExcursionDecomposition:
    """Excursions of the reflected process M - S between ladder epochs.

    Complete excursions start and end at 0 and are nonnegative throughout
    (they may touch 0 inside at weak revisits of the maximum on lattice
    paths).  ``boundary`` is the trailing incomplete excursion, possibly a
    single point.
    """

    excursions: Tuple[tuple, ...]
    boundary: tuple

    def total_length(self) -> int:
        n = sum(len(e) - 1 for e in self.excursions)
        return n + (len(self.boundary) - 1)


def _wrap_like(path, values):
    if isinstance(path, WalkPath):
        return WalkPath(values=tuple(values))
    return tuple(values)


def decompose_excursions(path) -> ExcursionDecomposition:
    vals = path_values(path)
    T = ladder_epochs(vals)
    m = len(vals) - 1
    refl = []
    mx = vals[0]
    for v in vals:
        if v > mx:
            mx = v
        refl.append(mx - v)
    excs = tuple(tuple(refl[T[k]: T[k + 1] + 1]) for k in range(len(T) - 1))
    boundary = tuple(refl[T[-1]: m + 1])
    return ExcursionDecomposition(excursions=excs, boundary=boundary)


def tanaka_transform(path):
    """Rebuild the path from reversed reflected excursions above the ladder.

    Same length as the input.  On complete ladder intervals the interval
    formula holds exactly; past the last observed ladder epoch the output is
    H_last + (M - S).  Output values are >= 0 everywhere and strictly
    positive at indices 1..T_last.
    """
    vals = path_values(path)
    m = len(vals) - 1
    T = ladder_epochs(vals)
    out = [vals[0]] * (m + 1)
    for k in range(len(T) - 1):
        a, b = T[k], T[k + 1]
        ha = vals[a]
        hb = vals[b]
        for i in range(a, b + 1):
            out[i] = ha + (hb - vals[b - (i - a)])
    a = T[-1]
    h_last = vals[a]
    for i in range(a, m + 1):
        # running max past the last epoch stays at h_last
        out[i] = h_last + (h_last - vals[i])
    return _wrap_like(path, out)


def future_min_local_time(path, variant: str = "verbatim") -> LocalTimeCurve:
    """Count times the path sits at its future minimum and then steps up.

    Future minima are taken over the finite window; the final index has no
    successor and is never counted.  The verbatim variant uses the weak
    condition S_j = min_{i >= j} S_i; the strict variant requires S_j to be
    strictly below everything after it.  As with the local time at the
    maximum, the two agree on diffuse paths and differ on lattice ties, and
    only the strict count matches the strict ladder structure exactly.
    """
    vals = path_values(path)
    m = len(vals) - 1
    counts = [0]
    c = 0
    # suffix minima over the window
    suf = list(vals)
    for i in range(m - 1, -1, -1):
        if suf[i + 1] < suf[i]:
            suf[i] = suf[i + 1]
    for j in range(1, m + 1):
        if j < m and vals[j] < vals[j + 1]:
            if variant == "verbatim":
                ok = vals[j] == suf[j]
            elif variant == "strict":
                ok = vals[j] < suf[j + 1]
            else:
                raise ParameterError(f"unknown local time variant {variant!r}")
            if ok:
                c += 1
        counts.append(c)
    return LocalTimeCurve(counts=tuple(counts), variant=variant)


def reverse_at_ladder(path, k: int):
    """Reversed pre-T_k path: (S(T_k) - S(T_k - i), 0 <= i <= T_k).

    Requires at least k ascending ladder epochs within the window.
    """
    vals = path_values(path)
    if k < 1:
        raise ParameterError("k must be a positive integer")
    T = ladder_epochs(vals)
    if len(T) - 1 < k:
        raise InsufficientLadderError(
            f"path realizes only {len(T) - 1} ladder epochs, needed {k}")
    t = T[k]
    top = vals[t]
    return _wrap_like(path, [top - vals[t - i] for i in range(t + 1)])


def reverse_at_last_max(path, m: int):
    """Reversed pre-G path, G the last time at the running maximum by m."""
    vals = path_values(path)
    if not (0 <= m <= len(vals) - 1):
        raise ParameterError("index outside the window")
    mx = vals[0]
    g = 0
    for j in range(1, m + 1):
        if vals[j] > mx:
            mx = vals[j]
        if vals[j] == mx:
            g = j
    top = vals[g]
    return _wrap_like(path, [top - vals[g - i] for i in range(g + 1)])


def post_min_process(path, m: int):
    """Post-minimum increments: (S(K+i) - S(K), 0 <= i <= m - K),

    where K is the last time at the running minimum by m; rebased at 0.
    """
    vals = path_values(path)
    if not (0 <= m <= len(vals) - 1):
        raise ParameterError("index outside the window")
    mn = vals[0]
    kk = 0
    for j in range(1, m + 1):
        if vals[j] < mn:
            mn = vals[j]
        if vals[j] == mn:
            kk = j
    base = vals[kk]
    return _wrap_like(path, [vals[kk + i] - base for i in range(m - kk + 1)])
