"""Increment laws and walk-path generation.

A walk is S_0 = 0, S_k = Y_1 + ... + Y_k with i.i.d. steps Y drawn from an
:class:`IncrementLaw`.  Three law families are supported:

* finite-support lattice laws (rational support points and probabilities),
  the substrate for all exact enumeration work;
* Gaussian steps, the diffuse calibration family whose scaling limit is
  Brownian motion;
* symmetric heavy-tailed steps with a prescribed tail index, used for
  stable-limit ratio checks.

Sampling is a pure function of (law, length, seed): identical inputs give
bit-identical paths.  Per-trial streams derive from a master seed via
:func:`derive_seed`, so embarrassingly parallel Monte Carlo stays
reproducible regardless of scheduling.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, ParameterError

__all__ = [
    "IncrementLaw",
    "WalkPath",
    "derive_seed",
    "sample_walk",
    "skeleton",
]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise ParameterError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class IncrementLaw:
    """Step distribution of a random walk.

    ``kind`` is one of ``"lattice"``, ``"gaussian"``, ``"heavy_tail"``.
    Lattice laws carry exact rational support points and probabilities;
    Gaussian laws carry (mean, stddev); heavy-tailed laws carry the tail
    index alpha in (0, 2] and are sampled by inverse CDF of a fixed
    symmetric stable-like parametrization (see :meth:`describe`).
    """

    kind: str
    support: tuple = ()
    probs: tuple = ()
    mean: float = 0.0
    stddev: float = 1.0
    alpha: float = 1.0
    description: str = ""

    # -- constructors -------------------------------------------------

    @classmethod
    def lattice(cls, support, probs, description="") -> "IncrementLaw":
        sup = tuple(_as_fraction(s) for s in support)
        pr = tuple(_as_fraction(p) for p in probs)
        if len(sup) != len(pr) or not sup:
            raise ParameterError("support and probabilities must be nonempty and equal length")
        if any(p < 0 for p in pr):
            raise ParameterError("lattice probabilities must be nonnegative")
        if sum(pr) != 1:
            raise ParameterError(f"lattice probabilities sum to {sum(pr)}, expected exactly 1")
        if len(set(sup)) != len(sup):
            raise ParameterError("support points must be distinct")
        order = sorted(range(len(sup)), key=lambda i: sup[i])
        sup = tuple(sup[i] for i in order)
        pr = tuple(pr[i] for i in order)
        return cls(kind="lattice", support=sup, probs=pr, description=description)

    @classmethod
    def gaussian(cls, mean=0.0, stddev=1.0, description="") -> "IncrementLaw":
        if not (stddev > 0):
            raise ParameterError("gaussian stddev must be positive")
        return cls(kind="gaussian", mean=float(mean), stddev=float(stddev),
                   description=description)

    @classmethod
    def heavy_tail(cls, alpha, description="") -> "IncrementLaw":
        if not (0 < alpha <= 2):
            raise ParameterError("tail index must lie in (0, 2]")
        return cls(kind="heavy_tail", alpha=float(alpha), description=description)

    @classmethod
    def fair_pm1(cls) -> "IncrementLaw":
        return cls.lattice((-1, 1), (Fraction(1, 2), Fraction(1, 2)), "fair +-1")

    @classmethod
    def biased_pm1(cls, p_up) -> "IncrementLaw":
        p = _as_fraction(p_up)
        return cls.lattice((-1, 1), (1 - p, p), f"biased +-1, p_up={p}")

    @classmethod
    def uniform3(cls) -> "IncrementLaw":
        t = Fraction(1, 3)
        return cls.lattice((-1, 0, 1), (t, t, t), "uniform {-1,0,+1}")

    # -- structure queries ---------------------------------------------

    def is_symmetric(self) -> bool:
        if self.kind == "gaussian":
            return self.mean == 0.0
        if self.kind == "heavy_tail":
            return True
        table = dict(zip(self.support, self.probs))
        return all(table.get(-s, Fraction(0)) == p for s, p in table.items())

    def is_diffuse(self) -> bool:
        return self.kind in ("gaussian", "heavy_tail")

    def has_positive_steps(self) -> bool:
        if self.kind != "lattice":
            return True
        return any(s > 0 and p > 0 for s, p in zip(self.support, self.probs))

    def has_negative_steps(self) -> bool:
        if self.kind != "lattice":
            return True
        return any(s < 0 and p > 0 for s, p in zip(self.support, self.probs))

    def mean_step(self):
        if self.kind == "lattice":
            return sum(s * p for s, p in zip(self.support, self.probs))
        if self.kind == "gaussian":
            return self.mean
        raise ParameterError("heavy-tailed laws have no finite mean in general")

    def lattice_integer_form(self):
        """Return (unit, steps, probs) with integer steps of gcd 1.

        Every support point equals ``step * unit``; walks on this law live on
        the integer lattice scaled by ``unit``, which is what the exact
        enumeration and dynamic-programming code operates on.
        """
        if self.kind != "lattice":
            raise ParameterError("integer form only defined for lattice laws")
        denom = math.lcm(*(s.denominator for s in self.support))
        ints = [int(s * denom) for s in self.support]
        g = math.gcd(*(abs(i) for i in ints if i != 0)) if any(ints) else 1
        g = g or 1
        unit = Fraction(g, denom)
        steps = tuple(i // g for i in ints)
        return unit, steps, self.probs

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(self.describe(), sort_keys=True)

    def describe(self) -> dict:
        """Manifest entry: full parametrization, exact where applicable."""
        if self.kind == "lattice":
            return {
                "kind": "lattice",
                "support": [str(s) for s in self.support],
                "probs": [str(p) for p in self.probs],
                "description": self.description,
            }
        if self.kind == "gaussian":
            return {"kind": "gaussian", "mean": self.mean, "stddev": self.stddev,
                    "description": self.description}
        return {
            "kind": "heavy_tail",
            "alpha": self.alpha,
            "parametrization": ("exact standard Cauchy, x = tan(pi (u - 1/2))"
                                if self.alpha == 1.0 else
                                "symmetric Pareto, P(|X| > x) = x^-alpha for x >= 1"),
            "description": self.description,
        }

    @classmethod
    def from_json(cls, text: str) -> "IncrementLaw":
        obj = json.loads(text) if isinstance(text, str) else text
        kind = obj.get("kind")
        if kind == "lattice":
            return cls.lattice(obj["support"], obj["probs"], obj.get("description", ""))
        if kind == "gaussian":
            return cls.gaussian(obj["mean"], obj["stddev"], obj.get("description", ""))
        if kind == "heavy_tail":
            return cls.heavy_tail(obj["alpha"], obj.get("description", ""))
        raise ParameterError(f"unknown law kind {kind!r}")


@dataclass(frozen=True)
class WalkPath:
    """A finite walk S_0 = 0, ..., S_m, optionally with a kill index.

    A kill index j marks the lifetime: entries at indices >= j are frozen at
    values[j-1], so downstream functionals always act on full-length
    sequences.
    """

    values: tuple
    kill_index: Optional[int] = None

    def __post_init__(self):
        if len(self.values) == 0 or self.values[0] != 0:
            raise ParameterError("a walk path must start at 0")
        if self.kill_index is not None:
            j = self.kill_index
            if not (0 < j <= self.length):
                raise ParameterError("kill index must lie in 1..m")

    @property
    def length(self) -> int:
        return len(self.values) - 1

    def killed_at(self, j: int) -> "WalkPath":
        """Freeze the path at its pre-death value from index j on."""
        if not (0 < j <= self.length):
            raise ParameterError("kill index must lie in 1..m")
        vals = tuple(self.values[: j]) + (self.values[j - 1],) * (self.length - j + 1)
        return WalkPath(values=vals, kill_index=j)

    def to_csv_rows(self):
        return [(i, v) for i, v in enumerate(self.values)]


def path_values(path) -> Sequence:
    """Accept a WalkPath or a raw value sequence; return the value sequence."""
    if isinstance(path, WalkPath):
        return path.values
    return path


def derive_seed(master_seed: int, trial_index: int) -> int:
    """Stable per-trial seed derived from (master seed, trial index)."""
    ss = np.random.SeedSequence(entropy=(int(master_seed), int(trial_index)))
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def sample_steps(law: IncrementLaw, length: int, seed: int) -> np.ndarray:
    """Raw i.i.d. steps as a float array; deterministic in (law, length, seed)."""
    if length < 1:
        raise ParameterError("length must be >= 1")
    rng = _rng(seed)
    if law.kind == "lattice":
        cum = np.cumsum([float(p) for p in law.probs])
        cum[-1] = 1.0
        idx = np.searchsorted(cum, rng.random(length), side="right")
        sup = np.array([float(s) for s in law.support])
        return sup[idx]
    if law.kind == "gaussian":
        return law.mean + law.stddev * rng.standard_normal(length)
    u = rng.random(length)
    if law.alpha == 1.0:
        return np.tan(np.pi * (u - 0.5))
    signs = np.where(rng.random(length) < 0.5, -1.0, 1.0)
    return signs * (1.0 - u) ** (-1.0 / law.alpha)


def sample_walk(law: IncrementLaw, length: int, seed: int) -> WalkPath:
    """Sample a walk of the given length; pure in (law, length, seed)."""
    steps = sample_steps(law, length, seed)
    vals = np.empty(length + 1)
    vals[0] = 0.0
    np.cumsum(steps, out=vals[1:])
    return WalkPath(values=tuple(vals.tolist()))


def skeleton(path, stride: int):
    """Subsample a path on a coarser grid: output[j] = input[stride * j].

    The stride must divide the path length.  Skeletons nest: taking a stride-r
    skeleton of a stride-m skeleton equals the stride-(m*r) skeleton of the
    original path.
    """
    vals = path_values(path)
    m = len(vals) - 1
    if stride < 1:
        raise ParameterError("stride must be a positive integer")
    if m % stride != 0:
        raise DimensionError(f"stride {stride} does not divide path length {m}")
    sub = tuple(vals[i] for i in range(0, m + 1, stride))
    if isinstance(path, WalkPath):
        kill = path.kill_index
        new_kill = None if kill is None else -(-kill // stride)
        if new_kill is not None and new_kill > len(sub) - 1:
            new_kill = len(sub) - 1
        return WalkPath(values=sub, kill_index=new_kill)
    return sub
