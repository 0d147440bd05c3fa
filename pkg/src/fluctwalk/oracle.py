"""Exact enumeration oracle for finite-support lattice walks.

Enumerates all increment sequences of a lattice walk with exact rational
probabilities, and pushes any path functional forward to its exact
distribution.  Floating point never enters: outcome keys are increment index
sequences (not real values), path values are integers on the lattice spanned
by the support, and all masses are :class:`fractions.Fraction`.

This module is the certification substrate for the package's identity
checks: a total-variation distance of exactly zero between two enumerated
distributions is a proof over the enumerated window, not a numerical
coincidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Hashable, Iterator, Optional, Tuple

from .errors import BudgetError, ParameterError
from .increments import IncrementLaw

__all__ = [
    "ExactDistribution",
    "iter_paths",
    "enumerate_paths",
    "functional_distribution",
    "exact_functional_distribution",
    "distribution_equality",
]

DEFAULT_BUDGET = 2**24


@dataclass
class ExactDistribution:
    """Finite map from outcome to exact rational probability."""

    atoms: Dict[Hashable, Fraction]
    decode: Optional[Callable[[Hashable], Hashable]] = field(default=None, repr=False)

    def total(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def validate(self) -> None:
        if any(p <= 0 for p in self.atoms.values()):
            raise ParameterError("all atom probabilities must be positive")
        if self.total() != 1:
            raise ParameterError(f"atom probabilities sum to {self.total()}, expected 1")

    def to_json(self) -> dict:
        return {repr(k): str(v) for k, v in sorted(self.atoms.items(), key=lambda kv: repr(kv[0]))}


def _lattice_parts(law: IncrementLaw):
    if law.kind != "lattice":
        raise ParameterError("exact enumeration requires a finite-support lattice law")
    unit, steps, probs = law.lattice_integer_form()
    live = [(i, s, p) for i, (s, p) in enumerate(zip(steps, probs)) if p > 0]
    return unit, live


def iter_paths(law: IncrementLaw, length: int,
               budget: int = DEFAULT_BUDGET) -> Iterator[Tuple[tuple, tuple, Fraction]]:
    """Yield (increment index key, integer path values, probability).

    Depth-first over increment choices, so functionals can stream without
    all paths being materialized.  Path values are on the integer lattice of
    the law's support; multiply by the unit from ``lattice_integer_form`` to
    recover rational values.
    """
    if length < 0:
        raise ParameterError("length must be >= 0")
    _, live = _lattice_parts(law)
    n_paths = len(live) ** length
    if n_paths > budget:
        raise BudgetError(f"{n_paths} paths exceed the enumeration budget {budget}")
    for choice in product(range(len(live)), repeat=length):
        vals = [0]
        prob = Fraction(1)
        for c in choice:
            idx, step, p = live[c]
            vals.append(vals[-1] + step)
            prob *= p
        yield tuple(live[c][0] for c in choice), tuple(vals), prob


def enumerate_paths(law: IncrementLaw, length: int,
                    budget: int = DEFAULT_BUDGET) -> ExactDistribution:
    """Exact distribution over paths, keyed by increment index sequences."""
    atoms = {}
    values = {}
    for key, vals, prob in iter_paths(law, length, budget):
        atoms[key] = atoms.get(key, Fraction(0)) + prob
        values[key] = vals
    dist = ExactDistribution(atoms=atoms, decode=values.__getitem__)
    dist.validate()
    return dist


def functional_distribution(dist: ExactDistribution, functional) -> ExactDistribution:
    """Exact pushforward of a distribution under a total functional.

    The functional receives decoded outcomes (integer path values when the
    distribution came from :func:`enumerate_paths`) and must return hashable
    results.
    """
    out: Dict[Hashable, Fraction] = {}
    for key, prob in dist.atoms.items():
        x = dist.decode(key) if dist.decode is not None else key
        y = functional(x)
        out[y] = out.get(y, Fraction(0)) + prob
    result = ExactDistribution(atoms=out)
    result.validate()
    return result


def exact_functional_distribution(law: IncrementLaw, length: int, functional,
                                  budget: int = DEFAULT_BUDGET) -> ExactDistribution:
    """Streaming pushforward: enumerate and aggregate without storing paths."""
    out: Dict[Hashable, Fraction] = {}
    for _, vals, prob in iter_paths(law, length, budget):
        y = functional(vals)
        out[y] = out.get(y, Fraction(0)) + prob
    result = ExactDistribution(atoms=out)
    result.validate()
    return result


def distribution_equality(d1: ExactDistribution, d2: ExactDistribution) -> Fraction:
    """Exact total-variation distance (1/2) sum |d1 - d2| over all outcomes."""
    keys = set(d1.atoms) | set(d2.atoms)
    z = Fraction(0)
    diff = sum((abs(d1.atoms.get(k, z) - d2.atoms.get(k, z)) for k in keys), z)
    return diff / 2
