"""Exact algebra of finite nonnegative measures on finite product spaces.

Measures are sparse: an assignment with zero mass is never stored.
Assignments are tuples aligned with the space's variable order, support
iteration is sorted by per-variable category index, and summation uses
``math.fsum``, so identical inputs give bit-identical outputs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import (
    DomainMismatch,
    Inconsistent,
    UnknownVariable,
    ZeroConditional,
    ZeroMass,
)

CONSISTENCY_TOL = 1e-9     # default overlap-marginal / total-mass agreement
PROBABILITY_TOL = 1e-12    # |total - 1| threshold for probability measures


@dataclass(frozen=True)
class ProductSpace:
    """Finite product of per-variable category tuples."""

    variables: tuple
    domains: tuple

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable labels must be distinct")
        if len(self.domains) != len(self.variables):
            raise ValueError("exactly one domain per variable is required")
        for var, dom in zip(self.variables, self.domains):
            if not dom:
                raise ValueError(f"variable {var!r} has an empty domain")
            if len(set(dom)) != len(dom):
                raise ValueError(f"variable {var!r} has duplicate categories")

    @classmethod
    def from_domains(cls, variables, domains):
        """Build from an ordered variable list and a mapping to categories."""
        vs = tuple(variables)
        return cls(vs, tuple(tuple(domains[v]) for v in vs))

    def index(self, var):
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariable(f"unknown variable {var!r}") from None

    def domain(self, var):
        return self.domains[self.index(var)]

    def size(self):
        n = 1
        for dom in self.domains:
            n *= len(dom)
        return n

    def assignments(self):
        """Every full assignment, in category-index order."""
        return itertools.product(*self.domains)

    def subspace(self, keep):
        keepset = set(keep)
        for v in keepset:
            self.index(v)
        vs = tuple(v for v in self.variables if v in keepset)
        return ProductSpace(vs, tuple(self.domains[self.index(v)] for v in vs))

    def sort_key(self, assignment):
        return tuple(self.domains[i].index(x) for i, x in enumerate(assignment))

    def as_tuple(self, assignment):
        """Coerce a mapping or aligned sequence to a validated tuple."""
        if isinstance(assignment, dict):
            missing = [v for v in self.variables if v not in assignment]
            if missing:
                raise ValueError(f"assignment missing variables {missing!r}")
            extra = [v for v in assignment if v not in self.variables]
            if extra:
                raise UnknownVariable(f"assignment names unknown variables {extra!r}")
            assignment = tuple(assignment[v] for v in self.variables)
        else:
            assignment = tuple(assignment)
        if len(assignment) != len(self.variables):
            raise ValueError("assignment length does not match the variable count")
        for var, dom, val in zip(self.variables, self.domains, assignment):
            if val not in dom:
                raise ValueError(f"value {val!r} is not in the domain of {var!r}")
        return assignment


@dataclass(frozen=True, eq=True)
class DiscreteMeasure:
    """Sparse finite measure; construction validates and drops zeros."""

    space: ProductSpace
    mass: dict

    def __post_init__(self):
        cleaned = {}
        for assignment, value in self.mass.items():
            x = self.space.as_tuple(assignment)
            v = float(value)
            if v < 0.0 or not math.isfinite(v):
                raise ValueError(f"mass at {x!r} must be finite and nonnegative")
            if v > 0.0:
                cleaned[x] = cleaned.get(x, 0.0) + v
        ordered = dict(sorted(cleaned.items(), key=lambda kv: self.space.sort_key(kv[0])))
        object.__setattr__(self, "mass", ordered)

    @property
    def total(self):
        return math.fsum(self.mass.values())

    def is_probability(self, tol=PROBABILITY_TOL):
        return abs(self.total - 1.0) <= tol

    def mass_at(self, assignment):
        return self.mass.get(self.space.as_tuple(assignment), 0.0)


def uniform_measure(space):
    """The probability measure giving every full assignment equal mass."""
    w = 1.0 / space.size()
    return DiscreteMeasure(space, {x: w for x in space.assignments()})


def point_mass(space, assignment):
    return DiscreteMeasure(space, {space.as_tuple(assignment): 1.0})


def scale_measure(m, factor):
    factor = float(factor)
    if factor < 0.0 or not math.isfinite(factor):
        raise ValueError("scale factor must be finite and nonnegative")
    return DiscreteMeasure(m.space, {x: v * factor for x, v in m.mass.items()})


def marginalize(m, keep):
    """Sum out every variable not in ``keep``; total mass is preserved."""
    sub = m.space.subspace(keep)
    idx = tuple(m.space.index(v) for v in sub.variables)
    cells = {}
    for x, v in m.mass.items():
        cells.setdefault(tuple(x[i] for i in idx), []).append(v)
    return DiscreteMeasure(sub, {k: math.fsum(vs) for k, vs in cells.items()})


def normalize(m):
    total = m.total
    if total <= 0.0:
        raise ZeroMass("cannot normalize a measure with zero total mass")
    return DiscreteMeasure(m.space, {x: v / total for x, v in m.mass.items()})


def condition(m, given):
    """Probability measure on the remaining variables given a partial assignment."""
    given = dict(given)
    checks = []
    for var, val in given.items():
        i = m.space.index(var)
        if val not in m.space.domains[i]:
            raise ValueError(f"value {val!r} is not in the domain of {var!r}")
        checks.append((i, val))
    sub = m.space.subspace(v for v in m.space.variables if v not in given)
    kidx = tuple(m.space.index(v) for v in sub.variables)
    cells = {}
    for x, v in m.mass.items():
        if all(x[i] == val for i, val in checks):
            cells.setdefault(tuple(x[i] for i in kidx), []).append(v)
    if not cells:
        raise ZeroConditional(f"conditioning event {given!r} has zero mass")
    return normalize(DiscreteMeasure(sub, {k: math.fsum(vs) for k, vs in cells.items()}))


@dataclass(frozen=True)
class ConsistencyReport:
    """Outcome of the two agreement conditions between two measures."""

    overlap: tuple
    proportional_marginals: bool
    equal_total_mass: bool
    marginal_gap: float
    mass_gap: float

    @property
    def consistent(self):
        return self.proportional_marginals and self.equal_total_mass

    def as_dict(self):
        return {
            "overlap": list(self.overlap),
            "proportional_marginals": self.proportional_marginals,
            "equal_total_mass": self.equal_total_mass,
            "consistent": self.consistent,
            "marginal_gap": self.marginal_gap,
            "mass_gap": self.mass_gap,
        }


def _sup_gap(a, b):
    keys = set(a.mass) | set(b.mass)
    return max((abs(a.mass.get(k, 0.0) - b.mass.get(k, 0.0)) for k in keys), default=0.0)


def is_consistent(mu, lam, tol=CONSISTENCY_TOL):
    """Check proportional overlap marginals and equal total masses.

    The first condition compares the normalized overlap marginals in sup
    norm; the second compares total masses relative to the larger one.
    """
    lam_vars = set(lam.space.variables)
    overlap = tuple(v for v in mu.space.variables if v in lam_vars)
    for v in overlap:
        if mu.space.domain(v) != lam.space.domain(v):
            raise DomainMismatch(f"overlap variable {v!r} has mismatched domains")
    tm, tl = mu.total, lam.total
    mass_gap = abs(tm - tl)
    equal_mass = mass_gap <= tol * max(tm, tl)
    if tm > 0.0 and tl > 0.0:
        marginal_gap = _sup_gap(
            marginalize(normalize(mu), overlap),
            marginalize(normalize(lam), overlap),
        )
        proportional = marginal_gap <= tol
    else:
        # a zero measure is proportional only to another zero measure
        proportional = tm == 0.0 and tl == 0.0
        marginal_gap = 0.0 if proportional else math.inf
    return ConsistencyReport(overlap, proportional, equal_mass, marginal_gap, mass_gap)


def _union_space(mu, lam):
    mu_vars = mu.space.variables
    extra = tuple(v for v in lam.space.variables if v not in set(mu_vars))
    domains = tuple(mu.space.domains) + tuple(lam.space.domain(v) for v in extra)
    return ProductSpace(mu_vars + extra, domains), extra


def markov_combination(mu, lam, tol=CONSISTENCY_TOL):
    """The unique measure on the union space gluing two consistent measures.

    The result marginalizes back to each input and makes the two
    non-shared blocks independent given the overlap.  Overlap values the
    second measure never touches contribute nothing (the usual null-set
    convention for conditionals).
    """
    report = is_consistent(mu, lam, tol)
    if not report.consistent:
        failing = (
            "overlap marginals are not proportional (condition 1)"
            if not report.proportional_marginals
            else "total masses differ (condition 2)"
        )
        raise Inconsistent(f"measures cannot be combined: {failing}", report)
    union, extra = _union_space(mu, lam)
    o_lam = tuple(lam.space.index(v) for v in report.overlap)
    b_lam = tuple(lam.space.index(v) for v in extra)
    groups = {}
    for y, w in lam.mass.items():
        c = tuple(y[i] for i in o_lam)
        groups.setdefault(c, []).append((tuple(y[i] for i in b_lam), w))
    denom = {c: math.fsum(w for _, w in g) for c, g in groups.items()}
    o_mu = tuple(mu.space.index(v) for v in report.overlap)
    out = {}
    for x, v in mu.mass.items():
        c = tuple(x[i] for i in o_mu)
        d = denom.get(c, 0.0)
        if d <= 0.0:
            continue
        for b, w in groups[c]:
            out[x + b] = v * (w / d)
    return DiscreteMeasure(union, out)


def markov_combination_seq(decomp, bases, tol=CONSISTENCY_TOL):
    """Fold clique bases along a perfect ordering into one joint measure."""
    if len(bases) != len(decomp.cliques):
        raise ValueError(
            f"{len(decomp.cliques)} cliques but {len(bases)} base measures"
        )
    for k, (clique, base) in enumerate(zip(decomp.cliques, bases), start=1):
        if set(base.space.variables) != set(clique):
            raise DomainMismatch(
                f"base {k} is not defined on exactly the clique {clique!r}"
            )
    for i, j in itertools.combinations(range(len(bases)), 2):
        report = is_consistent(bases[i], bases[j], tol)
        if not report.consistent:
            raise Inconsistent(
                f"clique bases {i + 1} and {j + 1} are not consistent", report
            )
    combined = bases[0]
    for base in bases[1:]:
        combined = markov_combination(combined, base, tol)
    return combined


def is_markov(theta, decomp, tol=CONSISTENCY_TOL):
    """Does the measure factorize over the decomposition's cliques?

    Checks, for every full assignment, that the product of clique
    marginals equals the measure times the product of separator
    marginals, up to ``tol`` in absolute terms.
    """
    if set(theta.space.variables) != set(decomp.vertices):
        raise DomainMismatch(
            "measure variables do not match the decomposition's vertex set"
        )
    if not theta.is_probability():
        raise ValueError("a probability measure is required")

    def projector(vars_):
        sub = [theta.space.index(v) for v in theta.space.variables if v in set(vars_)]
        return tuple(sub)

    clique_idx = [projector(c) for c in decomp.cliques]
    sep_idx = [projector(s) for s in decomp.separators]
    clique_mass = [marginalize(theta, c).mass for c in decomp.cliques]
    sep_mass = [marginalize(theta, s).mass for s in decomp.separators]
    for x in theta.space.assignments():
        lhs = theta.mass.get(x, 0.0)
        for idx, mass in zip(sep_idx, sep_mass):
            lhs *= mass.get(tuple(x[i] for i in idx), 0.0)
        rhs = 1.0
        for idx, mass in zip(clique_idx, clique_mass):
            rhs *= mass.get(tuple(x[i] for i in idx), 0.0)
        if abs(lhs - rhs) > tol:
            return False
    return True
