"""Graph-structured Dirichlet process priors.

A prior here is a plain Dirichlet process whose base measure is the
combination of per-clique bases along a perfect ordering.  Construction
verifies everything that makes the clique marginals of a draw behave
like coupled Dirichlet processes: pairwise consistency, factorization
of the combined base, and degeneracy of every clique-given-separator
conditional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .dp import ContinuousBase, DPParams, atoms_to_measure, sample_dp
from .errors import (
    DomainMismatch,
    NotMarkov,
    ObservationViolatesSupport,
    RefinementViolated,
)
from .graphs import perfect_ordering
from .measures import (
    CONSISTENCY_TOL,
    DiscreteMeasure,
    is_markov,
    marginalize,
    markov_combination_seq,
)

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class SeparatorCheck:
    """Degeneracy verdict for one (separator, clique) pair."""

    separator: tuple
    clique: tuple
    passed: bool
    witness: Optional[dict] = None
    conditional: Optional[dict] = None


@dataclass(frozen=True)
class RefinementReport:
    """Per-separator verdicts; failing entries carry a witness value."""

    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def first_witness(self):
        for c in self.checks:
            if not c.passed:
                return c.witness
        return None

    def merged(self, other):
        return RefinementReport(self.checks + other.checks)

    def as_dict(self):
        return {
            "passed": self.passed,
            "checks": [
                {
                    "separator": list(c.separator),
                    "clique": list(c.clique),
                    "passed": c.passed,
                    "witness": c.witness,
                    "conditional": c.conditional,
                }
                for c in self.checks
            ],
        }


@dataclass(frozen=True)
class HDPSpec:
    """A validated prior: graph, ordering, clique bases, precision.

    ``combined`` holds the equivalent single-process parameters; it is
    derived, never supplied.
    """

    graph: object
    decomposition: object
    clique_bases: tuple
    nu: float
    combined: DPParams


def check_refinement(base, separator, clique, tol=DEGENERACY_TOL):
    """Is each clique value pinned down by its separator value?

    For every separator assignment with positive mass, the conditional
    law of the clique must put all its mass (within ``tol``) on a single
    point.  A declared continuous base with almost-surely distinct atoms
    passes outright, since equal separator draws then never happen.
    """
    separator = tuple(separator)
    clique = tuple(clique)
    if isinstance(base, ContinuousBase):
        if not base.atoms_distinct:
            raise ValueError(
                "cannot audit a continuous base that does not declare distinct atoms"
            )
        return RefinementReport(
            (SeparatorCheck(separator, clique, True, None, None),)
        )
    if not set(separator) <= set(clique):
        raise ValueError("the separator must be a subset of the clique")
    for v in clique:
        base.space.index(v)
    clique_m = marginalize(base, clique)
    sep_in_clique = tuple(clique_m.space.index(v) for v in clique_m.space.variables if v in set(separator))
    sep_vars = tuple(clique_m.space.variables[i] for i in sep_in_clique)
    sep_doms = tuple(clique_m.space.domains[i] for i in sep_in_clique)
    groups = {}
    for x, w in clique_m.mass.items():
        groups.setdefault(tuple(x[i] for i in sep_in_clique), []).append((x, w))

    def sep_key(key):
        return tuple(dom.index(v) for dom, v in zip(sep_doms, key))

    witness = None
    conditional = None
    passed = True
    for key in sorted(groups, key=sep_key):
        entries = groups[key]
        total = math.fsum(w for _, w in entries)
        top = max(w for _, w in entries)
        if top < (1.0 - tol) * total:
            passed = False
            witness = dict(zip(sep_vars, key))
            conditional = {
                repr(x): w / total for x, w in entries
            }
            break
    return RefinementReport(
        (SeparatorCheck(separator, clique, passed, witness, conditional),)
    )


def build_hdp(graph, clique_bases, nu, tol=CONSISTENCY_TOL, strict=False):
    """Validate clique bases against a graph and fuse them into one prior.

    Raises NotDecomposable / NotConnected for an unusable graph,
    Inconsistent when clique bases disagree, and RefinementViolated when
    some separator value admits two clique completions.  ``strict`` also
    audits each running-history block against its separator.
    """
    decomp = perfect_ordering(graph)
    bases = tuple(clique_bases)
    if len(bases) != len(decomp.cliques):
        raise ValueError(
            f"{len(decomp.cliques)} cliques but {len(bases)} base measures"
        )
    for k, (clique, base) in enumerate(zip(decomp.cliques, bases), start=1):
        if not isinstance(base, DiscreteMeasure):
            raise TypeError("clique bases must be discrete measures")
        if set(base.space.variables) != set(clique):
            raise DomainMismatch(
                f"base {k} is not defined on exactly the clique {clique!r}"
            )
        if not base.is_probability():
            raise ValueError(f"clique base {k} is not a probability measure")
    combined = markov_combination_seq(decomp, bases, tol)
    report = RefinementReport(())
    for k, clique in enumerate(decomp.cliques[1:], start=1):
        sep = decomp.separators[k - 1]
        report = report.merged(check_refinement(combined, sep, clique))
        if strict:
            report = report.merged(
                check_refinement(combined, sep, decomp.histories[k - 1])
            )
    if not report.passed:
        w = report.first_witness()
        raise RefinementViolated(
            f"a separator value admits multiple completions (witness {w!r})",
            report,
        )
    if not is_markov(combined, decomp, tol):
        raise NotMarkov("internal error: the combined base does not factorize")
    return HDPSpec(
        graph=graph,
        decomposition=decomp,
        clique_bases=bases,
        nu=float(nu),
        combined=DPParams(nu, combined),
    )


def sample_hdp(spec, cfg, replicate=0):
    """One draw from the prior; same truncation contract as ``sample_dp``."""
    return sample_dp(spec.combined, cfg, replicate)


def verify_sample_markov(theta, decomp, tol=CONSISTENCY_TOL):
    """Aggregate a draw's atoms and test the clique factorization."""
    return is_markov(atoms_to_measure(theta), decomp, tol)


def verify_sample_refinement(theta, separator, clique):
    """Do atoms that share a separator value share the whole clique value?

    Also confirms that grouping the weights by separator value and by
    clique value yields identical mass vectors, which is the measure
    identity behind the degeneracy condition.
    """
    if theta.space is None:
        raise TypeError("only draws from a discrete base can be audited")
    separator = tuple(separator)
    clique = tuple(clique)
    if not set(separator) <= set(clique):
        raise ValueError("the separator must be a subset of the clique")
    s_idx = tuple(theta.space.index(v) for v in theta.space.variables if v in set(separator))
    c_idx = tuple(theta.space.index(v) for v in theta.space.variables if v in set(clique))
    completion = {}
    mass_by_sep = {}
    mass_by_clique = {}
    for atom, w in zip(theta.atoms, theta.weights):
        s = tuple(atom[i] for i in s_idx)
        c = tuple(atom[i] for i in c_idx)
        if s in completion and completion[s] != c:
            return False
        completion[s] = c
        mass_by_sep[s] = mass_by_sep.get(s, 0.0) + w
        mass_by_clique[c] = mass_by_clique.get(c, 0.0) + w
    return all(mass_by_sep[s] == mass_by_clique[c] for s, c in completion.items())


def hdp_posterior(spec, data, tol=CONSISTENCY_TOL):
    """Conjugate update applied clique by clique.

    Each clique base absorbs the observations' projections; the ensemble
    is then revalidated and cross-checked against the plain posterior of
    the combined base, which it must reproduce within 1e-12.
    """
    space = spec.combined.base.space
    from .dp import _coerce_data, dp_posterior  # shared validation

    obs = _coerce_data(space, data)
    if not obs:
        return spec
    new_bases = []
    for clique, base in zip(spec.decomposition.cliques, spec.clique_bases):
        idx = tuple(space.index(v) for v in base.space.variables)
        projected = [tuple(x[i] for i in idx) for x in obs]
        new_bases.append(dp_posterior(DPParams(spec.nu, base), projected).base)
    try:
        posterior = build_hdp(spec.graph, new_bases, spec.nu + len(obs), tol)
    except RefinementViolated as exc:
        raise ObservationViolatesSupport(
            "observations contradict the degeneracy structure of the base "
            f"({exc})",
            exc.report,
        ) from exc
    direct = dp_posterior(spec.combined, obs).base
    fused = posterior.combined.base
    keys = set(direct.mass) | set(fused.mass)
    gap = max(
        (abs(direct.mass.get(k, 0.0) - fused.mass.get(k, 0.0)) for k in keys),
        default=0.0,
    )
    if gap > 1e-12:
        raise NotMarkov(
            f"internal error: clique-wise posterior deviates from the direct one by {gap:.3e}"
        )
    return posterior
