"""Symmetric shift design: topology-respecting shifts that project exactly.

The feasible set is parameterized as S = U A U^T + V B V^T with U an
orthonormal basis of the target subspace, V of its complement, and A, B
symmetric.  These are exactly the symmetric matrices leaving both subspaces
invariant, so the only work left is (1) the topology zeros, which are
*linear* in (A, B) and solved by a null-space computation rather than any
iterative optimization, and (2) the spectral condition that A and B share no
eigenvalue, which holds for generic draws and is handled by seeded retries.
Filter taps then come from polynomial interpolation on the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .linalg import SubspaceBasis, _frozen, numerical_rank, orthonormal_complement, projector
from .reporting import ClaimCheck, CounterexampleReport
from .shifts import (
    MIXED,
    PARALLEL,
    PERP,
    EigenGrouping,
    FilterCoefficients,
    GraphTopology,
    coefficients_from_grouping,
    eigen_grouping,
    filter_matrix,
    grouping_condition_holds,
    is_topological,
)

__all__ = [
    "DesignOptions",
    "DesignProblem",
    "DesignResult",
    "Infeasible",
    "feasible_shift",
    "verify_design",
    "invariant_pair_basis",
    "topology_constraint_matrix",
]


@dataclass(frozen=True)
class DesignOptions:
    seed: int = 0
    max_retries: int = 20
    sep: float = 1e-8
    residual_tol: float = 1e-8


@dataclass(frozen=True)
class DesignProblem:
    topology: GraphTopology
    basis: SubspaceBasis
    options: DesignOptions = field(default_factory=DesignOptions)

    def __post_init__(self):
        if self.topology.n != self.basis.n:
            raise ValueError(
                f"topology has n={self.topology.n} but basis has n={self.basis.n}"
            )


@dataclass(frozen=True)
class DesignResult:
    shift: np.ndarray
    coeffs: FilterCoefficients
    grouping: EigenGrouping
    residual: float
    retries_used: int

    def __post_init__(self):
        object.__setattr__(self, "shift", _frozen(self.shift))


@dataclass(frozen=True)
class Infeasible:
    """No design found: either only S = 0 fits the topology, or every retry
    produced overlapping spectra."""

    reason: str  # "only-zero" | "grouping-failed"
    detail: str
    best_separation: float = 0.0


def invariant_pair_basis(basis: SubspaceBasis) -> np.ndarray:
    """Stack of symmetric generators of {S : both subspaces invariant}.

    Returns shape (p, n, n) with p = r(r+1)/2 + (n-r)(n-r+1)/2: one
    generator per free entry of the symmetric blocks A and B.
    """
    blocks = [basis.columns]
    if basis.r < basis.n:
        blocks.append(orthonormal_complement(basis).columns)
    mats = []
    for u in blocks:
        k = u.shape[1]
        for a in range(k):
            for b in range(a, k):
                m = np.outer(u[:, a], u[:, b])
                mats.append(m if a == b else m + m.T)
    return np.stack(mats)


def topology_constraint_matrix(topology: GraphTopology, generators: np.ndarray) -> np.ndarray:
    """Linear map from generator coefficients to the disallowed entries.

    Row per disallowed (i, j), column per generator; a design is topological
    exactly when its coefficient vector lies in the null space.
    """
    disallowed = ~topology.allowed
    return generators[:, disallowed].T.copy()


def _structure_space(topology: GraphTopology, generators: np.ndarray) -> np.ndarray:
    """Orthonormal basis (p x q) of topology-compatible coefficient vectors."""
    constraints = topology_constraint_matrix(topology, generators)
    if constraints.shape[0] == 0:
        return np.eye(generators.shape[0])
    return scipy.linalg.null_space(constraints)


def _grouping_separation(g: EigenGrouping) -> float:
    if MIXED in g.labels:
        return 0.0
    par = g.values_labeled(PARALLEL)
    perp = g.values_labeled(PERP)
    if par.size == 0 or perp.size == 0:
        return np.inf
    return float(np.min(np.abs(par[:, None] - perp[None, :])))


def feasible_shift(problem: DesignProblem) -> DesignResult | Infeasible:
    """Search the topology-compatible structure space for a valid design.

    Draws seeded random elements of the null space of the topology
    constraints (each normalized to unit spectral radius), keeps the first
    whose spectrum splits cleanly between the two subspaces, and synthesizes
    the interpolation filter for it.  Returns :class:`Infeasible` when the
    structure space is trivial or every retry fails the spectral condition.
    """
    topo, basis, opts = problem.topology, problem.basis, problem.options
    p_mat = projector(basis)
    generators = invariant_pair_basis(basis)
    space = _structure_space(topo, generators)
    if space.shape[1] == 0:
        # Soundness: a trivial null space must mean full-rank constraints.
        rank = numerical_rank(topology_constraint_matrix(topo, generators))
        if rank != generators.shape[0]:
            raise RuntimeError(
                f"null space empty but constraint rank {rank} < {generators.shape[0]}"
            )
        return Infeasible(
            reason="only-zero",
            detail="only S = 0 satisfies the topology within the invariant-subspace "
            "parameterization, and the zero shift never realizes a projection",
        )

    best_sep = 0.0
    for attempt in range(opts.max_retries + 1):
        rng = np.random.default_rng((opts.seed, attempt))
        theta = space @ rng.standard_normal(space.shape[1])
        s = np.tensordot(theta, generators, axes=1)
        s = 0.5 * (s + s.T)
        rho = float(np.max(np.abs(np.linalg.eigvalsh(s))))
        if rho < 1e-12:
            continue
        s = s / rho
        if not is_topological(s, topo).ok:
            continue
        # The disallowed entries are sub-tolerance roundoff; make them exact
        # zeros so message counts and the topology check are sharp.
        s = np.where(topo.allowed, s, 0.0)
        s = 0.5 * (s + s.T)
        grouping = eigen_grouping(s, basis, cluster_tol=opts.sep)
        sep = _grouping_separation(grouping)
        best_sep = max(best_sep, 0.0 if not np.isfinite(sep) else sep)
        if not grouping_condition_holds(grouping, sep=opts.sep):
            continue
        coeffs = coefficients_from_grouping(grouping, sep=opts.sep)
        residual = float(np.linalg.norm(filter_matrix(s, coeffs) - p_mat))
        if residual < opts.residual_tol * (1.0 + np.linalg.norm(p_mat)):
            return DesignResult(
                shift=s,
                coeffs=coeffs,
                grouping=grouping,
                residual=residual,
                retries_used=attempt,
            )
    return Infeasible(
        reason="grouping-failed",
        detail=f"no draw within {opts.max_retries} retries gave disjoint "
        "subspace/complement spectra",
        best_separation=best_sep,
    )


def verify_design(result: DesignResult, problem: DesignProblem) -> CounterexampleReport:
    """Re-check a design from scratch: symmetry, topology, filter residual."""
    s = result.shift
    opts = problem.options
    asym = float(np.linalg.norm(s - s.T))
    sym_thr = 1e-10 * (1.0 + np.linalg.norm(s))
    topo_check = is_topological(s, problem.topology)
    p_mat = projector(problem.basis)
    residual = float(np.linalg.norm(filter_matrix(s, result.coeffs) - p_mat))
    res_thr = opts.residual_tol * (1.0 + np.linalg.norm(p_mat))
    order = result.coeffs.order
    claims = (
        ClaimCheck("shift symmetry ||S - S^T||_F", asym, sym_thr, asym < sym_thr),
        ClaimCheck(
            "largest disallowed entry",
            topo_check.max_violation,
            1e-12,
            topo_check.ok,
        ),
        ClaimCheck("filter residual || sum c_l S^l - P ||_F", residual, res_thr, residual < res_thr),
        ClaimCheck("filter order L <= n", float(order), float(problem.basis.n), order <= problem.basis.n),
    )
    return CounterexampleReport(name="design-verification", claims=claims)
