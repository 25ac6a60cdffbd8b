"""Shift-operator checks and the symmetric feasibility condition.

A shift matrix S is *topological* for a graph when every entry outside the
allowed sparsity mask is zero, and a *polynomial shift* for a subspace when
some filter taps c make sum_l c_l S^l equal the orthogonal projector onto
that subspace.  The first property is a direct entrywise check; the second
is decided here by linear least squares over the matrix power basis, which
works for any S.  For symmetric S there is an exact spectral
characterization: eigenvalues attached to eigenvectors inside the subspace
and eigenvalues attached to eigenvectors inside its complement must form
disjoint sets.  Both routes are implemented so they can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SubspaceBasis, _frozen, _require_finite, power_basis, projector, vec

__all__ = [
    "GraphTopology",
    "FilterCoefficients",
    "EigenGrouping",
    "TopologyCheck",
    "PolynomialShiftCheck",
    "InfeasibleGroupingError",
    "PARALLEL",
    "PERP",
    "MIXED",
    "path_topology",
    "ring_topology",
    "complete_topology",
    "empty_topology",
    "random_connected_topology",
    "is_topological",
    "is_polynomial_shift",
    "minimal_filter_order",
    "eigen_grouping",
    "grouping_condition_holds",
    "coefficients_from_grouping",
    "filter_matrix",
    "apply_filter",
]

PARALLEL = "parallel"
PERP = "perp"
MIXED = "mixed"

SYMMETRY_TOL = 1e-10
DEFAULT_ALIGNMENT_TOL = 1e-8
DEFAULT_SEPARATION = 1e-8
DEFAULT_RESIDUAL_TOL = 1e-8


class InfeasibleGroupingError(ValueError):
    """The eigenvalue grouping admits no exact projection filter."""


def _square_matrix(s, name="shift") -> np.ndarray:
    s = _require_finite(s, name)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"{name} must be square, got shape {s.shape}")
    return s


@dataclass(frozen=True)
class GraphTopology:
    """Directed sparsity mask: allowed[i, j] says entry (i, j) may be nonzero.

    The diagonal is always allowed (a node may weight its own value without
    communicating), so it is forced on at construction.
    """

    allowed: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.allowed, dtype=bool)
        if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
            raise ValueError(f"allowed mask must be square, got shape {mask.shape}")
        mask = mask | np.eye(mask.shape[0], dtype=bool)
        mask.flags.writeable = False
        object.__setattr__(self, "allowed", mask)

    @property
    def n(self) -> int:
        return self.allowed.shape[0]

    def edge_count(self) -> int:
        """Number of allowed off-diagonal (directed) entries."""
        return int(self.allowed.sum() - self.n)


def path_topology(n: int) -> GraphTopology:
    """Undirected path 0-1-...-(n-1)."""
    mask = np.eye(n, dtype=bool)
    idx = np.arange(n - 1)
    mask[idx, idx + 1] = True
    mask[idx + 1, idx] = True
    return GraphTopology(mask)


def ring_topology(n: int) -> GraphTopology:
    """Undirected cycle on n nodes."""
    mask = np.eye(n, dtype=bool)
    for i in range(n):
        mask[i, (i + 1) % n] = True
        mask[(i + 1) % n, i] = True
    return GraphTopology(mask)


def complete_topology(n: int) -> GraphTopology:
    return GraphTopology(np.ones((n, n), dtype=bool))


def empty_topology(n: int) -> GraphTopology:
    """Only self-loops: no communication at all."""
    return GraphTopology(np.eye(n, dtype=bool))


def random_connected_topology(n: int, p: float, seed: int) -> GraphTopology:
    """Seeded random connected undirected graph.

    A random spanning tree guarantees connectivity; every other undirected
    pair is added independently with probability ``p``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    mask = np.eye(n, dtype=bool)
    order = rng.permutation(n)
    for k in range(1, n):
        a, b = order[k], order[rng.integers(0, k)]
        mask[a, b] = mask[b, a] = True
    for i in range(n):
        for j in range(i + 1, n):
            if not mask[i, j] and rng.random() < p:
                mask[i, j] = mask[j, i] = True
    return GraphTopology(mask)


@dataclass(frozen=True)
class TopologyCheck:
    ok: bool
    max_violation: float
    worst_entry: tuple[int, int] | None


def is_topological(s, topo: GraphTopology, tol: float = 1e-12) -> TopologyCheck:
    """Check that s vanishes (within tol) on every disallowed entry.

    Reports the largest-magnitude disallowed entry either way.
    """
    s = _square_matrix(s)
    if s.shape[0] != topo.n:
        raise ValueError(f"shift is {s.shape[0]} x {s.shape[0]} but topology has n={topo.n}")
    disallowed = ~topo.allowed
    if not disallowed.any():
        return TopologyCheck(ok=True, max_violation=0.0, worst_entry=None)
    vals = np.where(disallowed, np.abs(s), -1.0)
    flat = int(np.argmax(vals))
    i, j = divmod(flat, topo.n)
    worst = float(vals[i, j])
    return TopologyCheck(ok=bool(worst <= tol), max_violation=worst, worst_entry=(i, j))


@dataclass(frozen=True)
class FilterCoefficients:
    """Taps c_0 .. c_{L-1} of the polynomial filter sum_l c_l S^l."""

    taps: np.ndarray

    def __post_init__(self):
        taps = _require_finite(np.atleast_1d(self.taps), "taps")
        if taps.ndim != 1 or taps.size < 1:
            raise ValueError("taps must be a non-empty 1-d vector")
        object.__setattr__(self, "taps", _frozen(taps))

    @property
    def order(self) -> int:
        return self.taps.size


def filter_matrix(s, coeffs: FilterCoefficients) -> np.ndarray:
    """Dense filter matrix sum_l c_l S^l."""
    s = _square_matrix(s)
    taps = coeffs.taps
    acc = np.eye(s.shape[0])
    out = taps[0] * acc
    for c in taps[1:]:
        acc = acc @ s
        out = out + c * acc
    return out


def apply_filter(s, coeffs: FilterCoefficients, x) -> np.ndarray:
    """Centralized filter output sum_l c_l S^l x."""
    s = _square_matrix(s)
    x = _require_finite(np.asarray(x, dtype=float), "signal")
    z = x
    y = coeffs.taps[0] * x
    for c in coeffs.taps[1:]:
        z = s @ z
        y = y + c * z
    return y


@dataclass(frozen=True)
class PolynomialShiftCheck:
    polynomial: bool
    coeffs: FilterCoefficients
    residual: float


def is_polynomial_shift(
    s,
    basis: SubspaceBasis,
    max_order: int | None = None,
    tol: float = DEFAULT_RESIDUAL_TOL,
) -> PolynomialShiftCheck:
    """Least-squares test of whether some filter on S equals the projector.

    Solves min_c || sum_{l<L} c_l S^l - P ||_F over the power basis
    vec(S^0) .. vec(S^{L-1}) and compares the optimum against
    ``tol * (1 + ||P||_F)``.  L defaults to n, which by Cayley-Hamilton
    loses nothing.  A rank-deficient power basis is fine: the minimum-norm
    minimizer is returned, and the coefficients are returned whether or not
    the verdict is positive.
    """
    s = _square_matrix(s)
    n = s.shape[0]
    if basis.n != n:
        raise ValueError(f"basis lives in dimension {basis.n}, shift in {n}")
    order = n if max_order is None else int(max_order)
    if order < 1:
        raise ValueError(f"filter order must be >= 1, got {order}")
    pb = power_basis(s, order - 1)
    target = vec(projector(basis))
    c, _, _, _ = np.linalg.lstsq(pb.columns, target, rcond=None)
    residual = float(np.linalg.norm(pb.columns @ c - target))
    threshold = tol * (1.0 + np.linalg.norm(target))
    return PolynomialShiftCheck(
        polynomial=bool(residual < threshold),
        coeffs=FilterCoefficients(c),
        residual=residual,
    )


def minimal_filter_order(s, basis: SubspaceBasis, tol: float = DEFAULT_RESIDUAL_TOL) -> int | None:
    """Smallest L <= n whose least-squares residual crosses the threshold.

    Floating-point report only; no exact-arithmetic minimality claim.
    """
    s = _square_matrix(s)
    for order in range(1, s.shape[0] + 1):
        if is_polynomial_shift(s, basis, max_order=order, tol=tol).polynomial:
            return order
    return None


@dataclass(frozen=True)
class EigenGrouping:
    """Spectrum of a symmetric shift labeled against a target subspace.

    ``alignment[i]`` is the squared norm of the projection of eigenvector i
    onto the subspace, in [0, 1]; labels derive from it: parallel above
    1 - tau, perp below tau, mixed otherwise.  Within a repeated eigenvalue
    the eigenvector basis has been rotated so alignments come out 0/1
    whenever the eigenspace splits cleanly.
    """

    eigenvalues: np.ndarray
    alignment: np.ndarray
    labels: tuple[str, ...]
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        object.__setattr__(self, "alignment", _frozen(self.alignment))
        object.__setattr__(self, "vectors", _frozen(self.vectors))
        object.__setattr__(self, "labels", tuple(self.labels))

    def values_labeled(self, label: str) -> np.ndarray:
        return self.eigenvalues[np.array([l == label for l in self.labels], dtype=bool)]


def _cluster_slices(eigenvalues: np.ndarray, tol: float) -> list[slice]:
    """Split a sorted spectrum into clusters, gap threshold ``tol`` on the
    spectrum rescaled to unit spectral radius."""
    lam = np.asarray(eigenvalues, dtype=float)
    rho = float(np.max(np.abs(lam))) if lam.size else 0.0
    scaled = lam / rho if rho > 0 else lam
    breaks = np.nonzero(np.diff(scaled) > tol)[0]
    starts = [0] + [int(b) + 1 for b in breaks]
    stops = [int(b) + 1 for b in breaks] + [lam.size]
    return [slice(a, b) for a, b in zip(starts, stops)]


def eigen_grouping(
    s,
    basis: SubspaceBasis,
    tau: float = DEFAULT_ALIGNMENT_TOL,
    cluster_tol: float = DEFAULT_SEPARATION,
) -> EigenGrouping:
    """Label each eigenvalue of a symmetric shift by its eigenvector's side.

    Asymmetric input is rejected: the grouping argument relies on the
    orthogonal eigendecomposition, which only symmetric matrices have.
    Repeated eigenvalues get their eigenvector block re-diagonalized against
    the projector so degenerate eigenspaces do not spuriously read as mixed.
    """
    s = _square_matrix(s)
    asym = np.linalg.norm(s - s.T)
    if asym >= SYMMETRY_TOL * (1.0 + np.linalg.norm(s)):
        raise ValueError(
            f"eigen_grouping needs a symmetric matrix; ||S - S^T||_F = {asym:.3e}"
        )
    if basis.n != s.shape[0]:
        raise ValueError(f"basis lives in dimension {basis.n}, shift in {s.shape[0]}")
    lam, vecs = np.linalg.eigh(0.5 * (s + s.T))
    p = projector(basis)
    vecs = vecs.copy()
    alignment = np.empty_like(lam)
    for sl in _cluster_slices(lam, cluster_tol):
        block = vecs[:, sl]
        gram = block.T @ p @ block
        avals, rot = np.linalg.eigh(0.5 * (gram + gram.T))
        vecs[:, sl] = block @ rot
        alignment[sl] = np.clip(avals, 0.0, 1.0)
    labels = tuple(
        PARALLEL if a > 1.0 - tau else PERP if a < tau else MIXED for a in alignment
    )
    return EigenGrouping(eigenvalues=lam, alignment=alignment, labels=labels, vectors=vecs)


def grouping_condition_holds(g: EigenGrouping, sep: float = DEFAULT_SEPARATION) -> bool:
    """True iff no eigenvector is mixed and the two eigenvalue groups are
    separated by more than ``sep``."""
    if MIXED in g.labels:
        return False
    par = g.values_labeled(PARALLEL)
    perp = g.values_labeled(PERP)
    if par.size == 0 or perp.size == 0:
        return True
    gap = np.min(np.abs(par[:, None] - perp[None, :]))
    return bool(gap > sep)


def coefficients_from_grouping(
    g: EigenGrouping, sep: float = DEFAULT_SEPARATION
) -> FilterCoefficients:
    """Filter taps sending subspace eigenvalues to 1 and the rest to 0.

    Clusters the spectrum, then solves the Vandermonde system for the unique
    degree-(k-1) polynomial through (cluster mean, 1 or 0).  Raises
    :class:`InfeasibleGroupingError` when the grouping condition fails.
    """
    if not grouping_condition_holds(g, sep=sep):
        raise InfeasibleGroupingError(
            "grouping condition fails: mixed eigenvector or shared eigenvalue "
            "across the two groups"
        )
    nodes = []
    targets = []
    for sl in _cluster_slices(g.eigenvalues, sep):
        cluster_labels = set(g.labels[sl])
        if len(cluster_labels) != 1:
            raise InfeasibleGroupingError(
                "an eigenvalue cluster contains both subspace-aligned and "
                "complement-aligned eigenvectors"
            )
        nodes.append(float(np.mean(g.eigenvalues[sl])))
        targets.append(1.0 if cluster_labels.pop() == PARALLEL else 0.0)
    vander = np.vander(np.array(nodes), increasing=True)
    taps = np.linalg.solve(vander, np.array(targets))
    return FilterCoefficients(taps)
