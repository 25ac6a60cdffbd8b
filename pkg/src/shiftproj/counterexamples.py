"""Executable counterexamples for tempting-but-wrong shift-design conditions.

Three conditions show up naturally when one parameterizes a shift matrix by
its real Schur form S = W (D + Q) W^T and asks it to realize a projector:

* "the two halves of the diagonal of D must not share a value" -- not
  necessary: :func:`shared_diagonal_projector` builds a valid symmetric
  polynomial shift (S itself *is* the projector) whose diagonal halves are
  identical, and :func:`shared_diagonal_asymmetric` does the same with a
  genuinely asymmetric S satisfying S^2 = P.

* "being a fixed point of the filter family makes S a polynomial shift" --
  false: :func:`zero_shift_check` shows the zero matrix can never reproduce
  a rank-deficient projector, with a closed-form best residual.

* "the power-basis matrix can be required to have rank (n^2+n)/2 - k" --
  vacuous: by Cayley-Hamilton the matrix [vec(Z^0) .. vec(Z^m)] never has
  rank above n (:func:`power_basis_rank_demo` measures this), so the
  requirement is unsatisfiable once (n^2+n)/2 - k > n
  (:func:`rank_requirement_vacuity` does the arithmetic).

Each check returns a :class:`~shiftproj.reporting.CounterexampleReport`
with measured values, so a failing environment is visible rather than
silently assumed away.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import (
    SubspaceBasis,
    _frozen,
    numerical_rank,
    power_basis,
    projector,
    random_orthonormal,
)
from .reporting import ClaimCheck, CounterexampleReport
from .shifts import (
    DEFAULT_RESIDUAL_TOL,
    FilterCoefficients,
    filter_matrix,
    is_polynomial_shift,
)

__all__ = [
    "ProjectorShiftCase",
    "RankRequirement",
    "shared_diagonal_projector",
    "shared_diagonal_asymmetric",
    "zero_shift_check",
    "power_basis_rank_demo",
    "rank_requirement_vacuity",
]

_VALUE_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class ProjectorShiftCase:
    """A constructed shift with its Schur pieces, target basis, and verdicts."""

    w: np.ndarray
    d: np.ndarray
    q: np.ndarray
    shift: np.ndarray
    basis: SubspaceBasis
    report: CounterexampleReport

    def __post_init__(self):
        for name in ("w", "d", "q", "shift"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))


def _case_frame(seed: int, frame: np.ndarray | None) -> np.ndarray:
    if frame is None:
        return random_orthonormal(4, seed)
    frame = np.asarray(frame, dtype=float)
    if frame.shape != (4, 4):
        raise ValueError("explicit frame must be 4 x 4 orthonormal")
    return frame


def _shared_diagonal_claim(d: np.ndarray) -> ClaimCheck:
    """Count values the two halves of diag(d) have in common."""
    diag = np.diag(d)
    half = diag.size // 2
    head, tail = diag[:half], diag[half:]
    shared = sum(1 for v in head if np.min(np.abs(tail - v)) < _VALUE_MATCH_TOL)
    return ClaimCheck(
        description="diagonal halves share at least one value",
        measured=float(shared),
        threshold=1.0,
        passed=shared >= 1,
    )


def shared_diagonal_projector(
    seed: int, frame: np.ndarray | None = None, tol: float = 1e-10
) -> ProjectorShiftCase:
    """Valid symmetric polynomial shift whose Schur-diagonal halves coincide.

    Draws four orthonormal vectors u1..u4 (or takes them from ``frame``),
    targets the span of u1, u2, and assembles S = W (D + Q) W^T with
    W = [u1, u3, u2, u4], D = diag(1, 0, 1, 0), Q = 0.  Then S equals the
    projector onto the target, so the identity filter c = (0, 1) realizes
    the projection -- while both halves of the diagonal carry {1, 0}.  Any
    rule demanding the halves be disjoint would wrongly exclude this S.
    """
    u = _case_frame(seed, frame)
    basis = SubspaceBasis(u[:, :2])
    w = u[:, [0, 2, 1, 3]]
    d = np.diag([1.0, 0.0, 1.0, 0.0])
    q = np.zeros((4, 4))
    s = w @ (d + q) @ w.T
    p = projector(basis)

    dist = float(np.linalg.norm(s - p))
    oracle = is_polynomial_shift(s, basis, max_order=2)
    claims = (
        ClaimCheck("||S - P||_F", dist, tol, dist < tol),
        _shared_diagonal_claim(d),
        ClaimCheck(
            "least-squares filter residual at L=2",
            oracle.residual,
            1e-8 * (1.0 + np.linalg.norm(p)),
            oracle.polynomial,
        ),
    )
    report = CounterexampleReport(name="shared-diagonal-projector", claims=claims)
    return ProjectorShiftCase(w=w, d=d, q=q, shift=s, basis=basis, report=report)


def shared_diagonal_asymmetric(
    seed: int, frame: np.ndarray | None = None, tol: float = 1e-10
) -> ProjectorShiftCase:
    """Asymmetric shift with S^2 = P, again with coinciding diagonal halves.

    Same frame and diagonal as :func:`shared_diagonal_projector`, but with a
    single off-diagonal coupling Q[1, 3] = 1 in Schur coordinates.  In the
    canonical frame this is S = diag(1, 1, 0, 0) + e3 e4^T: squaring kills
    the nilpotent part, so the two-tap filter c = (0, 0, 1) projects exactly
    while S is far from symmetric.
    """
    u = _case_frame(seed, frame)
    basis = SubspaceBasis(u[:, :2])
    w = u[:, [0, 2, 1, 3]]
    d = np.diag([1.0, 0.0, 1.0, 0.0])
    q = np.zeros((4, 4))
    q[1, 3] = 1.0
    s = w @ (d + q) @ w.T
    p = projector(basis)

    sq_dist = float(np.linalg.norm(s @ s - p))
    asym = float(np.linalg.norm(s - s.T))
    oracle = is_polynomial_shift(s, basis, max_order=3)
    square_taps = FilterCoefficients(np.array([0.0, 0.0, 1.0]))
    square_err = float(np.linalg.norm(filter_matrix(s, square_taps) - p))
    claims = (
        ClaimCheck("||S^2 - P||_F", sq_dist, tol, sq_dist < tol),
        ClaimCheck("asymmetry ||S - S^T||_F", asym, 0.1, asym > 0.1),
        ClaimCheck(
            "least-squares filter residual at L=3",
            oracle.residual,
            1e-8 * (1.0 + np.linalg.norm(p)),
            oracle.polynomial,
        ),
        ClaimCheck("taps (0, 0, 1) reproduce P", square_err, tol, square_err < tol),
        _shared_diagonal_claim(d),
    )
    report = CounterexampleReport(name="shared-diagonal-asymmetric", claims=claims)
    return ProjectorShiftCase(w=w, d=d, q=q, shift=s, basis=basis, report=report)


def zero_shift_check(n: int, r: int, seed: int, tol: float = 1e-10) -> CounterexampleReport:
    """The zero matrix is a polynomial shift only in the trivial case r = n.

    All positive powers of 0 vanish, so the best filter is c0 * I.  For a
    rank-r projector the optimum is c0 = r/n with squared residual
    r (1 - r/n), strictly positive whenever r < n; the measured optimum is
    compared against that closed form.  For r = n the projector is I and
    c = (1, 0, ..., 0) works exactly.
    """
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    basis = SubspaceBasis(random_orthonormal(n, seed)[:, :r])
    check = is_polynomial_shift(np.zeros((n, n)), basis, max_order=n)
    threshold = DEFAULT_RESIDUAL_TOL * (1.0 + np.sqrt(r))
    if r < n:
        expected_sq = r * (1.0 - r / n)
        claims = (
            ClaimCheck(
                "least-squares oracle rejects the zero shift",
                check.residual,
                threshold,
                not check.polynomial,
            ),
            ClaimCheck(
                "best residual^2 matches r(1 - r/n)",
                abs(check.residual**2 - expected_sq),
                tol,
                abs(check.residual**2 - expected_sq) < tol,
            ),
        )
    else:
        tap_err = float(np.max(np.abs(check.coeffs.taps - np.eye(n)[0])))
        claims = (
            ClaimCheck(
                "zero shift accepted when the projector is I",
                check.residual,
                threshold,
                check.polynomial,
            ),
            ClaimCheck("taps equal (1, 0, ..., 0)", tap_err, tol, tap_err < tol),
        )
    return CounterexampleReport(name=f"zero-shift n={n} r={r}", claims=claims)


def _unit_spectral_radius(z: np.ndarray) -> np.ndarray:
    rho = float(np.max(np.abs(np.linalg.eigvals(z))))
    return z / rho if rho > 0 else z


def power_basis_rank_demo(
    n: int, m: int, trials: int, seed: int
) -> CounterexampleReport:
    """Measure the rank of [vec(Z^0) .. vec(Z^m)] over random trials.

    Every trial normalizes Z to unit spectral radius before taking powers so
    the rank estimate is not corrupted by overflow, then checks the rank
    never exceeds n.  Runs both dense-normal draws and quasi-triangular
    draws (random diagonal plus random strict upper part), since the latter
    is the shape the Schur parameterization produces.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    max_dense = 0
    max_tri = 0
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        z = _unit_spectral_radius(rng.standard_normal((n, n)))
        max_dense = max(max_dense, numerical_rank(power_basis(z, m)))
        tri = np.diag(rng.standard_normal(n)) + np.triu(rng.standard_normal((n, n)), 1)
        tri = _unit_spectral_radius(tri)
        max_tri = max(max_tri, numerical_rank(power_basis(tri, m)))
    claims = (
        ClaimCheck(
            f"max power-basis rank over {trials} dense trials",
            float(max_dense),
            float(n),
            max_dense <= n,
        ),
        ClaimCheck(
            f"max power-basis rank over {trials} quasi-triangular trials",
            float(max_tri),
            float(n),
            max_tri <= n,
        ),
    )
    return CounterexampleReport(name=f"power-basis-rank n={n} m={m}", claims=claims)


@dataclass(frozen=True)
class RankRequirement:
    """Arithmetic of the unattainable power-basis rank requirement."""

    n: int
    removed: int
    required_rank: int
    rank_bound: int
    vacuous: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "removed": self.removed,
            "required_rank": self.required_rank,
            "rank_bound": self.rank_bound,
            "vacuous": self.vacuous,
        }


def rank_requirement_vacuity(n: int, removed: int) -> RankRequirement:
    """Compare the demanded rank (n^2+n)/2 - removed with the bound n.

    ``removed`` is the (opaque) number of rows dropped from the full
    constraint stack; the stated setting keeps it between 0 and n, and
    values above n are computed anyway with a warning.  Whenever the
    requirement exceeds n it can never hold for any matrix, so a sufficient
    condition resting on it is vacuous.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if removed < 0:
        raise ValueError(f"removed must be >= 0, got {removed}")
    if removed > n:
        warnings.warn(
            f"removed={removed} exceeds the stated bound n={n}; computing anyway",
            stacklevel=2,
        )
    required = (n * n + n) // 2 - removed
    return RankRequirement(
        n=n,
        removed=removed,
        required_rank=required,
        rank_bound=n,
        vacuous=required > n,
    )
