"""Dense numerical kernels shared by the rest of the package.

Projector construction, orthonormal bases and complements, real Schur
decomposition split into diagonal + quasi-triangular parts, column-major
vectorization, matrix power bases, and SVD-based numerical rank.

Everything here is a pure function over immutable values: arrays stored on
the dataclasses are marked read-only, so instances are safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "SubspaceBasis",
    "SchurForm",
    "PowerBasisMatrix",
    "NumericalOverflowError",
    "projector",
    "orthonormal_complement",
    "random_orthonormal",
    "schur_decompose",
    "vec",
    "unvec",
    "power_basis",
    "numerical_rank",
]

ORTHO_TOL = 1e-10
QUASI_TRIANGULAR_TOL = 1e-10


class NumericalOverflowError(ArithmeticError):
    """Matrix powers left the representable range."""


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


def _require_finite(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} must have finite entries")
    return a


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal n x r basis of a target subspace.

    Orthonormality (columns^T columns = I within 1e-10) is validated at
    construction; the stored array is read-only.
    """

    columns: np.ndarray

    def __post_init__(self):
        cols = _require_finite(self.columns, "basis")
        if cols.ndim == 1:
            cols = cols[:, None]
        if cols.ndim != 2 or cols.shape[0] < 1 or cols.shape[1] < 1:
            raise ValueError(f"basis must be a 2-d n x r matrix, got shape {cols.shape}")
        n, r = cols.shape
        if r > n:
            raise ValueError(f"subspace dimension r={r} exceeds ambient dimension n={n}")
        dev = np.max(np.abs(cols.T @ cols - np.eye(r)))
        if dev > ORTHO_TOL:
            raise ValueError(
                f"basis columns are not orthonormal: max deviation {dev:.3e} "
                f"exceeds {ORTHO_TOL:.0e}"
            )
        object.__setattr__(self, "columns", _frozen(cols))

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    @property
    def r(self) -> int:
        return self.columns.shape[1]


def projector(basis: SubspaceBasis) -> np.ndarray:
    """Orthogonal projector onto the span of ``basis``.

    Returns the n x n matrix ``columns @ columns.T``; it is symmetric,
    idempotent, and of rank r.
    """
    if not isinstance(basis, SubspaceBasis):
        basis = SubspaceBasis(np.asarray(basis))
    u = basis.columns
    p = u @ u.T
    return 0.5 * (p + p.T)


def orthonormal_complement(basis: SubspaceBasis) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement (shape n x (n-r))."""
    if basis.r == basis.n:
        raise ValueError("subspace already spans the whole space; complement is empty")
    comp = scipy.linalg.null_space(basis.columns.T)
    return SubspaceBasis(comp)


def random_orthonormal(n: int, seed: int) -> np.ndarray:
    """Deterministic random n x n orthogonal matrix for a fixed seed.

    QR of a standard-normal matrix with the R diagonal sign fixed, which
    makes the draw Haar-distributed and reproducible.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


@dataclass(frozen=True)
class SchurForm:
    """Real Schur decomposition S = W (D + Q) W^T.

    ``w`` is orthogonal, ``d`` the diagonal part of the quasi-triangular
    factor, ``q`` the rest of it (zero below the first subdiagonal, with any
    nonzero subdiagonal entry isolated in a 2x2 block).
    """

    w: np.ndarray
    d: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        for name in ("w", "d", "q"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def n(self) -> int:
        return self.w.shape[0]

    def triangular(self) -> np.ndarray:
        """The quasi-triangular factor D + Q."""
        return self.d + self.q

    def reconstruct(self) -> np.ndarray:
        return self.w @ (self.d + self.q) @ self.w.T


def is_quasi_triangular(t: np.ndarray, tol: float = QUASI_TRIANGULAR_TOL) -> bool:
    """True iff t is upper quasi-triangular: zero below the first subdiagonal
    and no two adjacent nonzero subdiagonal entries."""
    t = np.asarray(t, dtype=float)
    n = t.shape[0]
    if n != t.shape[1]:
        return False
    for i in range(n):
        for j in range(i - 1):
            if abs(t[i, j]) > tol:
                return False
    sub = np.abs(np.diag(t, -1)) > tol
    return not np.any(sub[:-1] & sub[1:])


def schur_decompose(s: np.ndarray) -> SchurForm:
    """Real Schur decomposition split into orthogonal W, diagonal D, and
    off-diagonal quasi-triangular remainder Q."""
    s = _require_finite(s, "matrix")
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"schur_decompose needs a square matrix, got shape {s.shape}")
    t, w = scipy.linalg.schur(s, output="real")
    d = np.diag(np.diag(t))
    q = t - d
    return SchurForm(w=w, d=d, q=q)


def vec(a: np.ndarray) -> np.ndarray:
    """Column-major (Fortran-order) vectorization of a matrix."""
    return np.asarray(a, dtype=float).flatten(order="F")


def unvec(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`vec` for an n x n matrix."""
    v = np.asarray(v, dtype=float)
    if v.size != n * n:
        raise ValueError(f"vector of length {v.size} cannot fill an {n} x {n} matrix")
    return v.reshape((n, n), order="F")


@dataclass(frozen=True)
class PowerBasisMatrix:
    """n^2 x (m+1) matrix whose column l is vec(Z^l).

    Column 0 is always vec(I); by Cayley-Hamilton the numerical rank never
    exceeds n regardless of m.
    """

    columns: np.ndarray
    source_dim: int

    def __post_init__(self):
        object.__setattr__(self, "columns", _frozen(self.columns))

    @property
    def max_exponent(self) -> int:
        return self.columns.shape[1] - 1


def power_basis(z: np.ndarray, m: int) -> PowerBasisMatrix:
    """Stack vec(Z^0) .. vec(Z^m) as columns.

    Powers are built by repeated multiplication so defective and asymmetric
    matrices are handled exactly like diagonalizable ones.
    """
    z = _require_finite(z, "matrix")
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise ValueError(f"power_basis needs a square matrix, got shape {z.shape}")
    if m < 0:
        raise ValueError(f"max exponent must be >= 0, got {m}")
    n = z.shape[0]
    cols = np.empty((n * n, m + 1))
    acc = np.eye(n)
    cols[:, 0] = vec(acc)
    for l in range(1, m + 1):
        acc = acc @ z
        if not np.all(np.isfinite(acc)):
            raise NumericalOverflowError(
                f"Z^{l} overflowed; rescale the matrix first "
                "(e.g. divide by its spectral radius)"
            )
        cols[:, l] = vec(acc)
    return PowerBasisMatrix(columns=cols, source_dim=n)


def numerical_rank(a, tol: float = 1e-9) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    mat = a.columns if isinstance(a, PowerBasisMatrix) else np.asarray(a, dtype=float)
    mat = _require_finite(mat, "matrix")
    if mat.size == 0:
        return 0
    sigma = np.linalg.svd(mat, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > tol * sigma[0]))
