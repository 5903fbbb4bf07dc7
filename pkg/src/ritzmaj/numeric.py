"""Dense linear-algebra foundation.

Everything here works on complex double precision NumPy arrays. Real inputs
are promoted on entry, so callers never have to care which scalar field a
matrix came from. Eigenvalues and singular values are always returned in
decreasing order.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np
import scipy.linalg

from .exceptions import (
    DimensionError,
    EmptySubspaceError,
    MatrixFormatError,
    NonFiniteError,
    NotHermitianError,
    NotPSDError,
)

if TYPE_CHECKING:
    from .subspaces import Subspace

__all__ = [
    "TolerancePolicy",
    "DEFAULT_POLICY",
    "as_matrix",
    "as_hermitian",
    "hermitian_part",
    "eigh",
    "eigvalsh",
    "svd_decreasing",
    "orthonormalize",
    "orthonormal_basis",
    "psd_sqrt",
    "complement_basis",
    "read_matrix",
    "write_matrix",
    "format_matrix",
    "parse_matrix",
]


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical tolerances used throughout the package.

    ``hermitian_tol`` is relative to ``max(1, max|A_ij|)``; ``rank_tol_factor``
    is multiplied by ``max(rows, cols) * s_max`` to get the singular-value
    cutoff for numerical rank.
    """

    atol: float = 1e-12
    rtol: float = 1e-10
    hermitian_tol: float = 1e-10
    rank_tol_factor: float = 1e-10

    def __post_init__(self):
        for name in ("atol", "rtol", "hermitian_tol", "rank_tol_factor"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def rank_cutoff(self, M: np.ndarray, smax: float) -> float:
        return self.rank_tol_factor * max(M.shape) * smax


DEFAULT_POLICY = TolerancePolicy()


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-D complex array (vectors become columns)."""
    A = np.asarray(M)
    if A.ndim == 1:
        A = A[:, None]
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    A = A.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(A)):
        raise NonFiniteError("matrix has non-finite entries")
    return A


def as_hermitian(H, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Validate ``H`` as Hermitian and return it as a complex array.

    Inputs violating the symmetry tolerance are rejected rather than
    symmetrized.
    """
    A = as_matrix(H)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"Hermitian matrix must be square, got {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))))
    asym = float(np.max(np.abs(A - A.conj().T)))
    if asym > policy.hermitian_tol * scale:
        raise NotHermitianError(
            f"matrix is not Hermitian: max |A - A^H| = {asym:.3e}"
        )
    return A


def hermitian_part(M: np.ndarray) -> np.ndarray:
    # removes rounding-level asymmetry from products like X^H A X
    return 0.5 * (M + M.conj().T)


def eigh(H, policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (decreasing) and orthonormal eigenvectors of a Hermitian matrix."""
    A = as_hermitian(H, policy)
    w, V = np.linalg.eigh(hermitian_part(A))
    return w[::-1].copy(), V[:, ::-1].copy()


def eigvalsh(H, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    A = as_hermitian(H, policy)
    return np.linalg.eigvalsh(hermitian_part(A))[::-1].copy()


def svd_decreasing(M) -> np.ndarray:
    """The ``min(rows, cols)`` singular values of ``M`` in decreasing order."""
    A = np.asarray(M)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {A.shape}")
    if A.size == 0:
        return np.zeros(min(A.shape))
    if not np.all(np.isfinite(A)):
        raise NonFiniteError("matrix has non-finite entries")
    return np.linalg.svd(A, compute_uv=False)


def orthonormal_basis(M, tol: float | None = None,
                      policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Orthonormal basis of the numerical range of ``M`` as a plain array.

    ``tol`` is the relative singular-value cutoff; the default is
    ``policy.rank_tol_factor * max(rows, cols)``.
    """
    A = as_matrix(M)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        raise EmptySubspaceError("empty subspace: matrix has rank 0")
    cutoff = policy.rank_cutoff(A, smax) if tol is None else tol * smax
    rank = int(np.count_nonzero(s > cutoff))
    if rank == 0:
        raise EmptySubspaceError("empty subspace: matrix has numerical rank 0")
    return U[:, :rank].copy()


def orthonormalize(M, tol: float | None = None,
                   policy: TolerancePolicy = DEFAULT_POLICY) -> "Subspace":
    """Orthonormalize the columns of ``M`` into a :class:`Subspace`."""
    from .subspaces import Subspace

    return Subspace(orthonormal_basis(M, tol, policy), policy=policy)


def complement_basis(B: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``range(B)``.

    ``B`` must already have orthonormal columns. Returns an ``n x (n - p)``
    array, possibly with zero columns.
    """
    n, p = B.shape
    if p == n:
        return np.zeros((n, 0), dtype=np.complex128)
    Q = scipy.linalg.null_space(B.conj().T)
    return Q.astype(np.complex128, copy=False)


def psd_sqrt(H, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in ``[-atol, 0)`` are clamped to 0."""
    w, V = eigh(H, policy)
    # scale-aware clamp window: rounding in eigh is relative to ||H||
    window = policy.atol * max(1.0, float(np.max(np.abs(w))))
    if w.size and w[-1] < -window:
        raise NotPSDError(f"matrix is not PSD: smallest eigenvalue {w[-1]:.3e}")
    r = np.sqrt(np.clip(w, 0.0, None))
    return hermitian_part((V * r) @ V.conj().T)


# ---------------------------------------------------------------------------
# Matrix text format
#
#   rows cols kind          kind in {real, complex}
#   a11 a12 ...             whitespace separated; complex as a+bi / a-bi
# ---------------------------------------------------------------------------

PathLike = Union[str, "os.PathLike[str]"]


def _parse_entry(tok: str, kind: str) -> complex:
    try:
        if kind == "real":
            return complex(float(tok))
        if tok.endswith("i"):
            return complex(tok[:-1] + "j")
        return complex(float(tok))
    except ValueError as exc:
        raise MatrixFormatError(f"cannot parse {kind} entry {tok!r}") from exc


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    header = lines[0]
    if len(header) != 3:
        raise MatrixFormatError("header must be 'rows cols kind'")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError as exc:
        raise MatrixFormatError("rows and cols must be integers") from exc
    kind = header[2]
    if kind not in ("real", "complex"):
        raise MatrixFormatError(f"unknown kind {kind!r}")
    body = lines[1:]
    if len(body) != rows or any(len(r) != cols for r in body):
        raise MatrixFormatError(f"expected {rows} rows of {cols} entries")
    M = np.array([[_parse_entry(t, kind) for t in r] for r in body], dtype=np.complex128)
    return as_matrix(M)


def _format_entry(z: complex, kind: str) -> str:
    re = repr(float(z.real))
    if kind == "real":
        return re
    im = repr(float(z.imag))
    if not im.startswith("-"):
        im = "+" + im
    return f"{re}{im}i"


def format_matrix(M, kind: str | None = None) -> str:
    A = np.asarray(M)
    if A.ndim == 1:
        A = A[:, None]
    if kind is None:
        kind = "real" if np.all(np.imag(A) == 0) else "complex"
    if kind not in ("real", "complex"):
        raise MatrixFormatError(f"unknown kind {kind!r}")
    if kind == "real" and np.any(np.imag(A) != 0):
        raise MatrixFormatError("matrix has imaginary parts; use kind='complex'")
    buf = io.StringIO()
    buf.write(f"{A.shape[0]} {A.shape[1]} {kind}\n")
    for row in A:
        buf.write(" ".join(_format_entry(complex(z), kind) for z in row))
        buf.write("\n")
    return buf.getvalue()


def read_matrix(path: PathLike) -> np.ndarray:
    with open(path, encoding="ascii") as fh:
        return parse_matrix(fh.read())


def write_matrix(path: PathLike, M, kind: str | None = None) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_matrix(M, kind))
