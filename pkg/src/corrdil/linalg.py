"""Dense complex-matrix primitives: norms, positivity, square roots, defect
operators, compressions, and invariant-subspace closures.

A "CMatrix" is simply a two-dimensional :class:`numpy.ndarray` with dtype
``complex128``.  Every function here is pure (no shared mutable state) and
safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ContractivityError,
    DimensionError,
    PositivityError,
    ResourceCapError,
)

__all__ = [
    "HALMOS_CONSTANT",
    "Tolerance",
    "DEFAULT_TOL",
    "Subspace",
    "as_cmatrix",
    "op_norm",
    "is_psd",
    "psd_sqrt",
    "defect_sqrt",
    "compress",
    "orthonormal_closure",
]

# Commutation constant for square roots: for a unitary U and PSD A,
# U sqrt(A) U* = sqrt(U A U*), so ||[U, sqrt(A)]|| = ||sqrt(UAU*) - sqrt(A)||
# <= ||UAU* - A||^{1/2} = ||[U, A]||^{1/2} by operator monotonicity of the
# square root.  The exact-arithmetic constant is therefore 1; the value 2
# absorbs the eigenvalue clipping and rounding inside psd_sqrt/defect_sqrt.
HALMOS_CONSTANT = 2.0


@dataclass(frozen=True)
class Tolerance:
    """Numerical policy knobs.

    eps bounds acceptable defect norms, eig_clip is the cutoff below which
    eigenvalues/singular values are treated as zero, and max_dim caps the
    dimension of any space a computation is allowed to construct (dilation
    spaces grow geometrically).
    """

    eps: float = 1e-8
    eig_clip: float = 1e-10
    max_dim: int = 4096

    def __post_init__(self):
        if not (self.eps > 0.0):
            raise ValueError("eps must be positive")
        if not (self.eig_clip > 0.0):
            raise ValueError("eig_clip must be positive")
        if self.max_dim < 1:
            raise ValueError("max_dim must be at least 1")

    def check_dim(self, dim: int) -> None:
        """Raise ResourceCapError when dim exceeds the configured cap."""
        if dim > self.max_dim:
            raise ResourceCapError(
                f"dimension {dim} exceeds the configured cap {self.max_dim}"
            )


DEFAULT_TOL = Tolerance()


def as_cmatrix(M, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce to a 2-d complex array, optionally enforcing its shape."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of ndim {A.ndim}")
    if rows is not None and A.shape[0] != rows:
        raise DimensionError(f"expected {rows} rows, got {A.shape[0]}")
    if cols is not None and A.shape[1] != cols:
        raise DimensionError(f"expected {cols} columns, got {A.shape[1]}")
    return A


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^ambient_dim presented by orthonormal basis columns."""

    ambient_dim: int
    basis: np.ndarray  # shape (ambient_dim, dim)

    def __post_init__(self):
        B = as_cmatrix(self.basis, rows=self.ambient_dim)
        if B.shape[1] > self.ambient_dim:
            raise DimensionError(
                f"{B.shape[1]} basis vectors in ambient dimension {self.ambient_dim}"
            )
        gram = B.conj().T @ B
        if B.shape[1] and op_norm(gram - np.eye(B.shape[1])) > 1e-6:
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", B)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(n, np.eye(n, dtype=complex))

    @staticmethod
    def coordinate(ambient_dim: int, indices) -> "Subspace":
        """Span of the listed standard basis vectors."""
        B = np.zeros((ambient_dim, len(indices)), dtype=complex)
        for k, i in enumerate(indices):
            B[i, k] = 1.0
        return Subspace(ambient_dim, B)

    @staticmethod
    def from_vectors(ambient_dim: int, vectors, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        """Orthonormalize arbitrary spanning vectors into a Subspace."""
        W = np.column_stack([np.asarray(v, dtype=complex).reshape(-1) for v in vectors]) \
            if len(vectors) else np.zeros((ambient_dim, 0), dtype=complex)
        if W.shape[0] != ambient_dim:
            raise DimensionError("seed vectors do not match the ambient dimension")
        B = np.zeros((ambient_dim, 0), dtype=complex)
        B, _ = _append_orthonormal(B, W, tol.eig_clip)
        return Subspace(ambient_dim, B)


def op_norm(M) -> float:
    """Largest singular value; an empty matrix has norm 0."""
    A = as_cmatrix(M)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def _hermitian_part(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.conj().T)


def is_psd(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Hermitian within tol.eps and minimal eigenvalue >= -tol.eig_clip."""
    A = as_cmatrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"is_psd needs a square matrix, got {A.shape}")
    if A.size == 0:
        return True
    if op_norm(A - A.conj().T) > tol.eps:
        return False
    w = np.linalg.eigvalsh(_hermitian_part(A))
    return bool(w.min() >= -tol.eig_clip)


def psd_sqrt(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root via spectral decomposition.

    Eigenvalues in [-eig_clip, 0) are clipped to 0; anything more negative is
    rejected by the is_psd precondition.
    """
    A = as_cmatrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"psd_sqrt needs a square matrix, got {A.shape}")
    if not is_psd(A, tol):
        raise PositivityError("matrix is not positive semidefinite within tolerance")
    w, V = np.linalg.eigh(_hermitian_part(A))
    w = np.where(w < 0.0, 0.0, w)
    S = (V * np.sqrt(w)) @ V.conj().T
    return _hermitian_part(S)


def defect_sqrt(T, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """(I - T*T)^{1/2} for a contraction T (I matches T's column count).

    The precondition ||T|| <= 1 + eps admits eigenvalues of I - T*T down to
    about -2*eps, below the -eig_clip line is_psd would draw; once the norm
    precondition holds every negative eigenvalue is a rounding artifact, so
    all of them are clamped to 0.
    """
    A = as_cmatrix(T)
    if op_norm(A) > 1.0 + tol.eps:
        raise ContractivityError("operator norm exceeds 1 beyond tolerance")
    D = np.eye(A.shape[1], dtype=complex) - A.conj().T @ A
    w, V = np.linalg.eigh(_hermitian_part(D))
    w = np.where(w < 0.0, 0.0, w)
    S = (V * np.sqrt(w)) @ V.conj().T
    return _hermitian_part(S)


def compress(M, S: Subspace) -> np.ndarray:
    """B* M B for the basis columns B of S."""
    A = as_cmatrix(M, rows=S.ambient_dim, cols=S.ambient_dim)
    B = S.basis
    return B.conj().T @ A @ B


def _append_orthonormal(B: np.ndarray, W: np.ndarray, eig_clip: float):
    """Orthogonalize the columns of W against B and among themselves,
    appending the directions that survive the rank cutoff.

    Gram-Schmidt passes are applied twice (re-orthogonalization) before the
    rank-revealing SVD, then twice more on the surviving directions: the SVD
    rescales residuals by up to 1/eig_clip, which can re-introduce overlap
    with B that a final cleaning pass removes.
    """
    if W.size == 0:
        return B, 0
    scale = float(np.max(np.linalg.norm(W, axis=0), initial=0.0))
    if scale <= eig_clip:
        return B, 0
    for _ in range(2):
        if B.shape[1]:
            W = W - B @ (B.conj().T @ W)
    U, s, _ = np.linalg.svd(W, full_matrices=False)
    k = int(np.sum(s > eig_clip * max(1.0, scale)))
    if k == 0:
        return B, 0
    N = U[:, :k]
    for _ in range(2):
        if B.shape[1]:
            N = N - B @ (B.conj().T @ N)
    Q, R = np.linalg.qr(N)
    keep = np.abs(np.diag(R)) > 0.5
    Q = Q[:, keep]
    if Q.shape[1] == 0:
        return B, 0
    return np.column_stack([B, Q]), Q.shape[1]


def orthonormal_closure(ambient_dim: int, seeds, generators, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Smallest subspace containing the seeds and invariant under every
    generator, computed by repeated application and re-orthogonalized
    Gram-Schmidt with rank cutoff tol.eig_clip."""
    gens = [as_cmatrix(G, rows=ambient_dim, cols=ambient_dim) for G in generators]
    seed_list = [np.asarray(v, dtype=complex).reshape(-1) for v in seeds]
    for v in seed_list:
        if v.shape[0] != ambient_dim:
            raise DimensionError("seed vector does not match the ambient dimension")
    B = np.zeros((ambient_dim, 0), dtype=complex)
    if seed_list:
        B, added = _append_orthonormal(B, np.column_stack(seed_list), tol.eig_clip)
    else:
        added = 0
    fresh = B[:, B.shape[1] - added:]
    # Fixpoint: only the newly added directions need another generator pass.
    while fresh.shape[1] and gens:
        candidates = np.column_stack([G @ fresh for G in gens])
        B, added = _append_orthonormal(B, candidates, tol.eig_clip)
        fresh = B[:, B.shape[1] - added:]
    return Subspace(ambient_dim, B)
