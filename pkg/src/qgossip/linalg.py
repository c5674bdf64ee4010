"""Dense complex linear algebra on multipartite operator spaces.

Operators are plain ``numpy.ndarray`` matrices of ``complex128`` in row-major
layout (column index fastest). Vectorization uses column stacking, so
``vectorize(A @ X @ B) == kron(B.T, A) @ vectorize(X)``. All functions are
pure and never mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConsistencyError, DimensionError, ResourceLimitError, ValidationError

# Hard cap on the joint dimension n**m for state-side computations.
MAX_TOTAL_DIM = 4096

# Joint dimensions above this refuse superoperator-sized work (dim**2 matrices).
MAX_SUPEROP_DIM = 64

# Max-entry tolerance for accepting a matrix as Hermitian.
HERMITIAN_TOL = 1e-9

# Eigenvalues of nominally PSD inputs may undershoot zero by this much.
PSD_TOL = 1e-10

# Frobenius tolerance for eigendecomposition round trips.
EIG_RECONSTRUCTION_TOL = 1e-10


def as_operator(x) -> np.ndarray:
    """Coerce ``x`` to a square complex128 matrix."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_defect(x: np.ndarray) -> float:
    """Largest entry of ``|x - x^dagger|``."""
    return float(np.max(np.abs(x - x.conj().T))) if x.size else 0.0


def require_hermitian(x: np.ndarray, tol: float = HERMITIAN_TOL, what: str = "matrix") -> np.ndarray:
    a = as_operator(x)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValidationError(f"{what} is not Hermitian: max |x - x^dagger| = {defect:.3e} > {tol:.1e}")
    return a


@dataclass(frozen=True)
class NetworkShape:
    """A network of ``m`` isomorphic subsystems, each of local dimension ``n``.

    The joint Hilbert space has dimension ``n**m``; construction fails beyond
    the ``MAX_TOTAL_DIM`` cap. Subsystems are labelled 1..m in every public
    interface.
    """

    m: int
    n: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValidationError(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.n, int) or self.n < 2:
            raise ValidationError(f"n must be an integer >= 2, got {self.n!r}")
        if self.n ** self.m > MAX_TOTAL_DIM:
            raise ResourceLimitError(
                f"total dimension {self.n}**{self.m} exceeds the cap {MAX_TOTAL_DIM}")

    @property
    def total_dim(self) -> int:
        return self.n ** self.m

    def sites(self) -> range:
        """1-based site labels."""
        return range(1, self.m + 1)


def kron(a, b) -> np.ndarray:
    """Kronecker product with a resource-cap guard on the result size."""
    am = np.asarray(a, dtype=np.complex128)
    bm = np.asarray(b, dtype=np.complex128)
    out_rows = am.shape[0] * bm.shape[0]
    if out_rows > MAX_TOTAL_DIM:
        raise ResourceLimitError(
            f"kron result dimension {out_rows} exceeds the cap {MAX_TOTAL_DIM}")
    return np.kron(am, bm)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence; site 1 is the leftmost."""
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = kron(out, f)
    return out


def partial_trace(x, shape: NetworkShape, keep: Iterable[int]) -> np.ndarray:
    """Trace out all subsystems not in ``keep``.

    Parameters
    ----------
    x : array_like
        Operator on the joint space of ``shape`` (dimension ``n**m``).
    shape : NetworkShape
        Network layout; site 1 corresponds to the leftmost tensor factor.
    keep : iterable of int
        1-based labels of the subsystems to retain. The result is ordered by
        ascending site label.

    Returns
    -------
    numpy.ndarray
        Operator of dimension ``n**len(keep)``.
    """
    a = as_operator(x)
    m, n = shape.m, shape.n
    if a.shape[0] != shape.total_dim:
        raise DimensionError(
            f"operator dimension {a.shape[0]} does not match shape {m} sites of dim {n}")
    keep0 = sorted(set(int(k) for k in keep))
    if not keep0:
        raise ValidationError("keep must name at least one subsystem")
    if keep0[0] < 1 or keep0[-1] > m:
        raise ValidationError(f"keep labels must lie in 1..{m}, got {keep0}")
    keep0 = [k - 1 for k in keep0]

    row = list(range(m))
    col = [m + i for i in range(m)]
    for s in range(m):
        if s not in keep0:
            col[s] = row[s]
    out_labels = [row[s] for s in keep0] + [col[s] for s in keep0]
    t = a.reshape((n,) * (2 * m))
    reduced = np.einsum(t, row + col, out_labels)
    d = n ** len(keep0)
    return np.ascontiguousarray(reduced.reshape(d, d))


def eigh(x, tol: float = HERMITIAN_TOL):
    """Hermitian eigendecomposition with validation.

    Checks hermiticity on entry (max-entry tolerance), delegates to the dense
    LAPACK solver, and verifies the reconstruction ``V diag(w) V^dagger``
    against the input to ``EIG_RECONSTRUCTION_TOL`` in Frobenius norm.
    Eigenvalues come back ascending with orthonormal columns in ``V``.
    """
    a = require_hermitian(x, tol=tol)
    w, v = np.linalg.eigh(a)
    residual = frobenius_norm(v @ np.diag(w) @ v.conj().T - a)
    scale = max(1.0, frobenius_norm(a))
    if residual > EIG_RECONSTRUCTION_TOL * scale:
        raise ConsistencyError(
            f"eigendecomposition reconstruction residual {residual:.3e}")
    return w, v


def frobenius_norm(x) -> float:
    return float(np.linalg.norm(np.asarray(x), ord="fro"))


def frobenius_distance(a, b) -> float:
    """``||a - b||_F`` for same-shaped matrices."""
    am = np.asarray(a, dtype=np.complex128)
    bm = np.asarray(b, dtype=np.complex128)
    if am.shape != bm.shape:
        raise DimensionError(f"shape mismatch {am.shape} vs {bm.shape}")
    return float(np.linalg.norm(am - bm, ord="fro"))


def vectorize(x) -> np.ndarray:
    """Column-stacking vectorization of a square matrix."""
    return as_operator(x).flatten(order="F")


def unvectorize(v) -> np.ndarray:
    """Inverse of :func:`vectorize`; the length must be a perfect square."""
    a = np.asarray(v, dtype=np.complex128).ravel()
    d = int(round(np.sqrt(a.size)))
    if d * d != a.size:
        raise DimensionError(f"vector length {a.size} is not a perfect square")
    return a.reshape((d, d), order="F")
