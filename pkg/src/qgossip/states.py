"""States, observables, permutations, and channels on a subsystem network.

Local operators act on C^n; joint operators act on the m-fold tensor product
with site 1 as the leftmost factor. The permutation unitaries follow the
convention ``U_pi |x_1,...,x_m> = |x_pi(1),...,x_pi(m)>`` (site i of the
output holds the content of site pi(i) of the input), which is exactly the
convention under which

    U_pi (X_1 (x) ... (x) X_m) U_pi^dagger = X_pi(1) (x) ... (x) X_pi(m).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .errors import (ConsistencyError, DimensionError, ResourceLimitError,
                     ValidationError)
from .linalg import NetworkShape, as_operator, eigh, kron, kron_all, require_hermitian
from .rng import complex_ginibre, make_rng

# Single-qubit basics, sigma_z = |0><0| - |1><1| = diag(1, -1).
I2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z, "identity": I2}

TRACE_TOL = 1e-10
KRAUS_TOL = 1e-10
MAX_FACTORIAL_M = 8  # twirl enumerates m! permutations; 8! = 40320


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------

class Permutation:
    """A bijection pi of the site labels {1, ..., m}.

    ``mapping[i-1] == pi(i)``. Composition is defined so that the induced
    unitaries satisfy ``permutation_unitary(p.compose(q)) ==
    permutation_unitary(p) @ permutation_unitary(q)``; under the tensor-leg
    convention above that means ``compose(p, q)(i) == q(p(i))``.
    """

    __slots__ = ("mapping",)

    def __init__(self, mapping: Sequence[int]):
        mp = tuple(int(v) for v in mapping)
        if sorted(mp) != list(range(1, len(mp) + 1)):
            raise ValidationError(f"not a bijection of 1..{len(mp)}: {mp}")
        self.mapping = mp

    @property
    def m(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(self.mapping)

    def __repr__(self) -> str:
        return f"Permutation({list(self.mapping)})"

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(1, m + 1))

    @classmethod
    def transposition(cls, m: int, j: int, k: int) -> "Permutation":
        if j == k:
            raise ValidationError("transposition needs two distinct sites")
        mp = list(range(1, m + 1))
        mp[j - 1], mp[k - 1] = mp[k - 1], mp[j - 1]
        return cls(mp)

    def inverse(self) -> "Permutation":
        inv = [0] * self.m
        for i, v in enumerate(self.mapping):
            inv[v - 1] = i + 1
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """Return r with U_r = U_self @ U_other, i.e. r(i) = other(self(i))."""
        if self.m != other.m:
            raise DimensionError("permutation sizes differ")
        return Permutation([other(self(i)) for i in range(1, self.m + 1)])


def all_permutations(m: int) -> Iterator[Permutation]:
    """All m! permutations; refuses m beyond the factorial cap."""
    if m > MAX_FACTORIAL_M:
        raise ResourceLimitError(
            f"enumerating {m}! permutations exceeds the cap {MAX_FACTORIAL_M}!")
    for mp in itertools.permutations(range(1, m + 1)):
        yield Permutation(mp)


@lru_cache(maxsize=256)
def _site_digits(m: int, n: int) -> np.ndarray:
    """digits[x, i] = base-n digit of joint index x at (0-based) site i."""
    idx = np.arange(n ** m)
    digits = np.empty((n ** m, m), dtype=np.int64)
    for i in range(m):
        digits[:, i] = (idx // n ** (m - 1 - i)) % n
    return digits


def basis_index_map(perm: Permutation, shape: NetworkShape) -> np.ndarray:
    """The action of U_perm on computational basis indices.

    Returns ``bmap`` with ``U_perm |x> = |bmap[x]>``, where the digits of
    ``bmap[x]`` satisfy ``y_i = x_perm(i)``. Permutation conjugation then
    reduces to fancy indexing, which keeps the twirl affordable.
    """
    if perm.m != shape.m:
        raise DimensionError(f"permutation of {perm.m} sites on shape with m={shape.m}")
    digits = _site_digits(shape.m, shape.n)
    cols = [perm(i) - 1 for i in range(1, shape.m + 1)]
    weights = shape.n ** np.arange(shape.m - 1, -1, -1, dtype=np.int64)
    return digits[:, cols] @ weights


def permutation_unitary(perm: Permutation, shape: NetworkShape) -> np.ndarray:
    """Dense unitary representation of a site permutation."""
    d = shape.total_dim
    bmap = basis_index_map(perm, shape)
    u = np.zeros((d, d), dtype=np.complex128)
    u[bmap, np.arange(d)] = 1.0
    return u


def swap_unitary(j: int, k: int, shape: NetworkShape) -> np.ndarray:
    return permutation_unitary(Permutation.transposition(shape.m, j, k), shape)


def conjugate_by_basis_map(x: np.ndarray, bmap: np.ndarray) -> np.ndarray:
    """``U x U^dagger`` for the basis-relabelling unitary encoded by ``bmap``."""
    out = np.empty_like(x)
    out[np.ix_(bmap, bmap)] = x
    return out


# ---------------------------------------------------------------------------
# local lifts
# ---------------------------------------------------------------------------

def lift_local(sigma, site: int, shape: NetworkShape) -> np.ndarray:
    """Embed a local operator at one site: ``I (x) ... (x) sigma (x) ... (x) I``."""
    s = as_operator(sigma)
    if s.shape[0] != shape.n:
        raise DimensionError(f"local operator dim {s.shape[0]} != n={shape.n}")
    if not 1 <= site <= shape.m:
        raise ValidationError(f"site {site} outside 1..{shape.m}")
    eye_n = np.eye(shape.n, dtype=np.complex128)
    return kron_all(s if i == site else eye_n for i in shape.sites())


def site_average(sigma, shape: NetworkShape) -> np.ndarray:
    """``(1/m) sum_i sigma^(i)``, the canonical permutation-invariant lift."""
    d = shape.total_dim
    out = np.zeros((d, d), dtype=np.complex128)
    for i in shape.sites():
        out += lift_local(sigma, i, shape)
    return out / shape.m


def local_hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal Hermitian basis of B(C^n) under <A,B> = Tr[A B].

    Generalized Gell-Mann construction: diagonal units, symmetric pairs,
    antisymmetric pairs; n**2 elements in total.
    """
    basis = []
    for j in range(n):
        e = np.zeros((n, n), dtype=np.complex128)
        e[j, j] = 1.0
        basis.append(e)
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=np.complex128)
            s[j, k] = s[k, j] = 1.0 / np.sqrt(2.0)
            basis.append(s)
            a = np.zeros((n, n), dtype=np.complex128)
            a[j, k] = -1j / np.sqrt(2.0)
            a[k, j] = 1j / np.sqrt(2.0)
            basis.append(a)
    return basis


# ---------------------------------------------------------------------------
# density operators
# ---------------------------------------------------------------------------

class DensityOperator:
    """A validated density operator on a subsystem network.

    Construction checks hermiticity (max-entry 1e-9), unit trace (1e-10) and
    positive semidefiniteness (eigenvalues >= -1e-10). The matrix is frozen
    after construction. Internal evolution code may skip the eigenvalue check
    through :meth:`trusted` when positivity is guaranteed by construction
    (convex mixtures of unitary conjugates of a validated state).
    """

    __slots__ = ("shape", "matrix")

    def __init__(self, matrix, shape: NetworkShape, _validate_psd: bool = True):
        a = require_hermitian(matrix, what="density operator")
        if a.shape[0] != shape.total_dim:
            raise DimensionError(
                f"matrix dim {a.shape[0]} != total dim {shape.total_dim}")
        tr = complex(np.trace(a))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace {tr} differs from 1 beyond {TRACE_TOL:.1e}")
        a = (a + a.conj().T) / 2.0
        if _validate_psd:
            evals = np.linalg.eigvalsh(a)
            if evals[0] < -linalg.PSD_TOL:
                raise ValidationError(
                    f"negative eigenvalue {evals[0]:.3e} below -{linalg.PSD_TOL:.1e}")
        a.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "matrix", a)

    def __setattr__(self, *_):
        raise AttributeError("DensityOperator is immutable")

    @classmethod
    def trusted(cls, matrix: np.ndarray, shape: NetworkShape) -> "DensityOperator":
        """Construct without the O(d^3) eigenvalue check; see class docstring."""
        return cls(matrix, shape, _validate_psd=False)

    @classmethod
    def from_ket(cls, ket, shape: NetworkShape) -> "DensityOperator":
        v = np.asarray(ket, dtype=np.complex128).ravel()
        if v.size != shape.total_dim:
            raise DimensionError(f"ket length {v.size} != total dim {shape.total_dim}")
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            raise ValidationError("cannot normalize the zero vector")
        v = v / nrm
        return cls.trusted(np.outer(v, v.conj()), shape)

    def expectation(self, operator) -> complex:
        x = as_operator(operator)
        return complex(np.einsum("ij,ji->", self.matrix, x))

    def reduced_state(self, site: int) -> np.ndarray:
        """Reduced density matrix of a single subsystem (1-based label)."""
        return linalg.partial_trace(self.matrix, self.shape, {site})

    def purity(self) -> float:
        return float(np.real(np.einsum("ij,ji->", self.matrix, self.matrix)))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Base-e von Neumann entropy; zero eigenvalues contribute nothing."""
    evals = np.linalg.eigvalsh(rho.matrix)
    evals = np.clip(evals.real, 0.0, None)
    nz = evals[evals > 1e-15]
    return float(-np.sum(nz * np.log(nz)))


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

class Observable:
    """A Hermitian local observable with its grouped spectral decomposition.

    Eigenvalues within ``grouping_tol`` times the spectral range collapse to
    one spectral projector; ``nondegenerate`` is true when every projector
    has rank one. The projector family satisfies sum = I and orthogonality to
    1e-10, checked at construction.
    """

    __slots__ = ("matrix", "eigenvalues", "projectors")

    def __init__(self, matrix, grouping_tol: float = 1e-8):
        a = require_hermitian(matrix, what="observable")
        w, v = eigh(a)
        spread = float(w[-1] - w[0])
        thr = grouping_tol * spread if spread > 1e-14 else np.inf
        groups: list[list[int]] = [[0]]
        for i in range(1, len(w)):
            if w[i] - w[groups[-1][0]] <= thr:
                groups[-1].append(i)
            else:
                groups.append([i])
        eigenvalues = []
        projectors = []
        for g in groups:
            vg = v[:, g]
            eigenvalues.append(float(np.mean(w[g])))
            projectors.append(vg @ vg.conj().T)
        self._check_family(projectors, a.shape[0])
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "eigenvalues", tuple(eigenvalues))
        object.__setattr__(self, "projectors", tuple(p for p in projectors))

    def __setattr__(self, *_):
        raise AttributeError("Observable is immutable")

    @staticmethod
    def _check_family(projectors, dim):
        total = sum(projectors)
        if np.max(np.abs(total - np.eye(dim))) > 1e-10:
            raise ConsistencyError("spectral projectors do not sum to the identity")
        for i, p in enumerate(projectors):
            for j, q in enumerate(projectors):
                target = p if i == j else 0.0
                if np.max(np.abs(p @ q - target)) > 1e-10:
                    raise ConsistencyError("spectral projectors are not orthogonal")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nondegenerate(self) -> bool:
        return all(abs(np.trace(p) - 1.0) < 1e-8 for p in self.projectors)


# ---------------------------------------------------------------------------
# twirl
# ---------------------------------------------------------------------------

def twirl_matrix(x: np.ndarray, shape: NetworkShape) -> np.ndarray:
    """``(1/m!) sum_pi U_pi x U_pi^dagger`` via basis relabelling."""
    a = as_operator(x)
    if a.shape[0] != shape.total_dim:
        raise DimensionError("operator does not match the network shape")
    acc = np.zeros_like(a)
    count = 0
    for perm in all_permutations(shape.m):
        bmap = basis_index_map(perm, shape)
        acc += conjugate_by_basis_map(a, bmap)
        count += 1
    return acc / count


def twirl(rho: DensityOperator) -> DensityOperator:
    """Project a state onto the permutation-invariant subspace.

    The twirl is the orthogonal projection (Hilbert-Schmidt sense) onto
    operators commuting with every ``U_pi``; it preserves trace, hermiticity
    and positivity, and is idempotent.
    """
    return DensityOperator.trusted(twirl_matrix(rho.matrix, rho.shape), rho.shape)


def twirl_observable(q, shape: NetworkShape) -> np.ndarray:
    """``(1/m!) sum_pi U_pi^dagger q U_pi`` for a Hermitian joint operator."""
    a = require_hermitian(q, what="observable to twirl")
    if a.shape[0] != shape.total_dim:
        raise DimensionError("operator does not match the network shape")
    acc = np.zeros_like(a)
    count = 0
    for perm in all_permutations(shape.m):
        bmap = basis_index_map(perm.inverse(), shape)
        acc += conjugate_by_basis_map(a, bmap)
        count += 1
    return acc / count


def is_permutation_invariant(x: np.ndarray, shape: NetworkShape, tol: float = 1e-10) -> bool:
    """Invariance under all adjacent transpositions (they generate S_m)."""
    a = as_operator(x)
    for j in range(1, shape.m):
        bmap = basis_index_map(Permutation.transposition(shape.m, j, j + 1), shape)
        if np.max(np.abs(conjugate_by_basis_map(a, bmap) - a)) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

class KrausChannel:
    """A completely positive trace-preserving map in operator-sum form.

    Validates trace preservation ``sum_k A_k^dagger A_k = I`` to 1e-10 at
    construction; ``unital`` reports whether ``sum_k A_k A_k^dagger = I`` to
    the same tolerance.
    """

    __slots__ = ("shape", "ops")

    def __init__(self, ops: Sequence[np.ndarray], shape: NetworkShape):
        d = shape.total_dim
        mats = []
        for k, op in enumerate(ops):
            a = as_operator(op)
            if a.shape[0] != d:
                raise DimensionError(f"Kraus operator {k} has dim {a.shape[0]} != {d}")
            mats.append(a)
        if not mats:
            raise ValidationError("a channel needs at least one Kraus operator")
        total = sum(a.conj().T @ a for a in mats)
        defect = float(np.max(np.abs(total - np.eye(d))))
        if defect > KRAUS_TOL:
            raise ValidationError(
                f"not trace preserving: max |sum A^dagger A - I| = {defect:.3e}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "ops", tuple(mats))

    def __setattr__(self, *_):
        raise AttributeError("KrausChannel is immutable")

    @property
    def unital(self) -> bool:
        d = self.shape.total_dim
        total = sum(a @ a.conj().T for a in self.ops)
        return float(np.max(np.abs(total - np.eye(d)))) <= KRAUS_TOL

    def apply_matrix(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        for a in self.ops:
            out += a @ x @ a.conj().T
        return out

    def dual_matrix(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        for a in self.ops:
            out += a.conj().T @ x @ a
        return out


def apply_channel(channel: KrausChannel, rho: DensityOperator) -> DensityOperator:
    """Apply a channel to a state; the result is fully re-validated.

    An invariant violation in the output signals a malformed channel and
    surfaces as a ValidationError from the DensityOperator constructor.
    """
    if channel.shape != rho.shape:
        raise DimensionError("channel and state shapes differ")
    return DensityOperator(channel.apply_matrix(rho.matrix), rho.shape)


def dual_apply(channel: KrausChannel, observable) -> np.ndarray:
    """Heisenberg-picture action ``X -> sum_k A_k^dagger X A_k``.

    Satisfies the duality ``Tr[X E(rho)] = Tr[E^dagger(X) rho]`` and maps the
    identity to itself exactly when the channel is unital.
    """
    x = as_operator(observable)
    if x.shape[0] != channel.shape.total_dim:
        raise DimensionError("observable does not match the channel dimension")
    return channel.dual_matrix(x)


# ---------------------------------------------------------------------------
# random inputs
# ---------------------------------------------------------------------------

def random_density(shape: NetworkShape, seed: int) -> DensityOperator:
    """Ginibre-ensemble state: ``G G^dagger / Tr[G G^dagger]``."""
    g = complex_ginibre(make_rng(seed), shape.total_dim)
    gg = g @ g.conj().T
    return DensityOperator(gg / np.trace(gg).real, shape)


def random_hermitian(dim: int, seed: int) -> np.ndarray:
    """Hermitian matrix ``(G + G^dagger)/2`` with Ginibre ``G``."""
    g = complex_ginibre(make_rng(seed), dim)
    return (g + g.conj().T) / 2.0


# ---------------------------------------------------------------------------
# named example states
# ---------------------------------------------------------------------------

def basis_ket(digits: str, n: int) -> np.ndarray:
    """Computational basis ket from a digit string, site 1 leftmost."""
    vals = []
    for ch in digits:
        if not ch.isdigit() or int(ch) >= n:
            raise ValidationError(f"digit {ch!r} invalid for local dimension {n}")
        vals.append(int(ch))
    idx = 0
    for v in vals:
        idx = idx * n + v
    ket = np.zeros(n ** len(vals), dtype=np.complex128)
    ket[idx] = 1.0
    return ket


def _qubit3() -> NetworkShape:
    return NetworkShape(3, 2)


def _named_three_qubit(name: str) -> DensityOperator:
    shape = _qubit3()
    k0 = np.array([1.0, 0.0], dtype=np.complex128)
    k1 = np.array([0.0, 1.0], dtype=np.complex128)
    plus_unnorm = k0 + k1
    p_plus = np.outer(plus_unnorm, plus_unnorm)
    if name == "rhoA":
        mat = kron(I2, kron(p_plus, p_plus)) / 8.0
    elif name == "rhoB":
        bell_unnorm = np.kron(k0, k0) + np.kron(k1, k1)
        mat = kron(I2, np.outer(bell_unnorm, bell_unnorm)) / 4.0
    elif name == "rhoC":
        mat = np.eye(8, dtype=np.complex128) / 8.0
    elif name == "rhoD":
        e000 = basis_ket("000", 2)
        e111 = basis_ket("111", 2)
        mat = (np.outer(e000, e000) + np.outer(e111, e111)) / 2.0
    elif name == "rhoE":
        e000 = basis_ket("000", 2)
        mat = np.outer(e000, e000)
    elif name == "rhoF":
        ghz = basis_ket("000", 2) + basis_ket("111", 2)
        mat = np.outer(ghz, ghz) / 2.0
    else:
        raise ValidationError(f"unknown named state {name!r}")
    return DensityOperator(mat, shape)


def rho_g(p: float, m: int = 3, n: int = 2) -> DensityOperator:
    """``p |0...0><0...0| + (1-p) |n-1...><...|`` on m sites."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    shape = NetworkShape(m, n)
    lo = basis_ket("0" * m, n)
    hi = basis_ket(str(n - 1) * m, n)
    mat = p * np.outer(lo, lo) + (1.0 - p) * np.outer(hi, hi)
    return DensityOperator(mat, shape)


def named_state(spec: str, shape: NetworkShape | None = None) -> DensityOperator:
    """Build a state from a CLI-style specifier.

    Accepted forms: "rhoA".."rhoF" (three qubits), "rhoG" or "rhoG:<p>"
    (defaults p=0.3, three qubits unless ``shape`` overrides m), a digit
    string like "1010" (shape inferred as qubits unless given), or
    "random:<seed>" (requires ``shape``).
    """
    if spec in ("rhoA", "rhoB", "rhoC", "rhoD", "rhoE", "rhoF"):
        if shape is not None and (shape.m, shape.n) != (3, 2):
            raise ValidationError(f"{spec} is a three-qubit state, got shape {shape}")
        return _named_three_qubit(spec)
    if spec == "rhoG" or spec.startswith("rhoG:"):
        p = 0.3
        if ":" in spec:
            try:
                p = float(spec.split(":", 1)[1])
            except ValueError as exc:
                raise ValidationError(f"bad rhoG parameter in {spec!r}") from exc
        m = shape.m if shape is not None else 3
        n = shape.n if shape is not None else 2
        return rho_g(p, m=m, n=n)
    if spec.startswith("random:"):
        if shape is None:
            raise ValidationError("random:<seed> needs an explicit network shape")
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ValidationError(f"bad seed in {spec!r}") from exc
        return random_density(shape, seed)
    if spec and all(ch.isdigit() for ch in spec):
        n = shape.n if shape is not None else 2
        if shape is not None and len(spec) != shape.m:
            raise ValidationError(
                f"basis string {spec!r} has {len(spec)} digits but m={shape.m}")
        target = shape if shape is not None else NetworkShape(len(spec), n)
        return DensityOperator.from_ket(basis_ket(spec, n), target)
    raise ValidationError(f"unrecognized state specifier {spec!r}")


def parse_sigma(spec, n: int) -> Observable:
    """Local observable from a name ("x", "y", "z", "identity") or matrix."""
    if isinstance(spec, str):
        if spec not in PAULI:
            raise ValidationError(f"unknown observable name {spec!r}")
        if n != 2:
            raise ValidationError(f"named Pauli observables need n=2, got n={n}")
        return Observable(PAULI[spec])
    mat = as_operator(spec)
    if mat.shape[0] != n:
        raise DimensionError(f"observable dim {mat.shape[0]} != n={n}")
    return Observable(mat)
