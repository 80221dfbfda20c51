"""Exact eigenvalues of Pauli sums at desk scale.

Small operators are diagonalised densely.  Larger ones go through a
matrix-free operator: terms sharing an X mask are merged into one diagonal
vector, so ``H @ psi`` is one multiply and one bit-flip per distinct mask.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from .pauli import PauliSum

DENSE_LIMIT = 14
ITERATIVE_LIMIT = 20
MAX_ITERATIONS = 2000
RESIDUAL_TOL = 1e-9

_IPOW = np.array([1, 1j, -1, -1j])


class SolverLimitError(ValueError):
    """The operator is too large for the requested solver."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass
class SpectrumResult:
    min_eigenvalue: float
    eigenvalues: np.ndarray | None = None
    iterations: int = 0
    residual: float = 0.0
    method: str = "dense"
    n_qubits: int = 0
    extra: dict = field(default_factory=dict)


def _parity(idx: np.ndarray, mask: int) -> np.ndarray:
    return np.bitwise_count(idx & np.uint64(mask)) & np.uint8(1)


class PauliOperator:
    """Matrix-free ``H @ psi`` for a :class:`PauliSum`."""

    def __init__(self, h: PauliSum):
        self.n_qubits = h.n_qubits
        self.dim = 1 << h.n_qubits
        groups: dict[int, list[tuple[int, complex]]] = {}
        for (x, z), c in h.items():
            ny = bin(x & z).count("1")
            groups.setdefault(x, []).append((z, c * _IPOW[ny % 4]))
        self.is_real = all(abs(w.imag) < 1e-14 for terms in groups.values() for _, w in terms)
        dtype = float if self.is_real else complex
        idx = np.arange(self.dim, dtype=np.uint64)
        self.masks = sorted(groups)
        self.diagonals = []
        for x in self.masks:
            d = np.zeros(self.dim, dtype=dtype)
            for z, w in groups[x]:
                sign = 1.0 - 2.0 * _parity(idx, z)
                d += (w.real if self.is_real else w) * sign
            self.diagonals.append(d)
        self._flip_axes = [self._axes(x) for x in self.masks]

    @property
    def dtype(self):
        return np.float64 if self.is_real else np.complex128

    def _axes(self, x: int) -> tuple[int, ...]:
        # C-order reshape puts bit n-1 on axis 0
        n = self.n_qubits
        return tuple(n - 1 - q for q in range(n) if (x >> q) & 1)

    def matvec(self, psi: np.ndarray) -> np.ndarray:
        psi = np.asarray(psi)
        if psi.shape[0] != self.dim:
            raise ValueError(f"state length {psi.shape[0]} does not match 2**{self.n_qubits}")
        out_dtype = np.result_type(psi.dtype, self.dtype)
        if psi.ndim == 2:
            return np.stack([self.matvec(col) for col in psi.T], axis=1)
        y = np.zeros(self.dim, dtype=out_dtype)
        shape = (2,) * self.n_qubits
        for d, axes in zip(self.diagonals, self._flip_axes):
            v = d * psi
            if axes:
                v = np.flip(v.reshape(shape), axis=axes).reshape(-1)
            y += v
        return y

    __call__ = matvec

    def to_matrix(self) -> np.ndarray:
        idx = np.arange(self.dim)
        mat = np.zeros((self.dim, self.dim), dtype=self.dtype)
        for x, d in zip(self.masks, self.diagonals):
            mat[idx ^ x, idx] += d
        return mat

    def as_linear_operator(self) -> spla.LinearOperator:
        return spla.LinearOperator((self.dim, self.dim), matvec=self.matvec, dtype=self.dtype)


def apply_pauli_sum(h: PauliSum, state: np.ndarray) -> np.ndarray:
    """``H @ state`` without materialising the matrix."""
    state = np.asarray(state)
    if state.shape[0] != 1 << h.n_qubits:
        raise ValueError("state length does not match the qubit count")
    return PauliOperator(h).matvec(state)


def dense_spectrum(h: PauliSum, limit: int = DENSE_LIMIT) -> SpectrumResult:
    """Full ascending spectrum by dense Hermitian diagonalisation."""
    if h.n_qubits > limit:
        raise SolverLimitError(f"{h.n_qubits} qubits exceeds the dense limit of {limit}")
    if h.n_qubits == 0:
        value = sum(c for _, c in h.items()).real if len(h) else 0.0
        return SpectrumResult(float(value), np.array([value]), n_qubits=0)
    mat = PauliOperator(h).to_matrix()
    w = np.linalg.eigvalsh(mat)
    return SpectrumResult(float(w[0]), w, method="dense", n_qubits=h.n_qubits)


def min_eigenvalue_iterative(h: PauliSum, seed: int = 0, limit: int = ITERATIVE_LIMIT,
                             max_iterations: int = MAX_ITERATIONS,
                             residual_tol: float = RESIDUAL_TOL) -> SpectrumResult:
    """Lowest eigenvalue by implicitly restarted Lanczos on the matrix-free operator.

    The start vector is drawn from ``numpy.random.default_rng(seed)``.
    """
    n = h.n_qubits
    if n > limit:
        raise SolverLimitError(f"{n} qubits exceeds the iterative limit of {limit}")
    if n <= 3:
        # ARPACK needs a Krylov space larger than the dimension allows here
        res = dense_spectrum(h)
        return SpectrumResult(res.min_eigenvalue, None, 0, 0.0, "dense-small", n)
    op = PauliOperator(h)
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(op.dim)
    if not op.is_real:
        v0 = v0 + 1j * rng.standard_normal(op.dim)
    counter = {"n": 0}

    def counted(v):
        counter["n"] += 1
        return op.matvec(v)

    lin = spla.LinearOperator((op.dim, op.dim), matvec=counted, dtype=op.dtype)
    try:
        w, vecs = spla.eigsh(lin, k=1, which="SA", v0=v0, tol=0, maxiter=max_iterations,
                             ncv=min(op.dim - 1, 40))
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos did not converge in {max_iterations} restarts",
                               float("nan")) from exc
    x = vecs[:, 0]
    lam = float(w[0])
    residual = float(np.linalg.norm(op.matvec(x) - lam * x) / np.linalg.norm(x))
    if residual > residual_tol:
        raise ConvergenceError(f"residual {residual:.3e} above {residual_tol:.0e}", residual)
    return SpectrumResult(lam, None, counter["n"], residual, "lanczos", n)


def min_eigenvalue(h: PauliSum, seed: int = 0, dense_cutoff: int = 10) -> SpectrumResult:
    """Dense below ``dense_cutoff`` qubits, iterative above."""
    if h.n_qubits <= dense_cutoff:
        return dense_spectrum(h)
    return min_eigenvalue_iterative(h, seed=seed)
