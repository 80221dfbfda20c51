"""Linear algebra over GF(2) for Pauli symmetry discovery.

Binary matrices are ``uint8`` numpy arrays holding 0/1.  Elimination always
takes the leftmost available pivot and processes rows in input order, so every
result here is deterministic for a given input.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli import PauliString, PauliSum, commutes, symplectic_product


@dataclass(frozen=True)
class BinMatrix:
    bits: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("BinMatrix needs a 2-d array")
        if np.any(arr > 1):
            raise ValueError("BinMatrix entries must be 0 or 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    def rank(self) -> int:
        return len(rref(self.bits)[1])

    def __matmul__(self, v) -> np.ndarray:
        return (self.bits.astype(np.int64) @ np.asarray(v, dtype=np.int64)) % 2


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(2) and the list of pivot columns."""
    a = np.array(m, dtype=np.uint8, copy=True) & 1
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        hits = np.nonzero(a[row:, col])[0]
        if hits.size == 0:
            continue
        src = row + hits[0]
        if src != row:
            a[[row, src]] = a[[src, row]]
        mask = a[:, col].copy()
        mask[row] = 0
        if mask.any():
            a[mask.astype(bool)] ^= a[row]
        pivots.append(col)
        row += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    return len(rref(m)[1])


def build_check_matrix(h: PauliSum) -> BinMatrix:
    """Check matrix with one ``(a_z | a_x)`` row per Hamiltonian term.

    Rows follow ``h.sorted_terms()`` so the matrix is reproducible.
    """
    if len(h) == 0:
        raise ValueError("empty Hamiltonian has no check matrix")
    n = h.n_qubits
    rows = []
    for p, _ in h.sorted_terms():
        s = p.symplectic()
        rows.append(np.concatenate([s[n:], s[:n]]))
    return BinMatrix(np.array(rows, dtype=np.uint8))


def kernel(m: BinMatrix | np.ndarray) -> list[np.ndarray]:
    """Basis of the right nullspace ``{v : m v = 0}`` over GF(2)."""
    bits = m.bits if isinstance(m, BinMatrix) else np.asarray(m, dtype=np.uint8)
    n_cols = bits.shape[1]
    reduced, pivots = rref(bits)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(n_cols, dtype=np.uint8)
        v[f] = 1
        for r, p in enumerate(pivots):
            v[p] = reduced[r, f]
        basis.append(v)
    return basis


def string_from_symplectic(v: Sequence[int], n_qubits: int) -> PauliString:
    """Read a length ``2n`` vector as ``(x | z)``."""
    x = z = 0
    for q in range(n_qubits):
        if v[q]:
            x |= 1 << q
        if v[n_qubits + q]:
            z |= 1 << q
    return PauliString(n_qubits, x, z)


def _zx_rows(strings: Sequence[PauliString]) -> np.ndarray:
    if not strings:
        return np.zeros((0, 0), dtype=np.uint8)
    n = strings[0].n_qubits
    return np.array([np.concatenate([s.symplectic()[n:], s.symplectic()[:n]]) for s in strings],
                    dtype=np.uint8)


def canonical_generators(strings: Sequence[PauliString]) -> list[PauliString]:
    """Independent, phase-free basis of the span of ``strings`` in RREF.

    Rows are reduced in ``(z | x)`` column order so Z-type generators get their
    pivots on Z bits; generators come out sorted by pivot column.
    """
    if not strings:
        return []
    n = strings[0].n_qubits
    reduced, pivots = rref(_zx_rows(strings))
    out = []
    for r in range(len(pivots)):
        z_part, x_part = reduced[r, :n], reduced[r, n:]
        out.append(string_from_symplectic(np.concatenate([x_part, z_part]), n))
    return out


def symplectic_gram_schmidt(strings: Sequence[PauliString]) -> tuple[list[PauliString], list[tuple[PauliString, PauliString]]]:
    """Split the span of ``strings`` into an isotropic part and hyperbolic pairs.

    Returns ``(center, pairs)`` where each pair anticommutes internally and
    commutes with everything else, and ``center`` commutes with the whole span.
    """
    pool = [s for s in strings if not s.is_identity()]
    center: list[PauliString] = []
    pairs: list[tuple[PauliString, PauliString]] = []
    while pool:
        a = pool.pop(0)
        partner_idx = next((i for i, b in enumerate(pool) if symplectic_product(a, b)), None)
        if partner_idx is None:
            center.append(a)
            continue
        b = pool.pop(partner_idx)
        pairs.append((a, b))
        reduced = []
        for c in pool:
            # project c onto the symplectic complement of span{a, b}
            if symplectic_product(c, b):
                c = _xor(c, a)
            if symplectic_product(c, a):
                c = _xor(c, b)
            if not c.is_identity():
                reduced.append(c)
        pool = reduced
    return center, pairs


def _xor(a: PauliString, b: PauliString) -> PauliString:
    return PauliString(a.n_qubits, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits)


def extract_generators(kernel_basis: Sequence[np.ndarray], h: PauliSum) -> list[PauliString]:
    """Independent commuting symmetry generators from a check-matrix kernel.

    Kernel vectors are read as ``(a_x | a_z)``.  When the commutant is not
    abelian, one member of every anticommuting pair is kept, which yields a
    maximal abelian subgroup.  The result is canonicalised to RREF.
    """
    n = h.n_qubits
    candidates = [string_from_symplectic(v, n) for v in kernel_basis]
    terms = h.strings()
    for c in candidates:
        if not all(commutes(c, t) for t in terms):
            raise ValueError(f"kernel vector {c.label} does not commute with the Hamiltonian")
    center, pairs = symplectic_gram_schmidt(candidates)
    chosen = canonical_generators(center + [a for a, _ in pairs])
    for i, g in enumerate(chosen):
        if not all(commutes(g, t) for t in terms):
            raise ValueError(f"generator {g.label} does not commute with the Hamiltonian")
        if not all(commutes(g, o) for o in chosen[:i]):
            raise ValueError("generators do not commute with each other")
    return chosen


def find_symmetries(h: PauliSum) -> list[PauliString]:
    """Kernel route end to end: check matrix, nullspace, generators."""
    return extract_generators(kernel(build_check_matrix(h)), h)


def in_span(target: PauliString, basis: Sequence[PauliString]) -> bool:
    """Whether ``target``'s symplectic vector lies in the GF(2) span of ``basis``."""
    if not basis:
        return target.is_identity()
    return rank(_zx_rows(list(basis) + [target])) == rank(_zx_rows(list(basis)))
