"""Point-group operations as signed permutations of atom-centred orbitals.

A :class:`SignedPermutation` ``R`` has ``R[perm[i], i] = signs[i]``: orbital
``i`` is carried onto ``signs[i] * orbital perm[i]``.  Commuting involutions
are diagonalised together by a real orthogonal ``V``; in the rotated orbital
basis each one becomes a product of mode parities, i.e. a Pauli-Z string
under Jordan-Wigner.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fermion import MappingKind, map_excitation
from .integrals import IntegralSet
from .pauli import PauliString, PauliSum, commutes

#: Max-abs tolerance for tensor invariance under a candidate symmetry.
INVARIANCE_TOL = 1e-8


class SymmetryError(ValueError):
    """A supplied operation is malformed or not a symmetry of the Hamiltonian."""


@dataclass(frozen=True)
class SignedPermutation:
    perm: tuple[int, ...]
    signs: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        signs = tuple(int(s) for s in self.signs)
        if sorted(perm) != list(range(len(perm))):
            raise SymmetryError(f"{self.name or 'operation'}: perm is not a bijection")
        if len(signs) != len(perm) or any(s not in (1, -1) for s in signs):
            raise SymmetryError(f"{self.name or 'operation'}: signs must be +1/-1 per column")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @property
    def size(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, size: int, name: str = "E") -> "SignedPermutation":
        return cls(tuple(range(size)), (1,) * size, name)

    @classmethod
    def from_matrix(cls, r: np.ndarray, name: str = "") -> "SignedPermutation":
        r = np.asarray(r)
        n = r.shape[0]
        perm, signs = [], []
        for i in range(n):
            rows = np.nonzero(np.abs(r[:, i]) > 0.5)[0]
            if len(rows) != 1 or abs(abs(r[rows[0], i]) - 1) > 1e-12 or np.abs(r[:, i]).sum() - 1 > 1e-12:
                raise SymmetryError("matrix is not a signed permutation")
            perm.append(int(rows[0]))
            signs.append(int(np.sign(r[rows[0], i])))
        return cls(tuple(perm), tuple(signs), name)

    def matrix(self) -> np.ndarray:
        r = np.zeros((self.size, self.size))
        r[list(self.perm), range(self.size)] = self.signs
        return r

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """Matrix product ``self @ other``."""
        return SignedPermutation.from_matrix(self.matrix() @ other.matrix())

    def is_involution(self) -> bool:
        return all(self.perm[self.perm[i]] == i and self.signs[i] * self.signs[self.perm[i]] == 1
                   for i in range(self.size))

    def commutes_with(self, other: "SignedPermutation") -> bool:
        a, b = self.matrix().astype(int), other.matrix().astype(int)
        return bool(np.array_equal(a @ b, b @ a))

    def spin_doubled(self) -> "SignedPermutation":
        """Same action on the alpha and beta blocks of a blocked spin-orbital basis."""
        n = self.size
        return SignedPermutation(self.perm + tuple(p + n for p in self.perm), self.signs * 2, self.name)

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(self.size):
            if start in seen:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self.perm[i]
            out.append(tuple(cyc))
        return out


@dataclass(frozen=True)
class OrbitalRotation:
    v: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("rotation must be square")
        if np.abs(v.T @ v - np.eye(v.shape[0])).max() > 1e-12:
            raise ValueError("rotation is not orthogonal")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def size(self) -> int:
        return self.v.shape[0]


@dataclass(frozen=True)
class ZSymmetry:
    support: frozenset[int]
    n_modes: int
    name: str = ""

    def __post_init__(self):
        if not self.support:
            raise SymmetryError("a Z symmetry needs a nonempty support")
        if any(not 0 <= p < self.n_modes for p in self.support):
            raise SymmetryError("support index out of range")
        object.__setattr__(self, "support", frozenset(int(p) for p in self.support))

    @property
    def pauli(self) -> PauliString:
        return PauliString.z_string(self.n_modes, self.support)


# --------------------------------------------------------------------------------------
# symmetry input file

def load_symmetries(source: str | os.PathLike | dict) -> tuple[int, list[SignedPermutation]]:
    """Read ``{"n_spatial": int, "operations": [{"name", "perm", "signs"}]}``."""
    if isinstance(source, dict):
        data = source
    else:
        with open(source) as f:
            data = json.load(f)
    try:
        n = int(data["n_spatial"])
        ops = []
        for k, op in enumerate(data["operations"]):
            perm = op["perm"]
            signs = op.get("signs", [1] * len(perm))
            if len(perm) != n:
                raise SymmetryError(f"operation {k}: perm length {len(perm)} != n_spatial {n}")
            ops.append(SignedPermutation(tuple(perm), tuple(signs), op.get("name", f"op{k}")))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SymmetryError):
            raise
        raise SymmetryError(f"malformed symmetry file: {exc}") from None
    return n, ops


# --------------------------------------------------------------------------------------
# operations

def _as_spin(r: SignedPermutation, ints: IntegralSet) -> SignedPermutation:
    if r.size == ints.n_modes:
        return r
    if r.size == ints.n_spatial:
        return r.spin_doubled()
    raise SymmetryError(f"operation of size {r.size} does not match {ints.n_spatial} orbitals")


def transform_tensors(ints: IntegralSet, r: SignedPermutation) -> tuple[np.ndarray, np.ndarray]:
    """``R^T h1 R`` and the matching two-body relabelling, by index gathering."""
    r = _as_spin(r, ints)
    pi = np.array(r.perm)
    s = np.array(r.signs, dtype=float)
    h1 = s[:, None] * s[None, :] * ints.h1[np.ix_(pi, pi)]
    sign4 = np.einsum("i,j,k,l->ijkl", s, s, s, s)
    h2 = sign4 * ints.h2[np.ix_(pi, pi, pi, pi)]
    return h1, h2


def check_invariance(ints: IntegralSet, r: SignedPermutation,
                     tol: float = INVARIANCE_TOL) -> tuple[bool, float]:
    """Whether the one- and two-body tensors are unchanged by ``r``; also the max deviation.

    ``r`` may act on spatial orbitals (it is then spin-doubled) or spin-orbitals.
    """
    h1, h2 = transform_tensors(ints, r)
    dev = max(float(np.abs(h1 - ints.h1).max(initial=0)), float(np.abs(h2 - ints.h2).max(initial=0)))
    return dev <= tol, dev


def _swap_operator(p: int, q: int, n: int, kind) -> PauliSum:
    # I - n_p - n_q + a+_p a_q + a+_q a_p
    return (PauliSum.identity(n) - map_excitation(p, p, n, kind) - map_excitation(q, q, n, kind)
            + map_excitation(p, q, n, kind))


def _sign_operator(p: int, n: int, kind) -> PauliSum:
    # 1 - 2 n_p
    return PauliSum.identity(n) - map_excitation(p, p, n, kind) * 2


def second_quantized_permutation(r: SignedPermutation,
                                 kind: MappingKind | str = MappingKind.JORDAN_WIGNER) -> PauliSum:
    """Fock-space unitary ``R_hat`` with ``R_hat a_p R_hat^+ = sum_q R[p, q] a_q``.

    Built as a product of mode-swap operators and ``1 - 2 n_p`` sign operators.
    """
    n = r.size
    op = PauliSum.identity(n)
    # R = P D with D = diag(signs); the hat map reverses products, so R_hat = D_hat P_hat
    for p, s in enumerate(r.signs):
        if s == -1:
            op = op.dot(_sign_operator(p, n, kind))
    # each cycle (c0 c1 ... ck) as transpositions (c0 c1), (c0 c2), ..., (c0 ck)
    for cyc in r.cycles():
        for b in cyc[1:]:
            op = op.dot(_swap_operator(cyc[0], b, n, kind))
    return op


def select_commuting_involutions(candidates: Sequence[SignedPermutation]) -> tuple[list[SignedPermutation], list[str]]:
    """Greedy maximal set of pairwise-commuting involutions, in input order.

    Returns the retained operations and a note for every rejected one.
    """
    kept: list[SignedPermutation] = []
    notes: list[str] = []
    for r in candidates:
        label = r.name or "operation"
        if not r.is_involution():
            notes.append(f"{label}: dropped, R^2 != I")
            continue
        clash = next((k for k in kept if not r.commutes_with(k)), None)
        if clash is not None:
            notes.append(f"{label}: dropped, does not commute with {clash.name or 'a retained operation'}")
            continue
        kept.append(r)
    return kept, notes


def _cycle_basis(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenbasis of a signed-permutation involution given as an integer matrix."""
    n = r.shape[0]
    w = np.zeros((n, n))
    eig = np.zeros(n, dtype=int)
    done = set()
    h = 1 / math.sqrt(2)
    for p in range(n):
        if p in done:
            continue
        q = int(np.nonzero(r[:, p])[0][0])
        s = int(r[q, p])
        if q == p:
            w[p, p] = 1.0
            eig[p] = s
            done.add(p)
            continue
        # R e_p = s e_q, R e_q = s e_p: (e_p + e_q)/sqrt2 has eigenvalue s and sits at p
        w[p, p], w[q, p] = h, h
        w[p, q], w[q, q] = h, -h
        eig[p], eig[q] = s, -s
        done.update((p, q))
    return w, eig


def simultaneous_diagonalize(ops: Sequence[SignedPermutation]) -> tuple[OrbitalRotation, list[ZSymmetry]]:
    """Orthogonal ``V`` with ``V^T R V`` diagonal (+-1) for every ``R`` in ``ops``.

    Operations are processed in order; each one, written in the basis built so
    far, is again a signed permutation that only pairs vectors inside a common
    eigenspace of the earlier ones.  Its 2-cycles are split into ``+``/``-``
    combinations, so every entry of ``V`` is 0 or +-2**(-k/2).
    """
    if not ops:
        raise SymmetryError("no operations to diagonalise")
    n = ops[0].size
    for a in ops:
        if a.size != n:
            raise SymmetryError("operations differ in size")
        if not a.is_involution():
            raise SymmetryError(f"{a.name or 'operation'} is not an involution")
    for i, a in enumerate(ops):
        for b in ops[i + 1:]:
            if not a.commutes_with(b):
                raise SymmetryError(f"{a.name} and {b.name} do not commute")
    v = np.eye(n)
    for op in ops:
        rotated = v.T @ op.matrix() @ v
        rounded = np.rint(rotated)
        if np.abs(rotated - rounded).max() > 1e-9:
            raise SymmetryError("operation is not a signed permutation in the current basis")
        w, _ = _cycle_basis(rounded.astype(int))
        v = v @ w
    syms = []
    for op in ops:
        diag = np.diag(v.T @ op.matrix() @ v)
        support = frozenset(int(p) for p in np.nonzero(diag < 0)[0])
        if support:
            syms.append(ZSymmetry(support, n, op.name))
    return OrbitalRotation(v), syms


def diagonal_values(v: OrbitalRotation, r: SignedPermutation) -> np.ndarray:
    return v.v.T @ r.matrix() @ v.v


def rotate_integrals(ints: IntegralSet, v: OrbitalRotation) -> IntegralSet:
    """Integrals in the orbitals ``phi'_p = sum_j V[j, p] phi_j``.

    ``V`` may act on spatial orbitals (applied to both spin blocks) or on the
    full spin-orbital space.
    """
    n, m = ints.n_spatial, ints.n_modes
    if v.size == n:
        big = np.zeros((m, m))
        big[:n, :n] = v.v
        big[n:, n:] = v.v
    elif v.size == m:
        big = v.v
    else:
        raise ValueError(f"rotation size {v.size} does not match {n} orbitals")
    h1 = big.T @ ints.h1 @ big
    h2 = np.einsum("ijkl,ia,jb,kc,ld->abcd", ints.h2, big, big, big, big, optimize=True)
    eri = h1s = None
    if ints.eri_spatial is not None and v.size == n:
        h1s = v.v.T @ ints.h1_spatial @ v.v
        eri = np.einsum("pqrs,pa,qb,rc,sd->abcd", ints.eri_spatial, v.v, v.v, v.v, v.v, optimize=True)
    return IntegralSet(n, h1, h2, ints.e_core, ints.n_alpha, ints.n_beta, eri_spatial=eri, h1_spatial=h1s)


def verify_z_symmetry(h_rotated: PauliSum, s: ZSymmetry) -> bool:
    """True iff every term of ``h_rotated`` commutes with the Z string of ``s``."""
    if h_rotated.n_qubits != s.n_modes:
        raise ValueError("qubit count mismatch")
    z = s.pauli
    return all(commutes(p, z) for p in h_rotated.strings())
