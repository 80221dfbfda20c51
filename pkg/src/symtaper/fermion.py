"""Fermion-to-qubit maps (Jordan-Wigner and parity) for molecular Hamiltonians.

Ladder operators are expanded into Pauli terms held in numpy arrays of
``(x, z, coeff)`` so the O(M^4) two-body expansion runs vectorised.  Bitmasks
are ``uint64``, which caps the vectorised path at 64 modes.
"""
from __future__ import annotations

import enum
from itertools import product

import numpy as np

from .integrals import IntegralSet
from .pauli import DROP_TOL, PauliSum

MAX_MODES = 64


class MappingKind(enum.Enum):
    JORDAN_WIGNER = "jw"
    PARITY = "parity"

    @classmethod
    def parse(cls, value: "MappingKind | str") -> "MappingKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unsupported mapping kind {value!r}") from None


def ladder_terms(p: int, n_modes: int, kind: MappingKind | str, dagger: bool) -> list[tuple[int, int, complex]]:
    """Pauli terms ``(x, z, coeff)`` of ``a_p`` (or ``a_p^dagger`` with ``dagger``)."""
    kind = MappingKind.parse(kind)
    if not 0 <= p < n_modes:
        raise ValueError(f"mode {p} out of range for {n_modes} modes")
    bit = 1 << p
    im = -0.5j if dagger else 0.5j
    if kind is MappingKind.JORDAN_WIGNER:
        below = bit - 1
        return [(bit, below, 0.5), (bit, below | bit, im)]
    # parity: qubit j holds the parity of modes 0..j
    above = ((1 << n_modes) - 1) & ~((bit << 1) - 1)
    prev = bit >> 1
    return [(bit | above, prev, 0.5), (bit | above, bit, im)]


def _mul(x1, z1, c1, x2, z2, c2):
    """Vectorised product of Hermitian-label Pauli terms (Y convention)."""
    y1, ax1, az1 = x1 & z1, x1 & ~z1, z1 & ~x1
    y2, ax2, az2 = x2 & z2, x2 & ~z2, z2 & ~x2
    plus = np.bitwise_count((y1 & az2) | (ax1 & y2) | (az1 & ax2)).astype(np.int64)
    minus = np.bitwise_count((y1 & ax2) | (ax1 & az2) | (az1 & y2)).astype(np.int64)
    phase = np.array([1, 1j, -1, -1j])[(plus - minus) % 4]
    return x1 ^ x2, z1 ^ z2, c1 * c2 * phase


class _TermAccumulator:
    def __init__(self, n_modes: int):
        self.n_modes = n_modes
        self.chunks: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []

    def add(self, x, z, c):
        self.chunks.append((np.asarray(x, np.uint64), np.asarray(z, np.uint64), np.asarray(c, complex)))

    def to_pauli_sum(self, tol: float = DROP_TOL) -> PauliSum:
        if not self.chunks:
            return PauliSum(self.n_modes)
        x = np.concatenate([ch[0] for ch in self.chunks])
        z = np.concatenate([ch[1] for ch in self.chunks])
        c = np.concatenate([ch[2] for ch in self.chunks])
        keys = np.stack([x, z], axis=1)
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        inverse = inverse.ravel()
        re = np.bincount(inverse, weights=c.real, minlength=len(uniq))
        im = np.bincount(inverse, weights=c.imag, minlength=len(uniq))
        terms = {(int(ux), int(uz)): complex(r, i) for (ux, uz), r, i in zip(uniq, re, im)}
        return PauliSum(self.n_modes, terms, tol)


def _ladder_table(n_modes: int, kind: MappingKind):
    """Arrays ``[mode, term]`` for annihilators (index 0) and creators (index 1)."""
    xs = np.zeros((2, n_modes, 2), np.uint64)
    zs = np.zeros((2, n_modes, 2), np.uint64)
    cs = np.zeros((2, n_modes, 2), complex)
    for dag in (0, 1):
        for p in range(n_modes):
            for t, (x, z, c) in enumerate(ladder_terms(p, n_modes, kind, bool(dag))):
                xs[dag, p, t], zs[dag, p, t], cs[dag, p, t] = x, z, c
    return xs, zs, cs


def _operator_string(acc: _TermAccumulator, table, ops: list[tuple[int, np.ndarray]], coeff: np.ndarray):
    """Accumulate ``coeff * prod(ops)`` for index arrays; ``ops`` = [(dagger, modes)]."""
    xs, zs, cs = table
    for choice in product((0, 1), repeat=len(ops)):
        dag0, modes0 = ops[0]
        x, z, c = xs[dag0, modes0, choice[0]], zs[dag0, modes0, choice[0]], cs[dag0, modes0, choice[0]] * coeff
        for (dag, modes), t in zip(ops[1:], choice[1:]):
            x, z, c = _mul(x, z, c, xs[dag, modes, t], zs[dag, modes, t], cs[dag, modes, t])
        acc.add(x, z, c)


def map_hamiltonian(ints: IntegralSet, kind: MappingKind | str = MappingKind.JORDAN_WIGNER,
                    tol: float = DROP_TOL) -> PauliSum:
    """Qubit image of the second-quantised Hamiltonian, core energy included."""
    kind = MappingKind.parse(kind)
    m = ints.n_modes
    if m > MAX_MODES:
        raise ValueError(f"at most {MAX_MODES} modes supported")
    table = _ladder_table(m, kind)
    acc = _TermAccumulator(m)
    acc.add([0], [0], [ints.e_core])

    i, j = np.nonzero(np.abs(ints.h1) > 0)
    if i.size:
        _operator_string(acc, table, [(1, i), (0, j)], ints.h1[i, j])

    idx = np.nonzero(np.abs(ints.h2) > 0)
    if idx[0].size:
        i, j, k, l = idx
        _operator_string(acc, table, [(1, i), (1, j), (0, k), (0, l)], 0.5 * ints.h2[i, j, k, l])

    h = acc.to_pauli_sum(tol)
    if not h.is_hermitian(1e-10):
        raise ValueError("mapped Hamiltonian has non-real coefficients")
    return h.real()


def map_excitation(p: int, q: int, n_modes: int, kind: MappingKind | str = MappingKind.JORDAN_WIGNER) -> PauliSum:
    """Image of ``a+_p a_q + a+_q a_p`` (``p != q``) or ``a+_p a_p`` (``p == q``)."""
    kind = MappingKind.parse(kind)
    for t in (p, q):
        if not 0 <= t < n_modes:
            raise ValueError(f"mode {t} out of range for {n_modes} modes")
    table = _ladder_table(n_modes, kind)
    acc = _TermAccumulator(n_modes)
    pairs = [(p, q)] if p == q else [(p, q), (q, p)]
    for a, b in pairs:
        _operator_string(acc, table, [(1, np.array([a])), (0, np.array([b]))], np.array([1.0]))
    return acc.to_pauli_sum().real()


def ladder_operator(p: int, n_modes: int, kind: MappingKind | str = MappingKind.JORDAN_WIGNER,
                    dagger: bool = False) -> PauliSum:
    terms = {(x, z): c for x, z, c in ladder_terms(p, n_modes, kind, dagger)}
    return PauliSum(n_modes, terms)


def number_operator(n_modes: int, modes=None, kind: MappingKind | str = MappingKind.JORDAN_WIGNER) -> PauliSum:
    """Image of ``sum_p n_p`` over ``modes`` (all modes by default)."""
    total = PauliSum(n_modes)
    for p in range(n_modes) if modes is None else modes:
        total = total + map_excitation(p, p, n_modes, kind)
    return total


def hamiltonian_action_check(ints: IntegralSet, max_modes: int = 6) -> dict:
    """Dense check of the canonical anticommutation relations of the JW ladder images.

    Works on the first ``min(M, max_modes)`` modes and returns the largest
    deviation of ``{a_i, a_j}`` from 0 and ``{a_i, a_j^+}`` from ``delta_ij``.
    """
    m = min(ints.n_modes, max_modes)
    ann = [ladder_operator(p, m).to_matrix() for p in range(m)]
    cre = [ladder_operator(p, m, dagger=True).to_matrix() for p in range(m)]
    eye = np.eye(1 << m)
    worst = 0.0
    for i in range(m):
        for j in range(m):
            worst = max(worst, np.abs(ann[i] @ ann[j] + ann[j] @ ann[i]).max())
            target = eye if i == j else 0.0
            worst = max(worst, np.abs(ann[i] @ cre[j] + cre[j] @ ann[i] - target).max())
    return {"modes_checked": m, "max_deviation": float(worst)}
