"""Symplectic Pauli strings and weighted Pauli sums.

A Pauli string on ``n`` qubits is stored as two integer bitmasks ``x`` and
``z`` (bit ``q`` is qubit ``q``) together with a quarter-phase exponent, so that
the operator is ``i**phase * P_0 ⊗ ... ⊗ P_{n-1}`` with ``P = I, X, Z, Y`` for
``(x, z) = (0, 0), (1, 0), (0, 1), (1, 1)``.  The bits ``(1, 1)`` denote the
Hermitian ``Y``, which keeps labels and bitmasks in one-to-one correspondence.

Python integers are arbitrary precision, so the same representation covers any
qubit count and the text serialization never depends on a word width.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, TextIO

import numpy as np

#: Coefficients with magnitude below this are dropped on every simplification.
DROP_TOL = 1e-12

_PHASES = (1, 1j, -1, -1j)


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Quarter-phase exponent picked up by ``P(x1, z1) @ P(x2, z2)`` (Y convention)."""
    y1, ax1, az1 = x1 & z1, x1 & ~z1, z1 & ~x1
    y2, ax2, az2 = x2 & z2, x2 & ~z2, z2 & ~x2
    plus = (y1 & az2) | (ax1 & y2) | (az1 & ax2)
    minus = (y1 & ax2) | (ax1 & az2) | (az1 & y2)
    return (_popcount(plus) - _popcount(minus)) % 4


@dataclass(frozen=True)
class PauliString:
    """Signed Pauli operator ``i**phase_exp * P(x_bits, z_bits)``."""

    n_qubits: int
    x_bits: int = 0
    z_bits: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise ValueError("bitmask wider than n_qubits")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_label(cls, label: str, phase_exp: int = 0) -> "PauliString":
        """Parse a label such as ``"XIZY"``; qubit 0 is the leftmost character."""
        x = z = 0
        for q, ch in enumerate(label.upper()):
            if ch in "XY":
                x |= 1 << q
            if ch in "ZY":
                z |= 1 << q
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli label character {ch!r}")
        return cls(len(label), x, z, phase_exp)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, kind: str) -> "PauliString":
        """Single-qubit ``kind`` in {"X", "Y", "Z"} acting on ``qubit``."""
        label = ["I"] * n_qubits
        label[qubit] = kind
        return cls.from_label("".join(label))

    @classmethod
    def z_string(cls, n_qubits: int, support: Iterable[int]) -> "PauliString":
        z = 0
        for q in support:
            z |= 1 << q
        return cls(n_qubits, 0, z)

    @property
    def key(self) -> tuple[int, int]:
        return (self.x_bits, self.z_bits)

    @property
    def phase(self) -> complex:
        return _PHASES[self.phase_exp]

    @property
    def label(self) -> str:
        chars = []
        for q in range(self.n_qubits):
            chars.append("IXZY"[((self.x_bits >> q) & 1) | (((self.z_bits >> q) & 1) << 1)])
        return "".join(chars)

    @property
    def weight(self) -> int:
        return _popcount(self.x_bits | self.z_bits)

    @property
    def support(self) -> list[int]:
        mask = self.x_bits | self.z_bits
        return [q for q in range(self.n_qubits) if (mask >> q) & 1]

    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def is_hermitian(self) -> bool:
        return self.phase_exp in (0, 2)

    def symplectic(self) -> np.ndarray:
        """Binary row ``(x | z)`` of length ``2 n``."""
        n = self.n_qubits
        bits = [(self.x_bits >> q) & 1 for q in range(n)] + [(self.z_bits >> q) & 1 for q in range(n)]
        return np.array(bits, dtype=np.uint8)

    def on_qubit(self, q: int) -> str:
        return self.label[q]

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, self.phase_exp + 2)

    def __str__(self) -> str:
        return ("", "i", "-", "-i")[self.phase_exp] + self.label

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix; basis index bit ``q`` is qubit ``q``."""
        dim = 1 << self.n_qubits
        idx = np.arange(dim)
        sign = (-1.0) ** _parity_array(idx & self.z_bits)
        ny = _popcount(self.x_bits & self.z_bits)
        mat = np.zeros((dim, dim), dtype=complex)
        mat[idx ^ self.x_bits, idx] = _PHASES[(self.phase_exp + ny) % 4] * sign
        return mat


def _parity_array(a: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(a.astype(np.uint64)) & 1).astype(np.int64)


def _check_size(a, b):
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Product ``a @ b`` with exact quarter-phase bookkeeping."""
    _check_size(a, b)
    k = a.phase_exp + b.phase_exp + _product_phase(a.x_bits, a.z_bits, b.x_bits, b.z_bits)
    return PauliString(a.n_qubits, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits, k)


def symplectic_product(a: PauliString, b: PauliString) -> int:
    return (_popcount(a.x_bits & b.z_bits) + _popcount(a.z_bits & b.x_bits)) & 1


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff ``a`` and ``b`` commute, i.e. ``a_x.b_z + a_z.b_x = 0 (mod 2)``."""
    _check_size(a, b)
    return symplectic_product(a, b) == 0


class PauliSum:
    """Immutable complex-weighted sum of phase-free Pauli strings.

    Terms are keyed by ``(x_bits, z_bits)``; any phase of a contributing
    :class:`PauliString` is folded into its coefficient.
    """

    __slots__ = ("n_qubits", "_terms")

    def __init__(self, n_qubits: int, terms: Mapping[tuple[int, int], complex] | None = None,
                 tol: float = DROP_TOL):
        if n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        self.n_qubits = n_qubits
        limit = 1 << n_qubits
        clean = {}
        for (x, z), c in (terms or {}).items():
            if not (0 <= x < limit and 0 <= z < limit):
                raise ValueError("term wider than n_qubits")
            if abs(c) >= tol:
                clean[(x, z)] = complex(c)
        self._terms = clean

    # construction -----------------------------------------------------------------
    @classmethod
    def from_strings(cls, n_qubits: int, items: Iterable[tuple[complex, PauliString]],
                     tol: float = DROP_TOL) -> "PauliSum":
        acc: dict[tuple[int, int], complex] = {}
        for c, p in items:
            if p.n_qubits != n_qubits:
                raise ValueError("term qubit count mismatch")
            acc[p.key] = acc.get(p.key, 0) + c * p.phase
        return cls(n_qubits, acc, tol)

    @classmethod
    def from_labels(cls, items: Mapping[str, complex] | Iterable[tuple[str, complex]]) -> "PauliSum":
        pairs = list(items.items()) if isinstance(items, Mapping) else list(items)
        if not pairs:
            raise ValueError("cannot infer qubit count from an empty label list")
        n = len(pairs[0][0])
        return cls.from_strings(n, ((c, PauliString.from_label(lab)) for lab, c in pairs))

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, {(0, 0): coeff})

    @classmethod
    def from_string(cls, p: PauliString, coeff: complex = 1.0) -> "PauliSum":
        return cls(p.n_qubits, {p.key: coeff * p.phase})

    # mapping-like access ------------------------------------------------------------
    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[PauliString, complex]]:
        for (x, z), c in self._terms.items():
            yield PauliString(self.n_qubits, x, z), c

    def items(self):
        return self._terms.items()

    def coeff(self, p: PauliString | str) -> complex:
        if isinstance(p, str):
            p = PauliString.from_label(p)
        return self._terms.get(p.key, 0j) * p.phase.conjugate()

    def strings(self) -> list[PauliString]:
        return [p for p, _ in self]

    def sorted_terms(self) -> list[tuple[PauliString, complex]]:
        return sorted(self, key=lambda t: t[0].label)

    # algebra ------------------------------------------------------------------------
    def _compatible(self, other: "PauliSum"):
        if self.n_qubits != other.n_qubits:
            raise ValueError(f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._compatible(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return PauliSum(self.n_qubits, acc)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            return self.dot(other)
        return PauliSum(self.n_qubits, {k: c * other for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "PauliSum":
        return self * -1

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        return self.dot(other)

    def dot(self, other: "PauliSum", tol: float = DROP_TOL) -> "PauliSum":
        """Operator product ``self @ other``."""
        self._compatible(other)
        acc: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                k = _product_phase(x1, z1, x2, z2)
                key = (x1 ^ x2, z1 ^ z2)
                acc[key] = acc.get(key, 0) + c1 * c2 * _PHASES[k]
        return PauliSum(self.n_qubits, acc, tol)

    def adjoint(self) -> "PauliSum":
        return PauliSum(self.n_qubits, {k: c.conjugate() for k, c in self._terms.items()})

    def simplify(self, tol: float = DROP_TOL) -> "PauliSum":
        return PauliSum(self.n_qubits, self._terms, tol)

    def real(self, tol: float = DROP_TOL) -> "PauliSum":
        """Drop imaginary parts; refuses if any exceeds ``tol``."""
        if not self.is_hermitian(tol):
            raise ValueError("PauliSum is not Hermitian")
        return PauliSum(self.n_qubits, {k: complex(c.real) for k, c in self._terms.items()})

    def is_hermitian(self, tol: float = DROP_TOL) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.sqrt(sum(abs(c) ** 2 for c in self._terms.values())))

    def equals(self, other: "PauliSum", tol: float = 1e-10) -> bool:
        if self.n_qubits != other.n_qubits:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= tol for k in keys)

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        mat = np.zeros((dim, dim), dtype=complex)
        idx = np.arange(dim)
        for (x, z), c in self._terms.items():
            sign = 1.0 - 2.0 * _parity_array(idx & z)
            mat[idx ^ x, idx] += c * _PHASES[_popcount(x & z) % 4] * sign
        return mat

    def __repr__(self) -> str:
        return f"PauliSum(n_qubits={self.n_qubits}, n_terms={len(self)})"

    # text serialization -----------------------------------------------------------------
    def to_text(self) -> str:
        """One ``<real> <imag> <label>`` line per term, sorted by label."""
        # a fully tapered (0-qubit) sum has an empty label and prints two fields
        lines = [f"{c.real:.17g} {c.imag:.17g} {p.label}".rstrip() for p, c in self.sorted_terms()]
        return "\n".join(lines) + ("\n" if lines else "")

    def write(self, sink: TextIO) -> None:
        sink.write(self.to_text())

    @classmethod
    def from_text(cls, text: str, n_qubits: int | None = None) -> "PauliSum":
        items = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) == 2:
                parts.append("")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected '<real> <imag> <label>'")
            items.append((complex(float(parts[0]), float(parts[1])), parts[2]))
        if not items:
            if n_qubits is None:
                raise ValueError("empty Pauli-sum text needs an explicit n_qubits")
            return cls(n_qubits)
        n = len(items[0][1])
        if n_qubits is not None and n != n_qubits:
            raise ValueError("label length does not match n_qubits")
        if any(len(lab) != n for _, lab in items):
            raise ValueError("inconsistent label lengths")
        return cls.from_strings(n, ((c, PauliString.from_label(lab)) for c, lab in items))


def conjugate_by_clifford(h: PauliSum, tau: PauliString, sigma: PauliString) -> PauliSum:
    """Return ``U h U^dagger`` for ``U = (tau + sigma) / sqrt(2)``.

    ``tau`` and ``sigma`` must be anticommuting Hermitian Pauli strings, which
    makes ``U`` Hermitian and unitary and maps ``tau`` onto ``sigma``.  Terms
    commuting with both are passed through; the rest go through the exact
    sandwich ``(tau + sigma) P (tau + sigma) / 2``.
    """
    _check_size(tau, sigma)
    if h.n_qubits != tau.n_qubits:
        raise ValueError("qubit count mismatch")
    if not (tau.is_hermitian() and sigma.is_hermitian()):
        raise ValueError("tau and sigma must be Hermitian involutions")
    if commutes(tau, sigma):
        raise ValueError("tau and sigma must anticommute")
    u = PauliSum.from_strings(h.n_qubits, [(1.0, tau), (1.0, sigma)])
    acc: dict[tuple[int, int], complex] = {}
    for p, c in h:
        if commutes(p, tau) and commutes(p, sigma):
            acc[p.key] = acc.get(p.key, 0) + c
            continue
        for (k, v) in u.dot(PauliSum.from_string(p, c)).dot(u).items():
            acc[k] = acc.get(k, 0) + 0.5 * v
    return PauliSum(h.n_qubits, acc)


def apply_qubit_permutation(h: PauliSum, perm: Sequence[int]) -> PauliSum:
    """Relabel qubits so that qubit ``q`` of ``h`` becomes qubit ``perm[q]``."""
    n = h.n_qubits
    if sorted(perm) != list(range(n)):
        raise ValueError("perm is not a bijection on the qubit indices")

    def move(bits: int) -> int:
        out = 0
        for q in range(n):
            if (bits >> q) & 1:
                out |= 1 << perm[q]
        return out

    return PauliSum(n, {(move(x), move(z)): c for (x, z), c in h.items()})


def restrict_qubit(h: PauliSum, q: int, eigenvalue: int) -> PauliSum:
    """Delete qubit ``q``, replacing an ``X`` there by ``eigenvalue`` (+1 or -1)."""
    if eigenvalue not in (1, -1):
        raise ValueError("eigenvalue must be +1 or -1")
    if not 0 <= q < h.n_qubits:
        raise ValueError("qubit index out of range")
    low = (1 << q) - 1
    acc: dict[tuple[int, int], complex] = {}
    for (x, z), c in h.items():
        if (z >> q) & 1:
            raise ValueError(f"term acts on qubit {q} with Y or Z")
        if (x >> q) & 1:
            c = c * eigenvalue
        nx = (x & low) | ((x >> (q + 1)) << q)
        nz = (z & low) | ((z >> (q + 1)) << q)
        acc[(nx, nz)] = acc.get((nx, nz), 0) + c
    return PauliSum(h.n_qubits - 1, acc)
