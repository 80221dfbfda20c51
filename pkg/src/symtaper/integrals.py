"""Molecular integrals over spin-orbitals and the FCIDUMP reader/writer.

Spin-orbitals use BLOCKED ordering: spatial orbital ``p`` gives alpha mode
``p`` and beta mode ``p + n_spatial``.  The two-body tensor is stored in the
physicist form of

    H = sum_ij h1[i,j] a+_i a_j + 1/2 sum_ijkl h2[i,j,k,l] a+_i a+_j a_k a_l

so ``h2[i,j,k,l] = (il|jk)`` in chemist notation, with the spin of ``i``
matching ``l`` and the spin of ``j`` matching ``k``.
"""
from __future__ import annotations

import io
import os
import re
from dataclasses import dataclass, field
from typing import BinaryIO, TextIO, Union

import numpy as np

Source = Union[str, bytes, os.PathLike, TextIO, BinaryIO]

#: Disagreement allowed between symmetry-equivalent FCIDUMP entries.
DUPLICATE_TOL = 1e-10


class FCIDumpError(ValueError):
    """Malformed or inconsistent FCIDUMP input."""


@dataclass(frozen=True)
class IntegralSet:
    n_spatial: int
    h1: np.ndarray
    h2: np.ndarray
    e_core: float = 0.0
    n_alpha: int = 0
    n_beta: int = 0
    # spatial (chemist) integrals kept for round-tripping; optional
    eri_spatial: np.ndarray | None = field(default=None, compare=False, repr=False)
    h1_spatial: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        m = 2 * self.n_spatial
        if self.h1.shape != (m, m) or self.h2.shape != (m, m, m, m):
            raise ValueError("integral shapes do not match 2 * n_spatial spin-orbitals")
        for arr in (self.h1, self.h2, self.eri_spatial, self.h1_spatial):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def n_modes(self) -> int:
        return 2 * self.n_spatial

    @property
    def n_electrons(self) -> int:
        return self.n_alpha + self.n_beta

    @classmethod
    def from_spatial(cls, h1: np.ndarray, eri: np.ndarray, e_core: float = 0.0,
                     n_alpha: int = 0, n_beta: int = 0) -> "IntegralSet":
        """Build from spatial ``h1[p,q]`` and chemist ``eri[p,q,r,s] = (pq|rs)``."""
        h1 = np.asarray(h1, dtype=float)
        eri = np.asarray(eri, dtype=float)
        n = h1.shape[0]
        h1_spin, h2_spin = spin_expand(h1, eri)
        return cls(n, h1_spin, h2_spin, float(e_core), n_alpha, n_beta,
                   eri_spatial=eri.copy(), h1_spatial=h1.copy())

    def validate(self, tol: float = 1e-10) -> None:
        """Raise ``ValueError`` if a structural invariant is broken."""
        n = self.n_spatial
        if np.abs(self.h1 - self.h1.T).max(initial=0) > tol:
            raise ValueError("h1 is not symmetric")
        if np.abs(self.h2 - self.h2.transpose(3, 2, 1, 0)).max(initial=0) > tol:
            raise ValueError("h2 violates h_ijkl = h_lkji")
        if np.any(self.h1[:n, n:] != 0) or np.any(self.h1[n:, :n] != 0):
            raise ValueError("one-body integrals mix alpha and beta")


def spin_expand(h1: np.ndarray, eri: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spatial integrals to blocked spin-orbital ``h1`` and physicist ``h2``."""
    n = h1.shape[0]
    m = 2 * n
    h1_spin = np.zeros((m, m))
    h1_spin[:n, :n] = h1
    h1_spin[n:, n:] = h1
    # h2[i,j,k,l] = (i l | j k); spins i~l and j~k
    phys = eri.transpose(0, 2, 3, 1)
    h2 = np.zeros((m, m, m, m))
    for s1 in (0, n):
        for s2 in (0, n):
            h2[s1:s1 + n, s2:s2 + n, s2:s2 + n, s1:s1 + n] = phys
    return h1_spin, h2


# --------------------------------------------------------------------------------------
# FCIDUMP

_HEADER_RE = re.compile(r"&FCI(.*?)(?:&END|/)", re.IGNORECASE | re.DOTALL)


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode()
    if isinstance(source, (str, os.PathLike)):
        text = str(source)
        if "\n" in text or "&FCI" in text.upper():
            return text
        with open(source, "r") as f:
            return f.read()
    data = source.read()
    return data.decode() if isinstance(data, bytes) else data


def _parse_header(body: str) -> dict[str, list[str]]:
    fields: dict[str, list[str]] = {}
    key = None
    for token in re.split(r"[,\s]+", body.replace("=", " = ")):
        if not token:
            continue
        if token == "=":
            continue
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", token):
            key = token.upper()
            fields[key] = []
        elif key is None:
            raise FCIDumpError(f"unexpected token {token!r} in header")
        else:
            fields[key].append(token)
    return fields


def parse_fcidump(source: Source) -> IntegralSet:
    """Read a Molpro-style FCIDUMP (path, text, bytes or open stream).

    Indices are 1-based spatial orbitals in chemist notation; zero indices mark
    one-body entries ``(i j 0 0)`` and the core energy ``(0 0 0 0)``.  Entries
    implied by the 8-fold permutation symmetry are filled in; two entries that
    imply different values for the same integral raise :class:`FCIDumpError`.
    """
    text = _read_text(source)
    match = _HEADER_RE.search(text)
    if not match:
        raise FCIDumpError("missing &FCI ... &END header")
    fields = _parse_header(match.group(1))
    try:
        norb = int(fields["NORB"][0])
        nelec = int(fields["NELEC"][0])
        ms2 = int(fields.get("MS2", ["0"])[0])
    except (KeyError, IndexError, ValueError) as exc:
        raise FCIDumpError(f"malformed header: {exc}") from None
    if norb < 1 or nelec < 0:
        raise FCIDumpError("NORB must be positive and NELEC non-negative")
    if (nelec + ms2) % 2 or abs(ms2) > nelec:
        raise FCIDumpError(f"NELEC={nelec} and MS2={ms2} are inconsistent")
    n_alpha, n_beta = (nelec + ms2) // 2, (nelec - ms2) // 2
    if n_alpha > norb or n_beta > norb:
        raise FCIDumpError("more electrons of one spin than orbitals")

    h1 = np.zeros((norb, norb))
    eri = np.zeros((norb, norb, norb, norb))
    h1_set = np.zeros((norb, norb), dtype=bool)
    eri_set = np.zeros((norb,) * 4, dtype=bool)
    e_core = 0.0

    def store(arr, mask, idx, value, lineno):
        if mask[idx] and abs(arr[idx] - value) > DUPLICATE_TOL:
            raise FCIDumpError(f"line {lineno}: conflicting value for integral {idx}")
        arr[idx] = value
        mask[idx] = True

    body = text[match.end():]
    first_line = text[:match.end()].count("\n") + 1
    for offset, line in enumerate(body.splitlines()):
        parts = line.split()
        if not parts:
            continue
        lineno = first_line + offset
        if len(parts) != 5:
            raise FCIDumpError(f"line {lineno}: expected 'value i j k l'")
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise FCIDumpError(f"line {lineno}: cannot parse {line.strip()!r}") from None
        if any(t < 0 or t > norb for t in (i, j, k, l)):
            raise FCIDumpError(f"line {lineno}: orbital index out of range 0..{norb}")
        if i == j == k == l == 0:
            e_core = value
        elif k == 0 and l == 0:
            if j == 0:
                continue  # orbital energy line, not needed
            for a, b in ((i, j), (j, i)):
                store(h1, h1_set, (a - 1, b - 1), value, lineno)
        elif min(i, j, k, l) == 0:
            raise FCIDumpError(f"line {lineno}: unsupported index pattern {i} {j} {k} {l}")
        else:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for idx in {(p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                        (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p)}:
                store(eri, eri_set, idx, value, lineno)
    return IntegralSet.from_spatial(h1, eri, e_core, n_alpha, n_beta)


def write_fcidump(ints: IntegralSet, sink: TextIO | str | os.PathLike, tol: float = 1e-15) -> None:
    """Write the unique spatial integrals back out in FCIDUMP form."""
    if ints.eri_spatial is None or ints.h1_spatial is None:
        raise ValueError("IntegralSet has no spatial integrals to write")
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w") as f:
            write_fcidump(ints, f, tol)
        return
    n = ints.n_spatial
    eri, h1 = ints.eri_spatial, ints.h1_spatial
    sink.write(f" &FCI NORB={n},NELEC={ints.n_electrons},MS2={ints.n_alpha - ints.n_beta},\n &END\n")
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s in range(r + 1):
                    if p * (p + 1) // 2 + q < r * (r + 1) // 2 + s:
                        continue
                    if abs(eri[p, q, r, s]) > tol:
                        sink.write(f"{eri[p, q, r, s]: .17e} {p + 1:4d} {q + 1:4d} {r + 1:4d} {s + 1:4d}\n")
    for p in range(n):
        for q in range(p + 1):
            if abs(h1[p, q]) > tol:
                sink.write(f"{h1[p, q]: .17e} {p + 1:4d} {q + 1:4d}    0    0\n")
    sink.write(f"{ints.e_core: .17e}    0    0    0    0\n")


def fcidump_text(ints: IntegralSet) -> str:
    buf = io.StringIO()
    write_fcidump(ints, buf)
    return buf.getvalue()


def random_integrals(n_spatial: int, n_alpha: int, n_beta: int, rng: np.random.Generator,
                     scale: float = 0.5) -> IntegralSet:
    """Random real integrals with the full 8-fold chemist symmetry."""
    n = n_spatial
    h1 = rng.normal(scale=scale, size=(n, n))
    h1 = h1 + h1.T
    eri = rng.normal(scale=scale, size=(n,) * 4)
    eri = sum(eri.transpose(p) for p in _EIGHTFOLD) / 8
    return IntegralSet.from_spatial(h1, eri, float(rng.normal()), n_alpha, n_beta)


_EIGHTFOLD = [(0, 1, 2, 3), (1, 0, 2, 3), (0, 1, 3, 2), (1, 0, 3, 2),
              (2, 3, 0, 1), (3, 2, 0, 1), (2, 3, 1, 0), (3, 2, 1, 0)]
