"""Tapering qubits off a Hamiltonian with commuting Pauli symmetries.

For generators ``tau_1..tau_k`` a single-qubit Pauli ``sigma_i`` is picked on
a distinct qubit ``q(i)`` so that it anticommutes with ``tau_i`` only.  The
Clifford ``U_i = (tau_i + sigma_i)/sqrt(2)`` maps ``tau_i`` onto ``sigma_i``
(and ``sigma_i`` is then rotated to ``X``), tapered qubits are moved to the
end, and each ``X`` there is replaced by the sector eigenvalue of ``tau_i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Sequence

from .fermion import MappingKind
from .integrals import IntegralSet
from .pauli import (PauliString, PauliSum, apply_qubit_permutation, commutes,
                    conjugate_by_clifford, restrict_qubit)
from .spectrum import min_eigenvalue

SCAN_LIMIT = 12
_KINDS = ("X", "Z", "Y")


class TaperingError(ValueError):
    pass


@dataclass(frozen=True)
class TaperingPlan:
    n_qubits: int
    generators: tuple[PauliString, ...]
    qubit_choices: tuple[int, ...]
    kinds: tuple[str, ...]
    permutation: tuple[int, ...]
    sector: tuple[int | None, ...] = ()
    labels: tuple[str, ...] = field(default=(), compare=False)

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def n_reduced(self) -> int:
        return self.n_qubits - self.k

    @property
    def tapered_positions(self) -> tuple[int, ...]:
        """Positions of the tapered qubits after the final permutation."""
        return tuple(self.permutation[q] for q in self.qubit_choices)

    def with_sector(self, sector: Sequence[int | None]) -> "TaperingPlan":
        if len(sector) != self.k:
            raise TaperingError("one sector eigenvalue per generator is required")
        return replace(self, sector=tuple(sector))

    def validate(self) -> None:
        gens = self.generators
        for i, g in enumerate(gens):
            if not g.is_hermitian():
                raise TaperingError(f"generator {g} is not Hermitian")
            for h in gens[i + 1:]:
                if not commutes(g, h):
                    raise TaperingError("generators do not commute")
            sigma = PauliString.single(self.n_qubits, self.qubit_choices[i], self.kinds[i])
            for j, h in enumerate(gens):
                if commutes(sigma, h) == (i == j):
                    raise TaperingError(f"qubit {self.qubit_choices[i]} does not isolate generator {i}")
        if len(set(self.qubit_choices)) != self.k:
            raise TaperingError("tapered qubits must be distinct")
        if self.sector and len(self.sector) != self.k:
            raise TaperingError("|sector| must equal |generators|")


def _pattern_ok(gens, i, q, kind) -> bool:
    sigma = PauliString.single(gens[0].n_qubits, q, kind)
    return all(commutes(sigma, g) != (j == i) for j, g in enumerate(gens))


def taper_assignment(generators: Sequence[PauliString]) -> list[tuple[int, str]]:
    """``(qubit, kind)`` per generator, lowest valid qubit first, ``X`` preferred.

    Depth-first with backtracking so a greedy dead end does not hide a valid
    assignment.  Raises :class:`TaperingError` if none exists.
    """
    gens = list(generators)
    if not gens:
        return []
    n = gens[0].n_qubits
    options = [[(q, kind) for q in range(n) for kind in _KINDS if _pattern_ok(gens, i, q, kind)]
               for i in range(len(gens))]
    # lowest index first, then X before Z before Y
    options = [sorted(opts, key=lambda t: (t[0], _KINDS.index(t[1]))) for opts in options]
    chosen: list[tuple[int, str]] = []
    used: set[int] = set()

    def search(i: int) -> bool:
        if i == len(gens):
            return True
        for q, kind in options[i]:
            if q in used:
                continue
            chosen.append((q, kind))
            used.add(q)
            if search(i + 1):
                return True
            chosen.pop()
            used.discard(q)
        return False

    if not search(0):
        raise TaperingError("no single-qubit assignment isolates every generator; "
                            "generators are dependent or not in canonical form")
    return chosen


def _eliminate(generators: Sequence[PauliString]) -> tuple[list[PauliString], list[tuple[int, str]]]:
    """Rewrite the generator basis so each member is isolated by its own qubit.

    For generator ``i`` pick the lowest unused qubit and kind that anticommutes
    with it, then multiply every other generator anticommuting with that
    single-qubit Pauli by generator ``i``.  The group is unchanged.  This always
    succeeds for independent commuting generators.
    """
    gens = list(generators)
    n = gens[0].n_qubits
    used: set[int] = set()
    assignment: list[tuple[int, str]] = []
    for i in range(len(gens)):
        g = gens[i]
        choice = next(((q, kind) for q in range(n) if q not in used for kind in _KINDS
                       if not commutes(PauliString.single(n, q, kind), g)), None)
        if choice is None:
            raise TaperingError("generators are dependent or do not commute")
        q, kind = choice
        sigma = PauliString.single(n, q, kind)
        for j in range(len(gens)):
            if j != i and not commutes(sigma, gens[j]):
                prod = gens[j] * g
                gens[j] = PauliString(n, prod.x_bits, prod.z_bits)
        used.add(q)
        assignment.append(choice)
    return gens, assignment


def choose_taper_qubits(generators: Sequence[PauliString]) -> list[int]:
    """Distinct qubits ``q(i)``; see :func:`taper_assignment`."""
    return [q for q, _ in taper_assignment(generators)]


def make_plan(generators: Sequence[PauliString], n_qubits: int | None = None,
              labels: Sequence[str] = ()) -> TaperingPlan:
    """Plan for ``generators``; see :func:`taper_assignment`.

    If no single-qubit assignment exists for the basis as given, the basis is
    rewritten by :func:`_eliminate` (same group) and rewritten members get a
    ``*`` appended to their label.
    """
    gens = tuple(generators)
    if n_qubits is None:
        if not gens:
            raise TaperingError("n_qubits is required for an empty generator list")
        n_qubits = gens[0].n_qubits
    labels = tuple(labels) if labels else tuple(f"tau{i + 1}" for i in range(len(gens)))
    try:
        assignment = taper_assignment(gens)
    except TaperingError:
        for i, g in enumerate(gens):
            if not g.is_hermitian() or any(not commutes(g, h) for h in gens[i + 1:]):
                raise TaperingError("generators must be Hermitian and commute") from None
        new, assignment = _eliminate(gens)
        labels = tuple(lab if a.key == b.key else lab + "*" for lab, a, b in zip(labels, gens, new))
        gens = tuple(new)
    qubits = tuple(q for q, _ in assignment)
    kinds = tuple(kind for _, kind in assignment)
    keep = [q for q in range(n_qubits) if q not in qubits]
    perm = [0] * n_qubits
    for new, old in enumerate(keep + list(qubits)):
        perm[old] = new
    plan = TaperingPlan(n_qubits, gens, qubits, kinds, tuple(perm), (None,) * len(gens), labels)
    plan.validate()
    return plan


def build_and_apply(h: PauliSum, plan: TaperingPlan) -> PauliSum:
    """Conjugate ``h`` by every ``U_i`` and move tapered qubits to the end."""
    if h.n_qubits != plan.n_qubits:
        raise TaperingError("plan and Hamiltonian disagree on the qubit count")
    out = h
    n = h.n_qubits
    # each U_i leaves the other generators alone, so all U_i go first; the
    # sigma -> X rotations would change later generators sharing the qubit
    for tau, q, kind in zip(plan.generators, plan.qubit_choices, plan.kinds):
        out = conjugate_by_clifford(out, tau, PauliString.single(n, q, kind))
    for q, kind in zip(plan.qubit_choices, plan.kinds):
        if kind != "X":
            out = conjugate_by_clifford(out, PauliString.single(n, q, kind), PauliString.single(n, q, "X"))
    out = apply_qubit_permutation(out, plan.permutation)
    for pos in plan.tapered_positions:
        bad = next((p for p in out.strings() if (p.z_bits >> pos) & 1), None)
        if bad is not None:
            raise TaperingError(f"term {bad.label} acts with Y/Z on tapered qubit {pos}")
    return out


def taper(h_transformed: PauliSum, plan: TaperingPlan, sector: Sequence[int] | None = None) -> PauliSum:
    """Replace each tapered ``X`` by its sector eigenvalue and drop the qubit."""
    sector = list(plan.sector if sector is None else sector)
    if len(sector) != plan.k or any(s not in (1, -1) for s in sector):
        raise TaperingError("a full +-1 sector is required to taper")
    out = h_transformed
    for pos, s in sorted(zip(plan.tapered_positions, sector), reverse=True):
        out = restrict_qubit(out, pos, s)
    return out


# --------------------------------------------------------------------------------------
# sector selection

def hartree_fock_bits(ints: IntegralSet, kind: MappingKind | str = MappingKind.JORDAN_WIGNER) -> int:
    """Computational basis index of the aufbau determinant in the current orbital order."""
    n = ints.n_spatial
    occ = 0
    for p in range(ints.n_alpha):
        occ |= 1 << p
    for p in range(ints.n_beta):
        occ |= 1 << (n + p)
    if MappingKind.parse(kind) is MappingKind.JORDAN_WIGNER:
        return occ
    bits, parity = 0, 0
    for p in range(ints.n_modes):
        parity ^= (occ >> p) & 1
        bits |= parity << p
    return bits


def mode_parity_string(support, n_modes: int, kind: MappingKind | str = MappingKind.JORDAN_WIGNER) -> PauliString:
    """Pauli image of ``prod_{p in support} (-1)^{n_p}``; a Z string in both encodings."""
    z = 0
    for p in support:
        z ^= 1 << p
        if MappingKind.parse(kind) is MappingKind.PARITY and p > 0:
            z ^= 1 << (p - 1)
    return PauliString(n_modes, 0, z)


def z_eigenvalue(p: PauliString, basis_index: int) -> int | None:
    """Eigenvalue of a Z-type string on a computational basis state, else ``None``."""
    if p.x_bits:
        return None
    sign = -1 if p.phase_exp == 2 else 1
    return sign * (-1 if bin(p.z_bits & basis_index).count("1") % 2 else 1)


def select_sector(plan: TaperingPlan, ints_rotated: IntegralSet,
                  kind: MappingKind | str = MappingKind.JORDAN_WIGNER) -> list[int | None]:
    """Sector of the Hartree-Fock determinant: ``(-1)**(occupied modes in support)``.

    Generators that are not Z type get ``None`` and must be settled by a scan.
    """
    hf = hartree_fock_bits(ints_rotated, kind)
    return [z_eigenvalue(g, hf) for g in plan.generators]


@dataclass
class ScanResult:
    energies: dict[tuple[int, ...], float]
    best_sector: tuple[int, ...]
    best_energy: float


def sector_scan(h_transformed: PauliSum, plan: TaperingPlan, fixed: Sequence[int | None] | None = None,
                limit: int = SCAN_LIMIT, seed: int = 0) -> ScanResult:
    """Lowest eigenvalue of every sector (only the ``None`` entries of ``fixed`` vary)."""
    fixed = list(fixed) if fixed is not None else [None] * plan.k
    free = [i for i, s in enumerate(fixed) if s is None]
    if len(free) > limit:
        raise TaperingError(f"{len(free)} free sectors exceed the scan limit of {limit}")
    energies: dict[tuple[int, ...], float] = {}
    for values in itertools.product((1, -1), repeat=len(free)):
        sector = list(fixed)
        for i, v in zip(free, values):
            sector[i] = v
        reduced = taper(h_transformed, plan, sector)
        energies[tuple(sector)] = min_eigenvalue(reduced, seed=seed).min_eigenvalue
    best = min(energies, key=lambda s: (energies[s], s))
    return ScanResult(energies, best, energies[best])
