"""End-to-end tapering run: integrals in, reduced Hamiltonian and report out.

Steps: parse the FCIDUMP, optionally diagonalise the supplied point-group
involutions and rotate the orbitals, map to qubits, collect the kernel
symmetries, merge them with the point-group Z strings over GF(2), plan,
transform, pick the sector and taper.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

from . import gf2
from .fermion import MappingKind, map_hamiltonian
from .integrals import IntegralSet, parse_fcidump
from .pauli import DROP_TOL, PauliString, PauliSum, commutes
from .pointgroup import (INVARIANCE_TOL, OrbitalRotation, SignedPermutation, SymmetryError,
                         ZSymmetry, check_invariance, load_symmetries, rotate_integrals,
                         select_commuting_involutions, simultaneous_diagonalize)
from .spectrum import ITERATIVE_LIMIT, ConvergenceError, min_eigenvalue
from .tapering import (ScanResult, TaperingPlan, build_and_apply, make_plan, mode_parity_string,
                       sector_scan, select_sector, taper)

VERIFY_TOL = 1e-8


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    fcidump: str
    symmetries: str | None = None
    mapping: str = "jw"
    auto_z2: bool = True
    sector_scan: bool = False
    out: str | None = None
    seed: int = 0
    tol_invariance: float = INVARIANCE_TOL
    tol_drop: float = DROP_TOL

    @property
    def pointgroup(self) -> bool:
        return self.symmetries is not None

    def validate(self) -> None:
        if not (self.auto_z2 or self.pointgroup):
            raise UsageError("enable kernel symmetries or supply --symmetries")
        if self.tol_invariance <= 0 or self.tol_drop <= 0:
            raise UsageError("tolerances must be positive")
        MappingKind.parse(self.mapping)


@dataclass
class PointGroupInfo:
    operations: list[SignedPermutation]
    verdicts: list[tuple[str, bool, float]]
    kept: list[SignedPermutation]
    notes: list[str]
    rotation: OrbitalRotation | None
    z_symmetries: list[ZSymmetry]
    strings: list[PauliString]


@dataclass
class RunResult:
    config: RunConfig
    ints: IntegralSet
    ints_work: IntegralSet
    h_full: PauliSum
    h_work: PauliSum
    kernel_generators: list[PauliString]
    pointgroup: PointGroupInfo | None
    generators: list[PauliString]
    origins: dict[str, int]
    plan: TaperingPlan
    h_transformed: PauliSum
    h_reduced: PauliSum
    predicted_sector: list[int | None]
    kernel_only_count: int | None = None
    scan: ScanResult | None = None
    notes: list[str] = field(default_factory=list)


def spin_parity_strings(ints: IntegralSet, kind) -> list[PauliString]:
    n, m = ints.n_spatial, ints.n_modes
    return [mode_parity_string(range(n), m, kind), mode_parity_string(range(n, m), m, kind)]


def analyze_pointgroup(ints: IntegralSet, symmetries, kind, tol: float) -> PointGroupInfo:
    """Invariance check, commuting involution selection and diagonalisation.

    Raises :class:`SymmetryError` if any supplied operation fails the check.
    """
    n_spatial, ops = load_symmetries(symmetries)
    if n_spatial != ints.n_spatial:
        raise SymmetryError(f"symmetry file has {n_spatial} orbitals, FCIDUMP has {ints.n_spatial}")
    verdicts = []
    for op in ops:
        ok, dev = check_invariance(ints, op, tol)
        verdicts.append((op.name, ok, dev))
    failed = [name for name, ok, _ in verdicts if not ok]
    if failed:
        raise SymmetryError("not a symmetry of the Hamiltonian: " + ", ".join(failed))
    kept, notes = select_commuting_involutions(ops)
    if not kept:
        return PointGroupInfo(ops, verdicts, kept, notes, None, [], [])
    rotation, spatial_syms = simultaneous_diagonalize(kept)
    n = ints.n_spatial
    zsyms, strings = [], []
    for s in spatial_syms:
        spin = ZSymmetry(frozenset(s.support) | frozenset(p + n for p in s.support), 2 * n, s.name)
        zsyms.append(spin)
        strings.append(mode_parity_string(sorted(spin.support), 2 * n, kind))
    return PointGroupInfo(ops, verdicts, kept, notes, rotation, zsyms, strings)


def merge_generators(first: list[PauliString], second: list[PauliString]) -> list[PauliString]:
    """Independent, mutually commuting subset of ``first + second``, then RREF."""
    kept: list[PauliString] = []
    for cand in first + second:
        if cand.is_identity() or gf2.in_span(cand, kept):
            continue
        if all(commutes(cand, k) for k in kept):
            kept.append(cand)
    return gf2.canonical_generators(kept)


def _rank(strings) -> int:
    return len(gf2.canonical_generators(list(strings))) if strings else 0


def origin_breakdown(generators, spin, pg) -> dict[str, int]:
    """Tapered-qubit counts by origin, as incremental GF(2) ranks."""
    span = list(generators)
    spin_in = [s for s in spin if gf2.in_span(s, span)]
    pg_in = [s for s in pg if gf2.in_span(s, span)]
    n_spin = _rank(spin_in)
    n_pg = _rank(spin_in + pg_in) - n_spin
    return {"spin_parity": n_spin, "point_group": n_pg,
            "kernel_other": len(span) - n_spin - n_pg}


def generator_label(g: PauliString, spin, pg_info: PointGroupInfo | None) -> str:
    """Name ``g`` as a product of spin parities and point-group strings when possible."""
    named = [("spin-alpha parity", spin[0]), ("spin-beta parity", spin[1])] if spin else []
    if pg_info:
        named += [(f"point-group {z.name}", s) for z, s in zip(pg_info.z_symmetries, pg_info.strings)]
    target = (g.x_bits, g.z_bits)
    # few named strings, so an exhaustive subset search is cheap; smallest product wins
    for size in range(1, len(named) + 1):
        for combo in itertools.combinations(named, size):
            x = z = 0
            for _, s in combo:
                x, z = x ^ s.x_bits, z ^ s.z_bits
            if (x, z) == target:
                return " * ".join(name for name, _ in combo)
    return "kernel"


def run(cfg: RunConfig, ints: IntegralSet | None = None) -> RunResult:
    cfg.validate()
    kind = MappingKind.parse(cfg.mapping)
    if ints is None:
        ints = parse_fcidump(cfg.fcidump)
    h_full = map_hamiltonian(ints, kind, cfg.tol_drop)
    spin = spin_parity_strings(ints, kind)

    pg_info = None
    ints_work, h_work = ints, h_full
    kernel_only = None
    if cfg.pointgroup:
        pg_info = analyze_pointgroup(ints, cfg.symmetries, kind, cfg.tol_invariance)
        if pg_info.rotation is not None:
            ints_work = rotate_integrals(ints, pg_info.rotation)
            h_work = map_hamiltonian(ints_work, kind, cfg.tol_drop)
        kernel_only = len(gf2.find_symmetries(h_full))

    kernel = gf2.find_symmetries(h_work) if cfg.auto_z2 else []
    pg_strings = pg_info.strings if pg_info else []
    generators = merge_generators(pg_strings, kernel)
    origins = origin_breakdown(generators, spin, pg_strings)
    labels = [generator_label(g, spin, pg_info) for g in generators]

    plan = make_plan(generators, h_work.n_qubits, labels)
    # the plan may rewrite the basis to isolate each generator; the span is unchanged
    generators = list(plan.generators)
    h_transformed = build_and_apply(h_work, plan)
    predicted = select_sector(plan, ints_work, kind)
    notes = []
    if ints.n_alpha != ints.n_beta:
        notes.append("open shell: Hartree-Fock sector prediction is experimental")

    scan = None
    sector = list(predicted)
    if any(s is None for s in sector):
        notes.append("non-Z generators present: unknown sectors fixed by scan")
        scan = sector_scan(h_transformed, plan, fixed=predicted, seed=cfg.seed)
        sector = list(scan.best_sector)
    if cfg.sector_scan:
        scan = sector_scan(h_transformed, plan, seed=cfg.seed)
    plan = plan.with_sector(sector)
    h_reduced = taper(h_transformed, plan)
    return RunResult(cfg, ints, ints_work, h_full, h_work, kernel, pg_info, generators, origins,
                     plan, h_transformed, h_reduced, predicted, kernel_only, scan, notes)


@dataclass
class VerifyResult:
    full_energy: float | None
    tapered_energy: float | None
    difference: float | None
    status: str

    @property
    def ok(self) -> bool:
        return self.status != "failed"


def verify(h_full: PauliSum, h_reduced: PauliSum, seed: int = 0, tol: float = VERIFY_TOL,
           limit: int = ITERATIVE_LIMIT) -> VerifyResult:
    """Compare lowest eigenvalues of the full and tapered Hamiltonians."""

    def solve(h):
        if h.n_qubits > limit:
            return None
        try:
            return min_eigenvalue(h, seed=seed).min_eigenvalue
        except ConvergenceError:
            return None

    e_full, e_tap = solve(h_full), solve(h_reduced)
    if e_full is None or e_tap is None:
        return VerifyResult(e_full, e_tap, None, "unverifiable at desk scale")
    diff = abs(e_full - e_tap)
    return VerifyResult(e_full, e_tap, diff, "passed" if diff <= tol else "failed")


def reduced_path(out: str) -> str:
    root, _ = os.path.splitext(out)
    return root + ".ham"
