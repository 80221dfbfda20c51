import json
import pathlib

import numpy as np
import pytest

from symtaper.integrals import parse_fcidump
from symtaper.pauli import PauliString

DATA = pathlib.Path(__file__).parent / "data"
FIXTURES = ("h2", "lih", "beh2", "h2o", "nh3")


def fixture_path(name: str, suffix: str = ".fcidump") -> str:
    return str(DATA / f"{name}{suffix}")


@pytest.fixture(scope="session")
def reference():
    with open(DATA / "reference.json") as f:
        return json.load(f)


@pytest.fixture(scope="session")
def h2_ints():
    return parse_fcidump(fixture_path("h2"))


def all_paulis(n: int):
    """Every phase-free Pauli string on ``n`` qubits."""
    for x in range(1 << n):
        for z in range(1 << n):
            yield PauliString(n, x, z)


def random_pauli(rng: np.random.Generator, n: int) -> PauliString:
    return PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)))


def fock_annihilators(n_modes: int) -> list[np.ndarray]:
    """Dense a_p on the occupation basis, built straight from bit arithmetic.

    Basis index bit ``p`` is the occupation of mode ``p``; the sign counts
    occupied modes below ``p``.
    """
    dim = 1 << n_modes
    ops = []
    for p in range(n_modes):
        a = np.zeros((dim, dim))
        for b in range(dim):
            if (b >> p) & 1:
                a[b ^ (1 << p), b] = (-1) ** bin(b & ((1 << p) - 1)).count("1")
        ops.append(a)
    return ops


def dense_from_chemist(h1: np.ndarray, eri: np.ndarray, e_core: float = 0.0) -> np.ndarray:
    """Second-quantized Hamiltonian from spatial chemist integrals, blocked spins.

    H = sum h_pq a+_ps a_qs + 1/2 sum (pq|rs) a+_ps a+_rt a_st a_qs
    """
    n = h1.shape[0]
    a = fock_annihilators(2 * n)
    dim = a[0].shape[0]
    h = e_core * np.eye(dim)
    for s in (0, n):
        for p in range(n):
            for q in range(n):
                h += h1[p, q] * a[p + s].T @ a[q + s]
    for s in (0, n):
        for t in (0, n):
            for p, q, r, u in np.ndindex(n, n, n, n):
                if eri[p, q, r, u] == 0:
                    continue
                h += 0.5 * eri[p, q, r, u] * a[p + s].T @ a[r + t].T @ a[u + t] @ a[q + s]
    return h


def random_involution(rng: np.random.Generator, n: int, name: str = "R"):
    """Random signed-permutation involution: disjoint swaps plus signed fixed points."""
    from symtaper.pointgroup import SignedPermutation

    order = rng.permutation(n)
    n_pairs = int(rng.integers(0, n // 2 + 1))
    perm, signs = list(range(n)), [1] * n
    for k in range(n_pairs):
        p, q = int(order[2 * k]), int(order[2 * k + 1])
        perm[p], perm[q] = q, p
        signs[p] = signs[q] = int(rng.choice([-1, 1]))
    for p in order[2 * n_pairs:]:
        signs[int(p)] = int(rng.choice([-1, 1]))
    return SignedPermutation(tuple(perm), tuple(signs), name)


def symmetrized_integrals(rng: np.random.Generator, n: int, ops, n_alpha=1, n_beta=1):
    """Random integrals averaged over the group generated by commuting involutions."""
    import itertools

    from symtaper.integrals import IntegralSet, random_integrals
    from symtaper.pointgroup import SignedPermutation

    base = random_integrals(n, n_alpha, n_beta, rng)
    group = []
    for r in range(len(ops) + 1):
        for combo in itertools.combinations(ops, r):
            g = SignedPermutation.identity(n)
            for op in combo:
                g = g.compose(op)
            group.append(g.matrix())
    h1 = sum(g.T @ base.h1_spatial @ g for g in group) / len(group)
    eri = sum(np.einsum("pqrs,pa,qb,rc,sd->abcd", base.eri_spatial, g, g, g, g) for g in group) / len(group)
    return IntegralSet.from_spatial(h1, eri, base.e_core, n_alpha, n_beta)


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.acceptance_lines.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
