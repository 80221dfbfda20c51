import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_path, random_involution, symmetrized_integrals
from symtaper.fermion import ladder_operator, map_hamiltonian
from symtaper.integrals import IntegralSet, parse_fcidump, random_integrals
from symtaper.pauli import PauliSum
from symtaper.pointgroup import (OrbitalRotation, SignedPermutation, SymmetryError, ZSymmetry,
                                 check_invariance, load_symmetries, rotate_integrals,
                                 second_quantized_permutation, select_commuting_involutions,
                                 simultaneous_diagonalize, transform_tensors, verify_z_symmetry)

SWAP4 = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


class TestSignedPermutation:
    def test_matrix_roundtrip(self):
        r = SignedPermutation((2, 0, 1), (1, -1, 1))
        assert SignedPermutation.from_matrix(r.matrix()) == r
        assert r.matrix()[2, 0] == 1 and r.matrix()[0, 1] == -1

    @pytest.mark.parametrize("perm,signs", [((0, 0), (1, 1)), ((0, 1), (1, 2)), ((0,), (1, 1))])
    def test_invalid(self, perm, signs):
        with pytest.raises(SymmetryError):
            SignedPermutation(perm, signs)

    def test_from_matrix_rejects_rotation(self):
        c, s = np.cos(0.3), np.sin(0.3)
        with pytest.raises(SymmetryError):
            SignedPermutation.from_matrix(np.array([[c, -s], [s, c]]))

    def test_involution(self):
        assert SignedPermutation((1, 0), (-1, -1)).is_involution()
        assert not SignedPermutation((1, 0), (1, -1)).is_involution()
        assert not SignedPermutation((1, 2, 0), (1, 1, 1)).is_involution()

    def test_spin_doubled(self):
        r = SignedPermutation((1, 0), (1, 1)).spin_doubled()
        np.testing.assert_array_equal(r.matrix(), SWAP4)

    def test_cycles(self):
        assert SignedPermutation((1, 2, 0, 3), (1,) * 4).cycles() == [(0, 1, 2), (3,)]


class TestLoad:
    def test_fixture(self):
        n, ops = load_symmetries(fixture_path("beh2", ".sym.json"))
        assert n == 7 and [o.name for o in ops] == ["sigma(xy)", "sigma(yz)", "sigma(xz)"]

    @pytest.mark.parametrize("data", [
        {"operations": []},
        {"n_spatial": 2, "operations": [{"perm": [0]}]},
        {"n_spatial": 2, "operations": [{"perm": [0, 1], "signs": [1, 3]}]},
        {"n_spatial": 2, "operations": [{"signs": [1, 1]}]},
    ])
    def test_malformed(self, data):
        with pytest.raises(SymmetryError):
            load_symmetries(data)

    def test_signs_default_to_plus(self):
        _, ops = load_symmetries({"n_spatial": 2, "operations": [{"perm": [1, 0]}]})
        assert ops[0].signs == (1, 1)


class TestInvariance:
    def test_identity(self, h2_ints):
        ok, dev = check_invariance(h2_ints, SignedPermutation.identity(2))
        assert ok and dev == 0.0

    def test_h2_swap(self, h2_ints):
        ok, dev = check_invariance(h2_ints, SignedPermutation.from_matrix(SWAP4))
        assert ok and dev < 1e-12

    def test_h2_single_sign_flip(self, h2_ints):
        ok, dev = check_invariance(h2_ints, SignedPermutation((0, 1), (1, -1)))
        assert not ok
        # hopping h1[0,1] flips sign
        assert dev == pytest.approx(2 * abs(h2_ints.h1[0, 1]))

    def test_size_mismatch(self, h2_ints):
        with pytest.raises(SymmetryError):
            check_invariance(h2_ints, SignedPermutation.identity(3))

    @pytest.mark.parametrize("name", ["h2", "lih", "beh2", "h2o", "nh3"])
    def test_fixture_operations(self, name):
        ints = parse_fcidump(fixture_path(name))
        _, ops = load_symmetries(fixture_path(name, ".sym.json"))
        for op in ops:
            assert check_invariance(ints, op)[0], op.name


class TestSecondQuantized:
    def test_sign(self):
        r = SignedPermutation((0, 1), (1, -1))
        assert second_quantized_permutation(r).equals(PauliSum.from_labels({"IZ": 1.0}))

    def test_identity(self):
        assert second_quantized_permutation(SignedPermutation.identity(3)).equals(PauliSum.identity(3))

    def test_swap(self):
        r = SignedPermutation((1, 0), (1, 1))
        op = second_quantized_permutation(r)
        # I - n0 - n1 + a+_0 a_1 + a+_1 a_0
        expected = PauliSum.from_labels({"ZI": 0.5, "IZ": 0.5, "XX": 0.5, "YY": 0.5})
        assert op.equals(expected)
        u = op.to_matrix()
        np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-15)
        self.assert_ladder_relation(r)

    @staticmethod
    def assert_ladder_relation(r):
        n = r.size
        u = second_quantized_permutation(r).to_matrix()
        a = [ladder_operator(p, n).to_matrix() for p in range(n)]
        mat = r.matrix()
        for p in range(n):
            target = sum(mat[p, q] * a[q] for q in range(n))
            np.testing.assert_allclose(u @ a[p] @ u.conj().T, target, atol=1e-13)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 2**32 - 1))
    def test_ladder_relation_random(self, n, seed):
        rng = np.random.default_rng(seed)
        perm = tuple(int(p) for p in rng.permutation(n))
        signs = tuple(int(s) for s in rng.choice([-1, 1], size=n))
        self.assert_ladder_relation(SignedPermutation(perm, signs))

    @pytest.mark.parametrize("kind", ["jw", "parity"])
    def test_conjugation_matches_tensor_transform(self, kind):
        rng = np.random.default_rng(4)
        ints = random_integrals(3, 1, 1, rng)
        r = SignedPermutation((2, 0, 1), (1, -1, 1)).spin_doubled()
        u = second_quantized_permutation(r, kind).to_matrix()
        h1, h2 = transform_tensors(ints, r)
        moved = IntegralSet(3, h1, h2, ints.e_core, 1, 1)
        np.testing.assert_allclose(u @ map_hamiltonian(ints, kind).to_matrix() @ u.conj().T,
                                   map_hamiltonian(moved, kind).to_matrix(), atol=1e-12)


def ammonia_hydrogens():
    """C3v acting on the three hydrogen 1s orbitals."""
    return [
        SignedPermutation((1, 2, 0), (1, 1, 1), "C3"),
        SignedPermutation((2, 0, 1), (1, 1, 1), "C3^2"),
        SignedPermutation((0, 2, 1), (1, 1, 1), "sigma_v1"),
        SignedPermutation((2, 1, 0), (1, 1, 1), "sigma_v2"),
        SignedPermutation((1, 0, 2), (1, 1, 1), "sigma_v3"),
    ]


class TestSelect:
    def test_ammonia_keeps_one_reflection(self):
        kept, notes = select_commuting_involutions(ammonia_hydrogens())
        assert [k.name for k in kept] == ["sigma_v1"]
        assert len(notes) == 4
        assert sum("R^2" in n for n in notes) == 2

    def test_beryllium_hydride_keeps_all(self):
        _, ops = load_symmetries(fixture_path("beh2", ".sym.json"))
        kept, notes = select_commuting_involutions(ops)
        assert len(kept) == 3 and notes == []

    def test_empty(self):
        assert select_commuting_involutions([]) == ([], [])


class TestDiagonalize:
    def test_single_swap(self):
        v, syms = simultaneous_diagonalize([SignedPermutation((1, 0), (1, 1))])
        np.testing.assert_allclose(v.v, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
        assert syms[0].support == {1}
        assert syms[0].pauli.label == "IZ"

    def test_diagonal_z2z4(self):
        # -1 at positions 2 and 4 (1-based) of five modes
        r = SignedPermutation(tuple(range(5)), (1, -1, 1, -1, 1))
        v, syms = simultaneous_diagonalize([r])
        np.testing.assert_array_equal(v.v, np.eye(5))
        assert syms[0].pauli.label == "IZIZI"

    def test_h2_swap_matrix(self):
        v, syms = simultaneous_diagonalize([SignedPermutation.from_matrix(SWAP4)])
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        expected = np.zeros((4, 4))
        expected[:2, :2] = h
        expected[2:, 2:] = h
        np.testing.assert_allclose(v.v, expected)
        assert syms[0].pauli.label == "IZIZ"
        # dense eigendecomposition oracle: columns are eigenvectors with the stated eigenvalues
        d = v.v.T @ SWAP4 @ v.v
        np.testing.assert_allclose(d, np.diag([1, -1, 1, -1]), atol=1e-15)

    def test_rejects_non_commuting(self):
        ops = ammonia_hydrogens()[2:4]
        with pytest.raises(SymmetryError):
            simultaneous_diagonalize(ops)

    def test_rejects_non_involution(self):
        with pytest.raises(SymmetryError):
            simultaneous_diagonalize(ammonia_hydrogens()[:1])

    def test_trivial_operation_has_no_string(self):
        _, syms = simultaneous_diagonalize([SignedPermutation.identity(3)])
        assert syms == []

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 2**32 - 1))
    def test_diagonal_for_commuting_sets(self, n, seed):
        rng = np.random.default_rng(seed)
        r1 = random_involution(rng, n, "a")
        # signs constant on the cycles of r1 commute with it
        signs = [1] * n
        for cyc in r1.cycles():
            s = int(rng.choice([-1, 1]))
            for p in cyc:
                signs[p] = s
        r2 = SignedPermutation(tuple(range(n)), tuple(signs), "b")
        ops = [r1, r2, r1.compose(r2)]
        v, _ = simultaneous_diagonalize(ops)
        for op in ops:
            d = v.v.T @ op.matrix() @ v.v
            assert np.abs(d - np.diag(np.diag(d))).max() <= 1e-12
            np.testing.assert_allclose(np.abs(np.diag(d)), 1, atol=1e-12)

    def test_spin_blocks_pair(self):
        r = SignedPermutation((1, 0, 2), (1, 1, -1))
        _, spatial = simultaneous_diagonalize([r])
        _, spin = simultaneous_diagonalize([r.spin_doubled()])
        assert spin[0].support == spatial[0].support | {p + 3 for p in spatial[0].support}


class TestRotate:
    def test_identity(self, h2_ints):
        out = rotate_integrals(h2_ints, OrbitalRotation(np.eye(2)))
        np.testing.assert_allclose(out.h1, h2_ints.h1, atol=1e-15)
        np.testing.assert_allclose(out.h2, h2_ints.h2, atol=1e-15)

    def test_swap(self):
        a, b, c = 0.1, 0.2, 0.3
        ints = IntegralSet.from_spatial(np.array([[a, b], [b, c]]), np.zeros((2,) * 4))
        out = rotate_integrals(ints, OrbitalRotation(np.array([[0, 1], [1, 0]])))
        np.testing.assert_allclose(out.h1_spatial, [[c, b], [b, a]])
        np.testing.assert_allclose(out.h1[:2, :2], [[c, b], [b, a]])

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError):
            OrbitalRotation(np.array([[1, 1], [0, 1]]))

    @pytest.mark.parametrize("seed", range(3))
    def test_spectrum_preserved(self, seed):
        rng = np.random.default_rng(seed)
        ints = random_integrals(3, 1, 1, rng)
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        out = rotate_integrals(ints, OrbitalRotation(q))
        np.testing.assert_allclose(np.linalg.eigvalsh(map_hamiltonian(out).to_matrix()),
                                   np.linalg.eigvalsh(map_hamiltonian(ints).to_matrix()), atol=1e-10)

    def test_spin_sized_rotation(self, h2_ints):
        v = OrbitalRotation(np.eye(4)[[1, 0, 3, 2]])
        out = rotate_integrals(h2_ints, v)
        assert out.eri_spatial is None
        np.testing.assert_allclose(out.h1, h2_ints.h1[np.ix_([1, 0, 3, 2], [1, 0, 3, 2])])


class TestVerifyZ:
    def test_empty_support_rejected(self):
        with pytest.raises(SymmetryError):
            ZSymmetry(frozenset(), 4)

    def test_h2_rotated(self, h2_ints):
        v, syms = simultaneous_diagonalize([SignedPermutation.from_matrix(SWAP4)])
        h = map_hamiltonian(rotate_integrals(h2_ints, v))
        assert syms[0].support == {1, 3}
        assert verify_z_symmetry(h, syms[0])

    def test_h2_unrotated_fails(self, h2_ints):
        h = map_hamiltonian(h2_ints)
        assert not verify_z_symmetry(h, ZSymmetry(frozenset({1, 3}), 4))
        assert not verify_z_symmetry(h, ZSymmetry(frozenset({1}), 4))

    def test_alpha_parity_holds_unrotated(self, h2_ints):
        # blocked ordering: modes 0 and 1 are the alpha block
        assert verify_z_symmetry(map_hamiltonian(h2_ints), ZSymmetry(frozenset({0, 1}), 4))

    @settings(max_examples=15, deadline=None)
    @given(st.integers(1, 3), st.integers(0, 2**32 - 1))
    def test_random_invariant_integrals(self, n, seed):
        rng = np.random.default_rng(seed)
        r = random_involution(rng, n)
        ints = symmetrized_integrals(rng, n, [r])
        assert check_invariance(ints, r)[0]
        v, syms = simultaneous_diagonalize([r.spin_doubled()])
        h = map_hamiltonian(rotate_integrals(ints, v))
        for s in syms:
            assert verify_z_symmetry(h, s)
