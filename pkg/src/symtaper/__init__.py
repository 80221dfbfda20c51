"""Qubit tapering with Z2 Pauli symmetries and molecular point-group symmetries."""
from .fermion import MappingKind, map_excitation, map_hamiltonian
from .gf2 import BinMatrix, build_check_matrix, extract_generators, find_symmetries, kernel
from .integrals import FCIDumpError, IntegralSet, parse_fcidump, write_fcidump
from .pauli import (PauliString, PauliSum, apply_qubit_permutation, commutes, conjugate_by_clifford,
                    multiply, restrict_qubit)
from .pointgroup import (OrbitalRotation, SignedPermutation, SymmetryError, ZSymmetry,
                         check_invariance, rotate_integrals, second_quantized_permutation,
                         select_commuting_involutions, simultaneous_diagonalize, verify_z_symmetry)
from .spectrum import SpectrumResult, apply_pauli_sum, dense_spectrum, min_eigenvalue_iterative
from .tapering import (TaperingPlan, build_and_apply, choose_taper_qubits, make_plan, sector_scan,
                       select_sector, taper)

__version__ = "0.1.0"
