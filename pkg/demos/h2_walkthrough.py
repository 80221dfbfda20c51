"""Step-by-step tapering of H2 (STO-3G) from an FCIDUMP file.

Run from the repository root:

    python3 demos/h2_walkthrough.py [path/to/h2.fcidump] [path/to/h2.sym.json]
"""
import sys

import numpy as np

from symtaper import (build_and_apply, check_invariance, find_symmetries, make_plan, map_hamiltonian,
                      parse_fcidump, rotate_integrals, select_commuting_involutions, select_sector,
                      simultaneous_diagonalize, taper)
from symtaper.pointgroup import load_symmetries

fcidump = sys.argv[1] if len(sys.argv) > 1 else "tests/data/h2.fcidump"
symfile = sys.argv[2] if len(sys.argv) > 2 else "tests/data/h2.sym.json"

ints = parse_fcidump(fcidump)
print(f"{ints.n_spatial} spatial orbitals, {ints.n_modes} spin-orbitals, "
      f"{ints.n_alpha}+{ints.n_beta} electrons")

# 1. Jordan-Wigner qubit Hamiltonian in the input orbital basis
h = map_hamiltonian(ints)
print(f"qubit Hamiltonian: {len(h)} terms on {h.n_qubits} qubits")
print("kernel symmetries before rotation:", [g.label for g in find_symmetries(h)])

# 2. point-group involutions become Z strings after an orbital rotation
_, ops = load_symmetries(symfile)
for op in ops:
    ok, dev = check_invariance(ints, op)
    print(f"{op.name}: invariant={ok} (max deviation {dev:.1e})")
kept, _ = select_commuting_involutions(ops)
v, zsyms = simultaneous_diagonalize([op.spin_doubled() for op in kept])
ints_rot = rotate_integrals(ints, v)
for z in zsyms:
    print(f"{z.name}: parity of modes {sorted(z.support)} -> {z.pauli.label}")
h_rot = map_hamiltonian(ints_rot)
gens = find_symmetries(h_rot)
print("kernel symmetries after rotation:", [g.label for g in gens])

# 3. plan, transform, choose the Hartree-Fock sector and taper
plan = make_plan(gens)
sector = select_sector(plan, ints_rot)
reduced = taper(build_and_apply(h_rot, plan), plan.with_sector(sector))
print(f"sector {sector}; reduced Hamiltonian on {reduced.n_qubits} qubit(s):")
print(reduced.to_text(), end="")

e_full = np.linalg.eigvalsh(h.to_matrix())[0]
e_red = np.linalg.eigvalsh(reduced.to_matrix())[0]
print(f"lowest eigenvalue full {e_full:.10f}  tapered {e_red:.10f}  diff {abs(e_full - e_red):.1e}")
