"""Regenerate the FCIDUMP / symmetry / reference fixtures with PySCF.

PySCF is an external oracle here, not a dependency of the package. Run with an
interpreter that has it installed::

    python tests/data/make_fixtures.py

Integrals are written in the Loewdin (symmetrically) orthogonalised STO-3G
atomic-orbital basis. Symmetric orthogonalisation commutes with every
point-group operation, so reflections and swaps of atom-centred orbitals stay
signed permutations.
"""
import json
import os

import numpy as np
from pyscf import ao2mo, fci, gto, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))


def _water():
    r, theta = 0.9572, np.deg2rad(104.52) / 2
    return [
        ("O", (0.0, 0.0, 0.0)),
        ("H", (0.0, r * np.sin(theta), -r * np.cos(theta))),
        ("H", (0.0, -r * np.sin(theta), -r * np.cos(theta))),
    ]


def _ammonia():
    # N-H 1.012 A, H-N-H 106.67 deg; C3 axis along z, H1 in the xz plane.
    bond, hnh = 1.012, np.deg2rad(106.67)
    # distance of H from the axis from the H-H separation
    hh = 2 * bond * np.sin(hnh / 2)
    rho = hh / np.sqrt(3)
    h = np.sqrt(bond**2 - rho**2)
    atoms = [("N", (0.0, 0.0, 0.0))]
    for k in range(3):
        phi = 2 * np.pi * k / 3
        atoms.append(("H", (rho * np.cos(phi), rho * np.sin(phi), -h)))
    return atoms


MOLECULES = {
    "h2": {
        "atoms": [("H", (-0.3707, 0.0, 0.0)), ("H", (0.3707, 0.0, 0.0))],
        "operations": {"C2(z)": np.diag([-1, -1, 1]), "sigma(yz)": np.diag([-1, 1, 1])},
    },
    "lih": {
        "atoms": [("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.595))],
        "operations": {"sigma(xz)": np.diag([1, -1, 1]), "sigma(yz)": np.diag([-1, 1, 1])},
    },
    "beh2": {
        "atoms": [("Be", (0.0, 0.0, 0.0)), ("H", (1.291, 0.0, 0.0)), ("H", (-1.291, 0.0, 0.0))],
        "operations": {
            "sigma(xy)": np.diag([1, 1, -1]),
            "sigma(yz)": np.diag([-1, 1, 1]),
            "sigma(xz)": np.diag([1, -1, 1]),
        },
    },
    "h2o": {
        "atoms": _water(),
        "operations": {
            "C2(z)": np.diag([-1, -1, 1]),
            "sigma(yz)": np.diag([-1, 1, 1]),
            "sigma(xz)": np.diag([1, -1, 1]),
        },
    },
    "nh3": {
        "atoms": _ammonia(),
        "operations": {"sigma_v(xz)": np.diag([1, -1, 1])},
    },
}


def ao_signed_permutation(mol, op):
    """Map a diagonal Cartesian operation onto the AO basis as (perm, signs)."""
    coords = mol.atom_coords(unit="Angstrom")
    atom_map = []
    for r in coords:
        image = op @ r
        dist = np.linalg.norm(coords - image, axis=1)
        j = int(np.argmin(dist))
        assert dist[j] < 1e-6, "operation is not a symmetry of the geometry"
        atom_map.append(j)
    labels = mol.ao_labels(fmt=False)
    index = {(a, shell, ang): i for i, (a, _, shell, ang) in enumerate(labels)}
    axis = {"x": 0, "y": 1, "z": 2}
    perm, signs = [], []
    for a, _, shell, ang in labels:
        perm.append(index[(atom_map[a], shell, ang)])
        signs.append(int(op[axis[ang], axis[ang]]) if ang in axis else 1)
    return perm, signs


def build(name, spec):
    mol = gto.M(atom=spec["atoms"], basis="sto-3g", unit="Angstrom", symmetry=False, verbose=0)
    s = mol.intor("int1e_ovlp")
    w, u = np.linalg.eigh(s)
    x = u @ np.diag(w**-0.5) @ u.T
    h1 = x.T @ (mol.intor("int1e_kin") + mol.intor("int1e_nuc")) @ x
    n = mol.nao
    eri = ao2mo.restore(1, ao2mo.full(mol, x, compact=False), n)
    e_nuc = mol.energy_nuc()

    path = os.path.join(HERE, f"{name}.fcidump")
    fcidump.from_integrals(path, h1, eri, n, mol.nelectron, nuc=e_nuc, ms=0, tol=1e-14)

    ops = []
    for op_name, op in spec["operations"].items():
        perm, signs = ao_signed_permutation(mol, op)
        r = np.zeros((n, n))
        r[perm, range(n)] = signs
        assert np.abs(r.T @ h1 @ r - h1).max() < 1e-8, (name, op_name)
        ops.append({"name": op_name, "perm": perm, "signs": signs})
    with open(os.path.join(HERE, f"{name}.sym.json"), "w") as f:
        json.dump({"n_spatial": n, "operations": ops}, f, indent=1)

    mf = scf.RHF(mol).run()
    nelec = (mol.nelectron // 2, mol.nelectron // 2)
    e_fci, _ = fci.direct_spin1.kernel(h1, eri, n, nelec, ecore=e_nuc, conv_tol=1e-13)
    return {
        "n_spatial": n,
        "n_electrons": mol.nelectron,
        "e_hf": float(mf.e_tot),
        "e_fci": float(e_fci),
        "ao_labels": mol.ao_labels(),
    }


def build_h2_mo():
    """H2 in the canonical RHF molecular-orbital basis (sigma_g, sigma_u)."""
    spec = MOLECULES["h2"]
    mol = gto.M(atom=spec["atoms"], basis="sto-3g", unit="Angstrom", symmetry=False, verbose=0)
    mf = scf.RHF(mol).run(conv_tol=1e-12)
    c = mf.mo_coeff
    # fix MO signs so the largest AO coefficient is positive
    c = c * np.sign(c[np.argmax(np.abs(c), axis=0), range(c.shape[1])])
    h1 = c.T @ mf.get_hcore() @ c
    n = mol.nao
    eri = ao2mo.restore(1, ao2mo.full(mol, c, compact=False), n)
    e_nuc = mol.energy_nuc()
    fcidump.from_integrals(os.path.join(HERE, "h2_mo.fcidump"), h1, eri, n, mol.nelectron,
                           nuc=e_nuc, ms=0, tol=1e-14)
    # the AO swap acts on sigma_g / sigma_u as diag(+1, -1)
    ops = [{"name": "C2(z)", "perm": [0, 1], "signs": [1, -1]}]
    with open(os.path.join(HERE, "h2_mo.sym.json"), "w") as f:
        json.dump({"n_spatial": n, "operations": ops}, f, indent=1)
    e_fci, _ = fci.direct_spin1.kernel(h1, eri, n, (1, 1), ecore=e_nuc, conv_tol=1e-13)
    return {"n_spatial": n, "n_electrons": mol.nelectron, "e_hf": float(mf.e_tot),
            "e_fci": float(e_fci), "ao_labels": ["sigma_g", "sigma_u"]}


if __name__ == "__main__":
    ref = {name: build(name, spec) for name, spec in MOLECULES.items()}
    ref["h2_mo"] = build_h2_mo()
    with open(os.path.join(HERE, "reference.json"), "w") as f:
        json.dump(ref, f, indent=1)
    for name, r in ref.items():
        print(f"{name:5s} n={r['n_spatial']:2d} e_hf={r['e_hf']:.10f} e_fci={r['e_fci']:.10f}")
