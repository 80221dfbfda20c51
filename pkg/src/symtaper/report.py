"""Deterministic plain-text reports.

Qubit indices are printed 1-based; everything else (labels, generator order,
term order) follows the plan, so identical inputs give identical bytes.
"""
from __future__ import annotations

from typing import TextIO

import numpy as np

from .pauli import PauliSum
from .tapering import TaperingPlan

CONVENTION = ("H = sum_ij h1[i,j] a+_i a_j + 1/2 sum_ijkl h2[i,j,k,l] a+_i a+_j a_k a_l, "
              "h2[i,j,k,l] = (il|jk) from FCIDUMP chemist integrals; "
              "spin-orbitals blocked (alpha then beta)")


def _sector_str(s) -> str:
    return "unknown" if s is None else f"{s:+d}"


def write_report(plan: TaperingPlan, h_reduced: PauliSum, sink: TextIO, meta: dict | None = None) -> None:
    """Write the plan, per-origin counts and the reduced Hamiltonian to ``sink``."""
    meta = meta or {}
    w = sink.write
    w("# symtaper report\n")
    w(f"convention: {CONVENTION}\n")
    for key in ("fcidump", "symmetries", "mapping", "modes", "electrons"):
        if key in meta:
            w(f"{key}: {meta[key]}\n")
    w(f"qubits_before: {plan.n_qubits}\n")
    w(f"qubits_after: {h_reduced.n_qubits}\n")
    w(f"tapered: {plan.k}\n")
    for key, value in meta.get("origins", {}).items():
        w(f"tapered_by_origin {key}: {value}\n")
    if meta.get("kernel_only") is not None:
        w(f"kernel_only_tapered: {meta['kernel_only']}\n")
    for line in meta.get("pointgroup", []):
        w(f"point_group {line}\n")
    for i, g in enumerate(plan.generators):
        label = plan.labels[i] if i < len(plan.labels) else ""
        sector = plan.sector[i] if plan.sector else None
        w(f"generator {i + 1}: {g} qubit={plan.qubit_choices[i] + 1} kind={plan.kinds[i]} "
          f"sector={_sector_str(sector)} origin={label}\n")
    predicted = meta.get("predicted_sector")
    if predicted is not None:
        w("predicted_sector: " + " ".join(_sector_str(s) for s in predicted) + "\n")
    scan = meta.get("scan")
    if scan is not None:
        for sector, energy in sorted(scan.energies.items(), key=lambda t: tuple(-s for s in t[0])):
            w("scan_sector " + " ".join(_sector_str(s) for s in sector) + f": {energy:.10f}\n")
        w("scan_best: " + " ".join(_sector_str(s) for s in scan.best_sector) + "\n")
        if predicted is not None and None not in predicted:
            agree = tuple(predicted) == tuple(scan.best_sector)
            w(f"scan_agrees_with_prediction: {'yes' if agree else 'no'}\n")
    for note in meta.get("notes", []):
        w(f"note: {note}\n")
    w(f"reduced_terms: {len(h_reduced)}\n")
    w("--- reduced hamiltonian ---\n")
    w(h_reduced.to_text())


def format_rotation(v: np.ndarray) -> list[str]:
    return ["  " + " ".join(f"{x: .6f}" for x in row) for row in v]
