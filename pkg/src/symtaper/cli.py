"""``symtaper`` command line: symmetries, taper, verify.

Exit codes: 0 success, 2 usage, 3 parse, 4 symmetry invariance failure,
5 verification failure.
"""
from __future__ import annotations

import argparse
import io
import sys

from . import gf2
from .fermion import MappingKind
from .integrals import FCIDumpError, parse_fcidump
from .pauli import DROP_TOL, PauliSum
from .pipeline import (PointGroupInfo, RunConfig, RunResult, UsageError, analyze_pointgroup,
                       reduced_path, run, verify)
from .pointgroup import INVARIANCE_TOL, SymmetryError
from .report import format_rotation, write_report

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SYMMETRY, EXIT_VERIFY = 0, 2, 3, 4, 5


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symtaper", description="Taper qubits using Z2 and point-group symmetries.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("symmetries", "taper", "verify"):
        s = sub.add_parser(name)
        s.add_argument("--fcidump", required=True)
        s.add_argument("--symmetries", dest="symfile")
        s.add_argument("--mapping", choices=["jw", "parity"], default="jw")
        s.add_argument("--no-auto-z2", action="store_true")
        s.add_argument("--sector-scan", action="store_true")
        s.add_argument("--out")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--tol-invariance", type=float, default=INVARIANCE_TOL)
        s.add_argument("--tol-drop", type=float, default=DROP_TOL)
        if name == "verify":
            s.add_argument("--reduced", help="reduced Hamiltonian from a previous taper run")
    return p


def _config(args) -> RunConfig:
    return RunConfig(fcidump=args.fcidump, symmetries=args.symfile, mapping=args.mapping,
                     auto_z2=not args.no_auto_z2, sector_scan=args.sector_scan, out=args.out,
                     seed=args.seed, tol_invariance=args.tol_invariance, tol_drop=args.tol_drop)


def _pointgroup_lines(info: PointGroupInfo | None) -> list[str]:
    if info is None:
        return []
    lines = [f"invariance {name}: {'symmetric' if ok else 'BROKEN'} (max deviation {dev:.3e})"
             for name, ok, dev in info.verdicts]
    lines += [f"kept {op.name}" for op in info.kept]
    lines += [f"dropped {note}" for note in info.notes]
    for z, s in zip(info.z_symmetries, info.strings):
        support = " ".join(str(p + 1) for p in sorted(z.support))
        lines.append(f"z_string {z.name}: {s.label} (modes {support})")
    return lines


def _meta(res: RunResult) -> dict:
    cfg = res.config
    return {
        "fcidump": cfg.fcidump,
        "symmetries": cfg.symmetries or "none",
        "mapping": MappingKind.parse(cfg.mapping).value,
        "modes": res.ints.n_modes,
        "electrons": f"alpha={res.ints.n_alpha} beta={res.ints.n_beta}",
        "origins": res.origins,
        "kernel_only": res.kernel_only_count,
        "pointgroup": _pointgroup_lines(res.pointgroup),
        "predicted_sector": res.predicted_sector,
        "scan": res.scan,
        "notes": res.notes,
    }


def render_report(res: RunResult) -> str:
    buf = io.StringIO()
    write_report(res.plan, res.h_reduced, buf, _meta(res))
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_symmetries(cfg: RunConfig) -> str:
    cfg.validate()
    kind = MappingKind.parse(cfg.mapping)
    from .fermion import map_hamiltonian

    ints = parse_fcidump(cfg.fcidump)
    h = map_hamiltonian(ints, kind, cfg.tol_drop)
    lines = ["# symtaper symmetries", f"fcidump: {cfg.fcidump}", f"qubits: {h.n_qubits}"]
    kernel = gf2.find_symmetries(h) if cfg.auto_z2 else []
    if cfg.auto_z2:
        lines.append(f"kernel_generators: {len(kernel)}")
        lines += [f"  {g.label}" for g in kernel]
    if cfg.pointgroup:
        info = analyze_pointgroup(ints, cfg.symmetries, kind, cfg.tol_invariance)
        lines += ["point_group " + line for line in _pointgroup_lines(info)]
        if info.rotation is not None:
            lines.append("rotation V (spatial orbitals):")
            lines += format_rotation(info.rotation.v)
        # span test against the kernel of the unrotated Hamiltonian
        extra = [z.name for z, s in zip(info.z_symmetries, info.strings) if not gf2.in_span(s, kernel)]
        lines.append("point_group_not_in_kernel: " + (", ".join(extra) if extra else "none"))
        res = run(cfg, ints)
        lines.append(f"tapered_with_point_group: {res.plan.k}")
        lines.append(f"tapered_kernel_only: {res.kernel_only_count}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    stage = "setup"
    try:
        cfg = _config(args)
        cfg.validate()
        if args.command == "symmetries":
            stage = "symmetries"
            _emit(cmd_symmetries(cfg), cfg.out)
            return EXIT_OK
        stage = "taper"
        if args.command == "taper":
            res = run(cfg)
            _emit(render_report(res), cfg.out)
            if cfg.out:
                with open(reduced_path(cfg.out), "w") as f:
                    f.write(res.h_reduced.to_text())
            return EXIT_OK
        stage = "verify"
        res = run(cfg)
        h_reduced = res.h_reduced
        if args.reduced:
            with open(args.reduced) as f:
                h_reduced = PauliSum.from_text(f.read())
        v = verify(res.h_full, h_reduced, seed=cfg.seed)
        fmt = lambda e: "n/a" if e is None else f"{e:.12f}"
        text = (f"# symtaper verify\nfcidump: {cfg.fcidump}\nqubits_full: {res.h_full.n_qubits}\n"
                f"qubits_tapered: {h_reduced.n_qubits}\nfull_min_eigenvalue: {fmt(v.full_energy)}\n"
                f"tapered_min_eigenvalue: {fmt(v.tapered_energy)}\n"
                f"difference: {'n/a' if v.difference is None else f'{v.difference:.3e}'}\nstatus: {v.status}\n")
        _emit(text, cfg.out)
        return EXIT_OK if v.ok else EXIT_VERIFY
    except UsageError as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FCIDumpError, OSError) as exc:
        print(f"error [parse]: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SymmetryError as exc:
        print(f"error [{stage}:point-group]: {exc}", file=sys.stderr)
        return EXIT_SYMMETRY


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
