"""Command-line front end.

Every command prints one envelope on stdout (``--format json``, the default),
a CSV table, or a rounded human-readable table.  Errors go to stderr as
``error_code: <kind>: <message>`` with exit status 2 for usage or domain
errors and 3 for numerical failures.

CSV columns (frozen):

    ed                  n_down,index,re,im,partner
    bethe               index,re_mu,im_mu,kind,quantum_number
    thermo states       key,label,sz,re_e,im_e,sector
    thermo e0           sites,xi,chi,e0
    thermo bound        side,re,im
    thermo density      mu,re_rho,im_rho
    magnon roots        index,re_mu,im_mu,re_e,im_e
    magnon wavefunction x,re_f,im_f,abs2,p
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import bae, ed, magnon, thermo
from .core import (ChainSpec, DomainError, Reference, classify_phase, fields_from_h,
                   pt_fields)

SCHEMA_VERSION = "1"
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class NumericalFailure(RuntimeError):
    def __init__(self, message, dump=""):
        super().__init__(message)
        self.dump = dump


# --------------------------------------------------------------------------- formatting


def _num(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def _json(value, indent=0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, (bool, int, float, np.integer, np.floating)):
        return _num(value)
    if isinstance(value, Fraction):
        return _json(str(value))
    if isinstance(value, str):
        out = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{_json(str(k))}: {_json(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(_json(v) for v in value) + "]"
        return "[\n" + ",\n".join(pad + _json(v, indent + 1) for v in value) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _cell(value, rounded: bool) -> str:
    if isinstance(value, (float, np.floating)):
        if rounded:
            return f"{float(value):.6g}"
        return _num(value)
    if value is None:
        return ""
    return str(value)


def _emit(fmt: str, command: str, inputs: dict, results: dict, table, warnings) -> str:
    if fmt == "json":
        env = {"schema_version": SCHEMA_VERSION, "command": command, "inputs": inputs,
               "results": results, "warnings": list(warnings)}
        return _json(env) + "\n"
    header, rows = table
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v, False) for v in row])
        return buf.getvalue()
    cells = [list(header)] + [[_cell(v, True) for v in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = ["  ".join(c.rjust(wd) for c, wd in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * wd for wd in widths))
    return "\n".join(lines) + "\n"


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


# --------------------------------------------------------------------------- argument helpers


def parse_complex(text: str) -> complex:
    """``a+bi`` / ``a-bi`` / ``bi`` / ``a`` literals (``j`` also accepted)."""
    s = text.strip().replace(" ", "").lower().replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _add_fields(p: argparse.ArgumentParser):
    g = p.add_argument_group("boundary fields (either xi/chi or h1/hN)")
    g.add_argument("--xi", type=float, help="real part of xi_minus = 1/h1")
    g.add_argument("--chi", type=float, default=None,
                   help="imaginary part, xi_minus = xi + i chi, xi_plus = xi - i chi")
    g.add_argument("--h1", type=parse_complex, help="field at site 1, e.g. 2-0.5i")
    g.add_argument("--hn", type=parse_complex, help="field at site N")
    for name in ("h1-re", "h1-im", "hn-re", "hn-im"):
        g.add_argument(f"--{name}", type=float)


def _fields(args):
    parts = [args.h1_re, args.h1_im, args.hn_re, args.hn_im]
    if args.xi is not None:
        if args.h1 is not None or args.hn is not None or any(v is not None for v in parts):
            raise DomainError("give either --xi/--chi or the h flags, not both")
        return pt_fields(args.xi, args.chi or 0.0)
    h1, hn = args.h1, args.hn
    if any(v is not None for v in parts):
        h1 = complex(args.h1_re or 0.0, args.h1_im or 0.0)
        hn = complex(args.hn_re or 0.0, args.hn_im or 0.0)
    if h1 is None or hn is None:
        raise DomainError("boundary fields required: --xi/--chi or --h1/--hn")
    return fields_from_h(h1, hn)


def _fields_echo(fields) -> dict:
    out = {"h1": _cplx(fields.h1), "hN": _cplx(fields.hN),
           "xi_minus": _cplx(fields.xi_minus), "xi_plus": _cplx(fields.xi_plus)}
    if fields.is_pt:
        out["xi"] = fields.xi
        out["chi"] = fields.chi
    return out


def _int_list(text: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _side_list(text: str) -> list[str]:
    sides = [t.strip().upper() for t in text.split(",") if t.strip()]
    if not set(sides) <= {"L", "R"} or len(set(sides)) != len(sides):
        raise argparse.ArgumentTypeError("strings must be L, R or L,R")
    return sides


def _grid(text: str) -> np.ndarray:
    """``start:stop:num`` (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return np.linspace(float(start), float(stop), int(num))
        return np.array([float(t) for t in text.split(",") if t.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


# --------------------------------------------------------------------------- commands


def cmd_ed(args):
    fields = _fields(args)
    N = args.sites
    sectors = [args.sector] if args.sector is not None else list(range(N + 1))
    results = {"sectors": []}
    rows = []
    warnings = []
    matrices = [ed.build_sector(N, n, fields) for n in sectors]
    # sectors are independent; map() keeps the output order fixed
    with ThreadPoolExecutor() as pool:
        reports = list(pool.map(lambda m: ed.sector_spectrum(m, args.tol), matrices))
    for n, rep in zip(sectors, reports):
        partner = {}
        for i, j in rep.pairing.pairs:
            partner[i], partner[j] = j, i
        results["sectors"].append({
            "n_down": n,
            "sz": str(Fraction(N, 2) - n),
            "dim": len(rep.eigenvalues),
            "eigenvalues": [_cplx(e) for e in rep.eigenvalues],
            "pairs": [list(p) for p in rep.pairing.pairs],
            "unpaired": rep.pairing.unpaired,
            "max_pair_defect": rep.max_pair_defect,
        })
        if rep.pairing.unpaired:
            warnings.append(f"sector n_down={n}: {len(rep.pairing.unpaired)} unpaired complex eigenvalues")
        for k, e in enumerate(rep.eigenvalues):
            rows.append((n, k, e.real, e.imag, partner.get(k)))
    results["total_unpaired"] = sum(len(s["unpaired"]) for s in results["sectors"])
    inputs = {"sites": N, "sector": args.sector, "tol": args.tol, "fields": _fields_echo(fields)}
    return inputs, results, (["n_down", "index", "re", "im", "partner"], rows), warnings


def _read_seed(path):
    with open(path, encoding="utf-8") as fh:
        return [float(line.split("#")[0]) for line in fh if line.split("#")[0].strip()]


def cmd_bethe(args):
    fields = _fields(args)
    ref = Reference.parse(args.reference)
    spec = ChainSpec(args.sites, args.magnons, ref)
    sides = args.strings or []
    n_real = spec.M - len(sides)
    if n_real < 0:
        raise DomainError("more strings than magnons")
    ladder = [i for i in range(1, n_real + len(args.holes) + 1) if i not in set(args.holes)]
    ladder = ladder[:n_real]
    seed = _read_seed(args.seed_file) if args.seed_file else None
    warnings = []
    if sides:
        rep = bae.refine_boundary_strings(spec, fields, ladder, sides, real_seed=seed)
    else:
        rep = bae.solve_real_roots(spec, fields, ladder, seed)
    roots = rep.roots
    if not rep.converged:
        dump = "\n".join(f"{k} {_num(m.real)} {_num(m.imag)}" for k, m in enumerate(roots.roots))
        if roots.mu.size and np.max(np.abs(roots.mu)) > bae.ESCAPE_BOUND:
            warnings.append("a root escaped to infinity: no finite all-real solution for this ladder")
        raise NumericalFailure(
            f"Bethe solve did not converge after {rep.iterations} iterations, "
            f"residual {rep.final_residual_norm:.3e}" + ("; " + warnings[0] if warnings else ""),
            dump)
    energy = bae.energy_from_roots(roots)
    tq = bae.tq_regularity_check(roots) if spec.M else 0.0
    results = {
        "converged": rep.converged,
        "iterations": rep.iterations,
        "residual_norm": rep.final_residual_norm,
        "energy": _cplx(energy),
        "tq_regularity": tq,
        "max_abs_imag_real_roots": max([abs(m.imag) for m, k in zip(roots.roots, roots.kinds)
                                        if k is bae.RootKind.REAL], default=0.0),
        "roots": [{"re": m.real, "im": m.imag, "kind": k.value,
                   "quantum_number": (roots.quantum_numbers[i]
                                      if i < len(roots.quantum_numbers) else None)}
                  for i, (m, k) in enumerate(zip(roots.roots, roots.kinds))],
    }
    if rep.string_offsets:
        results["string_offsets"] = {s: _cplx(v) for s, v in rep.string_offsets.items()}
    rows = [(i, r["re"], r["im"], r["kind"], r["quantum_number"]) for i, r in enumerate(results["roots"])]
    inputs = {"sites": spec.N, "magnons": spec.M, "reference": ref.value, "strings": sides,
              "holes": args.holes, "seed_file": args.seed_file, "fields": _fields_echo(fields)}
    return inputs, results, (["index", "re_mu", "im_mu", "kind", "quantum_number"], rows), warnings


def cmd_thermo(args):
    fields = _fields(args)
    inputs = {"fields": _fields_echo(fields)}
    warnings = []
    if args.thermo_cmd == "states":
        phase = classify_phase(fields)
        parity = thermo.Parity(args.parity)
        N = args.sites
        if N is not None and thermo.Parity.of(N) is not parity:
            raise DomainError(f"--sites {N} does not have parity {parity.value}")
        states = thermo.enumerate_states(phase, parity, args.theta)
        rows, out = [], []
        if N is None:
            warnings.append("no --sites given: energies are reported relative to E0")
        probe = N if N is not None else (11 if parity is thermo.Parity.ODD else 10)
        for st in states:
            E = thermo.state_energy(st, fields, probe)
            if N is None:
                E -= thermo.ground_energy(fields, probe)
            sz = thermo.sz_of(st, probe, fields)
            sector = thermo.pt_sector(st, fields)
            rows.append((st.key, st.label, str(sz), E.real, E.imag, sector))
            out.append({"key": st.key, "label": st.label, "sz": str(sz),
                        "roots": str(thermo.count_roots(st, N, fields)) if N else None,
                        "energy": _cplx(E), "sector": sector})
        inputs.update({"phase": phase.value, "parity": parity.value, "sites": N, "theta": args.theta})
        return inputs, {"phase": phase.value, "states": out}, \
            (["key", "label", "sz", "re_e", "im_e", "sector"], rows), warnings
    if args.thermo_cmd == "e0":
        val = thermo.e0(fields, args.sites)
        ground = thermo.ground_energy(fields, args.sites)
        inputs["sites"] = args.sites
        return inputs, {"e0": val, "ground_energy": ground}, \
            (["sites", "xi", "chi", "e0"], [(args.sites, fields.xi, fields.chi, val)]), warnings
    if args.thermo_cmd == "bound":
        sides = ["L", "R"] if args.side is None else [args.side.upper()]
        vals = {s: thermo.bound_energy(s, fields) for s in sides}
        re, im = thermo.bound_energy_parts(fields)
        inputs["side"] = args.side
        results = {"bound_energy": {s: _cplx(v) for s, v in vals.items()},
                   "left_parts": {"re": re, "im": im}}
        return inputs, results, (["side", "re", "im"], [(s, v.real, v.imag) for s, v in vals.items()]), warnings
    # density
    phase = classify_phase(fields)
    parity = thermo.Parity.of(args.sites)
    st = thermo.find_state(args.state, phase, parity, args.theta)
    dens = thermo.density_realspace(st, fields, args.sites, args.grid)
    rho = np.asarray(dens.rho, dtype=complex)
    if dens.atoms:
        warnings.append("delta-function parts are listed under results.atoms, not in the grid values")
    inputs.update({"state": args.state, "sites": args.sites, "theta": args.theta,
                   "grid": [float(m) for m in dens.mu]})
    results = {"label": st.label, "roots": str(thermo.count_roots(st, args.sites, fields)),
               "atoms": [{"mu": m, "weight": w} for m, w in dens.atoms],
               "density": [{"mu": m, "re": r.real, "im": r.imag} for m, r in zip(dens.mu, rho)]}
    rows = [(m, r.real, r.imag) for m, r in zip(dens.mu, rho)]
    return inputs, results, (["mu", "re_rho", "im_rho"], rows), warnings


def cmd_magnon(args):
    fields = _fields(args)
    N = args.sites
    inputs = {"sites": N, "fields": _fields_echo(fields)}
    if args.magnon_cmd == "roots":
        roots = magnon.one_magnon_roots(N, fields)
        energies = [magnon.magnon_energy(m, N, fields) for m in roots]
        rows = [(k, m.real, m.imag, e.real, e.imag) for k, (m, e) in enumerate(zip(roots, energies))]
        results = {"roots": [{"mu": _cplx(m), "energy": _cplx(e)} for m, e in zip(roots, energies)]}
        return inputs, results, (["index", "re_mu", "im_mu", "re_e", "im_e"], rows), []
    if args.bound is not None:
        prof = magnon.bound_mode_wavefunction(args.bound, fields, N)
        extra = {"bound": args.bound.upper(),
                 "localization_length": magnon.localization_length(args.bound, fields)}
    elif args.mu is not None:
        prof = magnon.magnon_wavefunction(args.mu, fields, N)
        extra = {"mu": _cplx(args.mu)}
    else:
        raise DomainError("wavefunction needs --mu or --bound")
    inputs.update({k: v for k, v in extra.items() if k != "localization_length"})
    rows = [(int(x), a.real, a.imag, abs(a) ** 2, p)
            for x, a, p in zip(prof.x, prof.amplitude, prof.probability)]
    results = dict(extra)
    results["profile"] = [{"x": r[0], "re": r[1], "im": r[2], "abs2": r[3], "p": r[4]} for r in rows]
    return inputs, results, (["x", "re_f", "im_f", "abs2", "p"], rows), []


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv", "table"), default="json")

    parser = argparse.ArgumentParser(
        prog="ptbethe", description="Open PT-symmetric XXX chain: Bethe ansatz, closed forms, ED.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ed", parents=[fmt], help="exact diagonalization spectra")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--sector", type=int, help="number of down spins (default: all sectors)")
    p.add_argument("--tol", type=float, default=ed.PAIR_TOL, help="conjugate-pairing tolerance")
    _add_fields(p)
    p.set_defaults(func=cmd_ed)

    p = sub.add_parser("bethe", parents=[fmt], help="solve the finite-N Bethe equations")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--magnons", type=int, required=True)
    p.add_argument("--reference", choices=("up", "down"), default="up")
    p.add_argument("--strings", type=_side_list, help="boundary strings to add: L, R or L,R")
    p.add_argument("--holes", type=_int_list, default=[], help="quantum numbers to skip, e.g. 2,5")
    p.add_argument("--seed-file", help="file with one real seed root per line")
    _add_fields(p)
    p.set_defaults(func=cmd_bethe)

    p = sub.add_parser("thermo", help="thermodynamic closed forms")
    tsub = p.add_subparsers(dest="thermo_cmd", required=True)
    q = tsub.add_parser("states", parents=[fmt], help="elementary-state catalog")
    q.add_argument("--parity", choices=("odd", "even"), required=True)
    q.add_argument("--sites", type=int)
    q.add_argument("--theta", type=float, default=1.0, help="spinon rapidity")
    _add_fields(q)
    q = tsub.add_parser("e0", parents=[fmt], help="ground-state energy formula")
    q.add_argument("--sites", type=int, required=True)
    _add_fields(q)
    q = tsub.add_parser("bound", parents=[fmt], help="boundary bound-state energies")
    q.add_argument("--side", choices=("L", "R", "l", "r"))
    _add_fields(q)
    q = tsub.add_parser("density", parents=[fmt], help="real-space root density")
    q.add_argument("--state", required=True, help="catalog key, e.g. down, down+L+th")
    q.add_argument("--sites", type=int, required=True)
    q.add_argument("--grid", type=_grid, default=_grid("-5:5:101"), help="start:stop:num or list")
    q.add_argument("--theta", type=float, default=1.0)
    _add_fields(q)
    p.set_defaults(func=cmd_thermo)

    p = sub.add_parser("magnon", help="one-magnon sector")
    msub = p.add_subparsers(dest="magnon_cmd", required=True)
    q = msub.add_parser("roots", parents=[fmt], help="all one-magnon rapidities")
    q.add_argument("--sites", type=int, required=True)
    _add_fields(q)
    q = msub.add_parser("wavefunction", parents=[fmt], help="site amplitudes")
    q.add_argument("--sites", type=int, required=True)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--mu", type=parse_complex, help="rapidity a+bi")
    g.add_argument("--bound", choices=("L", "R", "l", "r"))
    _add_fields(q)
    p.set_defaults(func=cmd_magnon)
    return parser


# flags whose values may start with '-' (negative grids, complex literals)
_SIGNED_FLAGS = ("--grid", "--h1", "--hn", "--mu", "--xi", "--chi")


def _join_signed(argv: list[str]) -> list[str]:
    out, k = [], 0
    while k < len(argv):
        if argv[k] in _SIGNED_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            out.append(f"{argv[k]}={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_signed(list(sys.argv[1:] if argv is None else argv)))
    command = args.command + "".join(
        f" {getattr(args, k)}" for k in ("thermo_cmd", "magnon_cmd") if getattr(args, k, None))
    try:
        inputs, results, table, warnings = args.func(args)
    except DomainError as exc:
        print(f"error_code: domain: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"error_code: numerical: {exc}", file=sys.stderr)
        if exc.dump:
            print(exc.dump, file=sys.stderr)
        return EXIT_NUMERIC
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error_code: numerical: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.format != "json":
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
    sys.stdout.write(_emit(args.format, command, inputs, results, table, warnings))
    return 0


if __name__ == "__main__":
    sys.exit(main())
