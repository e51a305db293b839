"""Command-line front end: ``cosserat-soliton <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 speed in a forbidden region, 4 numerical instability.

CSV floats use 17 significant digits and ``\\n`` line endings; an empty
field means the value is undefined there. Every report echoes the resolved
configuration and carries no timestamps.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__, dispersion as D, simulate as S, soliton as So, verify as V
from .errors import (CosseratError, ForbiddenRegion, InadmissibleParams, InvalidField,
                     NoSoliton, NumericalInstability, PoleError)
from .params import MaterialParams, load_params

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_FORBIDDEN, EXIT_UNSTABLE = 0, 1, 2, 3, 4
FORMS = {"exact": "exact_arcsin", "paper": "paper_arctan", "linearised": "linearised"}


class UsageError(Exception):
    """Bad command-line values (exit code 2)."""


# -- formatting ----------------------------------------------------------------

def fmt(x):
    """17-significant-digit, locale-free float; ``None`` becomes an empty field."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def sig15(x):
    """Round to 15 significant digits for JSON; infinity becomes a string."""
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "infinity" if x > 0 else "-infinity"
    return float(format(x, ".15g"))


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows, comment=None):
    lines = [] if comment is None else [f"# {comment}"]
    lines.append(",".join(header))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def emit(report, out=None):
    text = dumps(report)
    if out:
        atomic_write(out, text)
    sys.stdout.write(text)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isinf(x):
            return "infinity" if x > 0 else "-infinity"
        if math.isnan(x):
            return None
        return x
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def base_report(command, args, params: MaterialParams | None):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    rep = {"command": command, "config": _json_safe(config), "version": __version__}
    if params is not None:
        rep["params"] = params.to_dict()
    return rep


# -- derived quantities ---------------------------------------------------

def derived_dict(p: MaterialParams):
    d = D.derive(p)
    v1, v2, v3, v4 = d.roots
    return {
        "M": [[sig15(x) for x in row] for row in d.M],
        "v_elas": sig15(d.v_elas),
        "v_rot": sig15(d.v_rot),
        "v_chi_sq": sig15(d.v_chi_sq),
        "m_sq": sig15(d.m_sq),
        "m0_sq": sig15(d.m0_sq),
        "v0": sig15(d.v0),
        "roots": {"v1": sig15(v1), "v2": sig15(v2), "v3": sig15(v3), "v4": sig15(v4)},
        "roots_sq": {"v3_sq": sig15(d.v3_sq), "v4_sq": sig15(d.v4_sq)},
        "discriminant": sig15(d.discriminant),
        "det_M": sig15(d.det_M),
    }


def cmd_derive(args):
    p = load_params(args.params)
    rep = base_report("derive", args, p)
    rep["derived"] = derived_dict(p)
    emit(rep, args.out)
    return EXIT_OK


def cmd_dispersion(args):
    if not (0 <= args.v_min < args.v_max):
        raise UsageError("need 0 <= v-min < v-max")
    if args.steps < 2:
        raise UsageError("steps must be >= 2")
    p = load_params(args.params)
    d = D.derive(p)
    rows = []
    for v in np.linspace(args.v_min, args.v_max, args.steps):
        v = float(v)
        pt = D.k_of_v(p, v)
        try:
            b = D.b_of_v(p, v)
            mass = d.m_sq + b
        except PoleError:
            b = mass = None
        rows.append((v, pt.k if pt.defined else None, b, mass, pt.defined))
    atomic_write(args.out, csv_text(("v", "k", "b", "m2_plus_b", "defined"), rows))
    rep = base_report("dispersion", args, p)
    rep["outputs"] = [str(args.out)]
    rep["rows"] = len(rows)
    rep["defined_rows"] = sum(1 for r in rows if r[-1])
    emit(rep)
    return EXIT_OK


def cmd_classify(args):
    p = load_params(args.params)
    c = D.classify(p)
    rep = base_report("classify", args, p)
    rep["regime"] = c.regime
    rep["boundary"] = c.boundary
    rep["notes"] = c.notes
    rep["roots"] = derived_dict(p)["roots"]
    rep["v0"] = sig15(c.v0)
    rep["allowed_intervals"] = [
        {"lo": sig15(i.lo), "hi": sig15(i.hi), "lo_closed": i.lo_closed,
         "hi_closed": i.hi_closed} for i in c.allowed_intervals]
    emit(rep, args.out)
    return EXIT_OK


def _forbidden_message(p, v):
    """Name the gap between allowed intervals that contains ``v``."""
    lo, hi = 0.0, math.inf
    for i in D.classify(p).allowed_intervals:
        if i.hi <= v:
            lo = max(lo, i.hi)
        if i.lo >= v:
            hi = min(hi, i.lo)
    return f"v = {v} lies in the forbidden interval ({lo:.15g}, {hi:.15g})"


def _make_solution(p, v, form):
    try:
        return So.make_soliton(p, v, form=form)
    except ForbiddenRegion as exc:
        raise ForbiddenRegion(f"{_forbidden_message(p, abs(v))} ({exc})") from exc


def cmd_soliton(args):
    if args.n < 2 or not args.z_max > args.z_min:
        raise UsageError("need n >= 2 and z-max > z-min")
    p = load_params(args.params)
    form = FORMS[args.form]
    sol = _make_solution(p, args.v, form)
    z = np.linspace(args.z_min, args.z_max, args.n)
    t = args.t
    if form == "linearised":
        phi = So.phi_linearised(p, args.v, z, t)
        branch = np.ones_like(z, dtype=int)
    elif form == "paper_arctan":
        phi, branch = So.phi_paper_arctan(sol, z, t)
    else:
        phi = So.phi_exact(sol, z, t)
        branch = np.ones_like(z, dtype=int)
    phi_z = So.phi_derivatives(sol, z, t)["phi_z"]
    if form == "paper_arctan":
        phi_z = np.gradient(phi, z, edge_order=2)
    disp = So.psi_quadrature(sol, z, t, constant=args.psi_constant)
    closed = So.psi_closed_form(sol, z, t)
    rows = []
    for i in range(args.n):
        rows.append((z[i], phi[i], disp.psi[i], phi_z[i], disp.psi_z[i], int(branch[i]),
                     closed.value[i] if closed.defined else None, closed.defined))
    header = ("z", "phi", "psi", "phi_z", "psi_z", "branch", "psi_closed", "psi_closed_defined")
    atomic_write(args.out, csv_text(header, rows))
    rep = base_report("soliton", args, p)
    rep["solution"] = {"k": sol.k, "m_sq": sol.m_sq, "b": sol.b, "delta": sol.delta,
                       "form": sol.form, "switch_point": So.paper_switch_point(sol, t),
                       "background_strain": disp.background_strain}
    rep["psi_closed_form"] = {"defined": closed.defined, "reason": closed.reason}
    rep["outputs"] = [str(args.out)]
    emit(rep)
    return EXIT_OK


def _parse_dt(text):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError as exc:
        raise UsageError(f"dt must be 'auto' or a number, got {text!r}") from exc
    if not value > 0:
        raise UsageError("dt must be positive")
    return value


def cmd_simulate(args):
    if args.snapshots < 1:
        raise UsageError("snapshots must be >= 1")
    if args.t_end < 0:
        raise UsageError("t-end must be >= 0")
    p = load_params(args.params)
    sol = _make_solution(p, args.v, "exact_arcsin")
    state, analytic = S.soliton_initial(sol, args.z_min, args.z_max, args.n,
                                        constant=args.psi_constant)
    cfg = S.SimConfig(t_end=args.t_end, dt=_parse_dt(args.dt), scheme=args.scheme)
    _, steps = S.resolve_dt(cfg, p, state.h)
    every = 0 if args.snapshots == 1 or steps == 0 else max(1, steps // (args.snapshots - 1))
    snaps, metrics = S.run(state, S.SimConfig(t_end=cfg.t_end, dt=cfg.dt, scheme=cfg.scheme,
                                              record_every=every), p, analytic=analytic)
    if steps == 0:
        snaps = snaps[:1]
    out_dir = Path(args.out_dir)
    outputs = []
    for i, st in enumerate(snaps):
        rows = zip(st.z, st.phi, st.psi, st.phi_t, st.psi_t)
        name = out_dir / f"fields_{i}.csv"
        atomic_write(name, csv_text(("z", "phi", "psi", "phi_t", "psi_t"), rows,
                                    comment=f"t={fmt(st.t)}"))
        outputs.append(str(name))
    mdict = metrics.to_dict()
    atomic_write(out_dir / "metrics.json", dumps(_json_safe(mdict)))
    outputs.append(str(out_dir / "metrics.json"))
    rep = base_report("simulate", args, p)
    rep["metrics"] = _json_safe(mdict)
    rep["outputs"] = outputs
    emit(rep)
    return EXIT_OK


def cmd_verify(args):
    seed = int(os.environ.get("COSSERAT_SEED", V.DEFAULT_SEED))
    tolerances = None
    if args.tolerances:
        try:
            tolerances = json.loads(Path(args.tolerances).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read tolerances file: {exc}") from exc
        if not isinstance(tolerances, dict):
            raise UsageError("tolerances file must hold a JSON object")
    try:
        report = V.run_suites(args.suite, seed=seed, tolerances=tolerances)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    report = _json_safe(report)
    report["config"] = {"suite": args.suite, "seed": seed, "tolerances": args.tolerances}
    emit(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


# -- parser ----------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="cosserat-soliton",
                                 description="One-axis Cosserat solitons: dispersion, "
                                             "closed forms and simulation.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="coupling matrix, speeds and roots as JSON")
    p.add_argument("--params", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("dispersion", help="sweep k(v) into a CSV")
    p.add_argument("--params", required=True)
    p.add_argument("--v-min", type=float, required=True)
    p.add_argument("--v-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("classify", help="regime label and allowed speed intervals")
    p.add_argument("--params", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("soliton", help="sample phi and psi of a traveling kink")
    p.add_argument("--params", required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--form", choices=sorted(FORMS), default="exact")
    p.add_argument("--z-min", type=float, default=-20.0)
    p.add_argument("--z-max", type=float, default=20.0)
    p.add_argument("--n", type=int, default=801)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--psi-constant", choices=So.CONSTANTS, default="decaying")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_soliton)

    p = sub.add_parser("simulate", help="propagate the analytic kink with the coupled PDE")
    p.add_argument("--params", required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--z-min", type=float, default=-40.0)
    p.add_argument("--z-max", type=float, default=40.0)
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--dt", default="auto")
    p.add_argument("--snapshots", type=int, default=11)
    p.add_argument("--scheme", choices=S.SCHEMES, default="leapfrog")
    p.add_argument("--psi-constant", choices=So.CONSTANTS, default="zero")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--suite", choices=V.SUITES + ("all",), default="all")
    p.add_argument("--tolerances", help="JSON object overriding named tolerances")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (InadmissibleParams, UsageError, InvalidField) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ForbiddenRegion, NoSoliton, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORBIDDEN
    except NumericalInstability as exc:
        print(f"error: numerical instability at step {exc.step}: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except CosseratError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
