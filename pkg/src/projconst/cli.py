"""Command-line front end: ``projconst <command> [options]``.

Every command builds a report dictionary. ``--format json`` (the default)
prints it with sorted keys, so identical arguments give identical bytes.
``csv`` prints a table with 17 significant digits and ``text`` a readable
summary that also carries the wall time.

Exit codes: 0 success, 1 other input error, 2 schema violation,
3 solver failure, 4 unsupported construction or method.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import math
import sys
import time

import numpy as np

from . import io
from .equiangular import (
    construct_known_system,
    extremal_parameters,
    rank_one_independence,
    tight_frame_residual,
    verify_equiangular,
)
from .errors import (
    ProjConstError,
    SchemaError,
    SolverError,
    UnsupportedConstructionError,
    UnsupportedMethodError,
)
from .minproj import SubspaceBasis, bounds_summary, minimal_projection, orthogonal_projection
from .norms import TABLE_SPACES, NormedSpaceSpec, norm_from_system, table_functionals, table_norm, table_space
from .phi import (
    R4_UPPER,
    PhiProblem,
    curvature_check,
    gamma_tools,
    kkt_diagnostics,
    maximize_phi,
    projected_hessian_check,
    r4_example_scan,
    sphere_moment,
)
from .phi.moments import sphere_moment_quadrature

EXIT_OK, EXIT_INPUT, EXIT_SCHEMA, EXIT_SOLVER, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4

SPACE_SYSTEMS = {
    "R2-hexagon": ("real", 2),
    "R3-dodecahedron": ("real", 3),
    "R7": ("real", 7),
    "R23": ("real", 23),
    "C2": ("complex", 2),
    "C3": ("complex", 3),
}

# best values the optimizer is expected to reach for small (n, N, field)
PHI_TARGETS = {
    (2, 3, "real"): 4 / 3,
    (3, 6, "real"): (1 + math.sqrt(5)) / 2,
    (4, 10, "real"): 1.8494,
    (2, 4, "complex"): (1 + math.sqrt(3)) / 2,
    (3, 9, "complex"): 5 / 3,
}


def _reproduced(label, expected, computed):
    return {"label": label, "expected": expected, "computed": computed, "abs_deviation": abs(computed - expected)}


def _clean(obj):
    """Convert numpy scalars and arrays to JSON types; NaN and inf become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _fields(args):
    return [args.field] if args.field else ["real"]


def _known_system(args):
    if args.input:
        return io.line_system_from_dict(io.read_json(args.input))
    if args.n is None:
        raise SchemaError("give --input or --n (and --field)", "--n")
    return construct_known_system(args.n, args.field or "real")


# --- commands ---------------------------------------------------------------------

def cmd_bounds(args):
    dims = [args.n] if args.n is not None else list(range(1, 11))
    rows, reproduced = [], []
    for field in _fields(args):
        for n in dims:
            summary = bounds_summary(n, field)
            rows.append({"n": n, "field": field, **summary})
            space = next((s for s in TABLE_SPACES.values() if (s.field, s.n) == (field, n)), None)
            if space is not None:
                reproduced.append(_reproduced(f"projection bound G({n}, {field}), table {space.space_id}",
                                              space.lam, summary["G"]))
    return {"rows": rows, "reproduced": reproduced}


def cmd_construct(args):
    if args.n is None:
        raise SchemaError("construct needs --n", "--n")
    system = construct_known_system(args.n, args.field or "real")
    cert = verify_equiangular(system)
    return {"system": io.line_system_to_dict(system), "certificate": cert.__dict__}


def cmd_verify(args):
    system = _known_system(args)
    cert = verify_equiangular(system, args.tol if args.tol is not None else 1e-12)
    weighted = system if system.weights is not None else system.uniform()
    independent, rank = rank_one_independence(system)
    N_max, forced = extremal_parameters(system.n, system.field)
    return {
        "system": io.line_system_to_dict(system),
        "certificate": {
            **cert.__dict__,
            "forced_angle": forced,
            "gerzon_bound": N_max,
            "tight_frame_residual": tight_frame_residual(weighted),
            "tight_frame_weights": "given" if system.weights is not None else "uniform",
            "rank_one_independent": independent,
            "rank_one_rank": rank,
            "minimal": system.is_minimal(),
        },
    }


def _basis_for(args):
    if args.space:
        field, n = SPACE_SYSTEMS.get(args.space, (None, None))
        if field is None:
            raise SchemaError(f"unknown space id {args.space!r}; choose from {sorted(SPACE_SYSTEMS)}", "--space")
        system = construct_known_system(n, field)
        return SubspaceBasis.from_system(system), system, table_space(args.space).lam
    if args.input:
        doc = io.read_json(args.input)
        inner = io._unwrap(doc, "basis")
        if isinstance(inner, dict) and "F" in inner:
            return io.subspace_basis_from_dict(inner), None, None
        system = io.line_system_from_dict(doc)
        return SubspaceBasis.from_system(system), system, None
    system = _known_system(args)
    return SubspaceBasis.from_system(system), system, None


def cmd_minproj(args):
    basis, system, expected = _basis_for(args)
    method = args.method or ("lp-exact" if basis.field == "real" else "descent")
    res = minimal_projection(basis, method, restarts=args.restarts, iters=args.iters, seed=args.seed)
    out = {
        "basis": io.subspace_basis_to_dict(basis),
        "value": res.norm,
        "method": res.method,
        "idempotency_residual": res.idempotency_residual,
        "range_residual": res.range_residual,
        "certificate": {"lower_bound": res.lower_bound},
        "P": io._encode_matrix(res.P),
        "reproduced": [],
    }
    if system is not None and system.N > system.n:
        out["orthogonal_projection_norm"] = orthogonal_projection(system).norm
    if expected is not None:
        out["reproduced"].append(_reproduced(f"projection constant, table {args.space}", expected, res.norm))
    return out


def cmd_phi(args):
    hessian = None
    if args.input:
        state = io.phi_state_from_dict(io.read_json(args.input))
    else:
        if args.n is None or args.N is None:
            raise SchemaError("phi needs --n and --N (or --input)", "--n")
        problem = PhiProblem(args.n, args.N, args.field or "real")
        state = maximize_phi(problem, restarts=args.restarts, iters=args.iters, seed=args.seed)
    diag = kkt_diagnostics(state)
    if args.hessian:
        check = projected_hessian_check(state)
        hessian = {"max_tangent_eigenvalue": check.max_tangent_eigenvalue,
                   "tangent_dimension": check.tangent_dimension, "passed": check.passed()}
    out = {
        "state": io.phi_state_to_dict(state),
        "kkt": {
            "alpha_eigs": diag.alpha_eigs,
            "alpha_spread": diag.alpha_spread,
            "beta": diag.beta,
            "beta_over_alpha": diag.beta_over_alpha,
            "eigen_residual": diag.eigen_residual,
            "square_function": diag.square_function,
            "square_function_spread": diag.square_function_spread(),
            "connectivity": diag.connectivity,
        },
        "hessian": hessian,
        "reproduced": [],
    }
    target = PHI_TARGETS.get((state.n, state.N, state.field))
    if target is not None:
        out["reproduced"].append(_reproduced(f"phi({state.n}, {state.N}) {state.field}", target, state.objective))
    return out


def _parse_vector(text, field):
    try:
        vals = [complex(t.strip().replace("i", "j")) for t in text.split(",")]
    except ValueError:
        raise SchemaError(f"cannot parse vector {text!r}", "--x") from None
    if field == "real":
        if any(v.imag for v in vals):
            raise SchemaError("real space needs a real vector", "--x")
        return np.array([v.real for v in vals])
    return np.array(vals)


def cmd_norm(args):
    if args.x is None:
        raise SchemaError("norm needs --x, a comma-separated vector", "--x")
    if args.space:
        space = table_space(args.space)
        x = _parse_vector(args.x, space.field)
        value = table_norm(args.space, x)
        spec = table_functionals(args.space)
        return {"space": io.normed_space_to_dict(spec), "x": x.tolist() if space.field == "real" else
                [[v.real, v.imag] for v in x], "value": value, "functional_form_value": norm_from_system(spec, x)}
    if args.input:
        spec = io.normed_space_from_dict(io.read_json(args.input))
    else:
        spec = NormedSpaceSpec.from_system(_known_system(args))
    x = _parse_vector(args.x, spec.field)
    return {"space": io.normed_space_to_dict(spec), "value": norm_from_system(spec, x)}


def cmd_moments(args):
    dims = [args.n] if args.n is not None else list(range(1, 21))
    ks = [args.k] if args.k is not None else [2, 4, 6]
    rows = []
    for field in _fields(args):
        for n in dims:
            for k in ks:
                closed = sphere_moment(n, k, field)
                quad = sphere_moment_quadrature(n, k, field)
                rows.append({"n": n, "k": k, "field": field, "closed_form": closed, "quadrature": quad,
                             "abs_deviation": abs(closed - quad)})
    out = {"rows": rows}
    if args.input:
        system = io.line_system_from_dict(io.read_json(args.input))
        out["curvature"] = [{"k": k, **curvature_check(system, k).__dict__} for k in ks]
    return out


def cmd_gamma(args):
    dims = [args.n] if args.n is not None else list(range(1, 11))
    points = args.grid or 10 ** 5
    rows = []
    for field in _fields(args):
        for n in dims:
            g = gamma_tools(n, field)
            m = g.majorization_check(points)
            rows.append({
                "n": n, "field": field, "gamma0": g.gamma0, "gamma2": g.gamma2, "gamma4": g.gamma4,
                "alpha": g.alpha, "beta_moment": g.beta_moment, "identity_value": g.identity_value(),
                "identity_deviation": g.identity_deviation(), "majorization_holds": m.holds,
                "majorization_min_gap": m.min_gap, "touch_deviation": m.touch_deviation,
            })
    return {"rows": rows}


def cmd_r4(args):
    scan = r4_example_scan(args.grid or 10 ** 4)
    return {
        "alpha_star": scan.alpha_star,
        "value": scan.value,
        "maximizers": list(scan.maximizers),
        "max_frame_residual": scan.max_frame_residual,
        "upper_bound": R4_UPPER,
        "below_upper_bound": scan.value < R4_UPPER,
        "reproduced": [
            _reproduced("R4 family maximum value", 1.8494, scan.value),
            _reproduced("R4 family maximizing alpha", 1.4592, scan.alpha_star),
        ],
        "rows": [{"alpha": a, "value": v} for a, v in zip(scan.alphas, scan.curve)],
    }


def cmd_table(args):
    rows = []
    for sid, space in TABLE_SPACES.items():
        field, n = SPACE_SYSTEMS[sid]
        row = {"space": sid, "field": field, "n": n, "expected": space.lam}
        try:
            system = construct_known_system(n, field)
        except UnsupportedConstructionError:
            rows.append({**row, "computed": "out of scope", "abs_deviation": None, "method": "unsupported"})
            continue
        basis = SubspaceBasis.from_system(system)
        if field == "real":
            res = minimal_projection(basis, "lp-exact")
            rows.append({**row, "computed": res.norm, "abs_deviation": abs(res.norm - space.lam),
                         "method": "lp-exact", "lower_bound": res.lower_bound})
        else:
            orth = orthogonal_projection(system).norm
            res = minimal_projection(basis, "descent", restarts=args.restarts, iters=args.iters, seed=args.seed)
            rows.append({**row, "computed": orth, "abs_deviation": abs(orth - space.lam),
                         "method": "orthogonal row sum", "descent_best": res.norm})
    return {"rows": rows}


COMMANDS = {
    "bounds": (cmd_bounds, "projection bound G(n) and companions"),
    "construct": (cmd_construct, "build a saturated equiangular system"),
    "verify": (cmd_verify, "equiangularity, tight-frame and rank-one checks"),
    "minproj": (cmd_minproj, "minimal projection onto an embedded subspace"),
    "phi": (cmd_phi, "maximize the weighted absolute-Gram functional"),
    "norm": (cmd_norm, "evaluate a table or system norm"),
    "moments": (cmd_moments, "sphere moments, closed form against quadrature"),
    "gamma": (cmd_gamma, "quartic majorant coefficients and checks"),
    "r4": (cmd_r4, "scan the weighted ten-vector family in R^4"),
    "table": (cmd_table, "regenerate the table of extremal projection constants"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--N", type=int)
    common.add_argument("--field", choices=["real", "complex"])
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=32)
    common.add_argument("--iters", type=int, default=200)
    common.add_argument("--grid", type=int)
    common.add_argument("--space", help="table space id, e.g. R2-hexagon")
    common.add_argument("--input", help="JSON document to load")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--tol", type=float)
    common.add_argument("--output", help="also write the report JSON to this path")

    parser = argparse.ArgumentParser(prog="projconst", description="Projection constants toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "minproj":
            p.add_argument("--method", choices=["lp-exact", "descent"])
        if name == "phi":
            p.add_argument("--hessian", action="store_true", help="also run the second-order check")
        if name == "norm":
            p.add_argument("--x", help="comma-separated vector, complex entries like 1+2j")
        if name == "moments":
            p.add_argument("--k", type=int)
    return parser


def _fmt(value, digits=True):
    if isinstance(value, float):
        return format(value, ".17g") if digits else repr(value)
    if value is None:
        return ""
    if isinstance(value, (list, dict)):
        return io.dumps(value).replace("\n", "").replace("  ", "")
    return str(value)


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        else:
            yield key, v


def render(report: dict, fmt: str, wall_time: float | None = None) -> str:
    if fmt == "json":
        return io.dumps(report) + "\n"
    results = report["results"]
    buf = _io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        rows = results.get("rows")
        if rows:
            keys = list(dict.fromkeys(k for r in rows for k in r))
            writer.writerow(keys)
            for r in rows:
                writer.writerow([_fmt(r.get(k)) for k in keys])
        else:
            writer.writerow(["key", "value"])
            for k, v in _flatten({kk: vv for kk, vv in results.items() if kk not in ("P", "basis")}):
                writer.writerow([k, _fmt(v)])
        return buf.getvalue()
    lines = [f"command: {' '.join(report['argv'])}", f"seed: {report['seed']}"]
    skip = ("rows", "P", "basis", "reproduced", "system", "space", "state")
    for k, v in _flatten({kk: vv for kk, vv in results.items() if kk not in skip}):
        lines.append(f"{k}: {_fmt(v, False)}")
    if results.get("rows") and report["command"] != "r4":
        for r in results["rows"]:
            lines.append("  " + ", ".join(f"{k}={_fmt(v, False)}" for k, v in r.items()))
    for r in results.get("reproduced", []):
        lines.append(f"reproduced {r['label']}: expected {_fmt(r['expected'], False)}, "
                     f"computed {_fmt(r['computed'], False)}, deviation {r['abs_deviation']:.3e}")
    if wall_time is not None:
        lines.append(f"wall_time_s: {wall_time:.3f}")
    return "\n".join(lines) + "\n"


def run(argv=None) -> tuple[int, str, str]:
    """Execute a command; returns ``(exit_code, stdout, stderr)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    handler = COMMANDS[args.command][0]
    start = time.perf_counter()
    try:
        results = handler(args)
    except SchemaError as exc:
        return EXIT_SCHEMA, "", f"schema error: {exc}\n"
    except SolverError as exc:
        return EXIT_SOLVER, "", f"solver failure: {exc}\n"
    except (UnsupportedConstructionError, UnsupportedMethodError) as exc:
        return EXIT_UNSUPPORTED, "", f"unsupported: {exc}\n"
    except (ProjConstError, KeyError, ValueError) as exc:
        return EXIT_INPUT, "", f"error: {exc}\n"
    elapsed = time.perf_counter() - start
    report = _clean({"command": args.command, "argv": argv, "seed": args.seed, "results": results})
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(io.dumps(report) + "\n")
    return EXIT_OK, render(report, args.format, elapsed if args.format == "text" else None), ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
