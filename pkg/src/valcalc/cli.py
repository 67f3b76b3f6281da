"""``valcalc`` command-line front end.

Inputs are JSON files (or stdin); output is JSON on stdout or ``--out``.
Exit codes: 0 success, 1 internal invariant failure (including a failed
acceptance run), 2 invalid input, 3 a configured cap was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from typing import Any, Callable

from .config import load_config, using_config
from .errors import CapError, InvariantError, RefinementError, ValidationError

EXIT_OK, EXIT_INVARIANT, EXIT_VALIDATION, EXIT_CAP = 0, 1, 2, 3


def _read(path: str | None) -> Any:
    from .io import loads

    if path is None or path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ValidationError(f"cannot read {path}: {e.strerror}") from None
    return loads(text)


def _field(obj, key):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"input needs a {key!r} entry")
    return obj[key]


def _polytope_arg(obj):
    from .io import polytope_from_json

    if isinstance(obj, dict) and "points" in obj and "vertices" not in obj:
        obj = {"dim": obj.get("dim"), "vertices": obj["points"]}
    return polytope_from_json(obj)


def _bodies(obj):
    return [_polytope_arg(b) for b in _field(obj, "bodies")]


def _weight(obj):
    from .io import multipoly_from_json

    return multipoly_from_json(obj["weight"]) if isinstance(obj, dict) and obj.get("weight") is not None else None


def cmd_hull(obj, args):
    from .faces import face_lattice
    from .io import polytope_to_json, rat

    P = _polytope_arg(obj)
    out = {
        "polytope": polytope_to_json(P),
        "dim": P.dim,
        "facets": [{"normal": list(f.normal), "offset": rat(f.offset), "vertices": list(f.vertices)} for f in P.facets],
    }
    if P.dim <= 4:
        out["f_vector"] = list(face_lattice(P).f_vector())
    return out


def cmd_volume(obj, args):
    from .io import rat
    from .polytope import volume

    return {"volume": rat(volume(_polytope_arg(obj)))}


def cmd_minkpoly(obj, args):
    from .io import multipoly_to_json
    from .minkowski import minkowski_polynomial

    return multipoly_to_json(minkowski_polynomial(_bodies(obj), _weight(obj)))


def cmd_mixed_volume(obj, args):
    from .io import rat
    from .minkowski import mixed_volume

    return {"mixed_volume": rat(mixed_volume(_bodies(obj)))}


def cmd_euler(obj, args):
    from .constructible import euler_integral
    from .io import function_from_json, rat

    return {"euler_integral": rat(euler_integral(function_from_json(obj)))}


def cmd_verdier(obj, args):
    from .constructible import euler_integral, verdier_dual
    from .io import function_from_json, function_to_json, rat

    f = function_from_json(obj)
    d = verdier_dual(f)
    # the relation between the two Euler integrals is reported, not asserted
    return {
        "verdier_dual": function_to_json(d),
        "euler_integral": rat(euler_integral(f)),
        "euler_integral_of_dual": rat(euler_integral(d)),
    }


def cmd_cc(obj, args):
    from .char_cycle import cc, normal_cycle
    from .io import chain_to_json, function_from_json

    f = function_from_json(obj)
    return chain_to_json(normal_cycle(f) if args.normal_cycle else cc(f))


def cmd_pair(obj, args):
    from .io import function_from_json, rat, valuation_from_json
    from .suite import testset
    from .valuations import pairing_matrix

    mode = obj.get("mode", "evaluation") if isinstance(obj, dict) else "evaluation"
    rows = [valuation_from_json(v) for v in _field(obj, "rows")]
    if mode == "evaluation":
        cols = [function_from_json(f) for f in _field(obj, "cols")]
        M = pairing_matrix(rows, cols, "evaluation")
    else:
        cols = [valuation_from_json(v) for v in _field(obj, "cols")]
        if not rows:
            raise ValidationError("no rows")
        bodies = [_polytope_arg(b) for b in obj["testset"]] if "testset" in obj else testset(rows[0].ambient_dim)
        M = pairing_matrix(rows, cols, mode, testset=bodies)
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in M.entries:
            w.writerow([rat(x) for x in r])
        return buf.getvalue()
    return {"mode": mode, "entries": [[rat(x) for x in r] for r in M.entries], "rank": M.rank}


def _valuation(obj):
    from .io import valuation_from_json

    return valuation_from_json(_field(obj, "valuation"))


def cmd_val_eval(obj, args):
    from .io import function_from_json, rat
    from .valuations import evaluate, evaluate_constructible

    phi = _valuation(obj)
    if "function" in obj:
        return {"value": rat(evaluate_constructible(phi, function_from_json(obj["function"])))}
    return {"value": rat(evaluate(phi, _polytope_arg(_field(obj, "body"))))}


def cmd_val_sigma(obj, args):
    from .io import rat, valuation_to_json
    from .valuations import evaluate, sigma_boundary_eval, sigma_reflect

    phi = _valuation(obj)
    s = sigma_reflect(phi)
    out: dict = {"sigma": valuation_to_json(s)}
    if "body" in obj:
        P = _polytope_arg(obj["body"])
        out["reflect_route"] = rat(evaluate(s, P))
        out["boundary_route"] = rat(sigma_boundary_eval(phi, P))
    return out


def cmd_val_product(obj, args):
    from .io import rat, valuation_from_json
    from .valuations import product_components, product_eval

    phis = [valuation_from_json(v) for v in _field(obj, "valuations")]
    K = _polytope_arg(_field(obj, "body"))
    out = {"value": rat(product_eval(phis, K))}
    if args.components:
        out["components"] = [rat(c) for c in product_components(phis, K)]
    return out


def cmd_val_decompose(obj, args):
    from .io import rat
    from .suite import testset
    from .valuations import components, min_degree

    phi = _valuation(obj)
    out: dict = {}
    if "body" in obj:
        out["components"] = [rat(c) for c in components(phi, _polytope_arg(obj["body"]))]
    bodies = [_polytope_arg(b) for b in obj["testset"]] if "testset" in obj else testset(phi.ambient_dim)
    out["min_degree"] = min_degree(phi, bodies)
    return out


def cmd_intrinsic(obj, args):
    from .intrinsic import intrinsic_volume

    P = _polytope_arg(obj)
    ks = [args.k] if args.k is not None else list(range(P.ambient_dim + 1))
    return {"intrinsic_volumes": {str(k): intrinsic_volume(P, k) for k in ks}}


def cmd_acceptance(obj, args):
    from .acceptance import acceptance_run
    from .config import get_config

    only = args.only.split(",") if args.only else None

    def progress(rec):
        print(f"{rec.id:6s} {'PASS' if rec.passed else 'FAIL'}  {rec.property}", file=sys.stderr, flush=True)

    report = acceptance_run(get_config(), only=only, progress=progress)
    args._acceptance_failed = report.failed > 0
    return report.to_json(timings=args.timings)


COMMANDS: dict[str, tuple[Callable, str, bool]] = {
    "hull": (cmd_hull, "convex hull of points: vertices, facets, f-vector", True),
    "volume": (cmd_volume, "exact volume of a polytope", True),
    "minkpoly": (cmd_minkpoly, "weighted volume of a Minkowski combination as a polynomial", True),
    "mixed-volume": (cmd_mixed_volume, "mixed volume of n bodies in R^n", True),
    "euler": (cmd_euler, "Euler integral of a constructible function", True),
    "verdier": (cmd_verdier, "Verdier dual of a constructible function", True),
    "cc": (cmd_cc, "characteristic cycle of a constructible function", True),
    "pair": (cmd_pair, "pairing matrix between valuations and functions", True),
    "val-eval": (cmd_val_eval, "evaluate a valuation on a body or a function", True),
    "val-sigma": (cmd_val_sigma, "Euler-Verdier involution of a valuation", True),
    "val-product": (cmd_val_product, "product of valuations evaluated on a body", True),
    "val-decompose": (cmd_val_decompose, "homogeneous components and minimal degree", True),
    "intrinsic": (cmd_intrinsic, "intrinsic volumes (floating point)", True),
    "acceptance": (cmd_acceptance, "run the acceptance criteria and emit a report", False),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    common.add_argument("--out", default=None, help="write the payload to this file")
    common.add_argument("--config", default=None, help="key=value config file (else $VALCALC_CONFIG)")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    p = argparse.ArgumentParser(prog="valcalc", description="Exact polytopal valuation calculus.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_, takes_input) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_, parents=[common])
        if takes_input:
            sp.add_argument("input", nargs="?", default=None, help="JSON input file (default: stdin)")
        if name == "cc":
            sp.add_argument("--normal-cycle", action="store_true")
        if name == "val-product":
            sp.add_argument("--components", action="store_true")
        if name == "intrinsic":
            sp.add_argument("-k", type=int, default=None)
        if name == "acceptance":
            sp.add_argument("--only", default=None, help="comma-separated criterion ids")
            sp.add_argument("--timings", action="store_true", help="include per-check runtimes")
    return p


def _overrides(args) -> dict:
    out = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            out[key.strip().replace("-", "_")] = int(value, 0)
        except ValueError:
            raise ValidationError(f"--set {key} needs an integer") from None
    if args.seed is not None:
        out["seed"] = args.seed
    return out


def run(argv: list[str] | None = None) -> int:
    from .io import dumps

    parser = build_parser()
    args = parser.parse_args(argv)
    func, _, takes_input = COMMANDS[args.command]
    try:
        cfg = load_config(args.config, **_overrides(args))
        if args.format == "csv" and args.command != "pair":
            raise ValidationError("CSV output is only available for pairing matrices")
        with using_config(cfg):
            obj = _read(args.input) if takes_input else None
            payload = func(obj, args)
    except ValidationError as e:
        print(f"valcalc: invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapError as e:
        print(f"valcalc: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InvariantError, RefinementError) as e:
        print(f"valcalc: internal invariant failure: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    text = payload if isinstance(payload, str) else dumps(payload) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "_acceptance_failed", False):
        return EXIT_INVARIANT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
