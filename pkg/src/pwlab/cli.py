"""Command-line surface.

Subcommands: potential (grid evaluation of omega and its Poisson
transform), multiplier (build and verify a weight's model), axioms
(mountain-chain report), smooth (majorant representation), pavlov
(interpolation battery), and report (bundle a directory of artifacts
into a summary, optionally with figures).

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 input or usage
error, 3 numerical failure.  Outputs are written atomically (temp file
plus rename) so partially written artifacts never appear.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .hbmodel import HBModel
from .interpolation import pavlov_diagnostics
from .mountain import MountainChain, Mountain, StripParams, check_axioms
from .multiplier import build_multiplier, verify_multiplier_lemma
from .numerics import (Grid, InvalidGridError, InvalidInputError,
                       PVDivergenceError, QuadratureError)
from .potential import Weight, eval_omega, eval_poisson
from .smoothing import (MajorantRepresentation, RetryWithLargerLError,
                        build_majorant_representation)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(ValueError):
    pass


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pwlab-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_json(path, obj):
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True,
                                   default=_json_default) + "\n")


def parse_grid(spec):
    """Grid spec "lo:hi:step[,imag]" -> Grid."""
    try:
        imag = 0.0
        if "," in spec:
            spec, imag_s = spec.split(",", 1)
            imag = float(imag_s)
        lo_s, hi_s, step_s = spec.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
        if step <= 0 or hi <= lo:
            raise ValueError
    except ValueError:
        raise UsageError(f"bad grid spec {spec!r}, expected lo:hi:step[,imag]")
    n = int(round((hi - lo) / step)) + 1
    return Grid.linspace(lo, hi, n, imag=imag)


def parse_band(spec):
    try:
        lo_s, hi_s = spec.split(":")
        lo, hi = float(lo_s), float(hi_s)
        if not lo < hi:
            raise ValueError
    except ValueError:
        raise UsageError(f"bad band spec {spec!r}, expected lo:hi with lo < hi")
    return lo, hi


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def load_weight(path):
    try:
        return Weight.from_dict(_load_json(path))
    except (KeyError, TypeError, InvalidInputError) as exc:
        raise UsageError(f"bad weight file {path}: {exc}")


def load_model(path):
    try:
        return HBModel.from_dict(_load_json(path))
    except (KeyError, TypeError, InvalidInputError) as exc:
        raise UsageError(f"bad model file {path}: {exc}")


def _window(grid):
    pts = np.real(grid.points)
    return float(pts[0]), float(pts[-1])


def _out_path(args, name):
    if args.out is None:
        return name
    if os.path.isdir(args.out) or args.out.endswith(os.sep):
        os.makedirs(args.out, exist_ok=True)
        return os.path.join(args.out, name)
    return args.out


def cmd_potential(args):
    m = load_weight(args.weight)
    if args.z is not None:
        try:
            re_s, im_s = args.z.split(",")
            z = complex(float(re_s), float(im_s))
        except ValueError:
            raise UsageError(f"bad --z {args.z!r}, expected re,im")
        print(f"{eval_omega(m, z):.6f}")
        return EXIT_PASS
    if args.grid is None:
        raise UsageError("potential needs --z or --grid")
    grid = parse_grid(args.grid)
    lines = ["x,y,omega,poisson"]
    for p in grid.points:
        z = complex(p)
        om = eval_omega(m, z)
        ps = "" if z.imag == 0.0 else f"{eval_poisson(m, z):.12g}"
        lines.append(f"{z.real:.12g},{z.imag:.12g},{om:.12g},{ps}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def cmd_multiplier(args):
    m = load_weight(args.weight)
    model = build_multiplier(m, args.radius)
    grid = parse_grid(args.grid)
    band = parse_band(args.band)
    cert = verify_multiplier_lemma(model, m, grid, band)
    write_json(_out_path(args, "model.json"), model.to_dict())
    payload = cert.to_dict()
    payload["config"] = {"radius": args.radius, "grid": args.grid,
                         "band": args.band, "seed": args.seed}
    write_json(_out_path(args, "certificate.json"), payload)
    return EXIT_PASS if cert.passed else EXIT_FAIL


def cmd_axioms(args):
    model = load_model(args.model)
    sp = StripParams(delta=args.delta, epsilon_growth=args.epsilon)
    grid = parse_grid(args.grid)
    band = parse_band(args.band)
    report = check_axioms(model, sp, _window(grid), band)
    payload = report.to_dict()
    payload["config"] = {"delta": args.delta, "epsilon": args.epsilon,
                         "grid": args.grid, "band": args.band,
                         "seed": args.seed}
    write_json(_out_path(args, "axiom_report.json"), payload)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_smooth(args):
    model = load_model(args.model)
    sp = StripParams(delta=args.delta, epsilon_growth=args.epsilon)
    grid = parse_grid(args.grid)
    band = parse_band(args.band)
    rep, cert = build_majorant_representation(model, sp, args.L,
                                              window=_window(grid), band=band)
    write_json(_out_path(args, "representation.json"), rep.to_dict())
    payload = cert.to_dict()
    payload["config"] = {"delta": args.delta, "epsilon": args.epsilon,
                         "L": args.L, "grid": args.grid, "band": args.band,
                         "seed": args.seed}
    write_json(_out_path(args, "smooth_certificate.json"), payload)
    return EXIT_PASS if cert.passed else EXIT_FAIL


def cmd_pavlov(args):
    model = load_model(args.model)
    sp = StripParams(delta=args.delta, epsilon_growth=args.epsilon)
    grid = parse_grid(args.grid)
    window = _window(grid)
    band = parse_band(args.band)
    rep, _ = build_majorant_representation(model, sp, args.L,
                                           window=window, band=band)
    try:
        alphas = [float(a) for a in args.alpha.split(",") if a]
    except ValueError:
        raise UsageError(f"bad --alpha {args.alpha!r}, expected comma floats")
    if not alphas:
        raise UsageError("--alpha needs at least one value")
    reports = []
    ok = True
    for alpha in alphas:
        rp = pavlov_diagnostics(model, alpha, rep, args.tau, window)
        reports.append(rp.to_dict())
        ok = ok and rp.passed
    payload = {"reports": reports,
               "config": {"alpha": args.alpha, "tau": args.tau,
                          "delta": args.delta, "L": args.L,
                          "grid": args.grid, "seed": args.seed}}
    write_json(_out_path(args, "pavlov_report.json"), payload)
    return EXIT_PASS if ok else EXIT_FAIL


def _classify_artifact(data):
    if not isinstance(data, dict):
        return "unknown", None
    if data.get("kind") == "comparability_certificate":
        return "certificate", data.get("verdict")
    if "mountains" in data and "plateaux" in data:
        return "mountain_chain", None
    if "g_coeffs" in data and "branch" in data:
        return "representation", None
    if "axiom1" in data:
        return "axiom_report", data.get("overall")
    if "reports" in data and all("a2" in r for r in data["reports"]):
        verdicts = [r.get("overall") for r in data["reports"]]
        return "pavlov_report", ("pass" if all(v == "pass" for v in verdicts)
                                 else "fail")
    if "zeros" in data:
        return "model", None
    if "window" in data and "pieces" in data:
        return "weight", None
    return "unknown", None


def cmd_report(args):
    directory = args.directory
    if not os.path.isdir(directory):
        raise UsageError(f"not a directory: {directory}")
    out_base = args.out or os.path.join(directory, "summary")
    entries = []
    all_pass = True
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".json") or name.startswith("summary"):
            continue
        path = os.path.join(directory, name)
        data = _load_json(path)
        kind, verdict = _classify_artifact(data)
        entry = {"file": name, "kind": kind, "verdict": verdict}
        if verdict == "fail":
            all_pass = False
        if args.figures:
            fig_path = _render_figure(data, kind, path)
            if fig_path:
                entry["figure"] = os.path.basename(fig_path)
        entries.append(entry)
    write_json(out_base + ".json",
               {"artifacts": entries,
                "overall": "pass" if all_pass else "fail"})
    lines = ["file,kind,verdict"]
    for e in entries:
        lines.append(f"{e['file']},{e['kind']},{e['verdict'] or ''}")
    _atomic_write(out_base + ".csv", "\n".join(lines) + "\n")
    return EXIT_PASS if all_pass else EXIT_FAIL


def _render_figure(data, kind, json_path):
    from . import plots
    base = os.path.splitext(json_path)[0]
    if kind == "certificate":
        from .numerics import ComparabilityCertificate
        cert = ComparabilityCertificate(
            Grid(np.array([0.0, 1.0]), data.get("grid_description", "")),
            data["ratio_min"], data["ratio_max"], tuple(data["band"]),
            data["verdict"] == "pass", data.get("notes", ""))
        return plots.save_certificate_figure(cert, base + ".png")
    if kind == "mountain_chain":
        chain = MountainChain(
            data["delta"], tuple(data.get("window", (0.0, 0.0))),
            tuple(Mountain(tuple(mt["base"]), mt["summit_x"],
                           mt["summit_height"],
                           complex(mt["zero"][0], mt["zero"][1]))
                  for mt in data["mountains"]),
            tuple(tuple(p) for p in data["plateaux"]))
        return plots.save_chain_figure(chain, base + ".png")
    if kind == "representation":
        rep = MajorantRepresentation.from_dict(data)
        return plots.save_envelope_figure(rep, base + ".png")
    return None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pwlab",
        description="weighted Paley-Wiener laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output file or directory")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("potential", help="evaluate omega and Poisson on a grid")
    p.add_argument("--weight", required=True)
    p.add_argument("--z", default=None, help="single point re,im")
    p.add_argument("--grid", default=None, help="lo:hi:step[,imag]")
    common(p)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("multiplier", help="build and verify a multiplier")
    p.add_argument("--weight", required=True)
    p.add_argument("--radius", type=float, default=100.0)
    p.add_argument("--grid", default="-10:10:0.5")
    p.add_argument("--band", default="0.5:2.0")
    common(p)
    p.set_defaults(func=cmd_multiplier)

    p = sub.add_parser("axioms", help="mountain-chain axiom report")
    p.add_argument("--model", required=True)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--grid", default="-20:20:0.1")
    p.add_argument("--band", default="0.1:10")
    common(p)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("smooth", help="majorant representation pipeline")
    p.add_argument("--model", required=True)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--L", type=int, default=16)
    p.add_argument("--grid", default="-20:20:0.25")
    p.add_argument("--band", default="0.05:5.0")
    common(p)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("pavlov", help="interpolation condition battery")
    p.add_argument("--model", required=True)
    p.add_argument("--alpha", default="0.3,1.8", help="comma-separated levels")
    p.add_argument("--tau", type=float, default=3.0)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--L", type=int, default=8)
    p.add_argument("--grid", default="-10:10:0.25")
    p.add_argument("--band", default="0.05:5.0")
    common(p)
    p.set_defaults(func=cmd_pavlov)

    p = sub.add_parser("report", help="bundle artifacts into a summary")
    p.add_argument("directory")
    p.add_argument("--figures", action="store_true",
                   help="render figures next to the summary")
    common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, InvalidInputError, InvalidGridError) as exc:
        print(f"pwlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, PVDivergenceError, RetryWithLargerLError,
            FloatingPointError) as exc:
        print(f"pwlab {args.command}: numerical failure: {exc}",
              file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
