"""Command-line driver.

Commands: distill | fidelity | threshold | trace-example1 | dump-circuit |
catalog.  Sweeps are written as CSV (`p,trials,failures,rate,ci_low,ci_high`)
with a JSON metadata sidecar.  Exit codes: 0 ok, 1 configuration error,
2 runtime error.  QDISTILL_THREADS caps worker threads; identical
configuration and seed give byte-identical output regardless of it.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import montecarlo as mc
from .classical import BUILTIN_NAMES, ClassicalCode, CodeError, builtin, from_parity_check
from .css import CSS_BUILTIN_NAMES, CssCode, CssError, builtin_css, from_matrices
from .gf2 import BinaryMatrix, BinaryVector
from .pauli import MEAS_X, MEAS_Z, Circuit, PauliError
from .protocols import DistillationConfig, distill_round, residual_class


class ConfigError(ValueError):
    pass


# --- config plumbing --------------------------------------------------------

def parse_p_grid(text: str) -> list[float]:
    """Either a comma list of values or `a:b:logN` (N log-spaced, inclusive)."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            if not n.startswith("log"):
                raise ValueError("grid step must be logN")
            count = int(n[3:])
            if count < 1:
                raise ValueError("grid needs at least one point")
            lo, hi = float(a), float(b)
            if count == 1:
                values = [lo]
            else:
                values = [float(x) for x in np.geomspace(lo, hi, count)]
        else:
            values = [float(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise ConfigError(f"bad p grid {text!r}: {exc}") from exc
    if not values:
        raise ConfigError("p grid is empty")
    for p in values:
        if not 0.0 <= p < 1.0:
            raise ConfigError(f"p = {p} outside [0, 1)")
    return values


def parse_trials(text: str) -> int:
    try:
        trials = int(float(text))
    except ValueError as exc:
        raise ConfigError(f"bad trial count {text!r}") from exc
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    return trials


def load_classical(name: str) -> ClassicalCode:
    if name in BUILTIN_NAMES:
        return builtin(name)
    try:
        with open(name) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(
            f"unknown classical code {name!r}: not a built-in "
            f"({', '.join(BUILTIN_NAMES)}) and not a readable file") from exc
    if obj.get("type") != "classical":
        raise ConfigError(f"{name}: catalog entry is not type 'classical'")
    return from_parity_check(BinaryMatrix.from_lists(obj["H"]),
                             d=obj.get("d"), name=obj.get("name", name))


def load_css(name: str) -> CssCode:
    if name in CSS_BUILTIN_NAMES:
        return builtin_css(name)
    try:
        with open(name) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(
            f"unknown CSS code {name!r}: not a built-in "
            f"({', '.join(CSS_BUILTIN_NAMES)}) and not a readable file") from exc
    if obj.get("type") != "css":
        raise ConfigError(f"{name}: catalog entry is not type 'css'")
    hint = None
    if "logicalX" in obj and "logicalZ" in obj:
        hint = (BinaryVector.from_bits(obj["logicalX"]),
                BinaryVector.from_bits(obj["logicalZ"]))
    return from_matrices(BinaryMatrix.from_lists(obj["HZ"]),
                         BinaryMatrix.from_lists(obj["HX"]),
                         logical_hint=hint,
                         name=obj.get("name", name))


def _merge_config(args: argparse.Namespace, parser_defaults: dict) -> argparse.Namespace:
    """Precedence: explicit flags > JSON config file > parser defaults."""
    path = getattr(args, "config", None)
    if not path:
        return args
    try:
        with open(path) as fh:
            file_vals = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for key, val in file_vals.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"config file {path}: unknown option {key!r}")
        if getattr(args, attr) == parser_defaults.get(attr):
            setattr(args, attr, val)
    return args


# --- commands ---------------------------------------------------------------

def cmd_distill(args) -> int:
    css = load_css(args.css)
    code1 = load_classical(args.code1)
    code2 = load_classical(args.code2)
    target = "zero_L" if args.target == "zero" else "plus_L"
    cfg = DistillationConfig(css=css, code_round1=code1, code_round2=code2,
                             target=target)
    grid = parse_p_grid(args.p)
    trials = parse_trials(args.trials)
    points = []
    for p in grid:
        if args.reference:
            points.append(mc.no_distillation_reference(
                css, p, trials, args.seed, target, args.threads))
        else:
            points.append(mc.estimate_distillation_rate(
                cfg, p, trials, args.seed, args.threads))
    meta = {"command": "distill", "css": css.name, "code1": code1.name,
            "code2": code2.name, "target": target, "seed": args.seed,
            "trials_per_point": trials, "reference": bool(args.reference)}
    result = mc.SweepResult(points=points, metadata=meta)
    mc.write_sweep_csv(result, args.out)
    print(f"wrote {len(points)} rows to {args.out}")
    return 0


def cmd_fidelity(args) -> int:
    css = load_css(args.css)
    code_d = load_classical(args.save) if args.save else None
    grid = parse_p_grid(args.p)
    points = []
    if args.exact:
        for p in grid:
            f = mc.brute_force_channel_fidelity(css, p, cutoff=args.cutoff)
            points.append(mc.SweepPoint(p=p, trials=0, failures=0, rate=f,
                                        ci_low=f, ci_high=f))
    else:
        trials = parse_trials(args.trials)
        factor = (code_d.r / code_d.m) if (args.effective and code_d) else 1.0
        for p in grid:
            pt = mc.estimate_avg_channel_fidelity(
                css, code_d, factor * p, trials, args.seed, args.threads)
            if factor != 1.0:
                lo, hi = mc.wilson_interval(pt.failures, pt.trials)
                pt = mc.SweepPoint(p=p, trials=pt.trials, failures=pt.failures,
                                   rate=pt.rate, ci_low=lo, ci_high=hi)
            points.append(pt)
    meta = {"command": "fidelity", "css": css.name,
            "save": code_d.name if code_d else None, "exact": bool(args.exact),
            "effective": bool(args.effective), "seed": args.seed,
            "rate_semantics": "fidelity (correctable fraction)"}
    mc.write_sweep_csv(mc.SweepResult(points=points, metadata=meta), args.out)
    print(f"wrote {len(points)} rows to {args.out}")
    return 0


def cmd_threshold(args) -> int:
    if args.sweep and args.reference_csv:
        sweep = mc.read_sweep_csv(args.sweep)
        ref = mc.read_sweep_csv(args.reference_csv)
        p_th = mc.estimate_threshold(sweep, ref)
        print(json.dumps({"p_threshold": p_th}))
        return 0
    # Crossover mode: compare plain extraction with ancilla saving.
    css = load_css(args.css)
    code_d = load_classical(args.save)
    grid = parse_p_grid(args.p)
    trials = parse_trials(args.trials)
    res = mc.find_crossover(css, code_d, (grid[0], grid[-1]), trials,
                            args.seed, threads=args.threads)
    print(json.dumps({"status": res.status, "p_star": res.p_star}))
    return 0


# Frozen single-round replay on the Steane code with rep3: the three
# injected patterns are a logical X on block 1, X on qubit 3 of block 2,
# and X on qubits 6,7 of block 3.
_TRACE_INJECTIONS = ("1101000", "0010000", "0000011")


def cmd_trace_example1(args) -> int:
    css = builtin_css("steane")
    code_d = builtin("rep3")
    blocks = [PauliError(BinaryVector.from_string(s).mask, 0, 7)
              for s in _TRACE_INJECTIONS]
    trace: list[dict] = []
    survivors, records = distill_round(blocks, code_d, css, "X_round",
                                       "zero_L", trace=trace)
    for entry in trace:
        if entry["event"] == "measured" and entry["parity_block"] == 1:
            # The originally published walkthrough lists 110|1 for this
            # parity block; direct recomputation gives 100|1.
            entry["paper_discrepancy"] = {
                "published": "110|1",
                "computed": f"{entry['sigma']}|{entry['logical']}"}
        print(json.dumps(entry))
    final = {"event": "final", "survivor": 0,
             "residual": residual_class(survivors[0], css, "zero_L")}
    print(json.dumps(final))
    return 0


def cmd_dump_circuit(args) -> int:
    css = load_css(args.css)
    circuit = css.encoding_circuit
    text = circuit.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {len(circuit.gates)} gates to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_catalog(args) -> int:
    if args.name:
        if args.name in BUILTIN_NAMES:
            code = builtin(args.name)
            obj = {"name": code.name, "type": "classical",
                   "params": [code.m, code.k, code.d],
                   "H": code.H.to_lists()}
        elif args.name in CSS_BUILTIN_NAMES:
            css = builtin_css(args.name)
            obj = {"name": css.name, "type": "css",
                   "params": [css.n, css.k],
                   "HZ": css.hz.to_lists(), "HX": css.hx.to_lists(),
                   "logicalX": css.logical_x.bits(),
                   "logicalZ": css.logical_z.bits()}
        else:
            raise ConfigError(f"unknown catalog entry {args.name!r}")
        print(json.dumps(obj, indent=2))
    else:
        print(json.dumps({"classical": list(BUILTIN_NAMES),
                          "css": list(CSS_BUILTIN_NAMES)}, indent=2))
    return 0


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdistill",
        description="Pauli-frame simulation of logical-ancilla distillation "
                    "and shared-ancilla syndrome extraction for CSS codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials_default="100000"):
        p.add_argument("--config", help="JSON config file (flags win)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: QDISTILL_THREADS or auto)")
        p.add_argument("--trials", default=trials_default)
        p.add_argument("--p", default="1e-3:1e-2:log8",
                       help="comma list or a:b:logN grid")
        p.add_argument("--out", default="sweep.csv")

    d = sub.add_parser("distill", help="two-round distillation failure rates")
    common(d)
    d.add_argument("--css", default="steane")
    d.add_argument("--code1", default="rep3")
    d.add_argument("--code2", default="rep3")
    d.add_argument("--target", choices=["zero", "plus"], default="zero")
    d.add_argument("--reference", action="store_true",
                   help="emit the no-distillation reference curve instead")
    d.set_defaults(fn=cmd_distill)

    f = sub.add_parser("fidelity", help="average channel fidelity")
    common(f)
    f.add_argument("--css", default="steane")
    f.add_argument("--save", default=None,
                   help="classical code for shared-ancilla saving")
    f.add_argument("--exact", action="store_true",
                   help="exact enumeration oracle (ignores --trials/--save)")
    f.add_argument("--effective", action="store_true",
                   help="evaluate at the effective rate (r/m)p")
    f.add_argument("--cutoff", type=int, default=None,
                   help="weight cutoff for the exact oracle when n > 20")
    f.set_defaults(fn=cmd_fidelity)

    t = sub.add_parser("threshold", help="curve crossings")
    common(t, trials_default="200000")
    t.add_argument("--sweep", help="distillation sweep CSV")
    t.add_argument("--reference-csv", help="reference sweep CSV")
    t.add_argument("--css", default="steane")
    t.add_argument("--save", default="rep5")
    t.set_defaults(fn=cmd_threshold)

    tr = sub.add_parser("trace-example1",
                        help="golden single-round trace with injected errors")
    tr.add_argument("--config", help=argparse.SUPPRESS)
    tr.set_defaults(fn=cmd_trace_example1)

    dc = sub.add_parser("dump-circuit", help="encoding circuit as text")
    dc.add_argument("--css", required=True)
    dc.add_argument("--out", default=None)
    dc.add_argument("--config", help=argparse.SUPPRESS)
    dc.set_defaults(fn=cmd_dump_circuit)

    c = sub.add_parser("catalog", help="list or dump built-in codes")
    c.add_argument("--name", default=None)
    c.add_argument("--config", help=argparse.SUPPRESS)
    c.set_defaults(fn=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = {a.dest: a.default
                for g in parser._subparsers._group_actions
                for a in g.choices[args.command]._actions}
    try:
        args = _merge_config(args, defaults)
        return args.fn(args)
    except (ConfigError, CodeError, CssError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (mc.EstimationError, OSError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
