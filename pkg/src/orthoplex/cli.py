"""``orthoplex`` command line.

Exit codes: 0 success, 2 bad usage, 3 a validity check failed, 4 runtime
error.  Failures print a JSON object ``{"error": {...}}`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

import numpy as np

from . import __version__
from .analysis import gsd_csv, gsd_scan, logical_basis
from .chaincx import repetition_complex, tensor_power, validate_complex
from .defect import PathDoesNotEncircle, braid_planon, build_dislocation, loop_path
from .f2core import in_rowspace, rank
from .hgpgen import code_params
from .lattice import AXIS_NAMES, LatticeShape
from .manifest import Manifest, ManifestError, build_toric_hgp, dumps, load
from .model import build_model
from .dynamics import (
    MembraneSpec,
    Syndrome,
    fragment_loop,
    membrane_operator,
    move_lineon,
    project_and_classify,
    syndrome,
)
from .pauli import PauliOp

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3, 4

MODELS = {"orthoplex3d": 3, "orthoplex4d": 4, "orthoplex-pd": None, "toric-hgp": None}


class CliError(Exception):
    def __init__(self, message: str, code: int, kind: str = "error"):
        super().__init__(message)
        self.code = code
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, EXIT_USAGE, "usage")


# ----------------------------------------------------------------------
# argument parsing helpers


def parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise CliError(f"bad size list {text!r}", EXIT_USAGE, "usage") from None
    if not sizes or min(sizes) < 1:
        raise CliError(f"sizes must be positive: {text!r}", EXIT_USAGE, "usage")
    return sizes


def parse_range(text: str) -> list[int]:
    """``"2..6"`` (inclusive), ``"2,3,5"`` or a single integer."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split(".."))
            vals = list(range(lo, hi + 1))
        else:
            vals = [int(t) for t in text.split(",")]
    except ValueError:
        raise CliError(f"bad range {text!r}", EXIT_USAGE, "usage") from None
    if not vals or min(vals) < 2:
        raise CliError(f"range {text!r} must be nonempty with values >= 2", EXIT_USAGE, "usage")
    return vals


def parse_open(text: str | None, p: int) -> tuple[bool, ...]:
    """Periodic flags from a list of open axes (names or indices, or ``all``)."""
    if not text:
        return (True,) * p
    if text == "all":
        return (False,) * p
    closed = set()
    for tok in text.replace(",", " ").split():
        if tok.isdigit():
            ax = int(tok)
        elif tok in AXIS_NAMES:
            ax = AXIS_NAMES.index(tok)
        else:
            raise CliError(f"unknown axis {tok!r}", EXIT_USAGE, "usage")
        if ax >= p:
            raise CliError(f"axis {tok!r} beyond dimension {p}", EXIT_USAGE, "usage")
        closed.add(ax)
    return tuple(i not in closed for i in range(p))


def _axis(name) -> int:
    if isinstance(name, int):
        return name
    if name in AXIS_NAMES:
        return AXIS_NAMES.index(name)
    raise CliError(f"unknown axis {name!r}", EXIT_USAGE, "usage")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _load(path: str) -> Manifest:
    try:
        return load(path)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}", EXIT_RUNTIME, "io") from None
    except ManifestError as exc:
        raise CliError(str(exc), EXIT_RUNTIME, "manifest") from None


# ----------------------------------------------------------------------
# subcommands


def build_manifest(model: str, sizes: Sequence[int], periodic: Sequence[bool]) -> Manifest:
    want = MODELS[model]
    if want is not None and len(sizes) != want:
        raise CliError(f"{model} needs {want} sizes, got {len(sizes)}", EXIT_USAGE, "usage")
    try:
        shape = LatticeShape(sizes, periodic)
        if model == "toric-hgp":
            return Manifest("standard-hgp", shape.sizes, shape.periodic, build_toric_hgp(shape))
        if shape.p < 2:
            raise ValueError("orthoplex models need p >= 2")
        return Manifest("orthoplex-pd", shape.sizes, shape.periodic, build_model(shape).code)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE, "usage") from None


def cmd_build(args) -> int:
    sizes = parse_sizes(args.size)
    m = build_manifest(args.model, sizes, parse_open(args.open, len(sizes)))
    if not m.code.is_css():
        raise CliError("built code violates hx hz^T = 0", EXIT_INVALID, "validity")
    text = dumps(m)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def check_report(m: Manifest) -> dict:
    code = m.code
    report = {"kind": m.kind, "n": code.n, "css": code.is_css()}
    if m.kind != "custom":
        factors = [repetition_complex(L, per) for L, per in zip(m.sizes, m.periodic)]
        cx = validate_complex(tensor_power(factors))
        report["chain_complex"] = cx.ok
        report["matches_rebuild"] = m.rebuild() == code
    report["pass"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report


def cmd_check(args) -> int:
    report = check_report(_load(args.manifest))
    _emit(report)
    return EXIT_OK if report["pass"] else EXIT_INVALID


def cmd_params(args) -> int:
    n, k = code_params(_load(args.manifest).code)
    print(n, k)
    return EXIT_OK


def cmd_gsd_scan(args) -> int:
    shapes = [
        LatticeShape((lx, ly, lz))
        for lx in parse_range(args.lx)
        for ly in parse_range(args.ly)
        for lz in parse_range(args.lz)
    ]
    records = gsd_scan(shapes, workers=args.workers)
    sys.stdout.write(gsd_csv(records))
    return EXIT_OK if all(r.match for r in records) else EXIT_INVALID


def logicals_report(m: Manifest) -> dict:
    code = m.code
    ls = logical_basis(code)
    labels = code.qubit_labels

    def entry(v, checks, stabs):
        return {
            "qubits": [list(labels[i]) for i in v.support()],
            "commutes": not checks.mul_vec(v).any(),
            "outside_rowspace": not in_rowspace(v, stabs),
        }

    xs = [entry(op.x, code.hz, code.hx) for op in ls.x_logicals]
    zs = [entry(op.z, code.hx, code.hz) for op in ls.z_logicals]
    r = rank(ls.pairing_matrix()) if ls.k else 0
    ok = all(e["commutes"] and e["outside_rowspace"] for e in xs + zs) and ls.pairing_full_rank()
    return {
        "n": code.n,
        "k": ls.k,
        "x_logicals": xs,
        "z_logicals": zs,
        "pairing_rank": r,
        "pairing_full_rank": ls.pairing_full_rank(),
        "pass": ok,
    }


def cmd_logicals(args) -> int:
    report = logicals_report(_load(args.manifest))
    _emit(report)
    return EXIT_OK if report["pass"] else EXIT_INVALID


def _membrane(d: dict) -> MembraneSpec:
    d = dict(d)
    plane = d.pop("plane")
    if "rectangle" in d:
        lb, lc = d.pop("rectangle")
        return MembraneSpec.rectangle(plane, lb, lc, **d)
    if "triangle_leg" in d:
        return MembraneSpec.right_triangle(plane, d.pop("triangle_leg"), **d)
    for key in ("b_range", "c_range"):
        if key in d:
            d[key] = tuple(d[key])
    return MembraneSpec(plane, **d)


def _cell(model, body: dict, i: int) -> tuple[int, ...]:
    cell = tuple(int(c) for c in body["cell"])
    if len(cell) != model.shape.p:
        raise CliError(f"step {i}: cell {list(cell)} needs {model.shape.p} coordinates", EXIT_USAGE, "script")
    return cell


def run_script(model, script: dict, seed: int | None = None, project: str | None = None) -> dict:
    """Apply the steps of an operator script and record the syndrome after each."""
    rng = np.random.default_rng(seed)
    op = PauliOp.identity(model.n)
    drop = None if project is None else _axis(project)
    sizes = model.shape.sizes if model.shape.fully_periodic else None
    trace = []
    for i, step in enumerate(script.get("steps", [])):
        if not isinstance(step, dict) or len(step) != 1:
            raise CliError(f"step {i}: expected one key", EXIT_USAGE, "script")
        (what, body), = step.items()
        if what == "pauli":
            cell = _cell(model, body, i)
            if cell not in model.code.qubit_labels:
                raise CliError(f"step {i}: {list(cell)} is not a qubit cell", EXIT_USAGE, "script")
            axis = body.get("axis", "X").upper()
            if axis not in ("X", "Y", "Z"):
                raise CliError(f"step {i}: axis must be X, Y or Z", EXIT_USAGE, "script")
            xs = [cell] if axis in "XY" else []
            zs = [cell] if axis in "ZY" else []
            op = op * PauliOp.from_cells(model, x=xs, z=zs)
        elif what == "membrane":
            op = op * membrane_operator(model, _membrane(body))
        elif what == "move":
            op = op * move_lineon(model, _cell(model, body, i), _axis(body["axis"]), body.get("step", 1))
        elif what == "fragment":
            spec = _membrane(body["membrane"])
            base = syndrome(model, membrane_operator(model, spec))
            Lw = model.shape.sizes[-1]
            offsets = body.get("offsets", "random")
            if offsets == "random":
                cells = sorted(base.violated_z)
                offsets = dict(zip(cells, (int(k) for k in rng.integers(0, Lw, len(cells)))))
            else:
                offsets = {tuple(c): int(k) for c, k in offsets}
            op = op * fragment_loop(model, spec, offsets).operator
        else:
            raise CliError(f"step {i}: unknown step type {what!r}", EXIT_USAGE, "script")
        syn = syndrome(model, op)
        row = {"step": i, **syn.to_json()}
        if drop is not None:
            row["projection"] = project_and_classify(syn, drop, sizes).to_json()
        trace.append(row)
    final = trace[-1] if trace else {"step": -1, **Syndrome().to_json()}
    out = {"trace": trace, "size": len(final["violatedX"]) + len(final["violatedZ"])}
    if drop is not None:
        out["projection"] = final.get("projection", project_and_classify(Syndrome(), drop).to_json())
    return out


def cmd_excite(args) -> int:
    m = _load(args.manifest)
    try:
        model = m.model()
    except ManifestError as exc:
        raise CliError(str(exc), EXIT_USAGE, "usage") from None
    if model.code != m.code:
        raise CliError("manifest does not match a fresh build of its model", EXIT_INVALID, "validity")
    try:
        with open(args.script) as fh:
            script = json.load(fh)
    except FileNotFoundError:
        raise CliError(f"no such file: {args.script}", EXIT_RUNTIME, "io") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"script is not JSON: {exc}", EXIT_USAGE, "script") from None
    try:
        out = run_script(model, script, seed=args.seed, project=args.project)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{type(exc).__name__}: {exc}", EXIT_USAGE, "script") from None
    _emit(out)
    return EXIT_OK


BRAIDS = {
    "winding-0": ((0, 2, 1, 2, 1), False),
    "winding-1": ((-4, 2, -2, 1, 1), True),
    "winding-2": ((-4, 2, -2, 1, 2), False),
}


def defect_report(sizes: Sequence[int]) -> dict:
    dm = build_dislocation(LatticeShape(sizes, False))
    report = dm.report()
    braids = {}
    ok = report["all_commute"]
    for name, (loop, expect_swap) in BRAIDS.items():
        try:
            v = braid_planon(dm, loop_path(*loop))
        except (PathDoesNotEncircle, RuntimeError) as exc:
            braids[name] = {"error": str(exc)}
            ok = False
            continue
        braids[name] = v.to_json()
        ok = ok and v.swapped == expect_swap and v.transport_clean
    report["braids"] = braids
    report["pass"] = ok
    return report


def cmd_defect(args) -> int:
    sizes = parse_sizes(args.size)
    if len(sizes) == 1:
        sizes = sizes * 3
    if len(sizes) != 3:
        raise CliError("defect needs a 3D size", EXIT_USAGE, "usage")
    try:
        report = defect_report(sizes)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE, "usage") from None
    _emit(report)
    return EXIT_OK if report["pass"] else EXIT_INVALID


# ----------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="orthoplex", description="Build and analyse orthoplex fracton codes.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build a code and write its manifest")
    b.add_argument("--model", required=True, choices=sorted(MODELS))
    b.add_argument("--size", required=True, help="comma-separated extents, e.g. 4,4,4")
    b.add_argument("--open", help="open axes, e.g. 'z' or 'x,y' or 'all'")
    b.add_argument("--out", help="output path (default stdout)")
    b.set_defaults(func=cmd_build)

    for name, func, text in (
        ("check", cmd_check, "CSS and chain-complex validation"),
        ("params", cmd_params, "print 'n k'"),
        ("logicals", cmd_logicals, "logical representatives with certificates"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("manifest")
        p.set_defaults(func=func)

    g = sub.add_parser("gsd-scan", help="3D degeneracy scan as CSV")
    g.add_argument("--lx", default="2..6")
    g.add_argument("--ly", default="2..6")
    g.add_argument("--lz", default="2..4")
    g.add_argument("--workers", type=int, default=1)
    g.set_defaults(func=cmd_gsd_scan)

    e = sub.add_parser("excite", help="run an operator script and trace syndromes")
    e.add_argument("manifest")
    e.add_argument("--script", required=True)
    e.add_argument("--seed", type=int)
    e.add_argument("--project", help="axis to project out per step, e.g. w")
    e.set_defaults(func=cmd_excite)

    d = sub.add_parser("defect", help="dislocation report with planon braids")
    d.add_argument("--size", default="6")
    d.set_defaults(func=cmd_defect)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        err = {"error": {"type": exc.kind, "message": str(exc), "exit_code": exc.code}}
        sys.stderr.write(json.dumps(err) + "\n")
        return exc.code
    except Exception as exc:  # noqa: BLE001 - last-resort runtime failure
        err = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": EXIT_RUNTIME}}
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
