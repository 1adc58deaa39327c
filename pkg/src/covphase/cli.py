"""Command-line entry point: ``covphase <command> ...``.

Exit codes: 0 success or passed check, 1 domain failure (invalid matrix,
failed check, inconsistent windows), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import analysis, catalog, gram_factor, observable
from .errors import InputError
from .phase_matrix import IndexWindow, PhaseMatrix, Tolerances, principal_minor_check, restrict, validate
from .torus_kernel import TWO_PI, ArcSet

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_matrix(path: str, args) -> PhaseMatrix:
    try:
        C = PhaseMatrix.from_dict(_read_json(path))
        if args.window is not None:
            C = restrict(C, IndexWindow.parse(args.window))
    except InputError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    return C


def _load_state(path: str, window: IndexWindow) -> observable.StateVector:
    try:
        return observable.StateVector.from_dict(_read_json(path), window)
    except InputError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_arcs(text: str) -> ArcSet:
    """``--arcs`` takes a file path or an inline JSON array."""
    try:
        if os.path.exists(text):
            with open(text) as fh:
                text = fh.read()
        return ArcSet.from_json(text)
    except (json.JSONDecodeError, InputError) as exc:
        raise UsageError(f"bad arc set {text!r}: {exc}") from exc


def _tolerances(args) -> Tolerances:
    try:
        return Tolerances(psd=args.tol_psd, zero=args.tol_zero)
    except InputError as exc:
        raise UsageError(str(exc)) from exc


def _grid(args, default: int) -> int:
    grid = default if args.grid is None else args.grid
    if grid < 2**10 or grid & (grid - 1):
        raise UsageError(f"--grid must be a power of two >= 1024, got {grid}")
    return grid


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _matrix_json(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


# -- commands ------------------------------------------------------------------


def cmd_validate(args) -> int:
    C = _load_matrix(args.matrix, args)
    tol = _tolerances(args)
    report = validate(C, tol)
    minors = principal_minor_check(C, args.max_order, tol)
    doc = report.to_dict()
    doc["minors"] = {
        "max_order": args.max_order,
        "pass": minors.passed,
        "violation": list(minors.violation) if minors.violation else None,
        "determinant": minors.determinant,
    }
    _emit(json.dumps(doc), args)
    return EXIT_OK if report.is_valid and minors.passed else EXIT_FAIL


def cmd_factorize(args) -> int:
    C = _load_matrix(args.matrix, args)
    tol = _tolerances(args)
    if args.method == "spectral":
        V = gram_factor.factorize_spectral(C, tol)
    else:
        V = gram_factor.factorize_paper_phase(C, tol)
    deviation = float(np.max(np.abs(gram_factor.gram_entries(V) - C.entries)))
    report = json.dumps({"method": args.method, "max_deviation": deviation})
    if args.out:
        _emit(V.to_json(), args)
        print(report)
    else:
        print(V.to_json())
        print(report, file=sys.stderr)
    return EXIT_OK


def cmd_gram(args) -> int:
    try:
        V = gram_factor.VectorSequence.from_dict(_read_json(args.vectors))
    except InputError as exc:
        raise UsageError(f"{args.vectors}: {exc}") from exc
    _emit(gram_factor.gram(V).to_json(), args)
    return EXIT_OK


def cmd_effect(args) -> int:
    C = _load_matrix(args.matrix, args)
    X = _load_arcs(args.arcs)
    E = observable.effect_matrix(C, X, _tolerances(args))
    _emit(json.dumps(E.to_dict()), args)
    return EXIT_OK


def cmd_prob(args) -> int:
    C = _load_matrix(args.matrix, args)
    psi = _load_state(args.state, C.window)
    X = _load_arcs(args.arcs)
    _emit(_fmt(observable.probability(C, psi, X, tol=_tolerances(args))), args)
    return EXIT_OK


def cmd_density(args) -> int:
    C = _load_matrix(args.matrix, args)
    psi = _load_state(args.state, C.window)
    grid = _grid(args, 4096)
    theta = np.linspace(0.0, TWO_PI, grid + 1)
    p = observable.density(C, psi, theta)
    if args.format == "json":
        _emit(json.dumps({"theta": theta.tolist(), "density": p.tolist()}), args)
    else:
        _emit("\n".join(f"{_fmt(t)},{_fmt(v)}" for t, v in zip(theta, p)), args)
    return EXIT_OK


def cmd_sample(args) -> int:
    C = _load_matrix(args.matrix, args)
    psi = _load_state(args.state, C.window)
    if args.count < 1:
        raise UsageError("--count must be positive")
    angles = observable.sample(C, psi, args.count, args.seed, grid=_grid(args, 2**14))
    if args.format == "json":
        _emit(json.dumps(angles.tolist()), args)
    else:
        _emit("\n".join(_fmt(t) for t in angles), args)
    return EXIT_OK


def _check_commute(C: PhaseMatrix, args) -> analysis.Report:
    return analysis.check_commutative_criterion(C, tol=args.tol)


def _check_pv(C: PhaseMatrix, args) -> analysis.Report:
    defect = analysis.projection_defect(C)
    passed = analysis.check_projection_valued(C, args.tol)
    witnesses = []
    if not passed:
        i, j = np.unravel_index(np.argmax(np.abs(1.0 - np.abs(C.entries))), C.entries.shape)
        lo = C.window.lo
        witnesses.append({"n": int(i + lo), "m": int(j + lo), "c": [float(C.entries[i, j].real), float(C.entries[i, j].imag)]})
    return analysis.Report("pv", passed, defect, witnesses)


def _check_equiv(C: PhaseMatrix, args) -> analysis.Report:
    if not args.matrix2:
        raise UsageError("check equiv needs a second matrix")
    C2 = _load_matrix(args.matrix2, args)
    if C2.window != C.window:
        raise InputError("matrices live on different windows")
    tol = _tolerances(args)
    phases = analysis.check_equivalent(C, C2, tol=args.tol, tol_zero=tol.zero)
    if phases is None:
        dev = float(np.max(np.abs(np.abs(C.entries) - np.abs(C2.entries))))
        return analysis.Report("equiv", False, dev, [])
    predicted = phases.apply(C).entries
    dev = float(np.max(np.abs(predicted - C2.entries)))
    return analysis.Report("equiv", True, dev, [[float(z.real), float(z.imag)] for z in phases.phases])


def _check_moments(C: PhaseMatrix, args) -> analysis.Report:
    E1 = analysis.first_phase_moment(C)
    rebuilt = analysis.reconstruct_from_first_moment(E1, C.window).entries
    dev = float(np.max(np.abs(rebuilt - C.entries)))
    K = min(args.max_k, C.size - 1)
    report = analysis.Report("moments", dev <= args.tol, dev, [])
    report.witnesses = [{
        "cyclic": {str(k): _matrix_json(analysis.cyclic_moment(C, k)) for k in range(-K, K + 1)},
        "first": _matrix_json(E1),
        "second": _matrix_json(analysis.second_phase_moment(C)),
        "defect_central_norm": analysis.moment_defect(C, args.margin),
    }]
    return report


def _check_commutator(C: PhaseMatrix, args) -> analysis.Report:
    if not (args.arcs and args.arcs2):
        raise UsageError("check commutator needs --arcs and --arcs2")
    X, Y = _load_arcs(args.arcs), _load_arcs(args.arcs2)
    value = analysis.commutator_norm(C, X, Y, margin=args.margin, edges=args.edges, tol=_tolerances(args))
    return analysis.Report("commutator", value <= args.tol, value, [])


CHECKS = {
    "commute": _check_commute,
    "pv": _check_pv,
    "equiv": _check_equiv,
    "moments": _check_moments,
    "commutator": _check_commutator,
}

CHECK_DEFAULT_TOL = {"commute": 1e-10, "pv": 1e-12, "equiv": 1e-8, "moments": 1e-10, "commutator": 1e-2}


def cmd_check(args) -> int:
    C = _load_matrix(args.matrix, args)
    if args.tol is None:
        args.tol = CHECK_DEFAULT_TOL[args.kind]
    report = CHECKS[args.kind](C, args)
    _emit(report.to_json(), args)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_catalog(args) -> int:
    try:
        data = _read_json(args.spec)
        window = IndexWindow.parse(args.window) if args.window else None
        if args.seed is not None and isinstance(data, dict):
            data = {**data, "seed": args.seed}
        spec = catalog.CatalogSpec.from_dict(data, window)
    except InputError as exc:
        raise UsageError(f"{args.spec}: {exc}") from exc
    _emit(spec.build().to_json(), args)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", metavar="LO:HI", help="restrict inputs to this index window")
    common.add_argument("--tol-psd", type=float, default=1e-10)
    common.add_argument("--tol-zero", type=float, default=1e-9)
    common.add_argument("--out", metavar="PATH", help="write the main output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    parser = argparse.ArgumentParser(prog="covphase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a phase matrix")
    p.add_argument("matrix")
    p.add_argument("--max-order", type=int, default=3)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("factorize", parents=[common], help="phase matrix -> unit vectors")
    p.add_argument("matrix")
    p.add_argument("--method", choices=("spectral", "paper"), default="spectral")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("gram", parents=[common], help="unit vectors -> phase matrix")
    p.add_argument("vectors")
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("effect", parents=[common], help="effect matrix E(X)")
    p.add_argument("matrix")
    p.add_argument("--arcs", required=True, help="arc set: JSON file or inline JSON")
    p.set_defaults(func=cmd_effect)

    p = sub.add_parser("prob", parents=[common], help="probability <psi|E(X)psi>")
    p.add_argument("matrix")
    p.add_argument("state")
    p.add_argument("--arcs", required=True)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("density", parents=[common], help="outcome density on a grid (CSV)")
    p.add_argument("matrix")
    p.add_argument("state")
    p.add_argument("--grid", type=int)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("sample", parents=[common], help="Born-rule samples (CSV)")
    p.add_argument("matrix")
    p.add_argument("state")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("check", parents=[common], help="classification checks and moments")
    p.add_argument("kind", choices=sorted(CHECKS))
    p.add_argument("matrix")
    p.add_argument("matrix2", nargs="?")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-k", type=int, default=2)
    p.add_argument("--margin", type=int, default=None)
    p.add_argument("--edges", choices=("both", "upper"), default="both")
    p.add_argument("--arcs")
    p.add_argument("--arcs2")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalog", parents=[common], help="build a catalog matrix from a JSON spec")
    p.add_argument("spec")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"covphase: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"covphase: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
