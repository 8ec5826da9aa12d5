"""Command line front end.

Exit status: 0 when every check passes, 1 when a check fails (the report is
still written), 2 for bad input or usage. Set CONFALG_VERBOSE=1 to list
passing items as well as failures.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from math import factorial
from pathlib import Path

from . import __version__
from .algebra import AlgebraPresentation, check_algebra, check_morphism, specialize_algebra
from .annih import (
    CHI,
    PHI,
    PSI,
    ann_bracket,
    ann_generators,
    build_ptn,
    check_closed_forms,
    check_lie_super,
    ideal_check,
    phi_sets,
)
from .dsl import DslError, dump, parse, print_module
from .formalpoly import LAMBDA
from .library import BUILTINS, GS_VARIANTS, SN_to_N2, builtin, sh_to_N2
from .paramfield import DenominatorVanishes
from .report import Report, digest, render_json, render_text
from .representation import FAMILIES, MODES, ModulePresentation, builtin_module, check_module, specialize_module
from .submodule import check_submodule_closure, induced_module

MORPHISMS = {"sh-N2": sh_to_N2, "SN-N2": SN_to_N2}
NEEDS_N = {"sp", "sn", "B", "Sgen", "GS"}


class UsageError(Exception):
    pass


def _verbose() -> bool:
    return os.environ.get("CONFALG_VERBOSE", "").strip().lower() not in ("", "0", "false", "no")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _rational(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what}: expected a rational number, got {text!r}") from None


def _assignments(pairs) -> dict:
    out = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--set expects name=rational, got {item!r}")
        out[name.strip()] = _rational(value.strip(), f"--set {name}")
    return out


def _emit(report: Report, texts, as_json: bool) -> int:
    d = digest("".join(texts))
    render = render_json if as_json else render_text
    sys.stdout.write(render(report, d, _verbose()))
    return 0 if report.ok else 1


# subcommands -------------------------------------------------------------------------


def cmd_gen(args) -> int:
    name = args.builtin
    kwargs = _assignments(args.set)
    if name in MORPHISMS:
        if name == "SN-N2" and args.delta is not None:
            kwargs["delta"] = _rational(args.delta, "--delta")
        _write(args.out, dump(MORPHISMS[name](**kwargs)))
        return 0
    if name in BUILTINS:
        pos = []
        if name in NEEDS_N:
            pos.append(1 if args.n is None else args.n)
        elif args.n is not None:
            raise UsageError(f"{name} takes no --n")
        if name == "GS":
            if args.delta is not None:
                kwargs["delta"] = _rational(args.delta, "--delta")
            if args.variant:
                kwargs["variant"] = args.variant
        elif args.delta is not None or args.variant:
            raise UsageError("--delta and --variant apply to GS only")
        _write(args.out, dump(builtin(name, *pos, **kwargs)))
        return 0
    fam = name.partition("-")[2] or name
    if fam in FAMILIES:
        if args.mode is not None:
            kwargs["mode"] = args.mode
        if args.n is not None:
            kwargs["n"] = args.n
        _write(args.out, print_module(builtin_module(name, **kwargs), with_algebra=True))
        return 0
    known = sorted(BUILTINS) + sorted(FAMILIES) + ["bar-*", "dbar-*", "tbar-*"] + sorted(MORPHISMS)
    raise UsageError(f"unknown builtin {name!r}; choose from {', '.join(known)}")


def cmd_check_algebra(args) -> int:
    text = _read(args.file)
    alg = parse(text).algebra()
    return _emit(check_algebra(alg), [text], args.json)


def _module_from(alg_text: str, mod_text: str):
    alg = parse(alg_text).algebra()
    return parse(mod_text, algebras={alg.name: alg}, defaults={"over": alg}).module()


def cmd_check_module(args) -> int:
    a, m = _read(args.alg), _read(args.mod)
    mod = _module_from(a, m)
    return _emit(check_module(mod), [a, m], args.json)


def cmd_kth(args) -> int:
    if args.max_k < 0:
        raise UsageError("--max-k must be nonnegative")
    alg = parse(_read(args.alg)).algebra()
    lines = []
    for a in alg.names:
        for b in alg.names:
            val = alg.lookup(a, b)
            for k in range(args.max_k + 1):
                prod = val.coefficient(LAMBDA, k)
                if prod:
                    prod = prod.scale(factorial(k))
                    lines.append(f"{a}_({k}) {b} = {prod.format(alg.names)}")
    sys.stdout.write("\n".join(lines) + ("\n" if lines else ""))
    return 0


def cmd_ann(args) -> int:
    if args.t < 0 or args.modes < 0:
        raise UsageError("--t and --modes must be nonnegative")
    text = _read(args.alg)
    p = None if args.p is None else _rational(args.p, "--p")
    if p == 0:
        raise UsageError("p must be nonzero")
    report = Report()
    ran = False
    if args.check_closed_forms:
        alg = parse(text).algebra()
        report.extend(check_closed_forms(alg, args.t, args.modes))
        ran = True
    if args.ptn:
        q = build_ptn(args.t, args.modes, p)
        report.extend(check_lie_super(q))
        for which in (CHI, PSI, PHI):
            report.extend(ideal_check(q, which))
        # keep stdout a clean report stream under --json
        info = sys.stderr if args.json else sys.stdout
        info.write(f"p({args.t},{args.modes}) dimension {q.dim}\n")
        if p is not None:
            phi, phi0 = phi_sets(q)
            info.write("Phi0 " + " ".join(f"({i},{m})" for i, m in phi0) + "\n")
        ran = True
    if ran:
        return _emit(report, [text], args.json)
    alg = parse(text).algebra()
    if p is not None:
        if "p" not in alg.field.names:
            raise UsageError(f"{alg.name} has no parameter p")
        alg = specialize_algebra(alg, {"p": p})
    gens = ann_generators(alg, args.t, args.modes)
    for x in gens:
        for y in gens:
            v = ann_bracket(alg, x, y)
            if v:
                sys.stdout.write(f"[{x}, {y}] = {v}\n")
    return 0


def cmd_morphism(args) -> int:
    texts = [_read(args.map), _read(args.src), _read(args.dst)]
    src = parse(texts[1]).algebra()
    dst = parse(texts[2]).algebra()
    # with clashing names only the positional roles can tell them apart
    ext = {} if src.name == dst.name else {dst.name: dst, src.name: src}
    m = parse(texts[0], algebras=ext, defaults={"source": src, "target": dst}).morphism()
    return _emit(check_morphism(m), texts, args.json)


def cmd_submodule(args) -> int:
    mt, gt = _read(args.mod), _read(args.gens)
    mf = parse(mt)
    mod = mf.module()
    els = parse(gt, algebras={mod.name: mod}, defaults={"elements": mod}).elements()
    gens = list(els.elements.values())
    if not gens:
        raise UsageError("no generators given")
    report = check_submodule_closure(els.module, gens)
    if report.ok:
        sub = induced_module(els.module, gens, list(els.elements))
        if args.out:
            _write(args.out, print_module(sub, with_algebra=True))
    return _emit(report, [mt, gt], args.json)


def cmd_specialize(args) -> int:
    text = _read(args.file)
    assignment = _assignments(args.set)
    if not assignment:
        raise UsageError("give at least one --set name=value")
    pf = parse(text)
    out = []
    seen = set()
    for obj in pf.items:
        if not isinstance(obj, (AlgebraPresentation, ModulePresentation)):
            raise UsageError("only algebra and module blocks can be specialized")
        own = {k: v for k, v in assignment.items() if k in obj.field.names}
        seen |= set(own)
        try:
            if isinstance(obj, ModulePresentation):
                out.append(print_module(specialize_module(obj, own)))
            else:
                out.append(dump(specialize_algebra(obj, own)))
        except DenominatorVanishes as exc:
            raise UsageError(f"{obj.name}: {exc}") from None
    unknown = set(assignment) - seen
    if unknown:
        raise UsageError(f"no parameter(s) {', '.join(sorted(unknown))} in {args.file}")
    _write(args.out, "\n".join(out))
    return 0


# argument parsing -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="confalg", description="Check Lie conformal superalgebra presentations.")
    ap.add_argument("--version", action="version", version=f"confalg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a builtin presentation")
    g.add_argument("builtin")
    g.add_argument("--n", type=int)
    g.add_argument("--mode", choices=MODES)
    g.add_argument("--delta")
    g.add_argument("--variant", choices=GS_VARIANTS)
    g.add_argument("--set", action="append", metavar="NAME=VALUE", help="fix a parameter")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check-algebra", help="skew-symmetry and Jacobi identity")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check_algebra)

    c = sub.add_parser("check-module", help="module axiom")
    c.add_argument("alg")
    c.add_argument("mod")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check_module)

    k = sub.add_parser("kth", help="print the k-th products")
    k.add_argument("alg")
    k.add_argument("--max-k", type=int, required=True)
    k.set_defaults(func=cmd_kth)

    a = sub.add_parser("ann", help="annihilation superalgebra brackets and checks")
    a.add_argument("alg")
    a.add_argument("--t", type=int, required=True)
    a.add_argument("--modes", type=int, required=True)
    a.add_argument("--p")
    a.add_argument("--check-closed-forms", action="store_true")
    a.add_argument("--ptn", action="store_true")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_ann)

    m = sub.add_parser("morphism", help="check a map between algebras")
    m.add_argument("map")
    m.add_argument("src")
    m.add_argument("dst")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_morphism)

    s = sub.add_parser("submodule", help="closure of a generated submodule")
    s.add_argument("mod")
    s.add_argument("--gens", required=True)
    s.add_argument("--out", help="write the induced module here")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_submodule)

    s = sub.add_parser("specialize", help="substitute rational parameter values")
    s.add_argument("file")
    s.add_argument("--set", action="append", metavar="NAME=VALUE", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_specialize)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 for --help/--version
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (UsageError, DslError, DenominatorVanishes, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"confalg: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
