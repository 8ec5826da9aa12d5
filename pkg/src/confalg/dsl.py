"""Reader and printer for ``.lcs`` presentation files.

A file is a sequence of blocks. Each block opens with a header line::

    algebra NAME        # gen, bracket, bound
    module NAME         # over, mode, vector, action
    morphism NAME       # source, target, map
    elements NAME       # over, elem (generators of a submodule)

and may declare ``params``. Expressions are polynomials in ``D`` (∂) and
``x`` (λ) with parameter coefficients, multiplied onto generator or vector
symbols. ``/`` is allowed only when the divisor is a parameter expression.
Pairs that are not listed have zero bracket. ``#`` starts a comment.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .algebra import (
    AlgebraPresentation,
    GeneratorSymbol,
    MorphismPresentation,
    parity_name,
    skew_image,
)
from .formalpoly import LAMBDA, PARTIAL, FormalPolynomial
from .freemod import Element
from .paramfield import ParamField, ParamFraction
from .representation import MODES, BasisVector, GENERIC_P, ModulePresentation

RESERVED = {"D", "x"}
HEADERS = ("algebra", "module", "morphism", "elements")


class DslError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


@dataclass
class ElementList:
    """Named elements of a module, e.g. generators of a submodule."""

    name: str
    module: ModulePresentation
    elements: dict = dc_field(default_factory=dict)


@dataclass
class PresentationFile:
    items: list

    def _last(self, kind, label):
        found = [x for x in self.items if isinstance(x, kind)]
        if not found:
            raise DslError(f"no {label} block in file")
        return found[-1]

    def algebra(self) -> AlgebraPresentation:
        return self._last(AlgebraPresentation, "algebra")

    def module(self) -> ModulePresentation:
        return self._last(ModulePresentation, "module")

    def morphism(self) -> MorphismPresentation:
        return self._last(MorphismPresentation, "morphism")

    def elements(self) -> ElementList:
        return self._last(ElementList, "elements")


# expressions ---------------------------------------------------------------------------


class _Expr:
    """Evaluates an expression over scalars, formal polynomials and elements."""

    def __init__(self, field: ParamField, symbols, line: int, col0: int, text: str):
        self.field = field
        self.symbols = set(symbols)
        self.line = line
        self.col0 = col0
        self.text = text

    def error(self, node, message):
        # columns refer to the text with ^ rewritten as **, so map back
        pos = getattr(node, "col_offset", 0)
        shifted = self.text.replace("^", "**")
        carets = shifted[:pos].count("**")
        return DslError(message, self.line, self.col0 + pos - carets + 1)

    def run(self):
        src = self.text.replace("^", "**")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError as exc:
            col = (exc.offset or 1) - src[: (exc.offset or 1)].count("**")
            raise DslError(f"syntax error in expression: {exc.msg}", self.line, self.col0 + col) from None
        return self.eval(tree.body)

    def poly(self, v):
        if isinstance(v, ParamFraction):
            return FormalPolynomial.const(self.field, v)
        return v

    def eval(self, node):
        f = self.field
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise self.error(node, f"unsupported literal {node.value!r}")
            return f(node.value)
        if isinstance(node, ast.Name):
            name = node.id
            if name == "D":
                return FormalPolynomial.var(f, PARTIAL)
            if name == "x":
                return FormalPolynomial.var(f, LAMBDA)
            if name in f.names:
                return f(name)
            if name in self.symbols:
                return Element.basis(f, name)
            raise self.error(node, f"unknown symbol {name!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self.eval(node.operand)
            if isinstance(node.op, ast.UAdd):
                return v
            return v.scale(-1) if isinstance(v, Element) else -v
        if isinstance(node, ast.BinOp):
            a, b = self.eval(node.left), self.eval(node.right)
            op = node.op
            if isinstance(op, (ast.Add, ast.Sub)):
                if isinstance(op, ast.Sub):
                    b = b.scale(-1) if isinstance(b, Element) else -b
                if isinstance(a, Element) != isinstance(b, Element):
                    other = b if isinstance(a, Element) else a
                    if other:
                        raise self.error(node, "cannot add a polynomial to a vector expression")
                    return a if isinstance(a, Element) else b
                if isinstance(a, Element):
                    return a + b
                if isinstance(a, ParamFraction) and isinstance(b, ParamFraction):
                    return a + b
                return self.poly(a) + self.poly(b)
            if isinstance(op, ast.Mult):
                if isinstance(a, Element) and isinstance(b, Element):
                    raise self.error(node, "product of two generators")
                if isinstance(b, Element):
                    return b.scale(a)
                if isinstance(a, Element):
                    return a.scale(b)
                if isinstance(a, ParamFraction) and isinstance(b, ParamFraction):
                    return a * b
                return self.poly(a) * self.poly(b)
            if isinstance(op, ast.Div):
                if not isinstance(b, ParamFraction):
                    raise self.error(node.right, "'/' is only allowed by a parameter expression")
                if not b:
                    raise self.error(node.right, "division by zero")
                inv = b.inverse()
                return a.scale(inv) if not isinstance(a, ParamFraction) else a * inv
            if isinstance(op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int) and node.right.value >= 0):
                    raise self.error(node.right, "exponent must be a nonnegative integer")
                if isinstance(a, Element):
                    raise self.error(node, "power of a generator")
                k = node.right.value
                out = f(1) if isinstance(a, ParamFraction) else FormalPolynomial.const(f, 1)
                for _ in range(k):
                    out = out * a
                return out
        raise self.error(node, f"unsupported syntax {type(node).__name__}")

    def element(self) -> Element:
        v = self.run()
        if isinstance(v, Element):
            return v
        if not v:
            return Element(self.field)
        raise DslError("expression has no generator or vector symbol", self.line, self.col0 + 1)


# reading -----------------------------------------------------------------------------------


@dataclass
class _Line:
    no: int
    words: list
    head: str
    rhs: str | None
    rhs_col: int
    text: str


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        rhs, rhs_col = None, 0
        head = line
        if "=" in line:
            i = line.index("=")
            head, rhs = line[:i], line[i + 1 :]
            rhs_col = i + 1 + (len(rhs) - len(rhs.lstrip()))
            rhs = rhs.strip()
        words = head.split()
        yield _Line(no, words, head, rhs, rhs_col, line)


def _rest(ln: _Line) -> str:
    """Everything after the keyword (names may contain spaces or brackets)."""
    return ln.head.strip()[len(ln.words[0]) :].strip()


def _split_blocks(text: str):
    blocks = []
    for ln in _lines(text):
        kw = ln.words[0] if ln.words else ""
        if kw in HEADERS:
            if ln.rhs is not None:
                raise DslError(f"unexpected '=' in {kw} header", ln.no, ln.rhs_col)
            blocks.append((kw, _rest(ln), ln, []))
        elif not blocks:
            raise DslError(f"expected one of {', '.join(HEADERS)} before {kw!r}", ln.no, 1)
        else:
            blocks[-1][3].append(ln)
    return blocks


def _need(ln: _Line, n: int, usage: str, rhs: bool = False):
    if len(ln.words) != n or (ln.rhs is None) == rhs:
        raise DslError(f"expected: {usage}", ln.no, 1)


def _params(lines) -> ParamField | None:
    found = [ln for ln in lines if ln.words[0] == "params"]
    if not found:
        return None
    if len(found) > 1:
        raise DslError("params declared twice", found[1].no, 1)
    ln = found[0]
    if ln.rhs is not None:
        raise DslError("unexpected '='", ln.no, ln.rhs_col)
    names = ln.words[1:]
    for i, n in enumerate(names):
        if not n.isidentifier() or n in RESERVED:
            raise DslError(f"invalid parameter name {n!r}", ln.no, ln.text.index(n) + 1)
        if n in names[:i]:
            raise DslError(f"parameter {n!r} repeated", ln.no, 1)
    return ParamField.of(*names)


def _parity(ln: _Line, word: str) -> int:
    if word in ("even", "0"):
        return 0
    if word in ("odd", "1"):
        return 1
    raise DslError(f"parity must be even or odd, got {word!r}", ln.no, ln.text.index(word) + 1)


def _int(ln: _Line, word: str) -> int:
    try:
        return int(word)
    except ValueError:
        raise DslError(f"expected an integer, got {word!r}", ln.no, ln.text.index(word) + 1) from None


def _col(ln: _Line, word: str) -> int:
    i = ln.text.find(word)
    return i + 1 if i >= 0 else 1


def _check_symbol(ln, name, taken, field):
    if not name.isidentifier() or name in RESERVED:
        raise DslError(f"invalid symbol name {name!r}", ln.no, _col(ln, name))
    if name in taken or (field is not None and name in field.names):
        raise DslError(f"symbol {name!r} declared twice", ln.no, _col(ln, name))


def _read_algebra(name, header, lines) -> AlgebraPresentation:
    field = _params(lines) or ParamField.of()
    bound = None
    gens = []
    taken = set()
    entries = []
    for ln in lines:
        kw = ln.words[0]
        if kw == "params":
            continue
        if kw == "bound":
            _need(ln, 2, "bound N")
            if bound is not None:
                raise DslError("bound declared twice", ln.no, 1)
            bound = _int(ln, ln.words[1])
        elif kw == "gen":
            if ln.rhs is not None or len(ln.words) not in (3, 4):
                raise DslError("expected: gen NAME PARITY [GRADE]", ln.no, 1)
            if entries:
                raise DslError("generators must be declared before brackets", ln.no, 1)
            g = ln.words[1]
            _check_symbol(ln, g, taken, field)
            grade = _int(ln, ln.words[3]) if len(ln.words) == 4 else None
            try:
                sym = GeneratorSymbol.from_name(g, _parity(ln, ln.words[2]), grade)
            except ValueError as exc:
                raise DslError(str(exc), ln.no, _col(ln, g)) from None
            if sym.name != g:
                raise DslError(f"cannot represent generator name {g!r}", ln.no, _col(ln, g))
            taken.add(g)
            gens.append(sym)
        elif kw == "bracket":
            _need(ln, 3, "bracket A B = EXPR", rhs=True)
            entries.append(ln)
        else:
            raise DslError(f"unknown keyword {kw!r} in algebra block", ln.no, 1)
    by_name = {g.name: g for g in gens}
    if bound is not None:
        for g in gens:
            if g.grade > bound:
                raise DslError(f"{g.name} has grade {g.grade} above the bound {bound}", header.no, 1)
    table = {}
    where = {}
    for ln in entries:
        a, b = ln.words[1], ln.words[2]
        for s in (a, b):
            if s not in by_name:
                raise DslError(f"unknown generator {s!r}", ln.no, _col(ln, s))
        if (a, b) in table:
            raise DslError(f"duplicate bracket for ({a}, {b}), first given on line {where[(a, b)]}", ln.no, 1)
        val = _Expr(field, by_name, ln.no, ln.rhs_col, ln.rhs).element()
        par = (by_name[a].parity + by_name[b].parity) % 2
        for s in val.coeffs:
            if by_name[s].parity != par:
                raise DslError(
                    f"parity violation: [{a} {b}] is {parity_name(par)} but {s} is {parity_name(by_name[s].parity)}",
                    ln.no,
                    ln.rhs_col + 1,
                )
            want = by_name[a].grade + by_name[b].grade
            if by_name[s].grade != want:
                raise DslError(
                    f"grade violation: [{a} {b}] must have grade {want}, {s} has grade {by_name[s].grade}",
                    ln.no,
                    ln.rhs_col + 1,
                )
        if (b, a) in table and a != b:
            sign = -1 if by_name[a].parity * by_name[b].parity == 0 else 1
            if skew_image(table[(b, a)], sign) != val:
                raise DslError(
                    f"divergent orientations: [{a} {b}] disagrees with [{b} {a}] on line {where[(b, a)]}", ln.no, 1
                )
            continue
        table[(a, b)] = val
        where[(a, b)] = ln.no
    try:
        return AlgebraPresentation(field, gens, table, bound, name)
    except (ValueError, KeyError) as exc:
        raise DslError(str(exc), header.no, 1) from None


def _resolve(kind, name, local, external, defaults, ln):
    if name in external:
        return external[name]
    if name in local:
        return local[name]
    if defaults and kind in defaults:
        return defaults[kind]
    raise DslError(f"unknown {'module' if kind == 'elements' else 'algebra'} {name!r}", ln.no, _col(ln, name))


def _single(lines, kw, usage):
    found = [ln for ln in lines if ln.words[0] == kw]
    if len(found) > 1:
        raise DslError(f"{kw} given twice", found[1].no, 1)
    if found:
        if found[0].rhs is not None or len(found[0].words) < 2:
            raise DslError(f"expected: {usage}", found[0].no, 1)
        return found[0]
    return None


def _read_module(name, header, lines, local, external, defaults) -> ModulePresentation:
    over = _single(lines, "over", "over ALGEBRA")
    if over is None:
        raise DslError("module block needs an 'over' line", header.no, 1)
    alg = _resolve("over", _rest(over), local, external, defaults, over)
    field = _params(lines) or alg.field
    missing = set(alg.field.names) - set(field.names)
    if missing:
        raise DslError(f"params must include the algebra parameters {sorted(missing)}", header.no, 1)
    alg = alg.embed(field)
    mode = GENERIC_P
    mode_ln = _single(lines, "mode", "mode generic|pminus1")
    if mode_ln is not None:
        mode = _rest(mode_ln)
        if mode not in MODES:
            raise DslError(f"mode must be one of {', '.join(MODES)}", mode_ln.no, _col(mode_ln, mode))
    vectors = []
    taken = set(alg.names)
    table = {}
    where = {}
    for ln in lines:
        kw = ln.words[0]
        if kw in ("params", "over", "mode"):
            continue
        if kw == "vector":
            _need(ln, 3, "vector NAME PARITY")
            v = ln.words[1]
            _check_symbol(ln, v, taken, field)
            taken.add(v)
            vectors.append(BasisVector(v, _parity(ln, ln.words[2])))
        elif kw == "action":
            _need(ln, 3, "action GEN VECTOR = EXPR", rhs=True)
            g, v = ln.words[1], ln.words[2]
            if g not in alg.by_name:
                raise DslError(f"unknown generator {g!r}", ln.no, _col(ln, g))
            vec = {x.name: x for x in vectors}
            if v not in vec:
                raise DslError(f"unknown vector {v!r}", ln.no, _col(ln, v))
            if (g, v) in table:
                raise DslError(f"duplicate action for ({g}, {v}), first given on line {where[(g, v)]}", ln.no, 1)
            val = _Expr(field, vec, ln.no, ln.rhs_col, ln.rhs).element()
            par = (alg.parity(g) + vec[v].parity) % 2
            for s in val.coeffs:
                if vec[s].parity != par:
                    raise DslError(
                        f"parity violation: {g} acting on {v} is {parity_name(par)} but {s} is {parity_name(vec[s].parity)}",
                        ln.no,
                        ln.rhs_col + 1,
                    )
            table[(g, v)] = val
            where[(g, v)] = ln.no
        else:
            raise DslError(f"unknown keyword {kw!r} in module block", ln.no, 1)
    try:
        return ModulePresentation(alg, vectors, table, name, mode, field)
    except (ValueError, KeyError) as exc:
        raise DslError(str(exc), header.no, 1) from None


def _read_morphism(name, header, lines, local, external, defaults) -> MorphismPresentation:
    ends = {}
    for kw in ("source", "target"):
        ln = _single(lines, kw, f"{kw} ALGEBRA")
        if ln is None:
            raise DslError(f"morphism block needs a '{kw}' line", header.no, 1)
        ends[kw] = _resolve(kw, _rest(ln), local, external, defaults, ln)
    src, tgt = ends["source"], ends["target"]
    field = _params(lines) or src.field.union(tgt.field)
    src, tgt = src.embed(field.union(src.field)), tgt.embed(field.union(tgt.field))
    field = src.field.union(tgt.field)
    images = {}
    for ln in lines:
        kw = ln.words[0]
        if kw in ("params", "source", "target"):
            continue
        if kw != "map":
            raise DslError(f"unknown keyword {kw!r} in morphism block", ln.no, 1)
        _need(ln, 2, "map GEN = EXPR", rhs=True)
        g = ln.words[1]
        if g not in src.by_name:
            raise DslError(f"unknown source generator {g!r}", ln.no, _col(ln, g))
        if g in images:
            raise DslError(f"duplicate image for {g}", ln.no, 1)
        images[g] = _Expr(field, tgt.by_name, ln.no, ln.rhs_col, ln.rhs).element()
    try:
        m = MorphismPresentation(src, tgt, images)
    except (ValueError, KeyError) as exc:
        raise DslError(str(exc), header.no, 1) from None
    m.name = name
    return m


def _read_elements(name, header, lines, local, external, defaults) -> ElementList:
    over = _single(lines, "over", "over MODULE")
    if over is None:
        raise DslError("elements block needs an 'over' line", header.no, 1)
    mod = _resolve("elements", _rest(over), local, external, defaults, over)
    field = _params(lines) or mod.field
    if field is not mod.field:
        field = field.union(mod.field)
        mod = ModulePresentation(mod.algebra, mod.vectors, mod.table, mod.name, mod.mode, field)
    out = ElementList(name, mod)
    for ln in lines:
        kw = ln.words[0]
        if kw in ("params", "over"):
            continue
        if kw != "elem":
            raise DslError(f"unknown keyword {kw!r} in elements block", ln.no, 1)
        _need(ln, 2, "elem NAME = EXPR", rhs=True)
        e = ln.words[1]
        if e in out.elements:
            raise DslError(f"duplicate element {e}", ln.no, 1)
        _check_symbol(ln, e, set(), None)
        out.elements[e] = _Expr(field, mod.by_name, ln.no, ln.rhs_col, ln.rhs).element()
    return out


def parse(text: str, algebras: Mapping | None = None, defaults: Mapping | None = None) -> PresentationFile:
    """Read every block of ``text``.

    ``algebras`` maps names to presentations defined elsewhere (algebras, or
    modules for ``elements`` blocks); these win over blocks of the same name
    in the file. ``defaults`` maps a role (``over``, ``source``, ``target``,
    ``elements``) to the presentation used when a name cannot be resolved.
    """
    external = dict(algebras or {})
    local_alg, local_mod = {}, {}
    items = []
    for kw, name, header, lines in _split_blocks(text):
        if not name:
            raise DslError(f"{kw} block needs a name", header.no, 1)
        if kw == "algebra":
            obj = _read_algebra(name, header, lines)
            local_alg[name] = obj
        elif kw == "module":
            obj = _read_module(name, header, lines, local_alg, external, defaults)
            local_mod[name] = obj
        elif kw == "morphism":
            obj = _read_morphism(name, header, lines, local_alg, external, defaults)
        else:
            obj = _read_elements(name, header, lines, local_mod, external, defaults)
        items.append(obj)
    if not items:
        raise DslError("empty file")
    return PresentationFile(items)


def parse_expr(text: str, field: ParamField, symbols) -> Element:
    """Evaluate a single expression."""
    return _Expr(field, symbols, 1, 0, text).element()


# printing -----------------------------------------------------------------------------


def _params_line(field: ParamField) -> str:
    return "params " + " ".join(field.names) if field.names else "params"


def print_algebra(alg: AlgebraPresentation) -> str:
    out = [f"algebra {alg.name}", _params_line(alg.field)]
    if alg.bound is not None:
        out.append(f"bound {alg.bound}")
    for g in alg.gens:
        par = parity_name(g.parity)
        out.append(f"gen {g.name} {par}" if g.indexed or not g.grade else f"gen {g.name} {par} {g.grade}")
    for (a, b), v in alg.canonical_table().items():
        out.append(f"bracket {a} {b} = {v.format(alg.names)}")
    return "\n".join(out) + "\n"


def print_module(mod: ModulePresentation, with_algebra: bool = False) -> str:
    out = [print_algebra(mod.algebra), ""] if with_algebra else []
    out += [f"module {mod.name}", f"over {mod.algebra.name}", _params_line(mod.field), f"mode {mod.mode}"]
    for v in mod.vectors:
        out.append(f"vector {v.name} {parity_name(v.parity)}")
    for g in mod.algebra.names:
        for v in mod.names:
            val = mod.lookup(g, v)
            if val:
                out.append(f"action {g} {v} = {val.format(mod.names)}")
    return "\n".join(out) + "\n"


def print_morphism(m: MorphismPresentation, name: str | None = None) -> str:
    name = name or getattr(m, "name", None) or "map"
    out = [f"morphism {name}", f"source {m.source.name}", f"target {m.target.name}", _params_line(m.field)]
    for g in m.source.names:
        img = m.images[g]
        if img:
            out.append(f"map {g} = {img.format(m.target.names)}")
    return "\n".join(out) + "\n"


def print_elements(e: ElementList) -> str:
    out = [f"elements {e.name}", f"over {e.module.name}", _params_line(e.module.field)]
    for k, v in e.elements.items():
        out.append(f"elem {k} = {v.format(e.module.names)}")
    return "\n".join(out) + "\n"


def dump(obj, **kwargs) -> str:
    """Canonical text of a presentation."""
    if isinstance(obj, AlgebraPresentation):
        return print_algebra(obj)
    if isinstance(obj, ModulePresentation):
        return print_module(obj, **kwargs)
    if isinstance(obj, MorphismPresentation):
        return print_morphism(obj, **kwargs)
    if isinstance(obj, ElementList):
        return print_elements(obj)
    if isinstance(obj, PresentationFile):
        return "\n".join(dump(x) for x in obj.items)
    raise TypeError(f"cannot print {type(obj).__name__}")


def canonical(text: str, **kwargs) -> str:
    return dump(parse(text, **kwargs))


__all__ = [
    "DslError",
    "ElementList",
    "PresentationFile",
    "parse",
    "parse_expr",
    "dump",
    "canonical",
    "print_algebra",
    "print_module",
    "print_morphism",
    "print_elements",
]
