"""Command-line front end: expression parser, documents, dispatch.

Operator expressions follow the shared grammar: sums of terms
`coef * x1^a1 * ... * d1^b1 * ...` with integer or p/q rational
literals, tokens x<i> and d<i>, infix + - *, postfix ^; multiplication
is noncommutative left-to-right and whitespace is insignificant.
Algebra and module elements extend the grammar with named atoms,
optionally carrying a d-exponent vector: `g` or `g[1,0]`.

Documents are versioned JSON with a fixed envelope; parse(print(doc))
round-trips exactly.  Machine-readable output goes to stdout,
diagnostics to stderr.  Exit codes: 0 pass, 1 fail, 2 usage error,
3 degree-guard abort.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import verify
from .amod import AModule, AModuleElement, TensorOverA, BaseChangeModule, flatten_sullivan
from .complexes import (
    ChainMap,
    ComplexError,
    FreeDComplex,
    homology,
    is_weak_equivalence,
    mapping_cone,
)
from .dga import AlgebraElement, AlgebraMorphism, Generator, SullivanAlgebra, dga_pushout_gen
from .groebner import DegreeGuardExceeded, FreeModuleElement, set_degree_guard
from .model import certify_cofibration, attach_cells, iota, pushout, pushout_product, zeta
from .obasis import is_bounded_weq
from .weyl import WeylElement

FORMAT_NAME = "dgdm-doc"
FORMAT_VERSION = 1


# ------------------------------------------------------------------ lexer

class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: Tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        exp = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at line {line}, column {column}{exp}")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<rat>\d+(?:/\d+)?)|(?P<var>[xd]\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[+\-*^\[\],]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        if text[pos] == "\n":
            line += 1
            line_start = pos + 1
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            col = pos - line_start + 1
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        col = m.start(m.lastgroup) - line_start + 1
        tokens.append((m.lastgroup, m.group(m.lastgroup), line, col))
        pos = m.end()
    tokens.append(("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    """Recursive-descent parser shared by the three element grammars."""

    def __init__(self, text: str, nvars: int, atom_lookup=None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.atom_lookup = atom_lookup  # name -> callable(dexp) -> value

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, expected: Tuple[str, ...]):
        kind, value, line, col = self.peek()
        shown = value or kind
        raise ParseError(f"unexpected token {shown!r}", line, col, expected)

    def expect_op(self, op: str):
        kind, value, line, col = self.peek()
        if kind == "op" and value == op:
            return self.advance()
        self.error((op,))

    def parse_sum(self, mul, neg, from_rat, from_var, from_name):
        # expr := ['-'] term (('+'|'-') term)*
        negate = False
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.advance()
            negate = True
        total = self.parse_term(mul, from_rat, from_var, from_name)
        if negate:
            total = neg(total)
        while True:
            kind, value, _, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                term = self.parse_term(mul, from_rat, from_var, from_name)
                total = total + (neg(term) if value == "-" else term)
            else:
                return total

    def parse_term(self, mul, from_rat, from_var, from_name):
        total = self.parse_factor(mul, from_rat, from_var, from_name)
        while True:
            kind, value, _, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                total = mul(total, self.parse_factor(mul, from_rat, from_var, from_name))
            else:
                return total

    def parse_factor(self, mul, from_rat, from_var, from_name):
        kind, value, line, col = self.peek()
        if kind == "rat":
            self.advance()
            base = from_rat(Fraction(value))
        elif kind == "var":
            self.advance()
            idx = int(value[1:])
            if not 1 <= idx <= self.nvars:
                raise ParseError(f"unknown variable index {value!r}", line, col)
            base = from_var(value[0], idx)
        elif kind == "name":
            if from_name is None:
                self.error(("rational", "x<i>", "d<i>"))
            self.advance()
            dexp = (0,) * self.nvars
            if self.peek()[0] == "op" and self.peek()[1] == "[":
                self.advance()
                exps = []
                while True:
                    k2, v2, l2, c2 = self.peek()
                    if k2 != "rat" or "/" in v2:
                        self.error(("integer",))
                    exps.append(int(v2))
                    self.advance()
                    k2, v2, _, _ = self.peek()
                    if k2 == "op" and v2 == ",":
                        self.advance()
                        continue
                    break
                self.expect_op("]")
                if len(exps) != self.nvars:
                    raise ParseError(
                        f"atom exponent vector has length {len(exps)}, expected {self.nvars}",
                        line, col,
                    )
                dexp = tuple(exps)
            base = from_name(value, dexp, line, col)
        else:
            self.error(("rational", "x<i>", "d<i>", "name"))
        # postfix ^
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            k2, v2, l2, c2 = self.peek()
            if k2 != "rat" or "/" in v2:
                self.error(("integer exponent",))
            self.advance()
            power = int(v2)
            acc = None
            for _ in range(power):
                acc = base if acc is None else mul(acc, base)
            base = acc if acc is not None else from_rat(Fraction(1))
        return base

    def finish(self, value):
        if self.peek()[0] != "eof":
            self.error(("+", "-", "*", "end of input"))
        return value


def parse_operator(text: str, nvars: int = 1) -> WeylElement:
    """Parse an operator expression into a canonical WeylElement."""
    p = _Parser(text, nvars)
    value = p.parse_sum(
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        from_rat=lambda c: WeylElement.scalar(nvars, c),
        from_var=lambda kind, i: (WeylElement.x if kind == "x" else WeylElement.d)(i, nvars),
        from_name=None,
    )
    return p.finish(value)


def operator_to_string(w: WeylElement) -> str:
    return w.to_string()


def parse_algebra_element(text: str, algebra: SullivanAlgebra) -> AlgebraElement:
    """Parse an algebra element; generator atoms as `name` or `name[b...]`."""
    nvars = algebra.nvars

    def from_name(name, dexp, line, col):
        try:
            j = algebra.generator_index(name)
        except KeyError:
            raise ParseError(f"unknown generator {name!r}", line, col)
        return algebra.atom(j, dexp)

    def from_var(kind, i):
        if kind == "d":
            raise ParseError("free d-factors are not algebra elements; use atom exponents", 1, 1)
        return algebra.x_poly(tuple(1 if k == i - 1 else 0 for k in range(nvars)))

    p = _Parser(text, nvars)
    value = p.parse_sum(
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        from_rat=lambda c: algebra.one(c),
        from_var=from_var,
        from_name=from_name,
    )
    return p.finish(value)


def parse_module_element(text: str, module: AModule) -> AModuleElement:
    """Parse a module element over the flat Sullivan shape A (x) V.

    Atoms name algebra generators or module generators; each term must
    contain exactly one module atom.
    """
    algebra = module.algebra
    nvars = module.nvars
    mod_names = {g.name: j for j, g in enumerate(module.gens)}

    class Wrap:
        # (algebra element, optional (j, dexp)) pairs summed
        def __init__(self, terms):
            self.terms = terms  # list of (AlgebraElement, None | (j, dexp))

        def __add__(self, other):
            return Wrap(self.terms + other.terms)

    def mul(a: Wrap, b: Wrap) -> Wrap:
        out = []
        for (ae1, at1) in a.terms:
            for (ae2, at2) in b.terms:
                if at1 is not None and at2 is not None:
                    raise ParseError("a term may contain at most one module atom", 1, 1)
                out.append((algebra.multiply(ae1, ae2), at1 or at2))
        return Wrap(out)

    def neg(a: Wrap) -> Wrap:
        return Wrap([(ae.scale(-1), at) for (ae, at) in a.terms])

    def from_name(name, dexp, line, col):
        if name in mod_names:
            return Wrap([(algebra.one(), (mod_names[name], dexp))])
        try:
            j = algebra.generator_index(name)
        except KeyError:
            raise ParseError(f"unknown generator {name!r}", line, col)
        return Wrap([(algebra.atom(j, dexp), None)])

    def from_var(kind, i):
        if kind == "d":
            raise ParseError("free d-factors are not module elements; use atom exponents", 1, 1)
        return Wrap([(algebra.x_poly(tuple(1 if k == i - 1 else 0 for k in range(nvars))), None)])

    p = _Parser(text, nvars)
    w = p.parse_sum(mul, neg, lambda c: Wrap([(algebra.one(c), None)]), from_var, from_name)
    p.finish(w)
    out = module.zero()
    for (ae, at) in w.terms:
        if at is None:
            raise ParseError("every term needs exactly one module atom", 1, 1)
        j, dexp = at
        out = out + module.act_algebra(ae, AModuleElement(
            module, {("v", (0,) * nvars, (), j, dexp): Fraction(1)}
        ))
    return out


# ------------------------------------------------------------- documents

class DocumentError(ValueError):
    pass


def make_document(kind: str, body: Dict) -> Dict:
    doc = {"format": FORMAT_NAME, "version": FORMAT_VERSION, "kind": kind}
    doc.update(body)
    return doc


def print_document(doc: Dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1)


def parse_document(text: str) -> Dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not valid JSON: {e}")
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise DocumentError(f"missing '{FORMAT_NAME}' envelope")
    if doc.get("version") != FORMAT_VERSION:
        raise DocumentError(f"unsupported version {doc.get('version')!r}")
    if "kind" not in doc:
        raise DocumentError("document has no kind")
    return doc


def load_document(path: str) -> Dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())


def complex_body(c: FreeDComplex) -> Dict:
    return {
        "vars": c.nvars,
        "ranks": {str(n): r for n, r in sorted(c.ranks.items())},
        "differentials": {
            str(n): [[e.to_string() for e in row] for row in mat]
            for n, mat in sorted(c.differentials.items())
        },
    }


def complex_from_body(body: Dict) -> FreeDComplex:
    nvars = int(body.get("vars", 1))
    ranks = {int(k): int(v) for k, v in body.get("ranks", {}).items()}
    diffs = {}
    for k, mat in body.get("differentials", {}).items():
        diffs[int(k)] = tuple(
            tuple(parse_operator(e, nvars) for e in row) for row in mat
        )
    try:
        return FreeDComplex(nvars, ranks, diffs)
    except ComplexError as e:
        raise DocumentError(str(e))


def chainmap_body(f: ChainMap) -> Dict:
    return {
        "vars": f.nvars,
        "source": complex_body(f.source),
        "target": complex_body(f.target),
        "maps": {
            str(n): [[e.to_string() for e in row] for row in mat]
            for n, mat in sorted(f.maps.items())
        },
    }


def chainmap_from_body(body: Dict) -> ChainMap:
    nvars = int(body.get("vars", 1))
    src = complex_from_body(dict(body["source"], vars=nvars))
    tgt = complex_from_body(dict(body["target"], vars=nvars))
    maps = {}
    for k, mat in body.get("maps", {}).items():
        maps[int(k)] = tuple(tuple(parse_operator(e, nvars) for e in row) for row in mat)
    try:
        return ChainMap(src, tgt, maps)
    except ComplexError as e:
        raise DocumentError(str(e))


def algebra_body(a: SullivanAlgebra) -> Dict:
    return {
        "vars": a.nvars,
        "generators": [{"name": g.name, "degree": g.degree} for g in a.generators],
        "differential": {
            a.generators[j].name: AlgebraElement(a, coeffs).to_string()
            for j, coeffs in sorted(a.diff_coeffs.items())
        },
    }


def algebra_from_body(body: Dict) -> SullivanAlgebra:
    nvars = int(body.get("vars", 1))
    gens = [Generator(g["name"], int(g["degree"])) for g in body.get("generators", [])]
    algebra = SullivanAlgebra(nvars, gens)  # no differential yet for parsing context
    diff = {}
    for name, expr in body.get("differential", {}).items():
        j = algebra.generator_index(name)
        diff[j] = parse_algebra_element(expr, algebra).coeffs
    try:
        return SullivanAlgebra(nvars, gens, diff)
    except ValueError as e:
        raise DocumentError(str(e))


def amodule_body(m: AModule) -> Dict:
    if m.t_part is not None:
        m, _ = flatten_sullivan(m)
    return {
        "vars": m.nvars,
        "algebra": algebra_body(m.algebra),
        "generators": [{"name": g.name, "degree": g.degree} for g in m.gens],
        "differential": {
            m.gens[j].name: _module_element_to_string(AModuleElement(m, coeffs), m)
            for j, coeffs in sorted(m.diff_coeffs.items())
        },
    }


def amodule_from_body(body: Dict) -> AModule:
    algebra = algebra_from_body(dict(body["algebra"], vars=body.get("vars", 1)))
    gens = [Generator(g["name"], int(g["degree"])) for g in body.get("generators", [])]
    bare = AModule(algebra, None, gens, {})
    diff = {}
    for name, expr in body.get("differential", {}).items():
        j = next(i for i, g in enumerate(gens) if g.name == name)
        diff[j] = parse_module_element(expr, bare).coeffs
    try:
        return AModule(algebra, None, gens, diff)
    except ValueError as e:
        raise DocumentError(str(e))


def _module_element_to_string(elt: AModuleElement, m: AModule) -> str:
    if elt.is_zero():
        return "0"
    parts = []
    for key in sorted(elt.coeffs, key=repr):
        c = elt.coeffs[key]
        _, alpha, atoms, j, b = key
        factors = []
        for i, e in enumerate(alpha):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e > 1:
                factors.append(f"x{i + 1}^{e}")
        for (ja, ba) in atoms:
            gname = m.algebra.generators[ja].name
            factors.append(gname if sum(ba) == 0 else f"{gname}[{','.join(map(str, ba))}]")
        gname = m.gens[j].name
        factors.append(gname if sum(b) == 0 else f"{gname}[{','.join(map(str, b))}]")
        if c == 1:
            parts.append("*".join(factors))
        elif c == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts).replace("+ -", "- ")


def presentation_body(h) -> Dict:
    return {
        "degree": h.degree,
        "ambient_rank": h.ambient_rank,
        "generators": [[c.to_string() for c in g.coords] for g in h.generators],
        "relations": [[c.to_string() for c in r.coords] for r in h.relations],
        "zero": h.is_zero(),
    }


# ------------------------------------------------------------- dispatch

def _emit(doc: Dict):
    sys.stdout.write(print_document(doc) + "\n")


def _diag(msg: str):
    sys.stderr.write(msg + "\n")


def dispatch(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="dgdm",
        description="Computer algebra for chain complexes over the Weyl algebra",
        exit_on_error=False,
    )
    parser.add_argument("--bound", type=int, default=None, help="degree guard cap")
    sub = parser.add_subparsers(dest="command")

    def add(name, **flags):
        p = sub.add_parser(name, exit_on_error=False)
        for flag, kw in flags.items():
            p.add_argument(flag, **kw)
        return p

    add("homology", **{"--file": {"required": True}, "--degree": {"type": int, "required": True}})
    add("cone", **{"--file": {"required": True}})
    add("weq", **{"--file": {"required": True}})
    add("pushout", **{"--file": {"required": True}})
    add("boxprod", **{
        "--m": {"type": int, "required": True},
        "--n": {"type": int, "required": True},
        "--kinds": {"default": "iota,iota"},
        "--vars": {"type": int, "default": 1},
        "--truncation": {"type": int, "default": 5},
    })
    add("attach", **{"--file": {"required": True}})
    add("sullivan-extend", **{"--file": {"required": True}})
    add("tensor-a", **{"--file": {"required": True}, "--truncation": {"type": int, "default": 4}})
    add("base-change", **{"--file": {"required": True}, "--truncation": {"type": int, "default": 4}})
    add("check", **{
        "--check": {"required": True},
        "--seed": {"type": int, "default": 0},
        "--truncation": {"type": int, "default": None},
    })
    add("suite", **{
        "--seed": {"type": int, "default": 0},
        "--filter": {"default": None},
        "--file": {"default": None, "help": "suite-config document overriding the flags"},
    })

    try:
        args = parser.parse_args(argv)
    except (argparse.ArgumentError, SystemExit):
        _diag("usage error")
        return 2
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    bound = args.bound
    env_bound = os.environ.get("WEYL_BOUND")
    if env_bound is not None:
        bound = int(env_bound)
    if bound is not None:
        set_degree_guard(bound)

    try:
        return _run_command(args)
    except DegreeGuardExceeded as e:
        _diag(f"degree guard: {e}")
        return 3
    except (DocumentError, ParseError, ComplexError, ValueError, KeyError) as e:
        _diag(f"error: {e}")
        return 2
    except FileNotFoundError as e:
        _diag(f"error: {e}")
        return 2


def _run_command(args) -> int:
    cmd = args.command

    if cmd == "homology":
        doc = load_document(args.file)
        if doc["kind"] != "complex":
            raise DocumentError(f"expected a complex document, got {doc['kind']}")
        c = complex_from_body(doc)
        h = homology(c, args.degree)
        _emit(make_document("presentation", presentation_body(h)))
        return 0

    if cmd == "cone":
        doc = load_document(args.file)
        if doc["kind"] != "chainmap":
            raise DocumentError(f"expected a chainmap document, got {doc['kind']}")
        f = chainmap_from_body(doc)
        _emit(make_document("complex", complex_body(mapping_cone(f))))
        return 0

    if cmd == "weq":
        doc = load_document(args.file)
        f = chainmap_from_body(doc)
        verdict = is_weak_equivalence(f)
        _emit(make_document("verdict", {"claim": "weak-equivalence", "value": verdict}))
        return 0 if verdict else 1

    if cmd == "pushout":
        doc = load_document(args.file)
        if doc["kind"] != "pushout-input":
            raise DocumentError(f"expected a pushout-input document, got {doc['kind']}")
        f = chainmap_from_body(dict(doc["f"], vars=doc.get("vars", 1)))
        g = chainmap_from_body(dict(doc["g"], vars=doc.get("vars", 1)))
        cert = certify_cofibration(g)
        if cert.verdict != "certified":
            _diag(f"attaching leg is {cert.verdict}")
            return 1
        po = pushout(f, g, cert)
        _emit(make_document("pushout-result", {
            "complex": complex_body(po.complex),
            "from_target": chainmap_body(po.from_target),
            "from_attached": chainmap_body(po.from_attached),
        }))
        return 0

    if cmd == "boxprod":
        kinds = args.kinds.split(",")
        if len(kinds) != 2 or any(k not in ("iota", "zeta") for k in kinds):
            raise DocumentError("--kinds must be two of iota|zeta separated by a comma")
        maps = []
        for kind, idx in zip(kinds, (args.m, args.n)):
            maps.append(iota(idx) if kind == "iota" else zeta(idx))
        r = pushout_product(maps[0], maps[1], args.vars)
        body = {
            "m": args.m,
            "n": args.n,
            "kinds": args.kinds,
            "cokernel": {
                str(deg): [str(s) for s in slots] for deg, slots in sorted(r.cokernel.items())
            },
            "cokernel_description": {
                str(deg): ["D(x)D" for _ in slots] for deg, slots in sorted(r.cokernel.items())
            },
        }
        if "zeta" in kinds:
            res = is_bounded_weq(r.map, args.truncation)
            body["cone"] = res.verdict
            _emit(make_document("boxprod-report", body))
            return 0 if res.ok else 1
        _emit(make_document("boxprod-report", body))
        return 0

    if cmd == "attach":
        doc = load_document(args.file)
        if doc["kind"] != "attach-input":
            raise DocumentError(f"expected an attach-input document, got {doc['kind']}")
        base = complex_from_body(dict(doc["base"], vars=doc.get("vars", 1)))
        attachments = []
        for a in doc.get("attachments", []):
            n = int(a["degree"])
            cyc = a.get("cycle")
            z = None
            if cyc is not None:
                z = FreeModuleElement([parse_operator(e, base.nvars) for e in cyc])
            attachments.append((n, z))
        res = attach_cells(base, attachments)
        cert = certify_cofibration(res.inclusion)
        _emit(make_document("attach-result", {
            "complex": complex_body(res.complex),
            "inclusion_certified": cert.verdict,
        }))
        return 0 if cert.verdict == "certified" else 1

    if cmd == "sullivan-extend":
        doc = load_document(args.file)
        if doc["kind"] != "sullivan-extend-input":
            raise DocumentError(f"expected sullivan-extend-input, got {doc['kind']}")
        x = algebra_from_body(dict(doc["x"], vars=doc.get("vars", 1)))
        y = algebra_from_body(dict(doc["y"], vars=doc.get("vars", 1)))
        assignments = {}
        for name, expr in doc.get("map", {}).items():
            assignments[x.generator_index(name)] = parse_algebra_element(expr, y)
        f = AlgebraMorphism(x, y, assignments)
        n = int(doc["n"])
        w = parse_algebra_element(doc.get("assignment", "0"), x) if doc.get("assignment") else x.zero()
        po = dga_pushout_gen(x, y, f, n, w)
        _emit(make_document("sullivan-extend-result", {
            "x_ext": algebra_body(po.x_ext),
            "y_ext": algebra_body(po.y_ext),
            "map": {po.x_ext.generators[j].name: v.to_string() for j, v in po.map.assignments.items()},
        }))
        return 0

    if cmd == "tensor-a":
        doc = load_document(args.file)
        if doc["kind"] != "tensor-input":
            raise DocumentError(f"expected tensor-input, got {doc['kind']}")
        b = amodule_from_body(dict(doc["b"], vars=doc.get("vars", 1)))
        m = amodule_from_body(dict(doc["m"], vars=doc.get("vars", 1)))
        t = TensorOverA(b, m)
        witness = None
        for p in range(0, 4):
            for key in t.basis_keys(p, args.truncation - 2):
                acc: Dict = {}
                for k2, c2 in t.diff_key(key).items():
                    for k3, c3 in t.diff_key(k2).items():
                        acc[k3] = acc.get(k3, Fraction(0)) + c2 * c3
                if any(acc.values()):
                    witness = str(key)
        verdict = "pass" if witness is None else "fail"
        _emit(make_document("check-report", {
            "check": "tensor-over-A d^2 = 0 on slices",
            "verdict": verdict,
            "witness": witness,
        }))
        return 0 if witness is None else 1

    if cmd == "base-change":
        doc = load_document(args.file)
        if doc["kind"] != "base-change-input":
            raise DocumentError(f"expected base-change-input, got {doc['kind']}")
        b = algebra_from_body(dict(doc["b"], vars=doc.get("vars", 1)))
        n_mod = amodule_from_body(dict(doc["n"], vars=doc.get("vars", 1)))
        bc = BaseChangeModule(b, n_mod)
        witness = None
        for p in range(0, 4):
            for key in bc.basis_keys(p, args.truncation - 2):
                acc: Dict = {}
                for k2, c2 in bc.diff_key(key).items():
                    for k3, c3 in bc.diff_key(k2).items():
                        acc[k3] = acc.get(k3, Fraction(0)) + c2 * c3
                if any(acc.values()):
                    witness = str(key)
        verdict = "pass" if witness is None else "fail"
        _emit(make_document("check-report", {
            "check": "base-change d^2 = 0 on slices",
            "verdict": verdict,
            "witness": witness,
        }))
        return 0 if witness is None else 1

    if cmd == "check":
        params = {}
        if args.truncation is not None:
            params["truncation"] = args.truncation
        report = verify.run_check(args.check, params or None, args.seed)
        _emit(make_document("check-report", json.loads(report.to_text())))
        return 0 if report.verdict in ("pass", "bounded-pass") else 1

    if cmd == "suite":
        seed, name_filter, overrides = args.seed, args.filter, None
        if args.file:
            cfg = load_document(args.file)
            if cfg["kind"] != "suite-config":
                raise DocumentError(f"expected suite-config, got {cfg['kind']}")
            seed = int(cfg.get("seed", seed))
            name_filter = cfg.get("filter", name_filter)
            if cfg.get("bound") is not None:
                set_degree_guard(int(cfg["bound"]))
            if cfg.get("truncation") is not None:
                trunc = int(cfg["truncation"])
                overrides = {
                    name: {"truncation": trunc}
                    for name, (_, defaults) in verify.CATALOG.items()
                    if "truncation" in defaults
                }
        reports = verify.run_suite(name_filter, seed, overrides)
        agg = verify.aggregate_verdict(reports)
        _emit(make_document("suite-report", {
            "seed": seed,
            "filter": name_filter,
            "aggregate": agg,
            "reports": [json.loads(r.to_text()) for r in reports],
        }))
        for r in reports:
            _diag(f"{r.name}: {r.verdict} ({r.runtime:.2f}s)")
        return 0 if agg in ("pass", "bounded-pass") else 1

    raise DocumentError(f"unknown command {cmd!r}")


def main(argv: Optional[List[str]] = None) -> int:
    return dispatch(argv if argv is not None else sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
