"""Command line front end: `chowdilog <command> ...`.

Exit status: 0 success, 1 a check failed (or the input is not in the image /
the cycles are not congruent), 2 the input is malformed or violates a
precondition.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from flint import fmpq

from .bloch import B2Elt, B2Tensor, WedgeSum, check_modulus, ell_mr, li_mr
from .curve import Chart, CocycleData, CurveModel, rho_curve_cocycle, rho_curve_triple
from .cycles import UT, CycleSpec, congruence_experiment, rho_cycle
from .errors import ChowDilogError, ParseError
from .fields import polys_in
from .forms import residue_form
from .kahler import L_mr
from .laurent import parse_point, value_at
from .series import TSeries
from .omega import Omega_mr, expand_exponential, normalize_generators, omega_mr_pair
from .parser import (Context, Symbol, SymbolSum, Wedge, evaluate, evaluate_rational,
                     evaluate_symbols, evaluate_wedge, parse_any, parse_expression,
                     parse_symbols, parse_wedge)
from .suites import SUITES, run_suite

BASES = {"Q": (), "Qx": ("x",)}
DEFAULT_TRIALS = {"fiveterm": 100, "starweight": 8, "boundary": 50, "residue": 50,
                  "independence": 10, "milnor": 1, "cycle": 20}


class CheckFailed(Exception):
    pass


def show(v) -> str:
    if hasattr(v, "fmt"):
        out = v.fmt()
        return out if out else "0"
    dom = getattr(v, "F", None)
    if dom is not None and hasattr(dom, "fmt"):
        return dom.fmt(v)
    return str(v)


# ---------------------------------------------------------------- documents

@dataclass
class Document:
    base: tuple = ()
    m: int | None = None
    r: int | None = None
    prec: int | None = None
    lets: list = field(default_factory=list)       # (name, text, line)
    triple: tuple | None = None                      # (text, line)
    lifts: list = field(default_factory=list)      # (point text, expr text, line)
    charts: list = field(default_factory=list)     # (index, [point texts], line)
    gamma: list = field(default_factory=list)      # (index, coeff text, wedge text, line)
    eps: list = field(default_factory=list)        # (index, point text, symbols text, line)
    beta: list = field(default_factory=list)       # (i, j, tensor text, line)
    cycles: dict = field(default_factory=dict)     # "cycle"/"cycle2" -> (coords, line)
    coeffs: dict = field(default_factory=dict)     # "cycle"/"cycle2" -> fmpq


def _doc_error(msg, line):
    return ParseError(f"line {line}: {msg}")


def _int(text, line):
    try:
        return int(text)
    except ValueError:
        raise _doc_error(f"expected an integer, found {text!r}", line) from None


def read_document(text: str) -> Document:
    """Line-oriented input; `#` starts a comment."""
    doc = Document()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "base":
            if rest not in BASES:
                raise _doc_error(f"base must be Q or Qx, found {rest!r}", no)
            doc.base = BASES[rest]
        elif key in ("m", "r", "prec"):
            setattr(doc, key, _int(rest, no))
        elif key == "let":
            name, eq, expr = rest.partition("=")
            if not eq or not name.strip().isidentifier():
                raise _doc_error("expected 'let name = expression'", no)
            doc.lets.append((name.strip(), expr.strip(), no))
        elif key == "triple":
            doc.triple = (rest, no)
        elif key == "lift":
            pt, colon, expr = rest.partition(":")
            if not colon:
                raise _doc_error("expected 'lift <point> : <series>'", no)
            doc.lifts.append((pt.strip(), expr.strip(), no))
        elif key == "chart":
            idx, _, tail = rest.partition(" ")
            tail = tail.strip()
            pts = []
            if tail:
                if not tail.startswith("exclude"):
                    raise _doc_error("expected 'chart <i> [exclude p; q; ...]'", no)
                pts = [p.strip() for p in tail[len("exclude"):].split(";") if p.strip()]
            doc.charts.append((_int(idx, no), pts, no))
        elif key == "gamma":
            head, colon, w = rest.partition(":")
            if not colon:
                raise _doc_error("expected 'gamma <i> [coeff] : f1 /\\ f2 /\\ f3'", no)
            hs = head.split()
            if len(hs) not in (1, 2):
                raise _doc_error("expected 'gamma <i> [coeff] : ...'", no)
            doc.gamma.append((_int(hs[0], no), hs[1] if len(hs) == 2 else "1", w.strip(), no))
        elif key == "eps":
            head, colon, sy = rest.partition(":")
            hs = head.split(None, 1)
            if not colon or len(hs) != 2:
                raise _doc_error("expected 'eps <i> <point> : [..]'", no)
            doc.eps.append((_int(hs[0], no), hs[1].strip(), sy.strip(), no))
        elif key == "beta":
            head, colon, sy = rest.partition(":")
            hs = head.split()
            if not colon or len(hs) != 2:
                raise _doc_error("expected 'beta <i> <j> : [..](x)..'", no)
            doc.beta.append((_int(hs[0], no), _int(hs[1], no), sy.strip(), no))
        elif key in ("cycle", "cycle2"):
            parts = [p.strip() for p in rest.split(";")]
            if len(parts) != 3:
                raise _doc_error(f"{key} needs three coordinates separated by ';'", no)
            doc.cycles[key] = (parts, no)
        elif key in ("coeff", "coeff2"):
            doc.coeffs["cycle" if key == "coeff" else "cycle2"] = fmpq(_rational(rest, no))
        else:
            raise _doc_error(f"unknown directive {key!r}", no)
    return doc


def _rational(text, line):
    node = parse_expression(text)
    from .parser import Num, Neg, Bin
    def ev(n):
        if isinstance(n, Num):
            return n.value
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Bin) and n.op == "/":
            return ev(n.left) / ev(n.right)
        raise _doc_error(f"expected a rational number, found {text!r}", line)
    return ev(node)


def _in_line(err: ParseError, line: int) -> ParseError:
    return ParseError(f"line {line}: {err}")


def _modulus(doc: Document, args):
    m = args.m if args.m is not None else doc.m
    r = args.r if args.r is not None else doc.r
    if m is None or r is None:
        raise ParseError("m and r must be given (in the document or with --m/--r)")
    check_modulus(m, r)
    return m, r


def _context(doc: Document, prec: int) -> Context:
    ctx = Context(doc.base, "s", prec, {})
    for name, text, no in doc.lets:
        ctx.text = text
        try:
            ctx.bindings[name] = evaluate(parse_expression(text), ctx)
        except ParseError as e:
            raise _in_line(e, no) from None
    return ctx


def _eval_in(ctx, text, no, how):
    ctx.text = text
    try:
        return how(text)
    except ParseError as e:
        raise _in_line(e, no) from None


def _model(doc: Document, m: int, ctx: Context) -> CurveModel:
    M = CurveModel(m, doc.base)
    for ptext, etext, no in doc.lifts:
        try:
            pt = parse_point(ptext, doc.base)
        except ParseError as e:
            raise _in_line(e, no) from None
        a = _eval_in(ctx, etext, no, lambda t: evaluate(parse_expression(t), ctx))
        try:
            M.add_lift(pt, _to_residue_field(a, pt, ctx, no))
        except ValueError as e:
            raise _doc_error(str(e), no) from None
    return M


def _to_residue_field(a, pt, ctx, no):
    """Series over Q(base, s) -> series over k(pt), reading 's' as the root."""
    K = pt.residue_field
    cs = []
    for c in a.c:
        if pt.is_infinite:
            num, den, sub = polys_in(ctx.dom, c, "s")
            if len(num) > 1 or len(den) > 1:
                raise _doc_error("at infinity 's' is not allowed (use the coordinate 1/s)", no)
            cs.append(K(num[0] / den[0]))
        else:
            cs.append(value_at(c, pt))
    return TSeries(K, cs, True)


def _at_point(e: B2Elt, pt, ctx, no) -> B2Elt:
    out = B2Elt()
    for c, x in e.items():
        out = out + B2Elt.symbol(_to_residue_field(x, pt, ctx, no), c)
    return out


def _point(text, doc, no):
    try:
        return parse_point(text, doc.base)
    except ParseError as e:
        raise _in_line(e, no) from None


def _cycle(doc: Document, key: str, prec: int) -> CycleSpec:
    if doc.base:
        raise ParseError("cycles are supported over base Q only")
    if key not in doc.cycles:
        raise ParseError(f"the document has no '{key}' line")
    parts, no = doc.cycles[key]
    coords = []
    for p in parts:
        try:
            coords.append(evaluate_rational(parse_expression(p), UT, p))
        except ParseError as e:
            raise _in_line(e, no) from None
    return CycleSpec(tuple(coords), prec, doc.coeffs.get(key, fmpq(1)), key)


# ---------------------------------------------------------------- commands

def _wedge_arg(text, ctx, arity=None):
    ctx.text = text
    node = parse_wedge(text)
    ents = evaluate_wedge(node, ctx)
    if arity is not None and len(ents) != arity:
        raise ParseError(f"expected a wedge of {arity} entries, found {len(ents)}", 0, text)
    return WedgeSum(len(ents), [(1, ents)])


def _symbols_arg(text, ctx, tensor):
    ctx.text = text
    v = evaluate_symbols(parse_symbols(text), ctx)
    if isinstance(v, B2Tensor) != tensor:
        want = "[x](x)y symbols" if tensor else "[x] symbols"
        raise ParseError(f"expected {want}", 0, text)
    return v


def cmd_li(args, doc):
    m, r = _modulus(doc, args)
    ctx = _context(doc, args.prec or m)
    return li_mr(_symbols_arg(args.expr[0], ctx, False), m, r), []


def cmd_lmr(args, doc):
    m, r = _modulus(doc, args)
    ctx = _context(doc, args.prec or r)
    return ell_mr(_wedge_arg(args.expr[0], ctx, 2), m, r), []


def cmd_Lmr(args, doc):
    m, r = _modulus(doc, args)
    ctx = _context(doc, args.prec or m)
    return L_mr(_symbols_arg(args.expr[0], ctx, True), m, r), []


def _omega(args, doc):
    m, r = _modulus(doc, args)
    ctx = _context(doc, args.prec or r)
    if len(args.expr) == 1:
        w = _wedge_arg(args.expr[0], ctx, 3)
        return Omega_mr(normalize_generators(expand_exponential(w, r), ctx.dom), m, r, ctx.dom)
    if len(args.expr) != 2:
        raise ParseError("omega takes one element of I_(m,r) or a pair of wedges")
    A, B = (_wedge_arg(e, ctx, 3) for e in args.expr)
    return omega_mr_pair(A, B, m, r)


def cmd_omega(args, doc):
    return _omega(args, doc), []


def cmd_res_omega(args, doc):
    if not args.at:
        raise ParseError("res-omega needs --at <point>")
    w = _omega(args, doc)
    return residue_form(w, parse_point(args.at, doc.base)), []


def cmd_rho_curve(args, doc):
    m, r = _modulus(doc, args)
    if doc.triple is None:
        raise ParseError("the document has no 'triple' line")
    ctx = _context(doc, max(m, args.prec or doc.prec or m))
    text, no = doc.triple
    ents = _eval_in(ctx, text, no, lambda t: evaluate_wedge(parse_wedge(t), ctx))
    if len(ents) != 3:
        raise _doc_error("a triple has three entries", no)
    return rho_curve_triple(ents, _model(doc, m, ctx), m, r), []


def cmd_rho_cocycle(args, doc):
    m, r = _modulus(doc, args)
    ctx = _context(doc, max(m, args.prec or doc.prec or m))
    if not doc.charts:
        raise ParseError("the document has no 'chart' lines")
    charts = [Chart(i, tuple(_point(p, doc, no) for p in pts)) for i, pts, no in doc.charts]
    gamma = {c.index: [] for c in charts}
    for i, ctext, wtext, no in doc.gamma:
        if i not in gamma:
            raise _doc_error(f"gamma for unknown chart {i}", no)
        ents = _eval_in(ctx, wtext, no, lambda t: evaluate_wedge(parse_wedge(t), ctx))
        if len(ents) != 3:
            raise _doc_error("gamma terms are wedges of three functions", no)
        gamma[i].append((fmpq(_rational(ctext, no)), ents))
    eps = {}
    for i, ptext, stext, no in doc.eps:
        pt = _point(ptext, doc, no)
        e = _eval_in(ctx, stext, no, lambda t: _symbols_arg(t, ctx, False))
        eps.setdefault(i, {})[pt.key()] = (pt, _at_point(e, pt, ctx, no))
    beta = {}
    for i, j, stext, no in doc.beta:
        beta[(i, j)] = _eval_in(ctx, stext, no, lambda t: _symbols_arg(t, ctx, True))
    D = CocycleData(charts, gamma, eps, beta)
    return rho_curve_cocycle(D, _model(doc, m, ctx), m, r), []


def cmd_rho_cycle(args, doc):
    m, r = _modulus(doc, args)
    Z = _cycle(doc, "cycle", args.prec or doc.prec or r)
    return rho_cycle(Z, m, r), []


def cmd_congruence(args, doc):
    m, r = _modulus(doc, args)
    prec = args.prec or doc.prec or r
    rep = congruence_experiment(_cycle(doc, "cycle", prec), _cycle(doc, "cycle2", prec), m, r)
    value = {"rho1": show(rep.rho1), "rho2": show(rep.rho2)}
    checks = [("congruent mod t^m", rep.congruent), ("equal regulators", rep.equal)]
    return value, checks


def cmd_verify(args, doc):
    m = args.m if args.m is not None else 2
    r = args.r if args.r is not None else 3
    trials = args.trials if args.trials is not None else DEFAULT_TRIALS[args.suite]
    checks = run_suite(args.suite, m, r, trials, args.seed)
    return None, [(f"{c.name}: {c.detail}" if c.detail else c.name, c.ok) for c in checks]


COMMANDS = {
    "li": (cmd_li, "additive dilogarithm li_(m,r) of a sum of [x] symbols"),
    "lmr": (cmd_lmr, "l_(m,r) of a wedge a /\\ b"),
    "Lmr": (cmd_Lmr, "L_(m,r) of a sum of [x](x)y symbols"),
    "omega": (cmd_omega, "Omega_(m,r) of one wedge in I_(m,r), or omega_(m,r) of a pair"),
    "res-omega": (cmd_res_omega, "residue at --at of omega_(m,r) of a pair"),
    "rho-curve": (cmd_rho_curve, "rho_(m,r) of a triple (document file)"),
    "rho-cocycle": (cmd_rho_cocycle, "rho_(m,r) of cocycle data (document file)"),
    "rho-cycle": (cmd_rho_cycle, "regulator of a parametrized cycle (document file)"),
    "congruence": (cmd_congruence, "compare the regulators of cycle and cycle2 (document file)"),
    "verify": (cmd_verify, "run a seeded verification suite"),
}
DOC_COMMANDS = {"rho-curve", "rho-cocycle", "rho-cycle", "congruence"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chowdilog", description="Infinitesimal dilogarithms and regulators, exact.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        if name == "verify":
            sp.add_argument("suite", choices=sorted(SUITES))
        elif name in DOC_COMMANDS:
            sp.add_argument("document", help="input document ('-' for stdin)")
        else:
            sp.add_argument("expr", nargs="+")
        sp.add_argument("--m", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--prec", type=int)
        sp.add_argument("--base", choices=sorted(BASES), default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--trials", type=int)
        if name == "res-omega":
            sp.add_argument("--at", required=True)
    return p


def parameters(args) -> dict:
    out = {k: v for k, v in vars(args).items() if k not in ("json", "command") and v is not None}
    return {k: (v if isinstance(v, (int, str, list)) else str(v)) for k, v in out.items()}


def emit(args, value, checks, out=sys.stdout):
    if args.json:
        doc = {"command": args.command, "parameters": parameters(args),
               "value": value if isinstance(value, dict) or value is None else show(value),
               "checks": [{"name": n, "status": "PASS" if ok else "FAIL"} for n, ok in checks]}
        out.write(json.dumps(doc, sort_keys=True) + "\n")
        return
    if isinstance(value, dict):
        for k in sorted(value):
            out.write(f"{k} = {value[k]}\n")
    elif value is not None:
        out.write(show(value) + "\n")
    for n, ok in checks:
        out.write(f"{'PASS' if ok else 'FAIL'} {n}\n")


def run(argv=None, out=sys.stdout, err=sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        if args.command in DOC_COMMANDS:
            text = sys.stdin.read() if args.document == "-" else open(args.document).read()
            doc = read_document(text)
        else:
            doc = Document()
        if args.base is not None:
            doc.base = BASES[args.base]
        value, checks = fn(args, doc)
    except OSError as e:
        err.write(f"error: {e}\n")
        return 2
    except ChowDilogError as e:
        err.write(f"error ({type(e).__name__}): {e}\n")
        return e.exit_code
    emit(args, value, checks, out)
    return 0 if all(ok for _, ok in checks) else 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
