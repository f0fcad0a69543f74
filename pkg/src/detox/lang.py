"""DETOx-IL: a tiny imperative workload language with executable assertions.

A program is a list of variable declarations followed by statements::

    var x : 8 = 5
    array buf : 16 [4] = 1, 2, 3, 4
    x = x + 1 cost 2
    assert in_range : x < 10
    output x

Arithmetic is unsigned. Line comments start with ``#``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

WIDTHS = (8, 16, 32)
KEYWORDS = frozenset(
    {"var", "array", "if", "else", "while", "assert", "output", "cost", "and", "or", "not"}
)


class ParseError(Exception):
    """Raised for any malformed or ill-typed DETOx-IL source."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


class DuplicateIdentifierError(ParseError):
    pass


class UndeclaredIdentifierError(ParseError):
    pass


class ImpureAssertionError(ParseError):
    pass


class InitRangeError(ParseError):
    pass


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Index:
    name: str
    index: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


Expr = Union[Const, Name, Index, BinOp, Not]


@dataclass(frozen=True)
class VarDecl:
    name: str
    width: int
    init: tuple[int, ...]
    length: Optional[int] = None  # None for scalars

    @property
    def is_array(self) -> bool:
        return self.length is not None

    @property
    def n_elements(self) -> int:
        return 1 if self.length is None else self.length


@dataclass(frozen=True)
class AssertionDecl:
    id: str
    predicate: Expr
    cost: int = 1


@dataclass(frozen=True)
class Assign:
    target: Union[Name, Index]
    expr: Expr
    cost: int = 1
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assert:
    decl: AssertionDecl
    line: int = field(default=0, compare=False)

    @property
    def cost(self) -> int:
        return self.decl.cost


@dataclass(frozen=True)
class Output:
    expr: Expr
    cost: int = 1
    line: int = field(default=0, compare=False)


Stmt = Union[Assign, If, While, Assert, Output]


@dataclass(frozen=True)
class Program:
    vars: tuple[VarDecl, ...]
    body: tuple[Stmt, ...]
    assertions: tuple[AssertionDecl, ...]
    source: str = field(default="", compare=False, repr=False)

    def var(self, name: str) -> VarDecl:
        for v in self.vars:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def n_assertions(self) -> int:
        return len(self.assertions)

    def assertion_index(self, assertion_id: str) -> int:
        for i, a in enumerate(self.assertions):
            if a.id == assertion_id:
                return i
        raise KeyError(assertion_id)


def list_assertions(p: Program) -> list[tuple[int, str, int]]:
    """(bit position, id, cost) for each assertion, in configuration order."""
    return [(i, a.id, a.cost) for i, a in enumerate(p.assertions)]


def iter_statements(body):
    for s in body:
        yield s
        if isinstance(s, If):
            yield from iter_statements(s.then)
            yield from iter_statements(s.orelse)
        elif isinstance(s, While):
            yield from iter_statements(s.body)


# --- lexer -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>0[xX][0-9a-fA-F]+|[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|!=|<=|>=|[-+*/%<>=:\[\](){},])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, ident, kw, op, eof
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            toks.append(_Tok("kw" if text in KEYWORDS else "ident", text, line, col))
        elif kind in ("num", "op"):
            toks.append(_Tok(kind, text, line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# --- parser ----------------------------------------------------------------

_CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.pos = 0
        self.vars: dict[str, VarDecl] = {}
        self.assertions: list[AssertionDecl] = []
        self.in_predicate = False

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")
        tok = self.tok
        self.pos += 1
        return tok

    def ident(self) -> _Tok:
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"expected identifier, got {t.text or 'end of input'!r}")
        self.pos += 1
        return t

    def integer(self) -> int:
        t = self.tok
        if t.kind != "num":
            raise self.error(f"expected integer, got {t.text or 'end of input'!r}")
        self.pos += 1
        return int(t.text, 0)

    # grammar
    def program(self) -> tuple[tuple[VarDecl, ...], tuple[Stmt, ...]]:
        decls = []
        while self.at("var") or self.at("array"):
            decls.append(self.vardecl())
        body = []
        while self.tok.kind != "eof":
            body.append(self.stmt())
        return tuple(decls), tuple(body)

    def vardecl(self) -> VarDecl:
        is_array = self.tok.text == "array"
        self.pos += 1
        name_tok = self.ident()
        name = name_tok.text
        if name in self.vars:
            raise self.error(f"duplicate variable {name!r}", name_tok, DuplicateIdentifierError)
        self.expect(":")
        wtok = self.tok
        width = self.integer()
        if width not in WIDTHS:
            raise self.error(f"width must be one of {WIDTHS}, got {width}", wtok)
        length = None
        if is_array:
            self.expect("[")
            ltok = self.tok
            length = self.integer()
            if length < 1:
                raise self.error("array length must be >= 1", ltok)
            self.expect("]")
        self.expect("=")
        init_tok = self.tok
        init = [self.integer()]
        while is_array and self.accept(","):
            init.append(self.integer())
        if is_array:
            if len(init) == 1:
                init = init * length
            elif len(init) != length:
                raise self.error(
                    f"array {name!r} has {length} elements but {len(init)} initializers", init_tok
                )
        for v in init:
            if v >= 1 << width:
                raise self.error(
                    f"initializer {v} does not fit in {width} bits", init_tok, InitRangeError
                )
        decl = VarDecl(name, width, tuple(init), length)
        self.vars[name] = decl
        return decl

    def cost(self) -> int:
        if self.accept("cost"):
            tok = self.tok
            c = self.integer()
            if c < 1:
                raise self.error("cost must be >= 1", tok)
            return c
        return 1

    def block(self) -> tuple[Stmt, ...]:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated block")
            stmts.append(self.stmt())
        self.expect("}")
        return tuple(stmts)

    def stmt(self) -> Stmt:
        t = self.tok
        if self.accept("if"):
            cond = self.expr()
            then = self.block()
            orelse = self.block() if self.accept("else") else ()
            return If(cond, then, orelse, line=t.line)
        if self.accept("while"):
            cond = self.expr()
            return While(cond, self.block(), line=t.line)
        if self.accept("output"):
            e = self.expr()
            return Output(e, self.cost(), line=t.line)
        if self.accept("assert"):
            id_tok = self.ident()
            if any(a.id == id_tok.text for a in self.assertions):
                raise self.error(
                    f"duplicate assertion {id_tok.text!r}", id_tok, DuplicateIdentifierError
                )
            c = self.cost()
            self.expect(":")
            self.in_predicate = True
            try:
                pred = self.expr()
            finally:
                self.in_predicate = False
            decl = AssertionDecl(id_tok.text, pred, c)
            self.assertions.append(decl)
            return Assert(decl, line=t.line)
        if t.kind == "ident":
            target = self.lvalue()
            self.expect("=")
            e = self.expr()
            return Assign(target, e, self.cost(), line=t.line)
        raise self.error(f"expected statement, got {t.text or 'end of input'!r}")

    def lvalue(self):
        tok = self.ident()
        decl = self.lookup(tok)
        if self.accept("["):
            if not decl.is_array:
                raise self.error(f"{tok.text!r} is not an array", tok)
            idx = self.expr()
            self.expect("]")
            return Index(tok.text, idx)
        if decl.is_array:
            raise self.error(f"array {tok.text!r} needs an index", tok)
        return Name(tok.text)

    def lookup(self, tok: _Tok) -> VarDecl:
        try:
            return self.vars[tok.text]
        except KeyError:
            raise self.error(
                f"undeclared identifier {tok.text!r}", tok, UndeclaredIdentifierError
            ) from None

    def expr(self) -> Expr:
        e = self.or_expr()
        if self.at("="):
            if self.in_predicate:
                raise self.error(
                    "assignment inside assertion predicate", cls=ImpureAssertionError
                )
            raise self.error("unexpected '=' in expression (use '==' to compare)")
        return e

    def or_expr(self) -> Expr:
        e = self.and_expr()
        while self.accept("or"):
            e = BinOp("or", e, self.and_expr())
        return e

    def and_expr(self) -> Expr:
        e = self.not_expr()
        while self.accept("and"):
            e = BinOp("and", e, self.not_expr())
        return e

    def not_expr(self) -> Expr:
        if self.accept("not"):
            return Not(self.not_expr())
        return self.comparison()

    def comparison(self) -> Expr:
        e = self.additive()
        if self.tok.kind == "op" and self.tok.text in _CMP_OPS:
            op = self.tok.text
            self.pos += 1
            e = BinOp(op, e, self.additive())
        return e

    def additive(self) -> Expr:
        e = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.pos += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.atom()
        while self.at("*") or self.at("/") or self.at("%"):
            op = self.tok.text
            self.pos += 1
            e = BinOp(op, e, self.atom())
        return e

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.pos += 1
            return Const(int(t.text, 0))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident":
            self.pos += 1
            decl = self.lookup(t)
            if self.accept("["):
                if not decl.is_array:
                    raise self.error(f"{t.text!r} is not an array", t)
                idx = self.expr()
                self.expect("]")
                return Index(t.text, idx)
            if decl.is_array:
                raise self.error(f"array {t.text!r} needs an index", t)
            return Name(t.text)
        raise self.error(f"expected expression, got {t.text or 'end of input'!r}")


def parse(source: str) -> Program:
    """Parse and validate DETOx-IL source.

    Raises a :class:`ParseError` subclass with line/column on any problem.
    Assertions are indexed in order of their textual appearance.
    """
    p = _Parser(source)
    decls, body = p.program()
    return Program(decls, body, tuple(p.assertions), source=source)


# --- printer ---------------------------------------------------------------

_PREC = {"or": 1, "and": 2, "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
         "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}


def _fmt_expr(e: Expr, prec: int = 0) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Index):
        return f"{e.name}[{_fmt_expr(e.index)}]"
    if isinstance(e, Not):
        s = "not " + _fmt_expr(e.operand, 3)
        return f"({s})" if prec > 3 else s
    p = _PREC[e.op]
    # left-assoc: right operand needs strictly higher precedence; comparisons don't chain
    lp = p + 1 if p == 4 else p
    s = f"{_fmt_expr(e.left, lp)} {e.op} {_fmt_expr(e.right, p + 1)}"
    return f"({s})" if p < prec else s


def _cost(c: int) -> str:
    return f" cost {c}" if c != 1 else ""


def _fmt_block(stmts, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    for s in stmts:
        if isinstance(s, Assign):
            out.append(f"{pad}{_fmt_expr(s.target)} = {_fmt_expr(s.expr)}{_cost(s.cost)}")
        elif isinstance(s, Output):
            out.append(f"{pad}output {_fmt_expr(s.expr)}{_cost(s.cost)}")
        elif isinstance(s, Assert):
            d = s.decl
            out.append(f"{pad}assert {d.id}{_cost(d.cost)} : {_fmt_expr(d.predicate)}")
        elif isinstance(s, If):
            out.append(f"{pad}if {_fmt_expr(s.cond)} {{")
            _fmt_block(s.then, indent + 1, out)
            if s.orelse:
                out.append(f"{pad}}} else {{")
                _fmt_block(s.orelse, indent + 1, out)
            out.append(f"{pad}}}")
        elif isinstance(s, While):
            out.append(f"{pad}while {_fmt_expr(s.cond)} {{")
            _fmt_block(s.body, indent + 1, out)
            out.append(f"{pad}}}")


def render_source(p: Program) -> str:
    """Pretty-print a program back to parseable source."""
    out = []
    for v in p.vars:
        if v.is_array:
            init = ", ".join(map(str, v.init))
            out.append(f"array {v.name} : {v.width} [{v.length}] = {init}")
        else:
            out.append(f"var {v.name} : {v.width} = {v.init[0]}")
    _fmt_block(p.body, 0, out)
    return "\n".join(out) + "\n"
