"""Hand-written lexer and recursive-descent parser for formulas and spec files.

Grammar, loosest binding first::

    formula   := disj ('implies' formula)?
    disj      := conj ('or' conj)*
    conj      := binary ('and' binary)*
    binary    := unary (('until'|'since'|'precedes') interval? unary)*
    unary     := 'not' unary | TEMPORAL interval? unary | STEP unary | atom
    atom      := 'true' | 'false' | '(' formula ')' | term CMP term
    interval  := '[' rational ':' (rational | 'inf') ']'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import ast as A
from .core import INF, UNITS, Interval, SpecError, Specification, StlError


class ParseError(StlError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class UndeclaredVariable(ParseError):
    pass


class IntervalError(ParseError):
    pass


class DuplicateDeclaration(SpecError):
    pass


class MissingAssignment(SpecError):
    pass


class UnknownUnit(SpecError):
    pass


KEYWORDS = {
    "always": "G", "G": "G",
    "eventually": "F", "F": "F",
    "historically": "H", "H": "H",
    "once": "O", "O": "O",
    "next": "X", "X": "X",
    "prev": "Y", "Y": "Y",
    "rise": "RISE", "fall": "FALL",
    "until": "U", "U": "U",
    "since": "S", "S": "S",
    "precedes": "P", "P": "P",
    "and": "AND", "or": "OR", "not": "NOT", "implies": "IMPLIES",
    "true": "TRUE", "false": "FALSE",
    "abs": "ABS", "inf": "INF",
}

SYMBOLS = {
    "&&": "AND", "||": "OR", "->": "IMPLIES", "!=": "!=", "==": "==",
    ">=": ">=", "<=": "<=", "!": "NOT", ">": ">", "<": "<",
    "(": "(", ")": ")", "[": "[", "]": "]", ":": ":",
    "+": "+", "-": "-", "*": "*", "/": "/",
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9.]*)
  | (?P<sym>&&|\|\||->|!=|==|>=|<=|[!<>()\[\]:+\-*/])
""", re.VERBOSE)

UNARY_TEMPORAL = {"G": A.Always, "F": A.Eventually, "H": A.Historically, "O": A.Once}
STEP = {"X": A.Next, "Y": A.Previous, "RISE": A.Rise, "FALL": A.Fall}
BINARY_TEMPORAL = {"U": A.Until, "S": A.Since, "P": A.Precedes}
COMPARE = {">", ">=", "<", "<=", "==", "!="}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "num":
            tokens.append(Token("NUM", lexeme, line, col))
        elif kind == "ident":
            tokens.append(Token(KEYWORDS.get(lexeme, "IDENT"), lexeme, line, col))
        elif kind == "sym":
            tokens.append(Token(SYMBOLS[lexeme], lexeme, line, col))
        if kind == "nl":
            line += 1
            col = 1
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text: str, declared=None, line: int = 1, col: int = 1):
        self.toks = tokenize(text, line, col)
        self.i = 0
        self.declared = None if declared is None else set(declared)

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def accept(self, kind: str):
        if self.tok.kind == kind:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind: str, what: str = None) -> Token:
        t = self.accept(kind)
        if t is None:
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {what or kind!r}, found {found!r}",
                             self.tok.line, self.tok.col)
        return t

    def error(self, message: str, tok: Token = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    # -- formulas
    def parse(self) -> A.Node:
        f = self.formula()
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def formula(self) -> A.Node:
        left = self.disj()
        if self.accept("IMPLIES"):
            return A.Implies(left, self.formula())
        return left

    def disj(self) -> A.Node:
        left = self.conj()
        while self.accept("OR"):
            left = A.Or(left, self.conj())
        return left

    def conj(self) -> A.Node:
        left = self.binary()
        while self.accept("AND"):
            left = A.And(left, self.binary())
        return left

    def binary(self) -> A.Node:
        left = self.unary()
        while self.tok.kind in BINARY_TEMPORAL:
            op = self.tok
            self.i += 1
            cls = BINARY_TEMPORAL[op.kind]
            interval = self.interval_opt()
            right = self.unary()
            if interval is None:
                if cls is A.Precedes:
                    raise IntervalError("precedes needs a bounded interval", op.line, op.col)
                interval = Interval(0)
            elif cls is A.Precedes and not interval.bounded:
                raise IntervalError("precedes needs a bounded interval", op.line, op.col)
            left = cls(left, right, interval)
        return left

    def unary(self) -> A.Node:
        kind = self.tok.kind
        if self.accept("NOT"):
            return A.Not(self.unary())
        if kind in UNARY_TEMPORAL:
            self.i += 1
            interval = self.interval_opt() or Interval(0)
            return UNARY_TEMPORAL[kind](self.unary(), interval)
        if kind in STEP:
            self.i += 1
            return STEP[kind](self.unary())
        return self.atom()

    def atom(self) -> A.Node:
        if self.accept("TRUE"):
            return A.TRUE
        if self.accept("FALSE"):
            return A.FALSE
        if self.tok.kind == "(":
            mark = self.i
            try:
                return self.predicate(backtrack=True)
            except _Backtrack:
                self.i = mark
            self.expect("(")
            f = self.formula()
            self.expect(")", "')'")
            return f
        return self.predicate()

    def predicate(self, backtrack: bool = False) -> A.Node:
        try:
            lhs = self.term()
        except ParseError:
            if backtrack:
                raise _Backtrack()
            raise
        if self.tok.kind not in COMPARE:
            if backtrack:
                raise _Backtrack()
            raise self.error(f"expected comparison, found {self.tok.text or 'end of input'!r}")
        op = self.tok.text
        self.i += 1
        rhs = self.term()
        return A.Predicate(lhs, op, rhs)

    # -- intervals
    def interval_opt(self):
        start = self.tok
        if not self.accept("["):
            return None
        lo = self.rational()
        self.expect(":", "':'")
        if self.accept("INF"):
            hi = INF
        else:
            hi = self.rational()
        self.expect("]", "']'")
        if hi != INF and lo > hi:
            raise IntervalError(f"interval lower bound {lo} exceeds upper bound {hi}",
                                start.line, start.col)
        return Interval(lo, hi)

    def rational(self) -> Fraction:
        if self.tok.kind == "-":
            raise IntervalError("interval bounds must be non-negative", self.tok.line, self.tok.col)
        num = self.expect("NUM", "number")
        value = Fraction(num.text)
        if self.accept("/"):
            den = Fraction(self.expect("NUM", "number").text)
            if den == 0:
                raise IntervalError("zero denominator in interval bound", num.line, num.col)
            value = value / den
        return value

    # -- terms
    def term(self) -> A.Node:
        left = self.product()
        while self.tok.kind in ("+", "-"):
            op = self.tok.text
            self.i += 1
            left = A.BinOp(op, left, self.product())
        return left

    def product(self) -> A.Node:
        left = self.factor()
        while self.tok.kind in ("*", "/"):
            op_tok = self.tok
            self.i += 1
            right = self.factor()
            if op_tok.kind == "/" and not (isinstance(right, A.Const) and right.value != 0):
                raise self.error("division only by a nonzero constant", op_tok)
            left = A.BinOp(op_tok.text, left, right)
        return left

    def factor(self) -> A.Node:
        tok = self.tok
        if self.accept("-"):
            if self.tok.kind == "NUM":
                return A.Const(-float(self.accept("NUM").text))
            return A.Neg(self.factor())
        if self.accept("NUM"):
            return A.Const(float(tok.text))
        if self.accept("ABS"):
            self.expect("(", "'('")
            inner = self.term()
            self.expect(")", "')'")
            return A.Abs(inner)
        if self.accept("IDENT"):
            if self.declared is not None and tok.text not in self.declared:
                raise UndeclaredVariable(f"undeclared variable {tok.text!r}", tok.line, tok.col)
            return A.Var(tok.text)
        if self.accept("("):
            inner = self.term()
            self.expect(")", "')'")
            return inner
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")


def parse_formula(text: str, declared=None) -> A.Node:
    """Parse a formula; ``declared`` (if given) restricts the variable names."""
    return Parser(text, declared).parse()


def parse_specification(text: str) -> Specification:
    """Parse a specification file.

    Layout: optional ``name <id>``, ``input|output|internal float <var>``
    lines, optional ``period <n> <unit>``, then ``<outvar> = <formula>``
    (the formula may continue to the end of the file).
    """
    name = "spec"
    decl: dict[str, str] = {}
    period = None
    unit = "s"
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if "=" in line and not line.startswith(("input", "output", "internal")) \
                and re.match(r"^[A-Za-z_][A-Za-z_0-9.]*\s*=(?!=)", line):
            target, rhs = line.split("=", 1)
            target = target.strip()
            col = raw.index("=") + 2
            rest = "\n".join([rhs] + [l.split("#", 1)[0] for l in lines[lineno:]])
            formula = Parser(rest, set(decl), lineno, col).parse()
            if target not in decl:
                raise SpecError(f"line {lineno}: assignment target {target!r} is not declared")
            if decl[target] != "output":
                raise SpecError(f"line {lineno}: assignment target {target!r} must be an output")
            return Specification(name=name, declarations=decl, formula=formula,
                                 target=target, period=period, unit=unit)
        if head == "name":
            if len(words) != 2:
                raise SpecError(f"line {lineno}: expected 'name <identifier>'")
            name = words[1]
        elif head in ("input", "output", "internal"):
            if len(words) != 3:
                raise SpecError(f"line {lineno}: expected '{head} float <variable>'")
            _, typ, var = words
            if typ != "float":
                raise SpecError(f"line {lineno}: unsupported type {typ!r} (only float)")
            if var in decl:
                raise DuplicateDeclaration(f"line {lineno}: variable {var!r} declared twice")
            if var in KEYWORDS:
                raise SpecError(f"line {lineno}: {var!r} is a reserved word")
            decl[var] = head
        elif head == "period":
            if len(words) != 3:
                raise SpecError(f"line {lineno}: expected 'period <n> <unit>'")
            try:
                period = Fraction(words[1])
            except (ValueError, ZeroDivisionError):
                raise SpecError(f"line {lineno}: bad period {words[1]!r}") from None
            if period <= 0:
                raise SpecError(f"line {lineno}: period must be positive")
            if words[2] not in UNITS:
                raise UnknownUnit(f"line {lineno}: unknown unit {words[2]!r}")
            unit = words[2]
        else:
            raise SpecError(f"line {lineno}: unrecognised line {line!r}")
    raise MissingAssignment("specification has no '<output> = <formula>' line")


# ---------------------------------------------------------------- printing

_UNARY_NAMES = {A.Always: "always", A.Eventually: "eventually",
                A.Historically: "historically", A.Once: "once"}
_STEP_NAMES = {A.Next: "next", A.Previous: "prev", A.Rise: "rise", A.Fall: "fall"}
_BINARY_NAMES = {A.Until: "until", A.Since: "since", A.Precedes: "precedes"}
_BOOL_NAMES = {A.And: "and", A.Or: "or", A.Implies: "implies"}


def _fmt_const(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def format_term(t: A.Node) -> str:
    if isinstance(t, A.Var):
        return t.name
    if isinstance(t, A.Const):
        return _fmt_const(t.value)
    if isinstance(t, A.Neg):
        return f"-({format_term(t.arg)})"
    if isinstance(t, A.Abs):
        return f"abs({format_term(t.arg)})"
    if isinstance(t, A.BinOp):
        def side(x):
            s = format_term(x)
            return f"({s})" if isinstance(x, A.BinOp) else s
        return f"{side(t.left)} {t.op} {side(t.right)}"
    raise TypeError(f"not a term: {t!r}")


def _interval_text(iv: Interval, default_ok: bool = True) -> str:
    if default_ok and iv.lo == 0 and not iv.bounded:
        return ""
    return str(iv)


def format_formula(f: A.Node) -> str:
    """Render a formula in the keyword syntax accepted by ``parse_formula``."""
    if isinstance(f, A.Predicate):
        return f"{format_term(f.lhs)} {f.op} {format_term(f.rhs)}"
    if isinstance(f, A.BoolConst):
        return "true" if f.value else "false"
    if isinstance(f, A.Not):
        return f"not ({format_formula(f.arg)})"
    if type(f) in _UNARY_NAMES:
        return f"{_UNARY_NAMES[type(f)]}{_interval_text(f.interval)}({format_formula(f.arg)})"
    if type(f) in _STEP_NAMES:
        return f"{_STEP_NAMES[type(f)]}({format_formula(f.arg)})"
    if type(f) in _BINARY_NAMES:
        iv = _interval_text(f.interval, default_ok=not isinstance(f, A.Precedes))
        return (f"({format_formula(f.left)}) {_BINARY_NAMES[type(f)]}{iv} "
                f"({format_formula(f.right)})")
    if type(f) in _BOOL_NAMES:
        def side(x):
            s = format_formula(x)
            compound = isinstance(x, tuple(_BOOL_NAMES) + tuple(_BINARY_NAMES))
            return f"({s})" if compound else s
        return f"{side(f.left)} {_BOOL_NAMES[type(f)]} {side(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


def format_specification(spec: Specification) -> str:
    lines = [f"name {spec.name}"]
    for var, role in spec.declarations.items():
        lines.append(f"{role} float {var}")
    if spec.period is not None:
        lines.append(f"period {spec.period} {spec.unit}")
    lines.append(f"{spec.target or 'rob'} = {format_formula(spec.formula)}")
    return "\n".join(lines) + "\n"
