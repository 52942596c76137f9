"""Line-oriented problem definition files.

Example::

    vars x1 x2 hermitian
    objective x1*x2 + x2*x1
    ineq -x2^2 + x2 + 0.5        # means >= 0
    sub x1^2 -> x1
    order 2

``eq <poly>`` declares ``poly = 0``. ``x'`` is the adjoint letter of ``x``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .algebra import Polynomial, Variable
from .relaxation import Relaxation, get_relaxation
from .rewrite import DEFAULT_MAX_PASSES, RewriteRule, validate_rules

__all__ = [
    "ProblemDef",
    "ProblemParseError",
    "UndeclaredVariable",
    "DuplicateSection",
    "BadSubstitutionCoefficient",
    "parse_problem",
    "parse_polynomial",
    "format_problem",
]


class ProblemParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class UndeclaredVariable(ProblemParseError):
    pass


class DuplicateSection(ProblemParseError):
    pass


class BadSubstitutionCoefficient(ProblemParseError):
    pass


@dataclass
class ProblemDef:
    variables: List[Variable]
    objective: Polynomial
    inequalities: List[Polynomial] = field(default_factory=list)
    equalities: List[Polynomial] = field(default_factory=list)
    substitutions: List[RewriteRule] = field(default_factory=list)
    order: int = 1

    @property
    def names(self) -> List[str]:
        return [v.name for v in self.variables]

    def relaxation(self, max_passes: int = DEFAULT_MAX_PASSES) -> Relaxation:
        rules = validate_rules(self.substitutions, max_passes=max_passes)
        return get_relaxation(self.variables, self.objective, self.inequalities,
                              self.equalities, rules, self.order)


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()'])
""", re.VERBOSE)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_KEYWORDS = {"vars", "objective", "ineq", "eq", "sub", "order"}


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ProblemParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), col0 + pos))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


class _PolyParser:
    """Recursive descent: expr := term (('+'|'-') term)*, term := factor ('*' factor)*."""

    def __init__(self, text: str, symbols: Dict[str, Variable], line: int, col0: int):
        self.toks = _tokenize(text, line, col0)
        self.k = 0
        self.symbols = symbols
        self.line = line

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def error(self, message, tok=None, cls=ProblemParseError):
        tok = tok or self.peek()
        return cls(message, self.line, tok[2] + 1)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("expected a polynomial")
        poly = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return poly

    def expr(self) -> Polynomial:
        poly = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            poly = poly + rhs if op == "+" else poly - rhs
        return poly

    def term(self) -> Polynomial:
        sign = 1.0
        while self.peek()[1] in ("+", "-"):
            if self.take()[1] == "-":
                sign = -sign
        poly = self.power()
        while self.peek()[1] == "*":
            self.take()
            poly = poly * self.power()
        return poly * sign if sign < 0 else poly

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or not tok[1].isdigit():
                raise self.error("exponent must be a nonnegative integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, text, _ = tok
        if kind == "num":
            return Polynomial.constant(float(text))
        if kind == "name":
            var = self.symbols.get(text)
            if var is None:
                raise self.error(f"undeclared variable {text!r}", tok, UndeclaredVariable)
            starred = False
            if self.peek()[1] == "'":
                self.take()
                starred = True
            return Polynomial({(var.letter(starred),): 1.0})
        if text == "(":
            inner = self.expr()
            if self.take()[1] != ")":
                raise self.error("expected ')'", self.toks[self.k - 1])
            return inner
        raise self.error(f"unexpected {text or 'end of line'!r}", tok)


def parse_polynomial(text: str, variables, line: int = 0, col0: int = 0) -> Polynomial:
    symbols = {v.name: v for v in variables}
    return _PolyParser(text, symbols, line, col0).parse()


def _single_term(poly: Polynomial, line: int, col: int, what: str):
    if len(poly) != 1:
        if poly.is_zero():
            raise BadSubstitutionCoefficient(f"{what} must be a monomial with coefficient +1 or -1, got 0",
                                             line, col)
        raise ProblemParseError(f"{what} must be a single monomial; declare general constraints with 'eq'",
                                line, col)
    (word, coeff), = poly.items()
    if coeff not in (1.0, -1.0):
        raise BadSubstitutionCoefficient(f"{what} coefficient must be +1 or -1, got {coeff!r}", line, col)
    return word, int(coeff)


def parse_problem(text: str) -> ProblemDef:
    lines: List[Tuple[int, str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        m = re.match(r"\s*(\S+)", body)
        keyword = m.group(1)
        if keyword not in _KEYWORDS:
            raise ProblemParseError(f"unknown declaration {keyword!r}", lineno, m.start(1) + 1)
        lines.append((lineno, keyword, body[m.end(1):], m.end(1)))

    variables: List[Variable] = []
    for lineno, keyword, rest, col in lines:
        if keyword != "vars":
            continue
        names = rest.split()
        hermitian = bool(names) and names[-1] == "hermitian"
        if hermitian:
            names = names[:-1]
        if not names:
            raise ProblemParseError("'vars' needs at least one name", lineno, col + 1)
        for name in names:
            if not _NAME.match(name) or name in _KEYWORDS or name == "hermitian":
                raise ProblemParseError(f"invalid variable name {name!r}", lineno, col + rest.find(name) + 1)
            if any(v.name == name for v in variables):
                raise ProblemParseError(f"variable {name!r} declared twice", lineno, col + rest.find(name) + 1)
            variables.append(Variable(len(variables), name, hermitian))

    objective: Optional[Polynomial] = None
    order: Optional[int] = None
    ineqs, eqs, subs = [], [], []
    for lineno, keyword, rest, col in lines:
        if keyword == "vars":
            continue
        if keyword == "objective":
            if objective is not None:
                raise DuplicateSection("objective declared twice", lineno, 1)
            objective = parse_polynomial(rest, variables, lineno, col)
        elif keyword == "ineq":
            ineqs.append(parse_polynomial(rest, variables, lineno, col))
        elif keyword == "eq":
            eqs.append(parse_polynomial(rest, variables, lineno, col))
        elif keyword == "order":
            if order is not None:
                raise DuplicateSection("order declared twice", lineno, 1)
            value = rest.strip()
            if not value.isdigit() or int(value) < 1:
                raise ProblemParseError(f"order must be a positive integer, got {value!r}", lineno, col + 2)
            order = int(value)
        elif keyword == "sub":
            if "->" not in rest:
                raise ProblemParseError("substitution needs '->'", lineno, col + 1)
            lhs_text, rhs_text = rest.split("->", 1)
            rhs_col = col + len(lhs_text) + 2
            lhs_word, lhs_sign = _single_term(parse_polynomial(lhs_text, variables, lineno, col),
                                              lineno, col + 1, "substitution left-hand side")
            if not lhs_word:
                raise ProblemParseError("substitution left-hand side must contain a variable", lineno, col + 1)
            rhs_word, rhs_sign = _single_term(parse_polynomial(rhs_text, variables, lineno, rhs_col),
                                              lineno, rhs_col + 1, "substitution right-hand side")
            subs.append(RewriteRule(lhs_word, rhs_word, lhs_sign * rhs_sign))

    if objective is None:
        raise ProblemParseError("missing objective")
    if order is None:
        raise ProblemParseError("missing order")
    validate_rules(subs)
    return ProblemDef(variables, objective, ineqs, eqs, subs, order)


def format_problem(problem: ProblemDef) -> str:
    """Inverse of :func:`parse_problem` up to whitespace and comments."""
    names = problem.names
    out = []
    group: List[Variable] = []

    def flush():
        if group:
            out.append("vars " + " ".join(v.name for v in group) + (" hermitian" if group[0].hermitian else ""))

    for var in problem.variables:
        if group and group[-1].hermitian != var.hermitian:
            flush()
            group = []
        group.append(var)
    flush()
    out.append("objective " + problem.objective.to_string(names))
    out.extend("ineq " + g.to_string(names) for g in problem.inequalities)
    out.extend("eq " + g.to_string(names) for g in problem.equalities)
    out.extend("sub " + r.to_string(names) for r in problem.substitutions)
    out.append(f"order {problem.order}")
    return "\n".join(out) + "\n"
