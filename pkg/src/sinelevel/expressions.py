"""Arithmetic expression language and the problem file format.

Expressions are written over variables ``x1 .. xp`` with the operators
``+ - * / ^`` (``^`` binds tightest and is right-associative, above unary
minus, then ``* /``, then ``+ -``) and the functions ``sin cos tan exp
log sqrt abs`` (one argument) and ``min max pow`` (two arguments).
Number literals accept ``.55``-style leading dots and exponent suffixes.

Syntax faults raise :class:`ExpressionSyntaxError` with a byte offset.
Evaluation faults (division by zero, ``log``/``sqrt`` off-domain,
fractional powers of negatives, overflow) raise
:class:`ExpressionDomainError` naming the offending subexpression;
plain non-finite intermediates are treated as overflow.

Problem documents are JSON objects with the keys ``dimension``, ``box``
(an array of ``[lo, hi]`` pairs), ``objective``, and optional
``equalities``, ``inequalities`` and ``params``. Unknown keys are
rejected; every schema error carries the path of the offending field.
"""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Union

from .deformation import DeformationParams
from .domain import BoxDomain, ConstrainedProblem
from .errors import (
    ExpressionDomainError,
    ExpressionSyntaxError,
    ProblemFormatError,
)

# ---------------------------------------------------------------------------
# AST


class Expr:
    """Base class of expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    """Variable reference; ``index`` is 1-based (``x1`` has index 1)."""

    index: int


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]


_UNARY_FUNCS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs")
_BINARY_FUNCS = ("min", "max", "pow")
FUNCTION_ARITY = {name: 1 for name in _UNARY_FUNCS}
FUNCTION_ARITY.update({name: 2 for name in _BINARY_FUNCS})


# ---------------------------------------------------------------------------
# Tokenizer

_NUMBER_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_VAR_RE = re.compile(r"x([0-9]+)\Z")


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "ident" | "op" | "lparen" | "rparen" | "comma" | "end"
    text: str
    offset: int
    value: float = 0.0


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            value = float(m.group())
            if not math.isfinite(value):
                raise ExpressionSyntaxError(f"number literal `{m.group()}` overflows", i)
            tokens.append(Token("number", m.group(), i, value))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(Token("ident", m.group(), i))
            i = m.end()
            continue
        if ch in "+-*/^":
            tokens.append(Token("op", ch, i))
        elif ch == "(":
            tokens.append(Token("lparen", ch, i))
        elif ch == ")":
            tokens.append(Token("rparen", ch, i))
        elif ch == ",":
            tokens.append(Token("comma", ch, i))
        else:
            raise ExpressionSyntaxError(f"unexpected character {ch!r}", i)
        i += 1
    tokens.append(Token("end", "", n))
    return tokens


# ---------------------------------------------------------------------------
# Parser
#
# expr  := term  (('+'|'-') term)*          left-associative
# term  := unary (('*'|'/') unary)*         left-associative
# unary := '-' unary | power
# power := atom ('^' unary)?                right-associative
# atom  := NUMBER | VAR | FUNC '(' args ')' | '(' expr ')'


class _Parser:
    def __init__(self, tokens: list[Token], dimension: Optional[int] = None):
        self.tokens = tokens
        self.dimension = dimension
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, token: Optional[Token] = None):
        tok = token if token is not None else self.current
        raise ExpressionSyntaxError(message, tok.offset)

    def parse(self) -> Expr:
        node = self.expr()
        if self.current.kind != "end":
            self.fail(f"unexpected trailing input `{self.current.text}`")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return Unary("-", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Num(tok.value)
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            if self.current.kind != "rparen":
                self.fail("expected `)`")
            self.advance()
            return node
        if tok.kind == "ident":
            self.advance()
            m = _VAR_RE.match(tok.text)
            if m:
                index = int(m.group(1))
                if index < 1:
                    self.fail("variable indices start at x1", tok)
                if self.dimension is not None and index > self.dimension:
                    self.fail(
                        f"variable x{index} out of range for dimension {self.dimension}",
                        tok,
                    )
                return Var(index)
            arity = FUNCTION_ARITY.get(tok.text)
            if arity is None:
                self.fail(f"unknown identifier `{tok.text}`", tok)
            if self.current.kind != "lparen":
                self.fail(f"expected `(` after function `{tok.text}`")
            self.advance()
            args = [self.expr()]
            while self.current.kind == "comma":
                self.advance()
                args.append(self.expr())
            if self.current.kind != "rparen":
                self.fail("expected `)` or `,` in argument list")
            self.advance()
            if len(args) != arity:
                self.fail(
                    f"function `{tok.text}` takes {arity} argument(s), got {len(args)}",
                    tok,
                )
            return Call(tok.text, tuple(args))
        if tok.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected token `{tok.text}`")


def parse_expression(text: str, dimension: Optional[int] = None) -> Expr:
    """Parse source text into an expression tree.

    With ``dimension`` given, variable indices above it are rejected at
    parse time (with the offset of the offending variable).
    """
    if not isinstance(text, str):
        raise ExpressionSyntaxError("expression must be a string", 0)
    return _Parser(tokenize(text), dimension).parse()


# ---------------------------------------------------------------------------
# Pretty printer
#
# Precedence levels mirror the grammar so that printing then reparsing
# reproduces the identical tree.

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _node_level(node: Expr) -> int:
    if isinstance(node, Num):
        return _LEVEL_ATOM if node.value >= 0 else _LEVEL_UNARY
    if isinstance(node, (Var, Call)):
        return _LEVEL_ATOM
    if isinstance(node, Unary):
        return _LEVEL_UNARY
    if isinstance(node, Binary):
        if node.op == "^":
            return _LEVEL_POW
        return _LEVEL_MUL if node.op in "*/" else _LEVEL_ADD
    raise TypeError(f"not an expression node: {node!r}")


def _fmt(node: Expr, required: int) -> str:
    text = _fmt_bare(node)
    if _node_level(node) < required:
        return f"({text})"
    return text


def _fmt_bare(node: Expr) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Unary):
        return "-" + _fmt(node.operand, _LEVEL_POW)
    if isinstance(node, Binary):
        if node.op == "^":
            return f"{_fmt(node.left, _LEVEL_ATOM)}^{_fmt(node.right, _LEVEL_UNARY)}"
        if node.op in "*/":
            return f"{_fmt(node.left, _LEVEL_MUL)} {node.op} {_fmt(node.right, _LEVEL_UNARY)}"
        return f"{_fmt(node.left, _LEVEL_ADD)} {node.op} {_fmt(node.right, _LEVEL_MUL)}"
    if isinstance(node, Call):
        args = ", ".join(_fmt(a, _LEVEL_ADD) for a in node.args)
        return f"{node.name}({args})"
    raise TypeError(f"not an expression node: {node!r}")


def format_expression(node: Expr) -> str:
    """Render a tree back to source; parsing the result reproduces the tree."""
    return _fmt_bare(node)


# ---------------------------------------------------------------------------
# Evaluator


def max_var_index(node: Expr) -> int:
    """Largest variable index referenced, 0 for constant expressions."""
    if isinstance(node, Num):
        return 0
    if isinstance(node, Var):
        return node.index
    if isinstance(node, Unary):
        return max_var_index(node.operand)
    if isinstance(node, Binary):
        return max(max_var_index(node.left), max_var_index(node.right))
    if isinstance(node, Call):
        return max((max_var_index(a) for a in node.args), default=0)
    raise TypeError(f"not an expression node: {node!r}")


def _domain_fail(message: str, node: Expr, values) -> ExpressionDomainError:
    return ExpressionDomainError(message, format_expression(node), tuple(values))


def _check_finite(result: float, node: Expr, values) -> float:
    if not math.isfinite(result):
        raise _domain_fail("overflow", node, values)
    return result


def eval_expression(node: Expr, values: Sequence[float]) -> float:
    """Evaluate with ``values[i-1]`` bound to ``xi``.

    The result and every intermediate are required to be finite.
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.index > len(values):
            raise ValueError(
                f"expression references x{node.index} but only "
                f"{len(values)} value(s) were supplied"
            )
        return float(values[node.index - 1])
    if isinstance(node, Unary):
        return -eval_expression(node.operand, values)
    if isinstance(node, Binary):
        left = eval_expression(node.left, values)
        right = eval_expression(node.right, values)
        if node.op == "+":
            return _check_finite(left + right, node, values)
        if node.op == "-":
            return _check_finite(left - right, node, values)
        if node.op == "*":
            return _check_finite(left * right, node, values)
        if node.op == "/":
            if right == 0.0:
                raise _domain_fail("division by zero", node, values)
            return _check_finite(left / right, node, values)
        return _eval_power(left, right, node, values)
    if isinstance(node, Call):
        args = [eval_expression(a, values) for a in node.args]
        return _eval_call(node, args, values)
    raise TypeError(f"not an expression node: {node!r}")


def _eval_power(base: float, exponent: float, node: Expr, values) -> float:
    if base < 0.0 and exponent != math.floor(exponent):
        raise _domain_fail(
            "negative base with non-integer exponent", node, values
        )
    if base == 0.0 and exponent < 0.0:
        raise _domain_fail("zero base with negative exponent", node, values)
    try:
        result = math.pow(base, exponent)
    except OverflowError:
        raise _domain_fail("overflow", node, values) from None
    except ValueError:
        raise _domain_fail("power out of domain", node, values) from None
    return _check_finite(result, node, values)


def _eval_call(node: Call, args: list[float], values) -> float:
    name = node.name
    try:
        if name == "sin":
            result = math.sin(args[0])
        elif name == "cos":
            result = math.cos(args[0])
        elif name == "tan":
            result = math.tan(args[0])
        elif name == "exp":
            result = math.exp(args[0])
        elif name == "log":
            if args[0] <= 0.0:
                raise _domain_fail("log of a non-positive value", node, values)
            result = math.log(args[0])
        elif name == "sqrt":
            if args[0] < 0.0:
                raise _domain_fail("sqrt of a negative value", node, values)
            result = math.sqrt(args[0])
        elif name == "abs":
            result = abs(args[0])
        elif name == "min":
            result = min(args[0], args[1])
        elif name == "max":
            result = max(args[0], args[1])
        elif name == "pow":
            return _eval_power(args[0], args[1], node, values)
        else:
            raise TypeError(f"unknown function {name!r}")
    except OverflowError:
        raise _domain_fail("overflow", node, values) from None
    return _check_finite(result, node, values)


def compile_expression(
    source: Union[str, Expr], dimension: int
) -> Callable[[Sequence[float]], float]:
    """Turn source text (or a parsed tree) into an ``f(x) -> float`` callable
    over points of the given dimension."""
    node = parse_expression(source) if isinstance(source, str) else source
    used = max_var_index(node)
    if used > dimension:
        raise ValueError(
            f"expression references x{used} but the dimension is {dimension}"
        )

    def evaluate(values: Sequence[float]) -> float:
        return eval_expression(node, values)

    evaluate.expression = node  # type: ignore[attr-defined]
    return evaluate


# ---------------------------------------------------------------------------
# Problem documents

_PARAM_KEYS = ("t", "K", "M", "k", "rho", "r_init")


@dataclass(frozen=True)
class ProblemParams:
    """Per-problem solver parameters as stored in problem files."""

    t: float = 0.99
    bigK: float = 0.0
    bigM: float = 1e3
    level: float = 0.0
    rho: float = 2.0
    r_init: float = 0.3

    def deformation(self, level: Optional[float] = None) -> DeformationParams:
        return DeformationParams(
            t=self.t,
            bigK=self.bigK,
            bigM=self.bigM,
            level=self.level if level is None else level,
            anchor=self.rho,
        )


@dataclass(frozen=True)
class ProblemSpec:
    """A fully validated problem document."""

    dimension: int
    box: BoxDomain
    objective: Expr
    equalities: tuple[Expr, ...] = ()
    inequalities: tuple[Expr, ...] = ()
    params: ProblemParams = ProblemParams()
    name: str = ""  # set programmatically; not part of the file format

    @property
    def is_constrained(self) -> bool:
        return bool(self.equalities) or bool(self.inequalities)

    def to_problem(self) -> ConstrainedProblem:
        return ConstrainedProblem(
            objective=compile_expression(self.objective, self.dimension),
            domain=self.box,
            equalities=tuple(
                compile_expression(e, self.dimension) for e in self.equalities
            ),
            inequalities=tuple(
                compile_expression(h, self.dimension) for h in self.inequalities
            ),
            name=self.name,
        )


def _format_fail(message: str, path: str):
    raise ProblemFormatError(message, path)


def _require_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _format_fail(f"expected a number, got {type(value).__name__}", path)
    if not math.isfinite(value):
        _format_fail("non-finite numbers are not allowed", path)
    return float(value)


def _parse_box(value, dimension: int, path: str) -> BoxDomain:
    """``box`` is an array of ``[lo, hi]`` pairs, one per coordinate."""
    if not isinstance(value, list):
        _format_fail(f"expected an array of [lo, hi] pairs, got {type(value).__name__}", path)
    if len(value) != dimension:
        _format_fail(
            f"expected {dimension} [lo, hi] pair(s) to match the dimension, "
            f"got {len(value)}",
            path,
        )
    lower = []
    upper = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            _format_fail("expected a [lo, hi] pair", f"{path}[{i}]")
        lower.append(_require_number(pair[0], f"{path}[{i}][0]"))
        upper.append(_require_number(pair[1], f"{path}[{i}][1]"))
    try:
        return BoxDomain(tuple(lower), tuple(upper))
    except ValueError as exc:
        raise ProblemFormatError(str(exc), path) from exc


def _parse_exprs(value, dimension: int, path: str) -> tuple[Expr, ...]:
    if not isinstance(value, list):
        _format_fail(f"expected a list of strings, got {type(value).__name__}", path)
    out = []
    for i, item in enumerate(value):
        out.append(_parse_expr_field(item, dimension, f"{path}[{i}]"))
    return tuple(out)


def _parse_expr_field(value, dimension: int, path: str) -> Expr:
    if not isinstance(value, str):
        _format_fail(f"expected an expression string, got {type(value).__name__}", path)
    try:
        return parse_expression(value, dimension)
    except ExpressionSyntaxError as exc:
        raise ProblemFormatError(str(exc), path) from exc


def _parse_params(value, path: str) -> ProblemParams:
    if not isinstance(value, dict):
        _format_fail(f"expected an object, got {type(value).__name__}", path)
    unknown = sorted(set(value) - set(_PARAM_KEYS))
    if unknown:
        _format_fail(f"unknown key(s): {', '.join(unknown)}", path)
    fields = {}
    rename = {"K": "bigK", "M": "bigM", "k": "level"}
    for key, raw in value.items():
        fields[rename.get(key, key)] = _require_number(raw, f"{path}.{key}")
    params = ProblemParams(**fields)
    if not 0.0 < params.t < 1.0:
        _format_fail(f"t must lie in (0, 1), got {params.t}", f"{path}.t")
    if params.bigM <= 0.0:
        _format_fail(f"M must be positive, got {params.bigM}", f"{path}.M")
    if params.rho <= 0.0:
        _format_fail(f"rho must be positive, got {params.rho}", f"{path}.rho")
    if params.r_init <= 0.0:
        _format_fail(f"r_init must be positive, got {params.r_init}", f"{path}.r_init")
    return params


_TOP_KEYS = ("dimension", "box", "objective", "equalities", "inequalities", "params")


def problem_from_mapping(obj) -> ProblemSpec:
    """Validate a decoded JSON object into a :class:`ProblemSpec`."""
    if not isinstance(obj, dict):
        _format_fail(f"expected an object, got {type(obj).__name__}", "$")
    unknown = sorted(set(obj) - set(_TOP_KEYS))
    if unknown:
        _format_fail(f"unknown key(s): {', '.join(unknown)}", "$")
    for required in ("dimension", "box", "objective"):
        if required not in obj:
            _format_fail(f"missing required key `{required}`", "$")

    dimension = obj["dimension"]
    if isinstance(dimension, bool) or not isinstance(dimension, int):
        _format_fail("expected an integer", "dimension")
    if dimension < 1:
        _format_fail(f"must be >= 1, got {dimension}", "dimension")

    box = _parse_box(obj["box"], dimension, "box")
    objective = _parse_expr_field(obj["objective"], dimension, "objective")
    equalities = _parse_exprs(obj.get("equalities", []), dimension, "equalities")
    inequalities = _parse_exprs(obj.get("inequalities", []), dimension, "inequalities")
    params = _parse_params(obj.get("params", {}), "params")

    return ProblemSpec(
        dimension=dimension,
        box=box,
        objective=objective,
        equalities=equalities,
        inequalities=inequalities,
        params=params,
    )


def _reject_constant(name: str):
    raise ProblemFormatError("non-finite numbers are not allowed", "$")


def load_problem(text: str) -> ProblemSpec:
    """Parse problem-document text (JSON) into a validated ProblemSpec."""
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from exc
    return problem_from_mapping(obj)


def read_problem_file(path) -> ProblemSpec:
    """Read and validate a problem document from a file path."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ProblemFormatError(f"cannot read file: {exc.strerror or exc}", str(path)) from exc
    spec = load_problem(text)
    return replace(spec, name=os.path.splitext(os.path.basename(str(path)))[0])


def spec_to_mapping(spec: ProblemSpec) -> dict:
    """Inverse of :func:`problem_from_mapping`, for writing problem files."""
    out = {
        "dimension": spec.dimension,
        "box": [[lo, hi] for lo, hi in zip(spec.box.lower, spec.box.upper)],
        "objective": format_expression(spec.objective),
    }
    if spec.equalities:
        out["equalities"] = [format_expression(e) for e in spec.equalities]
    if spec.inequalities:
        out["inequalities"] = [format_expression(h) for h in spec.inequalities]
    defaults = ProblemParams()
    if spec.params != defaults:
        params = {}
        for key, attr in (
            ("t", "t"), ("K", "bigK"), ("M", "bigM"),
            ("k", "level"), ("rho", "rho"), ("r_init", "r_init"),
        ):
            value = getattr(spec.params, attr)
            if value != getattr(defaults, attr):
                params[key] = value
        out["params"] = params
    return out
