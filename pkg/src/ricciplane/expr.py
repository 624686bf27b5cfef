"""Symbolic expressions in the plane coordinates x1, x2.

Immutable expression trees with exact differentiation, light
value-preserving simplification, deterministic evaluation, and a
seeded probabilistic identically-zero test.  These trees are the
single currency passed between all other modules.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator


class Var(Enum):
    X1 = "x1"
    X2 = "x2"


@dataclass(frozen=True)
class Point:
    """A point (x1, x2) of the plane with finite coordinates."""

    x1: float
    x2: float

    def __post_init__(self):
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise ValueError(f"point coordinates must be finite, got ({self.x1}, {self.x2})")

    def coordinate(self, v: Var) -> float:
        return self.x1 if v is Var.X1 else self.x2

    def shifted(self, v: Var, h: float) -> "Point":
        if v is Var.X1:
            return Point(self.x1 + h, self.x2)
        return Point(self.x1, self.x2 + h)


@dataclass(frozen=True)
class Domain:
    """A sampling rectangle; guard is the smallest |value| a denominator
    root factor may take at an accepted sample point."""

    x1_range: tuple[float, float] = (-1.0, 1.0)
    x2_range: tuple[float, float] = (-1.0, 1.0)
    guard: float = 1e-6

    def __post_init__(self):
        for lo, hi in (self.x1_range, self.x2_range):
            if not lo < hi:
                raise ValueError(f"empty coordinate range [{lo}, {hi}]")
        if not self.guard > 0:
            raise ValueError("guard must be positive")


class ParseError(ValueError):
    """Syntax or unknown-identifier error, with a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvaluationError(ArithmeticError):
    """An expression is undefined at the requested point."""


# Exceptions a compiled expression may raise on a bad point.  Compiled
# callables skip the per-node bookkeeping of `evaluate`, so builtin
# arithmetic errors leak through.
EVAL_ERRORS = (EvaluationError, ZeroDivisionError, ValueError, OverflowError)


class Expr:
    """Base class for all nodes.  Nodes are frozen dataclasses; trees
    compare and hash structurally and are safe to share between threads."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, other):
        return Pow(self, as_expr(other))

    def __neg__(self):
        return Negate(self)

    def __str__(self):
        return to_string(self)

    def children(self) -> tuple["Expr", ...]:
        return ()


@dataclass(frozen=True, eq=True)
class Constant(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True, eq=True)
class Variable(Expr):
    var: Var


@dataclass(frozen=True, eq=True)
class Negate(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class Add(Expr):
    lhs: Expr
    rhs: Expr

    def children(self):
        return (self.lhs, self.rhs)


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    lhs: Expr
    rhs: Expr

    def children(self):
        return (self.lhs, self.rhs)


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    lhs: Expr
    rhs: Expr

    def children(self):
        return (self.lhs, self.rhs)


@dataclass(frozen=True, eq=True)
class Div(Expr):
    num: Expr
    den: Expr

    def children(self):
        return (self.num, self.den)


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: Expr

    def children(self):
        return (self.base, self.exponent)


@dataclass(frozen=True, eq=True)
class Apply(Expr):
    fn: str
    arg: Expr

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise ValueError(f"unsupported function {self.fn!r}")

    def children(self):
        return (self.arg,)


X1 = Variable(Var.X1)
X2 = Variable(Var.X2)
ZERO = Constant(0.0)
ONE = Constant(1.0)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float)):
        return Constant(float(value))
    raise TypeError(f"cannot interpret {value!r} as an expression")


def _sign_value(v: float) -> float:
    # sign(0) is left undefined so that derivatives of abs/sign error
    # exactly on the kink, as their contract requires.
    if v == 0.0:
        raise EvaluationError("sign is undefined at 0")
    return 1.0 if v > 0.0 else -1.0


def _sech_value(v: float) -> float:
    return 1.0 / math.cosh(v)


def _int_pow(base: float, n: int) -> float:
    """Repeated-multiplication power for integer exponents."""
    if n < 0:
        if base == 0.0:
            raise EvaluationError("zero raised to a negative power")
        return 1.0 / _int_pow(base, -n)
    acc = 1.0
    for _ in range(n):
        acc *= base
    return acc


def _pow_value(base: float, exponent: float) -> float:
    if float(exponent).is_integer() and abs(exponent) <= 2**31:
        return _int_pow(base, int(exponent))
    if base <= 0.0:
        raise EvaluationError("non-integer power requires a positive base")
    return math.pow(base, exponent)


FUNCTIONS: dict[str, Callable[[float], float]] = {
    "exp": math.exp,
    "log": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "sech": _sech_value,
    "sqrt": math.sqrt,
    "abs": abs,
    "sign": _sign_value,
}


def exp(e) -> Expr:
    return Apply("exp", as_expr(e))


def log(e) -> Expr:
    return Apply("log", as_expr(e))


def sin(e) -> Expr:
    return Apply("sin", as_expr(e))


def cos(e) -> Expr:
    return Apply("cos", as_expr(e))


def tan(e) -> Expr:
    return Apply("tan", as_expr(e))


def sinh(e) -> Expr:
    return Apply("sinh", as_expr(e))


def cosh(e) -> Expr:
    return Apply("cosh", as_expr(e))


def tanh(e) -> Expr:
    return Apply("tanh", as_expr(e))


def sech(e) -> Expr:
    return Apply("sech", as_expr(e))


def sqrt(e) -> Expr:
    return Apply("sqrt", as_expr(e))


def abs_(e) -> Expr:
    return Apply("abs", as_expr(e))


def sign_(e) -> Expr:
    return Apply("sign", as_expr(e))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate(e: Expr, p: Point) -> float:
    """Evaluate `e` at `p`.

    Deterministic: the same tree at the same point always produces the
    bit-identical float.  Raises EvaluationError naming the offending
    subexpression and the point when some node is undefined.
    """
    return _eval_scaled(e, p)[0]


def evaluate_with_scale(e: Expr, p: Point) -> tuple[float, float]:
    """Evaluate `e` at `p` and also report the local magnitude scale:
    the largest |value| attained by any subexpression.  The scale makes
    the zero test robust against benign cancellation between large terms."""
    return _eval_scaled(e, p)


def _eval_scaled(e: Expr, p: Point) -> tuple[float, float]:
    if isinstance(e, Constant):
        return e.value, abs(e.value)
    if isinstance(e, Variable):
        v = p.coordinate(e.var)
        return v, abs(v)
    if isinstance(e, Negate):
        v, s = _eval_scaled(e.arg, p)
        return -v, s
    if isinstance(e, Add):
        a, sa = _eval_scaled(e.lhs, p)
        b, sb = _eval_scaled(e.rhs, p)
        v = a + b
        return v, max(sa, sb, abs(v))
    if isinstance(e, Sub):
        a, sa = _eval_scaled(e.lhs, p)
        b, sb = _eval_scaled(e.rhs, p)
        v = a - b
        return v, max(sa, sb, abs(v))
    if isinstance(e, Mul):
        a, sa = _eval_scaled(e.lhs, p)
        b, sb = _eval_scaled(e.rhs, p)
        v = a * b
        return v, max(sa, sb, abs(v))
    if isinstance(e, Div):
        a, sa = _eval_scaled(e.num, p)
        b, sb = _eval_scaled(e.den, p)
        if b == 0.0:
            raise EvaluationError(_undefined_message("division by zero", e, p))
        v = a / b
        return v, max(sa, sb, abs(v))
    if isinstance(e, Pow):
        a, sa = _eval_scaled(e.base, p)
        b, sb = _eval_scaled(e.exponent, p)
        try:
            v = _pow_value(a, b)
        except EVAL_ERRORS as err:
            raise EvaluationError(_undefined_message(str(err), e, p)) from None
        return v, max(sa, sb, abs(v))
    if isinstance(e, Apply):
        a, sa = _eval_scaled(e.arg, p)
        try:
            v = FUNCTIONS[e.fn](a)
        except EVAL_ERRORS as err:
            raise EvaluationError(_undefined_message(str(err) or e.fn, e, p)) from None
        return v, max(sa, abs(v))
    raise TypeError(f"not an expression node: {e!r}")


def _undefined_message(reason: str, node: Expr, p: Point) -> str:
    return f"{reason} in '{to_string(node)}' at (x1={p.x1!r}, x2={p.x2!r})"


def compile_expr(e: Expr) -> Callable[[float, float], float]:
    """Compile `e` to a plain Python callable `(x1, x2) -> float`.

    The generated code performs the exact same float operations in the
    same order as `evaluate`, so results are bit-identical.  Undefined
    points surface as one of EVAL_ERRORS without node diagnostics; use
    `evaluate` when the error message matters.
    """
    lines: list[str] = []
    names: dict[int, str] = {}

    def emit(node: Expr) -> str:
        key = id(node)
        if key in names:
            return names[key]
        if isinstance(node, Constant):
            code = repr(node.value)
        elif isinstance(node, Variable):
            code = node.var.value
        elif isinstance(node, Negate):
            code = f"-{emit(node.arg)}"
        elif isinstance(node, Add):
            code = f"{emit(node.lhs)} + {emit(node.rhs)}"
        elif isinstance(node, Sub):
            code = f"{emit(node.lhs)} - {emit(node.rhs)}"
        elif isinstance(node, Mul):
            code = f"{emit(node.lhs)} * {emit(node.rhs)}"
        elif isinstance(node, Div):
            code = f"{emit(node.num)} / {emit(node.den)}"
        elif isinstance(node, Pow):
            expo = node.exponent
            if isinstance(expo, Constant) and expo.value.is_integer() and abs(expo.value) <= 2**31:
                code = f"_int_pow({emit(node.base)}, {int(expo.value)})"
            else:
                code = f"_pow_value({emit(node.base)}, {emit(expo)})"
        elif isinstance(node, Apply):
            code = f"_fn_{node.fn}({emit(node.arg)})"
        else:
            raise TypeError(f"not an expression node: {node!r}")
        if isinstance(node, (Constant, Variable)):
            names[key] = code
            return code
        name = f"t{len(lines)}"
        lines.append(f"    {name} = {code}")
        names[key] = name
        return name

    root = emit(e)
    src = "def _compiled(x1, x2):\n" + "\n".join(lines) + f"\n    return {root}\n"
    namespace: dict = {"_int_pow": _int_pow, "_pow_value": _pow_value}
    for fname, fval in FUNCTIONS.items():
        namespace[f"_fn_{fname}"] = fval
    exec(compile(src, "<compiled-expr>", "exec"), namespace)
    return namespace["_compiled"]


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------


def differentiate(e: Expr, v: Var) -> Expr:
    """Exact symbolic partial derivative of `e` with respect to `v`.

    Total on the supported node set.  The derivative of abs(u) is
    sign(u)*u' and the derivative of sign(u) is 0 away from zeros of u;
    both evaluate to an error where u vanishes.
    """
    if isinstance(e, Constant):
        return ZERO
    if isinstance(e, Variable):
        return ONE if e.var is v else ZERO
    if isinstance(e, Negate):
        return Negate(differentiate(e.arg, v))
    if isinstance(e, Add):
        return Add(differentiate(e.lhs, v), differentiate(e.rhs, v))
    if isinstance(e, Sub):
        return Sub(differentiate(e.lhs, v), differentiate(e.rhs, v))
    if isinstance(e, Mul):
        return Add(
            Mul(differentiate(e.lhs, v), e.rhs),
            Mul(e.lhs, differentiate(e.rhs, v)),
        )
    if isinstance(e, Div):
        return Div(
            Sub(
                Mul(differentiate(e.num, v), e.den),
                Mul(e.num, differentiate(e.den, v)),
            ),
            Pow(e.den, Constant(2.0)),
        )
    if isinstance(e, Pow):
        base, expo = e.base, e.exponent
        if isinstance(expo, Constant):
            if expo.value == 0.0:
                return ZERO
            if expo.value == 1.0:
                return differentiate(base, v)
            return Mul(
                Mul(expo, Pow(base, Constant(expo.value - 1.0))),
                differentiate(base, v),
            )
        # general u^w via u^w * (w' log u + w u'/u)
        return Mul(
            e,
            Add(
                Mul(differentiate(expo, v), log(base)),
                Mul(expo, Div(differentiate(base, v), base)),
            ),
        )
    if isinstance(e, Apply):
        u = e.arg
        du = differentiate(u, v)
        fn = e.fn
        if fn == "exp":
            outer: Expr = e
        elif fn == "log":
            return Div(du, u)
        elif fn == "sin":
            outer = cos(u)
        elif fn == "cos":
            return Negate(Mul(sin(u), du))
        elif fn == "tan":
            outer = Add(ONE, Pow(tan(u), Constant(2.0)))
        elif fn == "sinh":
            outer = cosh(u)
        elif fn == "cosh":
            outer = sinh(u)
        elif fn == "tanh":
            outer = Sub(ONE, Pow(tanh(u), Constant(2.0)))
        elif fn == "sech":
            return Negate(Mul(Mul(sech(u), tanh(u)), du))
        elif fn == "sqrt":
            return Div(du, Mul(Constant(2.0), sqrt(u)))
        elif fn == "abs":
            outer = sign_(u)
        elif fn == "sign":
            # 0 away from zeros of u; errors on them via sign(u).
            outer = Mul(ZERO, sign_(u))
        else:  # pragma: no cover - FUNCTIONS is closed
            raise ValueError(f"unsupported function {fn!r}")
        return Mul(outer, du)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Simplification
# ---------------------------------------------------------------------------


def simplify(e: Expr) -> Expr:
    """Light value-preserving cleanup: constant folding, 0/1 identities,
    double negation, x-x and x/x collapse.  No completeness claim; in
    particular no trigonometric or hyperbolic rewriting ever happens.

    Every rule preserves the evaluated float exactly wherever both the
    input and output are defined.
    """
    if isinstance(e, (Constant, Variable)):
        return e
    if isinstance(e, Negate):
        return _negated(simplify(e.arg))
    if isinstance(e, Add):
        a, b = simplify(e.lhs), simplify(e.rhs)
        if isinstance(a, Constant) and isinstance(b, Constant):
            return Constant(a.value + b.value)
        if _is_zero(a):
            return b
        if _is_zero(b):
            return a
        return Add(a, b)
    if isinstance(e, Sub):
        a, b = simplify(e.lhs), simplify(e.rhs)
        if isinstance(a, Constant) and isinstance(b, Constant):
            return Constant(a.value - b.value)
        if _is_zero(b):
            return a
        if a == b:
            return ZERO
        if _is_zero(a):
            return _negated(b)
        return Sub(a, b)
    if isinstance(e, Mul):
        a, b = simplify(e.lhs), simplify(e.rhs)
        if isinstance(a, Constant) and isinstance(b, Constant):
            return Constant(a.value * b.value)
        if _is_zero(a) or _is_zero(b):
            return ZERO
        if _is_one(a):
            return b
        if _is_one(b):
            return a
        if isinstance(a, Constant) and a.value == -1.0:
            return _negated(b)
        if isinstance(b, Constant) and b.value == -1.0:
            return _negated(a)
        return Mul(a, b)
    if isinstance(e, Div):
        a, b = simplify(e.num), simplify(e.den)
        if isinstance(a, Constant) and isinstance(b, Constant) and b.value != 0.0:
            return Constant(a.value / b.value)
        if _is_one(b):
            return a
        if _is_zero(a):
            return ZERO
        if a == b:
            return ONE
        return Div(a, b)
    if isinstance(e, Pow):
        a, b = simplify(e.base), simplify(e.exponent)
        if _is_zero(b):
            return ONE
        if _is_one(b):
            return a
        if isinstance(a, Constant) and isinstance(b, Constant):
            try:
                return Constant(_pow_value(a.value, b.value))
            except EVAL_ERRORS:
                pass
        return Pow(a, b)
    if isinstance(e, Apply):
        a = simplify(e.arg)
        if isinstance(a, Constant):
            try:
                folded = FUNCTIONS[e.fn](a.value)
                if math.isfinite(folded):
                    return Constant(folded)
            except EVAL_ERRORS:
                pass
        return Apply(e.fn, a)
    raise TypeError(f"not an expression node: {e!r}")


def _negated(e: Expr) -> Expr:
    """Negation of an already-simplified expression, kept reduced."""
    if isinstance(e, Constant):
        return Constant(-e.value)
    if isinstance(e, Negate):
        return e.arg
    return Negate(e)


def _is_zero(e: Expr) -> bool:
    return isinstance(e, Constant) and e.value == 0.0


def _is_one(e: Expr) -> bool:
    return isinstance(e, Constant) and e.value == 1.0


# ---------------------------------------------------------------------------
# Tree queries
# ---------------------------------------------------------------------------


def walk(e: Expr) -> Iterator[Expr]:
    """All nodes of the tree, parents before children."""
    yield e
    for child in e.children():
        yield from walk(child)


def variables_of(e: Expr) -> set[Var]:
    return {node.var for node in walk(e) if isinstance(node, Variable)}


def _guard_root(e: Expr) -> Expr:
    """Reduce a denominator to the factor whose zeros make it vanish.

    Powers, constant factors, and negations do not move the singular
    set, but they do rescale magnitudes: guarding (2 f)^4 directly would
    reject |f| < (guard/16)^(1/4), a far larger band than the zero
    neighborhood the guard is meant to exclude.
    """
    while True:
        if isinstance(e, Pow) and isinstance(e.exponent, Constant) and e.exponent.value > 0:
            e = e.base
        elif isinstance(e, Negate):
            e = e.arg
        elif isinstance(e, Mul) and isinstance(e.lhs, Constant) and e.lhs.value != 0.0:
            e = e.rhs
        elif isinstance(e, Mul) and isinstance(e.rhs, Constant) and e.rhs.value != 0.0:
            e = e.lhs
        else:
            return e


def denominators(e: Expr) -> list[Expr]:
    """Subexpressions that must stay away from zero for `e` to be
    defined: Div denominators and bases of negative constant powers,
    reduced to their guard roots.  Deduplicated structurally, in
    first-occurrence order."""
    seen: dict[Expr, None] = {}
    for node in walk(e):
        if isinstance(node, Div):
            root = _guard_root(node.den)
            if not isinstance(root, Constant):
                seen.setdefault(root)
        elif isinstance(node, Pow) and isinstance(node.exponent, Constant) and node.exponent.value < 0:
            root = _guard_root(node.base)
            if not isinstance(root, Constant):
                seen.setdefault(root)
    return list(seen)


def kink_arguments(e: Expr) -> list[Expr]:
    """Arguments of abs/sign nodes, the loci of nonsmoothness."""
    seen: dict[Expr, None] = {}
    for node in walk(e):
        if isinstance(node, Apply) and node.fn in ("abs", "sign"):
            seen.setdefault(node.arg)
    return list(seen)


# ---------------------------------------------------------------------------
# Probabilistic zero test
# ---------------------------------------------------------------------------


def is_probably_zero(
    e: Expr,
    d: Domain,
    samples: int = 200,
    seed: int = 42,
    tol: float = 1e-9,
) -> bool:
    """Decide whether `e` vanishes identically on `d`, by sampling.

    Draws seeded uniform points, rejecting any where a denominator of
    `e` has magnitude below d.guard, and accepts zero-ness iff
    |e(p)| <= tol * (1 + local magnitude scale) at every point.  The
    verdict is deterministic given the seed.  Raises
    DomainTooSingularError when fewer than samples/2 points survive
    rejection and evaluation.
    """
    from .numeric import DomainTooSingularError, SamplingConfig, sample_points

    if samples < 1:
        raise ValueError("samples must be >= 1")
    cfg = SamplingConfig(samples=samples, seed=seed, tolerance=tol)
    points = sample_points(d, cfg, guards=denominators(e))
    evaluated = 0
    verdict = True
    for p in points:
        try:
            value, scale = evaluate_with_scale(e, p)
        except EvaluationError:
            continue
        evaluated += 1
        if abs(value) > tol * (1.0 + scale):
            verdict = False
    if evaluated < max(1, samples // 2):
        raise DomainTooSingularError(
            f"only {evaluated} of {samples} requested points were evaluable"
        )
    return verdict


# ---------------------------------------------------------------------------
# Parsing and printing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
  | (?P<space>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)

_ADD_PREC = 10
_MUL_PREC = 20
_UNARY_PREC = 25
_POW_PREC = 30
_ATOM_PREC = 100


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "ident" | one of "+-*/^()" | "end"
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "space":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", m.start())
        if kind == "op":
            tokens.append(_Token(m.group(), m.group(), m.start()))
        else:
            tokens.append(_Token(kind, m.group(), m.start()))
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    """Pratt parser for the expression grammar.

    Precedence: + - (10) < * / (20) < unary minus (25) < ^ (30, right
    associative).  Unary minus on a bare numeric literal folds into a
    negative constant unless the literal is immediately raised to a
    power, so that -2^2 still parses as -(2^2).
    """

    _LBP = {"+": _ADD_PREC, "-": _ADD_PREC, "*": _MUL_PREC, "/": _MUL_PREC, "^": _POW_PREC}

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.position)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expression(0)
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.position)
        return e

    def expression(self, rbp: int) -> Expr:
        left = self.prefix()
        while rbp < self._LBP.get(self.peek().kind, 0):
            tok = self.advance()
            if tok.kind == "^":
                # right associative: bind the right side one level looser
                right = self.expression(_POW_PREC - 1)
                left = Pow(left, right)
            else:
                right = self.expression(self._LBP[tok.kind])
                if tok.kind == "+":
                    left = Add(left, right)
                elif tok.kind == "-":
                    left = Sub(left, right)
                elif tok.kind == "*":
                    left = Mul(left, right)
                else:
                    left = Div(left, right)
        return left

    def prefix(self) -> Expr:
        tok = self.advance()
        if tok.kind == "number":
            return Constant(float(tok.text))
        if tok.kind == "ident":
            if tok.text == "x1":
                return X1
            if tok.text == "x2":
                return X2
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expression(0)
                self.expect(")")
                return Apply(tok.text, arg)
            raise ParseError(f"unknown identifier {tok.text!r}", tok.position)
        if tok.kind == "(":
            e = self.expression(0)
            self.expect(")")
            return e
        if tok.kind == "-":
            nxt = self.peek()
            if nxt.kind == "number" and self.tokens[self.pos + 1].kind != "^":
                self.advance()
                return Constant(-float(nxt.text))
            operand = self.expression(_UNARY_PREC)
            return Negate(operand)
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.position)


def parse(text: str) -> Expr:
    """Parse an infix expression over x1, x2, literals, + - * / ^,
    parentheses, and the supported functions."""
    return _Parser(text).parse()


def _format_number(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _render(e: Expr, min_prec: int) -> str:
    if isinstance(e, Constant):
        prec = _ATOM_PREC if e.value >= 0 else _UNARY_PREC
        s = _format_number(e.value)
    elif isinstance(e, Variable):
        prec, s = _ATOM_PREC, e.var.value
    elif isinstance(e, Apply):
        prec, s = _ATOM_PREC, f"{e.fn}({_render(e.arg, 0)})"
    elif isinstance(e, Negate):
        prec = _UNARY_PREC
        if isinstance(e.arg, Constant):
            # parenthesize so the parser rebuilds Negate(Constant)
            s = f"-({_render(e.arg, 0)})"
        else:
            s = f"-{_render(e.arg, _UNARY_PREC + 1)}"
    elif isinstance(e, Add):
        prec = _ADD_PREC
        s = f"{_render(e.lhs, _ADD_PREC)} + {_render(e.rhs, _ADD_PREC + 1)}"
    elif isinstance(e, Sub):
        prec = _ADD_PREC
        s = f"{_render(e.lhs, _ADD_PREC)} - {_render(e.rhs, _ADD_PREC + 1)}"
    elif isinstance(e, Mul):
        prec = _MUL_PREC
        s = f"{_render(e.lhs, _MUL_PREC)}*{_render(e.rhs, _MUL_PREC + 1)}"
    elif isinstance(e, Div):
        prec = _MUL_PREC
        s = f"{_render(e.num, _MUL_PREC)}/{_render(e.den, _MUL_PREC + 1)}"
    elif isinstance(e, Pow):
        prec = _POW_PREC
        s = f"{_render(e.base, _POW_PREC + 1)}^{_render(e.exponent, _POW_PREC)}"
    else:
        raise TypeError(f"not an expression node: {e!r}")
    if prec < min_prec:
        return f"({s})"
    return s


def to_string(e: Expr) -> str:
    """Render `e` in the parse grammar; parse(to_string(e)) == e."""
    return _render(e, 0)
