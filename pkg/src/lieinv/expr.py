"""Immutable symbolic expression kernel.

Expressions are trees over exact rational constants, symbols (coordinates,
jet variables, parameters), sums, products, rational powers, the elementary
functions exp/log/sin/cos, and opaque function applications used as template
slots.  Every constructor canonicalizes: sums and products are flattened,
constants folded exactly, like terms and like powers collected, and operands
sorted by a fixed total order, so structurally equal trees compare equal.

Canonical form conventions:
  * tan(a) is accepted on input and rewritten to sin(a)*cos(a)^(-1); no tan
    node survives canonicalization.
  * repeated exponentials collect as powers: exp(u)*exp(u) -> exp(u)^2.
  * sums merge Pythagorean pairs: c*f*sin(a)^2 + c*f*cos(a)^2 -> c*f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    ParseError,
    SingularEvaluation,
    UnboundSymbol,
    UnknownIdentifier,
    UnsupportedOperation,
)

Rational = Fraction

ELEMENTARY_HEADS = ("exp", "log", "sin", "cos")
# accepted by the parser, rewritten away during canonicalization
_INPUT_HEADS = ELEMENTARY_HEADS + ("tan",)

BASE = "base"
JET = "jet"
PARAM = "param"


@dataclass(frozen=True)
class Symbol:
    """A named leaf: base coordinate, jet variable, or parameter.

    Jet variables carry the dependent name and a sorted multi-index of
    coordinate names (length 0..2); u itself is the jet variable with the
    empty index.
    """

    name: str
    kind: str = BASE
    dep: Optional[str] = None
    index: tuple = ()

    @property
    def order(self) -> int:
        return len(self.index) if self.kind == JET else 0

    def __repr__(self):
        return f"Symbol({self.name!r})"


def jet_symbol(dep: str, index: Sequence[str]) -> Symbol:
    idx = tuple(sorted(index))
    if len(idx) > 2:
        raise UnsupportedOperation(f"jet order {len(idx)} > 2 for {dep}")
    name = dep if not idx else dep + "_" + "".join(idx)
    return Symbol(name, JET, dep=dep, index=idx)


# ---------------------------------------------------------------------------
# Expression nodes


class Expr:
    """Base class; subclasses are immutable and canonical by construction."""

    __slots__ = ("_key", "_hash", "_free")

    def __init__(self):
        self._key = None
        self._hash = None
        self._free = None

    # -- operator sugar -----------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, mul(Const(-1), as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), mul(Const(-1), self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return mul(self, pow_(as_expr(other), -1))

    def __rtruediv__(self, other):
        return mul(as_expr(other), pow_(self, -1))

    def __pow__(self, e):
        return pow_(self, e)

    def __neg__(self):
        return mul(Const(-1), self)

    # -- structural identity -----------------------------------------------
    def sort_key(self):
        if self._key is None:
            self._key = self._make_key()
        return self._key

    def __eq__(self, other):
        return isinstance(other, Expr) and self.sort_key() == other.sort_key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.sort_key())
        return self._hash

    def free_symbols(self) -> frozenset:
        if self._free is None:
            self._free = self._make_free()
        return self._free

    def __repr__(self):
        return f"<{type(self).__name__} {render(self)}>"

    def __str__(self):
        return render(self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        super().__init__()
        self.value = Fraction(value)

    def _make_key(self):
        return (0, (self.value.numerator, self.value.denominator))

    def _make_free(self):
        return frozenset()


ZERO = Const(0)
ONE = Const(1)


class Sym(Expr):
    __slots__ = ("symbol",)

    def __init__(self, symbol: Symbol):
        super().__init__()
        self.symbol = symbol

    def _make_key(self):
        s = self.symbol
        if s.kind == BASE:
            return (1, s.name)
        if s.kind == PARAM:
            return (2, s.name)
        return (3, s.dep, len(s.index), s.index)

    def _make_free(self):
        return frozenset((self.symbol,))


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: Fraction):
        super().__init__()
        self.base = base
        self.exp = exp

    def _make_key(self):
        return (4, self.base.sort_key(), (self.exp.numerator, self.exp.denominator))

    def _make_free(self):
        return self.base.free_symbols()


class Func(Expr):
    """Elementary function application (exp, log, sin, cos)."""

    __slots__ = ("head", "arg")

    def __init__(self, head: str, arg: Expr):
        super().__init__()
        self.head = head
        self.arg = arg

    def _make_key(self):
        return (5, self.head, self.arg.sort_key())

    def _make_free(self):
        return self.arg.free_symbols()


class Applied(Expr):
    """Opaque arbitrary-function application, used for template slots."""

    __slots__ = ("head", "args")

    def __init__(self, head: str, args: tuple):
        super().__init__()
        self.head = head
        self.args = args

    def _make_key(self):
        return (6, self.head, tuple(a.sort_key() for a in self.args))

    def _make_free(self):
        out = frozenset()
        for a in self.args:
            out |= a.free_symbols()
        return out


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: tuple):
        super().__init__()
        self.terms = terms

    def _make_key(self):
        return (7, tuple(t.sort_key() for t in self.terms))

    def _make_free(self):
        out = frozenset()
        for t in self.terms:
            out |= t.free_symbols()
        return out


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: tuple):
        super().__init__()
        self.factors = factors

    def _make_key(self):
        return (8, tuple(f.sort_key() for f in self.factors))

    def _make_free(self):
        out = frozenset()
        for f in self.factors:
            out |= f.free_symbols()
        return out


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Symbol):
        return Sym(x)
    if isinstance(x, (int, Fraction)):
        return Const(x)
    raise TypeError(f"cannot convert {x!r} to Expr")


# ---------------------------------------------------------------------------
# Canonicalizing constructors


def _split_coeff(term: Expr):
    """Split a canonical term into (rational coefficient, monomial or None)."""
    if isinstance(term, Const):
        return term.value, None
    if isinstance(term, Mul):
        first = term.factors[0]
        if isinstance(first, Const):
            rest = term.factors[1:]
            mono = rest[0] if len(rest) == 1 else Mul(rest)
            return first.value, mono
    return Fraction(1), term


def _monomial_factors(mono: Expr):
    if isinstance(mono, Mul):
        return list(mono.factors)
    return [mono]


def _rebuild_monomial(factors):
    if not factors:
        return None
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(sorted(factors, key=lambda f: f.sort_key())))


def _trig_square_candidates(mono, head):
    """Yield (arg, reduced-monomial) pairs obtained by removing head(a)^2."""
    out = []
    factors = _monomial_factors(mono)
    for i, f in enumerate(factors):
        if (
            isinstance(f, Pow)
            and isinstance(f.base, Func)
            and f.base.head == head
            and f.exp.denominator == 1
            and f.exp >= 2
        ):
            rest = factors[:i] + factors[i + 1 :]
            if f.exp != 2:
                rest.append(Pow(f.base, f.exp - 2))
            out.append((f.base.arg, _rebuild_monomial(rest)))
    return out


def _pythagorean_merge(monos: dict):
    """In-place merge of matching c*f*sin(a)^2 and c*f*cos(a)^2 terms.

    `monos` maps sort-key -> [monomial-or-None, coefficient].
    """
    changed = True
    while changed:
        changed = False
        sin_index = {}
        for key, (mono, coeff) in monos.items():
            if mono is None or coeff == 0:
                continue
            for arg, rest in _trig_square_candidates(mono, "sin"):
                rk = None if rest is None else rest.sort_key()
                sin_index[(arg.sort_key(), rk, coeff)] = (key, rest)
        if not sin_index:
            return
        for key, (mono, coeff) in list(monos.items()):
            if mono is None or coeff == 0:
                continue
            for arg, rest in _trig_square_candidates(mono, "cos"):
                rk = None if rest is None else rest.sort_key()
                hit = sin_index.get((arg.sort_key(), rk, coeff))
                if hit is None:
                    continue
                skey, srest = hit
                if skey == key:
                    continue
                monos[skey][1] = Fraction(0)
                monos[key][1] = Fraction(0)
                tgt = None if rest is None else rest.sort_key()
                if tgt in monos:
                    monos[tgt][1] += coeff
                else:
                    monos[tgt] = [rest, coeff]
                changed = True
                break
            if changed:
                break


def add(*terms) -> Expr:
    flat = []
    for t in terms:
        t = as_expr(t)
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    monos = {}
    for t in flat:
        coeff, mono = _split_coeff(t)
        key = None if mono is None else mono.sort_key()
        if key in monos:
            monos[key][1] += coeff
        else:
            monos[key] = [mono, coeff]
    _pythagorean_merge(monos)
    out = []
    for mono, coeff in monos.values():
        if coeff == 0:
            continue
        if mono is None:
            out.append(Const(coeff))
        elif coeff == 1:
            out.append(mono)
        else:
            out.append(mul(Const(coeff), mono))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=lambda t: t.sort_key())
    return Add(tuple(out))


def mul(*factors) -> Expr:
    flat = []
    for f in factors:
        f = as_expr(f)
        if isinstance(f, Mul):
            flat.extend(f.factors)
        else:
            flat.append(f)
    const = Fraction(1)
    powers = {}  # base key -> [base, exponent]
    order = []
    for f in flat:
        if isinstance(f, Const):
            const *= f.value
            continue
        if isinstance(f, Pow):
            base, exp = f.base, f.exp
        else:
            base, exp = f, Fraction(1)
        if isinstance(base, Const) and exp.denominator == 1:
            const *= base.value ** exp
            continue
        key = base.sort_key()
        if key in powers:
            powers[key][1] += exp
        else:
            powers[key] = [base, exp]
            order.append(key)
    if const == 0:
        return ZERO
    out = []
    for key in order:
        base, exp = powers[key]
        if exp == 0:
            continue
        out.append(pow_(base, exp))
    # pow_ may have folded, e.g. into constants or nested products
    if any(isinstance(f, (Mul, Const)) for f in out):
        return mul(Const(const), *out)
    if not out:
        return Const(const)
    out.sort(key=lambda f: f.sort_key())
    if const == 1 and len(out) == 1:
        return out[0]
    if const != 1:
        out.insert(0, Const(const))
    if len(out) == 1:
        return out[0]
    return Mul(tuple(out))


def pow_(base, exp) -> Expr:
    base = as_expr(base)
    exp = Fraction(exp)
    if exp == 0:
        return ONE
    if exp == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0:
            if exp > 0:
                return ZERO
            return Pow(base, exp)  # singular; caught at evaluation
        if exp.denominator == 1:
            return Const(base.value**exp)
        if base.value == 1:
            return ONE
    if isinstance(base, Pow) and exp.denominator == 1:
        return pow_(base.base, base.exp * exp)
    if isinstance(base, Mul) and exp.denominator == 1:
        return mul(*[pow_(f, exp) for f in base.factors])
    return Pow(base, exp)


def _negated_arg(arg: Expr):
    """Return b with arg == -b if arg has a negative leading coefficient."""
    coeff, mono = _split_coeff(arg)
    if isinstance(arg, Add):
        # normalize sign by the first term of the sorted sum
        coeff, _ = _split_coeff(arg.terms[0])
        if coeff < 0:
            return mul(Const(-1), arg)
        return None
    if coeff < 0:
        return mul(Const(-1), arg)
    return None


def func(head: str, arg) -> Expr:
    arg = as_expr(arg)
    if head == "tan":
        return mul(func("sin", arg), pow_(func("cos", arg), -1))
    if head not in ELEMENTARY_HEADS:
        raise UnsupportedOperation(f"unknown function head {head!r}")
    if isinstance(arg, Const):
        v = arg.value
        if head == "exp" and v == 0:
            return ONE
        if head == "log" and v == 1:
            return ZERO
        if head == "sin" and v == 0:
            return ZERO
        if head == "cos" and v == 0:
            return ONE
    if head in ("sin", "cos"):
        neg = _negated_arg(arg)
        if neg is not None:
            inner = Func(head, neg)
            return mul(Const(-1), inner) if head == "sin" else inner
    return Func(head, arg)


def applied(head: str, args: Iterable) -> Expr:
    return Applied(head, tuple(as_expr(a) for a in args))


# ---------------------------------------------------------------------------
# Core operations


def simplify_basic(e: Expr) -> Expr:
    """Rebuild `e` through the canonicalizing constructors (idempotent)."""
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Add):
        return add(*[simplify_basic(t) for t in e.terms])
    if isinstance(e, Mul):
        return mul(*[simplify_basic(f) for f in e.factors])
    if isinstance(e, Pow):
        return pow_(simplify_basic(e.base), e.exp)
    if isinstance(e, Func):
        return func(e.head, simplify_basic(e.arg))
    if isinstance(e, Applied):
        return applied(e.head, [simplify_basic(a) for a in e.args])
    raise TypeError(type(e))


def diff(e: Expr, s: Symbol) -> Expr:
    """Partial derivative of e with respect to the symbol s.

    All other symbols (including jet variables) are treated as independent.
    """
    if s not in e.free_symbols():
        return ZERO
    if isinstance(e, Sym):
        return ONE
    if isinstance(e, Add):
        return add(*[diff(t, s) for t in e.terms])
    if isinstance(e, Mul):
        parts = []
        for i, f in enumerate(e.factors):
            df = diff(f, s)
            if df is ZERO or (isinstance(df, Const) and df.value == 0):
                continue
            rest = e.factors[:i] + e.factors[i + 1 :]
            parts.append(mul(df, *rest))
        return add(*parts)
    if isinstance(e, Pow):
        return mul(Const(e.exp), pow_(e.base, e.exp - 1), diff(e.base, s))
    if isinstance(e, Func):
        da = diff(e.arg, s)
        if e.head == "exp":
            return mul(e, da)
        if e.head == "log":
            return mul(pow_(e.arg, -1), da)
        if e.head == "sin":
            return mul(func("cos", e.arg), da)
        if e.head == "cos":
            return mul(Const(-1), func("sin", e.arg), da)
    if isinstance(e, Applied):
        raise UnsupportedOperation(
            f"formal derivative of arbitrary-function head {e.head!r} is unsupported"
        )
    raise TypeError(type(e))


def substitute(e: Expr, bindings: Mapping[Symbol, Expr]) -> Expr:
    """Simultaneous substitution of symbols, then canonicalization."""
    if not bindings:
        return e
    if not (e.free_symbols() & set(bindings)):
        return e

    def rec(x):
        if isinstance(x, Const):
            return x
        if isinstance(x, Sym):
            r = bindings.get(x.symbol)
            return x if r is None else as_expr(r)
        if isinstance(x, Add):
            return add(*[rec(t) for t in x.terms])
        if isinstance(x, Mul):
            return mul(*[rec(f) for f in x.factors])
        if isinstance(x, Pow):
            return pow_(rec(x.base), x.exp)
        if isinstance(x, Func):
            return func(x.head, rec(x.arg))
        if isinstance(x, Applied):
            return applied(x.head, [rec(a) for a in x.args])
        raise TypeError(type(x))

    return rec(e)


def substitute_heads(e: Expr, heads: Mapping[str, Callable]) -> Expr:
    """Replace arbitrary-function applications head(args) by heads[head](*args)."""

    def rec(x):
        if isinstance(x, (Const, Sym)):
            return x
        if isinstance(x, Add):
            return add(*[rec(t) for t in x.terms])
        if isinstance(x, Mul):
            return mul(*[rec(f) for f in x.factors])
        if isinstance(x, Pow):
            return pow_(rec(x.base), x.exp)
        if isinstance(x, Func):
            return func(x.head, rec(x.arg))
        if isinstance(x, Applied):
            args = [rec(a) for a in x.args]
            fn = heads.get(x.head)
            if fn is None:
                return applied(x.head, args)
            return as_expr(fn(*args))
        raise TypeError(type(x))

    return rec(e)


def applied_heads(e: Expr) -> set:
    """Names of all arbitrary-function heads occurring in e."""
    out = set()

    def rec(x):
        if isinstance(x, Applied):
            out.add(x.head)
            for a in x.args:
                rec(a)
        elif isinstance(x, Add):
            for t in x.terms:
                rec(t)
        elif isinstance(x, Mul):
            for f in x.factors:
                rec(f)
        elif isinstance(x, Pow):
            rec(x.base)
        elif isinstance(x, Func):
            rec(x.arg)

    rec(e)
    return out


def expand(e: Expr) -> Expr:
    """Distribute products over sums (and small positive integer powers of sums)."""
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Add):
        return add(*[expand(t) for t in e.terms])
    if isinstance(e, Func):
        return func(e.head, expand(e.arg))
    if isinstance(e, Applied):
        return applied(e.head, [expand(a) for a in e.args])
    if isinstance(e, Pow):
        base = expand(e.base)
        if (
            isinstance(base, Add)
            and e.exp.denominator == 1
            and 2 <= e.exp <= 4
        ):
            out = base
            for _ in range(int(e.exp) - 1):
                out = _distribute(out, base)
            return out
        return pow_(base, e.exp)
    if isinstance(e, Mul):
        out = ONE
        for f in e.factors:
            out = _distribute(out, expand(f))
        return out
    raise TypeError(type(e))


def _distribute(a: Expr, b: Expr) -> Expr:
    aterms = a.terms if isinstance(a, Add) else (a,)
    bterms = b.terms if isinstance(b, Add) else (b,)
    return add(*[mul(x, y) for x in aterms for y in bterms])


def denominator_symbols(e: Expr) -> frozenset:
    """Symbols occurring inside the base of any negative-exponent power."""
    out = set()

    def rec(x):
        if isinstance(x, Pow):
            if x.exp < 0:
                out.update(x.base.free_symbols())
            rec(x.base)
        elif isinstance(x, Add):
            for t in x.terms:
                rec(t)
        elif isinstance(x, Mul):
            for f in x.factors:
                rec(f)
        elif isinstance(x, Func):
            rec(x.arg)
        elif isinstance(x, Applied):
            for a in x.args:
                rec(a)

    rec(e)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Numeric evaluation


def _num_pow(b: float, num: int, den: int) -> float:
    if b == 0.0 and num < 0:
        raise SingularEvaluation("zero base with negative exponent")
    if den == 1:
        if abs(b) < 1e-280 and num < 0:
            raise SingularEvaluation("vanishing denominator")
        return b ** num if num >= 0 else 1.0 / (b ** (-num))
    if b < 0:
        raise SingularEvaluation("negative base with fractional exponent")
    return b ** (num / den)


def _num_log(x: float) -> float:
    if x <= 0.0:
        raise SingularEvaluation("log of non-positive value")
    return math.log(x)


def _num_exp(x: float) -> float:
    if x > 700.0:
        raise SingularEvaluation("exp overflow")
    return math.exp(x)


_COMPILE_CACHE: dict = {}


def _codegen(e: Expr, names: dict, magnitude: bool) -> str:
    def gen(x):
        if isinstance(x, Const):
            v = abs(x.value) if magnitude else x.value
            if v.denominator == 1:
                return f"({v.numerator})"
            return f"({v.numerator}/{v.denominator})"
        if isinstance(x, Sym):
            ref = f"a[{names[x.symbol]!r}]"
            return f"abs({ref})" if magnitude else ref
        if isinstance(x, Add):
            return "(" + "+".join(gen(t) for t in x.terms) + ")"
        if isinstance(x, Mul):
            return "(" + "*".join(gen(f) for f in x.factors) + ")"
        if isinstance(x, Pow):
            return f"P({gen(x.base)},{x.exp.numerator},{x.exp.denominator})"
        if isinstance(x, Func):
            inner = gen(x.arg)
            if magnitude and x.head != "exp":
                return f"abs(F[{x.head!r}]({inner}))"
            return f"F[{x.head!r}]({inner})"
        if isinstance(x, Applied):
            raise UnboundSymbol(
                f"cannot numerically evaluate arbitrary-function head {x.head!r}"
            )
        raise TypeError(type(x))

    return gen(e)


def compile_numeric(e: Expr, magnitude: bool = False):
    """Compile e to a fast evaluator mapping {symbol name: float} -> float.

    With magnitude=True the compiled function computes a cancellation-free
    magnitude estimate: |.| is applied at the leaves and propagated through
    sums and products.
    """
    key = (id(e), magnitude)
    hit = _COMPILE_CACHE.get(key)
    if hit is not None and hit[0] is e:
        return hit[1]
    names = {s: s.name for s in e.free_symbols()}
    src = _codegen(e, names, magnitude)
    env = {
        "P": _num_pow,
        "F": {"exp": _num_exp, "log": _num_log, "sin": math.sin, "cos": math.cos},
        "abs": abs,
    }
    fn = eval(f"lambda a: ({src})+0.0", env)  # noqa: S307 - generated from our own AST
    _COMPILE_CACHE[key] = (e, fn)
    return fn


def eval_numeric(e: Expr, assignment: Mapping) -> float:
    """Deterministic IEEE-double evaluation of e at the given point.

    `assignment` maps Symbol (or symbol name) to a real number.  Raises
    UnboundSymbol / SingularEvaluation with the offending item.
    """
    values = {}
    for k, v in assignment.items():
        values[k.name if isinstance(k, Symbol) else k] = float(v)
    missing = [s.name for s in e.free_symbols() if s.name not in values]
    if missing:
        raise UnboundSymbol(f"unbound symbols: {sorted(missing)}")
    try:
        return compile_numeric(e)(values)
    except SingularEvaluation as exc:
        raise SingularEvaluation(f"{exc} while evaluating {render(e)}") from None


# ---------------------------------------------------------------------------
# Rendering


def _render_const(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _needs_parens_in_mul(x: Expr) -> bool:
    return isinstance(x, Add) or (isinstance(x, Const) and (x.value < 0 or x.value.denominator != 1))


def _render_power(x: Pow) -> str:
    base = x.base
    bs = render(base)
    if not isinstance(base, (Sym, Func, Applied)):
        bs = f"({bs})"
    e = x.exp
    if e.denominator == 1 and e > 0:
        return f"{bs}^{e.numerator}"
    return f"{bs}^({_render_const(e)})"


def _render_factor(x: Expr) -> str:
    if isinstance(x, Pow):
        return _render_power(x)
    s = render(x)
    return f"({s})" if _needs_parens_in_mul(x) else s


def _render_term(x: Expr) -> str:
    if isinstance(x, Mul):
        coeff, mono = _split_coeff(x)
        if coeff < 0:
            return "-" + _render_term(mul(Const(-coeff), mono))
        num, den = [], []
        for f in x.factors:
            if isinstance(f, Pow) and f.exp < 0:
                inv = pow_(f.base, -f.exp)
                den.append(_render_factor(inv))
            else:
                num.append(_render_factor(f))
        s = "*".join(num) if num else "1"
        for d in den:
            s += f"/{d}"
        return s
    if isinstance(x, Pow) and x.exp < 0:
        return f"1/{_render_factor(pow_(x.base, -x.exp))}"
    return _render_factor(x)


def render(e: Expr) -> str:
    """Render to the ASCII expression grammar with minimal parentheses."""
    if isinstance(e, Const):
        return _render_const(e.value)
    if isinstance(e, Sym):
        return e.symbol.name
    if isinstance(e, Func):
        return f"{e.head}({render(e.arg)})"
    if isinstance(e, Applied):
        return f"{e.head}({', '.join(render(a) for a in e.args)})"
    if isinstance(e, (Mul, Pow)):
        return _render_term(e)
    if isinstance(e, Add):
        parts = []
        for i, t in enumerate(e.terms):
            coeff, mono = _split_coeff(t)
            if i == 0:
                parts.append(_render_term(t))
            elif coeff < 0:
                parts.append(" - " + _render_term(mul(Const(-1), t)))
            else:
                parts.append(" + " + _render_term(t))
        return "".join(parts)
    raise TypeError(type(e))


# ---------------------------------------------------------------------------
# Parsing


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def at_end(self):
        return self.peek() == ""

    def ident(self):
        self.skip_ws()
        start = self.pos
        t = self.text
        if start >= len(t) or not (t[start].isalpha()):
            raise ParseError("expected identifier", start)
        i = start
        while i < len(t) and (t[i].isalnum() or t[i] == "_"):
            i += 1
        self.pos = i
        return t[start:i], start

    def number(self) -> Fraction:
        self.skip_ws()
        start = self.pos
        t = self.text
        i = start
        while i < len(t) and t[i].isdigit():
            i += 1
        if i < len(t) and t[i] == ".":
            i += 1
            while i < len(t) and t[i].isdigit():
                i += 1
        if i == start:
            raise ParseError("expected number", start)
        self.pos = i
        return Fraction(t[start:i])


class _Parser:
    def __init__(self, text: str, context):
        self.tok = _Tokenizer(text)
        self.context = context

    def parse(self) -> Expr:
        e = self.expr()
        self.tok.skip_ws()
        if not self.tok.at_end():
            raise ParseError("unexpected trailing input", self.tok.pos)
        return e

    def expr(self) -> Expr:
        sign = 1
        if self.tok.peek() == "-":
            self.tok.take("-")
            sign = -1
        elif self.tok.peek() == "+":
            self.tok.take("+")
        e = mul(Const(sign), self.term()) if sign < 0 else self.term()
        while self.tok.peek() in ("+", "-"):
            op = self.tok.peek()
            self.tok.take(op)
            t = self.term()
            e = add(e, t if op == "+" else mul(Const(-1), t))
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.tok.peek() in ("*", "/"):
            op = self.tok.peek()
            self.tok.take(op)
            f = self.factor()
            e = mul(e, f if op == "*" else pow_(f, -1))
        return e

    def factor(self) -> Expr:
        base = self.base()
        if self.tok.peek() == "^":
            self.tok.take("^")
            exp = self.exponent()
            return pow_(base, exp)
        return base

    def exponent(self) -> Fraction:
        self.tok.skip_ws()
        pos = self.tok.pos
        if self.tok.peek() == "(":
            self.tok.take("(")
            e = self.expr()
            self.tok.take(")")
            if not isinstance(e, Const):
                raise ParseError("exponent must be rational", pos)
            return e.value
        sign = 1
        if self.tok.peek() == "-":
            self.tok.take("-")
            sign = -1
        return sign * self.tok.number()

    def base(self) -> Expr:
        c = self.tok.peek()
        if c == "(":
            self.tok.take("(")
            e = self.expr()
            self.tok.take(")")
            return e
        if c.isdigit():
            return Const(self.tok.number())
        name, start = self.tok.ident()
        if self.tok.peek() == "(":
            self.tok.take("(")
            args = [self.expr()]
            while self.tok.peek() == ",":
                self.tok.take(",")
                args.append(self.expr())
            self.tok.take(")")
            if name in _INPUT_HEADS:
                if len(args) != 1:
                    raise ParseError(f"{name} takes one argument", start)
                return func(name, args[0])
            return applied(name, args)
        try:
            sym = self.context.resolve(name)
        except KeyError:
            raise UnknownIdentifier(f"unknown identifier {name!r}", start) from None
        return Sym(sym)


def parse(text: str, context) -> Expr:
    """Parse `text` in the ASCII grammar, resolving identifiers in `context`.

    `context` must provide resolve(name) -> Symbol (raising KeyError for
    unknown names); JetSpace implements this.
    """
    return _Parser(text, context).parse()
