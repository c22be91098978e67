"""Exact arithmetic in rational function fields F2(x1, ..., xk).

The coefficient field is GF(2), so a polynomial is just a finite set of
monomials (every present monomial has coefficient 1) and addition is
symmetric difference.  Rational functions are kept as reduced fractions;
since the only unit of GF(2)[x1..xk] is 1, the reduced representation of
a field element is unique and structural equality coincides with
mathematical equality.

The module also provides the square-decomposition primitive: every
element f of F = F2(x1..xk) is uniquely a sum over square-free monomials
e of g_e^2 * x^e, because the x^e form a basis of F over its subfield of
squares.  All F^2-linear algebra in the package reduces to this.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


class ZeroDenominator(ZeroDivisionError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class NotASquare(ValueError):
    """Raised by sqrt(); ``component`` names a square-free basis monomial
    with a nonzero coefficient, certifying non-squareness."""

    def __init__(self, component: tuple[int, ...]):
        self.component = component
        super().__init__(f"not a square: nonzero component at {component}")


Monomial = tuple[int, ...]


@dataclass(frozen=True)
class FieldContext:
    """A rational function field F2(names); ``laurent``, when set, names the
    distinguished uniformizer variable t for fields read as F0((t))."""

    names: tuple[str, ...]
    laurent: str | None = None

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if self.laurent is not None and self.laurent not in self.names:
            raise ValueError(f"laurent variable {self.laurent!r} not in context")

    @property
    def k(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def zero(self) -> RationalFunction:
        return RationalFunction(Polynomial(self, frozenset()), _poly_one(self))

    def one(self) -> RationalFunction:
        return RationalFunction(_poly_one(self), _poly_one(self))

    def variable(self, name: str) -> RationalFunction:
        i = self.index(name)
        mono = tuple(1 if j == i else 0 for j in range(self.k))
        p = Polynomial(self, frozenset([mono]))
        return RationalFunction(p, _poly_one(self))

    def variables(self) -> tuple[RationalFunction, ...]:
        return tuple(self.variable(n) for n in self.names)

    def scalar(self, bit: int) -> RationalFunction:
        return self.one() if bit % 2 else self.zero()

    def extend(self, extra: Sequence[str], laurent: str | None = None) -> FieldContext:
        """New context with ``extra`` variables appended."""
        return FieldContext(self.names + tuple(extra), laurent or self.laurent)

    def squarefree_monomials(self) -> Iterator[Monomial]:
        """All 2^k exponent vectors in {0,1}^k, the basis of F over F^2."""
        return itertools.product((0, 1), repeat=self.k)

    def __repr__(self) -> str:
        body = ",".join(self.names)
        if self.laurent:
            return f"F2({body})[(({self.laurent}))]"
        return f"F2({body})"


def _zero_mono(ctx: FieldContext) -> Monomial:
    return (0,) * ctx.k


def _poly_one(ctx: FieldContext) -> Polynomial:
    return Polynomial(ctx, frozenset([_zero_mono(ctx)]))


def _grlex_key(m: Monomial) -> tuple[int, Monomial]:
    return (sum(m), m)


@dataclass(frozen=True)
class Polynomial:
    """Element of GF(2)[x1..xk] as a frozenset of exponent vectors."""

    ctx: FieldContext
    monomials: frozenset[Monomial]

    # -- ring structure ------------------------------------------------

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        return Polynomial(self.ctx, self.monomials.symmetric_difference(other.monomials))

    __sub__ = __add__

    def __mul__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        acc: dict[Monomial, bool] = {}
        for a in self.monomials:
            for b in other.monomials:
                m = tuple(x + y for x, y in zip(a, b))
                if m in acc:
                    del acc[m]
                else:
                    acc[m] = True
        return Polynomial(self.ctx, frozenset(acc))

    def square(self) -> Polynomial:
        return Polynomial(self.ctx, frozenset(tuple(2 * e for e in m) for m in self.monomials))

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = _poly_one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base.square()
            n >>= 1
        return result

    def _check(self, other: Polynomial) -> None:
        if self.ctx != other.ctx:
            raise ValueError("mixed field contexts")

    # -- queries ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def is_one(self) -> bool:
        return self.monomials == frozenset([_zero_mono(self.ctx)])

    def total_degree(self) -> int:
        if self.is_zero:
            return -1
        return max(sum(m) for m in self.monomials)

    def degree_in(self, var: int) -> int:
        if self.is_zero:
            return -1
        return max(m[var] for m in self.monomials)

    def min_degree_in(self, var: int) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no valuation")
        return min(m[var] for m in self.monomials)

    def lead(self) -> Monomial:
        return max(self.monomials, key=_grlex_key)

    def is_monomial(self) -> bool:
        return len(self.monomials) == 1

    def involves(self, var: int) -> bool:
        return any(m[var] for m in self.monomials)

    def sorted_monomials(self) -> list[Monomial]:
        return sorted(self.monomials, key=_grlex_key, reverse=True)

    # -- structure -----------------------------------------------------

    def shift(self, var: int, by: int) -> Polynomial:
        """Multiply/divide by x_var^by (by may be negative if every
        monomial allows it)."""
        out = []
        for m in self.monomials:
            e = m[var] + by
            if e < 0:
                raise ValueError("shift below zero exponent")
            out.append(m[:var] + (e,) + m[var + 1 :])
        return Polynomial(self.ctx, frozenset(out))

    def coefficient_in(self, var: int, deg: int) -> Polynomial:
        """Coefficient of x_var^deg, as a polynomial free of x_var."""
        sel = [m[:var] + (0,) + m[var + 1 :] for m in self.monomials if m[var] == deg]
        return Polynomial(self.ctx, frozenset(sel))

    def set_var_zero(self, var: int) -> Polynomial:
        return self.coefficient_in(var, 0)

    def try_sqrt(self) -> Polynomial | None:
        if any(e % 2 for m in self.monomials for e in m):
            return None
        return Polynomial(self.ctx, frozenset(tuple(e // 2 for e in m) for m in self.monomials))

    def substitute(self, images: Sequence, one, zero):
        """Evaluate at ``images`` (any commutative ring elements)."""
        acc = zero
        cache: dict[tuple[int, int], object] = {}

        def power(i: int, e: int):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        for m in self.monomials:
            term = one
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            acc = acc + term
        return acc

    def lift(self, new_ctx: FieldContext, index_map: Sequence[int]) -> Polynomial:
        """Reinterpret in ``new_ctx``; variable i maps to index_map[i]."""
        out = set()
        for m in self.monomials:
            t = [0] * new_ctx.k
            for i, e in enumerate(m):
                t[index_map[i]] = e
            out.add(tuple(t))
        return Polynomial(new_ctx, frozenset(out))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for m in self.sorted_monomials():
            factors = []
            for name, e in zip(self.ctx.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors) if factors else "1")
        return " + ".join(parts)


# -- gcd machinery -------------------------------------------------------


def poly_divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact quotient a/b; raises ValueError if b does not divide a."""
    if b.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero:
        return a
    if b.is_one:
        return a
    ctx = a.ctx
    quotient: set[Monomial] = set()
    rem = a
    blead = b.lead()
    while not rem.is_zero:
        rlead = rem.lead()
        q = tuple(x - y for x, y in zip(rlead, blead))
        if any(e < 0 for e in q):
            raise ValueError("not an exact division")
        quotient.symmetric_difference_update([q])
        rem = rem + Polynomial(ctx, frozenset([q])) * b
    return Polynomial(ctx, frozenset(quotient))


def poly_divides(b: Polynomial, a: Polynomial) -> bool:
    try:
        poly_divexact(a, b)
        return True
    except ValueError:
        return False


def _monomial_gcd(mono: Monomial, p: Polynomial) -> Polynomial:
    mins = list(mono)
    for m in p.monomials:
        mins = [min(x, y) for x, y in zip(mins, m)]
    return Polynomial(p.ctx, frozenset([tuple(mins)]))


def _prem(a: Polynomial, b: Polynomial, var: int) -> Polynomial:
    """Pseudo-remainder of a by b, univariate in x_var (fraction-free)."""
    ctx = a.ctx
    db = b.degree_in(var)
    lcb = b.coefficient_in(var, db)
    while not a.is_zero:
        da = a.degree_in(var)
        if da < db:
            break
        lca = a.coefficient_in(var, da)
        xshift = tuple(da - db if i == var else 0 for i in range(ctx.k))
        a = lcb * a + lca * Polynomial(ctx, frozenset([xshift])) * b
    return a


def _content_and_pp(p: Polynomial, var: int) -> tuple[Polynomial, Polynomial]:
    coeffs = [p.coefficient_in(var, d) for d in range(p.degree_in(var) + 1)]
    coeffs = [c for c in coeffs if not c.is_zero]
    content = coeffs[0]
    for c in coeffs[1:]:
        if content.is_one:
            break
        content = poly_gcd(content, c)
    return content, poly_divexact(p, content)


def _int_poly_gcd(a: int, b: int) -> int:
    """Euclid on univariate GF(2) polynomials packed into ints."""
    while b:
        while a and a.bit_length() >= b.bit_length():
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def _kron_weights(a: Polynomial, b: Polynomial):
    """Mixed-radix weights for the Kronecker substitution x_i -> t^(w_i);
    injective on all monomials occurring in a, b and their divisors."""
    k = a.ctx.k
    radix = [max(a.degree_in(i), b.degree_in(i), 0) + 1 for i in range(k)]
    weights = []
    total = 1
    for d in radix:
        weights.append(total)
        total *= d
    return weights, radix, total


def _kron_pack(p: Polynomial, weights) -> int:
    v = 0
    for m in p.monomials:
        v |= 1 << sum(e * w for e, w in zip(m, weights))
    return v


def _kron_unpack(ctx: FieldContext, v: int, radix) -> Polynomial:
    monos = set()
    while v:
        low = v & -v
        pos = low.bit_length() - 1
        v ^= low
        exps = []
        for d in radix[:-1]:
            exps.append(pos % d)
            pos //= d
        exps.append(pos)
        monos.add(tuple(exps) if radix else ())
    return Polynomial(ctx, frozenset(monos))


def _kronecker_coprime(a: Polynomial, b: Polynomial) -> bool:
    """Fast sound-and-complete test for gcd(a, b) = 1.

    Kronecker substitution is a ring map, so any common factor survives
    into the univariate images; a univariate gcd of 1 therefore
    certifies multivariate coprimality.
    """
    weights, _, total = _kron_weights(a, b)
    if total > 150_000:
        return False
    return _int_poly_gcd(_kron_pack(a, weights), _kron_pack(b, weights)) == 1


def _kronecker_gcd(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """Attempt the full gcd through the Kronecker substitution.

    The univariate gcd of the images contains the image of the true gcd
    as a factor; if unpacking it yields a common divisor with coprime
    cofactors, that divisor is the gcd.  Returns None when the images
    would be too large or the heuristic is inconclusive (extra common
    factors picked up by the substitution).
    """
    weights, radix, total = _kron_weights(a, b)
    if total > 150_000:
        return None
    g_uni = _int_poly_gcd(_kron_pack(a, weights), _kron_pack(b, weights))
    if g_uni == 1:
        return _poly_one(a.ctx)
    cand = _kron_unpack(a.ctx, g_uni, radix)
    try:
        qa = poly_divexact(a, cand)
        qb = poly_divexact(b, cand)
    except ValueError:
        return None
    if _kronecker_coprime(qa, qb):
        return cand
    return None


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Multivariate gcd over GF(2): recursive content/primitive-part with
    pseudo-remainder Euclid in the chosen main variable."""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a.is_one or b.is_one:
        return _poly_one(a.ctx)
    if a == b:
        return a
    if a.is_monomial():
        return _monomial_gcd(next(iter(a.monomials)), b)
    if b.is_monomial():
        return _monomial_gcd(next(iter(b.monomials)), a)
    fast = _kronecker_gcd(a, b)
    if fast is not None:
        return fast
    # main variable: highest-index variable occurring in either operand
    var = max(
        i for i in range(a.ctx.k) if a.degree_in(i) > 0 or b.degree_in(i) > 0
    )
    if not a.involves(var):
        ca, _ = _content_and_pp(b, var)
        return poly_gcd(a, ca)
    if not b.involves(var):
        cb, _ = _content_and_pp(a, var)
        return poly_gcd(b, cb)
    ca, ppa = _content_and_pp(a, var)
    cb, ppb = _content_and_pp(b, var)
    cont = poly_gcd(ca, cb)
    u, v = ppa, ppb
    if u.degree_in(var) < v.degree_in(var):
        u, v = v, u
    while not v.is_zero:
        r = _prem(u, v, var)
        if r.is_zero:
            u = v
            break
        _, r = _content_and_pp(r, var)
        u, v = v, r
    _, ppu = _content_and_pp(u, var)
    return cont * ppu


# -- rational functions ---------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """Reduced fraction num/den over GF(2)[x1..xk]; gcd(num, den) = 1."""

    num: Polynomial
    den: Polynomial

    @staticmethod
    def make(num: Polynomial, den: Polynomial) -> RationalFunction:
        if den.is_zero:
            raise ZeroDenominator("zero denominator")
        if num.is_zero:
            return RationalFunction(num, _poly_one(num.ctx))
        if not den.is_one:
            g = poly_gcd(num, den)
            if not g.is_one:
                num = poly_divexact(num, g)
                den = poly_divexact(den, g)
        return RationalFunction(num, den)

    @property
    def ctx(self) -> FieldContext:
        return self.num.ctx

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num.is_one and self.den.is_one

    def __add__(self, other: RationalFunction) -> RationalFunction:
        if self.den == other.den:
            return RationalFunction.make(self.num + other.num, self.den)
        return RationalFunction.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __sub__ = __add__

    def __neg__(self) -> RationalFunction:
        return self

    def __mul__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RationalFunction) -> RationalFunction:
        if other.is_zero:
            raise DivisionByZero("division by zero")
        return RationalFunction.make(self.num * other.den, self.den * other.num)

    def inverse(self) -> RationalFunction:
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        return RationalFunction(self.den, self.num)

    def square(self) -> RationalFunction:
        return RationalFunction(self.num.square(), self.den.square())

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base.square()
            n >>= 1
        return result

    def complexity(self) -> int:
        """Pivoting heuristic: total degree mass of the representation."""
        return max(self.num.total_degree(), 0) + max(self.den.total_degree(), 0)

    def substitute(self, images: Sequence, one, zero):
        """Image under the map sending variable i to images[i]."""
        n = self.num.substitute(images, one, zero)
        d = self.den.substitute(images, one, zero)
        return n / d

    def lift(self, new_ctx: FieldContext, index_map: Sequence[int]) -> RationalFunction:
        return RationalFunction(self.num.lift(new_ctx, index_map), self.den.lift(new_ctx, index_map))

    def __str__(self) -> str:
        if self.den.is_one:
            return str(self.num)
        num = str(self.num)
        den = str(self.den)
        if len(self.num.monomials) > 1:
            num = f"({num})"
        # a lone variable power binds fine after '/'; anything else needs parens
        den_mono = next(iter(self.den.monomials)) if self.den.is_monomial() else None
        if den_mono is None or sum(1 for e in den_mono if e) != 1:
            den = f"({den})"
        return f"{num}/{den}"


# -- the field-level operations ------------------------------------------


def rf_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Reduced fraction; the canonical representation of num/den."""
    return RationalFunction.make(num, den)


def rf_add(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    return f + g


def rf_mul(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    return f * g


def rf_inv(f: RationalFunction) -> RationalFunction:
    return f.inverse()


@dataclass(frozen=True)
class SquareDecomposition:
    """f = sum over square-free e of components[e]^2 * x^e."""

    ctx: FieldContext
    components: Mapping[Monomial, RationalFunction]

    def recompose(self) -> RationalFunction:
        acc = self.ctx.zero()
        for e, g in self.components.items():
            mono = RationalFunction(
                Polynomial(self.ctx, frozenset([e])), _poly_one(self.ctx)
            )
            acc = acc + g.square() * mono
        return acc

    def support(self) -> list[Monomial]:
        return sorted(self.components, key=_grlex_key)


def square_decompose(f: RationalFunction) -> SquareDecomposition:
    """Split f over the square-free monomial basis of F over F^2.

    Writing f = (num*den)/den^2 reduces the problem to sorting the
    monomials of the polynomial num*den by exponent parity.
    """
    ctx = f.ctx
    if f.is_zero:
        return SquareDecomposition(ctx, {})
    g = f.num * f.den
    buckets: dict[Monomial, set[Monomial]] = {}
    for m in g.monomials:
        parity = tuple(e % 2 for e in m)
        half = tuple((x - p) // 2 for x, p in zip(m, parity))
        buckets.setdefault(parity, set()).add(half)
    comps = {}
    for parity, halves in buckets.items():
        comps[parity] = RationalFunction.make(Polynomial(ctx, frozenset(halves)), f.den)
    return SquareDecomposition(ctx, comps)


def sqrt(f: RationalFunction) -> RationalFunction:
    """Inverse Frobenius; raises NotASquare with the offending component."""
    dec = square_decompose(f)
    zero = _zero_mono(f.ctx)
    for e in dec.support():
        if e != zero:
            raise NotASquare(e)
    if not dec.components:
        return f.ctx.zero()
    return dec.components[zero]


def try_sqrt(f: RationalFunction) -> RationalFunction | None:
    try:
        return sqrt(f)
    except NotASquare:
        return None


# -- textual element syntax ------------------------------------------------


class ElementSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} (at offset {pos})")


def parse_element(text: str, ctx: FieldContext) -> RationalFunction:
    """Parse `+ * / ^ ( )` expressions over the context variables.

    Integer literals reduce mod 2; exponents may be negative (field
    inverses), there is no unary minus in characteristic 2.
    """
    tokens = _tokenize(text)
    parser = _ElemParser(tokens, ctx, text)
    value = parser.expr()
    parser.expect_end()
    return value


def format_element(f: RationalFunction) -> str:
    return str(f)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j], i))
            i = j
            continue
        if c.isdigit() or (c == "-" and out and out[-1][0] == "op" and out[-1][1] == "^"):
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("int", text[i:j], i))
            i = j
            continue
        if c in "+*/^()":
            out.append(("op", c, i))
            i += 1
            continue
        raise ElementSyntaxError(f"unexpected character {c!r}", i)
    return out


class _ElemParser:
    def __init__(self, tokens, ctx: FieldContext, text: str):
        self.tokens = tokens
        self.ctx = ctx
        self.text = text
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_end(self):
        kind, val, pos = self.peek()
        if kind is not None:
            raise ElementSyntaxError(f"trailing input {val!r}", pos)

    def expr(self) -> RationalFunction:
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "+":
                self.next()
                acc = acc + self.term()
            else:
                return acc

    def term(self) -> RationalFunction:
        acc = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.factor()
                if val == "*":
                    acc = acc * rhs
                else:
                    if rhs.is_zero:
                        raise ElementSyntaxError("division by zero", pos)
                    acc = acc / rhs
            else:
                return acc

    def factor(self) -> RationalFunction:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "int":
                raise ElementSyntaxError("exponent must be an integer", pos)
            e = int(val)
            if e < 0 and base.is_zero:
                raise ElementSyntaxError("negative power of zero", pos)
            return base**e
        return base

    def atom(self) -> RationalFunction:
        kind, val, pos = self.next()
        if kind == "int":
            return self.ctx.scalar(int(val))
        if kind == "name":
            if val not in self.ctx.names:
                raise ElementSyntaxError(f"unknown variable {val!r}", pos)
            return self.ctx.variable(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.next()
            if not (kind == "op" and val == ")"):
                raise ElementSyntaxError("expected ')'", pos)
            return inner
        raise ElementSyntaxError("expected an element", pos)
