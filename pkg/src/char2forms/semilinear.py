"""F^2-linear algebra over F = F2(x1..xk), with certificates.

Membership of b in the subfield F^2(a1..an) means solving

    b = sum over subsets S of c_S^2 * prod_{i in S} a_i

for c_S in F.  Square-decomposing both sides over the square-free
monomial basis turns this, by injectivity of the Frobenius, into an
ordinary linear system over F which is solved by fraction-field Gaussian
elimination.  Every positive answer is returned as a witness that
re-verifies by direct expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .config import DEFAULT, Config
from .gf2field import (
    FieldContext,
    Polynomial,
    RationalFunction,
    _grlex_key,
    _poly_one,
    poly_divexact,
    poly_gcd,
    square_decompose,
)

Vector = list[RationalFunction]
Matrix = list[Vector]


class SpanCapExceeded(ValueError):
    pass


# -- fraction-free Gauss-Jordan elimination ----------------------------------
#
# Rows are cleared of denominators and reduced by one-step fraction-free
# Gauss-Jordan: every division by the previous pivot is exact, so all
# intermediate entries stay polynomials (minors of the input).  The only
# fractions appear when solution entries are finally extracted, one
# division each.


def _clear_row(row: Vector) -> list[Polynomial]:
    ctx = row[0].ctx
    den = _poly_one(ctx)
    for entry in row:
        if not entry.den.is_one:
            g = poly_gcd(den, entry.den)
            den = poly_divexact(den, g) * entry.den
    out = [e.num * poly_divexact(den, e.den) for e in row]
    return _strip_content(out)


def _strip_content(row: list[Polynomial]) -> list[Polynomial]:
    content: Polynomial | None = None
    for p in row:
        if p.is_zero:
            continue
        content = p if content is None else poly_gcd(content, p)
        if content.is_one:
            return row
    if content is None or content.is_one:
        return row
    return [p if p.is_zero else poly_divexact(p, content) for p in row]


def _poly_complexity(p: Polynomial) -> tuple[int, int]:
    return (p.total_degree(), len(p.monomials))


def _ff_jordan(mat: list[list[Polynomial]], ncols_main: int):
    """Fraction-free Gauss-Jordan reduction in place; pivot columns are
    restricted to the first ``ncols_main`` (the rest carry right-hand
    sides).  Returns the list of (row, col) pivots.

    Afterwards each pivot row is zero on every other pivot column, and
    every never-pivoted row is identically zero on the main columns, so
    solutions require a single division per entry.
    """
    if not mat:
        return []
    nrows = len(mat)
    ncols = len(mat[0])
    zero = Polynomial(mat[0][0].ctx, frozenset())
    prev: Polynomial | None = None
    pivots: list[tuple[int, int]] = []
    used: set[int] = set()
    for col in range(ncols_main):
        cands = [r for r in range(nrows) if r not in used and not mat[r][col].is_zero]
        if not cands:
            continue
        piv = min(cands, key=lambda r: (_poly_complexity(mat[r][col]), r))
        used.add(piv)
        pivots.append((piv, col))
        p = mat[piv][col]
        prow = mat[piv]
        for r in range(nrows):
            if r == piv:
                continue
            row = mat[r]
            f = row[col]
            if f.is_zero:
                # Jordan scaling step keeps the one-step divisions exact
                for c in range(ncols):
                    if c != col and not row[c].is_zero:
                        num = p * row[c]
                        row[c] = poly_divexact(num, prev) if prev is not None else num
            else:
                for c in range(ncols):
                    if c == col:
                        continue
                    num = p * row[c] + f * prow[c]
                    row[c] = poly_divexact(num, prev) if prev is not None else num
                row[col] = zero
        prev = p
    return pivots


def _reduce(rows: Matrix, rhs: Vector | None):
    work = []
    for i, row in enumerate(rows):
        full = list(row) + ([rhs[i]] if rhs is not None else [])
        work.append(_clear_row(full))
    ncols_main = len(rows[0]) if rows else 0
    pivots = _ff_jordan(work, ncols_main)
    return work, pivots


def solve_linear(rows: Matrix, rhs: Vector, ctx: FieldContext) -> Vector | None:
    """One solution of rows * x = rhs (free variables set to 0), or None."""
    if not rows:
        return []
    work, pivots = _reduce(rows, rhs)
    ncols = len(rows[0])
    pivot_rows = {r for r, _ in pivots}
    for r in range(len(work)):
        if r not in pivot_rows and not work[r][ncols].is_zero:
            return None
    x: Vector = [ctx.zero()] * ncols
    for r, c in pivots:
        x[c] = RationalFunction.make(work[r][ncols], work[r][c])
    return x


def rank(rows: Matrix) -> int:
    if not rows:
        return 0
    _, pivots = _reduce(rows, None)
    return len(pivots)


def kernel_basis(rows: Matrix, ctx: FieldContext, ncols: int) -> list[Vector]:
    """Deterministic basis of the nullspace (one vector per free column)."""
    if not rows:
        return [
            [ctx.one() if i == f else ctx.zero() for i in range(ncols)]
            for f in range(ncols)
        ]
    work, pivots = _reduce(rows, None)
    pivot_cols = {c for _, c in pivots}
    free = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free:
        v: Vector = [ctx.zero()] * ncols
        v[fc] = ctx.one()
        for r, c in pivots:
            if not work[r][fc].is_zero:
                v[c] = RationalFunction.make(work[r][fc], work[r][c])
        basis.append(v)
    return basis


# -- F^2-linear membership (coefficients are squares, generators as given) --


def f2_linear_membership(
    b: RationalFunction, gens: Sequence[RationalFunction], ctx: FieldContext
) -> Vector | None:
    """Solve b = sum d_i^2 * gens_i; returns the d_i or None."""
    decs = [square_decompose(g) for g in gens]
    target = square_decompose(b)
    support = sorted(
        {e for d in decs for e in d.components} | set(target.components), key=_grlex_key
    )
    rows = [[d.components.get(e, ctx.zero()) for d in decs] for e in support]
    rhs = [target.components.get(e, ctx.zero()) for e in support]
    if not rows:
        return [] if b.is_zero else None
    return solve_linear(rows, rhs, ctx)


# -- subset-product span: the subfield F^2(a1..an) -------------------------


def subset_products(
    gens: Sequence[RationalFunction], ctx: FieldContext
) -> list[tuple[tuple[int, ...], RationalFunction]]:
    """(S, prod_{i in S} a_i) for all S, subsets ordered graded-lex."""
    n = len(gens)
    subsets = sorted(
        (tuple(i for i in range(n) if mask >> i & 1) for mask in range(1 << n)),
        key=lambda s: (len(s), s),
    )
    out = []
    for s in subsets:
        prod = ctx.one()
        for i in s:
            prod = prod * gens[i]
        out.append((s, prod))
    return out


@dataclass(frozen=True)
class SpanWitness:
    """b = sum over S of coefficients[S]^2 * prod_{i in S} generators[i]."""

    target: RationalFunction
    generators: tuple[RationalFunction, ...]
    coefficients: dict[tuple[int, ...], RationalFunction]

    def verify(self) -> bool:
        ctx = self.target.ctx
        acc = ctx.zero()
        for s, c in self.coefficients.items():
            prod = ctx.one()
            for i in s:
                prod = prod * self.generators[i]
            acc = acc + c.square() * prod
        return acc == self.target

    def as_payload(self) -> dict:
        return {
            "target": str(self.target),
            "generators": [str(g) for g in self.generators],
            "coefficients": {
                "*".join(str(self.generators[i]) for i in s) or "1": str(c)
                for s, c in sorted(self.coefficients.items(), key=lambda kv: (len(kv[0]), kv[0]))
            },
        }


def f2_span_membership(
    b: RationalFunction,
    gens: Sequence[RationalFunction],
    ctx: FieldContext | None = None,
    cfg: Config = DEFAULT,
) -> SpanWitness | None:
    """Membership of b in F^2(a1..an), with witness, or None."""
    ctx = ctx or b.ctx
    if any(g.is_zero for g in gens):
        raise ValueError("span generators must be nonzero")
    if len(gens) > cfg.max_span_generators:
        raise SpanCapExceeded(f"{len(gens)} generators exceed the cap {cfg.max_span_generators}")
    if ctx.k > cfg.max_basis_variables:
        raise SpanCapExceeded(f"{ctx.k} variables exceed the cap {cfg.max_basis_variables}")
    prods = subset_products(gens, ctx)
    decs = [square_decompose(p) for _, p in prods]
    target = square_decompose(b)
    support = sorted(
        {e for d in decs for e in d.components} | set(target.components), key=_grlex_key
    )
    rows = [[d.components.get(e, ctx.zero()) for d in decs] for e in support]
    rhs = [target.components.get(e, ctx.zero()) for e in support]
    if not rows:
        sol: Vector | None = [] if b.is_zero else None
    else:
        sol = solve_linear(rows, rhs, ctx)
    if sol is None:
        return None
    coeffs = {prods[i][0]: c for i, c in enumerate(sol) if not c.is_zero}
    if not coeffs and not b.is_zero:
        coeffs = {}
    return SpanWitness(b, tuple(gens), coeffs)


@dataclass(frozen=True)
class DependencyCertificate:
    """generators[index-1] lies in the span of its predecessors."""

    index: int  # 1-based, smallest failing position
    witness: SpanWitness

    def verify(self) -> bool:
        return self.witness.verify()

    def as_payload(self) -> dict:
        return {"index": self.index, "witness": self.witness.as_payload()}


def two_independent(
    elems: Sequence[RationalFunction],
    ctx: FieldContext | None = None,
    cfg: Config = DEFAULT,
) -> DependencyCertificate | bool:
    """True iff [F^2(a1..an) : F^2] = 2^n; otherwise the first element
    expressible over its predecessors, with a verifying witness."""
    if not elems:
        return True
    ctx = ctx or elems[0].ctx
    if any(a.is_zero for a in elems):
        raise ValueError("elements must be nonzero")
    for j in range(len(elems)):
        w = f2_span_membership(elems[j], elems[:j], ctx, cfg)
        if w is not None:
            return DependencyCertificate(j + 1, w)
    return True


@dataclass(frozen=True)
class FieldEqualityReport:
    equal: bool
    forward: tuple[SpanWitness, ...]  # each B-element over A
    backward: tuple[SpanWitness, ...]  # each A-element over B
    failed: RationalFunction | None = None

    def verify(self) -> bool:
        return all(w.verify() for w in self.forward + self.backward)

    def as_payload(self) -> dict:
        out: dict = {"equal": self.equal}
        if self.equal:
            out["forward"] = [w.as_payload() for w in self.forward]
            out["backward"] = [w.as_payload() for w in self.backward]
        else:
            out["failed"] = str(self.failed)
        return out


def f2_field_equal(
    a_gens: Sequence[RationalFunction],
    b_gens: Sequence[RationalFunction],
    ctx: FieldContext | None = None,
    cfg: Config = DEFAULT,
) -> FieldEqualityReport:
    """F^2(A) = F^2(B), certified in both directions."""
    ctx = ctx or a_gens[0].ctx
    forward = []
    for b in b_gens:
        w = f2_span_membership(b, a_gens, ctx, cfg)
        if w is None:
            return FieldEqualityReport(False, (), (), b)
        forward.append(w)
    backward = []
    for a in a_gens:
        w = f2_span_membership(a, b_gens, ctx, cfg)
        if w is None:
            return FieldEqualityReport(False, (), (), a)
        backward.append(w)
    return FieldEqualityReport(True, tuple(forward), tuple(backward))
