"""Deterministic random element generation for seeded property suites."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .gf2field import FieldContext, Monomial, Polynomial, RationalFunction, _poly_one


def monomials_up_to(ctx: FieldContext, degree: int, var_subset: tuple[int, ...] | None = None) -> list[Monomial]:
    """All exponent vectors of total degree <= degree (graded-lex order),
    optionally supported only on ``var_subset``."""
    idxs = var_subset if var_subset is not None else tuple(range(ctx.k))
    out: list[Monomial] = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(idxs, total):
            m = [0] * ctx.k
            for i in combo:
                m[i] += 1
            out.append(tuple(m))
    seen = set()
    uniq = []
    for m in out:
        if m not in seen:
            seen.add(m)
            uniq.append(m)
    return uniq


def random_polynomial(
    rng: random.Random,
    ctx: FieldContext,
    degree: int,
    max_terms: int = 4,
    nonzero: bool = False,
    var_subset: tuple[int, ...] | None = None,
) -> Polynomial:
    pool = monomials_up_to(ctx, degree, var_subset)
    n = rng.randint(1 if nonzero else 0, max_terms)
    chosen = set()
    for _ in range(n):
        chosen.symmetric_difference_update([rng.choice(pool)])
    if nonzero and not chosen:
        chosen.add(rng.choice(pool))
    return Polynomial(ctx, frozenset(chosen))


def random_rational(
    rng: random.Random,
    ctx: FieldContext,
    degree: int,
    max_terms: int = 4,
    nonzero: bool = False,
    fraction: bool = True,
) -> RationalFunction:
    num = random_polynomial(rng, ctx, degree, max_terms, nonzero)
    if fraction and rng.random() < 0.35:
        den = random_polynomial(rng, ctx, max(1, degree // 2), 2, nonzero=True)
    else:
        den = _poly_one(ctx)
    return RationalFunction.make(num, den)


def random_vector(
    rng: random.Random, ctx: FieldContext, dim: int, degree: int, nonzero: bool = True
) -> list[RationalFunction]:
    while True:
        v = [random_rational(rng, ctx, degree, 3) for _ in range(dim)]
        if not nonzero or any(not c.is_zero for c in v):
            return v
