"""Quadratic and bilinear forms over characteristic-2 function fields.

Quadratic forms are kept in the canonical shape

    [a1,b1] perp ... perp [ar,br] perp <c1,...,cs>

where [a,b] is the binary form a x^2 + x y + b y^2 and the diagonal part
is totally singular.  Scaled binary blocks are renormalized eagerly via
a[u,v] = [au, v/a], so every form stays in this shape.  Isotropy of a
totally singular form is an F^2-linear dependence of its coefficients
and is decided exactly; isotropy of forms with binary blocks is only
ever *witnessed* (bounded search) or *refuted* (valuation criteria in
the laurent module) - there is no general decision procedure here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence

from .config import DEFAULT, Config
from .gf2field import FieldContext, Polynomial, RationalFunction, try_sqrt
from .semilinear import f2_linear_membership, rank, two_independent


class DimensionMismatch(ValueError):
    pass


class NotTotallySingular(ValueError):
    pass


class FoldMismatch(ValueError):
    pass


class BadSlot(ValueError):
    pass


class SNotTwoIndependent(ValueError):
    pass


class AIsSquare(ValueError):
    pass


class SearchSpaceTooLarge(ValueError):
    pass


class Verdict(Enum):
    ANISOTROPIC = "anisotropic"
    ISOTROPIC = "isotropic"
    UNKNOWN = "unknown"


# -- Pfister specifications -------------------------------------------------


@dataclass(frozen=True)
class PfisterSpec:
    """<<s1,...,sm>>_b (bilinear), <<s1,...,sm; last]] (quadratic) or
    <<s1,...,sm>> (quasi, zero slots allowed)."""

    kind: str  # "bilinear" | "quadratic" | "quasi"
    slots: tuple  # bilinear slots
    last: object | None = None  # Artin-Schreier slot of a quadratic Pfister

    def __post_init__(self):
        if self.kind not in ("bilinear", "quadratic", "quasi"):
            raise ValueError(f"unknown Pfister kind {self.kind!r}")
        if self.kind == "quadratic":
            if self.last is None:
                raise BadSlot("quadratic Pfister needs a final slot")
        elif self.last is not None:
            raise BadSlot("only quadratic Pfister forms carry a final slot")
        if self.kind in ("bilinear", "quadratic"):
            for s in self.slots:
                if s.is_zero:
                    raise BadSlot("zero in a bilinear slot")

    @property
    def fold(self) -> int:
        return len(self.slots) + (1 if self.kind == "quadratic" else 0)

    def subset_products(self, ctx) -> list:
        """Products over subsets of the bilinear slots, graded-lex order."""
        n = len(self.slots)
        subsets = sorted(
            (tuple(i for i in range(n) if mask >> i & 1) for mask in range(1 << n)),
            key=lambda s: (len(s), s),
        )
        out = []
        for s in subsets:
            prod = ctx.one()
            for i in s:
                prod = prod * self.slots[i]
            out.append(prod)
        return out

    def describe(self) -> str:
        body = ",".join(str(s) for s in self.slots)
        if self.kind == "quadratic":
            return f"<<{body}; {self.last}]]"
        if self.kind == "bilinear":
            return f"<<{body}>>_b"
        return f"<<{body}>>"


def quasi_pfister(slots: Sequence) -> PfisterSpec:
    return PfisterSpec("quasi", tuple(slots))


def bilinear_pfister(slots: Sequence) -> PfisterSpec:
    return PfisterSpec("bilinear", tuple(slots))


def quadratic_pfister(slots: Sequence, last) -> PfisterSpec:
    return PfisterSpec("quadratic", tuple(slots), last)


# -- forms -------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticForm:
    blocks: tuple  # ((a_i, b_i), ...)
    diagonal: tuple  # (c_1, ..., c_s)
    ctx: object  # FieldContext or an extension providing zero()/one()
    pfister: PfisterSpec | None = None  # provenance, when expanded from one

    @property
    def dim(self) -> int:
        return 2 * len(self.blocks) + len(self.diagonal)

    @property
    def is_totally_singular(self) -> bool:
        return not self.blocks

    @property
    def is_nondegenerate(self) -> bool:
        return not self.diagonal

    def evaluate(self, v: Sequence):
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} on a form of dimension {self.dim}")
        acc = self.ctx.zero()
        i = 0
        for a, b in self.blocks:
            x, y = v[i], v[i + 1]
            acc = acc + a * x * x + x * y + b * y * y
            i += 2
        for c in self.diagonal:
            x = v[i]
            acc = acc + c * x * x
            i += 1
        return acc

    def orth(self, other: QuadraticForm) -> QuadraticForm:
        return QuadraticForm(self.blocks + other.blocks, self.diagonal + other.diagonal, self.ctx)

    def scale(self, a) -> QuadraticForm:
        """a*q, renormalized: a[u,v] = [au, v/a]; diagonal scales plainly."""
        if a.is_zero:
            raise ValueError("scaling a form by zero")
        blocks = tuple((a * u, v / a) for u, v in self.blocks)
        diagonal = tuple(a * c for c in self.diagonal)
        return QuadraticForm(blocks, diagonal, self.ctx)

    def coefficients(self) -> list:
        out = []
        for a, b in self.blocks:
            out.extend([a, b])
        out.extend(self.diagonal)
        return out

    def map_coefficients(self, fn: Callable, new_ctx) -> QuadraticForm:
        blocks = tuple((fn(a), fn(b)) for a, b in self.blocks)
        diagonal = tuple(fn(c) for c in self.diagonal)
        return QuadraticForm(blocks, diagonal, new_ctx, self.pfister and PfisterSpec(
            self.pfister.kind,
            tuple(fn(s) for s in self.pfister.slots),
            fn(self.pfister.last) if self.pfister.last is not None else None,
        ))

    def describe(self) -> str:
        parts = [f"[{a},{b}]" for a, b in self.blocks]
        if self.diagonal:
            parts.append("<" + ",".join(str(c) for c in self.diagonal) + ">")
        return " _|_ ".join(parts) if parts else "<>"


def hyperbolic_plane(ctx) -> QuadraticForm:
    return QuadraticForm(((ctx.zero(), ctx.zero()),), (), ctx)


@dataclass(frozen=True)
class BilinearForm:
    """Symmetric nondegenerate; either a diagonal <a1..an>_b or a full
    Gram matrix (used for metabolic planes)."""

    ctx: object
    diag: tuple | None = None
    gram: tuple | None = None

    def __post_init__(self):
        if (self.diag is None) == (self.gram is None):
            raise ValueError("exactly one of diag/gram must be given")
        if self.diag is not None and any(a.is_zero for a in self.diag):
            raise ValueError("zero entry in a diagonal bilinear form")

    @property
    def dim(self) -> int:
        return len(self.diag) if self.diag is not None else len(self.gram)

    def associated_quasi(self) -> QuadraticForm:
        """q_b(x) = b(x, x); cross terms cancel in characteristic 2."""
        if self.diag is not None:
            return QuadraticForm((), self.diag, self.ctx)
        return QuadraticForm((), tuple(self.gram[i][i] for i in range(self.dim)), self.ctx)

    def evaluate(self, u: Sequence, v: Sequence):
        if len(u) != self.dim or len(v) != self.dim:
            raise DimensionMismatch("vector/form dimension mismatch")
        acc = self.ctx.zero()
        if self.diag is not None:
            for a, x, y in zip(self.diag, u, v):
                acc = acc + a * x * y
            return acc
        for i in range(self.dim):
            for j in range(self.dim):
                acc = acc + self.gram[i][j] * u[i] * v[j]
        return acc


def metabolic_plane(ctx, a) -> BilinearForm:
    one, zero = ctx.one(), ctx.zero()
    return BilinearForm(ctx, gram=((zero, one), (one, a)))


# -- witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class IsotropyWitness:
    vector: tuple

    def verify(self, q: QuadraticForm) -> bool:
        if all(c.is_zero for c in self.vector):
            return False
        return q.evaluate(self.vector).is_zero

    def as_payload(self) -> dict:
        return {"vector": [str(c) for c in self.vector]}


@dataclass(frozen=True)
class IsometryWitness:
    matrix: tuple  # rows of square matrix

    def as_payload(self) -> dict:
        return {"matrix": [[str(c) for c in row] for row in self.matrix]}


@dataclass(frozen=True)
class ArfWitness:
    w: object

    def as_payload(self) -> dict:
        return {"w": str(self.w)}


@dataclass(frozen=True)
class TsAnisotropy:
    """Full-rank certificate: the diagonal coefficients are linearly
    independent over the squares."""

    coefficients: tuple
    rank: int

    def as_payload(self) -> dict:
        return {"rank": self.rank, "coefficients": [str(c) for c in self.coefficients]}


# -- expansion and tensor ----------------------------------------------------


def expand_pfister(spec: PfisterSpec, ctx):
    """Full expansion in the canonical subset order (graded-lex on slot
    indices)."""
    prods = spec.subset_products(ctx)
    if spec.kind == "quasi":
        return QuadraticForm((), tuple(prods), ctx, pfister=spec)
    if spec.kind == "bilinear":
        return BilinearForm(ctx, diag=tuple(prods))
    blocks = tuple((m, spec.last / m) for m in prods)
    return QuadraticForm(blocks, (), ctx, pfister=spec)


def tensor(diag: Sequence, q: QuadraticForm) -> QuadraticForm:
    """<a1..an>_b tensor q = perp of the a_i * q, eagerly renormalized."""
    if not diag:
        raise ValueError("empty bilinear factor")
    acc = q.scale(diag[0])
    for a in diag[1:]:
        acc = acc.orth(q.scale(a))
    return replace(acc, ctx=q.ctx)


def tensor_pfister_factor(a, q: QuadraticForm) -> QuadraticForm:
    """<1,a>_b tensor q, carrying Pfister provenance when q has it."""
    out = tensor([q.ctx.one(), a], q)
    if q.pfister is not None and q.pfister.kind == "quadratic":
        spec = PfisterSpec("quadratic", (a,) + q.pfister.slots, q.pfister.last)
        out = replace(out, pfister=spec)
    return out


def evaluate(q: QuadraticForm, v: Sequence):
    return q.evaluate(v)


# -- totally singular isotropy ----------------------------------------------


def ts_isotropy(q: QuadraticForm, cfg: Config = DEFAULT) -> IsotropyWitness | TsAnisotropy:
    """Exact decision for totally singular forms: isotropy is an
    F^2-linear dependence of the diagonal coefficients; the witness is
    read off the first dependent coefficient."""
    if not q.is_totally_singular:
        raise NotTotallySingular("form has binary blocks")
    coeffs = list(q.diagonal)
    ctx = q.ctx
    if not isinstance(ctx, FieldContext):
        raise TypeError("ts_isotropy needs rational-function coefficients; use a realization")
    zero, one = ctx.zero(), ctx.one()
    for j, c in enumerate(coeffs):
        if c.is_zero:
            v = [zero] * len(coeffs)
            v[j] = one
            return IsotropyWitness(tuple(v))
        sol = f2_linear_membership(c, coeffs[:j], ctx)
        if sol is not None:
            v = list(sol) + [one] + [zero] * (len(coeffs) - j - 1)
            w = IsotropyWitness(tuple(v))
            assert w.verify(q)
            return w
    return TsAnisotropy(tuple(coeffs), len(coeffs))


def bil_pfister_anisotropic(slots: Sequence, ctx=None, cfg: Config = DEFAULT):
    """A bilinear Pfister form is anisotropic iff its slots are
    2-independent; returns (verdict, certificate)."""
    res = two_independent(list(slots), ctx, cfg)
    if res is True:
        return True, None
    return False, res


def bil_isotropic_over_exp1(
    beta_diag: Sequence, s_elems: Sequence, ctx=None, cfg: Config = DEFAULT
):
    """Isotropy of a diagonal bilinear form after the exponent-1 extension
    generated by square roots of ``s_elems`` (which must be 2-independent).

    Works over the base field: the extension's isotropy equals that of
    <<s1..sr>>_b tensor beta, read through the associated totally
    singular form.  Returns (bool, witness-or-certificate).
    """
    indep = two_independent(list(s_elems), ctx, cfg)
    if indep is not True:
        raise SNotTwoIndependent(f"S is 2-dependent at index {indep.index}")
    ctx = ctx or s_elems[0].ctx
    sigma = PfisterSpec("bilinear", tuple(s_elems))
    coeffs = []
    for m in sigma.subset_products(ctx):
        for b in beta_diag:
            coeffs.append(m * b)
    res = ts_isotropy(QuadraticForm((), tuple(coeffs), ctx), cfg)
    if isinstance(res, IsotropyWitness):
        return True, res
    return False, res


def quasi_pfister_isometric(p: PfisterSpec, q: PfisterSpec, ctx, cfg: Config = DEFAULT):
    """Quasi-Pfister forms are isometric iff same fold and the slot-
    generated subfields F^2(...) agree; returns (bool, equality report)."""
    from .semilinear import f2_field_equal

    if p.kind != "quasi" or q.kind != "quasi":
        raise ValueError("quasi-Pfister specs expected")
    if len(p.slots) != len(q.slots):
        raise FoldMismatch(f"folds {len(p.slots)} and {len(q.slots)} differ")
    a = [s for s in p.slots if not s.is_zero]
    b = [s for s in q.slots if not s.is_zero]
    rep = f2_field_equal(a, b, ctx, cfg)
    return rep.equal, rep


# -- isometry / Arf witnesses -------------------------------------------------


def mat_vec(matrix: Sequence, v: Sequence, ctx):
    out = []
    for row in matrix:
        acc = ctx.zero()
        for a, x in zip(row, v):
            acc = acc + a * x
        out.append(acc)
    return out


def mat_mul(a: Sequence, b: Sequence, ctx):
    n = len(a)
    return tuple(
        tuple(
            sum((a[i][k] * b[k][j] for k in range(n)), ctx.zero()) for j in range(n)
        )
        for i in range(n)
    )


def check_isometry_witness(source: QuadraticForm, target: QuadraticForm, T: IsometryWitness) -> bool:
    """True iff T is invertible and target(v) = source(T v) as an exact
    identity in generic coordinates."""
    if source.dim != target.dim:
        raise DimensionMismatch("forms of different dimension")
    n = source.dim
    matrix = T.matrix
    if len(matrix) != n or any(len(r) != n for r in matrix):
        raise DimensionMismatch("witness matrix of wrong shape")
    ctx = source.ctx
    if not isinstance(ctx, FieldContext):
        raise TypeError("isometry checking needs rational-function coefficients")
    if rank([list(r) for r in matrix]) != n:
        return False
    fresh = [f"gv{i}" for i in range(n)]
    if any(f in ctx.names for f in fresh):
        fresh = [f"gv_{i}_" for i in range(n)]
    ext = ctx.extend(fresh)
    idx = list(range(ctx.k))
    lift = lambda f: f.lift(ext, idx)
    coords = [ext.variable(f) for f in fresh]
    src = source.map_coefficients(lift, ext)
    tgt = target.map_coefficients(lift, ext)
    moved = mat_vec([[lift(c) for c in row] for row in matrix], coords, ext)
    return tgt.evaluate(coords) == src.evaluate(moved)


def check_arf_witness(u, u_prime, w: ArfWitness) -> bool:
    """u and u' differ by an Artin-Schreier value: u + u' = w^2 + w."""
    return u + u_prime == w.w * w.w + w.w


def identity_matrix(ctx, n: int):
    one, zero = ctx.one(), ctx.zero()
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def block_shear_isometry(source: QuadraticForm, ws: Sequence) -> IsometryWitness:
    """For blockwise Artin-Schreier slot rewrites: per block [a, b] the
    map (x, y) -> (x + (w/a) y, y) turns source into the form whose
    second slot is shifted by (w^2+w)/a.  ``ws`` gives one w per block
    (None to skip)."""
    ctx = source.ctx
    n = source.dim
    rows = [list(r) for r in identity_matrix(ctx, n)]
    for i, ((a, _b), w) in enumerate(zip(source.blocks, ws)):
        if w is None:
            continue
        rows[2 * i][2 * i + 1] = w / a
    return IsometryWitness(tuple(tuple(r) for r in rows))


def block_swap_isometry(ctx, nblocks: int, which: int):
    """Swap the two coordinates of one binary block: [u,v] = [v,u]."""
    n = 2 * nblocks
    rows = [list(r) for r in identity_matrix(ctx, n)]
    i = 2 * which
    rows[i][i], rows[i][i + 1] = ctx.zero(), ctx.one()
    rows[i + 1][i], rows[i + 1][i + 1] = ctx.one(), ctx.zero()
    return IsometryWitness(tuple(tuple(r) for r in rows))


# -- anisotropy over a quadratic purely inseparable extension -----------------


def aniso_over_sqrt(q: QuadraticForm, a, prover: Callable) -> Verdict:
    """Anisotropy of q over F(sqrt(a)): if <1,a>_b tensor q is proved
    anisotropic over F then q stays anisotropic over F(sqrt(a)).
    Never claims isotropy.  ``prover``: QuadraticForm -> Verdict."""
    if a.is_zero or try_sqrt(a) is not None:
        raise AIsSquare("a must not be a square")
    tensored = tensor_pfister_factor(a, q)
    if prover(tensored) is Verdict.ANISOTROPIC:
        return Verdict.ANISOTROPIC
    return Verdict.UNKNOWN


# -- bounded isotropy search ---------------------------------------------------


def _candidate_pool(ctx: FieldContext, degree: int, t_window: int, monomials=None):
    """All GF(2)-polynomial candidates over the monomial universe, as
    rational functions (negative t-powers allowed via the window)."""
    from .sampling import monomials_up_to

    if monomials is None:
        if ctx.laurent is None:
            base = monomials_up_to(ctx, degree)
            universe = [RationalFunction(Polynomial(ctx, frozenset([m])), ctx.one().num) for m in base]
        else:
            t_idx = ctx.index(ctx.laurent)
            others = tuple(i for i in range(ctx.k) if i != t_idx)
            base = monomials_up_to(ctx, degree, others)
            t = ctx.variable(ctx.laurent)
            universe = []
            for c in range(-t_window, t_window + 1):
                tc = t**c
                for m in base:
                    universe.append(
                        RationalFunction(Polynomial(ctx, frozenset([m])), ctx.one().num) * tc
                    )
    else:
        universe = list(monomials)
    if len(universe) > 22:
        raise SearchSpaceTooLarge(f"{len(universe)} candidate monomials per coordinate")
    pool = [ctx.zero()]
    for u in universe:
        pool.extend([p + u for p in pool])
    return pool


def bounded_isotropy_search(
    q: QuadraticForm,
    degree: int,
    t_window: int | None = None,
    monomials=None,
    cfg: Config = DEFAULT,
) -> IsotropyWitness | None:
    """Exhaustive witness search with polynomial coordinates of total
    degree <= degree (t-exponents within the window for Laurent bases),
    meet-in-the-middle over the block structure.  A hit verifies exactly;
    None is NOT an anisotropy proof.  Since q(c v) = c^2 q(v), restricting
    to polynomial coordinates loses no witnesses up to scaling.
    """
    ctx = q.ctx
    if not isinstance(ctx, FieldContext):
        raise TypeError("bounded search needs rational-function coefficients")
    if t_window is None:
        t_window = degree if ctx.laurent else 0
    pool = _candidate_pool(ctx, degree, t_window, monomials)
    zero = ctx.zero()

    groups = []  # per group: (positions, [(value, coords), ...])
    pos = 0
    for a, b in q.blocks:
        vals = []
        for p in pool:
            ap2 = a * p * p
            for r in pool:
                vals.append((ap2 + p * r + b * r * r, (p, r)))
        groups.append(((pos, pos + 1), vals))
        pos += 2
    for c in q.diagonal:
        vals = [(c * p * p, (p,)) for p in pool]
        groups.append(((pos,), vals))
        pos += 1

    sizes = [len(v) for _, v in groups]
    best_split, best_cost = 1, None
    for cut in range(1, len(groups)):
        left = 1
        for s in sizes[:cut]:
            left *= s
        right = 1
        for s in sizes[cut:]:
            right *= s
        cost = max(left, right)
        if best_cost is None or cost < best_cost:
            best_cost, best_split = cost, cut
    if len(groups) == 1:
        best_split, best_cost = 1, sizes[0]
    if best_cost > cfg.search_half_cap:
        raise SearchSpaceTooLarge(f"half size {best_cost} exceeds cap {cfg.search_half_cap}")

    left_groups = groups[:best_split]
    right_groups = groups[best_split:]

    def combos(gs):
        if not gs:
            yield (zero, ())
            return
        for items in itertools.product(*[vals for _, vals in gs]):
            total = zero
            coords: tuple = ()
            for value, cs in items:
                total = total + value
                coords = coords + cs
            yield (total, coords)

    left_index: dict = {}
    for value, coords in combos(left_groups):
        stored = left_index.get(value)
        # prefer a representative with nonzero coordinates, so a witness
        # whose right half vanishes is not shadowed by the trivial combo
        if stored is None or (all(c.is_zero for c in stored) and any(not c.is_zero for c in coords)):
            left_index[value] = coords
    for value, coords in combos(right_groups):
        match = left_index.get(value)
        if match is None:
            continue
        vector = match + coords
        if all(c.is_zero for c in vector):
            continue
        w = IsotropyWitness(vector)
        assert w.verify(q)
        return w
    return None
