"""Valuation-theoretic anisotropy criteria over F((t)).

The complete field F((t)) is represented through its subfield F(t): every
element these deciders touch is a rational function in the distinguished
variable t.  This is sound in both directions we use: an isotropy witness
with coordinates in F(t) is one over F((t)), and the residue criteria
prove anisotropy over all of F((t)), hence in particular over F(t).

Two criteria are implemented, both three-valued (a proof or Unknown):

* ``parity_split_anisotropy``: a form rho perp t^-1 sigma perp
  perp_k [a_k, t^-1 b_k] with quasi-unimodular pieces is anisotropic
  whenever the two residue forms ``res(rho perp <a_k>)`` and
  ``res(sigma perp <b_k>)`` are anisotropic over the residue field.

* ``residue_transfer_anisotropy``: the special case deciding
  <unit diagonal> tensor [1, a t^-1]; it only needs the residue of the
  diagonal to have full rank.

On top of these, ``prove_quadratic_pfister_anisotropic`` normalizes the
final slot of a quadratic Pfister form by Artin-Schreier rewrites
([1, u^2] = [1, u], witnessed) until the transfer criterion applies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import DEFAULT, Config
from .forms import (
    ArfWitness,
    PfisterSpec,
    QuadraticForm,
    TsAnisotropy,
    Verdict,
    check_arf_witness,
    ts_isotropy,
)
from .gf2field import FieldContext, RationalFunction, try_sqrt


class ZeroElement(ValueError):
    pass


class NonUnit(ValueError):
    pass


class NonUnitCoefficient(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


# -- valuation and residue ---------------------------------------------------


def _t_index(ctx: FieldContext) -> int:
    if ctx.laurent is None:
        raise ValueError("field context has no distinguished Laurent variable")
    return ctx.index(ctx.laurent)


def valuation(f: RationalFunction, ctx: FieldContext | None = None) -> int:
    """Exact t-adic valuation of a nonzero rational function."""
    ctx = ctx or f.ctx
    if f.is_zero:
        raise ZeroElement("valuation of zero")
    t = _t_index(ctx)
    return f.num.min_degree_in(t) - f.den.min_degree_in(t)


def residue(f: RationalFunction, ctx: FieldContext | None = None) -> RationalFunction:
    """Constant term of the power-series expansion: the value of the unit
    part at t = 0 for valuation 0, or 0 for positive valuation.  Raises
    NonUnit on negative valuation."""
    ctx = ctx or f.ctx
    if f.is_zero:
        return f
    t = _t_index(ctx)
    v = valuation(f, ctx)
    if v < 0:
        raise NonUnit(f"residue of an element of valuation {v}")
    if v > 0:
        return ctx.zero()
    num = f.num.shift(t, -f.num.min_degree_in(t))
    den = f.den.shift(t, -f.den.min_degree_in(t))
    return RationalFunction.make(num.set_var_zero(t), den.set_var_zero(t))


def is_unit(f: RationalFunction, ctx: FieldContext | None = None) -> bool:
    return not f.is_zero and valuation(f, ctx) == 0


# -- quasi-unimodular representations and residue forms -----------------------


@dataclass(frozen=True)
class QuasiUnimodularRep:
    """A quadratic form whose listed coefficients all lie in F[[t]]
    (valuation >= 0 or zero); units are flagged positionally."""

    form: QuadraticForm
    unit_flags: tuple[bool, ...]

    @staticmethod
    def from_form(q: QuadraticForm, ctx: FieldContext | None = None) -> "QuasiUnimodularRep":
        ctx = ctx or q.ctx
        flags = []
        for c in q.coefficients():
            if c.is_zero:
                flags.append(False)
            else:
                v = valuation(c, ctx)
                if v < 0:
                    raise NonUnitCoefficient(f"coefficient {c} has valuation {v}")
                flags.append(v == 0)
        return QuasiUnimodularRep(q, tuple(flags))


def residue_form(q: QuadraticForm, ctx: FieldContext | None = None) -> QuadraticForm:
    """Componentwise residues of a representation with unit-or-zero
    coefficients."""
    ctx = ctx or q.ctx

    def res(c):
        if c.is_zero:
            return c
        if valuation(c, ctx) != 0:
            raise NonUnitCoefficient(f"coefficient {c} is not a unit")
        return residue(c, ctx)

    return QuadraticForm(
        tuple((res(a), res(b)) for a, b in q.blocks),
        tuple(res(c) for c in q.diagonal),
        ctx,
    )


def _residue_anisotropic(res: QuadraticForm, cfg: Config) -> tuple[bool, dict]:
    """Prove a residue form anisotropic over the residue field; only the
    totally singular rank criterion is implemented (all uses here have
    totally singular residues)."""
    if not res.is_totally_singular:
        return False, {"reason": "mixed residue form, no criterion applies"}
    out = ts_isotropy(res, cfg)
    if isinstance(out, TsAnisotropy):
        return True, {"rank": out.rank, "residue_diagonal": [str(c) for c in res.diagonal]}
    return False, {"residue_isotropy": out.as_payload()}


# -- the anisotropy-transfer criteria -----------------------------------------


def parity_split_anisotropy(
    rho: QuadraticForm,
    sigma: QuadraticForm,
    alpha: list,
    beta: list,
    ctx: FieldContext,
    cfg: Config = DEFAULT,
):
    """Split criterion for phi = rho perp t^-1 sigma perp
    perp_k [alpha_k, t^-1 beta_k]; returns (verdict, phi, payload).

    Anisotropy of the two residue forms res(rho perp <alpha>) and
    res(sigma perp <beta>) over the residue field forces anisotropy of
    phi over F((t)).
    """
    if len(alpha) != len(beta):
        raise LengthMismatch("alpha and beta must have the same length")
    for c in list(alpha) + list(beta):
        if not is_unit(c, ctx):
            raise NonUnitCoefficient(f"{c} is not a unit")
    QuasiUnimodularRep.from_form(rho, ctx)
    QuasiUnimodularRep.from_form(sigma, ctx)

    t_inv = ctx.variable(ctx.laurent) ** -1
    phi = rho
    if sigma.dim:
        phi = phi.orth(sigma.scale(t_inv))
    blocks = tuple((a, t_inv * b) for a, b in zip(alpha, beta))
    phi = phi.orth(QuadraticForm(blocks, (), ctx))

    psi = rho.orth(QuadraticForm((), tuple(alpha), ctx))
    tau = sigma.orth(QuadraticForm((), tuple(beta), ctx))
    ok_psi, pay_psi = _residue_anisotropic(residue_form(psi, ctx), cfg)
    ok_tau, pay_tau = _residue_anisotropic(residue_form(tau, ctx), cfg)
    payload = {"first_residue": pay_psi, "second_residue": pay_tau}
    verdict = Verdict.ANISOTROPIC if (ok_psi and ok_tau) else Verdict.UNKNOWN
    return verdict, phi, payload


def residue_transfer_anisotropy(slots: list, a: RationalFunction, ctx: FieldContext, cfg: Config = DEFAULT):
    """Decide <slots>_b tensor [1, a t^-1] for unit slots and unit a;
    returns (verdict, phi, payload)."""
    for s in list(slots) + [a]:
        if not is_unit(s, ctx):
            raise NonUnit(f"{s} is not a unit")
    empty = QuadraticForm((), (), ctx)
    return parity_split_anisotropy(empty, empty, list(slots), [a / s for s in slots], ctx, cfg)


# -- quadratic Pfister driver --------------------------------------------------


def normalize_final_slot(last: RationalFunction, ctx: FieldContext):
    """Artin-Schreier reduction of the final Pfister slot: while the slot
    is a perfect square of negative valuation, replace u^2 by u
    ([1, u^2] = [1, u] via w = u, since u^2 + u = w^2 + w).  Returns the
    reduced slot and the chain of checked witnesses."""
    witnesses: list[ArfWitness] = []
    while not last.is_zero and valuation(last, ctx) < 0 and valuation(last, ctx) % 2 == 0:
        root = try_sqrt(last)
        if root is None:
            break
        w = ArfWitness(root)
        assert check_arf_witness(root, last, w)
        witnesses.append(w)
        last = root
    return last, witnesses


def prove_quadratic_pfister_anisotropic(
    spec: PfisterSpec, ctx: FieldContext, cfg: Config = DEFAULT
):
    """Best-effort anisotropy proof for a quadratic Pfister form over
    F((t)): normalize the final slot, then apply the residue-transfer
    criterion.  Returns (verdict, payload)."""
    if spec.kind != "quadratic":
        raise ValueError("quadratic Pfister spec expected")
    if ctx.laurent is None:
        return Verdict.UNKNOWN, {"reason": "no Laurent structure to exploit"}
    for s in spec.slots:
        if not is_unit(s, ctx):
            return Verdict.UNKNOWN, {"reason": f"bilinear slot {s} is not a unit"}
    last, arf_chain = normalize_final_slot(spec.last, ctx)
    payload: dict = {}
    if arf_chain:
        payload["arf_rewrites"] = [
            {"from": str(w.w * w.w), "to": str(w.w), "witness": w.as_payload()}
            for w in arf_chain
        ]
    if last.is_zero or valuation(last, ctx) != -1:
        payload["reason"] = "final slot not reducible to valuation -1"
        return Verdict.UNKNOWN, payload
    t = ctx.variable(ctx.laurent)
    unit = last * t
    verdict, phi, transfer = residue_transfer_anisotropy(
        spec.subset_products(ctx), unit, ctx, cfg
    )
    payload["transfer"] = transfer
    payload["normalized_spec"] = PfisterSpec("quadratic", spec.slots, last).describe()
    return verdict, payload


# -- generic prover used by higher layers --------------------------------------


@dataclass(frozen=True)
class AnisotropyOutcome:
    verdict: Verdict
    method: str
    payload: dict


def prove_anisotropic(form: QuadraticForm, cfg: Config = DEFAULT) -> AnisotropyOutcome:
    """Dispatch the applicable anisotropy criterion for a quadratic form.

    Totally singular forms over a rational function field are decided
    completely by the F^2-rank criterion; forms carrying a quadratic
    Pfister provenance over a Laurent context go through slot
    normalization plus residue transfer.  Everything else is Unknown.
    """
    ctx = form.ctx
    if not isinstance(ctx, FieldContext):
        return AnisotropyOutcome(Verdict.UNKNOWN, "none", {"reason": "non-rational coefficients"})
    if form.is_totally_singular:
        out = ts_isotropy(form, cfg)
        if isinstance(out, TsAnisotropy):
            return AnisotropyOutcome(Verdict.ANISOTROPIC, "squares-rank", out.as_payload())
        return AnisotropyOutcome(Verdict.ISOTROPIC, "squares-rank", out.as_payload())
    if form.pfister is not None and form.pfister.kind == "quadratic" and ctx.laurent:
        verdict, payload = prove_quadratic_pfister_anisotropic(form.pfister, ctx, cfg)
        return AnisotropyOutcome(verdict, "residue-transfer", payload)
    return AnisotropyOutcome(Verdict.UNKNOWN, "none", {"reason": "no criterion applies"})
