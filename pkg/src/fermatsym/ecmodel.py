"""Weierstrass models over Z: invariants, coordinate changes, minimal models.

This module is the oracle layer: curve-database entries and valuation
profiles are validated against it.  Minimality at 2 and 3 is established by
a bounded exhaustive search over coordinate changes rather than Tate's
algorithm; correctness is easy to argue and the inputs are tiny.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

from .ntkernel import factor_small, valuation


class DegenerateModelError(Exception):
    """The coefficients define a singular cubic (discriminant zero)."""


class NonIntegralTransformError(Exception):
    """A coordinate change produced a non-integral coefficient."""


@dataclass(frozen=True)
class WeierstrassModel:
    """Integral model y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self) -> str:
        return f"[{self.a1},{self.a2},{self.a3},{self.a4},{self.a6}]"


@dataclass(frozen=True)
class Invariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    delta: int
    j_num: int
    j_den: int


class ReductionKind(Enum):
    GOOD = "good"
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class ReductionType:
    kind: ReductionKind
    potentially_good: bool


def invariants(model: WeierstrassModel) -> Invariants:
    """Standard b-, c- and discriminant invariants, plus j in lowest terms."""
    a1, a2, a3, a4, a6 = model.coefficients()
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    delta = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if delta == 0:
        raise DegenerateModelError(f"model {model} has discriminant 0")
    num, den = c4**3, delta
    g = gcd(num, den)
    if g:
        num, den = num // g, den // g
    if den < 0:
        num, den = -num, -den
    return Invariants(b2, b4, b6, b8, c4, c6, delta, num, den)


def discriminant(model: WeierstrassModel) -> int:
    return invariants(model).delta


def transform(model: WeierstrassModel, u: int, r: int, s: int, t: int) -> WeierstrassModel:
    """Coordinate change x = u^2 x' + r, y = u^3 y' + u^2 s x' + t.

    Divides the discriminant by u^12; raises if any new coefficient is not
    an integer.
    """
    if u == 0:
        raise ValueError("transform requires u != 0")
    a1, a2, a3, a4, a6 = model.coefficients()
    numerators = (
        (a1 + 2 * s, u),
        (a2 - s * a1 + 3 * r - s * s, u * u),
        (a3 + r * a1 + 2 * t, u**3),
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t, u**4),
        (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1, u**6),
    )
    coeffs = []
    for i, (num, den) in enumerate(numerators):
        q, rem = divmod(num, den)
        if rem != 0:
            raise NonIntegralTransformError(
                f"a{(1, 2, 3, 4, 6)[i]} not integral under (u,r,s,t)=({u},{r},{s},{t})"
            )
        coeffs.append(q)
    return WeierstrassModel(*coeffs)


def inverse_transform(model: WeierstrassModel, u: int, r: int, s: int, t: int) -> WeierstrassModel:
    """Undo ``transform`` with the same parameters (multiplies delta by u^12).

    Always integral for integral inputs, so this is how test fixtures build
    non-minimal models.
    """
    if u == 0:
        raise ValueError("inverse_transform requires u != 0")
    a1p, a2p, a3p, a4p, a6p = model.coefficients()
    a1 = u * a1p - 2 * s
    a2 = u * u * a2p + s * a1 - 3 * r + s * s
    a3 = u**3 * a3p - r * a1 - 2 * t
    a4 = u**4 * a4p + s * a3 - 2 * r * a2 + (t + r * s) * a1 - 3 * r * r + 2 * s * t
    a6 = u**6 * a6p - r * a4 - r * r * a2 - r**3 + t * a3 + t * t + r * t * a1
    return WeierstrassModel(a1, a2, a3, a4, a6)


def _reduction_step(model: WeierstrassModel, u: int) -> WeierstrassModel | None:
    """An integral model with delta/u^12, if one exists.

    Searches r mod u^2, s mod u, t mod u^3; modulo post-composition with
    integral unimodular changes this covers every candidate change of
    coordinates with scale factor u.
    """
    a1, a2, a3 = model.a1, model.a2, model.a3
    u2, u3 = u * u, u**3
    for s in range(u):
        if (a1 + 2 * s) % u != 0:
            continue
        for r in range(u2):
            if (a2 - s * a1 + 3 * r - s * s) % u2 != 0:
                continue
            for t in range(u3):
                if (a3 + r * a1 + 2 * t) % u3 != 0:
                    continue
                try:
                    return transform(model, u, r, s, t)
                except NonIntegralTransformError:
                    continue
    return None


def _reduce_unimodular(model: WeierstrassModel) -> WeierstrassModel:
    """Normalize to a1, a3 in {0,1} and a2 in {-1,0,1} (u = 1 changes only)."""
    s = -((model.a1 - model.a1 % 2) // 2)
    m = transform(model, 1, 0, s, 0)
    r = -((m.a2 - ((m.a2 + 1) % 3 - 1)) // 3)
    m = transform(m, 1, r, 0, 0)
    t = -((m.a3 - m.a3 % 2) // 2)
    return transform(m, 1, 0, 0, t)


def minimal_model(model: WeierstrassModel) -> tuple[WeierstrassModel, dict[int, int]]:
    """A global minimal model and the valuations of its discriminant.

    The result is put in the standard reduced form (a1, a3 in {0,1},
    a2 in {-1,0,1}), which makes the operation idempotent.
    """
    inv = invariants(model)  # validates delta != 0
    current = model
    delta = inv.delta
    while True:
        fac = factor_small(delta)
        reduced = False
        for ell, e in fac.factors.items():
            # scale factors ell^k with 12k <= v_ell(delta), single steps first
            k = 1
            while 12 * k <= e and not reduced:
                smaller = _reduction_step(current, ell**k)
                if smaller is not None:
                    current = smaller
                    delta = invariants(current).delta
                    reduced = True
                k += 1
            if reduced:
                break
        if not reduced:
            break
    current = _reduce_unimodular(current)
    delta = invariants(current).delta
    vals = {p: e for p, e in factor_small(delta).factors.items()}
    return current, vals


def reduction_type(model: WeierstrassModel, ell: int) -> ReductionType:
    """Classify reduction at ell for a model that is minimal at ell."""
    inv = invariants(model)
    v_delta = valuation(inv.delta, ell)
    if v_delta == 0:
        return ReductionType(ReductionKind.GOOD, potentially_good=True)
    v_c4 = valuation(inv.c4, ell) if inv.c4 != 0 else None
    pot_good = inv.j_den % ell != 0
    if v_c4 == 0:
        return ReductionType(ReductionKind.MULTIPLICATIVE, potentially_good=pot_good)
    return ReductionType(ReductionKind.ADDITIVE, potentially_good=pot_good)
