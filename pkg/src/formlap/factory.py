"""Construction of the weighted-form operators, two independent ways.

The definition engine runs the tractor pipeline: embed the generator
with the splitting operator, apply the coupled box ell times, read off
the middle slot (the operator itself) and the bottom slot (its
companion of one degree lower).  The closed-form builders write down
the order-one operator, the commuting second-order factor lists, and
the second-order reductions directly from their explicit formulas.
The two routes share nothing above the expression algebra, so their
agreement is evidence rather than tautology.

Conventions: the operator of order 2*ell acts on k-forms of weight
w = k + ell - n/2, its factor list multiplies left to right, and the
generic second-order factor with index i is

    (w-i+1)(w-i+n-2k) E + (w-i)(w-i+n-2k+1) F
        - (2/n)(w-i)(w-i+1)(w-i+n-2k)(w-i+n-2k+1) J.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coeffring import RatJ, jpow, ratj
from .forms import CD, D, FormAlgebraError, FormContext, FormExpr, OperatorPoly, to_operator_poly
from .tractor import (InternalConsistencyError, TractorFormExpr, apply_Mstar, apply_box,
                      assert_top_slots_vanish, extract_slots, make_M)


def operator_weight(n: int, k: int, ell: int) -> Fraction:
    """Domain weight w = k + ell - n/2 of the order-2*ell operator."""
    return Fraction(k) + ell - Fraction(n, 2)


def _check_params(n: int, k: int, ell: int) -> None:
    if n < 3:
        raise FormAlgebraError(f"n = {n} < 3")
    if not 1 <= k <= n // 2:
        raise FormAlgebraError(f"k = {k} outside 1..floor(n/2) for n = {n}")
    if ell < 1:
        raise FormAlgebraError(f"ell = {ell} < 1")


# -- definition engine ----------------------------------------------------


@lru_cache(maxsize=None)
def run_pipeline(n: int, k: int, ell: int) -> TractorFormExpr:
    """Box**ell applied to the embedded generator at the operator weight."""
    _check_params(n, k, ell)
    ctx = FormContext(n, k, operator_weight(n, k, ell))
    t = make_M(ctx)
    for _ in range(ell):
        t = apply_box(t)
    return t


@lru_cache(maxsize=None)
def build_L_definition(n: int, k: int, ell: int) -> OperatorPoly:
    """The order-2*ell operator from the tractor definition.

    Asserts the structural identities along the way: the top and second
    slots vanish at this weight, and the middle slot expands into E**p,
    F**q and constant monomials only.
    """
    t = run_pipeline(n, k, ell)
    assert_top_slots_vanish(t)
    l_expr, _ = extract_slots(t)
    return to_operator_poly(l_expr.shift_weight(-ell))


def build_G(n: int, k: int, ell: int) -> FormExpr:
    """The degree-(k-1) companion operator from the same pipeline."""
    t = run_pipeline(n, k, ell)
    assert_top_slots_vanish(t)
    _, g_expr = extract_slots(t)
    return g_expr.shift_weight(-ell)


def build_L_and_G(n: int, k: int, ell: int) -> tuple[OperatorPoly, FormExpr]:
    t = run_pipeline(n, k, ell)
    assert_top_slots_vanish(t)
    l_expr, g_expr = extract_slots(t)
    return to_operator_poly(l_expr.shift_weight(-ell)), g_expr.shift_weight(-ell)


# -- closed forms ----------------------------------------------------------


def closed_L1(n: int, k: int) -> OperatorPoly:
    """Order-one closed form at w = k + 1 - n/2.

    (n/2-k-1) E + (n/2-k+1) F + (2/n)(n/2-k-1)(n/2-k+1)(n/2-k) J.
    """
    _check_params(n, k, 1)
    h = Fraction(n, 2) - k
    return OperatorPoly.make(
        n, k,
        jpow(1, Fraction(2, n) * (h - 1) * (h + 1) * h),
        (ratj(h - 1),), (ratj(h + 1),),
    )


def closed_G1(n: int, k: int) -> FormExpr:
    """Order-one closed form of the companion: delta [E + (2/n)(n/2-k+1)(n/2-k) J]."""
    _check_params(n, k, 1)
    ctx = FormContext(n, k, operator_weight(n, k, 1))
    h = Fraction(n, 2) - k
    f = FormExpr.generator(ctx)
    inner = f.apply_word(D + CD) + f.times_J(1, Fraction(2, n) * (h + 1) * h)
    return inner.apply_letter(CD)


def yam_factor(n: int, k: int, w: Fraction, i: int) -> OperatorPoly:
    """Generic second-order factor with index i at operator weight w."""
    a = (w - i + 1) * (w - i + n - 2 * k)
    b = (w - i) * (w - i + n - 2 * k + 1)
    c = Fraction(-2, n) * a * b
    return OperatorPoly.make(n, k, jpow(1, c), (ratj(a),), (ratj(b),))


def sqyam_factors(n: int, k: int) -> tuple[OperatorPoly, OperatorPoly]:
    """The two factors replacing the degenerate indices when w >= 1 and k < n/2.

    [(n/2-k-1/2) E + (n/2-k+1/2) F] and [E - F + (4/n)(n/2-k) J].
    """
    h = Fraction(n, 2) - k
    first = OperatorPoly.linear(n, k, ratj(h - Fraction(1, 2)), ratj(h + Fraction(1, 2)))
    second = OperatorPoly.make(n, k, jpow(1, Fraction(4, n) * h), (ratj(1),), (ratj(-1),))
    return first, second


@dataclass(frozen=True)
class FactoredOperator:
    """Ordered commuting second-order factor list with its provenance."""

    n: int
    k: int
    ell: int
    factors: tuple[OperatorPoly, ...]
    provenance: str  # "definition-engine" | "theorem-main" | "theorem-L1"

    def product(self) -> OperatorPoly:
        out = OperatorPoly.make(self.n, self.k, 1)
        for f in self.factors:
            out = out * f
        return out

    def validate(self) -> None:
        if len(self.factors) != self.ell:
            raise InternalConsistencyError(
                f"{len(self.factors)} factors for order parameter {self.ell}"
            )
        for f in self.factors:
            if len(f.e_coeffs) > 1 or len(f.f_coeffs) > 1:
                raise InternalConsistencyError("factor of degree > 1 in E, F")
            if f.e_coeff(1).as_rational() is None or f.f_coeff(1).as_rational() is None:
                raise InternalConsistencyError("factor E/F coefficient is not rational")
            if not f.const.is_zero and f.const.monomial_degree() != 1:
                raise InternalConsistencyError("factor constant is not a rational multiple of J")


def closed_factors(n: int, k: int, ell: int) -> FactoredOperator:
    """Factor list of the order-2*ell operator, by the four-case closed form.

    Even n, k = n/2:        (E - F) then generic factors i = 1..ell-1.
    Even n, w <= 0, k<n/2:  generic factors i = 1..ell.
    Even n, w >= 1, k<n/2:  the two degenerate-weight factors, then the
                            generic factors with i = w, w+1 removed.
    Odd n:                  generic factors i = 1..ell.
    """
    _check_params(n, k, ell)
    w = operator_weight(n, k, ell)
    phi = range(1, ell + 1)
    if n % 2 == 0 and 2 * k == n:
        factors = [OperatorPoly.linear(n, k, 1, -1)]
        factors += [yam_factor(n, k, w, i) for i in phi if i != ell]
    elif n % 2 == 1 or w <= 0:
        factors = [yam_factor(n, k, w, i) for i in phi]
    else:
        skip = {int(w), int(w) + 1}
        factors = list(sqyam_factors(n, k))
        factors += [yam_factor(n, k, w, i) for i in phi if i not in skip]
    out = FactoredOperator(n, k, ell, tuple(factors), "theorem-main")
    out.validate()
    return out


# -- second-order reductions ------------------------------------------------


@lru_cache(maxsize=None)
def build_tmodbox(n: int, k: int, w: Fraction | int, p: int) -> OperatorPoly:
    """M* box**p M at generator weight w, from the tractor pipeline."""
    if p < 1:
        raise FormAlgebraError(f"p = {p} < 1")
    ctx = FormContext(n, k, Fraction(w))
    t = make_M(ctx)
    for _ in range(p):
        t = apply_box(t)
    return to_operator_poly(apply_Mstar(t))


def closed_tmodbox1(n: int, k: int, w: Fraction | int) -> OperatorPoly:
    """Closed form of the p = 1 reduction:

    -(1/k) [ w(n+w-2k-1) E + (w-1)(n+w-2k) F
             - (2/n) w(w-1)(n+w-2k)(n+w-2k-1) J ].
    """
    w = Fraction(w)
    s = Fraction(-1, k)
    a = w * (n + w - 2 * k - 1)
    b = (w - 1) * (n + w - 2 * k)
    c = Fraction(-2, n) * w * (w - 1) * (n + w - 2 * k) * (n + w - 2 * k - 1)
    return OperatorPoly.make(n, k, jpow(1, s * c), (ratj(s * a),), (ratj(s * b),))


def closed_tmodbox2(n: int, k: int, w: Fraction | int) -> OperatorPoly:
    """Closed form of the p = 2 reduction at arbitrary weight."""
    w = Fraction(w)
    m = n + w - 2 * k
    s = Fraction(-1, k)
    e2 = w * (m - 2)
    f2 = (w - 2) * m
    e1 = Fraction(-2, n) * w * (m - 2) * ((w - 1) * m + (w - 2) * (m - 1))
    f1 = Fraction(-2, n) * (w - 2) * m * ((w - 1) * (m - 2) + w * (m - 1))
    c0 = Fraction(4, n * n) * w * (w - 1) * (w - 2) * m * (m - 1) * (m - 2)
    return OperatorPoly.make(
        n, k, jpow(2, s * c0),
        (jpow(1, s * e1), ratj(s * e2)),
        (jpow(1, s * f1), ratj(s * f2)),
    )


def closed_tmodbox2_w1(n: int, k: int) -> OperatorPoly:
    """Factored closed form of the p = 2 reduction on weight-1 forms:

    -(2/k) [ (n/2-k-1/2) E + (n/2-k+1/2) F ] [ E - F + (4/n)(n/2-k) J ].
    """
    first, second = sqyam_factors(n, k)
    return (first * second).scale(Fraction(-2, k))
