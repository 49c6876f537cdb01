"""Two-point correlator expansion U(s1, s2) in fractional powers.

The rescaled integral representation

    U(s1,s2) ~ 2/((s1+s2)(p s2)^{1/p}) * int_0^inf dx sh((s1+s2)/2 (p s1)^{1/p} x)
               * Phi_1(x) * Phi_2(-a x),        a = (s1/s2)^{1/p}

with deformed kernels Phi_i = int dv exp(-v^p/p + (+-)x v - sum_r g_r eps_r(s_i) v^{p-2r}),
g_r = p(p-1)...(p-2r+1) / ((2r+1)! 4^r),  eps_r(s) = p^{2r/p-1} s^{2r(1+1/p)},
is expanded term by term.  At genus g (total degree 2g(1+1/p)) the hyperbolic
sine order l and the total deformation level rho are tied by l = 2(g-rho)+1,
and every term is a product moment M(l, D1, D2) with derivative orders
D_i = sum_r k_r (p-2r) from the deformation multi-indices.

Kernel normalization carries sqrt(p) per phi factor (one factor p per grade);
this is what makes a single calibration constant work across all p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .airy import phi_deriv_zero
from .exact import ExactScalar, ExactSum, FractionalSeries, Monomial, UsageError
from .moments import (
    AssembledGrade,
    CancellationError,
    MomentSymbol,
    _engine,
    assemble_grade,
)
from .numbers import falling

REAL = "real"
CONTOUR = "contour"


def _mode_constant(kernel_mode: str) -> Fraction:
    if kernel_mode == CONTOUR:
        return Fraction(0)
    if kernel_mode == REAL:
        return Fraction(1)
    raise UsageError(f"unknown kernel_mode {kernel_mode!r}")


def expansion_boundary_value(p: int, k: int, kernel_mode: str) -> ExactScalar:
    """Boundary value phi^{(k)}(0) in the expansion normalization.

    The expansion is normalized by the kernel moments p^{(k+1)/p-1}
    Gamma((k+1)/p) for every mode; the oscillatory p=3 normalization would
    re-scale each kernel factor and is deliberately not used here, so one
    calibration constant serves all p and both modes.  The mode enters only
    through the rewrite constant at order p-1.
    """
    if k <= p - 2:
        return phi_deriv_zero(p, k, REAL)
    m = k - (p - 1)
    if m == 0:
        return ExactScalar.from_fraction(_mode_constant(kernel_mode))
    return expansion_boundary_value(p, m - 1, kernel_mode).scale(m)


def binomial_tail_coefficient(p, r: int) -> Fraction:
    """g_r = p(p-1)...(p-2r+1) / ((2r+1)! 4^r) from the binomial expansion."""
    return falling(Fraction(p), 2 * r) / (factorial(2 * r + 1) * 4**r)


def _deformation_multisets(rho: int, rmax: int):
    """Multisets {r: k_r} with sum r k_r = rho, parts 1 <= r <= rmax."""

    def rec(remaining: int, r: int, acc: dict):
        if remaining == 0:
            yield dict(acc)
            return
        if r > rmax:
            return
        for k in range(remaining // r + 1):
            if k:
                acc[r] = k
            yield from rec(remaining - r * k, r + 1, acc)
            acc.pop(r, None)

    yield from rec(rho, 1, {})


@lru_cache(maxsize=None)
def _side_terms(p: int, rho: int) -> tuple[tuple[Fraction, int, int], ...]:
    """Deformation expansion of one kernel at level rho: (coeff, K, D) triples."""
    out = []
    for multi in _deformation_multisets(rho, p // 2):
        coeff = Fraction(1)
        K = 0
        D = 0
        for r, k in multi.items():
            coeff *= (-binomial_tail_coefficient(p, r)) ** k / factorial(k)
            K += k
            D += k * (p - 2 * r)
        out.append((coeff, K, D))
    return tuple(out)


def grade_contributions(p: int, g: int) -> list[tuple[ExactScalar, int, MomentSymbol]]:
    """All (scalar, a-power, moment symbol) contributions at genus g."""
    if g < 1:
        return []
    out: list[tuple[ExactScalar, int, MomentSymbol]] = []
    for rho in range(g + 1):
        l = 2 * (g - rho) + 1
        sinh_rational = Fraction(1, 2 ** (l - 1) * factorial(l))
        for rho1 in range(rho + 1):
            rho2 = rho - rho1
            for c1, k1, d1 in _side_terms(p, rho1):
                for c2, k2, d2 in _side_terms(p, rho2):
                    K = k1 + k2
                    base = ExactScalar.rational_power(p, Fraction(2 * g, p) - K)
                    base = base.scale(sinh_rational * c1 * c2)
                    sym = MomentSymbol(l, d1, d2, p)
                    a0 = l + 2 * rho1 * (p + 1)
                    for k in range(l):  # (1+a^p)^{l-1}
                        out.append((base.scale(comb(l - 1, k)), a0 + p * k, sym))
    return out


@lru_cache(maxsize=None)
def two_point_grade(
    p: int, g: int, kernel_mode: str = REAL, strategy: str = "side1"
) -> AssembledGrade:
    """Assembled genus-g grade; raises CancellationError on a T-type residue."""
    contribs = grade_contributions(p, g)
    return assemble_grade(contribs, _mode_constant(kernel_mode), strategy)


def grade_monomial(p: int, g: int, m: int) -> Monomial | None:
    """Monomial s1^(m/p) s2^(2g + (2g-m)/p) when both slots are fractional."""
    f1 = m % p
    f2 = (2 * g - m) % p
    if f1 == 0 or f2 == 0:
        return None
    e2_num = 2 * g * p + (2 * g - m)  # p * exponent of s2
    if m < 0 or e2_num < 0:
        return None
    return Monomial(((m // p, f1), ((e2_num - f2) // p, f2)))


@dataclass
class GradeLedger:
    """Non-extractable residues of one grade, kept for reporting."""

    discarded_boundary: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)
    constant_sector: dict[tuple, dict[int, Fraction]] = field(default_factory=dict)


def two_point_series(
    p: int,
    g_max: int,
    kernel_mode: str = REAL,
    strategy: str = "side1",
    ledgers: dict[int, GradeLedger] | None = None,
) -> FractionalSeries:
    """Exact two-point expansion through genus g_max as a FractionalSeries.

    Rewrite-constant leftovers must stay out of doubly-fractional grades;
    a violation raises CancellationError (this is a verified property, not
    an assumption).
    """
    if p < 3:
        raise UsageError("two-point expansion needs integer p >= 3")
    if g_max > 3 or (g_max > 2 and p > 3):
        # cost bound: genus 3 exact-in-a only at p=3; larger p goes through
        # the small-a route (two_point_low_orders)
        raise UsageError("exact-in-a route supports g<=3 at p=3, g<=2 for p>=4")
    cutoff = Fraction(2 * g_max * (p + 1), p)
    series = FractionalSeries(p, 2, cutoff)
    p_scalar = ExactScalar.from_fraction(p)  # sqrt(p) per kernel factor
    for g in range(1, g_max + 1):
        grade = two_point_grade(p, g, kernel_mode, strategy)
        ledger = GradeLedger()
        for (i, j), poly in grade.boundary.items():
            pair_value = (
                expansion_boundary_value(p, i, kernel_mode)
                * expansion_boundary_value(p, j, kernel_mode)
                * p_scalar
            )
            for m, frac in poly.items():
                mono = grade_monomial(p, g, m)
                coeff = grade.prefactor.scale(frac) * pair_value
                if mono is None:
                    if coeff.rational:
                        key = (i, j, m)
                        ledger.discarded_boundary[key] = frac
                    continue
                series.add_term(mono, coeff)
        for atom, poly in grade.constants.items():
            bad = {m: v for m, v in poly.items() if grade_monomial(p, g, m) is not None}
            if bad:
                raise CancellationError(
                    f"rewrite-constant residue on extractable grades at genus {g}: "
                    f"{atom} -> {bad}",
                    {atom: bad},
                )
            ledger.constant_sector[atom] = poly
        if ledgers is not None:
            ledgers[g] = ledger
    return series


# ---------------------------------------------------------------------------
# small-a route: Taylor expansion of the second kernel factor
# ---------------------------------------------------------------------------


def two_point_low_orders(
    p: int,
    g: int,
    m_max: int,
    kernel_mode: str = REAL,
) -> dict[int, ExactSum]:
    """Grade coefficients of a^m, m <= m_max, via the small-a expansion.

    The second factor is expanded as
    phi^{(D2)}(-a x) = sum_t (-a)^t/t! phi^{(D2+t)}(0) x^t, which turns every
    term into a single-kernel moment int x^{l+t} phi^{(D1)}(x) dx; those
    reduce without cycles.  Much cheaper than the exact route for large p,
    and only valid term by term in a.

    Returns {m: coefficient} for extractable m; irreducible single-kernel
    integrals must cancel from extractable powers (CancellationError else).
    """
    if m_max >= p:
        raise UsageError("small-a route restricted to a-powers below a^p")
    c0 = _mode_constant(kernel_mode)
    eng = _engine(p, c0, "side1")
    p_scalar = ExactScalar.from_fraction(p)
    sums: dict[int, ExactSum] = {}
    residues: dict[tuple[tuple, int], ExactSum] = {}
    for rho in range(g + 1):
        l = 2 * (g - rho) + 1
        if l > m_max:
            continue
        sinh_rational = Fraction(1, 2 ** (l - 1) * factorial(l))
        for rho1 in range(rho + 1):
            if rho1 and l + 2 * rho1 * (p + 1) > m_max:
                continue
            rho2 = rho - rho1
            for c1, k1, d1 in _side_terms(p, rho1):
                for c2, k2, d2 in _side_terms(p, rho2):
                    K = k1 + k2
                    base = ExactScalar.rational_power(p, Fraction(2 * g, p) - K)
                    base = base.scale(sinh_rational * c1 * c2)
                    a0 = l + 2 * rho1 * (p + 1)
                    for t in range(0, m_max - a0 + 1):
                        m = a0 + t
                        taylor = Fraction((-1) ** t, factorial(t))
                        outer = expansion_boundary_value(p, d2 + t, kernel_mode)
                        single = eng.reduce_single(1, l + t, d1)
                        for atom, coeff in single.items():
                            for shift, cf in _laurent_fractions(coeff).items():
                                mm = m + shift
                                if mm > m_max or mm < 0:
                                    continue
                                if grade_monomial(p, g, mm) is None:
                                    continue
                                scalar = base.scale(taylor * cf) * outer * p_scalar
                                if atom[0] == "sing":
                                    scalar = scalar * expansion_boundary_value(p, atom[1], kernel_mode)
                                    sums.setdefault(mm, ExactSum()).add(scalar)
                                elif atom[0] == "zdiv":
                                    # scaleless int y^k dy: zero under the scaling
                                    # regularization this route uses (the exact-in-a
                                    # route keeps them and confines them to the
                                    # discarded sectors; extractable output agrees)
                                    continue
                                else:
                                    acc = residues.setdefault((atom, mm), ExactSum())
                                    acc.add(scalar)
    leftover = {k: v for k, v in residues.items() if not v.is_zero}
    if leftover:
        raise CancellationError(
            f"irreducible single-kernel residue on extractable grades: "
            f"{sorted(leftover, key=repr)}",
            leftover,
        )
    return {m: s for m, s in sums.items() if not s.is_zero}


def _laurent_fractions(coeff) -> dict[int, Fraction]:
    from .moments import poly_coeffs

    return poly_coeffs(coeff, allow_negative=True)
