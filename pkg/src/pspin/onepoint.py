"""One-point correlator expansion: genus coefficients exact in p.

Expanding the single-kernel integral representation in the binomial-tail
terms turns each monomial into a Gamma value:

    int_0^inf dt t^{1/p - 1} exp(-t - sum_{r>=1} g_r y^r t^{1 - 2r/p}),
    y = c^{2/p} s^{2 + 2/p},  g_r = p(p-1)...(p-2r+1)/((2r+1)! 4^r).

The y^g coefficient is a sum over multi-indices {k_r} with sum r k_r = g:

    C_g(p) = sum prod_r (-g_r)^{k_r}/k_r! * prod_{i=1}^{K-1} (i - (2g-1)/p)
             (K = sum k_r),  times the common factor Gamma(1 - (2g-1)/p).

C_g(p) is an exact rational function of p; everything here is symbolic and
is evaluated at fixed rational p (including negative p) on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exact import DomainError, RatP, UsageError
from .twopoint import _deformation_multisets


def binomial_tail_ratp(r: int) -> RatP:
    """g_r as a rational function of symbolic p."""
    p = RatP.var()
    out = RatP.const(Fraction(1, factorial(2 * r + 1) * 4**r))
    for t in range(2 * r):
        out = out * (p - RatP.const(t))
    return out


@lru_cache(maxsize=None)
def genus_coefficient(g: int) -> RatP:
    """C_g(p): coefficient of y^g Gamma(1-(2g-1)/p) in the kernel expansion."""
    if g < 0:
        raise UsageError("genus must be >= 0")
    if g == 0:
        return RatP.const(1)
    p = RatP.var()
    total = RatP.const(0)
    for multi in _deformation_multisets(g, g):
        term = RatP.const(1)
        K = 0
        for r, k in multi.items():
            term = term * (-binomial_tail_ratp(r)) ** k
            term = term.scale(Fraction(1, factorial(k)))
            K += k
        for i in range(1, K):
            # Gamma(K + (1-2g)/p) = Gamma(1+(1-2g)/p) prod_{i=1}^{K-1} (i + (1-2g)/p)
            term = term * (RatP.const(i) - RatP.const(2 * g - 1) / p)
        total = total + term
    return total


@dataclass(frozen=True)
class OnePointTerm:
    """Genus-g term of the one-point expansion.

    coefficient: (-1)^g C_g(p) / p^g, rational in p
    gamma factor: Gamma(1 - (2g-1)/p), kept symbolic through the argument
    """

    genus: int
    coefficient: RatP

    def gamma_argument(self, p) -> Fraction:
        """Argument of the common Gamma factor at fixed rational p."""
        return 1 - Fraction(2 * self.genus - 1, 1) / Fraction(p)


def one_point_series(g_max: int) -> list[OnePointTerm]:
    """Exact genus coefficients for g = 1..g_max (symbolic in p)."""
    if g_max > 8:
        raise UsageError("one-point expansion capped at genus 8 (partition growth)")
    out = []
    p = RatP.var()
    for g in range(1, g_max + 1):
        coeff = genus_coefficient(g) / p**g
        if g % 2:
            coeff = -coeff
        out.append(OnePointTerm(g, coeff))
    return out


def admissible_one_point_label(p: int, g: int) -> tuple[int, int] | None:
    """The unique (n, j) with (p+1)(2g-1) = p n + j + 1, 0 <= j <= p-2."""
    if p < 2:
        return None
    j = (2 * g - 2) % p
    if j > p - 2:
        return None
    n = 2 * g - 1 + (2 * g - 2 - j) // p
    return (n, j)


def gamma_ratio_at(p, g: int, j: int) -> Fraction:
    """Exact Gamma(1-(2g-1)/p) / Gamma(1-(1+j)/p) at fixed rational p.

    Requires the exponent shift q = (2g-2-j)/p to be an integer; the ratio is
    then a finite product of rational factors.  A pole inside the shift
    (argument hitting a non-positive integer) raises DomainError.
    """
    p = Fraction(p)
    if p == 0:
        raise DomainError("p must be nonzero")
    qf = Fraction(2 * g - 2 - j, 1) / p
    if qf.denominator != 1:
        raise DomainError(f"label j={j} not admissible at p={p} (non-integer shift)")
    q = int(qf)
    z = 1 - Fraction(1 + j, 1) / p
    out = Fraction(1)
    if q >= 1:
        # Gamma(z - q)/Gamma(z) = 1 / prod_{t=1}^{q} (z - t)
        for t in range(1, q + 1):
            f = z - t
            if f == 0:
                raise DomainError(f"Gamma-ratio pole at p={p}, g={g}, j={j}")
            out /= f
    else:
        for t in range(0, -q):
            out *= z + t
    return out


def one_point_value(p, g: int, j: int | None = None) -> Fraction:
    """Exact <tau_{n,j}>_g at fixed rational p (analytic continuation included).

    With j omitted, the admissible spin label at integer p >= 3 is used.
    """
    pf = Fraction(p)
    if j is None:
        if pf.denominator != 1 or pf < 3:
            raise UsageError("automatic label needs integer p >= 3; pass j explicitly")
        lab = admissible_one_point_label(int(pf), g)
        if lab is None:
            # spin index would be p-1: the selection rule admits no entry
            return Fraction(0)
        _, j = lab
    term = one_point_series(g)[g - 1]
    return term.coefficient.eval(pf) * gamma_ratio_at(pf, g, j)
