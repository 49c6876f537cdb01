"""Exact scalar arithmetic: rationals times pi powers, radicals and Gamma tokens.

The coefficient domain used throughout the engine is

    rational * pi^k * prod_q prime_q^{e_q} * prod_a Gamma(a)^{m_a}

with exact ``Fraction`` arithmetic everywhere.  Canonicalization rules:

* Gamma arguments are shifted into (0, 1] via the recurrence
  Gamma(z) = (z-1) Gamma(z-1); Gamma at non-positive integers is rejected.
* Arguments with denominator 3, 4 or 6 and value > 1/2 are eliminated with
  the reflection identity Gamma(q)Gamma(1-q) = pi/sin(pi q), whose sine is a
  rational multiple of a single square root for those denominators.  Pairs
  Gamma(1/2)^2 collapse to pi.  Other arguments stay as opaque tokens and
  compare structurally.
* Radicals are stored as prime -> exponent with exponents in (0, 1), so
  4^(1/4) and 2^(1/2) normalize identically.

Two scalars are equal iff their canonical forms coincide; the numeric value
is preserved by construction (tested against an mpmath oracle).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class UsageError(ValueError):
    """API misuse: incompatible operands or invalid configuration."""


class PoleError(DomainError):
    """Evaluation at a pole; carries the pole order."""

    def __init__(self, message: str, order: int):
        super().__init__(message)
        self.order = order


# ---------------------------------------------------------------------------
# prime factorization of small integers (bases of radicals are tiny here)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    if n <= 0:
        raise DomainError(f"cannot factor non-positive integer {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


# reflection sines: sin(pi*q) for q with denominator in {2,3,4,6}, q in (0,1)
# expressed as (rational, sqrt radicand): value = rational * sqrt(radicand)
def _sin_pi(q: Fraction) -> tuple[Fraction, int]:
    """sin(pi q) = rat * sqrt(rad) for q in (0,1) with denominator 2,3,4,6."""
    table = {
        Fraction(1, 2): (Fraction(1), 1),
        Fraction(1, 3): (Fraction(1, 2), 3),
        Fraction(2, 3): (Fraction(1, 2), 3),
        Fraction(1, 4): (Fraction(1, 2), 2),
        Fraction(3, 4): (Fraction(1, 2), 2),
        Fraction(1, 6): (Fraction(1, 2), 1),
        Fraction(5, 6): (Fraction(1, 2), 1),
    }
    return table[q]


@dataclass(frozen=True)
class ExactScalar:
    """Canonical exact coefficient. Immutable; safe to share."""

    rational: Fraction = Fraction(0)
    pi_pow: int = 0
    radical: tuple[tuple[int, Fraction], ...] = ()
    gammas: tuple[tuple[Fraction, int], ...] = ()

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "ExactScalar":
        return ExactScalar(Fraction(0))

    @staticmethod
    def one() -> "ExactScalar":
        return ExactScalar(Fraction(1))

    @staticmethod
    def from_fraction(r) -> "ExactScalar":
        return ExactScalar(Fraction(r))

    @staticmethod
    def pi(k: int = 1) -> "ExactScalar":
        return ExactScalar(Fraction(1), pi_pow=k)

    @staticmethod
    def sqrt(r) -> "ExactScalar":
        """sqrt of a positive rational."""
        return ExactScalar.rational_power(r, Fraction(1, 2))

    @staticmethod
    def rational_power(base, exp) -> "ExactScalar":
        """base^exp for positive rational base and rational exp, canonicalized."""
        b = Fraction(base)
        e = Fraction(exp)
        if b <= 0:
            if b != 0 and e.denominator == 1:
                return ExactScalar(b ** int(e))
            raise DomainError(f"fractional power of non-positive base {b}")
        rat = Fraction(1)
        rad: dict[int, Fraction] = {}
        for prime, mult in list(_factorize(b.numerator)) + [
            (q, -m) for q, m in _factorize(b.denominator)
        ]:
            pe = e * mult
            whole = pe.numerator // pe.denominator
            frac = pe - whole
            rat *= Fraction(prime) ** whole
            if frac:
                rad[prime] = rad.get(prime, Fraction(0)) + frac
        extra, radical = _norm_radical(rad, rat)
        return ExactScalar(extra.rational, radical=radical)

    @staticmethod
    def gamma(arg, mult: int = 1) -> "ExactScalar":
        """Gamma(arg)^mult with the argument shifted into (0, 1]."""
        a = Fraction(arg)
        if a.denominator == 1 and a <= 0:
            raise DomainError(f"Gamma pole at non-positive integer {a}")
        rat = Fraction(1)
        while a > 1:
            a -= 1
            rat *= a
        while a <= 0:
            rat /= a
            a += 1
        scalar = ExactScalar(rat**mult)
        if a != 1:
            scalar = scalar * ExactScalar(
                Fraction(1), gammas=((a, mult),)
            )._reflect()
        return scalar

    # -- canonicalization helpers -------------------------------------------

    def _reflect(self) -> "ExactScalar":
        """Apply reflection normalization; idempotent."""
        rat = self.rational
        pi_pow = self.pi_pow
        rad = dict(self.radical)
        gam: dict[Fraction, int] = {}
        for q, m in self.gammas:
            if m == 0:
                continue
            if q.denominator in (3, 4, 6) and q > Fraction(1, 2):
                # Gamma(q)^m -> [pi / (sin(pi q') Gamma(q'))]^m, q' = 1-q
                qp = 1 - q
                s_rat, s_rad = _sin_pi(qp)
                pi_pow += m
                rat /= s_rat**m
                if s_rad != 1:
                    for prime, k in _factorize(s_rad):
                        e = rad.get(prime, Fraction(0)) - Fraction(m * k, 2)
                        rad[prime] = e
                gam[qp] = gam.get(qp, 0) - m
            else:
                gam[q] = gam.get(q, 0) + m
        # collapse Gamma(1/2) pairs into pi
        half = Fraction(1, 2)
        if half in gam:
            m = gam[half]
            pairs = m // 2 if m > 0 else -((-m) // 2)
            pi_pow += pairs
            gam[half] = m - 2 * pairs
        extra, radical = _norm_radical(rad, Fraction(1))
        rat *= extra.rational
        gammas = tuple(sorted((q, m) for q, m in gam.items() if m != 0))
        return ExactScalar(rat, pi_pow, radical, gammas)

    def _canon(self) -> "ExactScalar":
        if self.rational == 0:
            return ExactScalar.zero()
        return self._reflect()

    # -- arithmetic ----------------------------------------------------------

    def __mul__(self, other: "ExactScalar") -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            return NotImplemented
        rat = self.rational * other.rational
        if rat == 0:
            return ExactScalar.zero()
        rad: dict[int, Fraction] = dict(self.radical)
        for prime, e in other.radical:
            rad[prime] = rad.get(prime, Fraction(0)) + e
        extra, radical = _norm_radical(rad, Fraction(1))
        gam: dict[Fraction, int] = dict(self.gammas)
        for q, m in other.gammas:
            gam[q] = gam.get(q, 0) + m
        return ExactScalar(
            rat * extra.rational,
            self.pi_pow + other.pi_pow,
            radical,
            tuple(sorted((q, m) for q, m in gam.items() if m != 0)),
        )._canon()

    def __pow__(self, k: int) -> "ExactScalar":
        if k == 0:
            return ExactScalar.one()
        if k < 0:
            return self.inverse() ** (-k)
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def inverse(self) -> "ExactScalar":
        if self.rational == 0:
            raise ZeroDivisionError("inverse of zero ExactScalar")
        return ExactScalar(
            1 / self.rational,
            -self.pi_pow,
            tuple((p, -e) for p, e in self.radical),
            tuple((q, -m) for q, m in self.gammas),
        )._canon()

    def __truediv__(self, other: "ExactScalar") -> "ExactScalar":
        return self * other.inverse()

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.rational, self.pi_pow, self.radical, self.gammas)

    def scale(self, r) -> "ExactScalar":
        r = Fraction(r)
        if r == 0:
            return ExactScalar.zero()
        return ExactScalar(self.rational * r, self.pi_pow, self.radical, self.gammas)

    def proportional_ratio(self, other: "ExactScalar") -> Optional[Fraction]:
        """self / other when the quotient is a pure rational, else None."""
        if other.rational == 0:
            return None
        if (
            self.pi_pow == other.pi_pow
            and self.radical == other.radical
            and self.gammas == other.gammas
        ):
            return self.rational / other.rational
        if self.rational == 0:
            return Fraction(0)
        return None

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if other.rational == 0:
            return self
        if self.rational == 0:
            return other
        ratio = self.proportional_ratio(other)
        if ratio is None:
            raise UsageError(
                f"cannot add non-proportional exact scalars {self} and {other}"
            )
        return other.scale(ratio + 1)

    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        return self + (-other)

    # -- predicates / conversions --------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.pi_pow == 0 and not self.radical and not self.gammas

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise UsageError(f"{self} is not a pure rational")
        return self.rational

    def numeric(self, prec: int = 50):
        """High-precision numeric value via mpmath."""
        import mpmath

        with mpmath.workdps(prec):
            v = mpmath.mpf(self.rational.numerator) / self.rational.denominator
            if self.pi_pow:
                v *= mpmath.pi**self.pi_pow
            for prime, e in self.radical:
                v *= mpmath.power(prime, mpmath.mpf(e.numerator) / e.denominator)
            for q, m in self.gammas:
                v *= mpmath.gamma(mpmath.mpf(q.numerator) / q.denominator) ** m
            return v

    def __float__(self) -> float:
        return float(self.numeric(30))

    # -- rendering ------------------------------------------------------------

    def render(self) -> str:
        """Canonical text rendering, stable for golden files."""
        if self.rational == 0:
            return "0"
        sign = "-" if self.rational < 0 else ""
        r = abs(self.rational)
        parts = [f"{sign}{r.numerator}" + (f"/{r.denominator}" if r.denominator != 1 else "")]
        if self.pi_pow:
            parts.append("pi" if self.pi_pow == 1 else f"pi^{self.pi_pow}")
        sqrt_rad = 1
        for prime, e in self.radical:
            if e == Fraction(1, 2):
                sqrt_rad *= prime
            else:
                parts.append(f"{prime}^({e.numerator}/{e.denominator})")
        if sqrt_rad != 1:
            parts.insert(1 + (1 if self.pi_pow else 0), f"sqrt({sqrt_rad})")
        for q, m in self.gammas:
            token = f"Gamma({q.numerator}/{q.denominator})"
            parts.append(token if m == 1 else f"{token}^{m}")
        return " * ".join(parts)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.render()


def _norm_radical(
    rad: dict[int, Fraction], rat: Fraction
) -> tuple["ExactScalar", tuple[tuple[int, Fraction], ...]]:
    """Fold integer parts of radical exponents into a rational multiplier."""
    out = {}
    mult = rat
    for prime, e in rad.items():
        whole = e.numerator // e.denominator
        frac = e - whole
        mult *= Fraction(prime) ** whole
        if frac:
            out[prime] = frac
    return ExactScalar(mult), tuple(sorted(out.items()))


ES = ExactScalar


class ExactSum:
    """Small formal sum of pairwise non-proportional ExactScalars.

    Grade coefficients in expansions are usually a single surd class; mixed
    classes appear only in discarded sectors, so the list stays tiny.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[ExactScalar] = ()):
        self.terms: list[ExactScalar] = []
        for t in terms:
            self.add(t)

    def add(self, scalar: ExactScalar) -> None:
        if scalar.rational == 0:
            return
        for i, t in enumerate(self.terms):
            if scalar.proportional_ratio(t) is not None:
                merged = t + scalar
                if merged.rational == 0:
                    del self.terms[i]
                else:
                    self.terms[i] = merged
                return
        self.terms.append(scalar)

    def __iadd__(self, other: "ExactSum") -> "ExactSum":
        for t in other.terms:
            self.add(t)
        return self

    def scaled(self, scalar: ExactScalar) -> "ExactSum":
        return ExactSum(t * scalar for t in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def single(self) -> ExactScalar:
        if not self.terms:
            return ExactScalar.zero()
        if len(self.terms) > 1:
            raise UsageError(f"sum has {len(self.terms)} surd classes: {self}")
        return self.terms[0]

    def numeric(self, prec: int = 50):
        import mpmath

        with mpmath.workdps(prec):
            return mpmath.fsum(t.numeric(prec) for t in self.terms)

    def __iter__(self) -> Iterator[ExactScalar]:
        return iter(self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(t.render() for t in self.terms)

    def __str__(self) -> str:  # pragma: no cover
        return self.render()


def gamma_normalize(x: ExactScalar) -> ExactScalar:
    """Canonicalize an exact scalar (argument shifts + reflection pairs).

    Idempotent; preserves the numeric value exactly.  Construction already
    canonicalizes, so this re-runs the pass for externally built objects.
    """
    for q, _ in x.gammas:
        if q.denominator == 1 and q <= 0:
            raise DomainError(f"Gamma pole at {q}")
    return x._canon()


# ---------------------------------------------------------------------------
# Laurent polynomials and rational functions in a formal variable
# ---------------------------------------------------------------------------

from sympy import QQ  # noqa: E402
from sympy.polys.fields import field as _sym_field  # noqa: E402

_FIELD_P, P_VAR = _sym_field("p", QQ)
_FIELD_A, A_VAR = _sym_field("a", QQ)


def _to_qq(r: Fraction):
    return QQ(r.numerator, r.denominator)


def _from_qq(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class LaurentP:
    """Laurent polynomial in p with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[dict[int, Fraction]] = None):
        self.coeffs: dict[int, Fraction] = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c:
                    self.coeffs[int(e)] = c

    @staticmethod
    def const(r) -> "LaurentP":
        return LaurentP({0: Fraction(r)})

    @staticmethod
    def var(e: int = 1) -> "LaurentP":
        return LaurentP({e: Fraction(1)})

    def __add__(self, other: "LaurentP") -> "LaurentP":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentP(out)

    def __neg__(self) -> "LaurentP":
        return LaurentP({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentP") -> "LaurentP":
        return self + (-other)

    def __mul__(self, other: "LaurentP") -> "LaurentP":
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentP(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentP) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def eval(self, p) -> Fraction:
        p = Fraction(p)
        if p == 0 and any(e < 0 for e in self.coeffs):
            raise PoleError("Laurent polynomial has a pole at p=0", order=-min(self.coeffs))
        return sum((c * p**e for e, c in self.coeffs.items()), Fraction(0))

    def degree(self) -> int:
        return max(self.coeffs, default=0)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mono = "" if e == 0 else ("p" if e == 1 else f"p^{e}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not bits:
                bits.append(body if c > 0 else f"-{body}")
            else:
                bits.append(("+ " if c > 0 else "- ") + body)
        return " ".join(bits)


class RatP:
    """Rational function of p with exact arithmetic (LaurentP ratio)."""

    __slots__ = ("_el",)

    def __init__(self, el):
        self._el = el

    # constructors
    @staticmethod
    def const(r) -> "RatP":
        r = Fraction(r)
        return RatP(_FIELD_P.ground_new(_to_qq(r)))

    @staticmethod
    def var() -> "RatP":
        return RatP(P_VAR)

    @staticmethod
    def from_laurent(num: LaurentP, den: Optional[LaurentP] = None) -> "RatP":
        def build(lp: LaurentP):
            shift = min((e for e in lp.coeffs), default=0)
            el = _FIELD_P.zero
            for e, c in lp.coeffs.items():
                el = el + P_VAR ** (e - min(shift, 0)) * _to_qq(c)
            return el, min(shift, 0)

        n_el, n_sh = build(num)
        if den is None:
            d_el, d_sh = _FIELD_P.one, 0
        else:
            d_el, d_sh = build(den)
        el = n_el / d_el
        sh = n_sh - d_sh
        if sh > 0:
            el = el * P_VAR**sh
        elif sh < 0:
            el = el / P_VAR ** (-sh)
        return RatP(el)

    def __add__(self, other: "RatP") -> "RatP":
        return RatP(self._el + other._el)

    def __sub__(self, other: "RatP") -> "RatP":
        return RatP(self._el - other._el)

    def __neg__(self) -> "RatP":
        return RatP(-self._el)

    def __mul__(self, other: "RatP") -> "RatP":
        return RatP(self._el * other._el)

    def __truediv__(self, other: "RatP") -> "RatP":
        return RatP(self._el / other._el)

    def __pow__(self, k: int) -> "RatP":
        return RatP(self._el**k)

    def scale(self, r) -> "RatP":
        return RatP(self._el * _to_qq(Fraction(r)))

    def __eq__(self, other) -> bool:
        return isinstance(other, RatP) and self._el == other._el

    def __hash__(self):
        return hash(self._el)

    @property
    def is_zero(self) -> bool:
        return not self._el

    def eval(self, p) -> Fraction:
        """Exact evaluation at a nonzero rational p; PoleError at poles."""
        p = Fraction(p)
        pq = _to_qq(p)
        den = self._el.denom.evaluate(0, pq)
        num = self._el.numer.evaluate(0, pq)
        if den == 0:
            gen = self._el.field.ring.gens[0]
            d = self._el.denom
            order = 0
            while d.evaluate(0, pq) == 0:
                d = d.quo(gen - pq)
                order += 1
            n = self._el.numer
            while order > 0 and n.evaluate(0, pq) == 0:
                n = n.quo(gen - pq)
                order -= 1
            if order > 0:
                raise PoleError(f"pole of order {order} at p={p}", order=order)
            # removable singularity
            return _from_qq(n.evaluate(0, pq)) / _from_qq(d.evaluate(0, pq))
        return _from_qq(num) / _from_qq(den)

    def leading(self) -> tuple[int, Fraction]:
        """(degree, coefficient) of the leading p-power as p -> infinity."""
        n, d = self._el.numer, self._el.denom
        if not n:
            return (0, Fraction(0))

        def lead_term(poly):
            (e,), c = max(poly.terms(), key=lambda t: t[0][0])
            return e, _from_qq(c)

        ne, nc = lead_term(n)
        de, dc = lead_term(d)
        return ne - de, nc / dc

    def numer_denom_laurent(self) -> tuple[LaurentP, LaurentP]:
        """Numerator/denominator as LaurentP, scaled to integer coefficients."""
        import math

        def conv(poly) -> LaurentP:
            return LaurentP({e[0]: _from_qq(c) for e, c in poly.terms()})

        num, den = conv(self._el.numer), conv(self._el.denom)
        lcm = 1
        for c in list(num.coeffs.values()) + list(den.coeffs.values()):
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        scale = LaurentP.const(lcm)
        return num * scale, den * scale

    def __str__(self) -> str:
        return str(self._el)


# ---------------------------------------------------------------------------
# fractional-power formal series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """prod_i s_i^(m_i + f_i/p), one (m, f) pair per marked point, 0 <= f < p."""

    slots: tuple[tuple[int, int], ...]

    def total_degree(self, p: int) -> Fraction:
        return sum((Fraction(m) + Fraction(f, p) for m, f in self.slots), Fraction(0))

    def spins(self) -> tuple[int, ...]:
        """Spin indices j = f - 1; raises if any slot has integer exponent."""
        if any(f == 0 for _, f in self.slots):
            raise DomainError(f"integer-exponent slot in {self}; spin j=p-1 excluded")
        return tuple(f - 1 for _, f in self.slots)

    def render(self, p: int) -> str:
        bits = []
        for i, (m, f) in enumerate(self.slots):
            e = Fraction(m) + Fraction(f, p)
            bits.append(f"s{i + 1}^({e.numerator}/{e.denominator})")
        return "*".join(bits)


class FractionalSeries:
    """Truncated formal sum of fractional-power monomials with exact coefficients."""

    def __init__(self, p: int, npoints: int, cutoff: Fraction):
        if p < 3:
            raise UsageError("base p must be >= 3")
        self.p = int(p)
        self.npoints = int(npoints)
        self.cutoff = Fraction(cutoff)
        self.terms: dict[Monomial, ExactSum] = {}

    def add_term(self, mono: Monomial, coeff: ExactScalar | ExactSum) -> None:
        if len(mono.slots) != self.npoints:
            raise UsageError("monomial arity mismatch")
        if any(f < 0 or f >= self.p or m < 0 for m, f in mono.slots):
            raise DomainError(f"non-canonical exponent in {mono}")
        if mono.total_degree(self.p) > self.cutoff:
            return
        acc = self.terms.setdefault(mono, ExactSum())
        if isinstance(coeff, ExactScalar):
            acc.add(coeff)
        else:
            acc += coeff
        if acc.is_zero:
            del self.terms[mono]

    @staticmethod
    def one(p: int, npoints: int, cutoff) -> "FractionalSeries":
        s = FractionalSeries(p, npoints, cutoff)
        s.add_term(Monomial(((0, 0),) * npoints), ExactScalar.one())
        return s

    def __add__(self, other: "FractionalSeries") -> "FractionalSeries":
        self._check_compat(other)
        out = FractionalSeries(self.p, self.npoints, self.cutoff)
        for mono, c in list(self.terms.items()) + list(other.terms.items()):
            for t in c:
                out.add_term(mono, t)
        return out

    def __mul__(self, other: "FractionalSeries") -> "FractionalSeries":
        self._check_compat(other)
        out = FractionalSeries(self.p, self.npoints, self.cutoff)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                slots = []
                for (a1, f1), (a2, f2) in zip(m1.slots, m2.slots):
                    f = f1 + f2
                    slots.append((a1 + a2 + f // self.p, f % self.p))
                mono = Monomial(tuple(slots))
                if mono.total_degree(self.p) > self.cutoff:
                    continue
                for t1 in c1:
                    for t2 in c2:
                        out.add_term(mono, t1 * t2)
        return out

    def _check_compat(self, other: "FractionalSeries") -> None:
        if self.p != other.p:
            raise UsageError(f"mismatched base p: {self.p} vs {other.p}")
        if self.npoints != other.npoints or self.cutoff != other.cutoff:
            raise UsageError("mismatched series shape (npoints/cutoff)")

    def coefficient(self, mono: Monomial) -> ExactSum:
        return self.terms.get(mono, ExactSum())

    def swapped(self) -> "FractionalSeries":
        """Series with marked points 1 and 2 exchanged (npoints=2 only)."""
        if self.npoints != 2:
            raise UsageError("swap defined for two-point series")
        out = FractionalSeries(self.p, 2, self.cutoff)
        for mono, c in self.terms.items():
            out.terms[Monomial((mono.slots[1], mono.slots[0]))] = c
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, FractionalSeries):
            return False
        if (self.p, self.npoints, self.cutoff) != (other.p, other.npoints, other.cutoff):
            return False
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            d = self.coefficient(k)
            e = other.coefficient(k)
            diff = ExactSum(list(d) + [-t for t in e])
            if not diff.is_zero:
                return False
        return True

    def __len__(self) -> int:
        return len(self.terms)

    def render(self) -> str:
        lines = []
        for mono in sorted(self.terms, key=lambda m: (m.total_degree(self.p), m.slots)):
            lines.append(f"{mono.render(self.p)}: {self.terms[mono].render()}")
        return "\n".join(lines)
