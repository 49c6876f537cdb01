"""Universal-equation checks over computed tables and continuations in p.

The checks here are exact: a passing identity has literally zero difference.

* selection rule  (p+1)(2g-2+n) = sum_i (p m_i + j_i + 1)
* string equation: removing a tau_{0,0} insertion lowers one descendant index
* dilaton equation: removing tau_{1,0} costs a factor (2g-2+k)
* orbifold Euler characteristics chi(M_{g,s}) and the p=-1 / p=-3 tables
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .correlators import TauCorrelator, two_point_table
from .exact import UsageError
from .numbers import bernoulli_abs, zeta_one_minus_2g
from .onepoint import one_point_value
from .twopoint import REAL


def selection_rule(p: int, genus: int, marks) -> bool:
    """Exact integer-arithmetic verdict of the degree selection rule."""
    marks = tuple(marks)
    lhs = (p + 1) * (2 * genus - 2 + len(marks))
    rhs = sum(p * m + j + 1 for m, j in marks)
    return lhs == rhs


@dataclass
class CheckRecord:
    identity: str
    lhs_key: str
    rhs_keys: tuple[str, ...]
    passed: bool
    difference: Fraction


@dataclass
class TautologyReport:
    checked: list[CheckRecord] = field(default_factory=list)

    def record(self, identity: str, lhs_key: str, rhs_keys, lhs: Fraction, rhs: Fraction):
        self.checked.append(
            CheckRecord(identity, lhs_key, tuple(rhs_keys), lhs == rhs, lhs - rhs)
        )

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checked)

    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checked if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.all_passed,
            "checks": [
                {
                    "identity": c.identity,
                    "lhs": c.lhs_key,
                    "rhs": list(c.rhs_keys),
                    "pass": c.passed,
                    "difference": str(c.difference),
                }
                for c in self.checked
            ],
        }

    def render(self) -> str:
        lines = []
        for c in self.checked:
            status = "PASS" if c.passed else f"FAIL (diff {c.difference})"
            lines.append(f"[{status}] {c.identity}: {c.lhs_key} = {', '.join(c.rhs_keys)}")
        if not lines:
            return "no applicable checks"
        return "\n".join(lines)


def _mark_str(marks) -> str:
    return " ".join(f"tau({m},{j})" for m, j in marks)


def string_check(
    two_point: list[TauCorrelator],
    p: int,
    g_max: int | None = None,
) -> TautologyReport:
    """tau_{0,0}-insertions against the one-point closed forms, exactly.

    For every two-point entry <tau_{0,0} tau_{n,j}>_g the string equation
    asserts equality with <tau_{n-1,j}>_g.
    """
    report = TautologyReport()
    for e in two_point:
        if g_max is not None and e.genus > g_max:
            continue
        for k, (m, j) in enumerate(e.marks):
            if (m, j) != (0, 0):
                continue
            others = [e.marks[i] for i in range(len(e.marks)) if i != k]
            if len(others) != 1:
                continue
            (n2, j2) = others[0]
            if n2 == 0:
                continue
            rhs = one_point_value(p, e.genus, j=j2)
            report.record(
                f"string g={e.genus}",
                _mark_str(e.marks) + f"_g{e.genus}",
                (f"tau({n2 - 1},{j2})_g{e.genus}",),
                Fraction(e.value),
                rhs,
            )
            break
    return report


def dilaton_check(two_point: list[TauCorrelator], p: int) -> TautologyReport:
    """<tau_{1,0} X>_g / <X>_g = 2g - 2 + k as a ratio identity.

    Run over two-point entries containing tau_{1,0} whose partner exists in
    the one-point table (k = 1 remaining insertion).
    """
    report = TautologyReport()
    for e in two_point:
        for k, (m, j) in enumerate(e.marks):
            if (m, j) != (1, 0):
                continue
            others = [e.marks[i] for i in range(len(e.marks)) if i != k]
            if len(others) != 1:
                continue
            (n2, j2) = others[0]
            partner = one_point_value(p, e.genus, j=j2)
            if partner == 0:
                continue
            expected = Fraction(2 * e.genus - 2 + 1)
            report.record(
                f"dilaton g={e.genus}",
                _mark_str(e.marks) + f"_g{e.genus}",
                (f"(2g-2+1) * tau({n2},{j2})_g{e.genus}",),
                Fraction(e.value) / partner,
                expected,
            )
            break
    return report


def string_sweep(p_values, g_max: int, kernel_mode: str = REAL) -> TautologyReport:
    """String checks across a range of p (exact), merged into one report."""
    report = TautologyReport()
    for p in p_values:
        table = two_point_table(p, g_max, kernel_mode)
        sub = string_check(table, p)
        report.checked.extend(sub.checked)
    return report


def euler_characteristic(g: int, s: int) -> Fraction:
    """Orbifold Euler characteristic chi(M_{g,s}) for g >= 1, s >= 1.

    chi(M_{g,s}) = -(2g-1)/(2g)! * (2g+s-3)! * B_g with the positive
    Bernoulli sequence B_g = 1/6, 1/30, 1/42, ... (equal to |B_{2g}|).
    chi(M_{g,1}) agrees with zeta(1-2g) up to the documented sign issue:
    the magnitude always matches; the sign alternates as (-1)^g in zeta
    while the closed form is negative throughout.
    """
    if g < 1 or s < 1:
        raise UsageError("Euler characteristic needs g >= 1, s >= 1")
    return (
        -Fraction(2 * g - 1, factorial(2 * g))
        * factorial(2 * g + s - 3)
        * bernoulli_abs(g)
    )


def euler_zeta_comparison(g: int) -> dict:
    """Both conventions at one glance for chi(M_{g,1})."""
    chi = euler_characteristic(g, 1)
    zeta = zeta_one_minus_2g(g)
    return {
        "closed_form": chi,
        "zeta_1_minus_2g": zeta,
        "magnitudes_equal": abs(chi) == abs(zeta),
        "signs_equal": (chi > 0) == (zeta > 0),
    }


_NEGATIVE_P3_LABELS = {1: (1, 0), 2: (3, 2), 3: (6, 1)}


def negative_p_table(g_max: int, p) -> list[TauCorrelator]:
    """One-point continuation table at negative p.

    At p = -1 the label family tau_{1,0} is continued for every genus
    (orbifold Euler characteristics).  At p = -3 the labels are the ones
    admissible on the positive-p side of each genus family.
    """
    p = Fraction(p)
    if p >= 0:
        raise UsageError("negative_p_table needs p < 0")
    out = []
    for g in range(1, g_max + 1):
        if p == -1:
            label = (1, 0)
        elif p == -3 and g in _NEGATIVE_P3_LABELS:
            label = _NEGATIVE_P3_LABELS[g]
        else:
            label = (2 * g - 1, 2 * g - 2)
        value = one_point_value(p, g, j=label[1])
        out.append(TauCorrelator(p, g, (label,), value))
    return out
