"""Log-integral evaluators and the entropy-method counting bounds.

Every bound is reported as a natural logarithm.  The certified matching bound
is the o(1)-free form

    |A| * integral_0^1 ln(1 + s_bar + t_bar + q x^k) dx

with s_bar = C(k, 2) (codegree - 1) and t_bar = (rho - k) D.  The asymptotic
envelopes are provided for side-by-side reporting only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .hypercore import BipartiteHypergraph, DegreeStats, degree_stats

DEFAULT_TOL = 1e-10
TRANSVERSAL_EXPONENT = 2.117
REFERENCE_EXPONENT = 2.0


def adaptive_simpson(f: Callable[[float], float], lo: float, hi: float, tol: float = DEFAULT_TOL,
                     max_depth: int = 60) -> tuple[float, float]:
    """Integrate ``f`` over [lo, hi]; returns (value, error estimate).

    Intervals are bisected until the Richardson estimate |S2 - S1| / 15 is
    within the interval's share of ``tol``.
    """
    if hi == lo:
        return 0.0, 0.0
    width = hi - lo
    flo, fmid, fhi = f(lo), f((lo + hi) / 2), f(hi)
    whole = width / 6 * (flo + 4 * fmid + fhi)
    stack = [(lo, hi, flo, fmid, fhi, whole, 0)]
    total = 0.0
    err = 0.0
    while stack:
        a, b, fa, fm, fb, s, depth = stack.pop()
        m = (a + b) / 2
        flm, frm = f((a + m) / 2), f((m + b) / 2)
        h = (b - a) / 12
        left = h * (fa + 4 * flm + fm)
        right = h * (fm + 4 * frm + fb)
        delta = left + right - s
        local_tol = tol * (b - a) / width
        if abs(delta) <= 15 * local_tol or depth >= max_depth:
            total += left + right + delta / 15
            err += abs(delta) / 15
        else:
            stack.append((m, b, fm, frm, fb, right, depth + 1))
            stack.append((a, m, fa, flm, fm, left, depth + 1))
    return total, err


def _integral_with_error(a: float, q: float, k: int, tol: float) -> tuple[float, float]:
    if a < 0 or q < 0:
        raise ValueError("integral_log_poly needs a >= 0 and q >= 0")
    if a == 0 and q == 0:
        raise ValueError("log of zero")
    if a == 0:
        return math.log(q) - k, 0.0
    if q == 0:
        return math.log(a), 0.0
    # ln(a + q x^k) = ln a + ln(1 + (q/a) x^k); the knee sits at (a/q)^(1/k).
    ratio = q / a
    g = lambda x: math.log1p(ratio * x**k)
    knee = (a / q) ** (1.0 / k)
    if 0 < knee < 1:
        v1, e1 = adaptive_simpson(g, 0.0, knee, tol * knee)
        v2, e2 = adaptive_simpson(g, knee, 1.0, tol * (1 - knee))
        value, err = v1 + v2, e1 + e2
    else:
        value, err = adaptive_simpson(g, 0.0, 1.0, tol)
    return math.log(a) + value, err


def integral_log_poly(a: float, q: float, k: int, tol: float = DEFAULT_TOL) -> float:
    """integral_0^1 ln(a + q x^k) dx by adaptive quadrature."""
    return _integral_with_error(a, q, k, tol)[0]


def integral_log_poly_closed_k2(a: float, q: float) -> float:
    """Closed form of integral_0^1 ln(a + q x^2) dx for a, q > 0."""
    if a <= 0 or q <= 0:
        raise ValueError("closed form needs a > 0 and q > 0")
    return math.log(a + q) - 2 + 2 * math.sqrt(a / q) * math.atan(math.sqrt(q / a))


@dataclass(frozen=True)
class BoundParameters:
    a_count: int
    k: int
    q: float
    d: float
    delta2: int
    rho: float

    @property
    def s_bar(self) -> float:
        return math.comb(self.k, 2) * max(self.delta2 - 1, 0)

    @property
    def t_bar(self) -> float:
        return (self.rho - self.k) * self.d

    @classmethod
    def from_stats(cls, stats: DegreeStats, k: int, a_count: int) -> "BoundParameters":
        return cls(a_count, k, float(stats.q_avg), float(stats.d_max_b), stats.delta2, float(stats.rho))

    @classmethod
    def of(cls, h: BipartiteHypergraph) -> "BoundParameters":
        return cls.from_stats(degree_stats(h), h.k, h.a_count)


@dataclass(frozen=True)
class BoundReport:
    ln_bound: float
    integrand_constant: float
    quadrature_error_estimate: float
    method: str  # "closed_form_k2" or "adaptive_quadrature"


def finite_matching_bound(p: BoundParameters, tol: float = DEFAULT_TOL) -> BoundReport:
    if p.a_count == 0:
        return BoundReport(0.0, 1.0, 0.0, "closed_form_k2" if p.k == 2 else "adaptive_quadrature")
    if p.rho < p.k:
        raise ValueError(f"B too small to saturate A: rho = {p.rho} < k = {p.k}")
    const = 1 + p.s_bar + p.t_bar
    if p.k == 2 and p.q > 0:
        return BoundReport(p.a_count * integral_log_poly_closed_k2(const, p.q), const, 0.0, "closed_form_k2")
    value, err = _integral_with_error(const, p.q, p.k, tol)
    return BoundReport(p.a_count * value, const, err, "adaptive_quadrature")


def lemma41_deviation(eps: float, k: int, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """(integral_0^1 ln(eps + x^k) dx, |value + k| / eps^(1/k))."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    value = integral_log_poly(eps, 1.0, k, tol)
    return value, abs(value + k) / eps ** (1.0 / k)


def average_degree_with_free_block(n: int) -> Fraction:
    """Row-average degree after removing an (n/3 - 1) x (n/3) block: 8n/9 + 1/3."""
    return Fraction(8 * n, 9) + Fraction(1, 3)


def lemma42_check(n: int) -> tuple[float, float, bool]:
    """Compare ln(8n/9 + 1/3) - 2 against ln n - 2.117 (vanishing terms dropped)."""
    if n < 3:
        raise ValueError("n must be at least 3")
    lhs = math.log(8 * n / 9 + 1 / 3) - 2
    rhs = math.log(n) - TRANSVERSAL_EXPONENT
    return lhs, rhs, lhs <= rhs


def transversal_bound_ln(n: int) -> float:
    return n * (math.log(n) - TRANSVERSAL_EXPONENT)


def reference_envelope_ln(n: int) -> float:
    return n * (math.log(n) - REFERENCE_EXPONENT)


def coloring_parameters(n: int, d: int, k: int, q: int, delta2: int = 1) -> BoundParameters:
    """Parameters of the incidence hypergraph of a d-regular k-uniform graph on n vertices."""
    if (n * d) % k:
        raise ValueError("n*d must be divisible by k for a d-regular k-uniform hypergraph")
    a_count = n * d // k
    return BoundParameters(a_count, k, float(q), float(d), delta2, q * k / d)


def coloring_bound_ln(n: int, d: int, k: int, q: int, mode: str = "finite", delta2: int = 1,
                      tol: float = DEFAULT_TOL) -> float:
    """ln of the bound on proper q-edge-colorings.

    ``finite`` applies the certified matching bound to the incidence
    hypergraph; ``asymptotic`` returns (d n / k)(ln q - k), which is not a
    certified bound at finite size.
    """
    if q < 1:
        raise ValueError("q must be positive")
    if mode == "asymptotic":
        return (d * n / k) * (math.log(q) - k)
    if mode != "finite":
        raise ValueError(f"unknown mode {mode!r}")
    if q < d:
        raise ValueError(f"B too small to saturate A: q = {q} < d = {d}")
    return finite_matching_bound(coloring_parameters(n, d, k, q, delta2), tol).ln_bound
