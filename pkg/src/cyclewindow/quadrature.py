"""Adaptive one-dimensional quadrature.

Two panel rules are available: a 15-point Gauss-Kronrod pair (default) and
adaptive Simpson.  The Kronrod extension of the 7-point Gauss rule is built
at import time from the degree-8 Stieltjes polynomial, not pasted in as
decimal literals; the construction is exact-rational up to the final root
solve, and a test pins polynomial exactness through degree 22.

The Gauss-Kronrod nodes are interior points, so integrands may be singular
at the interval endpoints as long as the integral itself is finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ToleranceNotMet

RULE_GK15 = "gauss-kronrod-15"
RULE_SIMPSON = "adaptive-simpson"


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and depth limits for one integrate() call.

    Nested integrals construct one config per nesting level, so abs_tol is a
    per-level budget.
    """

    abs_tol: float = 1e-11
    rel_tol: float = 0.0
    max_depth: int = 40
    panel_rule: str = RULE_GK15

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.rel_tol < 0:
            raise DomainError("rel_tol must be nonnegative")
        if not 4 <= self.max_depth <= 60:
            raise DomainError("max_depth must lie in [4, 60]")
        if self.panel_rule not in (RULE_GK15, RULE_SIMPSON):
            raise DomainError(f"unknown panel rule {self.panel_rule!r}")


def _legendre_coeffs(n):
    # Monomial coefficients of the Legendre polynomial P_n, exact rationals,
    # via the three-term recurrence (m+1) P_{m+1} = (2m+1) x P_m - m P_{m-1}.
    p_prev = [Fraction(1)]
    if n == 0:
        return p_prev
    p_cur = [Fraction(0), Fraction(1)]
    for m in range(1, n):
        nxt = [Fraction(0)] * (m + 2)
        for i, c in enumerate(p_cur):
            nxt[i + 1] += Fraction(2 * m + 1, m + 1) * c
        for i, c in enumerate(p_prev):
            nxt[i] -= Fraction(m, m + 1) * c
        p_prev, p_cur = p_cur, nxt
    return p_cur


def _monomial_moment(q):
    # integral of x^q over [-1, 1]
    return Fraction(2, q + 1) if q % 2 == 0 else Fraction(0)


def _solve_exact(a, b):
    # Gaussian elimination over Fractions; a is modified in place.
    n = len(b)
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        b[col] *= inv
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
                b[r] -= f * b[col]
    return b


def _build_gk15():
    """Nodes and weights of the (G7, K15) pair on [-1, 1].

    The eight Kronrod-only nodes are the roots of the monic Stieltjes
    polynomial E_8, defined by orthogonality of E_8 * P_7 to x^k for
    k = 0..7.  E_8 is even, so the odd-k conditions are automatic and the
    even coefficients come from a 4x4 exact-rational solve.  Weights are
    interpolatory, solved in the Legendre basis (well conditioned).
    """
    p7 = _legendre_coeffs(7)

    # orthogonality conditions for k = 1, 3, 5, 7
    # E_8(x) = x^8 + c6 x^6 + c4 x^4 + c2 x^2 + c0
    powers = (0, 2, 4, 6)

    def weighted_moment(extra):
        return sum(c * _monomial_moment(j + extra) for j, c in enumerate(p7))

    rows = []
    rhs = []
    for k in (1, 3, 5, 7):
        rows.append([weighted_moment(p + k) for p in powers])
        rhs.append(-weighted_moment(8 + k))
    c0, c2, c4, c6 = _solve_exact(rows, rhs)

    # roots of the quartic in y = x^2, then two Newton polish steps on E_8
    quartic = [1.0, float(c6), float(c4), float(c2), float(c0)]
    ys = np.roots(quartic)
    coeffs = [float(c0), 0.0, float(c2), 0.0, float(c4), 0.0, float(c6), 0.0, 1.0]
    dcoeffs = [i * c for i, c in enumerate(coeffs)][1:]

    def horner(cs, x):
        acc = 0.0
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    kron_only = []
    for y in ys:
        x = math.sqrt(float(np.real(y)))
        for _ in range(2):
            x -= horner(coeffs, x) / horner(dcoeffs, x)
        kron_only.extend((-x, x))

    gauss_nodes, _ = np.polynomial.legendre.leggauss(7)
    nodes = np.sort(np.concatenate([gauss_nodes, kron_only]))

    # interpolatory weights: sum_i w_i P_j(x_i) = 2*delta_{j0}, j = 0..14
    vander = np.stack([
        np.polynomial.legendre.legval(nodes, [0.0] * j + [1.0]) for j in range(15)
    ])
    rhs_w = np.zeros(15)
    rhs_w[0] = 2.0
    w_kron = np.linalg.solve(vander, rhs_w)

    # embedded Gauss weights, aligned with the 15 sorted nodes
    gauss_idx = [int(np.argmin(np.abs(nodes - g))) for g in gauss_nodes]
    vander_g = np.stack([
        np.polynomial.legendre.legval(gauss_nodes, [0.0] * j + [1.0]) for j in range(7)
    ])
    rhs_g = np.zeros(7)
    rhs_g[0] = 2.0
    w_gauss_compact = np.linalg.solve(vander_g, rhs_g)
    w_gauss = np.zeros(15)
    for idx, w in zip(gauss_idx, w_gauss_compact):
        w_gauss[idx] = w

    return tuple(map(float, nodes)), tuple(map(float, w_kron)), tuple(map(float, w_gauss))


GK15_NODES, GK15_WEIGHTS, GK15_GAUSS_WEIGHTS = _build_gk15()


def _panel_gk15(f, lo, hi):
    h = 0.5 * (hi - lo)
    mid = 0.5 * (lo + hi)
    kron = 0.0
    gauss = 0.0
    for x, wk, wg in zip(GK15_NODES, GK15_WEIGHTS, GK15_GAUSS_WEIGHTS):
        y = f(mid + h * x)
        kron += wk * y
        gauss += wg * y
    # |K - G| is a conservative estimate of the Kronrod value's error
    return h * kron, abs(h * (kron - gauss))


def _adapt_gk(f, lo, hi, tol, rel_tol, depth, max_depth):
    val, err = _panel_gk15(f, lo, hi)
    if err <= max(tol, rel_tol * abs(val)) or depth >= max_depth:
        return val, err
    mid = 0.5 * (lo + hi)
    v1, e1 = _adapt_gk(f, lo, mid, 0.5 * tol, rel_tol, depth + 1, max_depth)
    v2, e2 = _adapt_gk(f, mid, hi, 0.5 * tol, rel_tol, depth + 1, max_depth)
    return v1 + v2, e1 + e2


def _simpson(fa, fm, fb, lo, hi):
    return (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)


def _adapt_simpson(f, lo, hi, fa, fm, fb, whole, tol, rel_tol, depth, max_depth):
    mid = 0.5 * (lo + hi)
    lm = 0.5 * (lo + mid)
    rm = 0.5 * (mid + hi)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, lo, mid)
    right = _simpson(fm, frm, fb, mid, hi)
    delta = left + right - whole
    err = abs(delta) / 15.0
    if err <= max(tol, rel_tol * abs(left + right)) or depth >= max_depth:
        return left + right + delta / 15.0, err
    v1, e1 = _adapt_simpson(f, lo, mid, fa, flm, fm, left, 0.5 * tol, rel_tol,
                            depth + 1, max_depth)
    v2, e2 = _adapt_simpson(f, mid, hi, fm, frm, fb, right, 0.5 * tol, rel_tol,
                            depth + 1, max_depth)
    return v1 + v2, e1 + e2


def integrate(f, lo, hi, cfg=None, breakpoints=()):
    """Integrate f over [lo, hi] adaptively.

    breakpoints are interior abscissae where f or one of its derivatives has
    a kink; the interval is pre-split there so no panel straddles one
    (adaptive rules converge slowly across kinks).  Returns
    (value, error_estimate) and raises ToleranceNotMet when the summed
    panel estimates exceed the configured tolerance.
    """
    if cfg is None:
        cfg = QuadratureConfig()
    if hi <= lo:
        return 0.0, 0.0
    pts = [lo] + sorted(p for p in set(breakpoints) if lo < p < hi) + [hi]
    width = hi - lo
    total = 0.0
    err = 0.0
    for a, b in zip(pts, pts[1:]):
        tol_piece = cfg.abs_tol * (b - a) / width
        if cfg.panel_rule == RULE_GK15:
            v, e = _adapt_gk(f, a, b, tol_piece, cfg.rel_tol, 0, cfg.max_depth)
        else:
            fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
            whole = _simpson(fa, fm, fb, a, b)
            v, e = _adapt_simpson(f, a, b, fa, fm, fb, whole, tol_piece,
                                  cfg.rel_tol, 0, cfg.max_depth)
        total += v
        err += e
    allowed = max(cfg.abs_tol, cfg.rel_tol * abs(total))
    if err > allowed:
        raise ToleranceNotMet(
            f"quadrature error estimate {err:.3e} exceeds tolerance {allowed:.3e}",
            value=total, achieved=err, requested=allowed)
    return total, err
