"""Quasi-Poisson pmf, falling-factorial moments, and moment inversion.

The quasi-Poisson family with parameters (r, lam) is the unique distribution
on {0, ..., r} whose k-th falling moment is lam^k for k = 0..r.  It is a
genuine probability distribution exactly when 0 <= lam <= 1; outside that
range some entry goes negative and construction is refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import DomainError, InvalidMomentsError

_CLAMP_FLOOR = -1e-9


def _is_exact(x):
    return isinstance(x, Rational) and not isinstance(x, float)


@dataclass(frozen=True)
class Pmf:
    """A finite pmf on {0, 1, ..., len-1}; entries all float or all Fraction."""

    probs: tuple

    def __post_init__(self):
        if len(self.probs) < 1:
            raise DomainError("pmf needs at least one entry")
        exact = all(_is_exact(p) for p in self.probs)
        for p in self.probs:
            if p < 0:
                raise DomainError(f"negative probability {p}")
        total = sum(self.probs) if exact else math.fsum(self.probs)
        if exact:
            if total != 1:
                raise DomainError(f"pmf sums to {total}, not 1")
        elif abs(total - 1.0) > 1e-12:
            raise DomainError(f"pmf sums to {total!r}, not 1")

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    def as_floats(self):
        return tuple(float(p) for p in self.probs)

    def total_variation(self, other):
        """TV distance, padding the shorter support with zeros."""
        a, b = self.as_floats(), other.as_floats()
        n = max(len(a), len(b))
        a += (0.0,) * (n - len(a))
        b += (0.0,) * (n - len(b))
        return 0.5 * math.fsum(abs(x - y) for x, y in zip(a, b))


@dataclass(frozen=True)
class MomentVector:
    """Falling-factorial moments (m_0, ..., m_r) with m_0 = 1."""

    moments: tuple

    def __post_init__(self):
        if len(self.moments) < 1:
            raise DomainError("moment vector needs m_0")
        if self.moments[0] != 1:
            raise DomainError("m_0 must equal 1")
        for m in self.moments:
            if m < 0:
                raise DomainError(f"negative falling moment {m}")

    def __len__(self):
        return len(self.moments)

    def __getitem__(self, i):
        return self.moments[i]


def qp_pmf(r, lam):
    """The quasi-Poisson(r, lam) pmf on {0, ..., r}.

    p_i = sum_{j=i}^{r} binom(j, i) (-1)^{j-i} lam^j / j!
    """
    if r < 1:
        raise DomainError(f"need r >= 1, got {r}")
    if not 0 <= lam <= 1:
        raise DomainError(f"quasi-Poisson exists only for lam in [0, 1], got {lam}")
    exact = _is_exact(lam)
    probs = []
    for i in range(r + 1):
        acc = Fraction(0) if exact else 0.0
        for j in range(r, i - 1, -1):
            term = math.comb(j, i) * lam**j / (Fraction(math.factorial(j)) if exact else math.factorial(j))
            acc += term if (j - i) % 2 == 0 else -term
        if not exact:
            # alternating cancellation can leave tiny negative dust at lam near 1
            acc = max(acc, 0.0)
        probs.append(acc)
    return Pmf(tuple(probs))


def falling_moment(pmf: Pmf, k):
    """E[(X)_k] = sum_i i(i-1)...(i-k+1) p_i for X ~ pmf."""
    if k < 0:
        raise DomainError(f"need k >= 0, got {k}")
    if k == 0:
        return Fraction(1) if all(_is_exact(p) for p in pmf.probs) else 1.0
    terms = [math.perm(i, k) * pmf[i] for i in range(k, len(pmf))]
    if not terms:
        return Fraction(0) if all(_is_exact(p) for p in pmf.probs) else 0.0
    if all(_is_exact(t) for t in terms):
        return sum(terms)
    return math.fsum(terms)


def pmf_from_falling_moments(mv: MomentVector):
    """Invert falling moments (m_0..m_r) of a distribution on {0..r} to its pmf.

    p_i = sum_{j=i}^{r} binom(j, i) (-1)^{j-i} m_j / j!.  Entries in
    [-1e-9, 0) are treated as roundoff and clamped to 0; anything below
    that is a genuine inconsistency and raises.  The result is renormalized
    (a no-op for exact input).
    """
    r = len(mv) - 1
    exact = all(_is_exact(m) for m in mv.moments)
    probs = []
    for i in range(r + 1):
        acc = Fraction(0) if exact else 0.0
        for j in range(r, i - 1, -1):
            term = math.comb(j, i) * mv[j] / (Fraction(math.factorial(j)) if exact else math.factorial(j))
            acc += term if (j - i) % 2 == 0 else -term
        if acc < 0:
            if acc < _CLAMP_FLOOR:
                raise InvalidMomentsError(
                    f"moment vector is not realizable on {{0..{r}}}: p_{i} = {acc}")
            acc = Fraction(0) if exact else 0.0
        probs.append(acc)
    total = sum(probs) if exact else math.fsum(probs)
    if total <= 0:
        raise InvalidMomentsError("moment inversion produced an all-zero pmf")
    probs = [p / total for p in probs]
    return Pmf(tuple(probs))


def binomial_matrices(n):
    """(B, B_inv) with B[i][j] = binom(j, i), signed inverse; exact ints."""
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    if n > 20:
        raise DomainError("binomial_matrices capped at n = 20")
    size = n + 1
    b = [[math.comb(j, i) for j in range(size)] for i in range(size)]
    binv = [[(-1) ** (i + j) * math.comb(j, i) for j in range(size)] for i in range(size)]
    return b, binv
