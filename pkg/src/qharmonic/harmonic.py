"""Finite multiple harmonic q-sums and the q-difference calculus on sequences.

The three families computed here are nested sums over weakly decreasing chains
of non-negative integers:

* ``a_value(mu, n)``   — chains n = n_1 >= ... >= n_p >= 0, each block t
  contributing q^((mu_t - 1)(n_t + 1)) / [n_t + 1]^mu_t;
* ``b_value(mu, n)``   — same chains, numerator q^((n_2+1) + ... + (n_p+1));
* ``c_value(mu, nu, n, k)`` — a double chain (one for mu, one for nu) whose
  denominator fuses the two chains through the block expansions of mu and nu,
  scaled by the inverse Gaussian binomial [n+k choose n]_q.

Chains are never enumerated outright.  Each sum is evaluated by a suffix
recursion memoized on (block position, current upper bound); for c the state is
(slot, current n-value, current k-value), walking the fused factors from the
innermost slot outward.  The memo for a given (mu, nu) is independent of the
outer (n, k), so one table serves an entire verification grid.

All results are canonical QRat values; repeated calls return identical objects
via the caches, which are transparent to results.
"""

from __future__ import annotations

import functools
from typing import Callable

from .exactq import (
    QPoly,
    QRat,
    QRAT_ONE,
    QRAT_ZERO,
    Scalar,
    _require_rat,
    q_binomial,
    q_integer,
    q_power,
)
from .multiindex import MultiIndex


@functools.cache
def subscript_expansion(mu: MultiIndex) -> tuple[int, ...]:
    """Block labels (i_1, ..., i_m): label t repeated mu_t times, m = weight."""
    out: list[int] = []
    for label, size in enumerate(mu, start=1):
        out.extend([label] * size)
    return tuple(out)


class QSeq:
    """A sequence of canonical QRat values with memoized evaluation."""

    __slots__ = ("_fn", "_cache")

    def __init__(self, fn: Callable[[int], QRat]) -> None:
        self._fn = fn
        self._cache: dict[int, QRat] = {}

    def __call__(self, n: int) -> QRat:
        if n < 0:
            raise ValueError("sequences are indexed by non-negative integers")
        hit = self._cache.get(n)
        if hit is None:
            hit = _require_rat(self._fn(n))
            self._cache[n] = hit
        return hit

    @classmethod
    def from_values(cls, values, tail: QRat | Scalar = 0) -> QSeq:
        """Sequence given by an explicit prefix, constant `tail` afterwards."""
        prefix = [_require_rat(v) for v in values]
        tail_value = _require_rat(tail)
        return cls(lambda n: prefix[n] if n < len(prefix) else tail_value)

    @classmethod
    def constant(cls, value: QRat | Scalar) -> QSeq:
        v = _require_rat(value)
        return cls(lambda n: v)


# --- the a and b families ---------------------------------------------------

def _a_weight(part: int, x: int) -> QRat:
    # q^((part-1)(x+1)) / [x+1]^part
    return QRat(QPoly.monomial(1, (part - 1) * (x + 1)), q_integer(x + 1) ** part)


def _b_weight(part: int, x: int, first: bool) -> QRat:
    num = QPoly.one() if first else QPoly.monomial(1, x + 1)
    return QRat(num, q_integer(x + 1) ** part)


@functools.cache
def _a_suffix(mu: MultiIndex, t: int, v: int) -> QRat:
    # Sum over chains v >= n_t >= ... >= n_p >= 0 of the a-weights of blocks t..p.
    if v < 0:
        return QRAT_ZERO
    inner = _a_suffix(mu, t + 1, v) if t + 1 < len(mu) else QRAT_ONE
    return _a_suffix(mu, t, v - 1) + _a_weight(mu[t], v) * inner


@functools.cache
def _b_suffix(mu: MultiIndex, t: int, v: int) -> QRat:
    if v < 0:
        return QRAT_ZERO
    inner = _b_suffix(mu, t + 1, v) if t + 1 < len(mu) else QRAT_ONE
    return _b_suffix(mu, t, v - 1) + _b_weight(mu[t], v, first=False) * inner


@functools.cache
def a_value(mu: MultiIndex, n: int) -> QRat:
    """The finite multiple harmonic q-sum a_mu(n), exact in Q(q)."""
    mu = MultiIndex(mu)
    inner = _a_suffix(mu, 1, n) if len(mu) > 1 else QRAT_ONE
    return _a_weight(mu[0], n) * inner


@functools.cache
def b_value(mu: MultiIndex, n: int) -> QRat:
    """The companion sum b_mu(n), whose numerator shifts live on the inner blocks."""
    mu = MultiIndex(mu)
    inner = _b_suffix(mu, 1, n) if len(mu) > 1 else QRAT_ONE
    return _b_weight(mu[0], n, first=True) * inner


def a_seq(mu: MultiIndex) -> QSeq:
    mu = MultiIndex(mu)
    return QSeq(lambda n: a_value(mu, n))


def b_seq(mu: MultiIndex) -> QSeq:
    mu = MultiIndex(mu)
    return QSeq(lambda n: b_value(mu, n))


# --- the double-chain family c ----------------------------------------------

@functools.cache
def _c_suffix(mu: MultiIndex, nu: MultiIndex, t: int, a: int, b: int) -> QRat:
    """Fused-factor suffix sum from slot t inward, given n_{i_t} = a, k_{j_t} = b.

    Covers the factors 1/[n_{i_s} + k_{j_s} + 1] for s >= t together with the
    exponent weights of every block strictly inside (i_t, j_t).  New chain
    variables appear exactly when the slot walk crosses a block boundary of mu
    (weight q^((mu_i - 1)(value + 1))) or of nu (weight q^value; the first nu
    block carries no weight, but slot 0 never re-enters the recursion).
    """
    i = subscript_expansion(mu)
    j = subscript_expansion(nu)
    factor = QRat(QPoly.one(), q_integer(a + b + 1))
    m = len(i)
    if t == m - 1:
        return factor
    di = i[t + 1] - i[t]
    dj = j[t + 1] - j[t]
    if di == 0 and dj == 0:
        inner = _c_suffix(mu, nu, t + 1, a, b)
    elif di == 1 and dj == 0:
        part = mu[i[t + 1] - 1]
        inner = QRAT_ZERO
        for a2 in range(a + 1):
            inner = inner + q_power((part - 1) * (a2 + 1)) * _c_suffix(mu, nu, t + 1, a2, b)
    elif di == 0 and dj == 1:
        inner = QRAT_ZERO
        for b2 in range(b + 1):
            inner = inner + q_power(b2) * _c_suffix(mu, nu, t + 1, a, b2)
    else:
        part = mu[i[t + 1] - 1]
        inner = QRAT_ZERO
        for a2 in range(a + 1):
            for b2 in range(b + 1):
                inner = inner + (q_power((part - 1) * (a2 + 1) + b2)
                                 * _c_suffix(mu, nu, t + 1, a2, b2))
    return factor * inner


@functools.cache
def c_value(mu: MultiIndex, nu: MultiIndex, n: int, k: int) -> QRat:
    """The double-chain sum c_{mu,nu}(n, k); mu and nu must have equal weight."""
    mu = MultiIndex(mu)
    nu = MultiIndex(nu)
    if mu.weight != nu.weight:
        raise ValueError(f"weight mismatch: |{mu.as_text()}| != |{nu.as_text()}|")
    prefactor = QRat(QPoly.one(), q_binomial(n + k, n))
    lead = q_power((mu[0] - 1) * (n + 1))
    return prefactor * lead * _c_suffix(mu, nu, 0, n, k)


# --- difference operators on sequences ---------------------------------------

def delta_z(seq: QSeq, z: QRat | Scalar) -> QSeq:
    """The difference operator n -> seq(n) - z * seq(n+1)."""
    z = _require_rat(z)
    return QSeq(lambda n: seq(n) - z * seq(n + 1))


def delta_qk_iter(seq: QSeq, k: int) -> QSeq:
    """k-th q-difference as an honest composition of first differences.

    Applies the z = q, q^2, ..., q^k first differences in that order; k = 0 is
    the identity.
    """
    if k < 0:
        raise ValueError("difference order must be non-negative")
    out = seq
    for i in range(1, k + 1):
        out = delta_z(out, q_power(i))
    return out


def delta_qk_closed(seq: QSeq, n: int, k: int) -> QRat:
    """k-th q-difference at n via the alternating Gaussian-binomial sum."""
    if k < 0:
        raise ValueError("difference order must be non-negative")
    total = QRAT_ZERO
    for i in range(k + 1):
        sign = -1 if i & 1 else 1
        coeff = q_binomial(k, i) * QPoly.monomial(sign, i * (i + 1) // 2)
        total = total + QRat(coeff) * seq(n + i)
    return total


def nabla_q(seq: QSeq, n: int) -> QRat:
    """The n-th q-difference of seq evaluated at 0."""
    return delta_qk_closed(seq, 0, n)
