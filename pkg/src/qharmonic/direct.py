"""Direct rational evaluation of the harmonic sums at a fixed q.

This is the cross-check route: every value is obtained by enumerating the
defining chains outright and summing plain Fractions, never touching the
symbolic Q(q) pipeline (no polynomials, no gcd).  Gaussian binomials are built
from the Pascal-type recurrence, again over Fractions only.

A q-integer that vanishes at the chosen point (possible at roots of unity)
makes a needed denominator zero; that raises PoleError so callers can report
the instance as skipped rather than failed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Sequence

from .exactq import PoleError, Scalar


def q_int_at(n: int, q0: Fraction) -> Fraction:
    """1 + q0 + ... + q0^(n-1)."""
    acc = Fraction(0)
    p = Fraction(1)
    for _ in range(n):
        acc += p
        p *= q0
    return acc


def q_binomial_at(n: int, k: int, q0: Fraction) -> Fraction:
    """Gaussian binomial at q0 via the Pascal-type recurrence (pole-free)."""
    if k < 0 or k > n:
        raise ValueError(f"binomial index k={k} out of range for n={n}")
    row = [Fraction(1)] + [Fraction(0)] * k
    for i in range(1, n + 1):
        for j in range(min(i, k), 0, -1):
            row[j] = row[j - 1] + row[j] * q0 ** j
    return row[k]


def _chains(head: int, length: int) -> Iterator[tuple[int, ...]]:
    # All weakly decreasing tuples of the given length starting at head.
    if length == 1:
        yield (head,)
        return
    for nxt in range(head + 1):
        for rest in _chains(nxt, length - 1):
            yield (head,) + rest


def _nonzero_q_int(n: int, q0: Fraction) -> Fraction:
    v = q_int_at(n, q0)
    if v == 0:
        raise PoleError(f"[{n}]_q vanishes at q = {q0}")
    return v


def a_at(mu: Sequence[int], n: int, q0: Scalar) -> Fraction:
    """a_mu(n) by full chain enumeration at q = q0."""
    q0 = Fraction(q0)
    total = Fraction(0)
    for chain in _chains(n, len(mu)):
        exp = sum((m - 1) * (c + 1) for m, c in zip(mu, chain))
        den = Fraction(1)
        for m, c in zip(mu, chain):
            den *= _nonzero_q_int(c + 1, q0) ** m
        total += q0 ** exp / den
    return total


def b_at(mu: Sequence[int], n: int, q0: Scalar) -> Fraction:
    """b_mu(n) by full chain enumeration at q = q0."""
    q0 = Fraction(q0)
    total = Fraction(0)
    for chain in _chains(n, len(mu)):
        exp = sum(c + 1 for c in chain[1:])
        den = Fraction(1)
        for m, c in zip(mu, chain):
            den *= _nonzero_q_int(c + 1, q0) ** m
        total += q0 ** exp / den
    return total


def c_at(mu: Sequence[int], nu: Sequence[int], n: int, k: int, q0: Scalar) -> Fraction:
    """c_{mu,nu}(n, k) by enumerating both chains at q = q0."""
    q0 = Fraction(q0)
    if sum(mu) != sum(nu):
        raise ValueError("weight mismatch")
    i_labels: list[int] = []
    for label, size in enumerate(mu):
        i_labels.extend([label] * size)
    j_labels: list[int] = []
    for label, size in enumerate(nu):
        j_labels.extend([label] * size)
    pref = q_binomial_at(n + k, n, q0)
    if pref == 0:
        raise PoleError(f"[{n + k} choose {n}]_q vanishes at q = {q0}")
    total = Fraction(0)
    for nchain in _chains(n, len(mu)):
        n_exp = sum((m - 1) * (c + 1) for m, c in zip(mu, nchain))
        for kchain in _chains(k, len(nu)):
            exp = n_exp + sum(kchain[1:])
            den = Fraction(1)
            for il, jl in zip(i_labels, j_labels):
                den *= _nonzero_q_int(nchain[il] + kchain[jl] + 1, q0)
            total += q0 ** exp / den
    return total / pref


def delta_closed_a_at(mu: Sequence[int], n: int, k: int, q0: Scalar) -> Fraction:
    """k-th q-difference of a_mu at n, via the alternating binomial sum at q = q0."""
    q0 = Fraction(q0)
    total = Fraction(0)
    for i in range(k + 1):
        sign = -1 if i & 1 else 1
        total += sign * q0 ** (i * (i + 1) // 2) * q_binomial_at(k, i, q0) * a_at(mu, n + i, q0)
    return total
