"""Exact arithmetic in the field Q(q).

Provides arbitrary-precision rationals (``Rational``), dense polynomials in the
indeterminate q (``QPoly``), reduced rational functions (``QRat``), and the
q-combinatorial primitives built on them: q-integers, q-factorials and Gaussian
binomial coefficients.

All values are immutable and kept in a canonical form — polynomials carry no
trailing zero coefficients, rational functions are gcd-reduced with a monic
denominator — so structural equality decides equality in Q(q).
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Union

# Arbitrary-precision rationals: always in lowest terms, denominator > 0,
# zero is Fraction(0, 1).  These invariants are guaranteed by the class itself.
Rational = Fraction

Scalar = Union[int, Fraction]


class InexactDivisionError(ArithmeticError):
    """A polynomial division that was required to be exact left a remainder."""


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at a root of its denominator."""


def _format_terms(coeffs: tuple[Fraction, ...]) -> str:
    if not coeffs:
        return "0"
    parts: list[str] = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        elif mag == 1:
            body = "q" if i == 1 else f"q^{i}"
        else:
            body = f"{mag}*q" if i == 1 else f"{mag}*q^{i}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


class QPoly:
    """Dense univariate polynomial in q over the rationals.

    ``coeffs[i]`` holds the coefficient of q**i.  Trailing zeros are stripped,
    so the zero polynomial has an empty coefficient tuple and ``degree`` None.
    """

    __slots__ = ("_coeffs", "_intform")

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs: tuple[Fraction, ...] = tuple(cs)
        self._intform: tuple[list[int], int] | None = None

    @classmethod
    def zero(cls) -> QPoly:
        return cls()

    @classmethod
    def one(cls) -> QPoly:
        return cls((1,))

    @classmethod
    def constant(cls, c: Scalar) -> QPoly:
        return cls((c,))

    @classmethod
    def variable(cls) -> QPoly:
        """The polynomial q itself."""
        return cls((0, 1))

    @classmethod
    def monomial(cls, c: Scalar, power: int) -> QPoly:
        if power < 0:
            raise ValueError("monomial power must be non-negative")
        return cls((0,) * power + (c,))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial (never a number)."""
        return len(self._coeffs) - 1 if self._coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def leading_coefficient(self) -> Fraction:
        if not self._coeffs:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self._coeffs[-1]

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self._coeffs):
            return self._coeffs[power]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self == QPoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("QPoly", self._coeffs))

    def __neg__(self) -> QPoly:
        return QPoly(tuple(-c for c in self._coeffs))

    def __add__(self, other: QPoly | Scalar) -> QPoly:
        if not isinstance(other, (QPoly, int, Fraction)):
            return NotImplemented
        other = _as_poly(other)
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    __radd__ = __add__

    def __sub__(self, other: QPoly | Scalar) -> QPoly:
        if not isinstance(other, (QPoly, int, Fraction)):
            return NotImplemented
        return self + (-_as_poly(other))

    def __rsub__(self, other: QPoly | Scalar) -> QPoly:
        if not isinstance(other, (QPoly, int, Fraction)):
            return NotImplemented
        return _as_poly(other) + (-self)

    def _int_form(self) -> tuple[list[int], int]:
        # Common-denominator view: self == (1/den) * sum(nums[i] q^i).
        if self._intform is None:
            den = 1
            for c in self._coeffs:
                den = den * c.denominator // math.gcd(den, c.denominator)
            nums = [c.numerator * (den // c.denominator) for c in self._coeffs]
            self._intform = (nums, den)
        return self._intform

    def __mul__(self, other: QPoly | Scalar) -> QPoly:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return QPoly()
            f = Fraction(other)
            return QPoly(tuple(c * f for c in self._coeffs))
        if not isinstance(other, QPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return QPoly()
        # Convolve over Z for speed, then divide the common denominator back out.
        a, da = self._int_form()
        b, db = other._int_form()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        d = da * db
        return QPoly(tuple(Fraction(n, d) for n in out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial; use QRat")
        result = QPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: QPoly | Scalar) -> tuple[QPoly, QPoly]:
        other = _as_poly(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        db = other.degree
        lb = other.leading_coefficient
        quo = [Fraction(0)] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            factor = rem[-1] / lb
            shift = len(rem) - 1 - db
            quo[shift] = factor
            for i, c in enumerate(other._coeffs):
                rem[shift + i] -= factor * c
            while rem and rem[-1] == 0:
                rem.pop()
        return QPoly(quo), QPoly(rem)

    def __floordiv__(self, other: QPoly | Scalar) -> QPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: QPoly | Scalar) -> QPoly:
        return divmod(self, other)[1]

    def exact_div(self, other: QPoly | Scalar) -> QPoly:
        """Divide, requiring a zero remainder."""
        quo, rem = divmod(self, other)
        if not rem.is_zero:
            raise InexactDivisionError(f"{self} is not divisible by {other}")
        return quo

    def monic(self) -> QPoly:
        if self.is_zero:
            return self
        lc = self.leading_coefficient
        return self if lc == 1 else self * (Fraction(1) / lc)

    def evaluate(self, q0: Scalar) -> Fraction:
        """Exact value at q = q0 (Horner)."""
        q0 = Fraction(q0)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * q0 + c
        return acc

    def __str__(self) -> str:
        return _format_terms(self._coeffs)

    def __repr__(self) -> str:
        return f"QPoly({list(self._coeffs)!r})"


def _as_poly(x: QPoly | Scalar) -> QPoly:
    if isinstance(x, QPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return QPoly.constant(x)
    raise TypeError(f"cannot interpret {x!r} as a polynomial in q")


def _int_primitive(v: list[int]) -> list[int]:
    g = 0
    for c in v:
        g = math.gcd(g, c)
    if g == 0:
        return []
    if v[-1] < 0:
        g = -g
    return [c // g for c in v]


def _int_split(v: list[int]) -> tuple[list[int], int]:
    # v = cont * prim with prim having content 1 and positive leading coefficient.
    g = 0
    for c in v:
        g = math.gcd(g, c)
    if g == 0:
        return [], 0
    if v[-1] < 0:
        g = -g
    return [c // g for c in v], g


def _int_exact_div(a: list[int], b: list[int]) -> list[int]:
    # Exact division in Z[q]; valid whenever b is primitive and divides a in Q[q].
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    quo = [0] * max(len(r) - db, 0)
    while r and len(r) - 1 >= db:
        lead, rem = divmod(r[-1], lb)
        if rem:
            raise InexactDivisionError("integer polynomial division is not exact")
        shift = len(r) - 1 - db
        quo[shift] = lead
        for i, bc in enumerate(b):
            r[shift + i] -= lead * bc
        while r and r[-1] == 0:
            r.pop()
    if r:
        raise InexactDivisionError("integer polynomial division left a remainder")
    return quo


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    # Primitive remainder sequence; result is primitive with positive lead.
    u = _int_primitive(list(a))
    v = _int_primitive(list(b))
    if len(u) < len(v):
        u, v = v, u
    while v:
        u, v = v, _int_primitive(_int_prem(u, v))
    return u


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    # Pseudo-remainder over Z; any accumulated content is removed by the caller.
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while r and len(r) - 1 >= db:
        lead = r[-1]
        r = [lb * c for c in r]
        shift = len(r) - 1 - db
        for i, bc in enumerate(b):
            r[shift + i] -= lead * bc
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd in Q[q], via the primitive remainder sequence over Z."""
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    return QPoly(_int_gcd(a._int_form()[0], b._int_form()[0])).monic()


@functools.cache
def q_integer(n: int) -> QPoly:
    """[n]_q = 1 + q + ... + q^(n-1); the empty sum for n = 0."""
    if n < 0:
        raise ValueError("q_integer requires n >= 0")
    return QPoly((1,) * n)


@functools.cache
def q_factorial(n: int) -> QPoly:
    """[n]_q! = [n]_q [n-1]_q ... [1]_q, with [0]_q! = 1."""
    if n < 0:
        raise ValueError("q_factorial requires n >= 0")
    if n == 0:
        return QPoly.one()
    return q_factorial(n - 1) * q_integer(n)


@functools.cache
def q_binomial(n: int, k: int) -> QPoly:
    """Gaussian binomial coefficient [n choose k]_q, always a polynomial."""
    if n < 0:
        raise ValueError("q_binomial requires n >= 0")
    if k < 0 or k > n:
        raise ValueError(f"q_binomial index k={k} out of range for n={n}")
    # The factorial quotient must divide exactly; a remainder would mean the
    # polynomial arithmetic itself is broken, which exact_div surfaces.
    return q_factorial(n).exact_div(q_factorial(k) * q_factorial(n - k))


class QRat:
    """Reduced element of Q(q): numerator/denominator in canonical form.

    Canonical form means gcd(num, den) is a nonzero constant and den is monic,
    so two values are equal in Q(q) exactly when they are structurally equal.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num: QPoly | QRat | Scalar, den: QPoly | Scalar = 1) -> None:
        if isinstance(num, QRat):
            if _as_poly(den) != QPoly.one():
                raise TypeError("cannot re-divide an already rational value")
            self._num, self._den = num._num, num._den
            return
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator in Q(q)")
        if num.is_zero:
            self._num, self._den = QPoly.zero(), QPoly.one()
            return
        if den.degree == 0:
            lc = den.leading_coefficient
            self._num = num if lc == 1 else num * (Fraction(1) / lc)
            self._den = QPoly.one()
            return
        # Reduce entirely over Z: split both sides into content * primitive part,
        # cancel the primitive gcd, and fold contents into one scalar.
        n_ints, n_den = num._int_form()
        d_ints, d_den = den._int_form()
        n_prim, n_cont = _int_split(n_ints)
        d_prim, d_cont = _int_split(d_ints)
        g = _int_gcd(n_prim, d_prim)
        if len(g) > 1:
            n_prim = _int_exact_div(n_prim, g)
            d_prim = _int_exact_div(d_prim, g)
        lead = d_prim[-1]
        scalar = Fraction(n_cont * d_den, d_cont * n_den * lead)
        self._num = QPoly(tuple(scalar * c for c in n_prim))
        self._den = QPoly(tuple(Fraction(c, lead) for c in d_prim))

    @property
    def num(self) -> QPoly:
        return self._num

    @property
    def den(self) -> QPoly:
        return self._den

    @property
    def is_zero(self) -> bool:
        return self._num.is_zero

    def __bool__(self) -> bool:
        return not self._num.is_zero

    def __eq__(self, other: object) -> bool:
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        return hash(("QRat", self._num.coeffs, self._den.coeffs))

    def __neg__(self) -> QRat:
        return QRat(-self._num, self._den)

    def __add__(self, other: QRat | QPoly | Scalar) -> QRat:
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return QRat(self._num * other._den + other._num * self._den,
                    self._den * other._den)

    __radd__ = __add__

    def __sub__(self, other: QRat | QPoly | Scalar) -> QRat:
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: QRat | QPoly | Scalar) -> QRat:
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: QRat | QPoly | Scalar) -> QRat:
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return QRat(self._num * other._num, self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self, other: QRat | QPoly | Scalar) -> QRat:
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero in Q(q)")
        return QRat(self._num * other._den, self._den * other._num)

    def __rtruediv__(self, other: QRat | QPoly | Scalar) -> QRat:
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> QRat:
        if n >= 0:
            return QRat(self._num ** n, self._den ** n)
        if self.is_zero:
            raise ZeroDivisionError("zero has no negative powers")
        return QRat(self._den ** (-n), self._num ** (-n))

    def evaluate(self, q0: Scalar) -> Fraction:
        """Exact rational value at q = q0; PoleError at denominator roots."""
        d = self._den.evaluate(q0)
        if d == 0:
            raise PoleError(f"denominator vanishes at q = {q0}")
        return self._num.evaluate(q0) / d

    def __str__(self) -> str:
        return f"({self._num}) / ({self._den})"

    def __repr__(self) -> str:
        return f"QRat({self._num!r}, {self._den!r})"


def _coerce_rat(x: object) -> QRat | None:
    if isinstance(x, QRat):
        return x
    if isinstance(x, (QPoly, int, Fraction)):
        return QRat(x)
    return None


def _require_rat(x: QRat | QPoly | Scalar) -> QRat:
    r = _coerce_rat(x)
    if r is None:
        raise TypeError(f"cannot interpret {x!r} as an element of Q(q)")
    return r


def qrat_normalize(num: QPoly | Scalar, den: QPoly | Scalar) -> QRat:
    """Canonical reduced form of num/den (gcd removed, den monic)."""
    return QRat(num, den)


def qrat_eval(x: QRat, q0: Scalar) -> Fraction:
    """Exact value of x at q = q0; PoleError if the denominator vanishes."""
    return x.evaluate(q0)


@functools.cache
def q_power(e: int) -> QRat:
    """q**e as an element of Q(q); e may be negative."""
    if e >= 0:
        return QRat(QPoly.monomial(1, e))
    return QRat(QPoly.one(), QPoly.monomial(1, -e))


QRAT_ZERO = QRat(0)
QRAT_ONE = QRat(1)
