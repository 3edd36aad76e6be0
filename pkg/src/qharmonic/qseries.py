"""Truncated bivariate series in the q-divided-power basis and their operators.

A ``BiSeries`` stores the coefficient array a(n, k) of a series written as

    sum a(n, k) * X^n Y^k / ([n]_q! [k]_q!)

for 0 <= n <= valid_x, 0 <= k <= valid_y.  In this basis the q-partial
derivatives are plain index shifts and the dilations X -> qX, Y -> qY are
diagonal scalings, so every operator identity verified here is a finite exact
statement about arrays of QRat values.

Valid-order tracking is strict: a q-partial or a multiplication by a variable
consumes one order on its axis, dilations and scalars preserve orders, sums and
comparisons restrict to the intersection of valid regions.  Truncation can
therefore never masquerade as equality.

``SeriesOp`` is a small composable algebra of such operators.  Operators
multiply as compositions (right factor applied first), add pointwise, and admit
scalar multiples from Q(q), which lets the package spell composite operators
the way the identities state them, e.g. ``q * PARTIAL_X * LAMBDA_Y + PARTIAL_Y - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .exactq import QPoly, QRat, QRAT_ONE, QRAT_ZERO, Scalar, _require_rat, q_factorial, q_integer, q_power, q_binomial
from .harmonic import QSeq, c_value, delta_qk_closed
from .multiindex import MultiIndex

AxisName = str  # "x" or "y"


class TruncationError(ValueError):
    """An operation needed more valid orders than the series carries."""


def _check_axis(axis: AxisName) -> str:
    a = axis.lower()
    if a not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return a


class BiSeries:
    """Coefficient array of a truncated bivariate series, divided-power basis."""

    __slots__ = ("_rows", "_vx", "_vy")

    def __init__(self, rows, valid_x: int | None = None, valid_y: int | None = None) -> None:
        self._rows: tuple[tuple[QRat, ...], ...] = tuple(
            tuple(_require_rat(c) for c in row) for row in rows
        )
        vx = len(self._rows) - 1
        if vx < 0:
            raise ValueError("a series needs at least the (0,0) coefficient")
        widths = {len(r) for r in self._rows}
        if len(widths) != 1:
            raise ValueError("ragged coefficient rows")
        vy = widths.pop() - 1
        if vy < 0:
            raise ValueError("a series needs at least the (0,0) coefficient")
        if valid_x is not None and valid_x != vx:
            raise ValueError(f"declared valid_x={valid_x} but rows give {vx}")
        if valid_y is not None and valid_y != vy:
            raise ValueError(f"declared valid_y={valid_y} but rows give {vy}")
        self._vx, self._vy = vx, vy

    @classmethod
    def from_function(cls, fn: Callable[[int, int], QRat | Scalar],
                      valid_x: int, valid_y: int) -> BiSeries:
        if valid_x < 0 or valid_y < 0:
            raise ValueError("valid orders must be non-negative")
        return cls(tuple(tuple(fn(n, k) for k in range(valid_y + 1))
                         for n in range(valid_x + 1)))

    @classmethod
    def zero(cls, valid_x: int, valid_y: int) -> BiSeries:
        return cls.from_function(lambda n, k: QRAT_ZERO, valid_x, valid_y)

    @property
    def valid_x(self) -> int:
        return self._vx

    @property
    def valid_y(self) -> int:
        return self._vy

    @property
    def valid_region(self) -> tuple[int, int]:
        return (self._vx, self._vy)

    def coeff(self, n: int, k: int) -> QRat:
        if not (0 <= n <= self._vx and 0 <= k <= self._vy):
            raise IndexError(f"({n},{k}) outside valid region {self.valid_region}")
        return self._rows[n][k]

    def enumerate(self) -> Iterator[tuple[int, int, QRat]]:
        for n, row in enumerate(self._rows):
            for k, c in enumerate(row):
                yield n, k, c

    def restrict(self, valid_x: int, valid_y: int) -> BiSeries:
        if valid_x > self._vx or valid_y > self._vy:
            raise TruncationError("cannot enlarge a valid region")
        return BiSeries(tuple(row[: valid_y + 1] for row in self._rows[: valid_x + 1]))

    def is_zero(self) -> bool:
        return all(c.is_zero for _, _, c in self.enumerate())

    def scale(self, factor: QRat | QPoly | Scalar) -> BiSeries:
        f = _require_rat(factor)
        return BiSeries(tuple(tuple(f * c for c in row) for row in self._rows))

    def __neg__(self) -> BiSeries:
        return self.scale(-1)

    def __add__(self, other: BiSeries) -> BiSeries:
        if not isinstance(other, BiSeries):
            return NotImplemented
        vx = min(self._vx, other._vx)
        vy = min(self._vy, other._vy)
        return BiSeries(tuple(
            tuple(self._rows[n][k] + other._rows[n][k] for k in range(vy + 1))
            for n in range(vx + 1)
        ))

    def __sub__(self, other: BiSeries) -> BiSeries:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self + (-other)

    def agrees_with(self, other: BiSeries) -> bool:
        """Equality over the intersection of the two valid regions."""
        return self.first_discrepancy(other) is None

    def first_discrepancy(self, other: BiSeries) -> tuple[int, int, QRat] | None:
        """Smallest (n, k) where the series differ on the common region, with the difference."""
        for n in range(min(self._vx, other._vx) + 1):
            for k in range(min(self._vy, other._vy) + 1):
                d = self._rows[n][k] - other._rows[n][k]
                if not d.is_zero:
                    return n, k, d
        return None

    def __repr__(self) -> str:
        return f"BiSeries(valid_x={self._vx}, valid_y={self._vy})"


# --- primitive series operations ---------------------------------------------

def q_partial(s: BiSeries, axis: AxisName) -> BiSeries:
    """q-partial derivative: an index shift along the axis, one order consumed."""
    axis = _check_axis(axis)
    if axis == "x":
        if s.valid_x < 1:
            raise TruncationError("no valid orders left on axis X")
        return BiSeries.from_function(lambda n, k: s.coeff(n + 1, k),
                                      s.valid_x - 1, s.valid_y)
    if s.valid_y < 1:
        raise TruncationError("no valid orders left on axis Y")
    return BiSeries.from_function(lambda n, k: s.coeff(n, k + 1),
                                  s.valid_x, s.valid_y - 1)


def lambda_scale(s: BiSeries, axis: AxisName, sign: int = 1) -> BiSeries:
    """Dilation X -> qX (or Y -> qY): multiply a(n, k) by q^(+-n) (resp. q^(+-k))."""
    axis = _check_axis(axis)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if axis == "x":
        return BiSeries.from_function(lambda n, k: q_power(sign * n) * s.coeff(n, k),
                                      s.valid_x, s.valid_y)
    return BiSeries.from_function(lambda n, k: q_power(sign * k) * s.coeff(n, k),
                                  s.valid_x, s.valid_y)


def mul_by_var(s: BiSeries, axis: AxisName) -> BiSeries:
    """Multiply by X or Y: a'(n,k) = [n]_q a(n-1,k); one order consumed on the axis."""
    axis = _check_axis(axis)
    if axis == "x":
        if s.valid_x < 1:
            raise TruncationError("no valid orders left on axis X")
        return BiSeries.from_function(
            lambda n, k: QRat(q_integer(n)) * s.coeff(n - 1, k) if n >= 1 else QRAT_ZERO,
            s.valid_x - 1, s.valid_y)
    if s.valid_y < 1:
        raise TruncationError("no valid orders left on axis Y")
    return BiSeries.from_function(
        lambda n, k: QRat(q_integer(k)) * s.coeff(n, k - 1) if k >= 1 else QRAT_ZERO,
        s.valid_x, s.valid_y - 1)


def series_mul(s: BiSeries, t: BiSeries) -> BiSeries:
    """Product of two series; Gaussian-binomial convolution in this basis."""
    vx = min(s.valid_x, t.valid_x)
    vy = min(s.valid_y, t.valid_y)

    def prod_coeff(n: int, k: int) -> QRat:
        acc = QRAT_ZERO
        for i in range(n + 1):
            for j in range(k + 1):
                a = s.coeff(i, j)
                if a.is_zero:
                    continue
                b = t.coeff(n - i, k - j)
                if b.is_zero:
                    continue
                acc = acc + QRat(q_binomial(n, i) * q_binomial(k, j)) * a * b
        return acc

    return BiSeries.from_function(prod_coeff, vx, vy)


# --- generating functions ------------------------------------------------------

def q_exp(valid_x: int, valid_y: int) -> BiSeries:
    """The q-exponential e(Y): every pure-Y divided-power coefficient is 1."""
    return BiSeries.from_function(lambda n, k: QRAT_ONE if n == 0 else QRAT_ZERO,
                                  valid_x, valid_y)


def qshift_product(first: int, last: int, valid_x: int, valid_y: int) -> BiSeries:
    """The polynomial (X - q^first Y)(X - q^(first+1) Y) ... (X - q^last Y).

    Polynomials are exact, so any requested valid region is fully known.
    ``last < first`` gives the empty product 1.
    """
    if first < 1:
        raise ValueError("shift exponents start at 1")
    coeffs: dict[tuple[int, int], QPoly] = {(0, 0): QPoly.one()}
    for j in range(first, last + 1):
        nxt: dict[tuple[int, int], QPoly] = {}
        qj = QPoly.monomial(1, j)
        for (i, jj), c in coeffs.items():
            nxt[(i + 1, jj)] = nxt.get((i + 1, jj), QPoly.zero()) + c
            nxt[(i, jj + 1)] = nxt.get((i, jj + 1), QPoly.zero()) - qj * c
        coeffs = nxt

    def coeff(n: int, k: int) -> QRat:
        mono = coeffs.get((n, k))
        if mono is None:
            return QRAT_ZERO
        return QRat(mono * q_factorial(n) * q_factorial(k))

    return BiSeries.from_function(coeff, valid_x, valid_y)


def f_a_series(seq: QSeq, valid_x: int, valid_y: int) -> BiSeries:
    """The series sum_n seq(n) (X - qY)...(X - q^n Y) / [n]_q!.

    Each product is expanded in the monomial basis and converted to
    divided-power coefficients; terms of total degree beyond the requested
    region cannot touch it, so the truncation is exact.
    """
    rows = [[QRAT_ZERO] * (valid_y + 1) for _ in range(valid_x + 1)]
    coeffs: dict[tuple[int, int], QPoly] = {(0, 0): QPoly.one()}
    for n in range(valid_x + valid_y + 1):
        if n > 0:
            qn = QPoly.monomial(1, n)
            nxt: dict[tuple[int, int], QPoly] = {}
            for (i, jj), c in coeffs.items():
                if i + jj >= valid_x + valid_y + 1:
                    continue
                nxt[(i + 1, jj)] = nxt.get((i + 1, jj), QPoly.zero()) + c
                nxt[(i, jj + 1)] = nxt.get((i, jj + 1), QPoly.zero()) - qn * c
            coeffs = nxt
        an = seq(n)
        if an.is_zero:
            continue
        weight = an / QRat(q_factorial(n))
        for (i, jj), c in coeffs.items():
            if i <= valid_x and jj <= valid_y and not c.is_zero:
                rows[i][jj] = rows[i][jj] + weight * QRat(c * q_factorial(i) * q_factorial(jj))
    return BiSeries(rows)


def F_a_series(seq: QSeq, valid_x: int, valid_y: int) -> BiSeries:
    """Generating series of all q-differences of seq: a(n,k) = k-th difference at n."""
    return BiSeries.from_function(lambda n, k: delta_qk_closed(seq, n, k),
                                  valid_x, valid_y)


def G_series(mu: MultiIndex, nu: MultiIndex, valid_x: int, valid_y: int) -> BiSeries:
    """Generating series of the double-chain sums: a(n,k) = c_value(mu, nu, n, k)."""
    mu = MultiIndex(mu)
    nu = MultiIndex(nu)
    if mu.weight != nu.weight:
        raise ValueError(f"weight mismatch: |{mu.as_text()}| != |{nu.as_text()}|")
    return BiSeries.from_function(lambda n, k: c_value(mu, nu, n, k),
                                  valid_x, valid_y)


# --- the operator algebra -------------------------------------------------------

class SeriesOp:
    """Composable linear operator on BiSeries.

    ``A * B`` composes (B first), ``A + B`` adds pointwise, scalars from Q(q)
    multiply from either side, and integers coerce to scalar multiples of the
    identity so expressions like ``op - 1`` read as in the identities.
    """

    def apply(self, s: BiSeries) -> BiSeries:
        raise NotImplementedError

    def __mul__(self, other) -> SeriesOp:
        other_op = _as_op(other)
        if other_op is None:
            return NotImplemented
        return _compose(self, other_op)

    def __rmul__(self, other) -> SeriesOp:
        other_op = _as_op(other)
        if other_op is None:
            return NotImplemented
        return _compose(other_op, self)

    def __add__(self, other) -> SeriesOp:
        other_op = _as_op(other)
        if other_op is None:
            return NotImplemented
        return _sum(self, other_op)

    __radd__ = __add__

    def __sub__(self, other) -> SeriesOp:
        other_op = _as_op(other)
        if other_op is None:
            return NotImplemented
        return _sum(self, _negate(other_op))

    def __rsub__(self, other) -> SeriesOp:
        other_op = _as_op(other)
        if other_op is None:
            return NotImplemented
        return _sum(other_op, _negate(self))

    def __neg__(self) -> SeriesOp:
        return _negate(self)


@dataclass(frozen=True)
class ScalarOp(SeriesOp):
    value: QRat

    def apply(self, s: BiSeries) -> BiSeries:
        return s.scale(self.value)

    def __repr__(self) -> str:
        return f"ScalarOp({self.value})"


@dataclass(frozen=True)
class PartialOp(SeriesOp):
    axis: str

    def apply(self, s: BiSeries) -> BiSeries:
        return q_partial(s, self.axis)


@dataclass(frozen=True)
class LambdaOp(SeriesOp):
    axis: str
    sign: int = 1

    def apply(self, s: BiSeries) -> BiSeries:
        return lambda_scale(s, self.axis, self.sign)


@dataclass(frozen=True)
class MulVarOp(SeriesOp):
    axis: str

    def apply(self, s: BiSeries) -> BiSeries:
        return mul_by_var(s, self.axis)


@dataclass(frozen=True)
class DiagQIntOp(SeriesOp):
    """Diagonal a(n,k) -> [n+k+offset]_q a(n,k).

    This is the exact array form of (1 - q^offset Lambda_X Lambda_Y) / (1 - q):
    no division by the polynomial 1 - q ever happens at the array level.
    """

    offset: int

    def apply(self, s: BiSeries) -> BiSeries:
        return BiSeries.from_function(
            lambda n, k: QRat(q_integer(n + k + self.offset)) * s.coeff(n, k),
            s.valid_x, s.valid_y)


@dataclass(frozen=True)
class ComposeOp(SeriesOp):
    factors: tuple[SeriesOp, ...]

    def apply(self, s: BiSeries) -> BiSeries:
        for op in reversed(self.factors):
            s = op.apply(s)
        return s


@dataclass(frozen=True)
class SumOp(SeriesOp):
    terms: tuple[SeriesOp, ...]

    def apply(self, s: BiSeries) -> BiSeries:
        acc = self.terms[0].apply(s)
        for op in self.terms[1:]:
            acc = acc + op.apply(s)
        return acc


def _as_op(x) -> SeriesOp | None:
    if isinstance(x, SeriesOp):
        return x
    if isinstance(x, (int, Fraction, QPoly, QRat)):
        return ScalarOp(_require_rat(x))
    return None


def _compose(a: SeriesOp, b: SeriesOp) -> SeriesOp:
    fa = a.factors if isinstance(a, ComposeOp) else (a,)
    fb = b.factors if isinstance(b, ComposeOp) else (b,)
    return ComposeOp(fa + fb)


def _sum(a: SeriesOp, b: SeriesOp) -> SeriesOp:
    ta = a.terms if isinstance(a, SumOp) else (a,)
    tb = b.terms if isinstance(b, SumOp) else (b,)
    return SumOp(ta + tb)


def _negate(a: SeriesOp) -> SeriesOp:
    if isinstance(a, ScalarOp):
        return ScalarOp(-a.value)
    return _compose(ScalarOp(QRat(-1)), a)


IDENTITY = ScalarOp(QRAT_ONE)
PARTIAL_X = PartialOp("x")
PARTIAL_Y = PartialOp("y")
LAMBDA_X = LambdaOp("x", 1)
LAMBDA_Y = LambdaOp("y", 1)
LAMBDA_X_INV = LambdaOp("x", -1)
LAMBDA_Y_INV = LambdaOp("y", -1)
MUL_X = MulVarOp("x")
MUL_Y = MulVarOp("y")


def apply_op(op: SeriesOp, s: BiSeries) -> BiSeries:
    """Apply a composite operator, tracking the shrunk valid region."""
    return op.apply(s)


def scalar_op(value: QRat | QPoly | Scalar) -> SeriesOp:
    return ScalarOp(_require_rat(value))


def diag_q_integer(offset: int) -> SeriesOp:
    """(1 - q^offset Lambda_X Lambda_Y) / (1 - q) as a diagonal q-integer scaling."""
    return DiagQIntOp(offset)


def q_commutator(a: SeriesOp, b: SeriesOp) -> SeriesOp:
    """[A, B]_q = A B - q B A."""
    return a * b - q_power(1) * (b * a)


def pde_operator() -> SeriesOp:
    """q dX LY + dY - 1: annihilates every difference-generating series."""
    return q_power(1) * PARTIAL_X * LAMBDA_Y + PARTIAL_Y - 1


def lowering_op_i() -> SeriesOp:
    """Sends G(mu, nu) to G of the reduced pair when mu starts >= 2 and nu with 1."""
    return q_power(-1) * LAMBDA_X_INV * LAMBDA_Y_INV * (diag_q_integer(1) - MUL_Y)


def lowering_op_ii() -> SeriesOp:
    """Sends G(mu, nu) to G of the reduced pair when mu starts with 1 and nu >= 2."""
    return diag_q_integer(1) - MUL_X


def lowering_op_i_shifted() -> SeriesOp:
    """The conjugate of lowering_op_i across the annihilating operator; injective."""
    return q_power(-2) * LAMBDA_X_INV * LAMBDA_Y_INV * (diag_q_integer(2) - q_power(1) * MUL_Y)


def lowering_op_ii_shifted() -> SeriesOp:
    """The conjugate of lowering_op_ii across the annihilating operator; injective."""
    return diag_q_integer(2) - MUL_X


def pde_residual(s: BiSeries) -> BiSeries:
    """Residual array q^(k+1) a(n+1,k) + a(n,k+1) - a(n,k) on the shrunk region."""
    return pde_operator().apply(s)


def pde_solve_from_column(column: QSeq | list, valid_x: int, valid_y: int) -> list[list[QRat]]:
    """Unique triangular solution of the annihilation recurrence from column k=0.

    Returns rows[n][k] for n + k <= valid_x, k <= valid_y, built from
    a(n, k+1) = a(n, k) - q^(k+1) a(n+1, k).  Used for kernel-triviality checks:
    a zero first column forces the zero triangle.
    """
    col = column if isinstance(column, QSeq) else QSeq.from_values(column)
    rows: list[list[QRat]] = [[col(n)] for n in range(valid_x + 1)]
    for k in range(min(valid_y, valid_x)):
        for n in range(valid_x - k):
            rows[n].append(rows[n][k] - q_power(k + 1) * rows[n + 1][k])
    return [rows[n][: min(valid_y, valid_x - n) + 1] for n in range(valid_x + 1)]
