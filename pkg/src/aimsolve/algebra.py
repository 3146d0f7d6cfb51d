"""Extended-precision reals and Laurent-polynomial algebra.

``ExtReal`` is the scalar carrier for the whole package: an immutable
arbitrary-precision real with an explicit significand width.  Mixed-precision
arithmetic is performed at the wider of the two operand precisions, and any
operation that would produce a non-finite value raises ``PrecisionError``
instead of returning NaN/inf.

``LaurentPoly`` is a univariate polynomial in u with integer exponents that
may be negative, stored densely with an exponent offset.  The iteration
recurrence fills exponent ranges densely, which is why a dense layout with a
``min_exp`` offset beats a sparse map here.  Normalization strips only
coefficients that are exactly zero; there is no epsilon-trimming, because
trimming would silently alter the sign structure of the quantization
residual.
"""

from __future__ import annotations

import gmpy2

from .errors import DomainError, PrecisionError

__all__ = [
    "MIN_PRECISION_BITS",
    "DEFAULT_PRECISION_BITS",
    "ExtReal",
    "LaurentPoly",
]

MIN_PRECISION_BITS = 53
DEFAULT_PRECISION_BITS = 192

# One context per precision, with traps on so overflow/invalid results raise
# instead of saturating to inf/nan.
_CONTEXTS: dict[int, "gmpy2.context"] = {}

_GMPY_ERRORS = (
    gmpy2.OverflowResultError,
    gmpy2.InvalidOperationError,
    gmpy2.DivisionByZeroError,
    gmpy2.RangeError,
)


def _context(bits: int):
    ctx = _CONTEXTS.get(bits)
    if ctx is None:
        if bits < MIN_PRECISION_BITS:
            raise ValueError(
                f"precision_bits must be >= {MIN_PRECISION_BITS}, got {bits}"
            )
        ctx = gmpy2.context(
            precision=bits,
            trap_overflow=True,
            trap_divzero=True,
            trap_invalid=True,
        )
        _CONTEXTS[bits] = ctx
    return ctx


def _from_binary(data: bytes) -> "ExtReal":
    return ExtReal._wrap(gmpy2.from_binary(data))


class ExtReal:
    """Immutable arbitrary-precision real scalar.

    Values are constructed from int, float, str or another ExtReal.  Decimal
    strings are converted directly at the target precision, so string input
    is the lossless way to feed decimal constants in.
    """

    __slots__ = ("_v",)

    def __init__(self, value, precision_bits: int | None = None):
        if isinstance(value, ExtReal):
            bits = precision_bits or value._v.precision
            _context(bits)
            v = gmpy2.mpfr(value._v, bits)
        elif isinstance(value, gmpy2.mpfr):
            bits = precision_bits or max(value.precision, MIN_PRECISION_BITS)
            _context(bits)
            v = gmpy2.mpfr(value, bits)
        else:
            bits = precision_bits or DEFAULT_PRECISION_BITS
            _context(bits)
            try:
                v = gmpy2.mpfr(value, bits)
            except (TypeError, ValueError) as exc:
                raise TypeError(f"cannot build ExtReal from {value!r}") from exc
        if not gmpy2.is_finite(v):
            raise PrecisionError(f"non-finite value {value!r}")
        self._v = v

    @classmethod
    def _wrap(cls, v) -> "ExtReal":
        out = object.__new__(cls)
        out._v = v
        return out

    @property
    def precision_bits(self) -> int:
        return self._v.precision

    @property
    def value(self):
        """The underlying gmpy2.mpfr."""
        return self._v

    # -- coercion helpers ---------------------------------------------------

    def _other(self, other):
        if isinstance(other, ExtReal):
            return other._v
        if isinstance(other, (int, float)):
            return gmpy2.mpfr(other, self._v.precision)
        if isinstance(other, str):
            return gmpy2.mpfr(other, self._v.precision)
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        ov = self._other(other)
        if ov is None:
            return NotImplemented
        ctx = _context(max(self._v.precision, ov.precision))
        try:
            return ExtReal._wrap(ctx.add(self._v, ov))
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc

    __radd__ = __add__

    def __sub__(self, other):
        ov = self._other(other)
        if ov is None:
            return NotImplemented
        ctx = _context(max(self._v.precision, ov.precision))
        try:
            return ExtReal._wrap(ctx.sub(self._v, ov))
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc

    def __rsub__(self, other):
        ov = self._other(other)
        if ov is None:
            return NotImplemented
        ctx = _context(max(self._v.precision, ov.precision))
        return ExtReal._wrap(ctx.sub(ov, self._v))

    def __mul__(self, other):
        ov = self._other(other)
        if ov is None:
            return NotImplemented
        ctx = _context(max(self._v.precision, ov.precision))
        try:
            return ExtReal._wrap(ctx.mul(self._v, ov))
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc

    __rmul__ = __mul__

    def __truediv__(self, other):
        ov = self._other(other)
        if ov is None:
            return NotImplemented
        ctx = _context(max(self._v.precision, ov.precision))
        try:
            return ExtReal._wrap(ctx.div(self._v, ov))
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc

    def __rtruediv__(self, other):
        ov = self._other(other)
        if ov is None:
            return NotImplemented
        ctx = _context(max(self._v.precision, ov.precision))
        try:
            return ExtReal._wrap(ctx.div(ov, self._v))
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc

    def __neg__(self):
        return ExtReal._wrap(_context(self._v.precision).minus(self._v))

    def __abs__(self):
        return ExtReal._wrap(abs(self._v))

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        ctx = _context(self._v.precision)
        try:
            return ExtReal._wrap(ctx.pow(self._v, exponent))
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc

    def sqrt(self) -> "ExtReal":
        if self._v < 0:
            raise DomainError(f"sqrt of negative value {self}")
        return ExtReal._wrap(_context(self._v.precision).sqrt(self._v))

    def nth_root(self, n: int) -> "ExtReal":
        if self._v < 0:
            raise DomainError(f"root of negative value {self}")
        return ExtReal._wrap(_context(self._v.precision).rootn(self._v, n))

    def exp(self) -> "ExtReal":
        try:
            return ExtReal._wrap(_context(self._v.precision).exp(self._v))
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc

    def log(self) -> "ExtReal":
        if self._v <= 0:
            raise DomainError(f"log of non-positive value {self}")
        return ExtReal._wrap(_context(self._v.precision).log(self._v))

    # -- comparisons (exact, independent of precision) ----------------------

    def __eq__(self, other):
        ov = self._other(other)
        return NotImplemented if ov is None else self._v == ov

    def __ne__(self, other):
        ov = self._other(other)
        return NotImplemented if ov is None else self._v != ov

    def __lt__(self, other):
        ov = self._other(other)
        return NotImplemented if ov is None else self._v < ov

    def __le__(self, other):
        ov = self._other(other)
        return NotImplemented if ov is None else self._v <= ov

    def __gt__(self, other):
        ov = self._other(other)
        return NotImplemented if ov is None else self._v > ov

    def __ge__(self, other):
        ov = self._other(other)
        return NotImplemented if ov is None else self._v >= ov

    def __hash__(self):
        return hash(self._v)

    def __bool__(self):
        return self._v != 0

    def __float__(self):
        return float(self._v)

    def __format__(self, spec):
        return format(self._v, spec)

    def __str__(self):
        return str(self._v)

    def __repr__(self):
        return f"ExtReal('{self._v}', precision_bits={self._v.precision})"

    def __reduce__(self):
        return (_from_binary, (gmpy2.to_binary(self._v),))


def _as_mpfr(value, bits: int):
    if isinstance(value, ExtReal):
        return value._v
    return gmpy2.mpfr(value, bits)


class LaurentPoly:
    """Polynomial in u with integer exponents, possibly negative.

    Stored densely: ``coeffs[i]`` multiplies ``u**(min_exp + i)``.  The
    canonical zero polynomial has no coefficients and ``min_exp == 0``.
    Instances are immutable; all operations return new polynomials and are
    safe to share across tasks.
    """

    __slots__ = ("_min_exp", "_vals")

    def __init__(self, coeffs, min_exp: int = 0, precision_bits: int | None = None):
        bits = precision_bits or DEFAULT_PRECISION_BITS
        vals = [_as_mpfr(c, bits) for c in coeffs]
        for v in vals:
            if not gmpy2.is_finite(v):
                raise PrecisionError("non-finite polynomial coefficient")
        lo = 0
        hi = len(vals)
        while lo < hi and vals[lo] == 0:
            lo += 1
        while hi > lo and vals[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            self._min_exp = 0
            self._vals = ()
        else:
            self._min_exp = min_exp + lo
            self._vals = tuple(vals[lo:hi])

    @classmethod
    def _raw(cls, vals, min_exp: int) -> "LaurentPoly":
        """Build from already-normalized mpfr values (internal)."""
        out = object.__new__(cls)
        lo = 0
        hi = len(vals)
        while lo < hi and vals[lo] == 0:
            lo += 1
        while hi > lo and vals[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            out._min_exp = 0
            out._vals = ()
        else:
            out._min_exp = min_exp + lo
            out._vals = tuple(vals[lo:hi])
        return out

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw([], 0)

    @classmethod
    def from_terms(cls, terms, precision_bits: int | None = None) -> "LaurentPoly":
        """Build from an {exponent: coefficient} mapping."""
        if not terms:
            return cls.zero()
        lo = min(terms)
        hi = max(terms)
        coeffs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = c
        return cls(coeffs, lo, precision_bits)

    @classmethod
    def constant(cls, c, precision_bits: int | None = None) -> "LaurentPoly":
        return cls([c], 0, precision_bits)

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._vals

    @property
    def min_exp(self) -> int:
        return self._min_exp

    @property
    def max_exp(self) -> int | None:
        if not self._vals:
            return None
        return self._min_exp + len(self._vals) - 1

    @property
    def coeffs(self) -> tuple[ExtReal, ...]:
        return tuple(ExtReal._wrap(v) for v in self._vals)

    @property
    def precision_bits(self) -> int:
        if not self._vals:
            return MIN_PRECISION_BITS
        return max(v.precision for v in self._vals)

    def coefficient(self, exponent: int) -> ExtReal:
        i = exponent - self._min_exp
        if 0 <= i < len(self._vals):
            return ExtReal._wrap(self._vals[i])
        return ExtReal(0, self.precision_bits)

    def terms(self) -> dict[int, ExtReal]:
        return {
            self._min_exp + i: ExtReal._wrap(v)
            for i, v in enumerate(self._vals)
            if v != 0
        }

    # -- algebra ------------------------------------------------------------

    def _op_bits(self, other: "LaurentPoly") -> int:
        return max(self.precision_bits, other.precision_bits)

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._vals:
            return other
        if not other._vals:
            return self
        ctx = _context(self._op_bits(other))
        lo = min(self._min_exp, other._min_exp)
        hi = max(self._min_exp + len(self._vals), other._min_exp + len(other._vals))
        zero = gmpy2.mpfr(0)
        out = [zero] * (hi - lo)
        off = self._min_exp - lo
        for i, v in enumerate(self._vals):
            out[off + i] = v
        off = other._min_exp - lo
        add = ctx.add
        for i, v in enumerate(other._vals):
            out[off + i] = add(out[off + i], v)
        return LaurentPoly._raw(out, lo)

    def __neg__(self):
        return LaurentPoly._raw([-v for v in self._vals], self._min_exp)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (ExtReal, int, float)):
            ov = _as_mpfr(other, self.precision_bits)
            ctx = _context(max(self.precision_bits, ov.precision))
            mul = ctx.mul
            return LaurentPoly._raw([mul(v, ov) for v in self._vals], self._min_exp)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._vals or not other._vals:
            return LaurentPoly.zero()
        ctx = _context(self._op_bits(other))
        # iterate the sparser operand on the outside; skip exact zeros
        if len(self._vals) <= len(other._vals):
            a_vals, b_vals = self._vals, other._vals
        else:
            a_vals, b_vals = other._vals, self._vals
        zero = gmpy2.mpfr(0)
        out = [zero] * (len(a_vals) + len(b_vals) - 1)
        mul = ctx.mul
        add = ctx.add
        try:
            for i, av in enumerate(a_vals):
                if av == 0:
                    continue
                for j, bv in enumerate(b_vals):
                    if bv == 0:
                        continue
                    k = i + j
                    out[k] = add(out[k], mul(av, bv))
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc
        return LaurentPoly._raw(out, self._min_exp + other._min_exp)

    __rmul__ = __mul__

    def differentiate(self) -> "LaurentPoly":
        """d/du: the term c*u**e maps to c*e*u**(e-1); e == 0 terms vanish."""
        if not self._vals:
            return self
        ctx = _context(self.precision_bits)
        mul = ctx.mul
        zero = gmpy2.mpfr(0)
        out = [zero] * len(self._vals)
        for i, v in enumerate(self._vals):
            e = self._min_exp + i
            if e != 0 and v != 0:
                out[i] = mul(v, e)
        return LaurentPoly._raw(out, self._min_exp - 1)

    def evaluate(self, u0) -> ExtReal:
        """Value at u0, by Horner accumulation split at exponent zero.

        Raises DomainError for u0 <= 0 when negative exponents are present.
        """
        x = _as_mpfr(u0, self.precision_bits)
        bits = max(self.precision_bits, x.precision)
        ctx = _context(bits)
        if not self._vals:
            return ExtReal._wrap(gmpy2.mpfr(0, bits))
        if self._min_exp < 0 and x <= 0:
            raise DomainError(
                f"evaluation point {u0} is invalid for a polynomial with "
                f"negative exponents (min_exp={self._min_exp})"
            )
        add = ctx.add
        mul = ctx.mul
        try:
            split = max(0, -self._min_exp)
            total = gmpy2.mpfr(0, bits)
            pos = self._vals[split:]
            if pos:
                acc = gmpy2.mpfr(0, bits)
                for v in reversed(pos):
                    acc = add(mul(acc, x), v)
                # lowest exponent of the positive block
                e0 = self._min_exp + split
                if e0 > 0:
                    acc = mul(acc, ctx.pow(x, e0))
                total = acc
            neg = self._vals[:split]
            if neg:
                w = ctx.div(gmpy2.mpfr(1), x)
                acc = gmpy2.mpfr(0, bits)
                for v in neg:  # exponents min_exp .. -1, ascending
                    acc = add(mul(acc, w), v)
                total = add(total, mul(acc, w))
            return ExtReal._wrap(total)
        except _GMPY_ERRORS as exc:
            raise PrecisionError(str(exc)) from exc

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._min_exp == other._min_exp and all(
            a == b for a, b in zip(self._vals, other._vals)
        ) and len(self._vals) == len(other._vals)

    __hash__ = None

    def __repr__(self):
        if not self._vals:
            return "LaurentPoly(0)"
        parts = []
        for i, v in enumerate(self._vals):
            if v == 0:
                continue
            e = self._min_exp + i
            if e == 0:
                parts.append(f"{v}")
            else:
                parts.append(f"{v}*u^{e}")
        return "LaurentPoly(" + " + ".join(parts) + ")"
