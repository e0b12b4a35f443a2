"""Exact arithmetic kernels.

* :class:`QPolynomial` -- dense univariate polynomials in ``q`` over the rationals.
* :class:`QRationalFunction` -- reduced quotients of two ``QPolynomial`` values.
* :class:`TruncatedSeries` -- power series in ``t`` cut off at a fixed order, over
  any coefficient ring (see :mod:`qwitt.rings`).
* :class:`MultiPolynomial` -- sparse polynomials in indexed variables ``x_d``, ``y_d``
  with ``QPolynomial`` coefficients.

Nothing here rounds. Polynomials keep integer numerators plus one common positive
denominator, so products run on Python integers and large ones go through
Kronecker substitution.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import (
    ConstantTermNotOne,
    ConstantTermNotZero,
    NotDivisible,
    NotInvertible,
    ParseError,
    RingLacksRationalDivision,
    RingMismatch,
    UnboundVariable,
)

Rational = int | Fraction

# ---------------------------------------------------------------------------
# integer coefficient-list kernels
# ---------------------------------------------------------------------------

_KRONECKER_MIN = 12


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _add_lists(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _mul_kronecker(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Multiply by packing each coefficient list into one big integer (Kronecker substitution)."""
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    width = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * width - 1)
    half_bytes = half.to_bytes(width, "little")

    def signed_pack(cs: Sequence[int]) -> int:
        # every c + half is a non-negative width-byte digit; subtract the bias afterwards
        biased = int.from_bytes(b"".join((c + half).to_bytes(width, "little") for c in cs), "little")
        return biased - int.from_bytes(half_bytes * len(cs), "little")

    length = len(a) + len(b) - 1
    bias = int.from_bytes(half_bytes * length, "little")
    prod = signed_pack(a) * signed_pack(b) + bias
    raw = prod.to_bytes(width * length, "little")
    out = [
        int.from_bytes(raw[i * width : (i + 1) * width], "little") - half
        for i in range(length)
    ]
    return _trim(out)


def _mul_lists(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if len(a) == 1:
        c = a[0]
        return [c * x for x in b]
    if len(b) == 1:
        c = b[0]
        return [c * x for x in a]
    if min(len(a), len(b)) >= _KRONECKER_MIN:
        return _mul_kronecker(a, b)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _content(coeffs: Sequence[int]) -> int:
    return gcd(*coeffs) if coeffs else 0


def _prem_primitive(a: list[int], b: list[int]) -> list[int]:
    """Primitive part of the pseudo-remainder of ``a`` by ``b`` (integer lists)."""
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= la * c
        _trim(a)
    cont = _content(a)
    if cont > 1:
        a = [c // cont for c in a]
    return a


def _int_gcd_lists(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd (positive leading coefficient) of two integer polynomials."""
    if not a:
        a, b = b, a
    if not b:
        c = _content(a)
        out = [x // c for x in a] if c else []
    else:
        ca, cb = _content(a), _content(b)
        a = [x // ca for x in a]
        b = [x // cb for x in b]
        if len(a) < len(b):
            a, b = b, a
        while b:
            a, b = b, _prem_primitive(a, b)
        out = a
    if out and out[-1] < 0:
        out = [-x for x in out]
    return out


# ---------------------------------------------------------------------------
# QPolynomial
# ---------------------------------------------------------------------------


class QPolynomial:
    """Dense polynomial in ``q`` with rational coefficients.

    Stored as integer numerators ``num`` and one positive denominator ``den``;
    ``gcd(content(num), den) == 1`` and the leading numerator is nonzero.
    """

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, coeffs: Iterable[Rational] = ()) -> None:
        cs = [Fraction(c) for c in coeffs]
        den = 1
        for c in cs:
            den = den // gcd(den, c.denominator) * c.denominator
        num = [int(c * den) for c in cs]
        self._set(num, den)

    def _set(self, num: list[int], den: int) -> None:
        _trim(num)
        if not num:
            den = 1
        elif den != 1:
            g = gcd(_content(num), den)
            if g > 1:
                num = [c // g for c in num]
                den //= g
        self._num = tuple(num)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, num: list[int], den: int = 1) -> "QPolynomial":
        obj = cls.__new__(cls)
        if den < 0:
            num = [-c for c in num]
            den = -den
        obj._set(list(num), den)
        return obj

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls) -> "QPolynomial":
        return cls._raw([])

    @classmethod
    def one(cls) -> "QPolynomial":
        return cls._raw([1])

    @classmethod
    def q(cls) -> "QPolynomial":
        return cls._raw([0, 1])

    @classmethod
    def const(cls, c: Rational) -> "QPolynomial":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, coeff: Rational = 1) -> "QPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def coerce(cls, x: Any) -> "QPolynomial":
        if isinstance(x, QPolynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QPolynomial")

    @classmethod
    def parse(cls, text: str) -> "QPolynomial":
        value = parse_expression(text)
        if isinstance(value, QRationalFunction):
            if not value.is_polynomial():
                raise ParseError(f"not a polynomial: {text!r}")
            return value.numerator
        return value

    # accessors ----------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def degree(self) -> int:
        """Degree in q; the zero polynomial has degree -1."""
        return len(self._num) - 1

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self._num):
            return Fraction(self._num[i], self._den)
        return Fraction(0)

    def leading_coeff(self) -> Fraction:
        return Fraction(self._num[-1], self._den) if self._num else Fraction(0)

    def is_zero(self) -> bool:
        return not self._num

    def is_constant(self) -> bool:
        return len(self._num) <= 1

    def is_one(self) -> bool:
        return self._num == (1,) and self._den == 1

    def is_integral(self) -> bool:
        return self._den == 1

    def content(self) -> Fraction:
        return Fraction(_content(self._num), self._den)

    def constant_value(self) -> Fraction:
        if len(self._num) > 1:
            raise ValueError("polynomial is not constant")
        return self.coeff(0)

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other: Any) -> "QPolynomial":
        if not isinstance(other, QPolynomial):
            if isinstance(other, (int, Fraction)):
                other = QPolynomial.const(other)
            else:
                return NotImplemented
        if self._den == other._den:
            return QPolynomial._raw(_add_lists(self._num, other._num), self._den)
        d = self._den // gcd(self._den, other._den) * other._den
        fa, fb = d // self._den, d // other._den
        return QPolynomial._raw(
            _add_lists([c * fa for c in self._num], [c * fb for c in other._num]), d
        )

    __radd__ = __add__

    def __neg__(self) -> "QPolynomial":
        return QPolynomial._raw([-c for c in self._num], self._den)

    def __sub__(self, other: Any) -> "QPolynomial":
        if isinstance(other, (int, Fraction)):
            other = QPolynomial.const(other)
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "QPolynomial":
        return (-self) + other

    def __mul__(self, other: Any) -> "QPolynomial":
        if isinstance(other, QPolynomial):
            return QPolynomial._raw(_mul_lists(self._num, other._num), self._den * other._den)
        if isinstance(other, int):
            return QPolynomial._raw([c * other for c in self._num], self._den)
        if isinstance(other, Fraction):
            return QPolynomial._raw(
                [c * other.numerator for c in self._num], self._den * other.denominator
            )
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QPolynomial":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = QPolynomial.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other: Any) -> "QPolynomial":
        """Division by a nonzero rational scalar, or exact division by a polynomial."""
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QPolynomial._raw(
                [c * other.denominator for c in self._num], self._den * other.numerator
            )
        if isinstance(other, QPolynomial):
            return self.exact_div(other)
        return NotImplemented

    def divmod(self, other: "QPolynomial") -> tuple["QPolynomial", "QPolynomial"]:
        """Euclidean division over the rationals."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return QPolynomial.zero(), self
        rem = [Fraction(c, self._den) for c in self._num]
        div = [Fraction(c, other._den) for c in other._num]
        lead = div[-1]
        quo = [Fraction(0)] * (len(rem) - len(div) + 1)
        for k in range(len(quo) - 1, -1, -1):
            c = rem[k + len(div) - 1] / lead
            quo[k] = c
            if c:
                for i, dc in enumerate(div):
                    rem[k + i] -= c * dc
        return QPolynomial(quo), QPolynomial(rem[: len(div) - 1])

    def exact_div(self, other: "QPolynomial") -> "QPolynomial":
        quo, rem = self.divmod(other)
        if not rem.is_zero():
            raise NotDivisible(f"{other} does not divide {self} in Q[q]")
        return quo

    def monic(self) -> "QPolynomial":
        if self.is_zero():
            return self
        return self / self.leading_coeff()

    @staticmethod
    def gcd(a: "QPolynomial", b: "QPolynomial") -> "QPolynomial":
        """Monic greatest common divisor (zero if both are zero)."""
        g = _int_gcd_lists(list(a._num), list(b._num))
        if not g:
            return QPolynomial.zero()
        return QPolynomial._raw(g, g[-1]) if g[-1] != 1 else QPolynomial._raw(g)

    def psi(self, k: int) -> "QPolynomial":
        """Substitute ``q -> q^k``."""
        if k == 1 or len(self._num) <= 1:
            return self
        out = [0] * ((len(self._num) - 1) * k + 1)
        for i, c in enumerate(self._num):
            out[i * k] = c
        return QPolynomial._raw(out, self._den)

    def compose(self, inner: "QPolynomial") -> "QPolynomial":
        """Substitute ``q -> inner``."""
        result = QPolynomial.zero()
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result

    def evaluate(self, x: Any, one: Any = 1) -> Any:
        """Horner evaluation at any value supporting ``+`` and ``*`` with rationals."""
        result = one * 0
        for c in reversed(self.coeffs):
            result = result * x + (c if c.denominator != 1 else int(c))
        return result

    def derivative(self) -> "QPolynomial":
        return QPolynomial._raw([i * c for i, c in enumerate(self._num)][1:], self._den)

    # comparison -----------------------------------------------------------------
    def __eq__(self, other: Any) -> bool:
        if isinstance(other, QPolynomial):
            return self._num == other._num and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self == QPolynomial.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._num)

    # text -----------------------------------------------------------------------
    def __str__(self) -> str:
        return format_terms(
            [(i, Fraction(c, self._den)) for i, c in enumerate(self._num) if c]
        )

    def __repr__(self) -> str:
        return f"QPolynomial({str(self)!r})"


def format_terms(terms: Sequence[tuple[int, Fraction]]) -> str:
    """Render ``[(degree, coeff), ...]`` in the ``1-2*q+q^3`` grammar."""
    if not terms:
        return "0"
    parts: list[str] = []
    for deg, c in terms:
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if deg == 0:
            body = str(a)
        else:
            mono = "q" if deg == 1 else f"q^{deg}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append(sign + body)
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


# ---------------------------------------------------------------------------
# QRationalFunction
# ---------------------------------------------------------------------------


class QRationalFunction:
    """Element of Q(q) in canonical form: coprime parts, monic denominator."""

    __slots__ = ("numerator", "denominator", "_hash")

    def __init__(self, numerator: Any, denominator: Any = 1, *, _reduced: bool = False) -> None:
        num = QPolynomial.coerce(numerator)
        den = QPolynomial.coerce(denominator)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = QPolynomial.one()
            elif not den.is_constant():
                g = QPolynomial.gcd(num, den)
                if not g.is_one():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lead = den.leading_coeff()
            if lead != 1:
                num = num / lead
                den = den / lead
        self.numerator = num
        self.denominator = den
        self._hash = None

    @classmethod
    def coerce(cls, x: Any) -> "QRationalFunction":
        if isinstance(x, QRationalFunction):
            return x
        return cls(QPolynomial.coerce(x), QPolynomial.one(), _reduced=True)

    @classmethod
    def parse(cls, text: str) -> "QRationalFunction":
        return cls.coerce(parse_expression(text))

    def is_polynomial(self) -> bool:
        return self.denominator.is_one()

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def as_polynomial(self) -> QPolynomial:
        if not self.is_polynomial():
            raise NotDivisible(f"{self} is not a polynomial")
        return self.numerator

    def __add__(self, other: Any) -> "QRationalFunction":
        if not isinstance(other, QRationalFunction):
            try:
                other = QRationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        if self.denominator == other.denominator:
            return QRationalFunction(self.numerator + other.numerator, self.denominator)
        return QRationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "QRationalFunction":
        return QRationalFunction(-self.numerator, self.denominator, _reduced=True)

    def __sub__(self, other: Any) -> "QRationalFunction":
        if not isinstance(other, QRationalFunction):
            try:
                other = QRationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "QRationalFunction":
        return (-self) + other

    def __mul__(self, other: Any) -> "QRationalFunction":
        if not isinstance(other, QRationalFunction):
            if isinstance(other, (int, Fraction)):
                return QRationalFunction(self.numerator * other, self.denominator, _reduced=other != 0)
            try:
                other = QRationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return QRationalFunction(self.numerator * other.numerator, 1, _reduced=True)
        # cross-cancel before multiplying to keep sizes small
        g1 = QPolynomial.gcd(self.numerator, other.denominator)
        g2 = QPolynomial.gcd(other.numerator, self.denominator)
        n1 = self.numerator.exact_div(g1) if not g1.is_one() and not g1.is_zero() else self.numerator
        d2 = other.denominator.exact_div(g1) if not g1.is_one() and not g1.is_zero() else other.denominator
        n2 = other.numerator.exact_div(g2) if not g2.is_one() and not g2.is_zero() else other.numerator
        d1 = self.denominator.exact_div(g2) if not g2.is_one() and not g2.is_zero() else self.denominator
        return QRationalFunction(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "QRationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return QRationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other: Any) -> "QRationalFunction":
        if not isinstance(other, QRationalFunction):
            try:
                other = QRationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "QRationalFunction":
        return QRationalFunction.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "QRationalFunction":
        if e < 0:
            return self.inverse() ** (-e)
        return QRationalFunction(self.numerator**e, self.denominator**e, _reduced=True)

    def psi(self, k: int) -> "QRationalFunction":
        """Substitute ``q -> q^k``."""
        return QRationalFunction(self.numerator.psi(k), self.denominator.psi(k))

    def evaluate(self, x: Any) -> Any:
        num, den = self.numerator.evaluate(x), self.denominator.evaluate(x)
        if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
            return Fraction(num) / Fraction(den)
        return num / den

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, QRationalFunction):
            return self.numerator == other.numerator and self.denominator == other.denominator
        if isinstance(other, (QPolynomial, int, Fraction)):
            return self.is_polynomial() and self.numerator == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.numerator, self.denominator))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.numerator)
        num, den = self.numerator, self.denominator
        # Display with the lowest-degree denominator term positive, e.g. 1/(1-q).
        low = next(c for c in den.coeffs if c != 0)
        if low < 0:
            num, den = -num, -den
        return f"({num})/({den})"

    def __repr__(self) -> str:
        return f"QRationalFunction({str(self)!r})"


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _Parser:
    """Recursive descent for  expr := term (('+'|'-') term)* ;  term := unary (('*'|'/') unary)*
    ;  unary := '-' unary | power ;  power := atom ('^' integer)? ;  atom := int | q | '(' expr ')'."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        self.i += 1
        return tok

    def expr(self) -> QRationalFunction:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> QRationalFunction:
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self) -> QRationalFunction:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> QRationalFunction:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            e = int(tok)
            if neg:
                if base.is_zero():
                    raise ParseError(f"zero to a negative power in {self.text!r}")
                e = -e
            base = base**e
        return base

    def atom(self) -> QRationalFunction:
        tok = self.take()
        if tok.isdigit():
            return QRationalFunction.coerce(int(tok))
        if tok == "q":
            return QRationalFunction.coerce(QPolynomial.q())
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise ParseError(f"missing ')' in {self.text!r}")
            return value
        raise ParseError(f"unexpected token {tok!r} in {self.text!r}")


def parse_expression(text: str) -> QPolynomial | QRationalFunction:
    """Parse the coefficient grammar; polynomials come back as ``QPolynomial``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    parser = _Parser(text)
    if not parser.toks:
        raise ParseError("empty expression")
    value = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input {parser.peek()!r} in {text!r}")
    return value.numerator if value.is_polynomial() else value


# ---------------------------------------------------------------------------
# truncated power series
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """``c_0 + c_1 t + ... + c_N t^N`` over a coefficient ring, modulo ``t^(N+1)``."""

    __slots__ = ("ring", "order", "coeffs")

    def __init__(self, ring: Any, order: int, coeffs: Iterable[Any]) -> None:
        if order < 0:
            raise ValueError("series order must be non-negative")
        cs = list(coeffs)[: order + 1]
        cs += [ring.zero()] * (order + 1 - len(cs))
        self.ring = ring
        self.order = order
        self.coeffs = tuple(cs)

    # constructors ---------------------------------------------------------------
    @classmethod
    def one(cls, ring: Any, order: int) -> "TruncatedSeries":
        return cls(ring, order, [ring.one()])

    @classmethod
    def zero(cls, ring: Any, order: int) -> "TruncatedSeries":
        return cls(ring, order, [])

    @classmethod
    def binomial(cls, ring: Any, order: int, coeff: Any, degree: int, constant: Any = None) -> "TruncatedSeries":
        """``constant + coeff * t^degree`` (constant defaults to 1)."""
        cs = [ring.zero()] * (order + 1)
        cs[0] = ring.one() if constant is None else constant
        if degree <= order:
            cs[degree] = ring.add(cs[degree], coeff)
        return cls(ring, order, cs)

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.ring != self.ring:
            raise RingMismatch(f"series over {self.ring} combined with series over {other.ring}")
        if other.order != self.order:
            raise RingMismatch(f"series orders differ: {self.order} vs {other.order}")

    def __getitem__(self, i: int) -> Any:
        return self.coeffs[i]

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        add = self.ring.add
        return TruncatedSeries(self.ring, self.order, [add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.order, [self.ring.neg(a) for a in self.coeffs])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: Any) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        n = self.order
        a, b = self.coeffs, other.coeffs
        nz_a = [i for i in range(n + 1) if not ring.is_zero(a[i])]
        nz_b = [j for j in range(n + 1) if not ring.is_zero(b[j])]
        out = [ring.zero()] * (n + 1)
        for i in nz_a:
            ai = a[i]
            for j in nz_b:
                if i + j > n:
                    break
                out[i + j] = ring.add(out[i + j], ring.mul(ai, b[j]))
        return TruncatedSeries(ring, n, out)

    def scale(self, c: Any) -> "TruncatedSeries":
        mul = self.ring.mul
        return TruncatedSeries(self.ring, self.order, [mul(c, a) for a in self.coeffs])

    def inverse(self) -> "TruncatedSeries":
        ring = self.ring
        c0 = self.coeffs[0]
        if not ring.is_unit(c0):
            raise NotInvertible(f"constant term {ring.format(c0)} is not a unit")
        inv0 = ring.inverse(c0)
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = ring.zero()
            for i in range(1, k + 1):
                ci = self.coeffs[i]
                if not ring.is_zero(ci):
                    acc = ring.add(acc, ring.mul(ci, out[k - i]))
            out.append(ring.neg(ring.mul(inv0, acc)))
        return TruncatedSeries(ring, self.order, out)

    def __pow__(self, e: int) -> "TruncatedSeries":
        return series_int_pow(self, e)

    def derivative(self) -> list[Any]:
        """Coefficients of d/dt, as a plain list of length ``order``."""
        ring = self.ring
        return [ring.mul(ring.from_int(i), self.coeffs[i]) for i in range(1, self.order + 1)]

    def substitute_power(self, r: int) -> "TruncatedSeries":
        """``s(t) -> s(t^r)``, truncated."""
        out = [self.ring.zero()] * (self.order + 1)
        for i, c in enumerate(self.coeffs):
            if i * r > self.order:
                break
            out[i * r] = c
        return TruncatedSeries(self.ring, self.order, out)

    def map_coeffs(self, f: Callable[[Any], Any], ring: Any = None) -> "TruncatedSeries":
        return TruncatedSeries(ring or self.ring, self.order, [f(c) for c in self.coeffs])

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, order, self.coeffs[: order + 1])

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.order == other.order
            and all(self.ring.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self) -> int:
        return hash((self.order, tuple(map(str, self.coeffs))))

    def to_strings(self) -> list[str]:
        return [self.ring.format(c) for c in self.coeffs]

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.ring}, N={self.order}, {self.to_strings()})"


def _require_rationals(ring: Any) -> None:
    if not getattr(ring, "has_rational_division", False):
        raise RingLacksRationalDivision(f"{ring} does not contain the rationals")


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    """Logarithm of a series with constant term 1, via ``log s = integral of s'/s``."""
    ring = s.ring
    if not ring.eq(s.coeffs[0], ring.one()):
        raise ConstantTermNotOne(f"constant term is {ring.format(s.coeffs[0])}")
    _require_rationals(ring)
    n = s.order
    # l_k from  k*s_k = sum_{i=1..k} i*l_i*s_{k-i}
    logc = [ring.zero()] * (n + 1)
    for k in range(1, n + 1):
        acc = ring.mul(ring.from_int(k), s.coeffs[k])
        for i in range(1, k):
            acc = ring.sub(acc, ring.mul(ring.mul(ring.from_int(i), logc[i]), s.coeffs[k - i]))
        logc[k] = ring.div_int(acc, k)
    return TruncatedSeries(ring, n, logc)


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """Exponential of a series with constant term 0."""
    ring = s.ring
    if not ring.is_zero(s.coeffs[0]):
        raise ConstantTermNotZero(f"constant term is {ring.format(s.coeffs[0])}")
    _require_rationals(ring)
    n = s.order
    # k*e_k = sum_{i=1..k} i*s_i*e_{k-i}
    e = [ring.one()] + [ring.zero()] * n
    for k in range(1, n + 1):
        acc = ring.zero()
        for i in range(1, k + 1):
            si = s.coeffs[i]
            if not ring.is_zero(si):
                acc = ring.add(acc, ring.mul(ring.mul(ring.from_int(i), si), e[k - i]))
        e[k] = ring.div_int(acc, k)
    return TruncatedSeries(ring, n, e)


def series_int_pow(s: TruncatedSeries, e: int) -> TruncatedSeries:
    """``s^e`` for any integer ``e`` by binary powering; negative ``e`` inverts first."""
    if e < 0:
        s = s.inverse()
        e = -e
    result = TruncatedSeries.one(s.ring, s.order)
    base = s
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


# ---------------------------------------------------------------------------
# multivariate polynomials in indexed variables
# ---------------------------------------------------------------------------

Var = tuple[str, int]
Monomial = tuple[tuple[Var, int], ...]


def var_name(v: Var) -> str:
    return f"{v[0]}{v[1]}"


def parse_var(name: str) -> Var:
    m = re.fullmatch(r"([a-zA-Z]+)_?(\d+)", name.strip())
    if not m:
        raise ParseError(f"bad variable name {name!r}")
    return (m.group(1), int(m.group(2)))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda ve: (ve[0][1], ve[0][0])))


def _mono_sort_key(m: Monomial) -> tuple:
    degree = sum(e for _, e in m)
    return (degree, [((v[1], v[0]), e) for v, e in m])


class MultiPolynomial:
    """Sparse polynomial in variables like ``x_1, y_2`` with ``QPolynomial`` coefficients.

    Monomials are tuples of ``((letter, index), exponent)`` sorted by index then
    letter; zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Any] | None = None) -> None:
        clean: dict[Monomial, QPolynomial] = {}
        for mono, c in (terms or {}).items():
            c = QPolynomial.coerce(c)
            if not c.is_zero():
                clean[mono] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[Monomial, QPolynomial]) -> "MultiPolynomial":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def var(cls, letter: str, index: int) -> "MultiPolynomial":
        return cls._raw({(((letter, index), 1),): QPolynomial.one()})

    @classmethod
    def const(cls, c: Any) -> "MultiPolynomial":
        c = QPolynomial.coerce(c)
        return cls._raw({(): c} if not c.is_zero() else {})

    @classmethod
    def zero(cls) -> "MultiPolynomial":
        return cls._raw({})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: Any) -> "MultiPolynomial":
        if not isinstance(other, MultiPolynomial):
            other = MultiPolynomial.const(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return MultiPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPolynomial":
        return MultiPolynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Any) -> "MultiPolynomial":
        if not isinstance(other, MultiPolynomial):
            other = MultiPolynomial.const(other)
        return self + (-other)

    def __rsub__(self, other: Any) -> "MultiPolynomial":
        return (-self) + other

    def __mul__(self, other: Any) -> "MultiPolynomial":
        if not isinstance(other, MultiPolynomial):
            c = QPolynomial.coerce(other)
            if c.is_zero():
                return MultiPolynomial.zero()
            return MultiPolynomial._raw({m: v * c for m, v in self.terms.items()})
        out: dict[Monomial, QPolynomial] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = _mono_mul(ma, mb)
                prod = ca * cb
                s = out.get(mono)
                out[mono] = prod if s is None else s + prod
        return MultiPolynomial._raw({m: c for m, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MultiPolynomial":
        if e < 0:
            raise ValueError("negative power")
        result = MultiPolynomial.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def div_int(self, n: int) -> "MultiPolynomial":
        """Divide every coefficient by the integer ``n`` (exact over Q[q])."""
        return MultiPolynomial._raw({m: c / n for m, c in self.terms.items()})

    def variables(self) -> set[Var]:
        return {v for mono in self.terms for v, _ in mono}

    def coefficient(self, mono: Monomial) -> QPolynomial:
        return self.terms.get(mono, QPolynomial.zero())

    def sorted_terms(self) -> list[tuple[Monomial, QPolynomial]]:
        return sorted(self.terms.items(), key=lambda mc: _mono_sort_key(mc[0]))

    def map_coeffs(self, f: Callable[[QPolynomial], QPolynomial]) -> "MultiPolynomial":
        return MultiPolynomial({m: f(c) for m, c in self.terms.items()})

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MultiPolynomial):
            if isinstance(other, (int, Fraction, QPolynomial)):
                other = MultiPolynomial.const(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def to_json_terms(self) -> list[dict[str, Any]]:
        return [
            {"monomial": {var_name(v): e for v, e in mono}, "coeff": str(c)}
            for mono, c in self.sorted_terms()
        ]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            mono_s = "*".join(var_name(v) + (f"^{e}" if e > 1 else "") for v, e in mono)
            pieces.append(f"({c})" + (f"*{mono_s}" if mono_s else ""))
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"MultiPolynomial({self})"


def mpoly_substitute(
    p: MultiPolynomial,
    bindings: Mapping[Var | str, Any],
    ring: Any,
    q_value: Any = None,
) -> Any:
    """Evaluate ``p`` in ``ring``.

    ``q`` goes to ``q_value`` when given, otherwise to ``ring.q_image``; rings
    without a q-image only accept polynomials whose coefficients are constants.
    """
    binds: dict[Var, Any] = {}
    for k, v in bindings.items():
        key = parse_var(k) if isinstance(k, str) else k
        if not ring.is_element(v):
            raise RingMismatch(f"binding for {var_name(key)} is not an element of {ring}")
        binds[key] = v
    missing = p.variables() - binds.keys()
    if missing:
        raise UnboundVariable("unbound variables: " + ", ".join(sorted(map(var_name, missing))))
    if q_value is not None and not ring.is_element(q_value):
        raise RingMismatch(f"q-value is not an element of {ring}")

    coeff_cache: dict[QPolynomial, Any] = {}

    def coeff_value(c: QPolynomial) -> Any:
        hit = coeff_cache.get(c)
        if hit is None:
            if q_value is not None:
                hit = ring.eval_qpoly(c, q_value)
            else:
                hit = ring.from_qpoly(c)
            coeff_cache[c] = hit
        return hit

    power_cache: dict[tuple[Var, int], Any] = {}

    def power(v: Var, e: int) -> Any:
        key = (v, e)
        hit = power_cache.get(key)
        if hit is None:
            hit = ring.pow(binds[v], e)
            power_cache[key] = hit
        return hit

    total = ring.zero()
    for mono, c in p.terms.items():
        term = coeff_value(c)
        for v, e in mono:
            if ring.is_zero(term):
                break
            term = ring.mul(term, power(v, e))
        total = ring.add(total, term)
    return total


__all__ = [
    "QPolynomial",
    "QRationalFunction",
    "TruncatedSeries",
    "MultiPolynomial",
    "parse_expression",
    "series_log",
    "series_exp",
    "series_int_pow",
    "mpoly_substitute",
    "var_name",
    "parse_var",
]
