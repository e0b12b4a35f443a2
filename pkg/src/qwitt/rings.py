"""Coefficient rings.

A :class:`CoeffRing` is a descriptor object; elements are plain Python values
(``int``, ``Fraction``, :class:`QPolynomial`, :class:`QRationalFunction`). Each ring
advertises capability flags that decide how Witt and necklace operations run:

* torsion-free rings with a rational extension use recursions that divide by
  integers, every division certified exact;
* ``Z/kZ`` has neither, so Witt arithmetic there evaluates universal polynomials.

Shipped instances: ``Z``, ``Q``, ``Zq`` (Z[q] with psi^n(q) = q^n), ``Qq`` (Q(q)),
``Zmod:k``, plus the internal ``Qpoly`` (Q[q]) and the :class:`TrivialPsi` adapter.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .errors import (
    NoPsiStructure,
    NotDivisible,
    NotInvertible,
    ParseError,
    RingLacksRationalDivision,
    RingMismatch,
)
from .exactalg import QPolynomial, QRationalFunction, parse_expression


class CoeffRing(ABC):
    """Commutative ring with unity, optional psi-operations and capability flags."""

    key: str = "?"
    has_psi: bool = True
    is_torsion_free: bool = True
    has_rational_extension: bool = True
    has_rational_division: bool = False

    @property
    def q_image(self) -> Any:
        """Image of the indeterminate q, or ``None`` for rings that are not Z[q]-algebras."""
        return None

    # -- required element operations -------------------------------------------
    @abstractmethod
    def zero(self) -> Any: ...

    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def from_int(self, n: int) -> Any: ...

    @abstractmethod
    def from_fraction(self, x: Fraction) -> Any:
        """Image of a rational; raises NotDivisible when the denominator is not invertible."""

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def neg(self, a: Any) -> Any: ...

    @abstractmethod
    def is_element(self, x: Any) -> bool: ...

    @abstractmethod
    def is_unit(self, x: Any) -> bool: ...

    @abstractmethod
    def _inverse(self, x: Any) -> Any: ...

    @abstractmethod
    def _psi(self, n: int, x: Any) -> Any: ...

    @abstractmethod
    def div_int(self, x: Any, n: int) -> Any:
        """The unique ``y`` with ``n*y = x``; NotDivisible if there is none."""

    @abstractmethod
    def random_element(self, rng: random.Random, size: int = 3) -> Any: ...

    # -- derived operations ----------------------------------------------------
    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def eq(self, a: Any, b: Any) -> bool:
        return a == b

    def is_zero(self, a: Any) -> bool:
        return self.eq(a, self.zero())

    def pow(self, x: Any, e: int) -> Any:
        if e < 0:
            return self.pow(self.inverse(x), -e)
        result = self.one()
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def sum(self, values: Any) -> Any:
        total = self.zero()
        for v in values:
            total = self.add(total, v)
        return total

    def inverse(self, x: Any) -> Any:
        if not self.is_unit(x):
            raise NotInvertible(f"{self.format(x)} is not a unit in {self}")
        return self._inverse(x)

    def psi(self, n: int, x: Any) -> Any:
        if not self.has_psi:
            raise NoPsiStructure(f"{self} has no psi-operations")
        if n < 1:
            raise ValueError("psi index must be positive")
        if n == 1:
            return x
        return self._psi(n, x)

    def div_exact(self, x: Any, d: Any) -> Any:
        """Solve ``d*y = x`` exactly, via the rational extension when ``d`` is not an int."""
        if isinstance(d, int):
            return self.div_int(x, d)
        ext = self.rational_extension()
        y = ext.target_div(ext.embed(x), ext.embed(d))
        if not ext.contains(y):
            raise NotDivisible(f"{self.format(d)} does not divide {self.format(x)} in {self}")
        return ext.pullback(y)

    def rational_extension(self) -> "RationalExtension":
        raise RingLacksRationalDivision(f"{self} has no rational extension")

    def from_qpoly(self, p: QPolynomial) -> Any:
        """Image of a polynomial in q; q goes to ``q_image``."""
        if p.is_constant():
            return self.from_fraction(p.coeff(0))
        if self.q_image is None:
            raise RingMismatch(f"{self} has no image of q; cannot map {p}")
        return self.eval_qpoly(p, self.q_image)

    def eval_qpoly(self, p: QPolynomial, x: Any) -> Any:
        result = self.zero()
        for c in reversed(p.coeffs):
            result = self.add(self.mul(result, x), self.from_fraction(c))
        return result

    def from_qrat(self, r: QRationalFunction) -> Any:
        num = self.from_qpoly(r.numerator)
        if r.denominator.is_one():
            return num
        return self.mul(num, self.inverse(self.from_qpoly(r.denominator)))

    def to_int(self, x: Any) -> int | None:
        """The integer ``x`` represents, if it is the image of one (else None)."""
        return None

    # -- text ----------------------------------------------------------------
    def format(self, x: Any) -> str:
        return str(x)

    def parse(self, text: Any) -> Any:
        if isinstance(text, int) and not isinstance(text, bool):
            return self.from_int(text)
        value = parse_expression(str(text))
        try:
            if isinstance(value, QPolynomial):
                return self.from_qpoly(value)
            return self.from_qrat(value)
        except (NotDivisible, NotInvertible, RingMismatch) as exc:
            raise ParseError(f"{text!r} is not an element of {self}: {exc}") from exc

    # -- identity --------------------------------------------------------------
    def __eq__(self, other: Any) -> bool:
        return isinstance(other, CoeffRing) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return self.key

    def __repr__(self) -> str:
        return f"<ring {self.key}>"


@dataclass(frozen=True)
class RationalExtension:
    """Embedding of a ring into one where division by integers and by (1-g) is exact.

    ``contains`` answers whether an extension element comes from the source ring;
    ``pullback`` converts it back.
    """

    source: CoeffRing
    target: CoeffRing
    embed: Callable[[Any], Any]
    contains: Callable[[Any], bool]
    pullback: Callable[[Any], Any]

    def target_div(self, x: Any, d: Any) -> Any:
        if self.target.is_zero(d):
            raise NotDivisible("division by zero")
        return self.target.mul(x, self.target.inverse(d))


# ---------------------------------------------------------------------------
# concrete rings
# ---------------------------------------------------------------------------


class IntegerRing(CoeffRing):
    """The integers with psi^n = id."""

    key = "Z"

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        return n

    def from_fraction(self, x: Fraction) -> int:
        x = Fraction(x)
        if x.denominator != 1:
            raise NotDivisible(f"{x} is not an integer")
        return x.numerator

    def add(self, a: int, b: int) -> int:
        return a + b

    def sub(self, a: int, b: int) -> int:
        return a - b

    def mul(self, a: int, b: int) -> int:
        return a * b

    def neg(self, a: int) -> int:
        return -a

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return super().pow(x, e)
        return x**e

    def is_zero(self, a: int) -> bool:
        return a == 0

    def is_element(self, x: Any) -> bool:
        return isinstance(x, int) and not isinstance(x, bool)

    def is_unit(self, x: int) -> bool:
        return x in (1, -1)

    def _inverse(self, x: int) -> int:
        return x

    def _psi(self, n: int, x: int) -> int:
        return x

    def div_int(self, x: int, n: int) -> int:
        if n == 0:
            raise NotDivisible("division by zero")
        qt, r = divmod(x, n)
        if r:
            raise NotDivisible(f"{n} does not divide {x}")
        return qt

    def div_exact(self, x: Any, d: Any) -> Any:
        return self.div_int(x, int(d))

    def rational_extension(self) -> RationalExtension:
        return RationalExtension(
            self, QQ, Fraction, lambda y: Fraction(y).denominator == 1, lambda y: int(y)
        )

    def to_int(self, x: int) -> int:
        return x

    def random_element(self, rng: random.Random, size: int = 3) -> int:
        return rng.randint(-size, size)


class RationalField(CoeffRing):
    """The rationals with psi^n = id."""

    key = "Q"
    has_rational_division = True

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def from_fraction(self, x: Fraction) -> Fraction:
        return Fraction(x)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    def neg(self, a: Fraction) -> Fraction:
        return -a

    def is_element(self, x: Any) -> bool:
        return isinstance(x, (int, Fraction)) and not isinstance(x, bool)

    def is_unit(self, x: Fraction) -> bool:
        return x != 0

    def _inverse(self, x: Fraction) -> Fraction:
        return 1 / Fraction(x)

    def _psi(self, n: int, x: Fraction) -> Fraction:
        return x

    def div_int(self, x: Fraction, n: int) -> Fraction:
        if n == 0:
            raise NotDivisible("division by zero")
        return Fraction(x) / n

    def rational_extension(self) -> RationalExtension:
        return RationalExtension(self, self, Fraction, lambda y: True, Fraction)

    def to_int(self, x: Fraction) -> int | None:
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else None

    def format(self, x: Any) -> str:
        return str(Fraction(x))

    def random_element(self, rng: random.Random, size: int = 3) -> Fraction:
        return Fraction(rng.randint(-size, size), rng.randint(1, size))


class PolynomialRing(CoeffRing):
    """Z[q] (``integral=True``) or Q[q], with psi^n(f)(q) = f(q^n)."""

    def __init__(self, integral: bool = True) -> None:
        self.integral = integral
        self.key = "Zq" if integral else "Qpoly"
        self.has_rational_division = not integral

    @property
    def q_image(self) -> QPolynomial:
        return QPolynomial.q()

    def zero(self) -> QPolynomial:
        return QPolynomial.zero()

    def one(self) -> QPolynomial:
        return QPolynomial.one()

    def from_int(self, n: int) -> QPolynomial:
        return QPolynomial.const(n)

    def from_fraction(self, x: Fraction) -> QPolynomial:
        x = Fraction(x)
        if self.integral and x.denominator != 1:
            raise NotDivisible(f"{x} is not an integer")
        return QPolynomial.const(x)

    def from_qpoly(self, p: QPolynomial) -> QPolynomial:
        if self.integral and not p.is_integral():
            raise NotDivisible(f"{p} does not have integer coefficients")
        return p

    def add(self, a: QPolynomial, b: QPolynomial) -> QPolynomial:
        return a + b

    def sub(self, a: QPolynomial, b: QPolynomial) -> QPolynomial:
        return a - b

    def mul(self, a: QPolynomial, b: QPolynomial) -> QPolynomial:
        return a * b

    def neg(self, a: QPolynomial) -> QPolynomial:
        return -a

    def pow(self, x: QPolynomial, e: int) -> QPolynomial:
        if e < 0:
            return super().pow(x, e)
        return x**e

    def is_zero(self, a: QPolynomial) -> bool:
        return a.is_zero()

    def is_element(self, x: Any) -> bool:
        return isinstance(x, QPolynomial) and (x.is_integral() or not self.integral)

    def is_unit(self, x: QPolynomial) -> bool:
        if not x.is_constant() or x.is_zero():
            return False
        return not self.integral or x.coeff(0) in (1, -1)

    def _inverse(self, x: QPolynomial) -> QPolynomial:
        return QPolynomial.const(1 / x.coeff(0))

    def _psi(self, n: int, x: QPolynomial) -> QPolynomial:
        return x.psi(n)

    def div_int(self, x: QPolynomial, n: int) -> QPolynomial:
        if n == 0:
            raise NotDivisible("division by zero")
        y = x / n
        if self.integral and not y.is_integral():
            raise NotDivisible(f"{n} does not divide {x} in Z[q]")
        return y

    def div_exact(self, x: Any, d: Any) -> Any:
        if isinstance(d, int):
            return self.div_int(x, d)
        if d.is_zero():
            raise NotDivisible("division by zero")
        quo, rem = x.divmod(d)
        if not rem.is_zero() or (self.integral and not quo.is_integral()):
            raise NotDivisible(f"{d} does not divide {x} in {self}")
        return quo

    def rational_extension(self) -> RationalExtension:
        integral = self.integral

        def contains(y: QRationalFunction) -> bool:
            return y.is_polynomial() and (y.numerator.is_integral() or not integral)

        return RationalExtension(
            self, QQ_q, QRationalFunction.coerce, contains, lambda y: y.numerator
        )

    def to_int(self, x: QPolynomial) -> int | None:
        if x.is_constant() and x.is_integral():
            return int(x.coeff(0))
        return None

    def parse(self, text: Any) -> QPolynomial:
        if isinstance(text, int) and not isinstance(text, bool):
            return QPolynomial.const(text)
        value = parse_expression(str(text))
        if not isinstance(value, QPolynomial):
            raise ParseError(f"{text!r} is not a polynomial")
        if self.integral and not value.is_integral():
            raise ParseError(f"{text!r} does not have integer coefficients")
        return value

    def random_element(self, rng: random.Random, size: int = 3) -> QPolynomial:
        deg = rng.randint(0, 2)
        if self.integral:
            return QPolynomial([rng.randint(-size, size) for _ in range(deg + 1)])
        return QPolynomial(
            [Fraction(rng.randint(-size, size), rng.randint(1, size)) for _ in range(deg + 1)]
        )


class RationalFunctionField(CoeffRing):
    """Q(q) with psi^n(f)(q) = f(q^n)."""

    key = "Qq"
    has_rational_division = True

    @property
    def q_image(self) -> QRationalFunction:
        return QRationalFunction.coerce(QPolynomial.q())

    def zero(self) -> QRationalFunction:
        return QRationalFunction.coerce(0)

    def one(self) -> QRationalFunction:
        return QRationalFunction.coerce(1)

    def from_int(self, n: int) -> QRationalFunction:
        return QRationalFunction.coerce(n)

    def from_fraction(self, x: Fraction) -> QRationalFunction:
        return QRationalFunction.coerce(Fraction(x))

    def from_qpoly(self, p: QPolynomial) -> QRationalFunction:
        return QRationalFunction.coerce(p)

    def from_qrat(self, r: QRationalFunction) -> QRationalFunction:
        return r

    def add(self, a: QRationalFunction, b: QRationalFunction) -> QRationalFunction:
        return a + b

    def mul(self, a: QRationalFunction, b: QRationalFunction) -> QRationalFunction:
        return a * b

    def neg(self, a: QRationalFunction) -> QRationalFunction:
        return -a

    def is_zero(self, a: QRationalFunction) -> bool:
        return a.is_zero()

    def is_element(self, x: Any) -> bool:
        return isinstance(x, QRationalFunction)

    def is_unit(self, x: QRationalFunction) -> bool:
        return not x.is_zero()

    def _inverse(self, x: QRationalFunction) -> QRationalFunction:
        return x.inverse()

    def _psi(self, n: int, x: QRationalFunction) -> QRationalFunction:
        return x.psi(n)

    def div_int(self, x: QRationalFunction, n: int) -> QRationalFunction:
        if n == 0:
            raise NotDivisible("division by zero")
        return x * Fraction(1, n)

    def rational_extension(self) -> RationalExtension:
        return RationalExtension(self, self, QRationalFunction.coerce, lambda y: True, lambda y: y)

    def to_int(self, x: QRationalFunction) -> int | None:
        if x.is_polynomial() and x.numerator.is_constant() and x.numerator.is_integral():
            return int(x.numerator.coeff(0))
        return None

    def random_element(self, rng: random.Random, size: int = 3) -> QRationalFunction:
        num = QPolynomial([rng.randint(-size, size) for _ in range(rng.randint(1, 3))])
        den = QPolynomial([rng.randint(-size, size) for _ in range(rng.randint(0, 2))] + [1])
        return QRationalFunction(num, den)


class IntegersMod(CoeffRing):
    """Z/kZ with psi^n = id. Not torsion-free; Witt arithmetic uses universal polynomials."""

    is_torsion_free = False
    has_rational_extension = False

    def __init__(self, k: int) -> None:
        if k < 2:
            raise ValueError("modulus must be at least 2")
        self.k = k
        self.key = f"Zmod:{k}"

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        return n % self.k

    def from_fraction(self, x: Fraction) -> int:
        x = Fraction(x)
        try:
            inv = pow(x.denominator, -1, self.k)
        except ValueError:
            raise NotDivisible(f"{x.denominator} is not invertible mod {self.k}") from None
        return x.numerator * inv % self.k

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.k

    def mul(self, a: int, b: int) -> int:
        return a * b % self.k

    def neg(self, a: int) -> int:
        return -a % self.k

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return super().pow(x, e)
        return pow(x, e, self.k)

    def is_element(self, x: Any) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.k

    def is_unit(self, x: int) -> bool:
        from math import gcd

        return gcd(x, self.k) == 1

    def _inverse(self, x: int) -> int:
        return pow(x, -1, self.k)

    def _psi(self, n: int, x: int) -> int:
        return x

    def div_int(self, x: int, n: int) -> int:
        """Division by an integer that is a unit mod k; anything else has no unique answer."""
        if not self.is_unit(n % self.k):
            raise NotDivisible(f"{n} is not invertible mod {self.k}")
        return x * pow(n, -1, self.k) % self.k

    def div_exact(self, x: Any, d: Any) -> Any:
        return self.div_int(x, int(d))

    def to_int(self, x: int) -> int:
        return x

    def random_element(self, rng: random.Random, size: int = 3) -> int:
        return rng.randrange(self.k)


class TrivialPsi(CoeffRing):
    """Wraps a ring and replaces its psi-operations by the identity."""

    def __init__(self, base: CoeffRing) -> None:
        self.base = base
        self.key = f"{base.key}+trivpsi"
        self.is_torsion_free = base.is_torsion_free
        self.has_rational_extension = base.has_rational_extension
        self.has_rational_division = base.has_rational_division

    @property
    def q_image(self) -> Any:
        return self.base.q_image

    def zero(self) -> Any:
        return self.base.zero()

    def one(self) -> Any:
        return self.base.one()

    def from_int(self, n: int) -> Any:
        return self.base.from_int(n)

    def from_fraction(self, x: Fraction) -> Any:
        return self.base.from_fraction(x)

    def from_qpoly(self, p: QPolynomial) -> Any:
        return self.base.from_qpoly(p)

    def from_qrat(self, r: QRationalFunction) -> Any:
        return self.base.from_qrat(r)

    def add(self, a: Any, b: Any) -> Any:
        return self.base.add(a, b)

    def mul(self, a: Any, b: Any) -> Any:
        return self.base.mul(a, b)

    def neg(self, a: Any) -> Any:
        return self.base.neg(a)

    def pow(self, x: Any, e: int) -> Any:
        return self.base.pow(x, e)

    def eq(self, a: Any, b: Any) -> bool:
        return self.base.eq(a, b)

    def is_zero(self, a: Any) -> bool:
        return self.base.is_zero(a)

    def is_element(self, x: Any) -> bool:
        return self.base.is_element(x)

    def is_unit(self, x: Any) -> bool:
        return self.base.is_unit(x)

    def _inverse(self, x: Any) -> Any:
        return self.base.inverse(x)

    def _psi(self, n: int, x: Any) -> Any:
        return x

    def div_int(self, x: Any, n: int) -> Any:
        return self.base.div_int(x, n)

    def div_exact(self, x: Any, d: Any) -> Any:
        return self.base.div_exact(x, d)

    def rational_extension(self) -> RationalExtension:
        return self.base.rational_extension()

    def to_int(self, x: Any) -> int | None:
        return self.base.to_int(x)

    def format(self, x: Any) -> str:
        return self.base.format(x)

    def parse(self, text: Any) -> Any:
        return self.base.parse(text)

    def random_element(self, rng: random.Random, size: int = 3) -> Any:
        return self.base.random_element(rng, size)


ZZ = IntegerRing()
QQ = RationalField()
ZZ_q = PolynomialRing(integral=True)
QQ_poly = PolynomialRing(integral=False)
QQ_q = RationalFunctionField()


def get_ring(selector: str) -> CoeffRing:
    """Ring from a selector string: ``Z``, ``Q``, ``Zq``, ``Qq``, ``Zmod:<k>``."""
    table = {"Z": ZZ, "Q": QQ, "Zq": ZZ_q, "Qq": QQ_q, "Qpoly": QQ_poly}
    if selector in table:
        return table[selector]
    if selector.endswith("+trivpsi"):
        return TrivialPsi(get_ring(selector[: -len("+trivpsi")]))
    if selector.startswith("Zmod:"):
        try:
            k = int(selector.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad modulus in ring selector {selector!r}") from None
        if k < 2:
            raise ParseError(f"modulus must be at least 2 in {selector!r}")
        return IntegersMod(k)
    raise ParseError(f"unknown ring selector {selector!r}")


# ---------------------------------------------------------------------------
# self-check
# ---------------------------------------------------------------------------


def self_check(ring: CoeffRing, trials: int = 50, seed: int = 0) -> list[str]:
    """Randomised check of the ring and psi axioms; returns a list of failures."""
    rng = random.Random(seed)
    failures: list[str] = []
    eq, add, mul = ring.eq, ring.add, ring.mul
    for t in range(trials):
        a, b, c = (ring.random_element(rng) for _ in range(3))
        checks = {
            "add-commutative": eq(add(a, b), add(b, a)),
            "add-associative": eq(add(add(a, b), c), add(a, add(b, c))),
            "mul-commutative": eq(mul(a, b), mul(b, a)),
            "mul-associative": eq(mul(mul(a, b), c), mul(a, mul(b, c))),
            "distributive": eq(mul(a, add(b, c)), add(mul(a, b), mul(a, c))),
            "additive-identity": eq(add(a, ring.zero()), a),
            "multiplicative-identity": eq(mul(a, ring.one()), a),
            "additive-inverse": ring.is_zero(add(a, ring.neg(a))),
        }
        if ring.has_psi:
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            psi = ring.psi
            checks.update(
                {
                    "psi-1-identity": eq(psi(1, a), a),
                    "psi-composition": eq(psi(n, psi(m, a)), psi(n * m, a)),
                    "psi-additive": eq(psi(n, add(a, b)), add(psi(n, a), psi(n, b))),
                    "psi-multiplicative": eq(psi(n, mul(a, b)), mul(psi(n, a), psi(n, b))),
                    "psi-unital": eq(psi(n, ring.one()), ring.one()),
                }
            )
            if ring.q_image is not None and not isinstance(ring, TrivialPsi):
                checks["psi-q-power"] = eq(psi(n, ring.q_image), ring.pow(ring.q_image, n))
        if ring.is_torsion_free:
            d = rng.choice([-3, -2, 2, 3, 5, 7])
            checks["div-exact-roundtrip"] = eq(ring.div_int(mul(a, ring.from_int(d)), d), a)
        for name, ok in checks.items():
            if not ok:
                failures.append(f"trial {t}: {name}")
    return failures


__all__ = [
    "CoeffRing",
    "RationalExtension",
    "IntegerRing",
    "RationalField",
    "PolynomialRing",
    "RationalFunctionField",
    "IntegersMod",
    "TrivialPsi",
    "ZZ",
    "QQ",
    "ZZ_q",
    "QQ_poly",
    "QQ_q",
    "get_ring",
    "self_check",
    "psi",
    "div_exact",
]


def psi(ring: CoeffRing, n: int, x: Any) -> Any:
    """Psi^n(x) in ``ring``."""
    return ring.psi(n, x)


def div_exact(ring: CoeffRing, x: Any, d: Any) -> Any:
    """Exact quotient ``x / d`` in ``ring``, certified through the rational extension."""
    return ring.div_exact(x, d)
