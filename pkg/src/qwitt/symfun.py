"""q-deformed symmetric functions on a finite alphabet ``x_1..x_k``.

Values are computed in the power-sum basis, where a product of power sums is
just a merged partition, and then specialised to ``k`` variables through the
monomial basis. Specialisation is a ring map, so results are exact for every
``k``; identities are only *asserted* in degrees ``<= k``, where ``p_1..p_k``
are algebraically independent.

Defining relations (all divisor sums over ``d | n``):

    sum d [n/d]_q u_d^(n/d)   = p_n
    sum d (1 - q^(n/d)) v_d^(n/d) = p_n
    sum d q_d^(n/d)          = p_n
"""

from __future__ import annotations

import random
import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Any, Callable, Iterator

from .errors import DegreeExceedsAlphabet, NotInvertible, RingMismatch
from .exactalg import QPolynomial, QRationalFunction, TruncatedSeries, series_exp, series_log
from .numtheory import proper_divisors
from .rings import CoeffRing

Partition = tuple[int, ...]

_ONE = QRationalFunction.coerce(1)
_ZERO = QRationalFunction.coerce(0)


# ---------------------------------------------------------------------------
# partition combinatorics
# ---------------------------------------------------------------------------


def partitions(n: int, largest: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` as weakly decreasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def z_factor(shape: Partition) -> int:
    """``z_lambda = prod_i i^(m_i) m_i!``."""
    z = 1
    for part, mult in Counter(shape).items():
        z *= part**mult * factorial(mult)
    return z


@lru_cache(maxsize=None)
def power_sum_monomial_coeff(shape: Partition, mu: Partition) -> int:
    """Coefficient of ``x^mu`` in ``p_shape``: ways to drop the parts of ``shape`` into
    labelled bins so that bin ``j`` receives total ``mu_j``."""
    if sum(shape) != sum(mu):
        return 0

    @lru_cache(maxsize=None)
    def count(index: int, remaining: tuple[int, ...]) -> int:
        if index == len(shape):
            return int(all(r == 0 for r in remaining))
        part = shape[index]
        total = 0
        for j, r in enumerate(remaining):
            if r >= part:
                total += count(index + 1, remaining[:j] + (r - part,) + remaining[j + 1 :])
        return total

    return count(0, tuple(mu))


def _merge(a: Partition, b: Partition) -> Partition:
    return tuple(sorted(a + b, reverse=True))


# ---------------------------------------------------------------------------
# symmetric polynomials
# ---------------------------------------------------------------------------


class SymPoly:
    """Symmetric polynomial in ``x_1..x_k`` with coefficients in Q(q).

    Stored as a power-sum expansion ``{partition: coefficient}``; the monomial
    view is produced on demand.
    """

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: dict[Partition, QRationalFunction] | None = None) -> None:
        if k < 1:
            raise ValueError("the alphabet needs at least one variable")
        self.k = k
        self.terms = {s: c for s, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def const(cls, k: int, c: Any) -> "SymPoly":
        return cls(k, {(): QRationalFunction.coerce(c)})

    @classmethod
    def power(cls, k: int, n: int) -> "SymPoly":
        return cls(k, {(n,): _ONE})

    def _check(self, other: "SymPoly") -> None:
        if self.k != other.k:
            raise RingMismatch(f"alphabets of size {self.k} and {other.k}")

    def __add__(self, other: Any) -> "SymPoly":
        if not isinstance(other, SymPoly):
            other = SymPoly.const(self.k, other)
        self._check(other)
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = terms.get(s, _ZERO) + c
        return SymPoly(self.k, terms)

    __radd__ = __add__

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.k, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other: Any) -> "SymPoly":
        if not isinstance(other, SymPoly):
            other = SymPoly.const(self.k, other)
        return self + (-other)

    def __rsub__(self, other: Any) -> "SymPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "SymPoly":
        if not isinstance(other, SymPoly):
            c = QRationalFunction.coerce(other)
            return SymPoly(self.k, {s: v * c for s, v in self.terms.items()})
        self._check(other)
        terms: dict[Partition, QRationalFunction] = {}
        for s1, c1 in self.terms.items():
            for s2, c2 in other.terms.items():
                key = _merge(s1, s2)
                terms[key] = terms.get(key, _ZERO) + c1 * c2
        return SymPoly(self.k, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "SymPoly":
        if e < 0:
            raise ValueError("negative powers of symmetric polynomials are not supported")
        result = SymPoly.const(self.k, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale_div(self, n: int) -> "SymPoly":
        return self * QRationalFunction.coerce(Fraction(1, n))

    def map_coeffs(self, f: Callable[[QRationalFunction], Any]) -> "SymPoly":
        return SymPoly(self.k, {s: QRationalFunction.coerce(f(c)) for s, c in self.terms.items()})

    def specialize_q(self, value: Any) -> "SymPoly":
        """Substitute a number for q in every coefficient."""
        return self.map_coeffs(lambda c: c.evaluate(value))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> QRationalFunction:
        return self.terms.get((), _ZERO)

    def degrees(self) -> set[int]:
        return {sum(s) for s in self.terms}

    # -- monomial view --------------------------------------------------------
    def monomial_coeffs(self) -> dict[Partition, QRationalFunction]:
        """Coefficients in the monomial symmetric basis ``m_mu`` with at most ``k`` parts."""
        out: dict[Partition, QRationalFunction] = {}
        for degree in sorted(self.degrees()):
            shapes = [(s, c) for s, c in self.terms.items() if sum(s) == degree]
            for mu in partitions(degree):
                if len(mu) > self.k:
                    continue
                acc = _ZERO
                for s, c in shapes:
                    n_ways = power_sum_monomial_coeff(s, mu)
                    if n_ways:
                        acc = acc + c * n_ways
                if not acc.is_zero():
                    out[mu] = acc
        return out

    def expand(self) -> dict[tuple[int, ...], QRationalFunction]:
        """Full expansion ``{exponent vector of length k: coefficient}``."""
        out: dict[tuple[int, ...], QRationalFunction] = {}
        for mu, c in self.monomial_coeffs().items():
            padded = mu + (0,) * (self.k - len(mu))
            for exps in set(permutations(padded)):
                out[exps] = c
        return out

    def is_symmetric(self) -> bool:
        """Check invariance of the full expansion under every adjacent transposition."""
        full = self.expand()
        for i in range(self.k - 1):
            for exps, c in full.items():
                swapped = exps[:i] + (exps[i + 1], exps[i]) + exps[i + 2 :]
                if full.get(swapped) != c:
                    return False
        return True

    def same_in_alphabet(self, other: "SymPoly") -> bool:
        """Equality after specialising to the ``k`` variables."""
        self._check(other)
        return self.monomial_coeffs() == other.monomial_coeffs()

    def to_json_terms(self) -> list[dict[str, str]]:
        rows = []
        for exps, c in sorted(self.expand().items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0]))):
            rows.append({"monomial": _monomial_name(exps), "coeff": _format_coeff(c)})
        return rows

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.k == other.k and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.k, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        parts = [f"({_format_coeff(c)})*p{list(s)}" for s, c in sorted(self.terms.items())]
        return f"SymPoly(k={self.k}: {' + '.join(parts) or '0'})"


def _monomial_name(exps: tuple[int, ...]) -> str:
    factors = [f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exps, 1) if e]
    return "*".join(factors) or "1"


def _format_coeff(c: QRationalFunction) -> str:
    return str(c.as_polynomial()) if c.is_polynomial() else str(c)


# ---------------------------------------------------------------------------
# coefficient ring for generating functions
# ---------------------------------------------------------------------------


class SymRing(CoeffRing):
    """Symmetric polynomials on ``k`` letters as a coefficient ring (contains Q(q))."""

    has_psi = False
    has_rational_division = True

    def __init__(self, k: int) -> None:
        self.k = k
        self.key = f"Sym:{k}"

    def zero(self) -> SymPoly:
        return SymPoly(self.k)

    def one(self) -> SymPoly:
        return SymPoly.const(self.k, 1)

    def from_int(self, n: int) -> SymPoly:
        return SymPoly.const(self.k, n)

    def from_fraction(self, x: Fraction) -> SymPoly:
        return SymPoly.const(self.k, x)

    def from_qpoly(self, p: QPolynomial) -> SymPoly:
        return SymPoly.const(self.k, p)

    def add(self, a: SymPoly, b: SymPoly) -> SymPoly:
        return a + b

    def mul(self, a: SymPoly, b: SymPoly) -> SymPoly:
        return a * b

    def neg(self, a: SymPoly) -> SymPoly:
        return -a

    def is_zero(self, a: SymPoly) -> bool:
        return a.is_zero()

    def is_element(self, x: Any) -> bool:
        return isinstance(x, SymPoly) and x.k == self.k

    def is_unit(self, x: SymPoly) -> bool:
        return set(x.terms) == {()}

    def _inverse(self, x: SymPoly) -> SymPoly:
        return SymPoly.const(self.k, x.constant_term().inverse())

    def _psi(self, n: int, x: SymPoly) -> SymPoly:
        raise NotImplementedError

    def div_int(self, x: SymPoly, n: int) -> SymPoly:
        if n == 0:
            raise NotInvertible("division by zero")
        return x.scale_div(n)

    def random_element(self, rng: random.Random, size: int = 3) -> SymPoly:
        return SymPoly.power(self.k, rng.randint(1, self.k)) * rng.randint(-size, size)

    def format(self, x: Any) -> str:
        return repr(x)


# ---------------------------------------------------------------------------
# the alphabet and its bases
# ---------------------------------------------------------------------------


_FORMAL_LOCK = threading.Lock()


def _q_integer(k: int) -> QRationalFunction:
    return QRationalFunction.coerce(QPolynomial([1] * k))


def _one_minus_q_power(k: int) -> QRationalFunction:
    return QRationalFunction.coerce(1 - QPolynomial.monomial(k))


@dataclass(frozen=True)
class Alphabet:
    """The variables ``x_1..x_k``.

    With ``strict`` (the default) degrees above ``k`` raise DegreeExceedsAlphabet;
    ``strict=False`` still returns the exact specialisation.
    """

    k: int
    strict: bool = True

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("the alphabet needs at least one variable")

    def _check_degree(self, n: int) -> None:
        if n < 1:
            raise ValueError("degree must be positive")
        if self.strict and n > self.k:
            raise DegreeExceedsAlphabet(f"degree {n} exceeds the alphabet size {self.k}")

    @property
    def ring(self) -> SymRing:
        return SymRing(self.k)

    def power_sum(self, n: int) -> SymPoly:
        self._check_degree(n)
        return SymPoly.power(self.k, n)

    def complete_h(self, n: int) -> SymPoly:
        """``h_n = sum_{lambda |- n} p_lambda / z_lambda``."""
        self._check_degree(n)
        return SymPoly(self.k, {s: QRationalFunction.coerce(Fraction(1, z_factor(s))) for s in partitions(n)})

    def elementary_e(self, n: int) -> SymPoly:
        self._check_degree(n)
        return SymPoly(
            self.k,
            {s: QRationalFunction.coerce(Fraction((-1) ** (n - len(s)), z_factor(s))) for s in partitions(n)},
        )

    def _solve(self, name: str, n: int, weight: Callable[[int, int], QRationalFunction]) -> SymPoly:
        """Solve ``sum_{d|n} weight(d, n/d) X_d^(n/d) = p_n`` for ``X_n``."""
        self._check_degree(n)
        with _FORMAL_LOCK:
            values = list(_formal_tables.get((name, self.k), []))
            for j in range(len(values) + 1, n + 1):
                acc = SymPoly.power(self.k, j)
                for d in proper_divisors(j):
                    acc = acc - values[d - 1] ** (j // d) * weight(d, j // d)
                values.append(acc * weight(j, 1).inverse())
            _formal_tables[(name, self.k)] = values
        return values[n - 1]

    def u(self, n: int) -> SymPoly:
        return self._solve("u", n, lambda d, e: _q_integer(e) * d)

    def v(self, n: int) -> SymPoly:
        return self._solve("v", n, lambda d, e: _one_minus_q_power(e) * d)

    def qn(self, n: int) -> SymPoly:
        return self._solve("q", n, lambda d, e: QRationalFunction.coerce(d))

    def _product_coeff(self, factors: Callable[[int], SymPoly], n: int) -> SymPoly:
        """Coefficient of ``t^n`` in ``prod_{j<=n} 1/(1 - factors(j) t^j)``."""
        self._check_degree(n)
        return self.inverse_factor_product([factors(j) for j in range(1, n + 1)], n)[n]

    def inverse_factor_product(self, values: list[SymPoly], order: int) -> TruncatedSeries:
        """``prod_j 1/(1 - values[j-1] t^j)`` truncated at ``order``."""
        ring = self.ring
        result = TruncatedSeries.one(ring, order)
        for j, x in enumerate(values, 1):
            if j > order or x.is_zero():
                continue
            coeffs = [ring.zero()] * (order + 1)
            power = ring.one()
            for step in range(order // j + 1):
                coeffs[step * j] = power
                power = power * x
            result = result * TruncatedSeries(ring, order, coeffs)
        return result

    def deformed_factor_product(self, values: list[SymPoly], order: int) -> TruncatedSeries:
        """``prod_j (1 - q values[j-1] t^j)/(1 - values[j-1] t^j)`` truncated at ``order``."""
        ring = self.ring
        q = QRationalFunction.coerce(QPolynomial.q())
        result = self.inverse_factor_product(values, order)
        for j, x in enumerate(values, 1):
            if j <= order and not x.is_zero():
                result = result * TruncatedSeries.binomial(ring, order, -(x * q), j)
        return result

    def hq(self, n: int) -> SymPoly:
        """Coefficient of ``t^n`` in ``prod_j 1/(1 - u_j t^j)``."""
        return self._product_coeff(self.u, n)

    def gq(self, n: int) -> SymPoly:
        """Coefficient of ``t^n`` in ``prod_j 1/(1 - v_j t^j)``."""
        return self._product_coeff(self.v, n)

    def complete_series(self, order: int) -> TruncatedSeries:
        """``H(X, t) = sum_n h_n t^n``."""
        return TruncatedSeries(self.ring, order, [self.ring.one()] + [self.complete_h(n) for n in range(1, order + 1)])

    def complete_series_power(self, exponent: QRationalFunction, order: int) -> TruncatedSeries:
        """``H(X, t)^exponent = exp(exponent * log H)``."""
        log_h = series_log(self.complete_series(order))
        return series_exp(log_h.map_coeffs(lambda c: c * exponent))


_formal_tables: dict[tuple[str, int], list[SymPoly]] = {}


def complete_h_monomial(k: int, n: int) -> dict[Partition, QRationalFunction]:
    """``h_n`` directly in the monomial basis: every ``m_mu`` with at most k parts, coefficient 1."""
    return {mu: _ONE for mu in partitions(n) if len(mu) <= k}


def power_sum(alphabet: Alphabet, n: int) -> SymPoly:
    return alphabet.power_sum(n)


def complete_h(alphabet: Alphabet, n: int) -> SymPoly:
    return alphabet.complete_h(n)


def u_q(alphabet: Alphabet, n: int) -> SymPoly:
    return alphabet.u(n)


def v_q(alphabet: Alphabet, n: int) -> SymPoly:
    return alphabet.v(n)


def hq(alphabet: Alphabet, n: int) -> SymPoly:
    return alphabet.hq(n)


def gq(alphabet: Alphabet, n: int) -> SymPoly:
    return alphabet.gq(n)


def qn_basis(alphabet: Alphabet, n: int) -> SymPoly:
    return alphabet.qn(n)


def is_power_of_one_minus_q(c: QRationalFunction) -> bool:
    """True when ``c`` is an integer polynomial over ``+-(1-q)^j``."""
    if not c.numerator.is_integral():
        return False
    den = c.denominator
    j = den.degree
    return den == (QPolynomial([-1, 1]) ** j) or den == -(QPolynomial([-1, 1]) ** j)


__all__ = [
    "Alphabet",
    "SymPoly",
    "SymRing",
    "partitions",
    "z_factor",
    "power_sum_monomial_coeff",
    "complete_h_monomial",
    "power_sum",
    "complete_h",
    "u_q",
    "v_q",
    "hq",
    "gq",
    "qn_basis",
    "is_power_of_one_minus_q",
]
