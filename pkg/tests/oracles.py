"""Independent reference implementations used by the tests.

Nothing here calls the library's arithmetic; everything is rebuilt from
plain integers, Fractions or sympy so that agreement is meaningful.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

import sympy

Q = sympy.Symbol("q")


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def qint_int(k: int, m: int) -> int:
    return sum(m**i for i in range(k))


def mobius_m_table(m: int, size: int) -> list[int]:
    """mu_m(1..size) from sum_{d|n} [n/d]_m mu_m(d) = [n == 1]."""
    mu = [0] * (size + 1)
    for n in range(1, size + 1):
        mu[n] = 1 if n == 1 else -sum(qint_int(n // d, m) * mu[d] for d in divisors(n) if d < n)
    return mu[1:]


# ---------------------------------------------------------------------------
# classical big Witt vectors over Z (ghost w_n = sum d a_d^(n/d))
# ---------------------------------------------------------------------------


def classical_ghost(a: list[int]) -> list[int]:
    return [sum(d * a[d - 1] ** (n // d) for d in divisors(n)) for n in range(1, len(a) + 1)]


def classical_unghost(w: list[int]) -> list[int]:
    a: list[int] = []
    for n in range(1, len(w) + 1):
        rest = Fraction(w[n - 1] - sum(d * a[d - 1] ** (n // d) for d in divisors(n) if d < n), n)
        assert rest.denominator == 1, "classical Witt product left the integers"
        a.append(int(rest))
    return a


def classical_witt_mul(a: list[int], b: list[int]) -> list[int]:
    return classical_unghost([x * y for x, y in zip(classical_ghost(a), classical_ghost(b))])


def metropolis_rota_product(a: list[int], b: list[int]) -> list[int]:
    n_max = len(a)
    out = [0] * n_max
    for i in range(1, n_max + 1):
        for j in range(1, n_max + 1):
            lcm = i * j // gcd(i, j)
            if lcm <= n_max:
                out[lcm - 1] += gcd(i, j) * a[i - 1] * b[j - 1]
    return out


# ---------------------------------------------------------------------------
# necklace counting
# ---------------------------------------------------------------------------


def count_primitive_necklaces(alphabet_size: int, length: int) -> int:
    """Aperiodic words of the given length divided by the length (rotation classes)."""
    aperiodic = 0
    for word in itertools.product(range(alphabet_size), repeat=length):
        if all(word != word[shift:] + word[:shift] for shift in range(1, length)):
            aperiodic += 1
    assert aperiodic % length == 0
    return aperiodic // length


# ---------------------------------------------------------------------------
# integer bivariate series for the Kim-Lee identity
# ---------------------------------------------------------------------------


def _bmul(a: dict, b: dict, order: int) -> dict:
    out: dict = {}
    for (ta, qa), ca in a.items():
        for (tb, qb), cb in b.items():
            if ta + tb <= order:
                key = (ta + tb, qa + qb)
                out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def kimlee_integer_route(exponents: list[int], order: int) -> list[dict[int, int]]:
    """prod ((1-t^n)/(1-q t^n))^(a_n) using only integer-coefficient factors.

    Positive powers use (1 - t^n) * sum_k q^k t^(nk); negative powers use
    (1 - q t^n) * sum_k t^(nk). Returns, for each t-degree 1..order, a map
    q-degree -> integer coefficient.
    """
    result = {(0, 0): 1}
    for n, e in enumerate(exponents[:order], 1):
        if e == 0:
            continue
        if e > 0:
            factor = _bmul({(0, 0): 1, (n, 0): -1}, {(n * k, k): 1 for k in range(order // n + 1)}, order)
        else:
            factor = _bmul({(0, 0): 1, (n, 1): -1}, {(n * k, 0): 1 for k in range(order // n + 1)}, order)
        for _ in range(abs(e)):
            result = _bmul(result, factor, order)
    out = []
    for t in range(1, order + 1):
        out.append({qd: c for (td, qd), c in result.items() if td == t})
    return out


# ---------------------------------------------------------------------------
# sympy conversions
# ---------------------------------------------------------------------------


def qpoly_to_sympy(p) -> sympy.Expr:
    return sum((sympy.Rational(c.numerator, c.denominator) * Q**i for i, c in enumerate(p.coeffs)), sympy.Integer(0))


def qrat_to_sympy(r) -> sympy.Expr:
    return qpoly_to_sympy(r.numerator) / qpoly_to_sympy(r.denominator)


def mpoly_to_sympy(poly, g_symbol: sympy.Symbol) -> sympy.Expr:
    """MultiPolynomial -> sympy, reading the coefficient variable q as ``g_symbol``."""
    total = sympy.Integer(0)
    for mono, coeff in poly.terms.items():
        term = qpoly_to_sympy(coeff).subs(Q, g_symbol)
        for (letter, index), e in mono:
            term *= sympy.Symbol(f"{letter}{index}") ** e
        total += term
    return sympy.expand(total)
