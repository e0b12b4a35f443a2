"""Truncated q-deformed necklace rings over Psi-rings.

Addition is componentwise. The product is fixed by the twisted ghost map

    w_n = sum_{d|n} d (1 - g^(n/d)) Psi^(n/d)(a_d)

being multiplicative. Here ``g`` itself is never twisted: it enters the ghost
weights as the plain power ``g(q)^(n/d)``. Coefficients of earlier product
coordinates, on the other hand, do get twisted, which is why ``g(q^e)`` shows
up in the structure constants.
"""

from __future__ import annotations

import itertools
import threading
from math import gcd
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

from .errors import (
    DegenerateDeformation,
    NoPsiStructure,
    NotDivisible,
    NotInvertible,
    NotUnital,
    RingLacksRationalDivision,
    TruncationTooShort,
)
from .exactalg import QPolynomial, QRationalFunction
from .numtheory import divisors, int_qint, lcm, proper_divisors
from .rings import CoeffRing
from .witt import Deformation, GhostVector, WittContext, _Vector, _same_ctx, _qint_poly


class NecklaceVector(_Vector):
    """Element of the truncated necklace ring for ``ctx`` (the ring must carry Psi)."""

    def __init__(self, ctx: WittContext, coords: Sequence[Any]) -> None:
        if not ctx.ring.has_psi:
            raise NoPsiStructure(f"{ctx.ring} has no Psi operations")
        super().__init__(ctx, coords)

    def __add__(self, other: "NecklaceVector") -> "NecklaceVector":
        _same_ctx(self, other)
        add = self.ctx.ring.add
        return NecklaceVector(self.ctx, [add(a, b) for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "NecklaceVector":
        return NecklaceVector(self.ctx, [self.ctx.ring.neg(a) for a in self.coords])

    def __sub__(self, other: "NecklaceVector") -> "NecklaceVector":
        return self + (-other)

    def __mul__(self, other: "NecklaceVector") -> "NecklaceVector":
        return neck_mul(self, other)


# ---------------------------------------------------------------------------
# ghost side
# ---------------------------------------------------------------------------


def _require_psi(ring: CoeffRing) -> None:
    if not ring.has_psi:
        raise NoPsiStructure(f"{ring} has no Psi operations")


def _twisted_sum(ctx: WittContext, coords: Sequence[Any], n: int, weight: Any) -> Any:
    ring = ctx.ring
    acc = ring.zero()
    for d in divisors(n):
        c = coords[d - 1]
        if ring.is_zero(c):
            continue
        acc = ring.add(acc, ring.mul(weight(d, n // d), ring.psi(n // d, c)))
    return acc


def neck_ghost(a: NecklaceVector) -> GhostVector:
    ctx = a.ctx
    _require_psi(ctx.ring)
    return GhostVector(ctx, [_twisted_sum(ctx, a.coords, n, ctx.ghost_coeff) for n in range(1, ctx.trunc + 1)])


def _neck_ab(ctx: WittContext, coords: Sequence[Any], upto: int) -> list[Any]:
    return [_twisted_sum(ctx, coords, n, ctx.ab_coeff) for n in range(1, upto + 1)]


def _solve_neck_ab(ctx: WittContext, targets: Sequence[Any]) -> list[Any]:
    """Solve ``sum_{d|n} d [n/d]_g Psi^(n/d)(X_d) = targets[n-1]``."""
    ring = ctx.ring
    xs: list[Any] = []
    for n in range(1, len(targets) + 1):
        acc = targets[n - 1]
        for d in proper_divisors(n):
            if ring.is_zero(xs[d - 1]):
                continue
            acc = ring.sub(acc, ring.mul(ctx.ab_coeff(d, n // d), ring.psi(n // d, xs[d - 1])))
        try:
            xs.append(ring.div_int(acc, n))
        except NotDivisible as exc:
            raise NotDivisible(f"coordinate {n}: {exc}") from exc
    return xs


def neck_mul(a: NecklaceVector, b: NecklaceVector) -> NecklaceVector:
    _same_ctx(a, b)
    ctx, ring = a.ctx, a.ctx.ring
    _require_psi(ring)
    if not ctx.uses_ghost_path:
        return neck_mul_via_constants(a, b)
    aa = _neck_ab(ctx, a.coords, ctx.trunc)
    bb = _neck_ab(ctx, b.coords, ctx.trunc)
    targets = [ring.mul(ctx.one_minus_g, ring.mul(x, y)) for x, y in zip(aa, bb)]
    return NecklaceVector(ctx, _solve_neck_ab(ctx, targets))


# ---------------------------------------------------------------------------
# Moebius-like functions
# ---------------------------------------------------------------------------


class MobiusTable:
    """Memo of ``mu_m(n)`` for a fixed integer ``m``, extended on demand."""

    _lock = threading.Lock()
    _tables: dict[int, "MobiusTable"] = {}

    def __init__(self, m: int) -> None:
        self.m = m
        self.values: list[int] = [0, 1]

    @classmethod
    def for_m(cls, m: int) -> "MobiusTable":
        with cls._lock:
            table = cls._tables.get(m)
            if table is None:
                table = cls._tables[m] = MobiusTable(m)
            return table

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be positive")
        with self._lock:
            values = list(self.values)
            for k in range(len(values), n + 1):
                values.append(-sum(int_qint(k // d, self.m) * values[d] for d in proper_divisors(k)))
            self.values = values
        return values[n]


def mobius(m: int, n: int) -> int:
    """``mu_m(n)``: inverse of the incidence matrix ``[a/b]_m`` on the divisor lattice."""
    return MobiusTable.for_m(m)(n)


def _divisor_chains(n: int):
    """Chains ``n = x_0 > x_1 > ... > x_r = 1`` with each step a proper divisor."""
    if n == 1:
        yield (1,)
        return
    for d in proper_divisors(n):
        for tail in _divisor_chains(d):
            yield (n,) + tail


def mobius_chain(m: int, n: int) -> int:
    """Chain-sum formula: ``sum (-1)^r prod [x_k / x_(k+1)]_m`` over divisor chains."""
    total = 0
    for chain in _divisor_chains(n):
        weight = (-1) ** (len(chain) - 1)
        for big, small in zip(chain, chain[1:]):
            weight *= int_qint(big // small, m)
        total += weight
    return total


def mobius_matrix(m: int, size: int) -> list[list[Fraction]]:
    """Inverse of ``zeta_m(a, b) = [a/b]_m`` (b | a) by Gauss-Jordan over Q; 0-based indices."""
    zeta = [
        [Fraction(int_qint(a // b, m)) if a % b == 0 else Fraction(0) for b in range(1, size + 1)]
        for a in range(1, size + 1)
    ]
    aug = [row + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(zeta)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def _ordered_factorizations(n: int):
    """Ordered tuples of integers >= 2 with product ``n`` (empty tuple for n = 1)."""
    if n == 1:
        yield ()
        return
    for first in divisors(n)[1:]:
        for rest in _ordered_factorizations(n // first):
            yield (first,) + rest


def mobius_composition(m: int, n: int) -> int:
    """Sum over multiplicative compositions of ``n`` into parts >= 2 of ``(-1)^l prod [part]_m``."""
    total = 0
    for parts in _ordered_factorizations(n):
        weight = (-1) ** len(parts)
        for p in parts:
            weight *= int_qint(p, m)
        total += weight
    return total


_HAT_LOCK = threading.Lock()
_HAT_CACHE: dict[QPolynomial, list[QPolynomial]] = {}


def mobius_hat(g: QPolynomial, n: int) -> QPolynomial:
    """Polynomial analogue: ``muhat(n)(q) = -sum_{d|n, d<n} [n/d]_{g(q)} muhat(d)(q^(n/d))``."""
    g = QPolynomial.coerce(g)
    with _HAT_LOCK:
        values = list(_HAT_CACHE.get(g, [QPolynomial.zero(), QPolynomial.one()]))
        for k in range(len(values), n + 1):
            acc = QPolynomial.zero()
            for d in proper_divisors(k):
                acc = acc + _qint_poly(k // d, g) * values[d].psi(k // d)
            values.append(-acc)
        _HAT_CACHE[g] = values
    return values[n]


def mobius_hat_chain(g: QPolynomial, n: int) -> QPolynomial:
    """Chain-weight formula with the twist ``[x_k/x_(k+1)]_{g(q^(x_0/x_k))}``."""
    g = QPolynomial.coerce(g)
    total = QPolynomial.zero()
    for chain in _divisor_chains(n):
        weight = QPolynomial.const((-1) ** (len(chain) - 1))
        for big, small in zip(chain, chain[1:]):
            weight = weight * _qint_poly(big // small, g.psi(n // big))
        total = total + weight
    return total


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def struct_const_int(m: int, n: int, i: int, j: int) -> int:
    """Coefficient of ``Psi^(n/i)(x_i) Psi^(n/j)(y_j)`` in the n-th product coordinate (integer m)."""
    if n % i or n % j:
        raise ValueError("i and j must divide n")
    top = n // lcm(i, j)
    inner = sum(int_qint(n // (e * i), m) * int_qint(n // (e * j), m) * mobius(m, e) for e in divisors(top))
    numerator = (1 - m) * i * j * inner
    if numerator % n:
        raise NotDivisible(f"(1-m) i j sum = {numerator} is not divisible by {n}")
    return numerator // n


_POLY_CONST_LOCK = threading.Lock()
_POLY_CONST_CACHE: dict[tuple[QPolynomial, int, int, int], QPolynomial] = {}


def struct_const_poly(g: QPolynomial, n: int, i: int, j: int) -> QPolynomial:
    """Polynomial-deformation structure constant, as an integer polynomial in q."""
    if n % i or n % j:
        raise ValueError("i and j must divide n")
    g = QPolynomial.coerce(g)
    key = (g, n, i, j)
    cached = _POLY_CONST_CACHE.get(key)
    if cached is not None:
        return cached
    total = QPolynomial.zero()
    for e in divisors(n // lcm(i, j)):
        ge = g.psi(e)
        total = total + (1 - ge) * _qint_poly(n // (e * i), ge) * _qint_poly(n // (e * j), ge) * mobius_hat(g, e)
    value = total * (i * j) / n
    if not value.is_integral():
        raise NotDivisible(f"structure constant ({n},{i},{j}) = {value} is not in Z[q]")
    with _POLY_CONST_LOCK:
        _POLY_CONST_CACHE[key] = value
    return value


def struct_const(ctx: WittContext, n: int, i: int, j: int) -> Any:
    """Structure constant as an element of ``ctx.ring``."""
    deformation = ctx.deformation
    if deformation.is_polynomial:
        return ctx.ring.from_qpoly(struct_const_poly(deformation.g, n, i, j))
    return ctx.ring.from_int(struct_const_int(deformation.m, n, i, j))


def struct_const_symbolic(deformation: Deformation, n: int, i: int, j: int) -> QPolynomial:
    if deformation.is_polynomial:
        return struct_const_poly(deformation.g, n, i, j)
    return QPolynomial.const(struct_const_int(deformation.m, n, i, j))


def neck_mul_via_constants(a: NecklaceVector, b: NecklaceVector) -> NecklaceVector:
    """Product by the explicit expansion ``sum_{i,j|n} c(i,j) Psi^(n/i)(x_i) Psi^(n/j)(y_j)``.

    For the polynomial deformation the constants assume ``Psi^k(q) = q^k``.
    """
    _same_ctx(a, b)
    ctx, ring = a.ctx, a.ctx.ring
    _require_psi(ring)
    out = []
    for n in range(1, ctx.trunc + 1):
        divs = divisors(n)
        xs = {i: ring.psi(n // i, a.coords[i - 1]) for i in divs}
        ys = {j: ring.psi(n // j, b.coords[j - 1]) for j in divs}
        acc = ring.zero()
        for i in divs:
            if ring.is_zero(xs[i]):
                continue
            for j in divs:
                if ring.is_zero(ys[j]):
                    continue
                c = struct_const(ctx, n, i, j)
                if not ring.is_zero(c):
                    acc = ring.add(acc, ring.mul(c, ring.mul(xs[i], ys[j])))
        out.append(acc)
    return NecklaceVector(ctx, out)


# ---------------------------------------------------------------------------
# inverse ghost
# ---------------------------------------------------------------------------


_F_LOCK = threading.Lock()
_F_CACHE: dict[QPolynomial, list[QRationalFunction]] = {}


def f_coeffs(g: QPolynomial, trunc: int) -> list[QRationalFunction]:
    """``f_1..f_trunc`` in Q(q) with ``sum_{d|n} (1 - g^(n/d)) psi^(n/d)(f_d) = [n == 1]``."""
    g = QPolynomial.coerce(g)
    if g.is_one():
        raise DegenerateDeformation("f_n needs g != 1")
    one = QRationalFunction.coerce(1)
    gr = QRationalFunction.coerce(g)
    with _F_LOCK:
        values = list(_F_CACHE.get(g, []))
        for n in range(len(values) + 1, trunc + 1):
            acc = one if n == 1 else QRationalFunction.coerce(0)
            for d in proper_divisors(n):
                acc = acc - (one - gr ** (n // d)) * values[d - 1].psi(n // d)
            values.append(acc / (one - gr))
        _F_CACHE[g] = values
    return values[:trunc]


def eta_inverse(w: GhostVector) -> NecklaceVector:
    """``eta(w)_n = (1/n) sum_{d|n} f_d Psi^d(w_(n/d))``; inverse of :func:`neck_ghost`."""
    ctx, ring = w.ctx, w.ctx.ring
    _require_psi(ring)
    if not ring.has_rational_division:
        raise RingLacksRationalDivision(f"eta needs a Q-algebra, got {ring}")
    fs = [ring.from_qrat(f) for f in f_coeffs(ctx.deformation.as_qpoly(), ctx.trunc)]
    out = []
    for n in range(1, ctx.trunc + 1):
        acc = ring.zero()
        for d in divisors(n):
            acc = ring.add(acc, ring.mul(fs[d - 1], ring.psi(d, w.coords[n // d - 1])))
        out.append(ring.div_int(acc, n))
    return NecklaceVector(ctx, out)


# ---------------------------------------------------------------------------
# unity
# ---------------------------------------------------------------------------


def neck_unity_coefficients(deformation: Deformation, trunc: int) -> list[QRationalFunction]:
    """``E_n`` in Q(q) with ``sum_{d|n} d (1 - g^(n/d)) Psi^(n/d)(E_d) = 1`` for every n."""
    if deformation.is_degenerate():
        raise DegenerateDeformation("no unity recursion at g = 1 / m = 1")
    g = QRationalFunction.coerce(deformation.as_qpoly())
    one = QRationalFunction.coerce(1)
    es: list[QRationalFunction] = []
    for n in range(1, trunc + 1):
        acc = one
        for d in proper_divisors(n):
            twisted = es[d - 1].psi(n // d) if deformation.is_polynomial else es[d - 1]
            acc = acc - (one - g ** (n // d)) * twisted * d
        es.append(acc / ((one - g) * n))
    return es


def neck_unity(ctx: WittContext) -> NecklaceVector:
    """Multiplicative identity. Equals ``((1-g)^-1, 0, 0, ...)`` when ``g(q^k) = g(q)^k``."""
    ring = ctx.ring
    _require_psi(ring)
    if not ring.is_unit(ctx.one_minus_g):
        raise NotUnital(f"1 - ({ctx.deformation.label()}) is not a unit in {ring}")
    coords = []
    for e in neck_unity_coefficients(ctx.deformation, ctx.trunc):
        try:
            coords.append(ring.from_qrat(e))
        except (NotInvertible, NotDivisible) as exc:
            raise NotUnital(f"unity coordinate {e} does not live in {ring}: {exc}") from exc
    return NecklaceVector(ctx, coords)


# ---------------------------------------------------------------------------
# induction, restriction, transport
# ---------------------------------------------------------------------------


def neck_induce(r: int, a: NecklaceVector) -> NecklaceVector:
    if r < 1:
        raise ValueError("r must be positive")
    ring = a.ctx.ring
    return NecklaceVector(
        a.ctx,
        [a.coords[n // r - 1] if n % r == 0 else ring.zero() for n in range(1, a.ctx.trunc + 1)],
    )


def _check_restrict_input(r: int, a: NecklaceVector, trunc: int) -> None:
    if r < 1:
        raise ValueError("r must be positive")
    if a.ctx.trunc < trunc * r:
        raise TruncationTooShort(
            f"restriction by {r} to level {trunc} needs input level {trunc * r}, got {a.ctx.trunc}"
        )


def neck_restrict(r: int, a: NecklaceVector, trunc: int) -> NecklaceVector:
    """Ring map with ``neck_ghost(R)_n = neck_ghost(a)_(n r)``, by the triangular recursion."""
    _check_restrict_input(r, a, trunc)
    ctx = a.ctx
    _require_psi(ctx.ring)
    ab = _neck_ab(ctx, a.coords, trunc * r)
    out_ctx = ctx.with_trunc(trunc)
    return NecklaceVector(out_ctx, _solve_neck_ab(out_ctx, [ab[n * r - 1] for n in range(1, trunc + 1)]))


def neck_restrict_closed(r: int, a: NecklaceVector, trunc: int) -> NecklaceVector:
    """Closed-form restriction for an integer deformation ``m``:

    ``R_n = (1/n) sum_{e | n r} e (sum_{d | gcd(n, nr/e)} mu_m(d) [nr/(d e)]_m) Psi^(nr/e)(a_e)``.
    """
    _check_restrict_input(r, a, trunc)
    ctx, ring = a.ctx, a.ctx.ring
    _require_psi(ring)
    if ctx.deformation.is_polynomial:
        raise ValueError("the closed form is only available for an integer deformation")
    m = ctx.deformation.m
    out = []
    for n in range(1, trunc + 1):
        acc = ring.zero()
        for e in divisors(n * r):
            k = n * r // e
            weight = e * sum(mobius(m, d) * int_qint(k // d, m) for d in divisors(n) if k % d == 0)
            if weight and not ring.is_zero(a.coords[e - 1]):
                acc = ring.add(acc, ring.mul(ring.from_int(weight), ring.psi(k, a.coords[e - 1])))
        out.append(ring.div_int(acc, n))
    return NecklaceVector(ctx.with_trunc(trunc), out)


def neck_transport_two_minus(a: NecklaceVector) -> NecklaceVector:
    """Strict isomorphism onto the ``2 - g`` (resp. ``2 - m``) necklace ring."""
    ctx, ring = a.ctx, a.ctx.ring
    _require_psi(ring)
    if ctx.deformation.is_degenerate():
        raise DegenerateDeformation("transport needs g != 1")
    if not ctx.uses_ghost_path:
        raise RingLacksRationalDivision(f"transport needs division by integers in {ring}")
    target = ctx.with_deformation(ctx.deformation.two_minus())
    targets = [ring.neg(x) for x in _neck_ab(ctx, a.coords, ctx.trunc)]
    return NecklaceVector(target, _solve_neck_ab(target, targets))


def metropolis_rota(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Classical necklace product ``c_n = sum_{lcm(i,j)=n} gcd(i,j) a_i b_j`` on integer lists."""
    n_max = len(a)
    out = [0] * n_max
    for i, j in itertools.product(range(1, n_max + 1), repeat=2):
        n = lcm(i, j)
        if n <= n_max:
            out[n - 1] += gcd(i, j) * a[i - 1] * b[j - 1]
    return out


__all__ = [
    "NecklaceVector",
    "MobiusTable",
    "neck_ghost",
    "neck_mul",
    "neck_mul_via_constants",
    "mobius",
    "mobius_chain",
    "mobius_matrix",
    "mobius_composition",
    "mobius_hat",
    "mobius_hat_chain",
    "struct_const",
    "struct_const_int",
    "struct_const_poly",
    "struct_const_symbolic",
    "f_coeffs",
    "eta_inverse",
    "neck_unity",
    "neck_unity_coefficients",
    "neck_induce",
    "neck_restrict",
    "neck_restrict_closed",
    "neck_transport_two_minus",
    "metropolis_rota",
]
