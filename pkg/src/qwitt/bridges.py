"""Teichmueller-type maps and the isomorphism between Witt and necklace coordinates.

``tau(a)_n = sum_{d|n} M(a_d, n/d)`` where ``M`` is the deformed Teichmueller
polynomial of the context. ``M`` is characterised by

    sum_{d|n} d [n/d]_g Psi^(n/d)(M(x, d)) = [n]_g x^n,

and that triangular relation is how values are computed here (division by n,
certified exact). The closed forms are independent routes kept for checking.
"""

from __future__ import annotations

import threading
from typing import Any

from .errors import NoPsiStructure, NotDivisible, RingLacksRationalDivision
from .exactalg import QPolynomial, QRationalFunction
from .necklace import NecklaceVector, f_coeffs, mobius
from .numtheory import divisors, int_qint, moebius, proper_divisors
from .rings import CoeffRing
from .witt import Deformation, WittContext, WittVector, _qint_poly


def _require_lambda_like(ring: CoeffRing) -> None:
    if not ring.has_psi:
        raise NoPsiStructure(f"{ring} has no Psi operations")
    if not ring.is_torsion_free:
        raise RingLacksRationalDivision(f"Teichmueller values need a torsion-free ring, got {ring}")


def _certified_div(ring: CoeffRing, x: Any, n: int, label: str) -> Any:
    try:
        return ring.div_int(x, n)
    except NotDivisible as exc:
        raise NotDivisible(f"{label}: {exc} (the Psi structure may violate the lambda-ring congruences)") from exc


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def teich_classical(ring: CoeffRing, x: Any, n: int) -> Any:
    """``(1/n) sum_{d|n} mu(d) psi^d(x^(n/d))``."""
    _require_lambda_like(ring)
    acc = ring.zero()
    for d in divisors(n):
        mu = moebius(d)
        if mu:
            acc = ring.add(acc, ring.mul(ring.from_int(mu), ring.psi(d, ring.pow(x, n // d))))
    return _certified_div(ring, acc, n, f"M(x, {n})")


def teich_m(ring: CoeffRing, x: Any, n: int, m: int) -> Any:
    """``(1/n) sum_{d|n} mu_m(d) [n/d]_m Psi^d(x^(n/d))``."""
    _require_lambda_like(ring)
    acc = ring.zero()
    for d in divisors(n):
        c = mobius(m, d) * int_qint(n // d, m)
        if c:
            acc = ring.add(acc, ring.mul(ring.from_int(c), ring.psi(d, ring.pow(x, n // d))))
    return _certified_div(ring, acc, n, f"M^{m}(x, {n})")


def teich_g_closed(ring: CoeffRing, x: Any, n: int, g: QPolynomial) -> Any:
    """``(1/n) sum_{d|n} f_d(q) (1 - g(q^d)^(n/d)) psi^d(x^(n/d))``, evaluated in the rational extension."""
    _require_lambda_like(ring)
    ext = ring.rational_extension()
    target = ext.target
    g = QPolynomial.coerce(g)
    fs = f_coeffs(g, n)
    acc = target.zero()
    for d in divisors(n):
        weight = fs[d - 1] * (1 - QRationalFunction.coerce(g.psi(d)) ** (n // d))
        term = ext.embed(ring.psi(d, ring.pow(x, n // d)))
        acc = target.add(acc, target.mul(target.from_qrat(weight), term))
    value = target.div_int(acc, n)
    if not ext.contains(value):
        raise NotDivisible(f"M^g(x, {n}) = {target.format(value)} does not lie in {ring}")
    return ext.pullback(value)


# ---------------------------------------------------------------------------
# recursion, with a memo per (ring, deformation)
# ---------------------------------------------------------------------------


class TeichmullerCache:
    """Memoised ``M(x, n)`` for one ring and deformation, computed by the triangular relation."""

    _registry_lock = threading.Lock()
    _registry: dict[tuple, "TeichmullerCache"] = {}

    def __init__(self, ring: CoeffRing, deformation: Deformation) -> None:
        _require_lambda_like(ring)
        self.ring = ring
        self.deformation = deformation
        self._g = ring.from_qpoly(deformation.as_qpoly())
        self._gpow = ring.one()
        self._qint = [ring.zero()]
        self._values: dict[Any, dict[int, Any]] = {}
        self._lock = threading.Lock()

    @classmethod
    def for_context(cls, ctx: WittContext) -> "TeichmullerCache":
        key = (ctx.ring, ctx.deformation)
        with cls._registry_lock:
            cache = cls._registry.get(key)
            if cache is None:
                cache = cls._registry[key] = TeichmullerCache(ctx.ring, ctx.deformation)
            return cache

    def qint(self, k: int) -> Any:
        ring = self.ring
        while len(self._qint) <= k:
            self._qint.append(ring.add(self._qint[-1], self._gpow))
            self._gpow = ring.mul(self._gpow, self._g)
        return self._qint[k]

    def __call__(self, x: Any, n: int) -> Any:
        ring = self.ring
        with self._lock:
            table = self._values.setdefault(x, {})
            if n in table:
                return table[n]
            for k in divisors(n):
                if k in table:
                    continue
                acc = ring.mul(self.qint(k), ring.pow(x, k))
                for d in proper_divisors(k):
                    weight = ring.mul(ring.from_int(d), self.qint(k // d))
                    acc = ring.sub(acc, ring.mul(weight, ring.psi(k // d, table[d])))
                table[k] = _certified_div(ring, acc, k, f"M(x, {k})")
            return table[n]


def teich(ctx: WittContext, x: Any, n: int) -> Any:
    """Deformed Teichmueller value ``M(x, n)`` for the context's deformation."""
    return TeichmullerCache.for_context(ctx)(x, n)


def teich_g(ring: CoeffRing, x: Any, n: int, g: QPolynomial) -> Any:
    return TeichmullerCache(ring, Deformation.polynomial(g))(x, n)


def teich_m_recursive(ring: CoeffRing, x: Any, n: int, m: int) -> Any:
    return TeichmullerCache(ring, Deformation.integer(m))(x, n)


# ---------------------------------------------------------------------------
# tau
# ---------------------------------------------------------------------------


def tau(a: WittVector) -> NecklaceVector:
    ctx, ring = a.ctx, a.ctx.ring
    cache = TeichmullerCache.for_context(ctx)
    out = []
    for n in range(1, ctx.trunc + 1):
        acc = ring.zero()
        for d in divisors(n):
            if not ring.is_zero(a.coords[d - 1]):
                acc = ring.add(acc, cache(a.coords[d - 1], n // d))
        out.append(acc)
    return NecklaceVector(ctx, out)


def tau_inv(b: NecklaceVector) -> WittVector:
    """Unitriangular solve: ``a_n = b_n - sum_{d|n, d<n} M(a_d, n/d)``."""
    ctx, ring = b.ctx, b.ctx.ring
    cache = TeichmullerCache.for_context(ctx)
    coords: list[Any] = []
    for n in range(1, ctx.trunc + 1):
        acc = b.coords[n - 1]
        for d in proper_divisors(n):
            if not ring.is_zero(coords[d - 1]):
                acc = ring.sub(acc, cache(coords[d - 1], n // d))
        coords.append(acc)
    return WittVector(ctx, coords)


__all__ = [
    "TeichmullerCache",
    "teich",
    "teich_classical",
    "teich_m",
    "teich_m_recursive",
    "teich_g",
    "teich_g_closed",
    "tau",
    "tau_inv",
]
