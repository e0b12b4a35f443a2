"""Power-series presentation of the deformed Witt rings.

A Witt vector ``a`` is carried to ``Theta(a) = prod_n 1/(1 - a_n t^n)``. Sum and
product of series are defined by transport through Theta, and the ghost side
is the logarithmic derivative of ``prod_n (1 - g a_n t^n)/(1 - a_n t^n)``.
"""

from __future__ import annotations

from typing import Any, Sequence

from .errors import ConstantTermNotOne, IntegralityViolation, RingLacksRationalDivision
from .exactalg import QPolynomial, TruncatedSeries, series_exp, series_int_pow
from .rings import QQ_poly
from .witt import GhostVector, WittContext, WittVector, _same_ctx, ghost, witt_add, witt_mul


class LambdaElement:
    """Truncated series ``1 + s_1 t + ... + s_N t^N`` tagged with a Witt context."""

    __slots__ = ("ctx", "series")

    def __init__(self, ctx: WittContext, series: TruncatedSeries) -> None:
        if series.ring != ctx.ring or series.order != ctx.trunc:
            raise ValueError(f"series must live in {ctx.ring} at order {ctx.trunc}")
        if not ctx.ring.eq(series[0], ctx.ring.one()):
            raise ConstantTermNotOne(f"constant term is {ctx.ring.format(series[0])}")
        self.ctx = ctx
        self.series = series

    @classmethod
    def from_coeffs(cls, ctx: WittContext, coeffs: Sequence[Any]) -> "LambdaElement":
        """Build from ``[s_0, s_1, ..., s_N]`` (``s_0`` must be 1)."""
        return cls(ctx, TruncatedSeries(ctx.ring, ctx.trunc, coeffs))

    @classmethod
    def parse(cls, ctx: WittContext, texts: Sequence[Any]) -> "LambdaElement":
        return cls.from_coeffs(ctx, [ctx.ring.parse(t) for t in texts])

    def __getitem__(self, i: int) -> Any:
        return self.series[i]

    def to_strings(self) -> list[str]:
        return self.series.to_strings()

    def __add__(self, other: "LambdaElement") -> "LambdaElement":
        return lam_add(self, other)

    def __mul__(self, other: "LambdaElement") -> "LambdaElement":
        return lam_mul(self, other)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, LambdaElement):
            return NotImplemented
        return self.ctx == other.ctx and self.series == other.series

    def __hash__(self) -> int:
        return hash((self.ctx, tuple(self.to_strings())))

    def __repr__(self) -> str:
        return f"LambdaElement({self.ctx.deformation.label()}, {self.to_strings()})"


def _geometric(ring: Any, order: int, x: Any, degree: int) -> TruncatedSeries:
    """``1/(1 - x t^degree)`` truncated at ``order``."""
    coeffs = [ring.zero()] * (order + 1)
    power = ring.one()
    for k in range(0, order // degree + 1):
        coeffs[k * degree] = power
        power = ring.mul(power, x)
    return TruncatedSeries(ring, order, coeffs)


def theta(a: WittVector) -> LambdaElement:
    ctx, ring = a.ctx, a.ctx.ring
    result = TruncatedSeries.one(ring, ctx.trunc)
    for n, x in enumerate(a.coords, 1):
        if not ring.is_zero(x):
            result = result * _geometric(ring, ctx.trunc, x, n)
    return LambdaElement(ctx, result)


def theta_inv(s: LambdaElement) -> WittVector:
    """Peel off ``1/(1 - a_n t^n)`` factors: ``a_n`` is the t^n coefficient of what remains."""
    ctx, ring = s.ctx, s.ctx.ring
    rest = s.series
    coords = []
    for n in range(1, ctx.trunc + 1):
        a_n = rest[n]
        coords.append(a_n)
        if not ring.is_zero(a_n):
            rest = rest * TruncatedSeries.binomial(ring, ctx.trunc, ring.neg(a_n), n)
    return WittVector(ctx, coords)


def lam_add(s: LambdaElement, u: LambdaElement) -> LambdaElement:
    _same_ctx(s, u)
    return theta(witt_add(theta_inv(s), theta_inv(u)))


def lam_mul(s: LambdaElement, u: LambdaElement) -> LambdaElement:
    _same_ctx(s, u)
    return theta(witt_mul(theta_inv(s), theta_inv(u)))


def deformed_product(a: WittVector) -> TruncatedSeries:
    """``prod_n (1 - g a_n t^n) / (1 - a_n t^n)``."""
    ctx, ring = a.ctx, a.ctx.ring
    result = theta(a).series
    for n, x in enumerate(a.coords, 1):
        if not ring.is_zero(x):
            result = result * TruncatedSeries.binomial(ring, ctx.trunc, ring.neg(ring.mul(ctx.g_elem, x)), n)
    return result


def upsilon(s: LambdaElement) -> GhostVector:
    """Ghost components of ``s`` read through its Witt coordinates."""
    return ghost(theta_inv(s))


def upsilon_formal(s: LambdaElement) -> GhostVector:
    """Same map computed as ``F'/F`` for ``F = prod (1 - g a_n t^n)/(1 - a_n t^n)``.

    ``w_n`` is the coefficient of ``t^(n-1)``. Only a series inverse with constant
    term 1 is needed, so this works without rational division.
    """
    ctx = s.ctx
    f = deformed_product(theta_inv(s))
    quotient = TruncatedSeries(ctx.ring, ctx.trunc, f.derivative() + [ctx.ring.zero()]) * f.inverse()
    return GhostVector(ctx, [quotient[n - 1] for n in range(1, ctx.trunc + 1)])


def kimlee_expand(a: Sequence[int], trunc: int) -> list[QPolynomial]:
    """``b_1..b_N`` with ``prod_n ((1 - t^n)/(1 - q t^n))^(a_n) = 1 + sum b_n t^n``.

    Computed over Q[q]; every ``b_n`` is certified to have integer coefficients.
    """
    ring = QQ_poly
    q = ring.q_image
    result = TruncatedSeries.one(ring, trunc)
    for n, e in enumerate(a[:trunc], 1):
        e = int(e)
        if e == 0:
            continue
        factor = TruncatedSeries.binomial(ring, trunc, ring.from_int(-1), n) * _geometric(ring, trunc, q, n)
        result = result * series_int_pow(factor, e)
    out = []
    for n in range(1, trunc + 1):
        b = result[n]
        if not b.is_integral():
            raise IntegralityViolation(f"b_{n} = {b} is not in Z[q]")
        out.append(b)
    return out


def symmetric_product(b: Any) -> LambdaElement:
    """Series attached to necklace coordinates ``b`` (any vector type with ``ctx``/``coords``).

    Integer coordinates (fixed by every Psi): ``prod ((1 - g t^n)/(1 - t^n))^(b_n)``.
    Otherwise: ``prod_n exp(sum_r (1/r)(1 - g^r) Psi^r(b_n) t^(n r))``, which needs a Q-algebra.
    """
    ctx, ring = b.ctx, b.ctx.ring
    order = ctx.trunc
    ints = [ring.to_int(x) for x in b.coords]
    if all(v is not None for v in ints):
        base_cache: dict[int, TruncatedSeries] = {}
        result = TruncatedSeries.one(ring, order)
        for n, e in enumerate(ints, 1):
            if e == 0:
                continue
            base = base_cache.get(n)
            if base is None:
                base = TruncatedSeries.binomial(ring, order, ring.neg(ctx.g_elem), n) * _geometric(
                    ring, order, ring.one(), n
                )
                base_cache[n] = base
            result = result * series_int_pow(base, e)
        return LambdaElement(ctx, result)
    if not ring.has_rational_division:
        raise RingLacksRationalDivision(f"the exponential form needs a Q-algebra, got {ring}")
    coeffs = [ring.zero()] * (order + 1)
    for n, x in enumerate(b.coords, 1):
        if ring.is_zero(x):
            continue
        for r in range(1, order // n + 1):
            term = ring.mul(ring.sub(ring.one(), ctx.g_power(r)), ring.psi(r, x))
            coeffs[n * r] = ring.add(coeffs[n * r], ring.div_int(term, r))
    return LambdaElement(ctx, series_exp(TruncatedSeries(ring, order, coeffs)))


__all__ = [
    "LambdaElement",
    "theta",
    "theta_inv",
    "lam_add",
    "lam_mul",
    "deformed_product",
    "upsilon",
    "upsilon_formal",
    "kimlee_expand",
    "symmetric_product",
]
