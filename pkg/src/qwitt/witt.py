"""Truncated q-deformed Witt vectors.

A :class:`WittContext` fixes the deformation (a polynomial ``g(q)`` or an integer
``m``), the truncation level ``N`` and the coefficient ring. Coordinates are
indexed ``1..N``; every operation on coordinate ``n`` only looks at divisors of
``n`` (or of ``n*r`` for restriction), so truncation is exact.

Sum, product and negative are defined by the abelianised ghost relations

    sum_{d|n} d [n/d]_g S_d^(n/d) = ab(a)_n + ab(b)_n
    sum_{d|n} d [n/d]_g P_d^(n/d) = (1 - g) ab(a)_n ab(b)_n
    sum_{d|n} d [n/d]_g I_d^(n/d) = -ab(a)_n

where ``ab(a)_n = sum_{d|n} d [n/d]_g a_d^(n/d)``. Solving them needs division by
``n`` only, so ``g = 1`` works too. Torsion-free rings solve them directly; other
rings evaluate the universal polynomials from :func:`gen_defining_polys`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import (
    ContextMismatch,
    DegenerateDeformation,
    IntegralityViolation,
    NotDivisible,
    NotUnital,
    RingLacksRationalDivision,
    RingMismatch,
    TruncationTooShort,
)
from .exactalg import MultiPolynomial, QPolynomial, QRationalFunction, mpoly_substitute
from .numtheory import divisors, proper_divisors
from .rings import QQ, QQ_q, CoeffRing


# ---------------------------------------------------------------------------
# deformation and context
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Deformation:
    """Either a polynomial ``g(q)`` with integer coefficients or an integer ``m``."""

    g: QPolynomial | None = None
    m: int | None = None

    def __post_init__(self) -> None:
        if (self.g is None) == (self.m is None):
            raise ValueError("give exactly one of g or m")
        if self.g is not None and not self.g.is_integral():
            raise ValueError(f"deformation polynomial {self.g} must have integer coefficients")

    @classmethod
    def polynomial(cls, g: QPolynomial | str | int) -> "Deformation":
        if isinstance(g, str):
            g = QPolynomial.parse(g)
        return cls(g=QPolynomial.coerce(g))

    @classmethod
    def integer(cls, m: int) -> "Deformation":
        return cls(m=int(m))

    @property
    def is_polynomial(self) -> bool:
        return self.g is not None

    def as_qpoly(self) -> QPolynomial:
        return self.g if self.g is not None else QPolynomial.const(self.m)

    def is_degenerate(self) -> bool:
        """True for g = 1 or m = 1, where the ghost map stops being injective."""
        return self.as_qpoly().is_one()

    def two_minus(self) -> "Deformation":
        if self.g is not None:
            return Deformation(g=2 - self.g)
        return Deformation(m=2 - self.m)

    def constant(self, h: int) -> "Deformation":
        """A constant deformation of the same kind (polynomial or integer)."""
        return Deformation(g=QPolynomial.const(h)) if self.g is not None else Deformation(m=h)

    def label(self) -> str:
        return f"g={self.g}" if self.g is not None else f"m={self.m}"


class WittContext:
    """Deformation + truncation + coefficient ring, with cached derived constants."""

    def __init__(self, deformation: Deformation, trunc: int, ring: CoeffRing) -> None:
        if trunc < 1:
            raise ValueError("truncation must be at least 1")
        if deformation.is_polynomial and ring.q_image is None:
            raise RingMismatch(f"a polynomial deformation needs a Z[q]-algebra, got {ring}")
        if not deformation.is_polynomial and ring.q_image is not None:
            raise RingMismatch(f"an integer deformation needs a ring without q, got {ring}")
        self.deformation = deformation
        self.trunc = trunc
        self.ring = ring
        self.g_elem = ring.from_qpoly(deformation.as_qpoly())
        self.one_minus_g = ring.sub(ring.one(), self.g_elem)
        self._qints: list[Any] = [ring.zero()]
        self._gpows: list[Any] = [ring.one()]
        self._ghost_coeffs: dict[tuple[int, int], Any] = {}
        self._ab_coeffs: dict[tuple[int, int], Any] = {}

    @classmethod
    def make(cls, ring: CoeffRing, trunc: int, *, g: Any = None, m: int | None = None) -> "WittContext":
        if g is not None:
            return cls(Deformation.polynomial(g), trunc, ring)
        if m is None:
            raise ValueError("give g or m")
        return cls(Deformation.integer(m), trunc, ring)

    def with_trunc(self, trunc: int) -> "WittContext":
        return WittContext(self.deformation, trunc, self.ring)

    def with_deformation(self, deformation: Deformation) -> "WittContext":
        return WittContext(deformation, self.trunc, self.ring)

    @property
    def uses_ghost_path(self) -> bool:
        return self.ring.is_torsion_free

    def qint(self, k: int) -> Any:
        """``[k]_g`` as a ring element."""
        ring = self.ring
        while len(self._qints) <= k:
            self._qints.append(ring.add(self._qints[-1], self.g_power(len(self._qints) - 1)))
        return self._qints[k]

    def g_power(self, k: int) -> Any:
        ring = self.ring
        while len(self._gpows) <= k:
            self._gpows.append(ring.mul(self._gpows[-1], self.g_elem))
        return self._gpows[k]

    def ghost_coeff(self, d: int, k: int) -> Any:
        """``d (1 - g^k)``."""
        value = self._ghost_coeffs.get((d, k))
        if value is None:
            ring = self.ring
            value = ring.mul(ring.from_int(d), ring.sub(ring.one(), self.g_power(k)))
            self._ghost_coeffs[(d, k)] = value
        return value

    def ab_coeff(self, d: int, k: int) -> Any:
        """``d [k]_g``."""
        value = self._ab_coeffs.get((d, k))
        if value is None:
            value = self._ab_coeffs[(d, k)] = self.ring.mul(self.ring.from_int(d), self.qint(k))
        return value

    def _key(self) -> tuple:
        return (self.deformation, self.trunc, self.ring)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, WittContext) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"WittContext({self.deformation.label()}, N={self.trunc}, ring={self.ring})"


class _Vector:
    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: WittContext, coords: Iterable[Any]) -> None:
        cs = tuple(coords)
        if len(cs) != ctx.trunc:
            raise ValueError(f"expected {ctx.trunc} coordinates, got {len(cs)}")
        for c in cs:
            if not ctx.ring.is_element(c):
                raise RingMismatch(f"coordinate {c!r} is not an element of {ctx.ring}")
        self.ctx = ctx
        self.coords = cs

    @classmethod
    def parse(cls, ctx: WittContext, texts: Sequence[Any]) -> Any:
        return cls(ctx, [ctx.ring.parse(t) for t in texts])

    @classmethod
    def zero(cls, ctx: WittContext) -> Any:
        return cls(ctx, [ctx.ring.zero()] * ctx.trunc)

    @classmethod
    def random(cls, ctx: WittContext, rng: Any, size: int = 3) -> Any:
        return cls(ctx, [ctx.ring.random_element(rng, size) for _ in range(ctx.trunc)])

    def __getitem__(self, n: int) -> Any:
        """1-based coordinate access."""
        if not 1 <= n <= len(self.coords):
            raise IndexError(n)
        return self.coords[n - 1]

    def __len__(self) -> int:
        return len(self.coords)

    def to_strings(self) -> list[str]:
        return [self.ctx.ring.format(c) for c in self.coords]

    def __eq__(self, other: Any) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.ctx == other.ctx and all(
            self.ctx.ring.eq(a, b) for a, b in zip(self.coords, other.coords)
        )

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.ctx, tuple(self.to_strings())))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.ctx.deformation.label()}, {self.ctx.ring}, {self.to_strings()})"


class GhostVector(_Vector):
    """Ghost-side sequence; addition and multiplication are componentwise."""

    def __add__(self, other: "GhostVector") -> "GhostVector":
        _same_ctx(self, other)
        add = self.ctx.ring.add
        return GhostVector(self.ctx, [add(a, b) for a, b in zip(self.coords, other.coords)])

    def __mul__(self, other: "GhostVector") -> "GhostVector":
        _same_ctx(self, other)
        mul = self.ctx.ring.mul
        return GhostVector(self.ctx, [mul(a, b) for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GhostVector":
        return GhostVector(self.ctx, [self.ctx.ring.neg(a) for a in self.coords])

    def __sub__(self, other: "GhostVector") -> "GhostVector":
        return self + (-other)


class WittVector(_Vector):
    """Element of the truncated Witt ring for ``ctx``."""

    # lazily filled: coordinate power tables and abelianised ghost components
    __slots__ = ("_powers", "_ab")

    def _power_tables(self) -> list["_Powers"]:
        tables = getattr(self, "_powers", None)
        if tables is None:
            tables = self._powers = [_Powers(self.ctx.ring, c) for c in self.coords]
        return tables

    def _ab_components(self) -> list[Any]:
        ab = getattr(self, "_ab", None)
        if ab is None:
            ab = self._ab = _ab_from_coords(self.ctx, self.coords, self.ctx.trunc, self._power_tables())
        return ab

    def __add__(self, other: "WittVector") -> "WittVector":
        return witt_add(self, other)

    def __mul__(self, other: "WittVector") -> "WittVector":
        return witt_mul(self, other)

    def __neg__(self) -> "WittVector":
        return witt_neg(self)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return witt_add(self, witt_neg(other))


def _same_ctx(a: _Vector, b: _Vector) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatch(f"{a.ctx} vs {b.ctx}")


# ---------------------------------------------------------------------------
# power caching and the triangular solver
# ---------------------------------------------------------------------------


class _Powers:
    """Lazily extended list ``[1, x, x^2, ...]``."""

    __slots__ = ("ring", "pows")

    def __init__(self, ring: CoeffRing, x: Any) -> None:
        self.ring = ring
        self.pows = [ring.one(), x]

    def __call__(self, k: int) -> Any:
        pows = self.pows
        while len(pows) <= k:
            pows.append(self.ring.mul(pows[-1], pows[1]))
        return pows[k]


def _ab_from_coords(
    ctx: WittContext, coords: Sequence[Any], upto: int, powers: Sequence[_Powers] | None = None
) -> list[Any]:
    ring = ctx.ring
    if powers is None:
        powers = [_Powers(ring, c) for c in coords]
    out = []
    for n in range(1, upto + 1):
        acc = ring.zero()
        for d in divisors(n):
            c = coords[d - 1]
            if ring.is_zero(c):
                continue
            acc = ring.add(acc, ring.mul(ctx.ab_coeff(d, n // d), powers[d - 1](n // d)))
        out.append(acc)
    return out


def _solve_ab(ctx: WittContext, targets: Sequence[Any], powers: list[_Powers] | None = None) -> list[Any]:
    """Solve ``sum_{d|n} d [n/d]_g X_d^(n/d) = targets[n-1]`` for ``X``; divides by ``n``.

    If ``powers`` is given it is filled with the power tables of the solution.
    """
    ring = ctx.ring
    xs: list[Any] = []
    if powers is None:
        powers = []
    for n in range(1, len(targets) + 1):
        acc = targets[n - 1]
        for d in proper_divisors(n):
            x = xs[d - 1]
            if ring.is_zero(x):
                continue
            acc = ring.sub(acc, ring.mul(ctx.ab_coeff(d, n // d), powers[d - 1](n // d)))
        try:
            value = ring.div_int(acc, n)
        except NotDivisible as exc:
            raise NotDivisible(f"coordinate {n}: {exc}") from exc
        xs.append(value)
        powers.append(_Powers(ring, value))
    return xs


def _require_ghost_path(ctx: WittContext, what: str) -> None:
    if not ctx.uses_ghost_path:
        raise RingLacksRationalDivision(
            f"{what} needs division by integers, which {ctx.ring} does not support"
        )


# ---------------------------------------------------------------------------
# ghost maps
# ---------------------------------------------------------------------------


def ghost(a: WittVector) -> GhostVector:
    """``w_n = sum_{d|n} d (1 - g^(n/d)) a_d^(n/d)``."""
    ctx, ring = a.ctx, a.ctx.ring
    powers = a._power_tables()
    out = []
    for n in range(1, ctx.trunc + 1):
        acc = ring.zero()
        for d in divisors(n):
            if ring.is_zero(a.coords[d - 1]):
                continue
            acc = ring.add(acc, ring.mul(ctx.ghost_coeff(d, n // d), powers[d - 1](n // d)))
        out.append(acc)
    return GhostVector(ctx, out)


def ghost_ab(a: WittVector) -> GhostVector:
    """Abelianised ghost ``w_n = sum_{d|n} d [n/d]_g a_d^(n/d)``; nondegenerate at g = 1."""
    return GhostVector(a.ctx, list(a._ab_components()))


def unghost(w: GhostVector) -> WittVector:
    """Inverse of :func:`ghost` on torsion-free rings; each division is certified."""
    ctx, ring = w.ctx, w.ctx.ring
    if ctx.deformation.is_degenerate():
        raise DegenerateDeformation("the ghost map is not injective at g = 1 / m = 1")
    _require_ghost_path(ctx, "unghost")
    xs: list[Any] = []
    powers: list[_Powers] = []
    for n in range(1, ctx.trunc + 1):
        acc = w.coords[n - 1]
        for d in proper_divisors(n):
            if ring.is_zero(xs[d - 1]):
                continue
            acc = ring.sub(acc, ring.mul(ctx.ghost_coeff(d, n // d), powers[d - 1](n // d)))
        divisor = ring.mul(ring.from_int(n), ctx.one_minus_g)
        value = ring.div_exact(acc, divisor)
        xs.append(value)
        powers.append(_Powers(ring, value))
    return WittVector(ctx, xs)


# ---------------------------------------------------------------------------
# universal polynomials
# ---------------------------------------------------------------------------


_UNIVERSAL_LOCK = threading.Lock()
_UNIVERSAL_CACHE: dict[QPolynomial, dict[str, list[MultiPolynomial]]] = {}


def _qint_poly(k: int, g: QPolynomial) -> QPolynomial:
    total = QPolynomial.zero()
    power = QPolynomial.one()
    for _ in range(k):
        total = total + power
        power = power * g
    return total


def _check_integral(poly: MultiPolynomial, label: str) -> None:
    for mono, c in poly.terms.items():
        if not c.is_integral():
            raise IntegralityViolation(f"{label} has non-integral coefficient {c}")


def _extend_universal(g: QPolynomial, n: int) -> dict[str, list[MultiPolynomial]]:
    table = _UNIVERSAL_CACHE.get(g)
    if table is not None and len(table["S"]) >= n:
        return table
    with _UNIVERSAL_LOCK:
        table = _UNIVERSAL_CACHE.get(g)
        if table is None:
            table = {"S": [], "P": [], "I": []}
        # Work on copies and publish at the end, so readers never see a partial row.
        rows = {k: list(v) for k, v in table.items()}
        start = len(rows["S"]) + 1
        qint = {k: _qint_poly(k, g) for k in range(1, n + 1)}
        one_minus_g = 1 - g

        def ab(letter: str, k: int) -> MultiPolynomial:
            acc = MultiPolynomial.zero()
            for d in divisors(k):
                acc = acc + MultiPolynomial.var(letter, d) ** (k // d) * (qint[k // d] * d)
            return acc

        for k in range(start, n + 1):
            ax, ay = ab("x", k), ab("y", k)
            targets = {"S": ax + ay, "P": ax * ay * one_minus_g, "I": -ax}
            for name, target in targets.items():
                acc = target
                for d in proper_divisors(k):
                    acc = acc - rows[name][d - 1] ** (k // d) * (qint[k // d] * d)
                value = acc.div_int(k)
                _check_integral(value, f"{name}_{k}")
                rows[name].append(value)
        _UNIVERSAL_CACHE[g] = rows
        return rows


def gen_defining_polys(
    n: int, symbolic_g: QPolynomial | None = None
) -> tuple[MultiPolynomial, MultiPolynomial, MultiPolynomial]:
    """Universal sum, product and negative polynomials for coordinate ``n``.

    Coefficients are polynomials in ``q``; with the default ``g = q`` they read as
    polynomials in ``g``. Raises IntegralityViolation if any coefficient fails to
    be integral.
    """
    if n < 1:
        raise ValueError("n must be positive")
    g = QPolynomial.q() if symbolic_g is None else QPolynomial.coerce(symbolic_g)
    rows = _extend_universal(g, n)
    return rows["S"][n - 1], rows["P"][n - 1], rows["I"][n - 1]


def _eval_universal(name: str, a: WittVector, b: WittVector | None) -> list[Any]:
    ctx, ring = a.ctx, a.ctx.ring
    rows = _extend_universal(ctx.deformation.as_qpoly(), ctx.trunc)[name]
    out = []
    for n in range(1, ctx.trunc + 1):
        binds = {("x", d): a.coords[d - 1] for d in divisors(n)}
        if b is not None:
            binds.update({("y", d): b.coords[d - 1] for d in divisors(n)})
        out.append(mpoly_substitute(rows[n - 1], binds, ring))
    return out


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------


def _vector_from_ab(ctx: WittContext, targets: list[Any]) -> WittVector:
    """Solve for the vector and keep the power tables and targets the solver already built."""
    powers: list[_Powers] = []
    out = WittVector(ctx, _solve_ab(ctx, targets, powers))
    out._powers = powers
    out._ab = targets
    return out


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    _same_ctx(a, b)
    ctx, ring = a.ctx, a.ctx.ring
    if not ctx.uses_ghost_path:
        return WittVector(ctx, _eval_universal("S", a, b))
    aa, bb = a._ab_components(), b._ab_components()
    return _vector_from_ab(ctx, [ring.add(x, y) for x, y in zip(aa, bb)])


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    _same_ctx(a, b)
    ctx, ring = a.ctx, a.ctx.ring
    if not ctx.uses_ghost_path:
        return WittVector(ctx, _eval_universal("P", a, b))
    aa, bb = a._ab_components(), b._ab_components()
    targets = [ring.mul(ctx.one_minus_g, ring.mul(x, y)) for x, y in zip(aa, bb)]
    return _vector_from_ab(ctx, targets)


def witt_neg(a: WittVector) -> WittVector:
    ctx, ring = a.ctx, a.ctx.ring
    if not ctx.uses_ghost_path:
        return WittVector(ctx, _eval_universal("I", a, None))
    return _vector_from_ab(ctx, [ring.neg(x) for x in a._ab_components()])


# ---------------------------------------------------------------------------
# unity
# ---------------------------------------------------------------------------


def unity_coefficients(deformation: Deformation, trunc: int) -> list[QPolynomial]:
    """``(1-g)^n E_n`` for n = 1..trunc, where ``sum_{d|n} d(1-g^(n/d)) E_d^(n/d) = 1``.

    The values of E_n are computed in Q(q); the scaled values are asserted to be
    integer polynomials.
    """
    if deformation.is_degenerate():
        raise DegenerateDeformation("no unity recursion at g = 1 / m = 1")
    g = QRationalFunction.coerce(deformation.as_qpoly())
    one = QRationalFunction.coerce(1)
    one_minus_g = one - g
    es: list[QRationalFunction] = []
    scaled: list[QPolynomial] = []
    for n in range(1, trunc + 1):
        acc = one
        for d in proper_divisors(n):
            acc = acc - (one - g ** (n // d)) * es[d - 1] ** (n // d) * d
        e_n = acc / (one_minus_g * n)
        es.append(e_n)
        hat = e_n * one_minus_g**n
        if not hat.is_polynomial() or not hat.numerator.is_integral():
            raise IntegralityViolation(f"(1-g)^{n} E_{n} = {hat} is not in Z[q]")
        scaled.append(hat.numerator)
    return scaled


def unity(ctx: WittContext) -> WittVector:
    """Multiplicative identity; exists exactly when ``1 - g`` is a unit of the ring."""
    ring = ctx.ring
    if not ring.is_unit(ctx.one_minus_g):
        raise NotUnital(f"1 - ({ctx.deformation.label()}) is not a unit in {ring}")
    inv = ring.inverse(ctx.one_minus_g)
    scaled = unity_coefficients(ctx.deformation, ctx.trunc)
    coords = [ring.mul(ring.from_qpoly(h), ring.pow(inv, n)) for n, h in enumerate(scaled, 1)]
    return WittVector(ctx, coords)


# ---------------------------------------------------------------------------
# transports
# ---------------------------------------------------------------------------


def transport_two_minus_g(a: WittVector) -> WittVector:
    """Strict isomorphism onto the ``2 - g`` (resp. ``2 - m``) context.

    The image ``y`` satisfies ``ab^{2-g}(y) = -ab^{g}(a)``, equivalently
    ``ghost^{2-g}(y) = ghost^{g}(a)``.
    """
    ctx, ring = a.ctx, a.ctx.ring
    if ctx.deformation.is_degenerate():
        raise DegenerateDeformation("transport needs g != 1")
    _require_ghost_path(ctx, "transport")
    target = ctx.with_deformation(ctx.deformation.two_minus())
    targets = [ring.neg(x) for x in _ab_from_coords(ctx, a.coords, ctx.trunc)]
    return WittVector(target, _solve_ab(target, targets))


def transport_to_h(a: WittVector, h: int) -> WittVector:
    """Image in the constant-``h`` context (h in {0, 2}) with the same ghost components."""
    ctx, ring = a.ctx, a.ctx.ring
    if h not in (0, 2):
        raise ValueError("h must be 0 or 2")
    if ctx.deformation.is_degenerate():
        raise DegenerateDeformation("transport needs g != 1")
    _require_ghost_path(ctx, "transport")
    target = ctx.with_deformation(ctx.deformation.constant(h))
    w = ghost(a).coords
    # ghost^h = (1-h) ab^h and 1-h = +-1, so the targets are +-ghost^g(a).
    targets = list(w) if h == 0 else [ring.neg(x) for x in w]
    return WittVector(target, _solve_ab(target, targets))


# ---------------------------------------------------------------------------
# induction and restriction
# ---------------------------------------------------------------------------


def induce(r: int, a: WittVector) -> WittVector:
    """Coordinate ``n`` becomes ``a_{n/r}`` when ``r | n`` and 0 otherwise."""
    if r < 1:
        raise ValueError("r must be positive")
    ring = a.ctx.ring
    return WittVector(
        a.ctx,
        [a.coords[n // r - 1] if n % r == 0 else ring.zero() for n in range(1, a.ctx.trunc + 1)],
    )


def restrict(r: int, a: WittVector, trunc: int) -> WittVector:
    """Frobenius-type map with ``ghost(R)_n = ghost(a)_{nr}``, output truncated at ``trunc``.

    Needs ``a`` truncated at ``trunc * r`` or beyond.
    """
    if r < 1:
        raise ValueError("r must be positive")
    ctx = a.ctx
    if ctx.trunc < trunc * r:
        raise TruncationTooShort(f"restriction by {r} to level {trunc} needs input level {trunc * r}, got {ctx.trunc}")
    _require_ghost_path(ctx, "restriction")
    ab = _ab_from_coords(ctx, a.coords, trunc * r)
    out_ctx = ctx.with_trunc(trunc)
    return WittVector(out_ctx, _solve_ab(out_ctx, [ab[n * r - 1] for n in range(1, trunc + 1)]))


def specialize(a: WittVector, ctx: WittContext, f: Any) -> WittVector:
    """Apply a ring map ``f`` coordinatewise, landing in ``ctx``."""
    return WittVector(ctx, [f(c) for c in a.coords])


__all__ = [
    "Deformation",
    "WittContext",
    "WittVector",
    "GhostVector",
    "ghost",
    "ghost_ab",
    "unghost",
    "witt_add",
    "witt_mul",
    "witt_neg",
    "gen_defining_polys",
    "unity",
    "unity_coefficients",
    "transport_two_minus_g",
    "transport_to_h",
    "induce",
    "restrict",
    "specialize",
]
