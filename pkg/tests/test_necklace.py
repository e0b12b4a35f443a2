import random
from math import gcd

import pytest
import sympy

import oracles
from qwitt.errors import DegenerateDeformation, NotUnital, TruncationTooShort
from qwitt.exactalg import QPolynomial, QRationalFunction
from qwitt.necklace import (
    NecklaceVector,
    eta_inverse,
    f_coeffs,
    metropolis_rota,
    mobius,
    mobius_chain,
    mobius_composition,
    mobius_hat,
    mobius_hat_chain,
    neck_ghost,
    neck_induce,
    neck_mul,
    neck_mul_via_constants,
    neck_restrict,
    neck_restrict_closed,
    neck_transport_two_minus,
    neck_unity,
    struct_const,
    struct_const_int,
    struct_const_poly,
)
from qwitt.rings import QQ_q, ZZ_q, get_ring
from qwitt.witt import GhostVector, WittContext

q = QPolynomial.q()


def int_ctx(trunc, m):
    return WittContext.make(get_ring("Z+trivpsi"), trunc, m=m)


def zq(trunc, g="q"):
    return WittContext.make(ZZ_q, trunc, g=g)


def fresh(v):
    return NecklaceVector(v.ctx, v.coords)


# -- ghost and product --------------------------------------------------------


def test_ghost_examples():
    ctx = zq(2)
    a = NecklaceVector(ctx, [q, QPolynomial.zero()])
    assert neck_ghost(a).coords == ((1 - q) * q, (1 - q**2) * q**2)
    assert neck_ghost(NecklaceVector.zero(ctx)) == GhostVector.zero(ctx)
    assert list(neck_ghost(NecklaceVector(int_ctx(2, 0), [3, 5])).coords) == [3, 3 + 10]


def test_product_at_m_zero_on_all_ones():
    ones = NecklaceVector(int_ctx(2, 0), [1, 1])
    assert neck_mul(ones, ones)[2] == 4


def test_product_at_m_minus_one_has_the_odd_quotient_formula():
    ctx = int_ctx(12, -1)
    rng = random.Random(3)
    for _ in range(5):
        a, b = NecklaceVector.random(ctx, rng), NecklaceVector.random(ctx, rng)
        c = neck_mul(a, b)
        for n in range(1, 13):
            expected = 2 * sum(
                gcd(i, j) * a[i] * b[j]
                for i in oracles.divisors(n)
                for j in oracles.divisors(n)
                if i * j // gcd(i, j) == n and (n // i) % 2 and (n // j) % 2
            )
            assert c[n] == expected


def test_products_vanish_at_m_equal_one():
    ctx = int_ctx(12, 1)
    rng = random.Random(8)
    a, b = NecklaceVector.random(ctx, rng), NecklaceVector.random(ctx, rng)
    assert neck_mul(a, b) == NecklaceVector.zero(ctx)


@pytest.mark.parametrize("config", [("g", "q"), ("g", "q^2")] + [("m", m) for m in range(-2, 4)])
def test_ghost_is_multiplicative(config):
    kind, value = config
    ctx = zq(16, value) if kind == "g" else int_ctx(16, value)
    rng = random.Random(str(config))
    for _ in range(6):
        a, b = NecklaceVector.random(ctx, rng), NecklaceVector.random(ctx, rng)
        assert neck_ghost(fresh(neck_mul(a, b))) == neck_ghost(a) * neck_ghost(b)


def test_m_zero_with_trivial_psi_is_the_classical_necklace_ring():
    ctx = int_ctx(16, 0)
    rng = random.Random(6)
    for _ in range(10):
        a, b = NecklaceVector.random(ctx, rng), NecklaceVector.random(ctx, rng)
        expected = oracles.metropolis_rota_product(list(a.coords), list(b.coords))
        assert list(neck_mul(a, b).coords) == expected
        assert metropolis_rota(list(a.coords), list(b.coords)) == expected


# -- Mobius functions ---------------------------------------------------------


def test_mobius_examples():
    assert [mobius(0, n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
    for m in range(-3, 5):
        qi = lambda k: oracles.qint_int(k, m)
        for p in (2, 3, 5, 7):
            assert mobius(m, p) == -qi(p)
        assert mobius(m, 4) == qi(2) ** 2 - qi(4)


def test_mobius_at_zero_is_classical():
    assert [mobius(0, n) for n in range(1, 49)] == [int(sympy.mobius(n)) for n in range(1, 49)]


@pytest.mark.parametrize("m", range(-3, 5))
def test_mobius_inverts_the_q_integer_zeta(m):
    for n in range(1, 49):
        total = sum(oracles.qint_int(n // d, m) * mobius(m, d) for d in oracles.divisors(n))
        assert total == (1 if n == 1 else 0)
    assert [mobius(m, n) for n in range(1, 25)] == oracles.mobius_m_table(m, 24)
    assert all(mobius_chain(m, n) == mobius(m, n) for n in range(1, 25))


def test_composition_formula_with_adjusted_sign():
    for m in (-2, 0, 2, 3):
        assert all(mobius_composition(m, n) == mobius(m, n) for n in range(1, 25))


def test_mobius_hat():
    for g in (q, q**2 + 1, 1 - 2 * q):
        for n in range(1, 13):
            assert mobius_hat(g, n) == mobius_hat_chain(g, n)
    assert mobius_hat(q, 6).evaluate(0) == mobius(0, 6)


# -- structure constants ------------------------------------------------------


def test_structure_constants_at_m_zero_and_one():
    for n in range(1, 25):
        for i in oracles.divisors(n):
            for j in oracles.divisors(n):
                lcm_ij = i * j // gcd(i, j)
                assert struct_const_int(0, n, i, j) == (gcd(i, j) if lcm_ij == n else 0)
                assert struct_const_int(1, n, i, j) == 0


def test_structure_constants_at_g_equal_q():
    for n in range(1, 17):
        for i in oracles.divisors(n):
            for j in oracles.divisors(n):
                value = struct_const_poly(q, n, i, j)
                if i * j // gcd(i, j) != n:
                    assert value.is_zero()
                    continue
                expected = (1 - q) * QPolynomial([1] * (n // i)) * QPolynomial([1] * (n // j)) * i * j / n
                assert value == expected


def test_struct_const_dispatch():
    assert struct_const(int_ctx(6, 0), 6, 2, 3) == 1
    assert struct_const(zq(6), 2, 1, 2) == struct_const_poly(q, 2, 1, 2)


@pytest.mark.parametrize("config", [("g", "q"), ("g", "q^2+1"), ("m", -1), ("m", 2), ("m", 0)])
def test_product_via_structure_constants(config):
    kind, value = config
    ctx = zq(12, value) if kind == "g" else int_ctx(12, value)
    rng = random.Random(str(config))
    for _ in range(4):
        a, b = NecklaceVector.random(ctx, rng), NecklaceVector.random(ctx, rng)
        assert neck_mul_via_constants(a, b) == neck_mul(a, b)


def test_product_via_structure_constants_mod_k():
    ctx = WittContext.make(get_ring("Zmod:6+trivpsi"), 10, m=2)
    big = int_ctx(10, 2)
    rng = random.Random(2)
    for _ in range(4):
        a, b = NecklaceVector.random(big, rng), NecklaceVector.random(big, rng)
        reduce = lambda v: NecklaceVector(ctx, [c % 6 for c in v.coords])
        assert neck_mul(reduce(a), reduce(b)) == reduce(neck_mul(a, b))


# -- inverse ghost, unity -----------------------------------------------------


def test_f_coefficients_at_g_equal_q():
    fs = f_coeffs(q, 24)
    assert fs == [QRationalFunction(int(sympy.mobius(n)), 1 - q) for n in range(1, 25)]
    with pytest.raises(DegenerateDeformation):
        f_coeffs(QPolynomial.one(), 3)


def test_eta_inverse_round_trip():
    ctx = WittContext.make(QQ_q, 10, g=q**2 + q)
    rng = random.Random(14)
    for _ in range(4):
        a = NecklaceVector.random(ctx, rng)
        assert eta_inverse(neck_ghost(a)) == a
    ctx_q = WittContext.make(QQ_q, 1, g=q**2 + q)
    assert eta_inverse(GhostVector(ctx_q, [QRationalFunction.coerce(1)]))[1] == QRationalFunction(1, 1 - q - q**2)


def test_unity():
    u = neck_unity(WittContext.make(QQ_q, 6, g=q))
    assert u[1] == QRationalFunction(1, 1 - q)
    assert all(c.is_zero() for c in u.coords[1:])
    assert list(neck_unity(int_ctx(5, 0)).coords) == [1, 0, 0, 0, 0]
    with pytest.raises(NotUnital):
        neck_unity(zq(4))
    ctx = WittContext.make(QQ_q, 8, g=q**2 + 1)
    a = NecklaceVector.random(ctx, random.Random(1))
    assert neck_mul(neck_unity(ctx), a) == a


# -- induction, restriction, transport ----------------------------------------


def test_induction_and_restriction():
    rng = random.Random(5)
    ctx = int_ctx(8, 0)
    a = NecklaceVector.random(ctx, rng)
    assert neck_induce(1, a) == a
    assert neck_restrict(1, a, 8) == a
    assert neck_restrict(2, a, 4)[1] == a[1] + 2 * a[2]
    with pytest.raises(TruncationTooShort):
        neck_restrict(2, a, 5)
    for r in (2, 3):
        b = NecklaceVector.random(zq(4 * r), rng)
        big = neck_ghost(b).coords
        assert list(neck_ghost(neck_restrict(r, b, 4)).coords) == [big[n * r - 1] for n in range(1, 5)]
        assert list(neck_induce(r, b).coords[r - 1 :: r]) == list(b.coords[: len(b.coords) // r])


@pytest.mark.parametrize("m", [-1, 0, 2])
@pytest.mark.parametrize("r", [2, 3])
def test_closed_form_restriction(m, r):
    ctx = int_ctx(8 * r, m)
    rng = random.Random(m * 10 + r)
    for _ in range(3):
        a = NecklaceVector.random(ctx, rng)
        assert neck_restrict_closed(r, a, 8) == neck_restrict(r, a, 8)


def test_two_minus_transport():
    rng = random.Random(9)
    ctx = zq(10)
    a, b = NecklaceVector.random(ctx, rng), NecklaceVector.random(ctx, rng)
    t = neck_transport_two_minus(a)
    assert t[1] == -a[1]
    assert neck_transport_two_minus(t) == a
    assert neck_transport_two_minus(neck_mul(a, b)) == neck_mul(t, neck_transport_two_minus(b))
    c = NecklaceVector.random(int_ctx(12, 0), rng)
    assert neck_ghost(fresh(neck_transport_two_minus(c))).coords == neck_ghost(c).coords
    with pytest.raises(DegenerateDeformation):
        neck_transport_two_minus(NecklaceVector.random(int_ctx(3, 1), rng))
