import random

import pytest

import oracles
from qwitt.errors import DegenerateDeformation, NotUnital, TruncationTooShort
from qwitt.exactalg import QPolynomial, QRationalFunction
from qwitt.rings import QQ_q, ZZ, ZZ_q, get_ring
from qwitt.witt import (
    GhostVector,
    WittContext,
    WittVector,
    _eval_universal,
    gen_defining_polys,
    ghost,
    ghost_ab,
    induce,
    restrict,
    specialize,
    transport_to_h,
    transport_two_minus_g,
    unghost,
    unity,
    witt_add,
    witt_mul,
    witt_neg,
)

q = QPolynomial.q()


def zq(trunc, g="q"):
    return WittContext.make(ZZ_q, trunc, g=g)


def vec(ctx, texts):
    return WittVector.parse(ctx, texts)


def fresh(v):
    return WittVector(v.ctx, v.coords)


# -- worked examples ----------------------------------------------------------


def test_ghost_examples():
    ctx = zq(2)
    assert ghost(vec(ctx, ["1", "0"])).to_strings() == ["1-q", "1-q^2"]
    assert ghost(WittVector.zero(ctx)) == GhostVector.zero(ctx)
    ctx0 = WittContext.make(ZZ, 2, m=0)
    assert list(ghost(WittVector(ctx0, [3, 5])).coords) == [3, 9 + 10]


def test_ghost_ab_examples():
    assert ghost_ab(vec(zq(2), ["1", "0"])).to_strings() == ["1", "1+q"]
    ctx1 = WittContext.make(ZZ, 2, m=1)
    assert list(ghost_ab(WittVector(ctx1, [1, 1])).coords) == [1, 4]


def test_unghost_examples():
    ctx = zq(2)
    w = GhostVector(ctx, [(1 - q) ** 2, (1 - q**2) ** 2])
    assert unghost(w).to_strings() == ["1-q", "q-q^3"]
    with pytest.raises(DegenerateDeformation):
        unghost(GhostVector(WittContext.make(ZZ, 2, m=1), [1, 1]))


def test_arithmetic_examples():
    ctx = zq(2)
    one = vec(ctx, ["1", "0"])
    assert witt_add(one, vec(ctx, ["-1", "0"])).to_strings() == ["0", "1+q"]
    assert witt_mul(one, one).to_strings() == ["1-q", "q-q^3"]
    assert witt_neg(one).to_strings() == ["-1", "-1-q"]


def test_products_vanish_at_m_equal_one():
    ctx = WittContext.make(ZZ, 10, m=1)
    rng = random.Random(4)
    for _ in range(10):
        a, b = WittVector.random(ctx, rng), WittVector.random(ctx, rng)
        assert witt_mul(a, b) == WittVector.zero(ctx)


def test_defining_polynomials_low_degree():
    s1, p1, i1 = gen_defining_polys(1)
    g = oracles.sympy.Symbol("g")
    x1, x2, x3, y1, y2, y3 = oracles.sympy.symbols("x1 x2 x3 y1 y2 y3")
    assert oracles.mpoly_to_sympy(s1, g) == x1 + y1
    assert oracles.sympy.expand(oracles.mpoly_to_sympy(p1, g) - (1 - g) * x1 * y1) == 0
    assert oracles.mpoly_to_sympy(i1, g) == -x1
    _, p2, _ = gen_defining_polys(2)
    expected = 2 * (1 - g) * x2 * y2 + (1 - g**2) * (x1**2 * y2 + x2 * y1**2) + (g - g**3) * x1**2 * y1**2
    assert oracles.sympy.expand(oracles.mpoly_to_sympy(p2, g) - expected) == 0
    s3, _, _ = gen_defining_polys(3)
    expected = x3 + y3 - (1 + g + g**2) * (x1**2 * y1 + x1 * y1**2)
    assert oracles.sympy.expand(oracles.mpoly_to_sympy(s3, g) - expected) == 0


def test_unity_examples():
    assert list(unity(WittContext.make(ZZ, 4, m=0)).coords) == [1, 0, 0, 0]
    u = unity(WittContext.make(QQ_q, 2, g=q))
    assert u[1] == QRationalFunction(1, 1 - q)
    assert u[2] == QRationalFunction(-q, (1 - q) ** 2)
    with pytest.raises(NotUnital):
        unity(zq(3))


def test_transport_examples():
    rng = random.Random(9)
    a = WittVector.random(zq(6), rng)
    assert transport_two_minus_g(a)[1] == -a[1]
    assert transport_to_h(a, 0)[1] == (1 - q) * a[1]
    assert transport_to_h(a, 2)[1] == -(1 - q) * a[1]
    ctx0 = WittContext.make(ZZ, 8, m=0)
    for _ in range(10):
        b = WittVector.random(ctx0, rng)
        y = transport_two_minus_g(b)
        assert y.ctx.deformation.m == 2
        assert oracles.classical_ghost(list(b.coords)) == list(ghost(fresh(y)).coords)


def test_induce_examples():
    ctx = zq(4)
    a = vec(ctx, ["1", "0", "5", "7"])
    assert induce(1, a) == a
    assert induce(2, a).to_strings() == ["0", "1", "0", "0"]
    assert ghost(induce(2, a)).to_strings()[:2] == ["0", "2-2*q"]
    b = vec(ctx, ["1", "0", "0", "0"])
    assert ghost(induce(2, b)).to_strings() == ["0", "2-2*q", "0", "2-2*q^2"]


def test_restrict_examples():
    rng = random.Random(12)
    ctx0 = WittContext.make(ZZ, 4, m=0)
    a = WittVector.random(ctx0, rng)
    assert restrict(1, a, 4) == a
    assert restrict(2, a, 2)[1] == a[1] ** 2 + 2 * a[2]
    with pytest.raises(TruncationTooShort):
        restrict(2, a, 3)
    for r in (2, 3):
        b = WittVector.random(zq(6 * r), rng)
        w_big = ghost(b).coords
        assert list(ghost(restrict(r, b, 6)).coords) == [w_big[n * r - 1] for n in range(1, 7)]


# -- invariants ---------------------------------------------------------------

GHOST_CONFIGS = [("Zq", "q"), ("Zq", "1-2*q"), ("Zq", "q^3")] + [("Z", m) for m in (-2, -1, 0, 2, 3)]


@pytest.mark.parametrize("ring_name,deformation", GHOST_CONFIGS)
def test_ghost_is_a_ring_homomorphism(ring_name, deformation):
    ring = get_ring(ring_name)
    ctx = WittContext.make(ring, 16, g=deformation) if ring_name == "Zq" else WittContext.make(ring, 16, m=deformation)
    rng = random.Random(f"{ring_name}:{deformation}")
    for _ in range(8):
        a, b = WittVector.random(ctx, rng), WittVector.random(ctx, rng)
        s, p, n = fresh(witt_add(a, b)), fresh(witt_mul(a, b)), fresh(witt_neg(a))
        assert ghost(s) == ghost(a) + ghost(b)
        assert ghost(p) == ghost(a) * ghost(b)
        assert ghost(n) == -ghost(a)


@pytest.mark.parametrize("k", [4, 6, 9])
@pytest.mark.parametrize("m", [-1, 0, 2])
def test_ring_axioms_over_integers_mod_k(k, m):
    ctx = WittContext.make(get_ring(f"Zmod:{k}"), 8, m=m)
    assert not ctx.uses_ghost_path
    rng = random.Random(k * 10 + m)
    zero = WittVector.zero(ctx)
    for _ in range(6):
        a, b, c = (WittVector.random(ctx, rng) for _ in range(3))
        assert witt_add(a, b) == witt_add(b, a)
        assert witt_add(witt_add(a, b), c) == witt_add(a, witt_add(b, c))
        assert witt_mul(a, b) == witt_mul(b, a)
        assert witt_mul(witt_mul(a, b), c) == witt_mul(a, witt_mul(b, c))
        assert witt_mul(a, witt_add(b, c)) == witt_add(witt_mul(a, b), witt_mul(a, c))
        assert witt_add(a, witt_neg(a)) == zero


def test_integers_mod_k_agree_with_reduction_from_integers():
    big = WittContext.make(ZZ, 8, m=2)
    small = WittContext.make(get_ring("Zmod:6"), 8, m=2)
    rng = random.Random(5)
    for _ in range(6):
        a, b = WittVector.random(big, rng), WittVector.random(big, rng)
        reduce = lambda v: WittVector(small, [c % 6 for c in v.coords])
        assert reduce(witt_mul(a, b)) == witt_mul(reduce(a), reduce(b))
        assert reduce(witt_add(a, b)) == witt_add(reduce(a), reduce(b))


@pytest.mark.parametrize("g", ["q", "1-2*q", "q^2+1"])
def test_ghost_path_agrees_with_universal_polynomials(g):
    ctx = zq(10, g)
    rng = random.Random(21)
    for _ in range(4):
        a, b = WittVector.random(ctx, rng, size=2), WittVector.random(ctx, rng, size=2)
        assert witt_add(a, b).coords == tuple(_eval_universal("S", a, b))
        assert witt_mul(a, b).coords == tuple(_eval_universal("P", a, b))
        assert witt_neg(a).coords == tuple(_eval_universal("I", a, None))


@pytest.mark.parametrize("m", [-2, 0, 1, 3])
def test_specialising_q_commutes_with_operations(m):
    source = zq(10)
    target = WittContext.make(ZZ, 10, m=m)
    f = lambda p: int(p.evaluate(m))
    rng = random.Random(m + 40)
    for _ in range(5):
        a, b = WittVector.random(source, rng, size=2), WittVector.random(source, rng, size=2)
        fa, fb = specialize(a, target, f), specialize(b, target, f)
        assert specialize(witt_add(a, b), target, f) == witt_add(fa, fb)
        assert specialize(witt_mul(a, b), target, f) == witt_mul(fa, fb)


@pytest.mark.parametrize("g", ["q", "1-2*q"])
def test_two_minus_g_transport_is_a_strict_isomorphism(g):
    ctx = zq(10, g)
    rng = random.Random(77)
    for _ in range(6):
        a, b = WittVector.random(ctx, rng), WittVector.random(ctx, rng)
        ta, tb = transport_two_minus_g(a), transport_two_minus_g(b)
        assert ghost(fresh(ta)).coords == ghost(a).coords
        assert transport_two_minus_g(witt_mul(a, b)) == witt_mul(ta, tb)
        assert transport_two_minus_g(ta) == a


def test_induction_and_restriction_identities():
    rng = random.Random(31)
    for r in (2, 3):
        ctx = zq(6 * r)
        a, b = WittVector.random(ctx, rng), WittVector.random(ctx, rng)
        assert induce(r, witt_add(a, b)) == witt_add(induce(r, a), induce(r, b))
        ra, rb = restrict(r, a, 6), restrict(r, b, 6)
        assert restrict(r, witt_mul(a, b), 6) == witt_mul(ra, rb)
        assert restrict(r, witt_add(a, b), 6) == witt_add(ra, rb)
        back = list(ghost(restrict(r, induce(r, a), 6)).coords)
        assert back == [x * r for x in ghost(a).coords[:6]]
