import random
from fractions import Fraction

import pytest

from qwitt.errors import NoPsiStructure, NotDivisible, ParseError
from qwitt.exactalg import QPolynomial, QRationalFunction
from qwitt.rings import div_exact, get_ring, psi, self_check

SELECTORS = ["Z", "Q", "Zq", "Qq", "Qpoly", "Zmod:4", "Zmod:6", "Zmod:9", "Z+trivpsi", "Zq+trivpsi", "Zmod:6+trivpsi"]


@pytest.mark.parametrize("selector", SELECTORS)
def test_ring_and_psi_axioms(selector):
    assert self_check(get_ring(selector), trials=40, seed=7) == []


def test_psi_examples():
    zq = get_ring("Zq")
    assert psi(zq, 3, zq.parse("1+q+q^2")) == QPolynomial.parse("1+q^3+q^6")
    assert psi(get_ring("Z"), 5, 5) == 5
    for selector in ("Z", "Zq", "Qq", "Zmod:6"):
        ring = get_ring(selector)
        x = ring.random_element(random.Random(1))
        assert ring.eq(psi(ring, 1, x), x)


def test_trivial_psi_adapter_fixes_q():
    ring = get_ring("Zq+trivpsi")
    x = ring.parse("1+q")
    assert ring.eq(ring.psi(4, x), x)


def test_div_exact_examples():
    zq = get_ring("Zq")
    assert div_exact(zq, zq.parse("1-q^2"), zq.parse("1-q")) == QPolynomial.parse("1+q")
    assert div_exact(get_ring("Z"), 6, 3) == 2
    with pytest.raises(NotDivisible):
        div_exact(zq, zq.parse("q-q^3"), 2)
    with pytest.raises(NotDivisible):
        div_exact(get_ring("Z"), 7, 2)


@pytest.mark.parametrize("selector", ["Z", "Zq", "Q", "Qq"])
def test_div_exact_round_trip(selector):
    ring = get_ring(selector)
    rng = random.Random(11)
    for _ in range(50):
        x = ring.random_element(rng)
        d = rng.choice([-7, -3, -2, 2, 3, 5, 12])
        assert ring.eq(ring.div_int(ring.mul(x, ring.from_int(d)), d), x)


def test_integers_mod_k_use_the_polynomial_path():
    ring = get_ring("Zmod:6")
    assert not ring.is_torsion_free
    assert ring.has_psi
    assert ring.is_unit(5) and not ring.is_unit(3)


def test_units():
    zq, qq = get_ring("Zq"), get_ring("Qq")
    assert not zq.is_unit(zq.parse("1-q"))
    assert zq.is_unit(zq.parse("-1"))
    assert qq.is_unit(qq.parse("1-q"))
    assert qq.inverse(qq.parse("1-q")) == QRationalFunction(1, QPolynomial.parse("1-q"))
    assert get_ring("Z").is_unit(-1) and not get_ring("Z").is_unit(2)


def test_rational_extension_membership():
    zq = get_ring("Zq")
    ext = zq.rational_extension()
    half = ext.target.div_int(ext.embed(zq.parse("q")), 2)
    assert not ext.contains(half)
    assert ext.contains(ext.embed(zq.parse("1+q")))
    assert ext.pullback(ext.embed(zq.parse("1+q"))) == QPolynomial.parse("1+q")


def test_from_rational_respects_integrality():
    z = get_ring("Z")
    assert z.from_fraction(Fraction(6, 3)) == 2
    with pytest.raises(NotDivisible):
        z.from_fraction(Fraction(1, 2))
    assert get_ring("Zmod:9").from_fraction(Fraction(1, 2)) == 5


@pytest.mark.parametrize("bad", ["R", "Zmod:", "Zmod:1", "Zmod:x", ""])
def test_bad_selectors(bad):
    with pytest.raises(ParseError):
        get_ring(bad)


def test_no_psi_structure_error_exists_for_plain_rings():
    # every shipped ring carries Psi; the error is raised by consumers that need it
    assert issubclass(NoPsiStructure, Exception)
