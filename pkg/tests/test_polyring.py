import pickle
import random
from fractions import Fraction

import pytest

from lib.exceptions import RingMismatchError, VariableError
from lib.polyring import (ZERO_DEGREE, ArithOp, MonomialOrder, MPoly, Ordering, PolyRing, monomial_compare,
    poly_arithmetic)
from lib.problems import generate_instance


@pytest.fixture
def xy():
    return PolyRing(['x', 'y'])


def random_poly(ring, rnd, terms=4, degree=3):
    n = len(ring.variables)
    coeffs = dict()
    for _ in range(terms):
        m = tuple(rnd.randint(0, degree) for _ in range(n))
        coeffs[m] = Fraction(rnd.randint(-5, 5), rnd.randint(1, 3))
    return MPoly(ring, coeffs)


def test_arithmetic_examples(xy):
    x, y = xy.gens()
    assert poly_arithmetic(x + y, x - y, ArithOp.add) == 2 * x
    assert poly_arithmetic(x + 1, x - 1, 'mul') == x**2 - 1
    assert poly_arithmetic(x, x, ArithOp.sub).is_zero


def test_ring_mismatch(xy):
    other = PolyRing(['x', 'z'])
    with pytest.raises(RingMismatchError):
        xy.gen('x') + other.gen('x')


def test_p4_expansion():
    f = generate_instance('p', [4]).polynomials[0]
    assert len(f.ring.variables) == 4
    assert f.degree() == 4
    x1, x2, x3, x4 = f.ring.gens()
    assert f == (x1**2 + x3**2 - x2**2 - x4**2) ** 2


def test_zero_degree_sentinel(xy):
    assert xy.zero().degree() == ZERO_DEGREE
    assert xy.zero().degree() != -1


def test_partial_derivative(xy):
    x, y = xy.gens()
    assert (x**2 + y**2 - 1).partial_derivative('x') == 2 * x
    assert x.partial_derivative('y').is_zero
    with pytest.raises(VariableError):
        x.partial_derivative(2)


def test_partial_derivative_of_p4():
    f = generate_instance('p', [4]).polynomials[0]
    assert f.partial_derivative(0).evaluate([1, 0, 0, 0]) == 4


def test_substitute_examples(xy):
    x, y = xy.gens()
    circle = x**2 + y**2 - 1
    assert circle.substitute('y', 0) == x**2 - 1
    value = x * Fraction(1, 2) + Fraction(1, 4)
    assert circle.substitute('y', value) == x**2 * Fraction(5, 4) + x * Fraction(1, 4) - Fraction(15, 16)
    assert (x * y).substitute('x', 3) == 3 * y


def test_substitute_shrinks_ring(xy):
    x, y = xy.gens()
    result = (x**2 + y**2 - 1).substitute('y', x + 1, shrink=True)
    assert result.ring == PolyRing(['x'])
    assert result == PolyRing(['x']).parse('2*x^2 + 2*x')


def test_substitute_rejects_self_reference(xy):
    x, y = xy.gens()
    with pytest.raises(VariableError):
        (x * y).substitute('x', x + y)


def test_evaluate_examples():
    p4 = generate_instance('p', [4]).polynomials[0]
    b4 = generate_instance('b', [4]).polynomials[0]
    assert p4.evaluate([1, 0, 0, 0]) == 1
    assert b4.evaluate([0, 0, 0, 0]) == 81
    ring = PolyRing(['x', 'y'])
    f = ring.parse('3*x^2*y - 7/2')
    assert f.evaluate([0, 0]) == Fraction(-7, 2)
    with pytest.raises(VariableError):
        f.evaluate([1])


def test_monomial_compare_examples():
    assert monomial_compare(MonomialOrder.grevlex(), (2, 1), (1, 2)) is Ordering.GT
    assert monomial_compare(MonomialOrder.lex(), (1, 0), (0, 3)) is Ordering.GT
    # variables (λ, x): λ against x^5
    assert monomial_compare(MonomialOrder.block([0]), (1, 0), (0, 5)) is Ordering.GT
    assert monomial_compare(MonomialOrder.grevlex(), (1, 1), (1, 1)) is Ordering.EQ


def test_block_order_elimination_property():
    rnd = random.Random(7)
    order = MonomialOrder.block([1, 3])
    for _ in range(200):
        m = tuple(rnd.randint(0, 4) for _ in range(4))
        free = (rnd.randint(0, 9), 0, rnd.randint(0, 9), 0)
        if not (m[1] or m[3]):
            continue
        assert order.compare(m, free) is Ordering.GT


def test_ring_axioms():
    ring = PolyRing(['x', 'y', 'z'])
    rnd = random.Random(1)
    for _ in range(10):
        a, b, c = (random_poly(ring, rnd) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a - b) + b == a


def test_derivative_linear_and_leibniz():
    ring = PolyRing(['x', 'y'])
    rnd = random.Random(2)
    for _ in range(10):
        a, b = random_poly(ring, rnd), random_poly(ring, rnd)
        for var in ring.variables:
            assert (a * 3 + b).partial_derivative(var) == a.partial_derivative(var) * 3 + b.partial_derivative(var)
            assert (a * b).partial_derivative(var) == a.partial_derivative(var) * b + a * b.partial_derivative(var)


def test_substitute_agrees_with_evaluation():
    ring = PolyRing(['x', 'y', 'z'])
    rnd = random.Random(3)
    for _ in range(10):
        p = random_poly(ring, rnd)
        q = random_poly(ring.without('y'), rnd, terms=2, degree=2)
        point = [Fraction(rnd.randint(-4, 4), rnd.randint(1, 3)) for _ in range(3)]
        q_value = q.evaluate([point[0], point[2]])
        substituted = p.substitute('y', q, shrink=True)
        assert substituted.evaluate([point[0], point[2]]) == p.evaluate([point[0], q_value, point[2]])


def test_compose_and_embed(xy):
    x, y = xy.gens()
    f = x**2 - y
    assert f.compose([y, x]) == y**2 - x
    big = PolyRing(['y', 'w', 'x'])
    moved = f.embed(big)
    assert moved.ring == big
    assert moved.evaluate([2, 5, 3]) == 7


def test_dense_round_trip(xy):
    x, _ = xy.gens()
    p = x**3 - x * 2 + 5
    var, coeffs = p.to_dense()
    assert var == 0
    assert coeffs == [5, -2, 0, 1]
    assert MPoly.from_dense(xy, var, coeffs) == p


def test_printing_parses_back(xy):
    p = xy.parse('3/2*x^2*y - x + 1')
    assert str(p) == '3/2*x^2*y - x + 1'
    assert xy.parse(str(p)) == p


def test_pickling_keeps_equality(xy):
    p = xy.parse('x^2 - 2*y')
    hash(p)
    clone = pickle.loads(pickle.dumps(p))
    assert clone == p
    assert hash(clone) == hash(p)
