import random
from fractions import Fraction

import pytest

from lib.exceptions import RootOnEndpointError
from lib.polyring import PolyRing
from lib.univariate import (IsolatingInterval, cauchy_bound, dense_eval, dense_squarefree, isolate_real_roots,
    refine_interval, sample_points, squarefree_part, sturm_count)

X = PolyRing(['x'])
x = X.gen('x')


def assert_isolating(u, intervals, roots):
    """Every interval holds exactly one of `roots` and the intervals are
    sorted and pairwise disjoint."""
    assert len(intervals) == len(roots)
    for left, right in zip(intervals, intervals[1:]):
        assert left.hi < right.lo
    for iv, r in zip(intervals, sorted(roots)):
        assert iv.lo <= r <= iv.hi
        assert u.evaluate([iv.lo]) != 0
        assert u.evaluate([iv.hi]) != 0
        assert sturm_count(u, iv.lo, iv.hi) == 1


def test_squarefree_part():
    u = (x - 1) ** 2 * (x + 2)
    assert squarefree_part(u) == x**2 + x - 2
    assert squarefree_part(x * 3 - 6) == x - 2
    with pytest.raises(ValueError):
        squarefree_part(X.zero())


def test_dense_squarefree_of_constant():
    assert dense_squarefree([Fraction(5)]) == [1]


def test_sturm_count_examples():
    assert sturm_count(x**2 - 2, 0, 2) == 1
    assert sturm_count(x**2 - 2, -2, 2) == 2
    assert sturm_count(x**2 + 1, -10, 10) == 0
    assert sturm_count((x - 1) ** 3, 0, 2) == 1


def test_sturm_count_rejects_root_on_endpoint():
    with pytest.raises(RootOnEndpointError):
        sturm_count(x**2 - 1, 1, 3)
    with pytest.raises(ValueError):
        sturm_count(x**2 - 1, 3, 3)


def test_isolate_irrational_roots():
    u = x**2 - 2
    intervals = isolate_real_roots(u)
    assert len(intervals) == 2
    neg, pos = intervals
    assert neg.hi < 0 < pos.lo
    assert pos.lo**2 < 2 < pos.hi**2
    assert sturm_count(u, pos.lo, pos.hi) == 1


def test_isolate_rational_roots():
    u = x**3 - x
    intervals = isolate_real_roots(u)
    assert_isolating(u, intervals, [-1, 0, 1])


@pytest.mark.parametrize('text', ['x^2 + 1', '7', 'x^4 + x^2 + 1'])
def test_no_real_roots(text):
    assert isolate_real_roots(X.parse(text)) == []


def test_isolate_zero_polynomial():
    with pytest.raises(ValueError):
        isolate_real_roots(X.zero())


def test_refine_interval_halves():
    u = x**2 - 2
    iv = isolate_real_roots(u)[1]
    refined = refine_interval(u, iv)
    assert refined.width <= iv.width / 2
    assert iv.lo <= refined.lo and refined.hi <= iv.hi
    assert sturm_count(u, refined.lo, refined.hi) == 1


def test_sample_points_example():
    roots = [
        IsolatingInterval(lo=Fraction(-3, 2), hi=Fraction(-1, 2)),
        IsolatingInterval(lo=Fraction(1, 2), hi=Fraction(3, 2)),
    ]
    assert sample_points(roots).samples == (Fraction(-5, 2), Fraction(0), Fraction(5, 2))


def test_sample_points_without_roots():
    assert sample_points([]).samples == (Fraction(0),)


def test_sample_points_need_disjoint_intervals():
    roots = [IsolatingInterval(lo=Fraction(0), hi=Fraction(2)), IsolatingInterval(lo=Fraction(1), hi=Fraction(3))]
    with pytest.raises(ValueError):
        sample_points(roots)


def test_interval_validation():
    with pytest.raises(ValueError):
        IsolatingInterval(lo=Fraction(2), hi=Fraction(1))
    with pytest.raises(ValueError):
        IsolatingInterval(lo=Fraction(0), hi=Fraction(1), exact=Fraction(2))


def test_random_polynomials_with_known_roots():
    rnd = random.Random(11)
    for _ in range(50):
        roots = set()
        count = rnd.randint(1, 8)
        while len(roots) < count:
            roots.add(Fraction(rnd.randint(-40, 40), rnd.randint(1, 6)))
        u = X.constant(rnd.choice([-3, -1, 2, 5]))
        for r in roots:
            u = u * (x - r) ** rnd.randint(1, 3)
        for _ in range(rnd.randint(0, 2)):
            u = u * (x**2 + rnd.randint(1, 9))
        assert u.degree() <= 30

        intervals = isolate_real_roots(u)
        assert_isolating(u, intervals, sorted(roots))
        samples = sample_points(intervals).samples
        assert len(samples) == len(roots) + 1
        _, dense = u.to_dense()
        assert all(dense_eval(dense, s) != 0 for s in samples)


def test_random_dense_polynomials():
    rnd = random.Random(29)
    for _ in range(50):
        degree = rnd.randint(1, 30)
        coeffs = [rnd.randint(-20, 20) for _ in range(degree)] + [rnd.choice([-7, -2, 1, 3])]
        u = X.zero()
        for k, c in enumerate(coeffs):
            u = u + x**k * c
        sqf = squarefree_part(u)
        _, dense = sqf.to_dense()
        bound = cauchy_bound(dense)

        intervals = isolate_real_roots(u)
        assert len(intervals) == sturm_count(sqf, -bound, bound)
        for left, right in zip(intervals, intervals[1:]):
            assert left.hi < right.lo
        for iv in intervals:
            if iv.exact is not None:
                assert dense_eval(dense, iv.exact) == 0
            else:
                assert sturm_count(sqf, iv.lo, iv.hi) == 1
        samples = sample_points(intervals).samples
        assert len(samples) == len(intervals) + 1
        assert all(dense_eval(dense, s) != 0 for s in samples)
