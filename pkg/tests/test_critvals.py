import random
from fractions import Fraction

import pytest

from lib.critvals import (CriticalValueSet, Perturbation, SigmaMode, StratumSpec, check_whitney_stratification,
    critical_points_ideal, distance_function, iter_strata, limit_critical_values, real_emptiness)
from lib.formulations import LagrangeFormulation, MinorsFormulation, get_formulation
from lib.generic import RandomSource, RngConfig
from lib.groebner import is_trivial
from lib.polyring import MPoly, PolyRing
from lib.univariate import dense_gcd, isolate_real_roots

XY = PolyRing(['x', 'y'])
X = PolyRing(['x'])
T = PolyRing(['t'])


def e_of(*values):
    return Perturbation(values=[Fraction(v) for v in values])


def rng(seed=0):
    return RandomSource(RngConfig(seed=seed))


def test_stratum_validation():
    assert str(StratumSpec(index_set=(0, 2), signs=(1, -1))) == '{+1, -3}'
    for bad in (dict(index_set=(1, 0), signs=(1, 1)), dict(index_set=(0,), signs=(2,)),
                dict(index_set=(0, 1), signs=(1,))):
        with pytest.raises(ValueError):
            StratumSpec(**bad)


def test_perturbation_validation():
    assert len(e_of(1, 2)) == 2
    with pytest.raises(ValueError):
        e_of(1, 0)
    with pytest.raises(ValueError):
        Perturbation(values=[])


@pytest.mark.parametrize('sigma_mode, both_signs, count', [
    (SigmaMode.full, False, 5),
    (SigmaMode.full, True, 9),
    (SigmaMode.ignore, False, 4),
])
def test_iter_strata(sigma_mode, both_signs, count):
    strata = list(iter_strata(2, 2, sigma_mode, both_signs=both_signs))
    assert len(strata) == count
    assert strata[0] == StratumSpec()
    assert [len(s.index_set) for s in strata] == sorted(len(s.index_set) for s in strata)


def test_iter_strata_respects_max_size():
    assert all(len(s.index_set) <= 1 for s in iter_strata(3, 1, SigmaMode.ignore))
    assert not any(s == StratumSpec() for s in iter_strata(2, 2, with_empty=False))


@pytest.mark.parametrize('ring, texts, e, expected', [
    (XY, ['x^2 + y^2 - 1'], [Fraction(1, 2)], True),
    (X, ['x', 'x'], [1, 1], False),
    (X, ['x^2'], [1], True),
])
def test_whitney_examples(ring, texts, e, expected):
    fs = [ring.parse(t) for t in texts]
    assert check_whitney_stratification(fs, e_of(*e)) is expected


def test_whitney_circle_for_random_half_integers():
    circle = XY.parse('x^2 + y^2 - 1')
    rnd = random.Random(4)
    for _ in range(20):
        e = Fraction(2 * rnd.randint(-20, 19) + 1, 2)
        assert check_whitney_stratification([circle], e_of(e))


def test_whitney_rejects_perturbation_through_singular_value():
    # The level x^2 + y^2 - 1 = -1 passes through the critical point 0.
    assert not check_whitney_stratification([XY.parse('x^2 + y^2 - 1')], e_of(1))


def test_critical_points_ideal_circle():
    f = XY.parse('x^2 + y^2 - 1')
    gens = critical_points_ideal([f], XY.parse('x'), StratumSpec(index_set=(0,), signs=(1,)), e_of(Fraction(1, 2)))
    ext = gens[0].ring
    assert ext.variables == ('x', 'y', 'λ1')
    x, y, lam = ext.gens()
    assert set(gens) == {lam * x * 2 - 1, lam * y * 2}


def test_critical_points_ideal_without_constraints_is_trivial():
    f = XY.parse('x^2 + y^2 - 1')
    gens = critical_points_ideal([f], XY.parse('x'), StratumSpec(), e_of(1))
    assert is_trivial(gens)


def test_proportionality_block():
    f1, f2 = XY.parse('x^2 - y'), XY.parse('x*y - 1')
    stratum = StratumSpec(index_set=(0, 1), signs=(1, 1))
    assert LagrangeFormulation([f1, f2], e_of(1, 2)).proportionality(stratum) == [f1 * 2 - f2]
    gens = critical_points_ideal([f1, f2], XY.parse('x'), stratum, e_of(1, 2))
    assert (f1 * 2 - f2).embed(gens[0].ring) in gens


def test_get_formulation():
    assert get_formulation('minors') is MinorsFormulation
    assert get_formulation('lambda') is LagrangeFormulation
    with pytest.raises(ValueError):
        get_formulation('newton')


@pytest.mark.parametrize('mode', ['minors', 'lambda'])
def test_limit_values_of_circle(mode):
    f = XY.parse('x^2 + y^2 - 1')
    Z = limit_critical_values([f], XY.parse('x'), e_of(Fraction(1, 2)), mode, SigmaMode.full)
    assert isinstance(Z, CriticalValueSet)
    assert Z.eliminant == T.parse('t^2 - 1')
    assert [iv.exact for iv in Z.roots] == [-1, 1]


def test_limit_values_of_empty_circle():
    f = XY.parse('x^2 + y^2 + 1')
    Z = limit_critical_values([f], XY.parse('x'), e_of(Fraction(1, 2)), 'minors', SigmaMode.ignore)
    assert Z.eliminant == T.parse('t^2 + 1')
    assert len(Z) == 0


def test_limit_values_of_a_point():
    Z = limit_critical_values([X.parse('x')], X.parse('x'), e_of(1), 'minors', SigmaMode.full)
    assert Z.eliminant == T.parse('t')
    assert Z.degree == 1


def test_limit_values_record_degree():
    source = rng()
    limit_critical_values([XY.parse('x^2 + y^2 - 1')], XY.parse('x + y'), e_of(3), 'minors', SigmaMode.ignore, source)
    assert source.max_degree == 2


def test_limit_values_of_circle_under_linear_forms():
    f = XY.parse('x^2 + y^2 - 1')
    rnd = random.Random(2)
    for _ in range(5):
        a, b = rnd.randint(1, 3), rnd.randint(0, 3)
        h = XY.linear_form([a, b])
        Z = limit_critical_values([f], h, e_of(Fraction(1, 3)), 'minors', SigmaMode.ignore)
        # h ranges over [-r, r] with r^2 = a^2 + b^2
        assert Z.eliminant == T.parse(f"t^2 - {a * a + b * b}")


def same_real_roots(p, q):
    _, dp = p.to_dense()
    _, dq = q.to_dense()
    common = MPoly.from_dense(T, 0, dense_gcd(dp, dq))
    count = len(isolate_real_roots(common))
    return count == len(isolate_real_roots(p)) == len(isolate_real_roots(q))


@pytest.mark.parametrize('text, h', [
    ('x^2 + y^2 - 1', 'x'),
    ('x^2 + 4*y^2 - 4', 'x + 2*y'),
    ('x^2 + y^2', 'y'),
    ('x^4 + y^4 - 1', 'x + y'),
])
def test_formulations_agree_on_real_values(text, h):
    f = XY.parse(text)
    e = e_of(Fraction(2, 3))
    minors = limit_critical_values([f], XY.parse(h), e, 'minors', SigmaMode.ignore)
    lagrange = limit_critical_values([f], XY.parse(h), e, 'lambda', SigmaMode.full)
    assert same_real_roots(minors.eliminant, lagrange.eliminant)


def test_distance_function():
    h = distance_function(XY, [Fraction(1), Fraction(-2)])
    assert h == XY.parse('x^2 - 2*x + y^2 + 4*y + 5')


@pytest.mark.parametrize('ring, texts, empty', [
    (XY, ['x^2 + y^2 + 1'], True),
    (XY, ['x^2 + y^2 - 1'], False),
    (XY, ['x^2 + y^2'], False),
    (XY, ['x*y - 1'], False),
    (XY, ['x^2 + 1', 'y'], True),
    (XY, ['x - 1', 'y + 2'], False),
    (XY, ['x', 'x - 1'], True),
    (X, ['x^2 + 1'], True),
    (X, ['x^2 - 2', 'x^3 - 2*x'], False),
    (X, ['x - 1', 'x + 1'], True),
])
def test_real_emptiness(ring, texts, empty):
    fs = [ring.parse(t) for t in texts]
    assert real_emptiness(fs, rng()) is empty


@pytest.mark.parametrize('formulation', ['minors', 'lambda'])
def test_real_emptiness_formulations(formulation):
    assert real_emptiness([XY.parse('x^2 + y^2 + 1')], rng(1), formulation=formulation)
    assert not real_emptiness([XY.parse('x^2 + (y - 1)^2')], rng(1), formulation=formulation)
