import random
from fractions import Fraction

import pytest

from lib.dimension import dimension
from lib.exceptions import NotBivariateError, OracleUndecidedError
from lib.generic import RandomSource, RngConfig
from lib.oracle2d import cell_samples, dim2d_oracle
from lib.polyring import MPoly, PolyRing

XY = PolyRing(['x', 'y'])
YX = PolyRing(['y', 'x'])

CORPUS = [
    ('x^2 + y^2 - 1', 1),
    ('x^2 + y^2', 0),
    ('x^2 + y^2 + 1', -1),
    ('x*y', 1),
    ('x^2', 1),
    ('y^2 - x^3', 1),
    ('x^2 + y^4', 0),
    ('(x - 1)^2 + (y - 2)^2', 0),
    ('x^2 + y^2 - 2', 1),
    ('(x^2 - 2)^2 + (y^2 - 3)^2', 0),
    ('(x^2 + 1)*(y^2 + 1)', -1),
    ('x^2 + 1', -1),
    ('(x^2 + y^2)*(x^2 + y^2 - 1)', 1),
    ('0', 2),
]


def swapped(f: MPoly) -> MPoly:
    return f.relabel(YX).embed(XY)


@pytest.mark.parametrize('text, expected', CORPUS)
def test_oracle_corpus(text, expected):
    assert dim2d_oracle(XY.parse(text)) == expected


@pytest.mark.parametrize('text, expected', CORPUS)
def test_oracle_is_symmetric(text, expected):
    assert dim2d_oracle(swapped(XY.parse(text))) == expected


@pytest.mark.slow
@pytest.mark.parametrize('text, expected', [c for c in CORPUS if c[1] < 2])
def test_pipeline_agrees_with_corpus(text, expected):
    f = XY.parse(text)
    assert dimension([f], RandomSource(RngConfig(seed=1))).dim == expected == dim2d_oracle(f)


def test_cell_samples_of_circle():
    cells = cell_samples(XY.parse('x^2 + y^2 - 1'))
    open_cells = [c for c in cells if not c.on_projection_root]
    assert [c.y_root_count for c in open_cells] == [0, 2, 0]
    assert {c.x_value for c in cells if c.on_projection_root} == {Fraction(-1), Fraction(1)}


def test_not_bivariate():
    with pytest.raises(NotBivariateError):
        dim2d_oracle(PolyRing(['x']).parse('x'))
    with pytest.raises(NotBivariateError):
        dim2d_oracle(PolyRing(['x', 'y', 'z']).parse('x*y*z'))


def random_bivariate(rnd):
    degree = rnd.randint(1, 4)
    terms = dict()
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            if rnd.random() < 0.6:
                terms[(a, b)] = rnd.randint(-4, 4)
    terms[(degree, 0)] = rnd.choice([-1, 1]) * rnd.randint(1, 4)
    return MPoly(XY, terms)


def oracle_or_none(f):
    try:
        return dim2d_oracle(f)
    except OracleUndecidedError:
        return None


def random_instances(seed, count):
    rnd = random.Random(seed)
    found = list()
    while len(found) < count:
        f = random_bivariate(rnd)
        expected = oracle_or_none(f)
        if expected is not None:
            found.append((f, expected))
    return found


def test_random_instances_are_symmetric():
    for f, expected in random_instances(17, 20):
        assert oracle_or_none(swapped(f)) in (expected, None)


@pytest.mark.slow
def test_pipeline_agrees_on_random_instances():
    for k, (f, expected) in enumerate(random_instances(23, 20)):
        assert dimension([f], RandomSource(RngConfig(seed=k))).dim == expected, str(f)
