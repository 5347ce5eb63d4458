import pytest

from lib.exceptions import EmptySystemError, ProblemSyntaxError, UndeclaredVariableError
from lib.problems import Family, ProblemFile, format_problem, generate_instance, parse_generate_spec, parse_problem

CIRCLE = """\
# the unit circle
name: circle
vars: x y
f1: x^2 + y^2 - 1
"""


def test_parse_problem():
    problem = parse_problem(CIRCLE)
    assert problem.name == 'circle'
    assert problem.variables == ('x', 'y')
    assert problem.get_labels() == ('f1',)
    assert problem.polynomials[0] == problem.ring.parse('x^2 + y^2 - 1')


def test_format_round_trip():
    problem = parse_problem(CIRCLE)
    assert format_problem(problem) == 'name: circle\nvars: x y\nf1: x^2 + y^2 - 1\n'
    assert parse_problem(str(problem)) == problem


def test_several_polynomials_keep_their_labels():
    problem = parse_problem('vars: x y z\n  eq_a: x - y\n\neq_b: z^2 - x*y\n')
    assert problem.labels == ('eq_a', 'eq_b')
    assert len(problem.polynomials) == 2


def test_error_positions():
    with pytest.raises(ProblemSyntaxError) as info:
        parse_problem('vars: x y\nf1: x^2 + 2x\n')
    assert (info.value.line, info.value.column) == (2, 12)

    with pytest.raises(UndeclaredVariableError) as info:
        parse_problem('vars: x y\nf1: x + z\n')
    assert (info.value.line, info.value.column) == (2, 9)


@pytest.mark.parametrize('text, error', [
    ('f1: x\n', ProblemSyntaxError),
    ('vars: x\n', EmptySystemError),
    ('vars: x\nvars: y\nf1: x\n', ProblemSyntaxError),
    ('vars: x x\nf1: x\n', ProblemSyntaxError),
    ('vars: x 1y\nf1: x\n', ProblemSyntaxError),
    ('vars: x\nx^2 - 1\n', ProblemSyntaxError),
    ('vars: x\n2f: x\n', ProblemSyntaxError),
    ('', ProblemSyntaxError),
])
def test_malformed_files(text, error):
    with pytest.raises(error):
        parse_problem(text)


def test_sum_of_squares():
    problem = parse_problem('vars: x y\nf1: x - 1\nf2: y\n')
    sos = problem.sum_of_squares()
    assert len(sos.polynomials) == 1
    assert sos.polynomials[0] == problem.ring.parse('x^2 - 2*x + 1 + y^2')


def test_problem_validation():
    ring_problem = parse_problem(CIRCLE)
    with pytest.raises(ValueError):
        ProblemFile(variables=('x', 'y'), polynomials=())
    with pytest.raises(ValueError):
        ProblemFile(variables=('x', 'z'), polynomials=ring_problem.polynomials)


@pytest.mark.parametrize('n', [2, 3, 4, 5])
def test_b_family_at_origin(n):
    f = generate_instance(Family.b, [n]).polynomials[0]
    assert f.evaluate([0] * n) == (n - 1) ** n


@pytest.mark.parametrize('family, n, degree', [
    ('p', 4, 4),
    ('p', 6, 4),
    ('b', 3, 6),
    ('b', 4, 8),
])
def test_family_degrees(family, n, degree):
    f = generate_instance(family, [n]).polynomials[0]
    assert f.degree() == degree
    assert f.ring.variables == tuple(f"x{i + 1}" for i in range(n))


def test_s_family_is_seeded_sum_of_squares():
    a = generate_instance(Family.s, [2, 3, 5])
    b = generate_instance(Family.s, [2, 3, 5])
    c = generate_instance(Family.s, [2, 3, 6])
    assert a == b
    assert a.polynomials[0] != c.polynomials[0]
    assert a.polynomials[0].degree() == 4
    f = a.polynomials[0]
    for point in ([0, 0, 0], [1, -1, 2], [3, 1, 0]):
        assert f.evaluate(point) >= 0


@pytest.mark.parametrize('spec', ['p:4', 'b:3', 's:2,3', 's:1,2,7'])
def test_generated_instances_parse_back(spec):
    problem = generate_instance(*parse_generate_spec(spec))
    assert parse_problem(format_problem(problem)) == problem


def test_parse_generate_spec():
    assert parse_generate_spec('p:4') == (Family.p, (4,))
    assert parse_generate_spec('S:2,3,9') == (Family.s, (2, 3, 9))
    for bad in ('q:3', 'p', 'p:', 'p:x'):
        with pytest.raises(ValueError):
            parse_generate_spec(bad)


@pytest.mark.parametrize('family, params', [('p', [1]), ('b', [3, 4]), ('s', [0, 3]), ('s', [1])])
def test_generate_rejects_bad_parameters(family, params):
    with pytest.raises(ValueError):
        generate_instance(family, params)
