"""Problem files and benchmark instance generators.

A problem file is line-oriented:

    # optional comments
    name: circle            (optional)
    vars: x y
    f1: x^2 + y^2 - 1

Every polynomial line is ``LABEL: EXPRESSION`` and may only use the
variables declared on the ``vars:`` line, which must come first.
"""
import random
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Sequence, Tuple

import pydantic

from lib.exceptions import EmptySystemError, ProblemSyntaxError
from lib.parsing import IDENTIFIER, parse_polynomial
from lib.polyring import MPoly, PolyRing

__all__ = (
    'ProblemFile',
    'Family',
    'parse_problem',
    'format_problem',
    'generate_instance',
    'parse_generate_spec',
)


class ProblemFile(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(arbitrary_types_allowed=True, frozen=True)

    variables: Tuple[str, ...]
    polynomials: Tuple[MPoly, ...]
    labels: Tuple[str, ...] = ()
    name: Optional[str] = None

    @pydantic.model_validator(mode='after')
    def validate_problem(self):
        if not self.polynomials:
            raise ValueError('A problem needs at least one polynomial')
        ring = PolyRing(self.variables)
        if any(p.ring != ring for p in self.polynomials):
            raise ValueError('Every polynomial must live in the declared ring')
        if self.labels and len(self.labels) != len(self.polynomials):
            raise ValueError('One label is needed per polynomial')
        return self

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.variables)

    def get_labels(self) -> Tuple[str, ...]:
        return self.labels or tuple(f"f{i + 1}" for i in range(len(self.polynomials)))

    def sum_of_squares(self) -> 'ProblemFile':
        """The same real set written as the single equation Σ f_i² = 0."""
        total = self.ring.zero()
        for p in self.polynomials:
            total = total + p * p
        return ProblemFile(variables=self.variables, polynomials=(total,), labels=('f1',), name=self.name)

    def __str__(self):
        return format_problem(self)


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file.

    Raises
    ------
    ProblemSyntaxError
        The text does not follow the grammar; the error carries the line
        and column of the offending token
    UndeclaredVariableError
        An expression uses a name missing from the ``vars:`` line
    EmptySystemError
        No polynomial line was found
    """
    ring = None
    name = None
    labels = list()
    polynomials = list()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.lstrip()
        if not stripped or stripped.startswith('#'):
            continue
        indent = len(line) - len(stripped)
        label, sep, rest = stripped.partition(':')
        label = label.strip()
        if not sep:
            raise ProblemSyntaxError('Expected "LABEL: EXPRESSION"', lineno, indent + 1)
        column = indent + len(stripped) - len(rest) + 1

        if label == 'vars':
            if ring is not None:
                raise ProblemSyntaxError('Duplicate "vars:" line', lineno, indent + 1)
            names = rest.split()
            if not names:
                raise ProblemSyntaxError('No variables declared', lineno, column)
            for var in names:
                if not IDENTIFIER.fullmatch(var):
                    raise ProblemSyntaxError(f"Invalid variable name {var!r}", lineno, column + rest.index(var))
            if len(set(names)) != len(names):
                raise ProblemSyntaxError('Duplicate variable names', lineno, column)
            ring = PolyRing(names)
        elif label == 'name':
            name = rest.strip() or None
        else:
            if not IDENTIFIER.fullmatch(label):
                raise ProblemSyntaxError(f"Invalid label {label!r}", lineno, indent + 1)
            if ring is None:
                raise ProblemSyntaxError('Polynomials must follow the "vars:" line', lineno, indent + 1)
            labels.append(label)
            polynomials.append(parse_polynomial(rest, ring, lineno, column))

    if ring is None:
        raise ProblemSyntaxError('Missing "vars:" line')
    if not polynomials:
        raise EmptySystemError('The system has no polynomials')
    return ProblemFile(variables=ring.variables, polynomials=tuple(polynomials), labels=tuple(labels), name=name)


def format_problem(problem: ProblemFile) -> str:
    lines = list()
    if problem.name:
        lines.append(f"name: {problem.name}")
    lines.append('vars: ' + ' '.join(problem.variables))
    for label, p in zip(problem.get_labels(), problem.polynomials):
        lines.append(f"{label}: {p}")
    return '\n'.join(lines) + '\n'


class Family(Enum):
    p = 'p'
    b = 'b'
    s = 's'


def _coordinates(n: int) -> PolyRing:
    return PolyRing(f"x{i + 1}" for i in range(n))


def _p_family(n: int) -> MPoly:
    # (Σ x_i²)² - 4 Σ x_{i+1}² x_i² - 4 x_1² x_n²
    ring = _coordinates(n)
    squares = [x * x for x in ring.gens()]
    total = ring.zero()
    for sq in squares:
        total = total + sq
    f = total * total
    for a, b in zip(squares, squares[1:]):
        f = f - a * b * 4
    return f - squares[0] * squares[-1] * 4


def _b_family(n: int) -> MPoly:
    # Π (x_i² + n - 1) - n^(n-2) (Σ x_i)²
    ring = _coordinates(n)
    prod = ring.one()
    linear = ring.zero()
    for x in ring.gens():
        prod = prod * (x * x + (n - 1))
        linear = linear + x
    return prod - linear * linear * Fraction(n) ** (n - 2)


def _s_family(c: int, n: int, seed: int) -> MPoly:
    # Σ q_j² for c dense quadrics with coefficients in [-9, 9]
    ring = _coordinates(n)
    rnd = random.Random(seed)
    monomials = [ring.one()]
    monomials.extend(ring.gens())
    monomials.extend(a * b for a, b in combinations_with_replacement(ring.gens(), 2))
    f = ring.zero()
    for _ in range(c):
        q = ring.zero()
        for m in monomials:
            q = q + m * rnd.randint(-9, 9)
        f = f + q * q
    return f


def generate_instance(family: Family, params: Sequence[int]) -> ProblemFile:
    """Build a benchmark instance.

    ``p`` and ``b`` take the number of variables n >= 2; ``s`` takes the
    number of quadrics c >= 1, n >= 2 and an optional seed (default 0).
    """
    family = Family(family)
    params = tuple(int(v) for v in params)
    if family is Family.s:
        if len(params) not in (2, 3):
            raise ValueError('Family s expects C,N[,SEED]')
        c, n = params[:2]
        seed = params[2] if len(params) == 3 else 0
        if c < 1 or n < 2:
            raise ValueError('Family s needs C >= 1 and N >= 2')
        f = _s_family(c, n, seed)
        name = f"s_{c},{n} (seed {seed})"
    else:
        if len(params) != 1:
            raise ValueError(f"Family {family.value} expects a single parameter N")
        n, = params
        if n < 2:
            raise ValueError(f"Family {family.value} needs N >= 2")
        f = _p_family(n) if family is Family.p else _b_family(n)
        name = f"{family.value}_{n}"
    return ProblemFile(variables=f.ring.variables, polynomials=(f,), labels=('f1',), name=name)


def parse_generate_spec(spec: str) -> Tuple[Family, Tuple[int, ...]]:
    """Split ``p:N``, ``b:N`` or ``s:C,N[,SEED]`` into a family and its
    parameters."""
    family, sep, rest = spec.partition(':')
    try:
        family = Family(family.strip().lower())
    except ValueError:
        raise ValueError(f"Unknown family {family!r}, expected one of: p, b, s") from None
    if not sep or not rest.strip():
        raise ValueError(f"Missing parameters in {spec!r}")
    try:
        params = tuple(int(v) for v in rest.split(','))
    except ValueError:
        raise ValueError(f"Parameters must be integers in {spec!r}") from None
    return family, params
