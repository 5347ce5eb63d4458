"""Brute-force dimension of a plane curve, for cross-checking.

The curve f = 0 is projected on one axis through the discriminant of f;
above every open interval between projection roots the number of real
points of a vertical line is constant, so a single rational sample decides
whether the curve has one-dimensional pieces. What remains are finitely
many points above projection roots, decided through the singular locus.
Nothing here shares code with the Gröbner pipeline apart from root
isolation.
"""
import logging
from fractions import Fraction
from typing import List, NamedTuple, Tuple

import pydantic
import sympy
from sympy.polys.polytools import Poly, factor_list

from lib.exceptions import NotBivariateError, OracleUndecidedError
from lib.polyring import MPoly, PolyRing
from lib.univariate import isolate_real_roots, sample_points

__all__ = (
    'CellSample',
    'cell_samples',
    'dim2d_oracle',
)

logger = logging.getLogger(__name__)


class CellSample(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x_value: Fraction
    y_root_count: int
    on_projection_root: bool = False

    @pydantic.field_validator('y_root_count')
    @classmethod
    def validate_count(cls, v):
        if v < 0:
            raise ValueError('y_root_count must be non-negative')
        return v


class _Projection(NamedTuple):
    cells: List[CellSample]
    vertical_line: bool


def _to_sympy(f: MPoly) -> Tuple[sympy.Expr, sympy.Symbol, sympy.Symbol]:
    x, y = sympy.symbols(list(f.ring.variables))
    expr = sympy.Integer(0)
    for (a, b), c in f.terms.items():
        expr += sympy.Rational(c.numerator, c.denominator) * x**a * y**b
    return expr, x, y


def _univariate(expr, var: sympy.Symbol) -> MPoly:
    coeffs = Poly(expr, var, domain='QQ').all_coeffs()
    dense = [Fraction(int(c.p), int(c.q)) for c in reversed(coeffs)]
    return MPoly.from_dense(PolyRing([str(var)]), 0, dense)


def _real_root_count(expr, var: sympy.Symbol) -> int:
    u = _univariate(expr, var)
    if u.is_zero:
        raise ValueError('Vertical line above a sample that is not a projection root')
    return len(isolate_real_roots(u))


def _rational_roots(expr, var: sympy.Symbol) -> List[Fraction]:
    roots = list()
    for factor, _ in factor_list(Poly(expr, var, domain='QQ'))[1]:
        if factor.degree() == 1:
            a1, a0 = factor.all_coeffs()
            r = sympy.Rational(-a0, a1)
            roots.append(Fraction(int(r.p), int(r.q)))
    return sorted(roots)


def _project(expr, x: sympy.Symbol, y: sympy.Symbol) -> _Projection:
    """Cells of the projection on x: one sample per open interval and one
    per rational projection root."""
    poly_y = Poly(expr, y)
    content = sympy.gcd_list(poly_y.all_coeffs())
    vertical = bool(content.free_symbols) and bool(isolate_real_roots(_univariate(content, x)))
    # A repeated factor would make the discriminant vanish identically.
    primitive = Poly(sympy.cancel(expr / content), x, y, domain='QQ').sqf_part().as_expr()
    if Poly(primitive, y).degree() <= 0:
        return _Projection([], vertical)

    lead = Poly(primitive, y).LC()
    projection = sympy.expand(sympy.resultant(primitive, sympy.diff(primitive, y), y) * lead)
    if not projection.free_symbols:
        projection = lead
    roots = isolate_real_roots(_univariate(projection, x)) if projection.free_symbols else []

    cells = list()
    for s in sample_points(roots).samples:
        count = _real_root_count(primitive.subs(x, sympy.Rational(s.numerator, s.denominator)), y)
        cells.append(CellSample(x_value=s, y_root_count=count))
    if projection.free_symbols:
        for r in _rational_roots(projection, x):
            fiber = sympy.expand(primitive.subs(x, sympy.Rational(r.numerator, r.denominator)))
            count = _real_root_count(fiber, y) if fiber != 0 else 0
            cells.append(CellSample(x_value=r, y_root_count=count, on_projection_root=True))
    cells.sort(key=lambda cell: cell.x_value)
    return _Projection(cells, vertical)


def _check_bivariate(f: MPoly):
    if len(f.ring.variables) != 2:
        raise NotBivariateError(f"Expected a polynomial in two variables, got {f.ring!r}")


def cell_samples(f: MPoly) -> List[CellSample]:
    """Sample points of the projection of f = 0 on the first variable."""
    _check_bivariate(f)
    if f.is_zero:
        raise ValueError('The zero polynomial has no projection')
    expr, x, y = _to_sympy(f)
    return _project(expr, x, y).cells


def _singular_points(expr, x: sympy.Symbol, y: sympy.Symbol) -> int:
    """0 when the singular locus has a real point, -1 when it has none."""
    sqf = Poly(expr, x, y, domain='QQ').sqf_part().as_expr()
    system = [sqf, sympy.diff(sqf, x), sympy.diff(sqf, y)]
    basis = sympy.groebner(system, x, y, order='grevlex', domain='QQ')
    if list(basis.exprs) == [1]:
        return -1
    solutions = sympy.solve(list(basis.exprs), [x, y], dict=True)
    undecided = False
    for solution in solutions:
        if set(solution) != {x, y}:
            undecided = True
            continue
        real = [solution[x].is_real, solution[y].is_real]
        if all(real):
            return 0
        if False not in real:
            undecided = True
    if undecided:
        raise OracleUndecidedError(f"Cannot decide the real singular points of {sqf}")
    return -1


def dim2d_oracle(f: MPoly) -> int:
    """Dimension of the real zero set of a bivariate polynomial."""
    _check_bivariate(f)
    if f.is_zero:
        return 2
    expr, x, y = _to_sympy(f)

    passes = [_project(expr, x, y), _project(expr, y, x)]
    for projection in passes:
        if projection.vertical_line or any(c.y_root_count and not c.on_projection_root for c in projection.cells):
            return 1
    # The real zero set is finite now; every such point is singular.
    if any(c.y_root_count for projection in passes for c in projection.cells):
        return 0
    return _singular_points(expr, x, y)
