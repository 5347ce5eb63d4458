"""Gröbner bases, elimination and zero-dimensional solving.

The engine is Buchberger's algorithm with the Gebauer-Möller criteria.
Inside the engine polynomials are kept with primitive integer
coefficients and reduced fraction-free; results are handed back as monic
polynomials over the rationals.
"""
import heapq
import logging
import math
import operator
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple, Union

import pydantic

from lib.generic import RandomSource
from lib.polyring import Monomial, MonomialOrder, MPoly, PolyRing
from lib.univariate import dense_squarefree
from utils import get_config, lru_cache

__all__ = (
    'SolveStatus',
    'IdealBasis',
    'ShapeSolution',
    'reduce',
    'buchberger',
    'is_trivial',
    'is_zero_dimensional',
    'eliminate',
    'standard_monomials',
    'minimal_polynomial',
    'univariate_eliminant',
    'value_eliminant',
    'saturate',
    'radical_generators',
    'shape_position_solve',
    'fresh_variable',
)

logger = logging.getLogger(__name__)

_CACHE_SIZE = get_config().getint('Groebner', 'CacheSize', fallback=512)


class SolveStatus(Enum):
    ZERO = 'zero'
    NOT_ZERO_DIM = 'not_zero_dim'
    RETRY_EXHAUSTED = 'retry_exhausted'


class PairSelection(Enum):
    normal = 'normal'
    sugar = 'sugar'

def _selection() -> PairSelection:
    return PairSelection(get_config().get('Groebner', 'Selection', fallback='normal').lower())


def fresh_variable(ring: PolyRing, base: str) -> str:
    """A variable name derived from `base` that `ring` does not use yet."""
    name = base
    while name in ring.variables:
        name += "'"
    return name


# -- monomial helpers --

def _divides(a: Monomial, b: Monomial) -> bool:
    return all(map(operator.le, a, b))

def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))

def _mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.add, a, b))

def _quotient(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.sub, a, b))

def _coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


# -- integral representation --

def _integral(p: MPoly) -> Tuple[Dict[Monomial, int], Fraction]:
    """Return (terms, scale) with integer coprime terms equal to p * scale."""
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = {m: c.numerator * (den // c.denominator) for m, c in p.terms.items()}
    g = 0
    for v in ints.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = {m: v // g for m, v in ints.items()}
    return ints, Fraction(den, g)


class _Element:
    """A basis polynomial with primitive integer coefficients and a
    positive leading coefficient."""
    __slots__ = ('lm', 'lc', 'tail', 'sugar')

    def __init__(self, terms: Dict[Monomial, int], order: MonomialOrder, sugar: int):
        items = sorted(terms.items(), key=lambda item: order.key(item[0]), reverse=True)
        if items[0][1] < 0:
            items = [(m, -c) for m, c in items]
        self.lm, self.lc = items[0]
        self.tail = items[1:]
        self.sugar = sugar

    def to_dict(self) -> Dict[Monomial, int]:
        terms = dict(self.tail)
        terms[self.lm] = self.lc
        return terms

    def to_poly(self, ring: PolyRing) -> MPoly:
        lc = self.lc
        terms = {self.lm: Fraction(1)}
        for m, c in self.tail:
            terms[m] = Fraction(c, lc)
        return MPoly._raw(ring, terms)


def _reduce(terms: Dict[Monomial, int], reducers: Sequence[_Element], order: MonomialOrder) -> Tuple[Dict[Monomial, int], int, int]:
    """Fraction-free full reduction of `terms`.

    Returns (remainder, num, den) where remainder equals num/den times the
    normal form of the input.
    """
    p = dict(terms)
    neg_key = order.neg_key
    heap = [(neg_key(m), m) for m in p]
    heapq.heapify(heap)
    rem: Dict[Monomial, int] = dict()
    num = den = 1
    steps = 0
    while heap:
        _, m = heapq.heappop(heap)
        c = p.pop(m, 0)
        if not c:
            continue
        for g in reducers:
            if _divides(g.lm, m):
                break
        else:
            rem[m] = c
            continue

        d = math.gcd(c, g.lc)
        a, b = g.lc // d, c // d
        if a != 1:
            for k in p:
                p[k] *= a
            for k in rem:
                rem[k] *= a
            num *= a
        q = _quotient(m, g.lm)
        for gm, gc in g.tail:
            nm = _mul(gm, q)
            old = p.get(nm)
            if old is None:
                p[nm] = -b * gc
                heapq.heappush(heap, (neg_key(nm), nm))
            else:
                v = old - b * gc
                if v:
                    p[nm] = v
                else:
                    del p[nm]

        steps += 1
        if steps % 32 == 0:
            content = 0
            for v in p.values():
                content = math.gcd(content, v)
                if content == 1:
                    break
            if content != 1:
                for v in rem.values():
                    content = math.gcd(content, v)
                    if content == 1:
                        break
            if content > 1:
                for k in p:
                    p[k] //= content
                for k in rem:
                    rem[k] //= content
                den *= content

    content = 0
    for v in rem.values():
        content = math.gcd(content, v)
        if content == 1:
            break
    if content > 1:
        rem = {k: v // content for k, v in rem.items()}
        den *= content
    return rem, num, den


def _spoly(f: _Element, g: _Element) -> Dict[Monomial, int]:
    L = _lcm(f.lm, g.lm)
    qf, qg = _quotient(L, f.lm), _quotient(L, g.lm)
    d = math.gcd(f.lc, g.lc)
    af, ag = g.lc // d, f.lc // d
    s: Dict[Monomial, int] = dict()
    for m, c in f.tail:
        s[_mul(m, qf)] = af * c
    for m, c in g.tail:
        nm = _mul(m, qg)
        v = s.get(nm, 0) - ag * c
        if v:
            s[nm] = v
        else:
            s.pop(nm, None)
    return s


class _Pair(NamedTuple):
    lcm: Monomial
    key: tuple
    sugar: int


def _update(basis: List[_Element], pairs: Dict[Tuple[int, int], _Pair], new: _Element, order: MonomialOrder) -> None:
    """Add `new` to the basis and its critical pairs to `pairs`, pruned by
    the Gebauer-Möller criteria."""
    k = len(basis)
    lm = new.lm

    # Old pairs whose lcm is a proper multiple of lcm(., new) on both sides.
    for (i, j), pair in list(pairs.items()):
        L = pair.lcm
        if _divides(lm, L) and L != _lcm(basis[i].lm, lm) and L != _lcm(basis[j].lm, lm):
            del pairs[(i, j)]

    groups: Dict[Monomial, List[int]] = dict()
    for i, g in enumerate(basis):
        groups.setdefault(_lcm(g.lm, lm), list()).append(i)

    minimal: List[Monomial] = list()
    for L in sorted(groups, key=order.key):
        if not any(_divides(M, L) for M in minimal):
            minimal.append(L)

    deg_new = sum(lm)
    for L in minimal:
        members = groups[L]
        if any(_coprime(basis[i].lm, lm) for i in members):
            continue
        i = members[0]
        deg_L = sum(L)
        sugar = max(basis[i].sugar + deg_L - sum(basis[i].lm), new.sugar + deg_L - deg_new)
        pairs[(i, k)] = _Pair(L, order.key(L), sugar)

    basis.append(new)


def _select(pairs: Dict[Tuple[int, int], _Pair], selection: PairSelection) -> Tuple[int, int]:
    if selection is PairSelection.sugar:
        return min(pairs, key=lambda ij: (pairs[ij].sugar, pairs[ij].key, ij))
    return min(pairs, key=lambda ij: (pairs[ij].key, ij))


def _groebner(gens: Sequence[MPoly], order: MonomialOrder, selection: PairSelection) -> List[_Element]:
    basis: List[_Element] = list()
    active: List[bool] = list()
    pairs: Dict[Tuple[int, int], _Pair] = dict()

    def add(terms: Dict[Monomial, int], sugar: int) -> bool:
        element = _Element(terms, order, sugar)
        if not any(element.lm):
            basis[:] = [element]
            return True
        for idx, g in enumerate(basis):
            if active[idx] and _divides(element.lm, g.lm):
                active[idx] = False
        _update(basis, pairs, element, order)
        active.append(True)
        return False

    for f in gens:
        terms, _ = _integral(f)
        reducers = [g for g, on in zip(basis, active) if on]
        r, _, _ = _reduce(terms, reducers, order)
        if r and add(r, f.degree()):
            return basis

    reductions = 0
    while pairs:
        ij = _select(pairs, selection)
        pair = pairs.pop(ij)
        s = _spoly(basis[ij[0]], basis[ij[1]])
        if not s:
            continue
        reducers = [g for g, on in zip(basis, active) if on]
        r, _, _ = _reduce(s, reducers, order)
        reductions += 1
        if r and add(r, pair.sugar):
            return basis

    logger.debug('Buchberger finished after %s reductions with %s elements (%s active)', reductions, len(basis), sum(active))

    minimal = sorted((g for g, on in zip(basis, active) if on), key=lambda g: order.key(g.lm))
    result: List[_Element] = list()
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r, _, _ = _reduce(g.to_dict(), others, order)
        result.append(_Element(r, order, g.sugar))
    result.sort(key=lambda g: order.key(g.lm), reverse=True)
    return result


@lru_cache(_CACHE_SIZE)
def _reduced_basis(gens: Tuple[MPoly, ...], order: MonomialOrder, selection: PairSelection) -> Tuple[MPoly, ...]:
    ring = gens[0].ring
    elements = _groebner(gens, order, selection)
    return tuple(g.to_poly(ring) for g in elements)


class IdealBasis(pydantic.BaseModel):
    """Generators of a polynomial ideal; when `reduced_gb` is set they are
    its reduced Gröbner basis for `order`, sorted by decreasing leading
    monomial."""
    model_config = pydantic.ConfigDict(arbitrary_types_allowed=True, frozen=True)

    generators: Tuple[MPoly, ...]
    order: MonomialOrder
    reduced_gb: bool = False

    @pydantic.field_validator('generators')
    @classmethod
    def validate_generators(cls, v):
        if any(g.is_zero for g in v):
            raise ValueError('Generators may not contain the zero polynomial')
        if len({g.ring for g in v}) > 1:
            raise ValueError('All generators must live in the same ring')
        return v

    @property
    def is_trivial(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant

    def contains(self, p: MPoly) -> bool:
        return reduce(p, self).is_zero

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial(self.order) for g in self.generators]


def reduce(p: MPoly, basis: IdealBasis) -> MPoly:
    """Normal form of p with respect to the generators of `basis`."""
    if p.is_zero or not basis.generators:
        return p
    order = basis.order
    reducers = [_Element(_integral(g)[0], order, 0) for g in basis.generators]
    terms, scale = _integral(p)
    rem, num, den = _reduce(terms, reducers, order)
    factor = Fraction(den, num) / scale
    return MPoly._raw(p.ring, {m: c * factor for m, c in rem.items()})


def buchberger(gens: Iterable[MPoly], order: MonomialOrder = None) -> IdealBasis:
    """Reduced Gröbner basis of the ideal generated by `gens`."""
    order = order or MonomialOrder.grevlex()
    gens = tuple(g for g in gens if not g.is_zero)
    if not gens:
        return IdealBasis(generators=(), order=order, reduced_gb=True)
    if any(g.ring != gens[0].ring for g in gens):
        raise ValueError('All generators must live in the same ring')
    generators = _reduced_basis(gens, order, _selection())
    return IdealBasis(generators=generators, order=order, reduced_gb=True)


def is_trivial(gens: Iterable[MPoly]) -> bool:
    """Whether 1 lies in the ideal, i.e. the complex variety is empty."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return False
    if any(g.is_constant for g in gens):
        return True
    return buchberger(gens).is_trivial


def is_zero_dimensional(basis: IdealBasis) -> bool:
    """Whether a reduced basis describes finitely many complex points (an
    empty variety counts as zero-dimensional)."""
    if not basis.generators:
        return False
    if basis.is_trivial:
        return True
    n = len(basis.generators[0].ring.variables)
    pure = set()
    for m in basis.leading_monomials():
        used = [i for i, e in enumerate(m) if e]
        if len(used) == 1:
            pure.add(used[0])
    return len(pure) == n


def _indices(ring: PolyRing, variables: Iterable[Union[int, str]]) -> List[int]:
    return sorted({ring.index(v) for v in variables})


def eliminate(gens: Sequence[MPoly], elim_vars: Iterable[Union[int, str]], shrink: bool = False) -> List[MPoly]:
    """Generators of the ideal intersected with the subring free of
    `elim_vars`, read off a block-order Gröbner basis."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return []
    ring = gens[0].ring
    idx = _indices(ring, elim_vars)
    if not idx:
        result = list(buchberger(gens).generators)
    else:
        basis = buchberger(gens, MonomialOrder.block(idx))
        result = [g for g in basis.generators if not any(m[i] for m in g.terms for i in idx)]
    if shrink and idx:
        target = PolyRing(v for i, v in enumerate(ring.variables) if i not in idx)
        result = [g.embed(target) for g in result]
    return result


# -- quotient algebra of a zero-dimensional ideal --

def standard_monomials(basis: IdealBasis) -> List[Monomial]:
    """Monomials outside the leading ideal of a zero-dimensional reduced
    basis, in increasing order. They span the quotient ring, so their
    number counts the complex solutions with multiplicity."""
    if basis.is_trivial:
        return []
    if not is_zero_dimensional(basis):
        raise ValueError('Standard monomials requested for a positive-dimensional ideal')
    n = len(basis.generators[0].ring.variables)
    leading = basis.leading_monomials()
    zero = (0,) * n
    seen = {zero}
    frontier = [zero]
    while frontier:
        grown = list()
        for m in frontier:
            for i in range(n):
                step = m[:i] + (m[i] + 1,) + m[i + 1:]
                if step in seen or any(_divides(lm, step) for lm in leading):
                    continue
                seen.add(step)
                grown.append(step)
        frontier = grown
    return sorted(seen, key=basis.order.key)


class _Span:
    """Row echelon form of the vectors inserted so far, each row carrying
    its expression in the original vectors."""

    def __init__(self):
        self.rows: List[Tuple[int, List[Fraction], Dict[int, Fraction]]] = list()

    def express(self, v: List[Fraction]) -> Tuple[List[Fraction], Dict[int, Fraction]]:
        """Split v as residual + sum(combo[j] * v_j)."""
        v = list(v)
        combo: Dict[int, Fraction] = dict()
        for pivot, row, row_combo in self.rows:
            x = v[pivot]
            if not x:
                continue
            for k, c in enumerate(row):
                if c:
                    v[k] -= x * c
            for j, c in row_combo.items():
                combo[j] = combo.get(j, Fraction(0)) + x * c
        return v, combo

    def insert(self, residual: List[Fraction], combo: Dict[int, Fraction], index: int) -> None:
        pivot = next(k for k, c in enumerate(residual) if c)
        scale = residual[pivot]
        row = [c / scale for c in residual]
        row_combo = {j: -c / scale for j, c in combo.items()}
        row_combo[index] = Fraction(1) / scale
        self.rows.append((pivot, row, row_combo))


class _Quotient:
    """Coordinates of normal forms on the standard monomials of a
    zero-dimensional reduced basis."""

    def __init__(self, basis: IdealBasis):
        self.basis = basis
        self.ring = basis.generators[0].ring
        self.monomials = standard_monomials(basis)
        self.position = {m: k for k, m in enumerate(self.monomials)}
        self.reducers = [_Element(_integral(g)[0], basis.order, 0) for g in basis.generators]

    @property
    def dimension(self) -> int:
        return len(self.monomials)

    def normal_form(self, p: MPoly) -> MPoly:
        if p.is_zero:
            return p
        terms, scale = _integral(p)
        rem, num, den = _reduce(terms, self.reducers, self.basis.order)
        factor = Fraction(den, num) / scale
        return MPoly._raw(self.ring, {m: c * factor for m, c in rem.items()})

    def coordinates(self, p: MPoly) -> List[Fraction]:
        v = [Fraction(0)] * self.dimension
        for m, c in p.terms.items():
            v[self.position[m]] = c
        return v

    def power_span(self, f: MPoly) -> Tuple[_Span, List[Fraction]]:
        """Echelon span of 1, f, f^2, ... modulo the ideal, grown until the
        first linear dependency, and the monic minimal polynomial of f that
        this dependency gives (dense, constant term first)."""
        span = _Span()
        power = self.normal_form(self.ring.one())
        k = 0
        while True:
            residual, combo = span.express(self.coordinates(power))
            if not any(residual):
                return span, [-combo.get(j, Fraction(0)) for j in range(k)] + [Fraction(1)]
            span.insert(residual, combo, k)
            power = self.normal_form(f * power)
            k += 1


@lru_cache(_CACHE_SIZE)
def _quotient_ring(basis: IdealBasis) -> _Quotient:
    return _Quotient(basis)


def minimal_polynomial(basis: IdealBasis, f: MPoly, variable: str = 'u') -> MPoly:
    """Monic generator of {p : p(f) in the ideal}, for a zero-dimensional
    reduced basis, as a polynomial in `variable`. Its roots are the values
    of f at the complex solutions."""
    ring = PolyRing([variable])
    if basis.is_trivial:
        return ring.one()
    _, dense = _quotient_ring(basis).power_span(f)
    return MPoly.from_dense(ring, 0, dense)


def univariate_eliminant(gens: Sequence[MPoly], target: Union[int, str]) -> Union[MPoly, SolveStatus]:
    """Monic generator of the ideal intersected with Q[target], returned in
    a one-variable ring; `SolveStatus.ZERO` when that intersection is {0}."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return SolveStatus.ZERO
    ring = gens[0].ring
    t = ring.index(target)
    base = buchberger(gens)
    if is_zero_dimensional(base):
        return minimal_polynomial(base, ring.gen(t), ring.variables[t])

    others = [i for i in range(len(ring.variables)) if i != t]
    order = MonomialOrder.block(others) if others else MonomialOrder.grevlex()
    basis = buchberger(gens, order)
    uni = PolyRing([ring.variables[t]])
    for g in reversed(basis.generators):
        if not any(m[i] for m in g.terms for i in others):
            return g.embed(uni)
    return SolveStatus.ZERO


def value_eliminant(basis: IdealBasis, h: MPoly, variable: str) -> Union[MPoly, SolveStatus]:
    """Monic generator of the values h takes on the variety of `basis`,
    i.e. of (⟨basis⟩ + ⟨variable - h⟩) intersected with Q[variable]."""
    if is_zero_dimensional(basis):
        return minimal_polynomial(basis, h, variable)
    ring = h.ring
    tau = fresh_variable(ring, variable)
    ext = ring.extended([tau])
    polys = [g.embed(ext) for g in basis.generators] + [ext.gen(tau) - h.embed(ext)]
    p = univariate_eliminant(polys, tau)
    if p is SolveStatus.ZERO:
        return p
    return p.relabel(PolyRing([variable]))


def saturate(gens: Sequence[MPoly], g: MPoly) -> List[MPoly]:
    """Generators of the saturation of ⟨gens⟩ by g, using an auxiliary
    variable z and the relation 1 - z*g."""
    ring = g.ring
    if g.is_zero:
        return [ring.one()]
    if g.is_constant:
        return [f for f in gens if not f.is_zero]
    z = fresh_variable(ring, 'ζ')
    ext = ring.extended([z])
    polys = [f.embed(ext) for f in gens if not f.is_zero]
    polys.append(ext.one() - ext.gen(z) * g.embed(ext))
    return [p.embed(ring) for p in eliminate(polys, [z])]


def radical_generators(basis: IdealBasis) -> List[MPoly]:
    """Generators of the radical of a zero-dimensional ideal: the basis plus
    the squarefree part of every univariate eliminant."""
    gens = list(basis.generators)
    ring = gens[0].ring
    extra = list()
    for i, name in enumerate(ring.variables):
        p = univariate_eliminant(gens, i)
        if p is SolveStatus.ZERO:
            raise ValueError('Radical requested for a positive-dimensional ideal')
        _, dense = p.to_dense()
        sf = dense_squarefree(dense)
        if len(sf) < len(dense):
            extra.append(MPoly.from_dense(ring, i, sf))
    return gens + extra


class ShapeSolution(pydantic.BaseModel):
    """Rational parametrization of a finite complex variety.

    Every point is (g_1(u), ..., g_n(u)) for a root u of `eliminant`; the
    separating form maps the point back to u.
    """
    model_config = pydantic.ConfigDict(arbitrary_types_allowed=True, frozen=True)

    separating_form: MPoly
    eliminant: MPoly
    coordinate_params: Dict[str, MPoly]

    @property
    def degree(self) -> int:
        return max(int(self.eliminant.degree()), 0)

    @property
    def is_empty(self) -> bool:
        return self.eliminant.is_constant


def _form_bound(attempt: int) -> int:
    # 3, 9, 27, ... capped by the configured coefficient bound
    return 3 ** (attempt + 1)


def shape_position_solve(gens: Sequence[MPoly], rng: RandomSource) -> Union[ShapeSolution, SolveStatus]:
    """Parametrize the complex solutions of a zero-dimensional system by a
    random separating linear form.

    The radical is taken first, so its quotient ring has one dimension per
    solution. A form is separating exactly when its minimal polynomial has
    that degree; every coordinate is then a polynomial in the form modulo
    the ideal. Forms are drawn with small coefficients first.

    Returns `SolveStatus.NOT_ZERO_DIM` for positive-dimensional ideals and
    `SolveStatus.RETRY_EXHAUSTED` when no drawn form was separating.
    """
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return SolveStatus.NOT_ZERO_DIM
    ring = gens[0].ring
    n = len(ring.variables)
    u = fresh_variable(ring, 'υ')
    uring = PolyRing([u])

    base = buchberger(gens)
    if base.is_trivial:
        return ShapeSolution(
            separating_form=ring.zero(),
            eliminant=uring.one(),
            coordinate_params={name: uring.zero() for name in ring.variables},
        )
    if not is_zero_dimensional(base):
        return SolveStatus.NOT_ZERO_DIM

    quotient = _quotient_ring(buchberger(radical_generators(base)))
    count = quotient.dimension
    coordinates = [quotient.coordinates(quotient.normal_form(ring.gen(i))) for i in range(n)]
    for attempt in range(rng.retry_budget):
        form = ring.linear_form(rng.vector(n, nonzero=True, bound=_form_bound(attempt)))
        span, dense = quotient.power_span(form)
        if len(dense) - 1 < count:
            logger.debug('Form %s is not separating (attempt %s)', form, attempt + 1)
            continue

        params = dict()
        for name, v in zip(ring.variables, coordinates):
            _, combo = span.express(v)
            params[name] = MPoly.from_dense(uring, 0, [combo.get(j, Fraction(0)) for j in range(count)])
        rng.note_degree(count)
        return ShapeSolution(
            separating_form=form,
            eliminant=MPoly.from_dense(uring, 0, dense),
            coordinate_params=params,
        )
    return SolveStatus.RETRY_EXHAUSTED
