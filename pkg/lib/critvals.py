"""Limits of critical values on a perturbed set.

The real set V = {f_1 = ... = f_s = 0} is thickened to
S_e = {|f_i| <= e_i}. A stratum of S_e picks the constraints that are
active (the index set I) and on which side (the signs). Critical points of
a function h on every stratum, followed to the limit as the perturbation
shrinks, give finitely many values Z; outside Z the fibers of h on V have
constant dimension.
"""
import logging
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import pydantic

from lib.exceptions import GenericityExhaustedError
from lib.formulations import LagrangeFormulation, get_formulation, jacobian, maximal_minors
from lib.generic import RandomSource
from lib.groebner import (IdealBasis, ShapeSolution, SolveStatus, buchberger, is_trivial,
    is_zero_dimensional, shape_position_solve, value_eliminant)
from lib.polyring import MPoly, PolyRing
from lib.univariate import IsolatingInterval, dense_gcd, dense_mul, dense_squarefree, isolate_real_roots
from utils import get_config, lru_cache

__all__ = (
    'SigmaMode',
    'StratumSpec',
    'Perturbation',
    'CriticalValueSet',
    'GenericityFailure',
    'iter_strata',
    'check_whitney_stratification',
    'critical_points_ideal',
    'limit_critical_point_ideal',
    'limit_critical_values',
    'real_emptiness',
    'distance_function',
)

logger = logging.getLogger(__name__)

_CACHE_SIZE = get_config().getint('Groebner', 'CacheSize', fallback=512)

# Name of the level variable in returned eliminants.
LEVEL_VARIABLE = 't'


class SigmaMode(Enum):
    full = 'full'
    ignore = 'ignore'


class StratumSpec(pydantic.BaseModel):
    """Active constraints I (0-based, increasing) and their signs."""
    model_config = pydantic.ConfigDict(frozen=True)

    index_set: Tuple[int, ...] = ()
    signs: Tuple[int, ...] = ()

    @pydantic.model_validator(mode='after')
    def validate_stratum(self):
        if list(self.index_set) != sorted(set(self.index_set)):
            raise ValueError('index_set must be strictly increasing')
        if any(i < 0 for i in self.index_set):
            raise ValueError('indices must be non-negative')
        if len(self.signs) != len(self.index_set):
            raise ValueError('one sign is needed per active constraint')
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError('signs must be +1 or -1')
        return self

    def __str__(self):
        if not self.index_set:
            return '{}'
        return '{%s}' % ', '.join(f"{'+' if s > 0 else '-'}{i + 1}" for i, s in zip(self.index_set, self.signs))


class Perturbation(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: Tuple[Fraction, ...]

    @pydantic.field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v):
        v = tuple(Fraction(x) for x in v)
        if not v:
            raise ValueError('a perturbation needs at least one component')
        if any(not x for x in v):
            raise ValueError('every component of a perturbation must be nonzero')
        return v

    def __len__(self):
        return len(self.values)

    def __str__(self):
        return '(%s)' % ', '.join(map(str, self.values))


class CriticalValueSet(pydantic.BaseModel):
    """The eliminant p(t) of the limit critical values and its real roots Z."""
    model_config = pydantic.ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eliminant: MPoly
    roots: Tuple[IsolatingInterval, ...]

    @property
    def degree(self) -> int:
        return max(int(self.eliminant.degree()), 0)

    def __len__(self):
        return len(self.roots)


class GenericityFailure(pydantic.BaseModel):
    """A random choice hit a non-generic situation; the caller redraws."""
    model_config = pydantic.ConfigDict(frozen=True)

    reason: str
    stratum: Optional[StratumSpec] = None

    def __str__(self):
        if self.stratum is None:
            return self.reason
        return f"{self.reason} (stratum {self.stratum})"


def iter_strata(s: int, max_size: int, sigma_mode: SigmaMode = SigmaMode.full, *,
                with_empty: bool = True, both_signs: bool = False) -> Iterator[StratumSpec]:
    """Enumerate strata by increasing size of the index set.

    With `both_signs` every sign map is produced. Otherwise σ and -σ give the
    same critical-locus ideal and only the one positive on the smallest
    index is kept. `SigmaMode.ignore` fixes every sign to +1.
    """
    for size in range(0 if with_empty else 1, min(s, max_size) + 1):
        for index_set in combinations(range(s), size):
            if sigma_mode is SigmaMode.ignore:
                yield StratumSpec(index_set=index_set, signs=(1,) * size)
                continue
            if both_signs or not size:
                choices = product((1, -1), repeat=size)
            else:
                choices = ((1,) + rest for rest in product((1, -1), repeat=size - 1))
            for signs in choices:
                yield StratumSpec(index_set=index_set, signs=tuple(signs))


def check_whitney_stratification(fs: Sequence[MPoly], e: Perturbation) -> bool:
    """Whether every face of the hypercube pulls back transversally.

    For each nonempty I with |I| <= n + 1 and every sign map, the level set
    f_i = σ_i e_i (i in I) must avoid the points where Jac(f_I) drops rank.
    """
    fs = list(fs)
    if len(e) != len(fs):
        raise ValueError(f"Perturbation has {len(e)} components for {len(fs)} polynomials")
    n = len(fs[0].ring.variables)
    for stratum in iter_strata(len(fs), n + 1, with_empty=False, both_signs=True):
        active = [fs[i] for i in stratum.index_set]
        gens = [f - sign * e.values[i] for f, sign, i in zip(active, stratum.signs, stratum.index_set)]
        if len(active) <= n:
            gens.extend(maximal_minors(jacobian(active)))
        if not is_trivial(gens):
            logger.debug('Stratum %s of %s is not transverse', stratum, e)
            return False
    return True


def critical_points_ideal(fs: Sequence[MPoly], h: MPoly, stratum: StratumSpec, e: Perturbation) -> List[MPoly]:
    """The multiplier ideal J′ of a stratum, in the ring extended by one
    variable λ_i per active constraint (nothing eliminated yet)."""
    gens, _ = LagrangeFormulation(fs, e).multiplier_ideal(h, stratum)
    return gens


@lru_cache(_CACHE_SIZE)
def limit_critical_point_ideal(fs: Tuple[MPoly, ...], h: MPoly, stratum: StratumSpec, e: Perturbation,
                               formulation: str) -> IdealBasis:
    """Grevlex basis of the limit critical points of h on one stratum: the
    closure of the critical locus plus the equations of V."""
    formulation_cls = get_formulation(formulation)
    locus = formulation_cls(fs, e).critical_locus(h, stratum)
    basis = buchberger(list(locus) + list(fs))
    logger.debug('Stratum %s: %s basis elements (%s)', stratum, len(basis.generators), formulation)
    return basis


def _default_formulation() -> str:
    return get_config().get('Dimension', 'Formulation', fallback='minors').lower()

def _default_sigma() -> SigmaMode:
    return SigmaMode(get_config().get('Dimension', 'Sigma', fallback='ignore').lower())


def limit_critical_values(fs: Sequence[MPoly], h: MPoly, e: Perturbation, mode: str = None,
                          sigma_mode: SigmaMode = None, rng: RandomSource = None) -> Union[CriticalValueSet, GenericityFailure]:
    """Compute the finite set Z of limits of critical values of h.

    Parameters
    ----------
    fs : Sequence[MPoly]
        Equations of V
    h : MPoly
        A function proper on the perturbed set
    e : Perturbation
        Nonzero perturbation, one component per equation
    mode : str
        Formulation id, "minors" or "lambda"; defaults to the config
    sigma_mode : SigmaMode
        Whether sign maps are enumerated; defaults to the config
    rng : RandomSource
        Only used to record the eliminant degree

    Returns
    -------
    Union[CriticalValueSet, GenericityFailure]
        The eliminant and its isolated real roots, or a genericity failure
        when some stratum leaves the level unconstrained
    """
    fs = tuple(fs)
    mode = mode or _default_formulation()
    sigma_mode = sigma_mode or _default_sigma()
    ring = fs[0].ring
    n = len(ring.variables)
    product_dense = [Fraction(1)]
    for stratum in iter_strata(len(fs), n, sigma_mode):
        basis = limit_critical_point_ideal(fs, h, stratum, e, mode)
        if basis.is_trivial:
            continue
        p = value_eliminant(basis, h, LEVEL_VARIABLE)
        if p is SolveStatus.ZERO:
            logger.info('Level is unconstrained on stratum %s', stratum)
            return GenericityFailure(reason='elimination ideal is zero', stratum=stratum)
        _, dense = p.to_dense()
        logger.debug('Stratum %s: eliminant of degree %s', stratum, len(dense) - 1)
        product_dense = _dense_mul_sqf(product_dense, dense)

    out = PolyRing([LEVEL_VARIABLE])
    eliminant = MPoly.from_dense(out, 0, dense_squarefree(product_dense))
    degree = max(int(eliminant.degree()), 0)
    if len(fs) == 1:
        bound = int(fs[0].degree()) ** n
        assert degree <= bound, f"Eliminant degree {degree} exceeds the bound {bound}"
    if rng is not None:
        rng.note_degree(degree)
    return CriticalValueSet(eliminant=eliminant, roots=tuple(isolate_real_roots(eliminant)))


def _dense_mul_sqf(acc: List[Fraction], dense: List[Fraction]) -> List[Fraction]:
    return dense_squarefree(dense_mul(acc, dense_squarefree(dense)))


def distance_function(ring: PolyRing, center: Sequence[Fraction]) -> MPoly:
    """Squared Euclidean distance to `center`."""
    h = ring.zero()
    for x, c in zip(ring.gens(), center):
        h = h + (x - c) ** 2
    return h


class _Attempt(Enum):
    EMPTY = 'empty'
    NONEMPTY = 'nonempty'
    RETRY = 'retry'


def _has_real_solution(gens: Sequence[MPoly], rng: RandomSource) -> _Attempt:
    solution = shape_position_solve(gens, rng)
    if isinstance(solution, SolveStatus):
        logger.info('Limit critical points could not be solved: %s', solution.value)
        return _Attempt.RETRY
    return _Attempt.NONEMPTY if _real_points(solution) else _Attempt.EMPTY


def _real_points(solution: ShapeSolution) -> bool:
    if solution.is_empty:
        return False
    return bool(isolate_real_roots(solution.eliminant))


def _univariate_emptiness(fs: Sequence[MPoly]) -> bool:
    g: List[Fraction] = []
    for f in fs:
        _, dense = f.to_dense(0)
        g = dense_gcd(g, dense) if g else dense
    if len(g) <= 1:
        return bool(g)
    return not isolate_real_roots(MPoly.from_dense(fs[0].ring, 0, g))


def real_emptiness(fs: Sequence[MPoly], rng: RandomSource, *, formulation: str = None,
                   center: Sequence[Fraction] = None, e: Perturbation = None) -> bool:
    """Decide whether V has no real point.

    V is nonempty exactly when the squared distance to a random center has
    a real limit critical point. `center` and `e` fix the first draw so a
    caller can reuse the stratum ideals for its own critical values.
    """
    fs = tuple(f for f in fs if not f.is_zero)
    if not fs:
        return False
    ring = fs[0].ring
    n = len(ring.variables)
    if n == 1:
        return _univariate_emptiness(fs)

    base = buchberger(fs)
    if base.is_trivial:
        return True
    if is_zero_dimensional(base):
        solution = shape_position_solve(base.generators, rng)
        if isinstance(solution, SolveStatus):
            raise GenericityExhaustedError('separating form for a zero-dimensional system', rng.retry_budget)
        return not _real_points(solution)

    formulation = formulation or _default_formulation()
    for attempt in range(rng.retry_budget):
        if attempt:
            rng.note_retry()
        if center is None or attempt:
            center = rng.vector(n)
        if e is None or attempt:
            e = Perturbation(values=rng.vector(len(fs), nonzero=True))
        h = distance_function(ring, center)

        outcome = _Attempt.EMPTY
        for stratum in iter_strata(len(fs), n, SigmaMode.full):
            basis = limit_critical_point_ideal(fs, h, stratum, e, formulation)
            if basis.is_trivial:
                continue
            outcome = _has_real_solution(basis.generators, rng)
            if outcome is not _Attempt.EMPTY:
                break
        if outcome is not _Attempt.RETRY:
            logger.debug('Emptiness decided on attempt %s: %s', attempt + 1, outcome.value)
            return outcome is _Attempt.EMPTY
        logger.warning('Emptiness test hit a non-generic choice, redrawing (attempt %s)', attempt + 1)

    raise GenericityExhaustedError('emptiness test', rng.retry_budget)
