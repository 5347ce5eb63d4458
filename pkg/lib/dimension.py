"""Recursive dimension drivers.

Every node of the recursion computes the finite set Z of special values of
a function h on V, picks one sample level per connected component of the
real line minus Z and recurses on the fibers at those levels:

    dim V = 1 + max over samples t of dim (V ∩ {h = t})

unless V is empty, in which case the dimension is -1.
"""
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pydantic

from lib.critvals import (CriticalValueSet, GenericityFailure, Perturbation, SigmaMode, check_whitney_stratification,
    distance_function, limit_critical_values, real_emptiness)
from lib.exceptions import GenericityExhaustedError
from lib.generic import RandomSource, RngConfig, random_generic_vector
from lib.polyring import MPoly, PolyRing
from lib.univariate import sample_points
from utils import get_config

__all__ = (
    'DimensionOptions',
    'DepthStats',
    'RecursionTrace',
    'DimResult',
    'dim_proper',
    'dimension',
    'dim_las_vegas',
    'random_generic_vector',
    'RngConfig',
    'RandomSource',
)

logger = logging.getLogger(__name__)


class DimensionOptions(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    formulation: str = pydantic.Field(
        default_factory=lambda: get_config().get('Dimension', 'Formulation', fallback='minors').lower())
    sigma_mode: SigmaMode = pydantic.Field(
        default_factory=lambda: SigmaMode(get_config().get('Dimension', 'Sigma', fallback='ignore').lower()))
    short_circuit: bool = pydantic.Field(
        default_factory=lambda: get_config().getboolean('Dimension', 'ShortCircuit', fallback=True))
    parallel: bool = False
    workers: int = pydantic.Field(
        default_factory=lambda: get_config().getint('Dimension', 'Workers', fallback=0))

    @pydantic.field_validator('formulation')
    @classmethod
    def validate_formulation(cls, v):
        from lib.formulations import get_formulation
        get_formulation(v)
        return v

    @pydantic.field_validator('workers')
    @classmethod
    def validate_workers(cls, v):
        if v < 0:
            raise ValueError('workers must be non-negative')
        return v

    @property
    def worker_count(self) -> int:
        return self.workers or os.cpu_count() or 1


class DepthStats(pydantic.BaseModel):
    fiber_count: int = 0
    max_eliminant_degree: int = 0
    retries: int = 0
    skipped: int = 0

    def merge(self, other: 'DepthStats'):
        self.fiber_count = max(self.fiber_count, other.fiber_count)
        self.max_eliminant_degree = max(self.max_eliminant_degree, other.max_eliminant_degree)
        self.retries += other.retries
        self.skipped += other.skipped


class RecursionTrace(pydantic.BaseModel):
    """Statistics per recursion depth. Fiber counts and degrees are the
    maximum over the nodes of a depth, retries and skipped fibers the sum."""
    depths: List[DepthStats] = pydantic.Field(default_factory=list)
    millis: int = 0
    # wall clock per phase, summed over all nodes
    phase_seconds: Dict[str, float] = pydantic.Field(default_factory=dict)

    def at(self, depth: int) -> DepthStats:
        while len(self.depths) <= depth:
            self.depths.append(DepthStats())
        return self.depths[depth]

    def record(self, depth: int, fiber_count: int = 0, degree: int = 0, retries: int = 0, skipped: int = 0):
        self.at(depth).merge(DepthStats(
            fiber_count=fiber_count,
            max_eliminant_degree=degree,
            retries=retries,
            skipped=skipped,
        ))

    def merge(self, other: 'RecursionTrace'):
        for depth, stats in enumerate(other.depths):
            self.at(depth).merge(stats)
        for phase, seconds in other.phase_seconds.items():
            self.add_time(phase, seconds)

    def add_time(self, phase: str, seconds: float):
        self.phase_seconds[phase] = self.phase_seconds.get(phase, 0.0) + seconds

    @property
    def phase_millis(self) -> Dict[str, int]:
        return {phase: int(seconds * 1000) for phase, seconds in sorted(self.phase_seconds.items())}

    @property
    def fibers_per_depth(self) -> List[int]:
        # Nodes that computed critical values form a prefix of the depths.
        result = list()
        for stats in self.depths:
            if not stats.fiber_count:
                break
            result.append(stats.fiber_count)
        return result

    @property
    def max_eliminant_degree(self) -> int:
        return max((stats.max_eliminant_degree for stats in self.depths), default=0)

    @property
    def retries(self) -> int:
        return sum(stats.retries for stats in self.depths)


class DimResult(pydantic.BaseModel):
    dim: int
    trace: RecursionTrace = pydantic.Field(default_factory=RecursionTrace)

    @pydantic.field_validator('dim')
    @classmethod
    def validate_dim(cls, v):
        if v < -1:
            raise ValueError('dimension is at least -1')
        return v


# A fiber: its equations (in the ring the recursion continues in), or None
# when the equations vanish identically and the fiber is the whole space.
Fiber = Optional[Tuple[MPoly, ...]]
NodeFunc = Callable[[Sequence[MPoly], RandomSource, int, DimensionOptions], DimResult]


def _normalize(fs: Sequence[MPoly]) -> Tuple[MPoly, ...]:
    fs = tuple(fs)
    if not fs:
        raise ValueError('At least one polynomial is required')
    rings = {f.ring for f in fs}
    if len(rings) > 1:
        raise ValueError('All polynomials must live in the same ring')
    return tuple(f for f in fs if not f.is_zero)


def _draw_perturbation(count: int, rng: RandomSource) -> Perturbation:
    return Perturbation(values=random_generic_vector(count, True, rng))


def _timed(trace: RecursionTrace, phase: str, func: Callable[..., Any], *args, **kwargs) -> Any:
    started = time.perf_counter()
    try:
        return func(*args, **kwargs)
    finally:
        trace.add_time(phase, time.perf_counter() - started)


def _fiber_worker(args) -> DimResult:
    node, fiber, ring, rng, depth, options = args
    return _visit_fiber(node, fiber, ring, rng, depth, options)


def _visit_fiber(node: NodeFunc, fiber: Fiber, ring: PolyRing, rng: RandomSource, depth: int,
                 options: DimensionOptions) -> DimResult:
    if fiber is None:
        return DimResult(dim=len(ring.variables))
    return node(fiber, rng, depth, options)


def _descend(node: NodeFunc, fibers: List[Fiber], ring: PolyRing, rng: RandomSource, depth: int,
             options: DimensionOptions, bound: int, trace: RecursionTrace) -> int:
    """Recurse on every fiber and return the largest fiber dimension.

    Child streams are spawned for all fibers up front so the choices made
    inside a fiber do not depend on how many fibers were visited before.
    """
    streams = [rng.spawn() for _ in fibers]
    best = -1
    if options.parallel and depth == 0 and len(fibers) > 1:
        jobs = [(node, fiber, ring, child, depth + 1, options) for fiber, child in zip(fibers, streams)]
        with ProcessPoolExecutor(max_workers=options.worker_count) as executor:
            for result in executor.map(_fiber_worker, jobs):
                trace.merge(result.trace)
                best = max(best, result.dim)
        return best

    for k, (fiber, child) in enumerate(zip(fibers, streams)):
        result = _visit_fiber(node, fiber, ring, child, depth + 1, options)
        trace.merge(result.trace)
        best = max(best, result.dim)
        if options.short_circuit and best >= bound:
            skipped = len(fibers) - k - 1
            if skipped:
                logger.info('Depth %s: dimension bound %s reached, skipping %s fibers', depth, bound, skipped)
                trace.record(depth, skipped=skipped)
            break
    return best


def _fiber_equations(polys) -> Fiber:
    polys = tuple(p for p in polys if not p.is_zero)
    return polys or None


def _proper_node(fs: Sequence[MPoly], rng: RandomSource, depth: int, options: DimensionOptions) -> DimResult:
    fs = _normalize(fs)
    ring = fs[0].ring
    n = len(ring.variables)
    trace = RecursionTrace()

    if _timed(trace, 'emptiness', real_emptiness, fs, rng, formulation=options.formulation):
        trace.record(depth, degree=rng.max_degree, retries=rng.retries)
        return DimResult(dim=-1, trace=trace)
    if n == 1:
        trace.record(depth, degree=rng.max_degree, retries=rng.retries)
        return DimResult(dim=0, trace=trace)

    # h = x_n - q with q generic in x_1..x_{n-1}
    xn = ring.gen(n - 1)
    for attempt in range(rng.retry_budget):
        e = _draw_perturbation(len(fs), rng)
        coeffs = random_generic_vector(n - 1, True, rng)
        q = ring.linear_form(coeffs + [0])
        Z = _timed(trace, 'critical values', limit_critical_values, fs, xn - q, e, options.formulation, options.sigma_mode, rng)
        if isinstance(Z, CriticalValueSet):
            break
        logger.warning('Depth %s: %s, redrawing (attempt %s)', depth, Z, attempt + 1)
        rng.note_retry()
    else:
        raise GenericityExhaustedError(f"critical values at depth {depth}", rng.retry_budget)

    samples = sample_points(Z.roots).samples
    logger.info('Depth %s: %s critical values, %s fibers', depth, len(Z), len(samples))
    trace.record(depth, fiber_count=len(samples), degree=rng.max_degree, retries=rng.retries)

    sub = ring.without(n - 1)
    fibers = list()
    for t in samples:
        shift = sub.linear_form(coeffs, t)
        fibers.append(_fiber_equations(f.substitute(n - 1, shift, shrink=True) for f in fs))

    best = _descend(_proper_node, fibers, sub, rng, depth, options, n - 1, trace)
    return DimResult(dim=best + 1, trace=trace)


def _general_node(fs: Sequence[MPoly], rng: RandomSource, depth: int, options: DimensionOptions) -> DimResult:
    fs = _normalize(fs)
    ring = fs[0].ring
    n = len(ring.variables)
    trace = RecursionTrace()

    center = random_generic_vector(n, False, rng)
    e = _draw_perturbation(len(fs), rng)
    if _timed(trace, 'emptiness', real_emptiness, fs, rng, formulation=options.formulation, center=center, e=e):
        trace.record(depth, degree=rng.max_degree, retries=rng.retries)
        return DimResult(dim=-1, trace=trace)

    for attempt in range(rng.retry_budget):
        if attempt:
            center = random_generic_vector(n, False, rng)
            e = _draw_perturbation(len(fs), rng)
        h = distance_function(ring, center)
        Z = _timed(trace, 'critical values', limit_critical_values, fs, h, e, options.formulation, options.sigma_mode, rng)
        if isinstance(Z, CriticalValueSet) and not len(Z):
            # The minimum of the distance on a nonempty V is a limit value.
            Z = GenericityFailure(reason='no critical value on a nonempty set')
        if isinstance(Z, CriticalValueSet):
            break
        logger.warning('Depth %s: %s, redrawing (attempt %s)', depth, Z, attempt + 1)
        rng.note_retry()
    else:
        raise GenericityExhaustedError(f"critical values at depth {depth}", rng.retry_budget)

    samples = sample_points(Z.roots).samples
    logger.info('Depth %s: %s critical values, %s fibers', depth, len(Z), len(samples))
    trace.record(depth, fiber_count=len(samples), degree=rng.max_degree, retries=rng.retries)

    fibers = list()
    for t in samples:
        if t < 0:
            # Spheres of negative squared radius.
            fibers.append(())
        else:
            fibers.append(fs + (h - t,))

    best = _descend(_general_fiber, fibers, ring, rng, depth, options, n - 1, trace)
    return DimResult(dim=best + 1, trace=trace)


def _general_fiber(fs: Sequence[MPoly], rng: RandomSource, depth: int, options: DimensionOptions) -> DimResult:
    if not fs:
        return DimResult(dim=-1)
    return _proper_node(fs, rng, depth, options)


def _las_vegas_node(fs: Sequence[MPoly], rng: RandomSource, depth: int, options: DimensionOptions) -> DimResult:
    fs = _normalize(fs)
    ring = fs[0].ring
    n = len(ring.variables)
    trace = RecursionTrace()

    if _timed(trace, 'emptiness', real_emptiness, fs, rng, formulation=options.formulation):
        trace.record(depth, degree=rng.max_degree, retries=rng.retries)
        return DimResult(dim=-1, trace=trace)
    if n == 1:
        trace.record(depth, degree=rng.max_degree, retries=rng.retries)
        return DimResult(dim=0, trace=trace)

    for attempt in range(rng.retry_budget):
        e = _draw_perturbation(len(fs), rng)
        if not _timed(trace, 'stratification', check_whitney_stratification, fs, e):
            logger.warning('Depth %s: perturbation %s is not generic, redrawing (attempt %s)', depth, e, attempt + 1)
            rng.note_retry()
            continue
        values = list()
        for i in range(n):
            Z = _timed(trace, 'critical values', limit_critical_values, fs, ring.gen(i), e, options.formulation, options.sigma_mode, rng)
            if isinstance(Z, GenericityFailure):
                logger.warning('Depth %s: %s along %s, redrawing (attempt %s)', depth, Z, ring.variables[i], attempt + 1)
                rng.note_retry()
                break
            values.append(Z)
        else:
            break
    else:
        raise GenericityExhaustedError(f"certified perturbation at depth {depth}", rng.retry_budget)

    sub_rings = [ring.without(i) for i in range(n)]
    jobs = list()
    for i, Z in enumerate(values):
        for t in sample_points(Z.roots).samples:
            jobs.append((i, _fiber_equations(f.substitute(i, t, shrink=True) for f in fs)))
    logger.info('Depth %s: %s fibers over %s coordinates', depth, len(jobs), n)
    trace.record(depth, fiber_count=len(jobs), degree=rng.max_degree, retries=rng.retries)

    # Every coordinate fiber lives in a ring with n - 1 variables; only the
    # names differ, which matters for a fiber that vanishes identically.
    fibers = [fiber for _, fiber in jobs]
    best = _descend(_las_vegas_node, fibers, sub_rings[0], rng, depth, options, n - 1, trace)
    return DimResult(dim=best + 1, trace=trace)


def _drive(node: NodeFunc, fs: Sequence[MPoly], rng: Optional[RandomSource], options: Optional[DimensionOptions],
           name: str) -> DimResult:
    started = time.perf_counter()
    rng = rng or RandomSource()
    options = options or DimensionOptions()
    fs = tuple(fs)
    nonzero = _normalize(fs)
    if not nonzero:
        return DimResult(dim=len(fs[0].ring.variables))
    logger.info('%s: %s equations in %s variables, seed %s', name, len(nonzero), len(nonzero[0].ring.variables), rng.config.seed)
    result = node(nonzero, rng, 0, options)
    result.trace.millis = int((time.perf_counter() - started) * 1000)
    return result


def dim_proper(fs: Sequence[MPoly], rng: RandomSource = None, options: DimensionOptions = None) -> DimResult:
    """Dimension of V assuming (f_1, ..., f_s) is a proper map.

    Fibers are slices x_n = q(x_1, ..., x_{n-1}) + t for a generic linear
    form q.
    """
    return _drive(_proper_node, fs, rng, options, 'dim_proper')


def dimension(fs: Sequence[MPoly], rng: RandomSource = None, options: DimensionOptions = None) -> DimResult:
    """Dimension of V without any assumption on the input.

    Fibers are the intersections of V with spheres around a random center;
    each fiber system is bounded and handled by `dim_proper`.
    """
    return _drive(_general_node, fs, rng, options, 'dimension')


def dim_las_vegas(fs: Sequence[MPoly], rng: RandomSource = None, options: DimensionOptions = None) -> DimResult:
    """Dimension of V for a proper map, with a certified perturbation.

    Every coordinate serves as the slicing function, so the answer does
    not depend on a generic linear form; only the perturbation is random
    and it is checked before use.
    """
    return _drive(_las_vegas_node, fs, rng, options, 'dim_las_vegas')
