"""Real root isolation for univariate rational polynomials.

Roots are isolated with Sturm sequences and exact rational bisection, and
sample points are picked in every connected component of the complement
of the root set.
"""
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import pydantic

from lib.exceptions import RootOnEndpointError
from lib.polyring import MPoly

__all__ = (
    'Dense',
    'IsolatingInterval',
    'SamplePlan',
    'squarefree_part',
    'sturm_sequence',
    'sturm_count',
    'cauchy_bound',
    'isolate_real_roots',
    'refine_interval',
    'sample_points',
)

# Coefficients from degree 0 upwards, no trailing zeros.
Dense = List[Fraction]


def dense_trim(a: Dense) -> Dense:
    while a and not a[-1]:
        a.pop()
    return a

def dense_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Dense:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return dense_trim(out)

def dense_scale(a: Sequence[Fraction], c: Fraction) -> Dense:
    if not c:
        return []
    return [v * c for v in a]

def dense_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> Dense:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return dense_trim(out)

def dense_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> Tuple[Dense, Dense]:
    if not b:
        raise ZeroDivisionError('Polynomial division by zero')
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(rem) - 1 < db:
        return [], dense_trim(rem)
    quot = [Fraction(0)] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        c = c / lead
        quot[k - db] = c
        for j in range(db + 1):
            rem[k - db + j] -= c * b[j]
    return dense_trim(quot), dense_trim(rem[:db])

def dense_rem(a: Sequence[Fraction], b: Sequence[Fraction]) -> Dense:
    return dense_divmod(a, b)[1]

def dense_monic(a: Sequence[Fraction]) -> Dense:
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]

def dense_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Dense:
    a, b = dense_trim(list(a)), dense_trim(list(b))
    while b:
        a, b = b, dense_monic(dense_rem(a, b))
    return dense_monic(a)

def dense_derivative(a: Sequence[Fraction]) -> Dense:
    return dense_trim([c * k for k, c in enumerate(a)][1:])

def dense_eval(a: Sequence[Fraction], x: Fraction) -> Fraction:
    value = Fraction(0)
    for c in reversed(a):
        value = value * x + c
    return value

def dense_squarefree(a: Sequence[Fraction]) -> Dense:
    a = dense_trim(list(a))
    if len(a) <= 1:
        return dense_monic(a)
    g = dense_gcd(a, dense_derivative(a))
    return dense_monic(dense_divmod(a, g)[0])


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


class IsolatingInterval(pydantic.BaseModel):
    """Closed rational interval holding exactly one real root.

    `exact` is set when the root is a known rational; it then lies in
    [lo, hi] as well.
    """
    model_config = pydantic.ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lo: Fraction
    hi: Fraction
    exact: Optional[Fraction] = None

    @pydantic.model_validator(mode='after')
    def validate_bounds(self):
        if self.lo > self.hi:
            raise ValueError(f"Interval bounds out of order: [{self.lo}, {self.hi}]")
        if self.exact is not None and not self.lo <= self.exact <= self.hi:
            raise ValueError(f"Exact root {self.exact} lies outside [{self.lo}, {self.hi}]")
        return self

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self):
        if self.exact is not None:
            return str(self.exact)
        return f"[{self.lo}, {self.hi}]"


class SamplePlan(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(arbitrary_types_allowed=True, frozen=True)

    roots: Tuple[IsolatingInterval, ...]
    samples: Tuple[Fraction, ...]


def squarefree_part(u: MPoly) -> MPoly:
    """Return u / gcd(u, u'), made monic."""
    if u.is_zero:
        raise ValueError('The zero polynomial has no squarefree part')
    var, dense = u.to_dense()
    return MPoly.from_dense(u.ring, var, dense_squarefree(dense))


def sturm_sequence(dense: Sequence[Fraction]) -> List[Dense]:
    seq = [dense_trim(list(dense))]
    if len(seq[0]) <= 1:
        return seq
    seq.append(dense_derivative(seq[0]))
    while True:
        r = dense_rem(seq[-2], seq[-1])
        if not r:
            break
        # Positive rescaling keeps every sign variation intact.
        lead = abs(r[-1])
        seq.append([-c / lead for c in r])
    return seq

def _variations(seq: Sequence[Dense], x: Fraction) -> int:
    count = 0
    last = 0
    for p in seq:
        s = _sign(dense_eval(p, x))
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def sturm_count(u: MPoly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of u in the open interval (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError(f"Empty interval ({lo}, {hi})")
    _, dense = u.to_dense()
    if not dense:
        raise ValueError('The zero polynomial has infinitely many roots')
    for end in (lo, hi):
        if not dense_eval(dense, end):
            raise RootOnEndpointError(f"{end} is a root of {u}")
    seq = sturm_sequence(dense)
    return _variations(seq, lo) - _variations(seq, hi)


def cauchy_bound(dense: Sequence[Fraction]) -> Fraction:
    """Every complex root has absolute value strictly below this bound."""
    lead = abs(dense[-1])
    return 1 + max((abs(c) / lead for c in dense[:-1]), default=Fraction(0))


class _Isolator:
    def __init__(self, dense: Dense):
        self.dense = dense
        self.seq = sturm_sequence(dense)
        self._variations: Dict[Fraction, int] = dict()

    def value(self, x: Fraction) -> Fraction:
        return dense_eval(self.dense, x)

    def variations(self, x: Fraction) -> int:
        v = self._variations.get(x)
        if v is None:
            v = self._variations[x] = _variations(self.seq, x)
        return v

    def count(self, lo: Fraction, hi: Fraction) -> int:
        return self.variations(lo) - self.variations(hi)

    def around_exact(self, m: Fraction, lo: Fraction, hi: Fraction) -> IsolatingInterval:
        # Nudge by (hi - lo) / 2^k, k minimal, until the box around the
        # rational root m is isolating with non-root endpoints.
        delta = (hi - lo) / 4
        while True:
            a, b = m - delta, m + delta
            if self.value(a) and self.value(b) and self.count(a, b) == 1:
                return IsolatingInterval(lo=a, hi=b, exact=m)
            delta /= 2

    def refine(self, iv: IsolatingInterval) -> IsolatingInterval:
        if iv.exact is not None:
            delta = iv.width / 4
            return IsolatingInterval(lo=iv.exact - delta, hi=iv.exact + delta, exact=iv.exact)
        m = (iv.lo + iv.hi) / 2
        vm = self.value(m)
        if not vm:
            return self.around_exact(m, iv.lo, iv.hi)
        if _sign(self.value(iv.lo)) != _sign(vm):
            return IsolatingInterval(lo=iv.lo, hi=m)
        return IsolatingInterval(lo=m, hi=iv.hi)

    def isolate(self) -> List[IsolatingInterval]:
        bound = cauchy_bound(self.dense)
        found = list()
        stack = [(-bound, bound)]
        while stack:
            a, b = stack.pop()
            count = self.count(a, b)
            if count == 0:
                continue
            if count == 1:
                found.append(IsolatingInterval(lo=a, hi=b))
                continue
            m = (a + b) / 2
            if not self.value(m):
                iv = self.around_exact(m, a, b)
                found.append(iv)
                stack.append((iv.hi, b))
                stack.append((a, iv.lo))
            else:
                stack.append((m, b))
                stack.append((a, m))

        found.sort(key=lambda iv: iv.lo)
        # Neighbours produced by bisection share an endpoint; shrink them
        # until they are strictly apart.
        for k in range(len(found) - 1):
            while found[k].hi >= found[k + 1].lo:
                found[k] = self.refine(found[k])
                found[k + 1] = self.refine(found[k + 1])
        return found


def isolate_real_roots(u: MPoly) -> List[IsolatingInterval]:
    """Isolate the distinct real roots of u, sorted and pairwise disjoint."""
    if u.is_zero:
        raise ValueError('The zero polynomial has infinitely many roots')
    _, dense = u.to_dense()
    dense = dense_squarefree(dense)
    if len(dense) <= 1:
        return []
    return _Isolator(dense).isolate()


def refine_interval(u: MPoly, iv: IsolatingInterval) -> IsolatingInterval:
    """Halve an isolating interval of u while keeping its root inside."""
    _, dense = u.to_dense()
    return _Isolator(dense_squarefree(dense)).refine(iv)


def sample_points(roots: Sequence[IsolatingInterval]) -> SamplePlan:
    """Pick one rational point in every connected component of the real
    line minus the isolated roots."""
    roots = tuple(roots)
    if not roots:
        return SamplePlan(roots=(), samples=(Fraction(0),))
    for left, right in zip(roots, roots[1:]):
        if not left.hi < right.lo:
            raise ValueError(f"Isolating intervals {left} and {right} are not sorted and disjoint")

    samples = [roots[0].lo - 1]
    for left, right in zip(roots, roots[1:]):
        samples.append((left.hi + right.lo) / 2)
    samples.append(roots[-1].hi + 1)
    return SamplePlan(roots=roots, samples=tuple(samples))
