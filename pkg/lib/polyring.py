"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero `Fraction`
coefficients, tied to a `PolyRing` that names the variables. Values are
treated as immutable once built, so they can be hashed, cached and sent to
worker processes.
"""
import operator
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from lib.exceptions import RingMismatchError, VariableError

__all__ = (
    'Monomial',
    'Scalar',
    'ZERO_DEGREE',
    'PolyRing',
    'MPoly',
    'OrderKind',
    'Ordering',
    'MonomialOrder',
    'ArithOp',
    'poly_arithmetic',
    'monomial_compare',
)

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]

# Degree of the zero polynomial. Kept apart from -1, which stands for the
# dimension of the empty set elsewhere.
ZERO_DEGREE = float('-inf')


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.add, a, b))


class PolyRing:
    """An ordered list of variable names."""
    __slots__ = ('variables', '_index')

    def __init__(self, variables: Iterable[str]):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise VariableError('Duplicate variable names in ring: %s' % ' '.join(variables))
        self.variables = variables
        self._index = {name: i for i, name in enumerate(variables)}

    def __getstate__(self):
        return self.variables

    def __setstate__(self, state):
        self.variables = state
        self._index = {name: i for i, name in enumerate(state)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __len__(self):
        return len(self.variables)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return f"PolyRing({', '.join(self.variables)})"

    def index(self, var: Union[int, str]) -> int:
        """Resolve a variable given by position or by name."""
        if isinstance(var, str):
            try:
                return self._index[var]
            except KeyError:
                raise VariableError(f"Variable {var!r} is not part of {self!r}") from None
        if not 0 <= var < len(self.variables):
            raise VariableError(f"Variable index {var} out of range for {self!r}")
        return var

    def zero(self) -> 'MPoly':
        return MPoly._raw(self, {})

    def one(self) -> 'MPoly':
        return self.constant(1)

    def constant(self, value: Scalar) -> 'MPoly':
        if not value:
            return self.zero()
        return MPoly._raw(self, {(0,) * len(self.variables): Fraction(value)})

    def gen(self, var: Union[int, str]) -> 'MPoly':
        i = self.index(var)
        mono = tuple(1 if j == i else 0 for j in range(len(self.variables)))
        return MPoly._raw(self, {mono: Fraction(1)})

    def gens(self) -> Tuple['MPoly', ...]:
        return tuple(self.gen(i) for i in range(len(self.variables)))

    def linear_form(self, coeffs: Sequence[Scalar], constant: Scalar = 0) -> 'MPoly':
        """Return sum(c_i * x_i) + constant."""
        if len(coeffs) != len(self.variables):
            raise VariableError(f"Expected {len(self.variables)} coefficients, got {len(coeffs)}")
        terms = {}
        n = len(self.variables)
        for i, c in enumerate(coeffs):
            if c:
                terms[tuple(1 if j == i else 0 for j in range(n))] = Fraction(c)
        if constant:
            terms[(0,) * n] = Fraction(constant)
        return MPoly._raw(self, terms)

    def without(self, var: Union[int, str]) -> 'PolyRing':
        i = self.index(var)
        return PolyRing(self.variables[:i] + self.variables[i + 1:])

    def extended(self, names: Iterable[str]) -> 'PolyRing':
        return PolyRing(self.variables + tuple(names))

    def parse(self, text: str) -> 'MPoly':
        from lib.parsing import parse_polynomial
        return parse_polynomial(text, self)


def _rebuild(ring, terms):
    return MPoly._raw(ring, terms)


class MPoly:
    """A polynomial with exact rational coefficients.

    `terms` maps exponent tuples (one entry per ring variable) to nonzero
    `Fraction` coefficients. The zero polynomial has no terms.
    """
    __slots__ = ('ring', 'terms', '_hash')

    def __init__(self, ring: PolyRing, terms: Optional[Mapping[Sequence[int], Scalar]] = None):
        self.ring = ring
        clean = dict()
        if terms:
            n = len(ring.variables)
            for mono, coeff in terms.items():
                mono = tuple(mono)
                if len(mono) != n:
                    raise VariableError(f"Monomial {mono} does not fit {ring!r}")
                if coeff:
                    clean[mono] = Fraction(coeff)
        self.terms: Dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: PolyRing, terms: Dict[Monomial, Fraction]) -> 'MPoly':
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    def __reduce__(self):
        # The cached hash involves str hashing, which differs per process.
        return (_rebuild, (self.ring, self.terms))

    # -- basic properties --

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    @property
    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring.variables), Fraction(0))

    def degree(self) -> Union[int, float]:
        if not self.terms:
            return ZERO_DEGREE
        return max(sum(m) for m in self.terms)

    def used_variables(self) -> Tuple[int, ...]:
        """Indices of variables that occur with a positive exponent."""
        used = [0] * len(self.ring.variables)
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = 1
        return tuple(i for i, flag in enumerate(used) if flag)

    def involves(self, var: Union[int, str]) -> bool:
        i = self.ring.index(var)
        return any(m[i] for m in self.terms)

    # -- ordering-dependent views --

    def leading_term(self, order: 'MonomialOrder') -> Tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError('The zero polynomial has no leading term')
        mono = max(self.terms, key=order.key)
        return mono, self.terms[mono]

    def leading_monomial(self, order: 'MonomialOrder') -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: 'MonomialOrder') -> Fraction:
        return self.leading_term(order)[1]

    def sorted_terms(self, order: 'MonomialOrder') -> List[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: order.key(item[0]), reverse=True)

    def monic(self, order: 'MonomialOrder') -> 'MPoly':
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return MPoly._raw(self.ring, {m: c / lc for m, c in self.terms.items()})

    # -- arithmetic --

    def _coerce(self, other) -> 'MPoly':
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise RingMismatchError(f"Cannot combine polynomials of {self.ring!r} and {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return MPoly._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return MPoly._raw(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Monomial, Fraction] = dict()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return MPoly._raw(self.ring, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError('Exponent must be a non-negative integer')
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.constant(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution --

    def partial_derivative(self, var: Union[int, str]) -> 'MPoly':
        i = self.ring.index(var)
        terms = dict()
        for m, c in self.terms.items():
            e = m[i]
            if e:
                terms[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return MPoly._raw(self.ring, terms)

    def substitute(self, var: Union[int, str], value: Union['MPoly', Scalar], shrink: bool = False) -> 'MPoly':
        """Replace variable `var` by `value` and expand.

        `value` is a scalar, or a polynomial either in the ring without
        `var` or in this ring but free of `var`. With `shrink` the result
        lives in the ring without `var`.
        """
        i = self.ring.index(var)
        target = self.ring.without(i) if shrink else self.ring

        if isinstance(value, MPoly):
            if value.ring == self.ring:
                if value.involves(i):
                    raise VariableError(f"Cannot substitute {self.ring.variables[i]} by a polynomial involving it")
                if shrink:
                    value = value.embed(target)
            elif value.ring == self.ring.without(i):
                if not shrink:
                    value = value.embed(target)
            else:
                raise RingMismatchError(f"Substituted value lives in {value.ring!r}, expected {target!r}")
        else:
            value = target.constant(value)

        # Group terms by the exponent of the substituted variable.
        buckets: Dict[int, Dict[Monomial, Fraction]] = dict()
        for m, c in self.terms.items():
            rest = m[:i] + m[i + 1:] if shrink else m[:i] + (0,) + m[i + 1:]
            buckets.setdefault(m[i], dict())[rest] = c

        result = target.zero()
        power = target.one()
        for k in range(max(buckets, default=-1) + 1):
            if k:
                power = power * value
            if k in buckets:
                result = result + MPoly._raw(target, buckets[k]) * power
        return result

    def compose(self, images: Sequence[Union['MPoly', Scalar]]) -> 'MPoly':
        """Substitute every variable at once: x_i <- images[i]."""
        if len(images) != len(self.ring.variables):
            raise VariableError(f"Expected {len(self.ring.variables)} images, got {len(images)}")
        target = next((im.ring for im in images if isinstance(im, MPoly)), self.ring)
        images = [im if isinstance(im, MPoly) else target.constant(im) for im in images]
        for im in images:
            if im.ring != target:
                raise RingMismatchError('All images must live in the same ring')

        powers: List[List[MPoly]] = [[target.one()] for _ in images]
        def power(i, e):
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * images[i])
            return cache[e]

        result = target.zero()
        for m, c in self.terms.items():
            term = target.constant(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != len(self.ring.variables):
            raise VariableError(f"Expected a point with {len(self.ring.variables)} coordinates, got {len(point)}")
        point = [Fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            value = c
            for v, e in zip(point, m):
                if e:
                    value *= v ** e
            total += value
        return total

    # -- re-ringing --

    def embed(self, ring: PolyRing) -> 'MPoly':
        """Move into `ring`, matching variables by name. Every variable in
        use must exist in the target ring."""
        if ring == self.ring:
            return self
        mapping = []
        for i in self.used_variables():
            name = self.ring.variables[i]
            mapping.append((i, ring.index(name)))
        n = len(ring.variables)
        terms = dict()
        for m, c in self.terms.items():
            new = [0] * n
            for src, dst in mapping:
                new[dst] = m[src]
            terms[tuple(new)] = c
        return MPoly._raw(ring, terms)

    def relabel(self, ring: PolyRing) -> 'MPoly':
        """Reinterpret the same exponent tuples in a ring with other names."""
        if len(ring.variables) != len(self.ring.variables):
            raise RingMismatchError(f"Cannot relabel {self.ring!r} as {ring!r}")
        return MPoly._raw(ring, self.terms)

    # -- univariate views --

    def to_dense(self, var: Union[int, str, None] = None) -> Tuple[int, List[Fraction]]:
        """Return (variable index, coefficients from degree 0 upwards) for a
        polynomial involving at most one variable."""
        used = self.used_variables()
        if var is None:
            if len(used) > 1:
                raise VariableError(f"{self} is not univariate")
            i = used[0] if used else 0
        else:
            i = self.ring.index(var)
            if any(j != i for j in used):
                raise VariableError(f"{self} involves variables other than {self.ring.variables[i]}")
        if not self.terms:
            return i, []
        coeffs = [Fraction(0)] * (max(m[i] for m in self.terms) + 1)
        for m, c in self.terms.items():
            coeffs[m[i]] = c
        return i, coeffs

    @classmethod
    def from_dense(cls, ring: PolyRing, var: Union[int, str], coeffs: Sequence[Scalar]) -> 'MPoly':
        i = ring.index(var)
        n = len(ring.variables)
        terms = dict()
        for k, c in enumerate(coeffs):
            if c:
                terms[tuple(k if j == i else 0 for j in range(n))] = Fraction(c)
        return cls._raw(ring, terms)

    # -- printing --

    def __str__(self):
        if not self.terms:
            return '0'
        names = self.ring.variables
        out = []
        for m, c in self.sorted_terms(MonomialOrder.grevlex()):
            factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, m) if e]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = '*'.join(factors)
            else:
                body = f"{mag}*" + '*'.join(factors)
            if not out:
                out.append('-' + body if c < 0 else body)
            else:
                out.append(('- ' if c < 0 else '+ ') + body)
        return ' '.join(out)

    def __repr__(self):
        return f"MPoly({self}, ring={self.ring!r})"


class OrderKind(Enum):
    grevlex = 'grevlex'
    lex = 'lex'
    block = 'block'

class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1


class MonomialOrder:
    """A monomial order given as a sort key: m1 < m2 iff key(m1) < key(m2).

    Block orders compare the exponents of the `elim` variables first (with
    `inner`), then the remaining ones (with `outer`); any monomial that
    contains an eliminated variable exceeds every monomial that does not.
    """
    __slots__ = ('kind', 'elim', 'inner', 'outer', '_rest')

    def __init__(self, kind: OrderKind, elim: Sequence[int] = (), inner: 'MonomialOrder' = None, outer: 'MonomialOrder' = None):
        self.kind = OrderKind(kind)
        self.elim = tuple(sorted(elim))
        self.inner = inner
        self.outer = outer
        self._rest = dict()

    @classmethod
    def grevlex(cls) -> 'MonomialOrder':
        return _GREVLEX

    @classmethod
    def lex(cls) -> 'MonomialOrder':
        return _LEX

    @classmethod
    def block(cls, elim: Sequence[int], inner: 'MonomialOrder' = None, outer: 'MonomialOrder' = None) -> 'MonomialOrder':
        if not elim:
            raise ValueError('A block order needs at least one eliminated variable')
        return cls(OrderKind.block, elim, inner or _GREVLEX, outer or _GREVLEX)

    def __getstate__(self):
        return (self.kind, self.elim, self.inner, self.outer)

    def __setstate__(self, state):
        self.kind, self.elim, self.inner, self.outer = state
        self._rest = dict()

    def _split(self, m: Monomial) -> Tuple[Monomial, Monomial]:
        n = len(m)
        rest = self._rest.get(n)
        if rest is None:
            elim = set(self.elim)
            rest = self._rest[n] = tuple(i for i in range(n) if i not in elim)
        return tuple(m[i] for i in self.elim), tuple(m[i] for i in rest)

    def key(self, m: Monomial) -> tuple:
        kind = self.kind
        if kind is OrderKind.grevlex:
            return (sum(m),) + tuple(map(operator.neg, reversed(m)))
        if kind is OrderKind.lex:
            return m
        a, b = self._split(m)
        return self.inner.key(a) + self.outer.key(b)

    def neg_key(self, m: Monomial) -> tuple:
        """Key that sorts in the opposite direction, for min-heaps."""
        kind = self.kind
        if kind is OrderKind.grevlex:
            return (-sum(m),) + m[::-1]
        if kind is OrderKind.lex:
            return tuple(map(operator.neg, m))
        a, b = self._split(m)
        return self.inner.neg_key(a) + self.outer.neg_key(b)

    def compare(self, m1: Monomial, m2: Monomial) -> Ordering:
        k1, k2 = self.key(m1), self.key(m2)
        if k1 < k2:
            return Ordering.LT
        if k1 > k2:
            return Ordering.GT
        return Ordering.EQ

    def __eq__(self, other):
        if not isinstance(other, MonomialOrder):
            return NotImplemented
        return (self.kind, self.elim, self.inner, self.outer) == (other.kind, other.elim, other.inner, other.outer)

    def __hash__(self):
        return hash((self.kind, self.elim, self.inner, self.outer))

    def __repr__(self):
        if self.kind is OrderKind.block:
            return f"MonomialOrder.block({list(self.elim)}, {self.inner!r}, {self.outer!r})"
        return f"MonomialOrder.{self.kind.value}()"

_GREVLEX = MonomialOrder(OrderKind.grevlex)
_LEX = MonomialOrder(OrderKind.lex)


def monomial_compare(order: MonomialOrder, m1: Monomial, m2: Monomial) -> Ordering:
    if len(m1) != len(m2):
        raise VariableError('Monomials of different rings cannot be compared')
    return order.compare(m1, m2)


class ArithOp(Enum):
    add = 'add'
    sub = 'sub'
    mul = 'mul'

def poly_arithmetic(a: MPoly, b: MPoly, op: Union[ArithOp, str]) -> MPoly:
    if a.ring != b.ring:
        raise RingMismatchError(f"Cannot combine polynomials of {a.ring!r} and {b.ring!r}")
    op = ArithOp(op)
    if op is ArithOp.add:
        return a + b
    elif op is ArithOp.sub:
        return a - b
    return a * b
