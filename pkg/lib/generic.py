"""Seeded source of generic choices.

Every random decision of a run (perturbations, linear forms, centers of
distance functions, separating forms) is drawn from a `RandomSource`, so a
fixed seed reproduces the whole run.
"""
import random
from fractions import Fraction
from typing import List

import pydantic

from utils import get_config

__all__ = (
    'RngConfig',
    'RandomSource',
    'random_generic_vector',
)


def _config_int(option: str, fallback: int) -> int:
    return get_config().getint('Dimension', option, fallback=fallback)


class RngConfig(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    seed: int = 0
    coeff_bound: int = pydantic.Field(default_factory=lambda: _config_int('CoeffBound', 99))
    retry_budget: int = pydantic.Field(default_factory=lambda: _config_int('RetryBudget', 5))

    @pydantic.field_validator('seed')
    @classmethod
    def validate_seed(cls, v):
        if not -2**63 <= v < 2**64:
            raise ValueError('seed must fit in 64 bits')
        return v

    @pydantic.field_validator('coeff_bound', 'retry_budget')
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError('must be a positive integer')
        return v


class RandomSource:
    """A reproducible stream of generic choices.

    Besides drawing numbers it remembers the largest eliminant degree seen
    and the genericity retries spent by the computation that owns it, which
    the recursion reports per depth.
    """

    def __init__(self, config: RngConfig = None, seed: int = None):
        self.config = config or RngConfig()
        self.random = random.Random(self.config.seed if seed is None else seed)
        self.max_degree = 0
        self.retries = 0

    @property
    def retry_budget(self) -> int:
        return self.config.retry_budget

    def integer(self, nonzero: bool = False, bound: int = None) -> int:
        bound = min(bound, self.config.coeff_bound) if bound else self.config.coeff_bound
        while True:
            v = self.random.randint(-bound, bound)
            if v or not nonzero:
                return v

    def vector(self, count: int, nonzero: bool = False, bound: int = None) -> List[Fraction]:
        if count < 1:
            raise ValueError('count must be at least 1')
        return [Fraction(self.integer(nonzero, bound)) for _ in range(count)]

    def spawn(self) -> 'RandomSource':
        """Independent child stream, derived deterministically from this one."""
        return RandomSource(self.config, seed=self.random.getrandbits(64))

    def note_degree(self, degree) -> None:
        if degree > self.max_degree:
            self.max_degree = int(degree)

    def note_retry(self) -> None:
        self.retries += 1


def random_generic_vector(count: int, nonzero: bool, rng: RandomSource) -> List[Fraction]:
    """Integers uniform in [-coeff_bound, coeff_bound], re-drawn per
    component when `nonzero` is requested."""
    return rng.vector(count, nonzero)
