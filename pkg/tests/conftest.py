from dataclasses import dataclass, field

import pytest

from mproots.numerics import PrecisionContext
from mproots.problems import Problem


@pytest.fixture(scope="session")
def ctx100():
    return PrecisionContext(100)


@pytest.fixture(scope="session")
def ctx200():
    return PrecisionContext(200)


@dataclass
class CountingProblem:
    """Problem wrapper counting f and f' evaluations."""

    inner: Problem
    f_calls: int = 0
    df_calls: int = 0
    id: str = field(init=False)

    def __post_init__(self):
        self.id = self.inner.id

    def f(self, x):
        self.f_calls += 1
        return self.inner.f(x)

    def df(self, x):
        self.df_calls += 1
        return self.inner.df(x)

    def root(self, ctx):
        return self.inner.root(ctx)

    @property
    def x0_default(self):
        return self.inner.x0_default

    def reset(self):
        self.f_calls = 0
        self.df_calls = 0
