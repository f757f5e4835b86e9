import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cqsl2.qalgebra import algebra
from cqsl2.scalar import rational_q, root_of_unity

settings.register_profile(
    "repo", max_examples=60, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ROOTS = (3, 5, 7)
RATIONALS = ("2", "3/2", "-2", "1/3")


def all_contexts():
    return [root_of_unity(r) for r in ROOTS] + [rational_q(q) for q in RATIONALS]


@pytest.fixture(params=ROOTS, ids=lambda r: f"r{r}")
def root_ctx(request):
    return root_of_unity(request.param)


@pytest.fixture(params=[3, 5, 7, "2", "3/2"], ids=lambda v: f"r{v}" if isinstance(v, int) else f"q{v}")
def any_ctx(request):
    v = request.param
    return root_of_unity(v) if isinstance(v, int) else rational_q(v)


@pytest.fixture
def r3():
    return root_of_unity(3)


def scalars(ctx, bound=5):
    """Hypothesis strategy for field elements with small integer coefficients."""
    coeff = st.integers(-bound, bound)
    return st.lists(coeff, min_size=ctx.degree, max_size=ctx.degree).map(ctx.from_coeffs)


def random_element(alg, rng: random.Random, terms=3, bound=3):
    ctx = alg.ctx
    out = alg.zero()
    for _ in range(terms):
        idx = rng.randrange(alg.dim)
        coeff = ctx.from_coeffs([rng.randint(-bound, bound) for _ in range(ctx.degree)])
        out = out + alg.monomial(*alg.exponents(idx), coeff)
    return out


def rng(seed="cqsl2"):
    return random.Random(seed)


__all__ = ["all_contexts", "scalars", "random_element", "rng", "algebra"]
