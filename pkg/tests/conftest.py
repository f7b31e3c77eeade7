import random

import pytest
from hypothesis import HealthCheck, settings

# First call into a compiled kernel pays the on-disk cache load; without
# this, hypothesis deadlines and timing-sensitive tests get flaky.
settings.register_profile(
    "engine",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("engine")


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    from etaprime import Natural, run_test

    run_test("g", 2, "eta")
    divmod(Natural(10) ** 40, Natural(3) ** 20)


@pytest.fixture
def rng():
    return random.Random(0x5EED)
