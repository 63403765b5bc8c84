import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rimcirc.circuit import Builder
from rimcirc.rim import make_rim

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("stress", parent=settings.get_profile("repo"), max_examples=1000)
settings.load_profile(os.environ.get("RIMCIRC_HYPOTHESIS", "repo"))

# Hypothesis drives a seeded Random so the repo's own generators can be reused.
rngs = st.integers(min_value=0, max_value=2**32 - 1).map(random.Random)


def T(rows, k=2):
    """Shorthand: table from a dict, 'eps' allowed for the empty word."""
    return make_rim({("" if x == "eps" else x): ("" if y == "eps" else y) for x, y in rows.items()}, k)


def single_gate(name):
    b = Builder()
    ins = [b.input() for _ in range(1 if name in ("not", "fork") else 2)]
    v = getattr(b, name if name in ("fork", "zeta1") else name + "_")(*ins)
    b.output(v)
    if name == "fork":
        b.output(v)
    return b.build()


@pytest.fixture
def not_circuit():
    return single_gate("not")
