import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hypothesis import settings  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("default")

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def reference():
    """The reference instance run end to end once per session."""
    from g3isogeny.pipeline import RunConfig, RunContext
    return RunContext(RunConfig.reference()).run()


@pytest.fixture(scope="session")
def ref_data():
    from g3isogeny.example_data import build
    return build()


@pytest.fixture(scope="session")
def f11():
    """y^2 = x^7 + x + 3 over F_11 with all reduced divisors."""
    import oracles
    from g3isogeny.field import ExtField
    from g3isogeny.hypercurve import HyperCurve
    K = ExtField(11, 1, [0, 1])
    C = HyperCurve(K, [K(c) for c in oracles.F])
    divs = oracles.reduced_divisors()
    return K, C, divs


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
