import random

import pytest
from flint import fmpq

from chowdilog.fields import QQ, RationalFunctionField
from chowdilog.series import TSeries

MR_PAIRS = [(2, 3), (3, 4), (3, 5), (4, 5), (4, 6), (4, 7)]


@pytest.fixture
def F():
    return RationalFunctionField(("s",))


@pytest.fixture
def s(F):
    return F.gen("s")


@pytest.fixture
def rng():
    return random.Random(1234)


def ser(dom, *cs):
    return TSeries(dom, [dom(c) if not hasattr(c, "F") else c for c in cs])


def q(a, b=1):
    return fmpq(a, b)
