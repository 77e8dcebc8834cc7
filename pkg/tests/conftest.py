import pytest

from distrank.blackboard import Blackboard
from distrank.config import DistRankSettings


@pytest.fixture
def settings():
    return DistRankSettings(q1_degree=None, max_concurrency=4)


@pytest.fixture
def exact_board():
    def make(m: int):
        return Blackboard(m)
    return make
