"""
Pytest Configuration and Fixtures
==================================

Shared fixtures for all test modules.
"""

import os
from collections.abc import Iterator

import numpy as np
import pytest

# Set test environment: serial scans, no stray .env overrides
os.environ["IBPLANE_WORKERS"] = "1"
os.environ.setdefault("IBPLANE_LOG_LEVEL", "WARNING")

from ibplane.config import reset_config  # noqa: E402
from ibplane.core import JointXY, joint_from_function  # noqa: E402
from ibplane.solvers import SolverConfig  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_config() -> Iterator[None]:
    """Every test sees settings read from its own environment."""
    reset_config()
    yield
    reset_config()


@pytest.fixture
def uniform4() -> JointXY:
    """Four equiprobable inputs, each its own class: H(Y) = ln 4."""
    return joint_from_function([0, 1, 2, 3], [0.25] * 4)


@pytest.fixture
def uniform2() -> JointXY:
    """Two equiprobable inputs, each its own class: H(Y) = ln 2."""
    return joint_from_function([0, 1], [0.5, 0.5])


@pytest.fixture
def ten_class() -> JointXY:
    """Ten equiprobable classes, one input each."""
    return joint_from_function(list(range(10)), [0.1] * 10)


@pytest.fixture
def noisy() -> JointXY:
    """A joint whose second row is split between two classes."""
    return JointXY.from_matrix(np.array([[0.5, 0.0], [0.25, 0.25]]))


@pytest.fixture
def independent() -> JointXY:
    """X and Y independent, I(X;Y) = 0."""
    return JointXY.from_matrix(np.full((2, 2), 0.25))


@pytest.fixture
def fast_cfg() -> SolverConfig:
    """Few restarts, default tolerances."""
    return SolverConfig(restarts=4, seed=12345)
