"""Shared fixtures: external solver discovery and reusable layer partitions."""

import os
import shutil

import pytest

from redblue.cube import LayerPartition, layer_partition

_SOLVER_CANDIDATES = (
    "varisat",
    "/opt/cargo/bin/varisat",
    "cadical",
    "kissat",
    "minisat",
)


def find_solver() -> str | None:
    """Path of a usable external CDCL solver, or None."""
    env = os.environ.get("REDBLUE_SOLVER")
    if env:
        return shutil.which(env)
    for candidate in _SOLVER_CANDIDATES:
        found = shutil.which(candidate)
        if found:
            return found
    return None


@pytest.fixture(scope="session")
def solver() -> str:
    """External solver path; unit tests skip when none is installed."""
    path = find_solver()
    if path is None:
        pytest.skip("no external CDCL solver found (set REDBLUE_SOLVER)")
    return path


@pytest.fixture(scope="session")
def part1() -> LayerPartition:
    return layer_partition(1)


@pytest.fixture(scope="session")
def part2() -> LayerPartition:
    return layer_partition(2)


@pytest.fixture(scope="session")
def part3() -> LayerPartition:
    return layer_partition(3)
