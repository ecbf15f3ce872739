import pathlib

import pytest

from mwg import parse_dimacs, parse_game, parse_knapsack

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture(scope="session")
def fig1():
    return parse_game(fixture_text("fig1.mwg"))


@pytest.fixture(scope="session")
def fig2():
    return parse_game(fixture_text("fig2.mwg"))


@pytest.fixture(scope="session")
def clause1():
    return parse_dimacs(fixture_text("clause1.cnf"))


@pytest.fixture(scope="session")
def unsat8():
    return parse_dimacs(fixture_text("unsat8.cnf"))


@pytest.fixture(scope="session")
def knap2():
    return parse_knapsack(fixture_text("knap2.kp"))
