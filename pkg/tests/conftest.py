import random

import pytest

from agt.constructions import corpus_machine, corpus_names
from agt.machine import Mealy

MACHINE_NAMES = [n for n in corpus_names() if n != "s3"]

# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def corpus():
    return {n: corpus_machine(n) for n in MACHINE_NAMES}


def random_machine(rng: random.Random, max_states: int = 4, max_letters: int = 3) -> Mealy:
    n = rng.randint(1, max_states)
    k = rng.randint(1, max_letters)
    states = [f"s{i}" for i in range(n)]
    letters = [f"x{j}" for j in range(k)]
    trans = [[rng.randrange(n) for _ in range(k)] for _ in range(n)]
    kind = rng.random()
    if kind < 0.4:
        out = [rng.sample(range(k), k) for _ in range(n)]
    else:
        out = [[rng.randrange(k) for _ in range(k)] for _ in range(n)]
    if rng.random() < 0.3:
        # make the transition columns permutations (reversible)
        cols = [rng.sample(range(n), n) for _ in range(k)]
        trans = [[cols[j][i] for j in range(k)] for i in range(n)]
    return Mealy(states, letters, trans, out)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
