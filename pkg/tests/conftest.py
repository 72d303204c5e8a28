import os
import random

import pytest


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=int(os.environ.get("CHARGEHUNT_SEED", "20240611")),
                     help="seed for randomized property tests")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


def random_string(rng, max_len=6, anchor_range=(0, 0)):
    from chargehunt.pauli import PauliString

    length = rng.randint(1, max_len)
    while True:
        x = rng.getrandbits(length)
        z = rng.getrandbits(length)
        s = x | z
        if s & 1 and (s >> (length - 1)) & 1:
            return PauliString(rng.randint(*anchor_range), length, x, z)


_ACCEPTANCE = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Usage: ``with acceptance(n, "summary") as extra: ...``; anything put in
    ``extra`` is appended to the line.
    """
    from contextlib import contextmanager

    @contextmanager
    def record(number, summary):
        extra = []
        try:
            yield extra
        except BaseException:
            line = f"FAIL criterion {number}: {summary}" + (f" [{'; '.join(extra)}]" if extra else "")
            _ACCEPTANCE.append(line)
            print(line)
            raise
        line = f"PASS criterion {number}: {summary}" + (f" [{'; '.join(extra)}]" if extra else "")
        _ACCEPTANCE.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
