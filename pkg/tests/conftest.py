import importlib.resources

import pytest

from torslab.algebra import load_algebra


def bundled_text(name):
    return (
        importlib.resources.files("torslab")
        .joinpath("data/%s.alg" % name)
        .read_text()
    )


def bundled(name, p=None):
    text = bundled_text(name)
    if p is not None:
        text = "\n".join(
            "field p=%d" % p if line.strip().startswith("field") else line
            for line in text.splitlines()
        )
    return load_algebra(text)


@pytest.fixture(scope="session")
def a2():
    return bundled("a2")


@pytest.fixture(scope="session")
def kronecker():
    return bundled("kronecker")


@pytest.fixture(scope="session")
def kronecker_p3():
    return bundled("kronecker", p=3)


@pytest.fixture(scope="session")
def loop():
    return bundled("loop")


@pytest.fixture(scope="session")
def kxk():
    return bundled("kxk")


SQUARE = """
field p=3
vertices 1 2 3 4
arrow a: 1 -> 2
arrow b: 1 -> 3
arrow c: 2 -> 4
arrow d: 3 -> 4
relation 1*a.c - 1*b.d
"""


@pytest.fixture(scope="session")
def square():
    return load_algebra(SQUARE)
