import pytest
from hypothesis import settings

from cechspanier.corpus import corpus

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ws():
    return corpus()


def refined(K, verts):
    """Vertex list of a base path after one subdivision: insert the edge
    barycenters between consecutive base vertices."""
    from cechspanier.complex import barycenter_name
    out = [verts[0]]
    for a, b in zip(verts, verts[1:]):
        if a != b:
            out.append(barycenter_name(sorted((a, b))))
        out.append(b)
    return out


# criterion number -> PASS/FAIL line, filled by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
