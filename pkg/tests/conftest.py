import json

import pytest

from heckemap import fixture_path, load_fixture
from heckemap.perm import parse_cycles
from heckemap.ring import get_ring, parse_ring_element
from heckemap.symbol import Cusp


@pytest.fixture(scope="session")
def expected():
    return json.loads(fixture_path("expected.json").read_text())


def corpus_names():
    return sorted(p.name[:-4] for p in fixture_path("corpus").iterdir() if p.name.endswith(".hfs"))


def C(q, text):
    """Cusp from text such as ``L/2``, ``0`` or ``-inf``."""
    R = get_ring(q)
    if text in ("inf", "-inf"):
        return Cusp(R(1 if text == "inf" else -1), R.zero)
    num, _, den = text.partition("/")
    return Cusp(parse_ring_element(num, R), parse_ring_element(den or "1", R))


def literal_perm(text, n_plain, n_barred=None):
    """Parse cycle notation over darts 1..n_plain and 1b..kb as one 0-based set."""
    n_barred = n_plain if n_barred is None else n_barred
    labels = {str(i): i - 1 for i in range(1, n_plain + 1)}
    labels.update({f"{i}b": n_plain + i - 1 for i in range(1, n_barred + 1)})
    return parse_cycles(text, n_plain + n_barred, labels)


@pytest.fixture
def sym():
    return load_fixture


# ---- acceptance reporting ----------------------------------------------------
# test_acceptance records one line per criterion; the lines are echoed in the
# terminal summary so they land in captured pytest output without -s.

ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
