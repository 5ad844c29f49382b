import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


def random_edges(rng, n, p, wmin=0.05):
    """Erdos-Renyi edge list over 0..n-1 with confidences in [wmin, 1]."""
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, float(np.round(rng.uniform(wmin, 1.0), 6))))
    return edges


def connected_edges(rng, n, p, wmin=0.05):
    """Random edges plus a random spanning path, so the graph is connected."""
    perm = rng.permutation(n)
    extra = {(min(a, b), max(a, b)) for a, b in zip(perm[:-1], perm[1:])}
    edges = {(u, v): w for u, v, w in random_edges(rng, n, p, wmin)}
    for key in extra:
        edges.setdefault(key, float(np.round(rng.uniform(wmin, 1.0), 6)))
    return [(u, v, w) for (u, v), w in sorted(edges.items())]


def as_records(edges, prefix="n"):
    return [(f"{prefix}{u}", f"{prefix}{v}", w) for u, v, w in edges]


def network_from_edges(n, edges):
    """Load with node i named n{i} at index i."""
    from seedrank.graph import load_network

    net = load_network(as_records(edges), extra_nodes=[f"n{i}" for i in range(n)])
    perm = [net.index[f"n{i}"] for i in range(n)]
    from seedrank.graph import subnetwork

    return subnetwork(net, perm)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def minimal_dir():
    return DATA / "minimal"


# --- acceptance criteria reporting -------------------------------------------

_CRITERIA: list[tuple[str, str, str]] = []


class _Criterion:
    def __init__(self, name):
        self.name = name
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            _CRITERIA.append(("PASS", self.name, self.detail))
        elif issubclass(exc_type, pytest.skip.Exception):
            _CRITERIA.append(("SKIP", self.name, str(exc)))
        else:
            _CRITERIA.append(("FAIL", self.name, f"{exc_type.__name__}: {exc}".splitlines()[0]))
        return False


@pytest.fixture
def criterion():
    """``with criterion("name") as c:`` records one pass/fail line; set ``c.detail`` for context."""
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in _CRITERIA:
        terminalreporter.write_line(f"{status}: {name}" + (f"  ({detail})" if detail else ""))
