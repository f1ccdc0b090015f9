import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from transversal.core import BipartiteFamily  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def families(draw, n_min=2, n_max=4, s_min=1, s_max=8, density=None):
    """Arbitrary well-formed families (no degree conditions)."""
    n = draw(st.integers(n_min, n_max))
    s = draw(st.integers(s_min, s_max))
    all_edges = [(j, k) for j in range(1, n + 1) for k in range(1, n + 1)]
    graphs = []
    for _ in range(s):
        if density is None:
            graphs.append(draw(st.sets(st.sampled_from(all_edges))))
        else:
            graphs.append([e for e in all_edges if draw(st.floats(0, 1)) < density])
    return BipartiteFamily.from_edge_sets(n, graphs)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.lines():
            terminalreporter.write_line(line)
