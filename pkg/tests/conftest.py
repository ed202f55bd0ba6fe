import pytest

from genrules.poset import TypeHierarchy

VP_EDGES = [("VP_1", "VP"), ("VP_2", "VP"), ("VP_3", "VP"), ("VP_4", "VP"), ("VP_i", "VP"), ("S_i", "S")]
CLASH_EDGES = [("pronoun", "sign"), ("noun", "sign"), ("possessive", "pronoun"),
              ("count-noun", "noun"), ("her", "possessive"), ("earrings", "count-noun")]
CLASH_SIGNATURES = [("sign", "sign"), ("pronoun", "sign"), ("possessive", "noun"), ("pronoun", "count-noun")]


@pytest.fixture
def vp_hierarchy():
    return TypeHierarchy.from_edges(VP_EDGES, extra_types=["NP"])


@pytest.fixture
def clash_hierarchy():
    return TypeHierarchy.from_edges(CLASH_EDGES)


# one line per acceptance criterion, collected by test_acceptance
CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(CRITERIA):
        terminalreporter.write_line(line)
