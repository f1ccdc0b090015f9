import pytest
from hypothesis import given

from conftest import families
from transversal import rbf
from transversal.constructions import complete_family, hexagon_family

HEXAGON_TEXT = """rainbow-family 1
n 3
graphs 1
graph 1
p1 q1
p1 q3
p2 q1
p2 q2
p3 q2
p3 q3
end
"""


def test_serialize_layout():
    fam = hexagon_family()
    single = type(fam).from_edge_sets(3, [fam.graphs[0]])
    assert rbf.serialize(single) == HEXAGON_TEXT


@given(families(n_max=5, s_min=0, s_max=6))
def test_round_trip(fam):
    text = rbf.serialize(fam)
    assert text.isascii() and "\r" not in text and " \n" not in text
    assert rbf.parse(text) == fam


def test_digest_is_frozen():
    assert rbf.digest(hexagon_family()) == (
        "1b3b8be3c3efb5383916ee633b7c617638c563e947a8efcc6d3467c0919aec57")


@pytest.mark.parametrize("text, line, column", [
    ("rainbow-family 2\n", 1, 1),
    ("rainbow-family 1\nn 0\n", 2, 3),
    ("rainbow-family 1\nn 2\ngraphs 1\ngraph 1\np1 q1\n", 6, 1),  # truncated
    ("rainbow-family 1\nn 2\ngraphs 1\ngraph 1\np1 q3\nend\n", 5, 5),
    ("rainbow-family 1\nn 2\ngraphs 1\ngraph 1\np2 q1\np1 q1\nend\n", 6, 1),
    ("rainbow-family 1\nn 2\ngraphs 1\ngraph 1\np1 q1 \nend\n", 5, 6),
    ("rainbow-family 1\nn 2\ngraphs 0\n\n", 4, 1),
    ("rainbow-family 1\r\nn 2\n", 1, 17),
    ("rainbow-family 1\nn 2\ngraphs 0", 3, 9),
])
def test_parse_errors_carry_positions(text, line, column):
    with pytest.raises(rbf.RbfError) as info:
        rbf.parse(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_files(tmp_path):
    fam = complete_family(2, 4)
    path = tmp_path / "c.rbf"
    rbf.write_family(fam, path)
    assert rbf.read_family(path) == fam
    path.write_bytes(b"rainbow-family 1\nn \xff\n")
    with pytest.raises(rbf.RbfError) as info:
        rbf.read_family(path)
    assert (info.value.line, info.value.column) == (2, 3)
