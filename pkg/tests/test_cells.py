from hypothesis import given, settings
from hypothesis import strategies as st

from shadowlab.cells import components, components_floodfill


def test_single_cell():
    assert components({(3, 4)}, 16) == [{(3, 4)}]


def test_diagonal_cells_split():
    got = components({(2, 2), (3, 3)}, 16)
    assert len(got) == 2


def test_wraparound():
    got = components({(0, 5), (15, 5)}, 16)
    assert len(got) == 1


def test_ordering_by_min_index():
    got = components({(5, 5), (1, 1), (5, 6)}, 16)
    assert got[0] == {(1, 1)}
    assert got[1] == {(5, 5), (5, 6)}


cellsets = st.sets(
    st.tuples(st.integers(min_value=0, max_value=11),
              st.integers(min_value=0, max_value=11)),
    min_size=0, max_size=60)


@settings(max_examples=100)
@given(cellsets)
def test_matches_floodfill_oracle(cells):
    assert components(cells, 12) == components_floodfill(cells, 12)
