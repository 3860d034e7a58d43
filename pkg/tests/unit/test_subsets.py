import numpy as np
import pytest
from fbpyutils_mixing.chain.generators import generate_complete_graph_walk, generate_cycle_walk
from fbpyutils_mixing.errors import EnumerationCapError
from fbpyutils_mixing.flows.subsets import (
    SubsetMask,
    all_subset_measures,
    check_enumerable,
    exchangeable_representatives,
    is_exchangeable,
    iter_mask_chunks,
    membership_matrix,
    plan_enumeration,
)


@pytest.fixture
def cycle3():
    return generate_cycle_walk(3, 0.5)


def test_subset_mask_from_states(cycle3):
    mask = SubsetMask.from_states(cycle3, [0, 2])
    assert mask.bits == 5
    assert mask.measure == pytest.approx(2 / 3)
    assert mask.states == (0, 2)
    assert len(mask) == 2
    assert str(mask) == "{0,2}"
    assert mask.is_proper


def test_subset_mask_complement(cycle3):
    complement = SubsetMask.from_bits(cycle3, 5).complement()
    assert complement.bits == 2
    assert complement.measure == pytest.approx(1 / 3)
    assert complement.members.tolist() == [False, True, False]


def test_subset_mask_out_of_range(cycle3):
    with pytest.raises(ValueError, match="does not describe"):
        SubsetMask.from_bits(cycle3, 8)


def test_membership_matrix():
    assert membership_matrix(3, [1, 6]).tolist() == [[True, False, False], [False, True, True]]


def test_iter_mask_chunks_covers_proper_subsets():
    chunks = [c.tolist() for c in iter_mask_chunks(3, chunk_size=4)]
    assert chunks == [[1, 2, 3, 4], [5, 6]]


def test_all_subset_measures_indexed_by_mask():
    measures = all_subset_measures(np.array([0.5, 0.25, 0.25]))
    assert measures.tolist() == [0.0, 0.5, 0.25, 0.75, 0.25, 0.75, 0.5, 1.0]


def test_is_exchangeable():
    assert is_exchangeable(generate_complete_graph_walk(5))
    assert not is_exchangeable(generate_cycle_walk(5, 0.5))


def test_plan_enumeration_uses_representatives_for_exchangeable_chains():
    chunks = list(plan_enumeration(generate_complete_graph_walk(30), cap=4))
    assert len(chunks) == 1
    assert chunks[0].tolist() == exchangeable_representatives(30).tolist()


def test_check_enumerable_cap():
    with pytest.raises(EnumerationCapError, match="limited to 4 states"):
        check_enumerable(generate_cycle_walk(5, 0.5), cap=4)
    check_enumerable(generate_cycle_walk(5, 0.5), cap=5)
