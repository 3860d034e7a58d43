import pytest
from fbpyutils_mixing.chain.generators import generate_cycle_walk
from fbpyutils_mixing.errors import ChainParseError, PathFamilyError
from fbpyutils_mixing.paths.family import (
    PathFamily,
    build_bfs_paths,
    dump_paths,
    load_paths,
    remove_cycles,
    validate_family,
)

CYCLE3_PATHS = """
# forward paths around the lazy triangle
path 0 1 0 1
path 0 2 0 1 2
path 1 0 1 2 0
path 1 2 1 2
path 2 0 2 0
path 2 1 2 0 1
"""


@pytest.fixture
def cycle3():
    return generate_cycle_walk(3, 0.5)


def test_build_bfs_paths_follow_the_cycle():
    family = build_bfs_paths(generate_cycle_walk(5, 0.0))
    assert family.path(0, 3) == (0, 1, 2, 3)
    assert family.path(4, 1) == (4, 0, 1)
    assert family.path(2, 2) == ()
    assert family.is_cycle_free()
    assert family.source == "bfs"


def test_build_bfs_paths_parallel_matches_serial():
    chain = generate_cycle_walk(6, 0.25)
    serial = build_bfs_paths(chain)
    parallel = build_bfs_paths(chain, parallel=True, max_workers=2)
    assert dict(serial.items()) == dict(parallel.items())


def test_family_edges_and_lengths(cycle3):
    family = build_bfs_paths(cycle3)
    assert family.edges(0, 2) == [(0, 1), (1, 2)]
    assert family.length(0, 2) == 2
    assert family.length(1, 1) == 0
    assert family.used_edges() == [(0, 1), (1, 2), (2, 0)]


def test_remove_cycles():
    family = PathFamily(n=4, paths={(0, 3): (0, 1, 2, 1, 3), (1, 2): (1, 2)})
    cleaned = remove_cycles(family)
    assert cleaned.path(0, 3) == (0, 1, 3)
    assert cleaned.path(1, 2) == (1, 2)
    assert cleaned.is_cycle_free()


def test_remove_cycles_keeps_cycle_free_family(cycle3):
    family = build_bfs_paths(cycle3)
    assert remove_cycles(family) is family


def test_load_paths(cycle3):
    family = load_paths(CYCLE3_PATHS, cycle3)
    assert family.path(1, 0) == (1, 2, 0)
    assert family.source == "file"


def test_dump_paths_reloads(cycle3):
    family = build_bfs_paths(cycle3)
    assert dict(load_paths(dump_paths(family), cycle3).items()) == dict(family.items())


def test_load_paths_missing_pairs(cycle3):
    with pytest.raises(PathFamilyError, match="misses 5 ordered pairs") as info:
        load_paths("path 0 1 0 1", cycle3)
    assert (0, 2) in info.value.pairs


def test_load_paths_zero_probability_edge(cycle3):
    text = CYCLE3_PATHS.replace("path 0 2 0 1 2", "path 0 2 0 2")
    with pytest.raises(PathFamilyError, match="zero-probability") as info:
        load_paths(text, cycle3)
    assert info.value.pairs == [(0, 2)]


@pytest.mark.parametrize(
    "text, message",
    [
        ("path 0 1", "expected 'path"),
        ("path 0 1 0 x", "integers"),
        ("path 0 0 0 0", "to itself"),
        ("path 0 1 0 1\npath 0 1 0 1", "line 2: duplicate path"),
    ],
)
def test_load_paths_parse_errors(cycle3, text, message):
    with pytest.raises(ChainParseError, match=message):
        load_paths(text, cycle3)


def test_validate_family_size_mismatch(cycle3):
    with pytest.raises(PathFamilyError, match="covers 4 states"):
        validate_family(cycle3, PathFamily(n=4, paths={}))
