import numpy as np
import pytest
from fbpyutils_mixing.chain.generators import generate_cycle_walk
from fbpyutils_mixing.chain.io import dump_chain, load_chain, load_multigraph
from fbpyutils_mixing.errors import ChainParseError, ChainValidationError


def test_load_chain_with_comments():
    text = """
    # two-state chain
    states 2
    edge 0 0 0.75   # holding
    edge 0 1 0.25
    edge 1 0 0.5
    edge 1 1 0.5
    """
    chain = load_chain(text, name="two")
    assert chain.name == "two"
    assert np.allclose(chain.pi, [2 / 3, 1 / 3])


def test_load_chain_uses_supplied_pi():
    text = "states 2\npi 0.5 0.5\nedge 0 1 1\nedge 1 0 1\n"
    assert load_chain(text).pi.tolist() == [0.5, 0.5]


def test_dump_chain_is_exact():
    chain = generate_cycle_walk(7, 1 / 3)
    text = dump_chain(chain)
    assert text.splitlines()[0] == "# cycle(n=7,alpha=0.333333)"
    loaded = load_chain(text)
    assert np.array_equal(loaded.P, chain.P)
    assert np.array_equal(loaded.pi, chain.pi)


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "empty"),
        ("edge 0 1 1", "line 1: first line must be 'states <n>'"),
        ("states x", "line 1: invalid state count"),
        ("states 2\nedge 0 1", "line 2: expected 'edge <i> <j> <p>'"),
        ("states 2\nedge 0 2 1", "line 2: edge \\(0, 2\\) outside"),
        ("states 2\nedge 0 1 1\nedge 0 1 1", "line 3: duplicate edge"),
        ("states 2\nedge 0 1 0.0\nedge 0 1 0.0", "line 3: duplicate edge \\(0, 1\\)"),
        ("states 2\nfoo 1", "line 2: unknown keyword 'foo'"),
        ("states 2\npi 1", "line 2: 'pi' needs 2 weights"),
    ],
)
def test_load_chain_parse_errors(text, message):
    with pytest.raises(ChainParseError, match=message):
        load_chain(text)


def test_load_chain_parse_error_keeps_line_number():
    with pytest.raises(ChainParseError) as info:
        load_chain("states 2\n\nedge 0 1 abc")
    assert info.value.line_number == 3


def test_load_chain_validation_error():
    with pytest.raises(ChainValidationError, match="Row 0 sums"):
        load_chain("states 2\nedge 0 1 0.5\nedge 1 0 1")


def test_load_multigraph():
    counts = load_multigraph("vertices 3\narc 0 1\narc 1 2 2\narc 0 1")
    assert counts.tolist() == [[0, 2, 0], [0, 0, 2], [0, 0, 0]]


def test_load_multigraph_invalid():
    with pytest.raises(ChainParseError, match="vertices <n>"):
        load_multigraph("arc 0 1")
    with pytest.raises(ChainParseError, match="line 2"):
        load_multigraph("vertices 2\narc 0 5")


def test_load_chain_accepts_row_sum_within_tolerance():
    text = "states 3\nedge 0 0 0.5\nedge 0 1 0.2500000005\nedge 0 2 0.25\nedge 1 2 1\nedge 2 0 1"
    chain = load_chain(text)
    assert np.allclose(chain.P.sum(axis=1), 1.0, rtol=0.0, atol=1e-15)
    assert np.max(np.abs(chain.pi @ chain.P - chain.pi)) <= 1e-12
