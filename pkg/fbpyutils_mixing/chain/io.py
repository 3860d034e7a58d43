"""Line-oriented chain and multigraph file formats.

Chain file::

    # comment
    states 3
    pi 0.3333333333333333 0.3333333333333333 0.3333333333333333
    edge 0 0 0.5
    edge 0 1 0.5
    ...

Multigraph file (for Eulerian walks)::

    vertices 3
    arc 0 1
    arc 1 2 2

Probabilities are written with 17 significant digits so a dump/load cycle is bit-exact.
"""
from typing import List, Tuple

import numpy as np

from fbpyutils_mixing import logger
from fbpyutils_mixing import config
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.errors import ChainParseError


def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((number, body.split()))
    return lines


def _parse_int(token: str, number: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        logger.error(f"Line {number}: invalid {what} '{token}'")
        raise ChainParseError(f"invalid {what} '{token}'", number)


def _parse_float(token: str, number: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        logger.error(f"Line {number}: invalid {what} '{token}'")
        raise ChainParseError(f"invalid {what} '{token}'", number)


def load_chain(text: str, name: str = "chain") -> MarkovChain:
    """
    Parse chain-file content into a validated MarkovChain.

    Args:
        text: File content.
        name: Label for the chain. Defaults to 'chain'.

    Returns:
        MarkovChain: The chain; pi is taken from the file when present, else computed.

    Raises:
        ChainParseError: Malformed line (the message names the line number).
        ChainValidationError: Row sums off by more than 1e-9, or pi not stationary.
        ErgodicityError: Positive transitions not strongly connected.

    Example:
        >>> chain = load_chain("states 2\\nedge 0 0 0.5\\nedge 0 1 0.5\\nedge 1 0 0.5\\nedge 1 1 0.5")
        >>> chain.pi
        array([0.5, 0.5])
    """
    lines = _content_lines(text)
    if not lines:
        logger.error("Empty chain file")
        raise ChainParseError("chain file is empty", 1)

    number, tokens = lines[0]
    if tokens[0] != "states" or len(tokens) != 2:
        logger.error(f"Line {number}: expected 'states <n>', got {tokens}")
        raise ChainParseError("first line must be 'states <n>'", number)
    n = _parse_int(tokens[1], number, "state count")
    if n < 2:
        raise ChainParseError(f"state count must be at least 2, got {n}", number)
    logger.debug(f"Parsing chain file with {n} states")

    P = np.zeros((n, n))
    pi = None
    seen = set()
    for number, tokens in lines[1:]:
        keyword = tokens[0]
        if keyword == "pi":
            if pi is not None:
                raise ChainParseError("duplicate 'pi' line", number)
            if len(tokens) != n + 1:
                raise ChainParseError(f"'pi' needs {n} weights, got {len(tokens) - 1}", number)
            pi = np.array([_parse_float(t, number, "weight") for t in tokens[1:]])
        elif keyword == "edge":
            if len(tokens) != 4:
                raise ChainParseError("expected 'edge <i> <j> <p>'", number)
            i = _parse_int(tokens[1], number, "state index")
            j = _parse_int(tokens[2], number, "state index")
            if not (0 <= i < n and 0 <= j < n):
                raise ChainParseError(f"edge ({i}, {j}) outside [0, {n - 1}]", number)
            p = _parse_float(tokens[3], number, "probability")
            if (i, j) in seen:
                raise ChainParseError(f"duplicate edge ({i}, {j})", number)
            seen.add((i, j))
            P[i, j] = p
        else:
            logger.error(f"Line {number}: unknown keyword '{keyword}'")
            raise ChainParseError(f"unknown keyword '{keyword}'", number)

    chain = MarkovChain.from_matrix(P, pi=pi, name=name)
    logger.info(f"Loaded chain '{name}' with {n} states")
    return chain


def dump_chain(chain: MarkovChain, include_pi: bool = True) -> str:
    """
    Render a chain in the chain-file format with 17 significant digits.

    Example:
        >>> from fbpyutils_mixing.chain.generators import generate_complete_graph_walk
        >>> print(dump_chain(generate_complete_graph_walk(2), include_pi=False))
        # complete(n=2)
        states 2
        edge 0 0 0.75
        edge 0 1 0.25
        edge 1 0 0.25
        edge 1 1 0.75
    """
    fmt = config.FLOAT_FORMAT
    lines = [f"# {chain.name}", f"states {chain.n}"]
    if include_pi:
        lines.append("pi " + " ".join(fmt.format(w) for w in chain.pi))
    for i, j in zip(*np.nonzero(chain.P)):
        lines.append(f"edge {i} {j} {fmt.format(chain.P[i, j])}")
    return "\n".join(lines) + "\n"


def load_multigraph(text: str) -> np.ndarray:
    """
    Parse a multigraph file into the multiplicity matrix d(x,y).

    Example:
        >>> load_multigraph("vertices 2\\narc 0 1\\narc 1 0")
        array([[0, 1],
               [1, 0]])
    """
    lines = _content_lines(text)
    if not lines or lines[0][1][0] != "vertices" or len(lines[0][1]) != 2:
        number = lines[0][0] if lines else 1
        raise ChainParseError("first line must be 'vertices <n>'", number)
    number, tokens = lines[0]
    n = _parse_int(tokens[1], number, "vertex count")
    counts = np.zeros((n, n), dtype=int)
    for number, tokens in lines[1:]:
        if tokens[0] != "arc" or len(tokens) not in (3, 4):
            raise ChainParseError("expected 'arc <x> <y> [count]'", number)
        x = _parse_int(tokens[1], number, "vertex")
        y = _parse_int(tokens[2], number, "vertex")
        count = _parse_int(tokens[3], number, "multiplicity") if len(tokens) == 4 else 1
        if not (0 <= x < n and 0 <= y < n) or count < 1:
            raise ChainParseError(f"arc ({x}, {y}, {count}) is not valid", number)
        counts[x, y] += count
    return counts
