"""Word paths for random walks on Cayley graphs.

Each element g gets a shortest word g = s_1 s_2 ... s_k over the generators, found by
breadth-first search from the identity trying generators in list order. The path from x to y
spells the word of x^{-1} y starting at x: x -> x s_1 -> x s_1 s_2 -> ... -> y. Every path
with the same x^{-1} y uses the same word, so the same number of paths crosses each vertex.

For walks without holding, alternating words s_1 t_1^{-1} s_2 t_2^{-1} ... s_k of odd length
play the same role for the alternating path families.

Example:
    from fbpyutils_mixing.chain import cyclic_group, generate_cayley_walk
    from fbpyutils_mixing.paths.cayley import cayley_word_paths

    group = cyclic_group(5, ["id", "+1"], [0.5, 0.5])
    words = cayley_word_paths(group, generate_cayley_walk(group))
    words.diameter, words.edge_bound     # 4, 8.0
"""
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import pandas as pd

from fbpyutils_mixing import logger
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.chain.groups import GroupPresentation
from fbpyutils_mixing.errors import PathFamilyError
from fbpyutils_mixing.paths.alternating import AlternatingPathFamily, validate_alternating
from fbpyutils_mixing.paths.family import PathFamily, validate_family


@dataclass(frozen=True, eq=False)
class CayleyWordPaths:
    """
    Word-based canonical paths with the quantities of the word-length bounds.

    Attributes:
        family: The translated word paths.
        words: Shortest word of each element, as element indices of the generators.
        diameter: Delta, the length of the longest word.
        counts: N(g, s), rows indexed by element label, columns by generator label.
        vertex_bound: Delta, or (Delta + 1)/2 when S is closed under inverses.
        edge_bound: max over g and s of N(g, s)/p(s).
    """

    family: PathFamily
    words: Dict[int, Tuple[int, ...]]
    diameter: int
    counts: pd.DataFrame
    vertex_bound: float
    edge_bound: float


@dataclass(frozen=True, eq=False)
class CayleyAlternatingPaths:
    """
    Translation-invariant odd alternating word paths.

    Attributes:
        family: The alternating family.
        diameter: Delta*, the length of the longest alternating word.
        vertex_bound: (1 + Delta*)/2, an upper bound on rho_dot_v for this family.
    """

    family: AlternatingPathFamily
    diameter: int
    vertex_bound: float


def _weighted_generators(group: GroupPresentation) -> Dict[int, float]:
    """Distinct generator elements with positive total probability, in list order."""
    weights: Dict[int, float] = {}
    for s, p in zip(group.generators, group.gen_probs):
        weights[s] = weights.get(s, 0.0) + float(p)
    return {s: p for s, p in weights.items() if p > 0.0}


def _check_chain(group: GroupPresentation, chain: MarkovChain) -> None:
    if chain.n != group.order:
        logger.error(f"Chain '{chain.name}' has {chain.n} states, group {group.name} has {group.order}")
        raise PathFamilyError(f"Chain has {chain.n} states but the group has order {group.order}.")


def shortest_words(group: GroupPresentation) -> Dict[int, Tuple[int, ...]]:
    """
    Shortest generator word for every element; the identity gets the empty word.

    Raises:
        PathFamilyError: Some element is not a product of generators.

    Example:
        >>> shortest_words(cyclic_group(3, ["+1"]))
        {0: (), 1: (1,), 2: (1, 1)}
    """
    generators = [s for s in _weighted_generators(group) if s != group.identity]
    words = {group.identity: ()}
    queue = deque([group.identity])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = int(group.mul[g, s])
            if h not in words:
                words[h] = words[g] + (s,)
                queue.append(h)
    if len(words) != group.order:
        missing = sorted(set(range(group.order)) - set(words))
        logger.error(f"Elements {missing} of {group.name} are not generated")
        raise PathFamilyError(f"Elements {missing} are not products of the generators.")
    return dict(sorted(words.items()))


def cayley_word_paths(group: GroupPresentation, chain: MarkovChain) -> CayleyWordPaths:
    """
    Canonical paths from shortest generator words, with Delta and the N(g,s) table.

    Args:
        group: The group presentation.
        chain: Its Cayley walk (states are element indices).

    Returns:
        CayleyWordPaths: Paths satisfying rho_v < Delta and rho_e < max N(g,s)/p(s).

    Raises:
        PathFamilyError: Some element is unreachable, or the chain does not match the group.
    """
    _check_chain(group, chain)
    logger.info(f"Building word paths for {group.name}")
    words = shortest_words(group)
    weights = _weighted_generators(group)
    paths = {}
    for x in range(group.order):
        for y in range(group.order):
            if x == y:
                continue
            g = int(group.mul[group.inverse(x), y])
            route = [x]
            for s in words[g]:
                route.append(int(group.mul[route[-1], s]))
            paths[(x, y)] = tuple(route)
    family = validate_family(chain, PathFamily(n=chain.n, paths=paths, source="cayley"))

    used = [s for s in weights if s != group.identity]
    counts = pd.DataFrame(
        [[words[g].count(s) for s in used] for g in range(group.order)],
        index=[group.labels[g] for g in range(group.order)],
        columns=[group.labels[s] for s in used],
    )
    diameter = max(len(w) for w in words.values())
    edge_bound = max(
        (counts.iloc[:, j].max() / weights[s] for j, s in enumerate(used)), default=0.0
    )
    symmetric = set(group.inverse(s) for s in weights) == set(weights)
    vertex_bound = (diameter + 1) / 2 if symmetric else float(diameter)
    logger.debug(f"{group.name}: Delta={diameter}, edge bound={edge_bound}, symmetric={symmetric}")
    return CayleyWordPaths(
        family=family,
        words=words,
        diameter=diameter,
        counts=counts,
        vertex_bound=vertex_bound,
        edge_bound=float(edge_bound),
    )


def cayley_alternating_paths(
    group: GroupPresentation, chain: Optional[MarkovChain] = None
) -> CayleyAlternatingPaths:
    """
    Shortest odd words s_1 t_1^{-1} s_2 ... s_k for every element, translated to every start.

    Raises:
        PathFamilyError: Some element has no odd alternating word.

    Example:
        >>> cayley_alternating_paths(cyclic_group(2, ["+1"]))
        Traceback (most recent call last):
        ...
        fbpyutils_mixing.errors.PathFamilyError: Elements [0] have no odd alternating word over the generators.
    """
    generators = list(_weighted_generators(group))
    inverses = [group.inverse(s) for s in generators]
    start = (group.identity, 0)
    steps: Dict[Tuple[int, int], Optional[Tuple[Tuple[int, int], int]]] = {start: None}
    queue = deque([start])
    while queue:
        g, parity = queue.popleft()
        for s in generators if parity == 0 else inverses:
            state = (int(group.mul[g, s]), 1 - parity)
            if state not in steps:
                steps[state] = ((g, parity), s)
                queue.append(state)

    missing = [g for g in range(group.order) if (g, 1) not in steps]
    if missing:
        logger.error(f"Elements {missing} of {group.name} have no odd alternating word")
        raise PathFamilyError(f"Elements {missing} have no odd alternating word over the generators.")

    words: Dict[int, List[int]] = {}
    for g in range(group.order):
        state, letters = (g, 1), []
        while steps[state] is not None:
            state, letter = steps[state]
            letters.append(letter)
        words[g] = letters[::-1]

    paths = {}
    for x in range(group.order):
        for y in range(group.order):
            route = [x]
            for letter in words[int(group.mul[group.inverse(x), y])]:
                route.append(int(group.mul[route[-1], letter]))
            paths[(x, y)] = tuple(route)
    family = AlternatingPathFamily(n=group.order, paths=paths, source="cayley")
    if chain is not None:
        _check_chain(group, chain)
        validate_alternating(chain, family)
    diameter = max(len(w) for w in words.values())
    logger.info(f"{group.name}: alternating diameter {diameter}")
    return CayleyAlternatingPaths(family=family, diameter=diameter, vertex_bound=(1 + diameter) / 2)


def cayley_alternating_diameter(group: GroupPresentation, chain: Optional[MarkovChain] = None) -> int:
    """
    Delta*, the longest shortest odd alternating word.

    Example:
        >>> cayley_alternating_diameter(cyclic_group(5, ["+1", "+2"]))
        5
    """
    return cayley_alternating_paths(group, chain).diameter
