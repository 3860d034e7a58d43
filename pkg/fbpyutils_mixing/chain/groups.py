"""Finite group presentations for Cayley-graph walks.

Groups are given by a multiplication table over element indices, a generator list S and a
probability vector p over S.

Example:
    from fbpyutils_mixing.chain.groups import cyclic_group, parse_group_spec

    z5 = cyclic_group(5, generators=["id", "+1"], probs=[0.5, 0.5])
    s3 = parse_group_spec("s3", "(12),(123)", "0.5,0.5")
"""
import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fbpyutils_mixing import logger
from fbpyutils_mixing import config
from fbpyutils_mixing.errors import GroupError


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    """
    Finite group with a weighted generating list.

    Attributes:
        mul: |G| x |G| table, mul[g, h] = index of g*h.
        generators: Element indices of S, in tie-breaking order.
        gen_probs: Probability p(s) for each entry of generators.
        labels: Printable name per element.
        name: Group name used in reports.
    """

    mul: np.ndarray
    generators: Tuple[int, ...]
    gen_probs: np.ndarray
    labels: Tuple[str, ...] = ()
    name: str = "group"
    _identity: List[int] = field(default_factory=list, repr=False)

    def __post_init__(self):
        mul = np.array(self.mul, dtype=int)
        mul.setflags(write=False)
        probs = np.array(self.gen_probs, dtype=float)
        probs.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "gen_probs", probs)
        object.__setattr__(self, "generators", tuple(int(s) for s in self.generators))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(g) for g in range(mul.shape[0])))
        validate_group(self)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @property
    def identity(self) -> int:
        if not self._identity:
            order = self.order
            for e in range(order):
                if np.array_equal(self.mul[e], np.arange(order)):
                    self._identity.append(e)
                    break
        return self._identity[0]

    def inverse(self, g: int) -> int:
        return int(np.flatnonzero(self.mul[g] == self.identity)[0])

    def generator_labels(self) -> List[str]:
        return [self.labels[s] for s in self.generators]


def validate_group(group: GroupPresentation, samples: int = 200, seed: int = 0) -> None:
    """
    Check the group axioms and that the generators generate the whole group.

    Associativity is spot-checked on random triples (all triples for groups of order <= 12).

    Raises:
        GroupError: On any violated axiom, bad probabilities or a non-generating S.
    """
    mul = group.mul
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] < 1:
        logger.error(f"Multiplication table has shape {mul.shape}")
        raise GroupError("Multiplication table must be square and non-empty.")
    order = mul.shape[0]
    if np.any(mul < 0) or np.any(mul >= order):
        raise GroupError("Multiplication table entries must be element indices.")
    expected = np.arange(order)
    for g in range(order):
        if not (np.array_equal(np.sort(mul[g]), expected) and np.array_equal(np.sort(mul[:, g]), expected)):
            logger.error(f"Row/column {g} of the multiplication table is not a permutation")
            raise GroupError("Multiplication table must be a Latin square (inverses must exist).")

    identities = [e for e in range(order) if np.array_equal(mul[e], expected) and np.array_equal(mul[:, e], expected)]
    if not identities:
        logger.error("No identity element in multiplication table")
        raise GroupError("Multiplication table has no identity element.")

    if order <= 12:
        triples = itertools.product(range(order), repeat=3)
    else:
        rng = np.random.default_rng(seed)
        triples = (tuple(t) for t in rng.integers(0, order, size=(samples, 3)))
    for a, b, c in triples:
        if mul[mul[a, b], c] != mul[a, mul[b, c]]:
            logger.error(f"Associativity fails on ({a}, {b}, {c})")
            raise GroupError(f"Multiplication is not associative on elements ({a}, {b}, {c}).")

    if not group.generators:
        raise GroupError("Generating list S must not be empty.")
    if any(not 0 <= s < order for s in group.generators):
        raise GroupError("Generators must be element indices.")
    probs = group.gen_probs
    if probs.shape != (len(group.generators),):
        logger.error(f"{probs.size} probabilities for {len(group.generators)} generators")
        raise GroupError("Need one probability per generator.")
    if np.any(probs < 0.0) or abs(probs.sum() - 1.0) > config.ROW_SUM_TOL:
        logger.error(f"Generator probabilities {probs} do not form a distribution")
        raise GroupError("Generator probabilities must be non-negative and sum to 1.")

    reached = generated_closure(mul, identities[0], group.generators)
    if len(reached) != order:
        logger.error(f"Generators reach {len(reached)} of {order} elements")
        raise GroupError(f"Generators reach only {len(reached)} of {order} elements.")


def generated_closure(mul: np.ndarray, identity: int, generators: Sequence[int]) -> set:
    """Elements reachable from the identity by right multiplication with generators."""
    seen = {identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = int(mul[g, s])
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return seen


def _normalize_probs(probs: Optional[Sequence[float]], count: int) -> np.ndarray:
    if probs is None:
        return np.full(count, 1.0 / count)
    return np.asarray([float(p) for p in probs])


def cyclic_group(
    n: int, generators: Sequence = ("+1",), probs: Optional[Sequence[float]] = None
) -> GroupPresentation:
    """
    Cyclic group Z_n with additive generators.

    Generator tokens: 'id', '+k', '-k' or plain integers.

    Example:
        >>> z5 = cyclic_group(5, ["id", "+1"], [0.5, 0.5])
        >>> z5.generators
        (0, 1)
    """
    if n < 1:
        raise GroupError(f"Cyclic group order must be positive, got {n}.")
    elements = np.arange(n)
    mul = (elements[:, None] + elements[None, :]) % n
    indices = []
    for token in generators:
        text = str(token).strip()
        if text == "id":
            indices.append(0)
            continue
        try:
            indices.append(int(text) % n)
        except ValueError:
            logger.error(f"Invalid cyclic generator token '{text}'")
            raise GroupError(f"Invalid generator '{text}' for Z_{n}.")
    return GroupPresentation(
        mul=mul,
        generators=tuple(indices),
        gen_probs=_normalize_probs(probs, len(indices)),
        labels=tuple(str(g) for g in range(n)),
        name=f"Z{n}",
    )


def _compose(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(p[q[i]] for i in range(len(q)))


def _cycle_label(perm: Tuple[int, ...]) -> str:
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cycle = []
        i = start
        while i not in seen:
            seen.add(i)
            cycle.append(str(i + 1))
            i = perm[i]
        cycles.append("(" + "".join(cycle) + ")")
    return "".join(cycles) or "id"


def parse_cycle(text: str, k: int) -> Tuple[int, ...]:
    """
    Permutation of {0..k-1} from cycle notation over 1-based digits, e.g. '(12)(345)'.

    Example:
        >>> parse_cycle("(123)", 3)
        (1, 2, 0)
    """
    text = text.strip()
    if text == "id":
        return tuple(range(k))
    if not re.fullmatch(r"(\(\d+\))+", text):
        logger.error(f"Invalid cycle notation '{text}'")
        raise GroupError(f"Invalid cycle notation '{text}'.")
    perm = list(range(k))
    # Cycles compose right-to-left, matching _compose.
    for body in reversed(re.findall(r"\((\d+)\)", text)):
        points = [int(c) - 1 for c in body]
        if any(not 0 <= p < k for p in points) or len(set(points)) != len(points):
            raise GroupError(f"Cycle '({body})' is not valid in S_{k}.")
        cycle = list(range(k))
        for a, b in zip(points, points[1:] + points[:1]):
            cycle[a] = b
        perm = list(_compose(tuple(cycle), tuple(perm)))
    return tuple(perm)


def symmetric_group(
    k: int, generators: Sequence[str] = ("(12)", "(12...)"), probs: Optional[Sequence[float]] = None
) -> GroupPresentation:
    """
    Symmetric group S_k; the product is composition, (g*h)(i) = g(h(i)).

    Example:
        >>> s3 = symmetric_group(3, ["(12)", "(123)"])
        >>> s3.order
        6
    """
    if k < 1 or k > 7:
        raise GroupError(f"Symmetric group degree must be in [1, 7], got {k}.")
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    mul = np.array([[index[_compose(p, q)] for q in perms] for p in perms], dtype=int)
    tokens = [
        "(" + "".join(str(i + 1) for i in range(k)) + ")" if g == "(12...)" else g
        for g in generators
    ]
    indices = [index[parse_cycle(g, k)] for g in tokens]
    return GroupPresentation(
        mul=mul,
        generators=tuple(indices),
        gen_probs=_normalize_probs(probs, len(indices)),
        labels=tuple(_cycle_label(p) for p in perms),
        name=f"S{k}",
    )


def parse_group_spec(
    group: str, generators: Optional[str] = None, probs: Optional[str] = None
) -> GroupPresentation:
    """
    Build a group from command-line style strings.

    Args:
        group: 'z<n>' or 's<k>'.
        generators: Comma separated generator tokens. Defaults to '+1' for Z_n and '(12),(1..k)'
            for S_k.
        probs: Comma separated probabilities. Defaults to uniform.

    Example:
        >>> parse_group_spec("z5", "id,+1", "0.5,0.5").order
        5
    """
    match = re.fullmatch(r"([zs])(\d+)", group.strip().lower())
    if not match:
        logger.error(f"Unknown group spec '{group}'")
        raise GroupError(f"Unknown group '{group}'; expected z<n> or s<k>.")
    kind, size = match.group(1), int(match.group(2))
    tokens = None
    if generators:
        tokens = [t for t in re.split(r",(?![^()]*\))", generators) if t.strip()]
    values = [float(p) for p in probs.split(",")] if probs else None
    if kind == "z":
        return cyclic_group(size, tokens or ["+1"], values)
    return symmetric_group(size, tokens or ["(12)", "(12...)"], values)
