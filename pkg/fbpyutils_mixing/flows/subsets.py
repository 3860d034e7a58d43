"""Subset masks and exhaustive subset enumeration.

A subset A of the state space is a bit pattern: state i belongs to A when bit i is set. Profile
builders enumerate the proper nonempty subsets in chunks of consecutive masks, each chunk being
expanded into a boolean membership matrix so every set quantity is a handful of matrix products.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.flows.subsets import SubsetMask, iter_mask_chunks

    chain = generate_cycle_walk(3, 0.5)
    A = SubsetMask.from_states(chain, [0, 2])   # bits 0b101, measure 2/3
    for masks in iter_mask_chunks(chain.n):
        ...                                     # masks 1..6
"""
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Tuple

import numpy as np

from fbpyutils_mixing import logger
from fbpyutils_mixing import config
from fbpyutils_mixing.chain.core import MarkovChain, as_membership
from fbpyutils_mixing.errors import EnumerationCapError


@dataclass(frozen=True)
class SubsetMask:
    """
    Subset A of the states as a bit pattern with its cached measure pi(A).

    Attributes:
        bits: Bit i set iff state i is in A.
        n: Number of states of the owning chain.
        measure: pi(A).
    """

    bits: int
    n: int
    measure: float

    @classmethod
    def from_bits(cls, chain: MarkovChain, bits: int) -> "SubsetMask":
        bits = int(bits)
        if bits < 0 or bits >= (1 << chain.n):
            logger.error(f"Mask {bits:#x} out of range for {chain.n} states")
            raise ValueError(f"Mask {bits:#x} does not describe a subset of {chain.n} states.")
        members = membership_matrix(chain.n, [bits])[0]
        return cls(bits=bits, n=chain.n, measure=float(chain.pi[members].sum()))

    @classmethod
    def from_states(cls, chain: MarkovChain, states: Iterable[int]) -> "SubsetMask":
        """
        Build a mask from state indices.

        Example:
            >>> SubsetMask.from_states(chain, [0, 2]).bits
            5
        """
        members = as_membership(chain.n, states)
        bits = sum(1 << int(i) for i in np.flatnonzero(members))
        return cls(bits=bits, n=chain.n, measure=float(chain.pi[members].sum()))

    @property
    def members(self) -> np.ndarray:
        return np.array([(self.bits >> i) & 1 == 1 for i in range(self.n)], dtype=bool)

    @property
    def states(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    @property
    def is_proper(self) -> bool:
        return 0 < self.bits < (1 << self.n) - 1

    def complement(self) -> "SubsetMask":
        full = (1 << self.n) - 1
        return SubsetMask(bits=full ^ self.bits, n=self.n, measure=1.0 - self.measure)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.states) + "}"


def membership_matrix(n: int, masks) -> np.ndarray:
    """
    Expand integer masks into a (len(masks), n) boolean membership matrix.

    Example:
        >>> membership_matrix(3, [1, 6])
        array([[ True, False, False],
               [False,  True,  True]])
    """
    masks = np.asarray(masks, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(bool)


def is_exchangeable(chain: MarkovChain) -> bool:
    """
    True when all diagonal entries of P agree and all off-diagonal entries agree.

    Such chains (complete-graph walks) are invariant under every permutation of the states, so
    any set quantity depends on |A| only.
    """
    diagonal = np.diag(chain.P)
    off = chain.P[~np.eye(chain.n, dtype=bool)]
    return bool(
        np.ptp(diagonal) <= config.IDENTITY_TOL and np.ptp(off) <= config.IDENTITY_TOL
    )


def check_enumerable(chain: MarkovChain, cap: Optional[int] = None) -> None:
    """
    Raise EnumerationCapError when the chain is too large to enumerate all subsets.

    Raises:
        EnumerationCapError: n exceeds the cap (default config.ENUMERATION_CAP). Sampling-based
            estimation for larger chains is not provided.
    """
    cap = cap or config.ENUMERATION_CAP
    if chain.n > cap:
        logger.error(f"Chain '{chain.name}' has {chain.n} states, enumeration cap is {cap}")
        raise EnumerationCapError(
            f"Subset enumeration is limited to {cap} states, chain '{chain.name}' has {chain.n}. "
            "Raise FBPYUTILS_MIXING_ENUMERATION_CAP; sampling-based profiles are not supported."
        )


def iter_mask_chunks(n: int, chunk_size: Optional[int] = None) -> Iterator[np.ndarray]:
    """
    Yield the masks of all proper nonempty subsets, 1 .. 2^n - 2, as int64 arrays.

    Example:
        >>> [c.tolist() for c in iter_mask_chunks(3, chunk_size=4)]
        [[1, 2, 3, 4], [5, 6]]
    """
    chunk_size = chunk_size or config.CHUNK_SIZE
    stop = (1 << n) - 1
    for start in range(1, stop, chunk_size):
        yield np.arange(start, min(start + chunk_size, stop), dtype=np.int64)


def exchangeable_representatives(n: int) -> np.ndarray:
    """
    One mask per subset size 1..n-1: the first k states.

    Example:
        >>> exchangeable_representatives(4).tolist()
        [1, 3, 7]
    """
    return np.array([(1 << k) - 1 for k in range(1, n)], dtype=np.int64)


def plan_enumeration(
    chain: MarkovChain, cap: Optional[int] = None, chunk_size: Optional[int] = None
) -> Iterator[np.ndarray]:
    """
    Mask chunks to evaluate for a chain-wide profile.

    Exchangeable chains get one representative per subset size, which lifts the cap for them;
    every other chain is enumerated exhaustively, subject to the cap.
    """
    if is_exchangeable(chain):
        if chain.n > 62:
            check_enumerable(chain, 62)
        logger.debug(f"Chain '{chain.name}' is exchangeable: enumerating {chain.n - 1} representatives")
        return iter([exchangeable_representatives(chain.n)])
    check_enumerable(chain, cap)
    logger.debug(f"Enumerating {(1 << chain.n) - 2} proper subsets of chain '{chain.name}'")
    return iter_mask_chunks(chain.n, chunk_size)


def all_subset_measures(pi: np.ndarray) -> np.ndarray:
    """
    Measures of all 2^n subsets, indexed by mask.

    Example:
        >>> all_subset_measures(np.array([0.5, 0.25, 0.25]))
        array([0.  , 0.5 , 0.25, 0.75, 0.25, 0.75, 0.5 , 1.  ])
    """
    measures = np.zeros(1)
    for weight in pi:
        measures = np.concatenate([measures, measures + weight])
    return measures
