"""Points and monotone subsets of {0,1}^n.

A set is stored as a Python integer bitmask over the 2^n point indices, so
upward closure and monotonicity checks are O(n) big-integer shifts.  Coordinate
convention: coordinate i (1-based) is bit i-1 of the point index, so
"coordinate n" is the highest-order bit and splitting on it is a plain bit
range view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

MAX_DENSE_N = 25  # 2^25-bit masks, ~4 MiB; beyond this use MembershipOracle
MAX_ENUMERATE_N = 5  # Dedekind growth; 7580 non-empty monotone sets at n=5


@dataclass(frozen=True)
class CubePoint:
    """A vertex of the hypercube, identified by its integer index."""

    index: int
    n: int

    def __post_init__(self):
        if not 0 <= self.index < (1 << self.n):
            raise ValueError(f"point index {self.index} out of range for n={self.n}")

    def coordinate(self, i: int) -> int:
        """Value of coordinate i (1-based)."""
        return (self.index >> (i - 1)) & 1

    def flip(self, i: int) -> "CubePoint":
        return CubePoint(self.index ^ (1 << (i - 1)), self.n)

    def weight(self) -> int:
        return self.index.bit_count()

    def bits(self) -> str:
        """Binary string, leftmost character = coordinate n."""
        return format(self.index, f"0{self.n}b")


def _bit_zero_pattern(n: int, bit: int) -> int:
    """Mask of all point indices whose `bit` is 0 (periodic block pattern)."""
    full = (1 << (1 << n)) - 1
    block = (1 << (1 << bit)) - 1
    period = (1 << (1 << (bit + 1))) - 1
    return full // period * block


def _upward_closure(n: int, mask: int) -> int:
    # Raising each bit once, in any fixed order, closes under all raises.
    for bit in range(n):
        mask |= (mask & _bit_zero_pattern(n, bit)) << (1 << bit)
    return mask


def _mask_is_monotone(n: int, mask: int) -> bool:
    full = (1 << (1 << n)) - 1
    absent = full ^ mask
    for bit in range(n):
        if ((mask & _bit_zero_pattern(n, bit)) << (1 << bit)) & absent:
            return False
    return True


def _mask_to_members(n: int, mask: int) -> np.ndarray:
    nbytes = max(1, (1 << n) // 8)
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little", count=1 << n)
    return np.nonzero(bits)[0].astype(np.int64)


class MonotoneSet:
    """A non-empty upward-closed subset of {0,1}^n (dense bitmask storage)."""

    def __init__(self, n: int, mask: int, validate: bool = True):
        if not 1 <= n <= MAX_DENSE_N:
            raise ValueError(f"dimension n={n} outside dense range [1, {MAX_DENSE_N}]")
        if mask == 0:
            raise ValueError("empty set not allowed")
        if mask >> (1 << n):
            raise ValueError("mask has bits beyond 2^n points")
        if validate and not _mask_is_monotone(n, mask):
            raise ValueError("set is not upward closed")
        self.n = n
        self.mask = mask
        self.size = mask.bit_count()

    @property
    def density(self) -> float:
        return self.size / (1 << self.n)

    @cached_property
    def members(self) -> np.ndarray:
        """Member point indices, ascending."""
        return _mask_to_members(self.n, self.mask)

    @cached_property
    def member_lookup(self) -> np.ndarray:
        """Boolean membership array over all 2^n indices."""
        look = np.zeros(1 << self.n, dtype=bool)
        look[self.members] = True
        return look

    @cached_property
    def rank(self) -> np.ndarray:
        """rank[x] = position of x in `members`, -1 for non-members."""
        r = np.full(1 << self.n, -1, dtype=np.int64)
        r[self.members] = np.arange(self.size)
        return r

    def __contains__(self, point) -> bool:
        idx = point.index if isinstance(point, CubePoint) else int(point)
        return bool((self.mask >> idx) & 1)

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MonotoneSet)
            and self.n == other.n
            and self.mask == other.mask
        )

    def __hash__(self) -> int:
        return hash((self.n, self.mask))

    def __repr__(self) -> str:
        return f"MonotoneSet(n={self.n}, size={self.size})"

    def minimal_elements(self) -> np.ndarray:
        """Members none of whose one-bit-lowered neighbors is a member."""
        m = self.members
        minimal = np.ones(self.size, dtype=bool)
        for bit in range(self.n):
            has_bit = (m >> bit) & 1 == 1
            lowered = m[has_bit] ^ (1 << bit)
            minimal[has_bit] &= ~self.member_lookup[lowered]
        return m[minimal]


@dataclass(frozen=True)
class SplitPair:
    """Slices of A by coordinate n: A0 (x_n=0 face) and A1 (x_n=1 face).

    A0 may be None (empty sentinel): the all-ones point forces A1 non-empty,
    but A0 can be empty, with a0 = 0 making its terms vanish downstream.
    """

    A0: Optional[MonotoneSet]
    A1: MonotoneSet
    a0: float
    a1: float

    @property
    def size0(self) -> int:
        return 0 if self.A0 is None else self.A0.size


@dataclass(frozen=True)
class MembershipOracle:
    """Pure membership predicate for workflows beyond dense storage.

    For family-tagged oracles monotonicity holds by construction; for custom
    ones it is the caller's contract, spot-checkable via `spot_check_monotone`.
    """

    n: int
    evaluate: Callable[[int], bool]
    family: str = "custom"
    params: tuple = ()

    def __contains__(self, point) -> bool:
        idx = point.index if isinstance(point, CubePoint) else int(point)
        return bool(self.evaluate(idx))


def threshold_oracle(n: int, k: int) -> MembershipOracle:
    if not 0 <= k <= n:
        raise ValueError(f"threshold k={k} out of range for n={n}")
    return MembershipOracle(n, lambda x: x.bit_count() >= k, "threshold", (n, k))


def dictator_oracle(n: int, i: int) -> MembershipOracle:
    if not 1 <= i <= n:
        raise ValueError(f"dictator coordinate i={i} out of range for n={n}")
    bit = i - 1
    return MembershipOracle(n, lambda x: (x >> bit) & 1 == 1, "dictator", (n, i))


def oracle_from_set(A: MonotoneSet) -> MembershipOracle:
    return MembershipOracle(A.n, lambda x: (A.mask >> x) & 1 == 1, "set", (A.n,))


def spot_check_monotone(oracle: MembershipOracle, samples: int = 200, seed: int = 0) -> bool:
    """Sample random comparable pairs x <= y and test the monotone implication."""
    rng = np.random.default_rng(seed)
    full = (1 << oracle.n) - 1
    for _ in range(samples):
        x = int(rng.integers(0, full + 1))
        y = x | int(rng.integers(0, full + 1))
        if oracle.evaluate(x) and not oracle.evaluate(y):
            return False
    return True


def make_upset(n: int, generators: Iterable[int | CubePoint]) -> MonotoneSet:
    """Upward closure of the given generator points."""
    gens = [g.index if isinstance(g, CubePoint) else int(g) for g in generators]
    if not gens:
        raise ValueError("empty set not allowed")
    if not 1 <= n <= MAX_DENSE_N:
        raise ValueError(f"dimension n={n} outside dense range [1, {MAX_DENSE_N}]")
    mask = 0
    for g in gens:
        if not 0 <= g < (1 << n):
            raise ValueError(f"generator {g} out of range for n={n}")
        mask |= 1 << g
    return MonotoneSet(n, _upward_closure(n, mask), validate=False)


def _popcounts(n: int) -> np.ndarray:
    x = np.arange(1 << n, dtype=np.uint32)
    v = x - ((x >> 1) & np.uint32(0x55555555))
    v = (v & np.uint32(0x33333333)) + ((v >> 2) & np.uint32(0x33333333))
    v = (v + (v >> 4)) & np.uint32(0x0F0F0F0F)
    return ((v * np.uint32(0x01010101)) >> 24).astype(np.int64)


def _mask_from_bool(bits: np.ndarray) -> int:
    packed = np.packbits(bits.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def threshold_set(n: int, k: int) -> MonotoneSet:
    """A = {x : |x| >= k}."""
    if not 0 <= k <= n:
        raise ValueError(f"threshold k={k} out of range for n={n}")
    if not 1 <= n <= MAX_DENSE_N:
        raise ValueError(f"dimension n={n} outside dense range [1, {MAX_DENSE_N}]")
    return MonotoneSet(n, _mask_from_bool(_popcounts(n) >= k), validate=False)


def dictator_set(n: int, i: int) -> MonotoneSet:
    """A = {x : x_i = 1} (coordinate i, 1-based)."""
    if not 1 <= i <= n:
        raise ValueError(f"dictator coordinate i={i} out of range for n={n}")
    full = (1 << (1 << n)) - 1
    return MonotoneSet(n, full ^ _bit_zero_pattern(n, i - 1), validate=False)


def full_cube(n: int) -> MonotoneSet:
    return MonotoneSet(n, (1 << (1 << n)) - 1, validate=False)


def is_monotone(A: MonotoneSet) -> bool:
    return _mask_is_monotone(A.n, A.mask)


def split(A: MonotoneSet) -> SplitPair:
    """Slice A on coordinate n into A0, A1 over {0,1}^(n-1)."""
    if A.n < 2:
        raise ValueError("cannot split dimension 1")
    half = 1 << (A.n - 1)
    low_full = (1 << half) - 1
    mask0 = A.mask & low_full
    mask1 = A.mask >> half
    A1 = MonotoneSet(A.n - 1, mask1, validate=False)
    A0 = MonotoneSet(A.n - 1, mask0, validate=False) if mask0 else None
    denom = float(half)
    return SplitPair(A0=A0, A1=A1, a0=mask0.bit_count() / denom, a1=A1.size / denom)


def _upsets_with_empty(n: int) -> list[int]:
    """All upward-closed masks over {0,1}^n, including the empty one."""
    if n == 0:
        return [0, 1]
    prev = _upsets_with_empty(n - 1)
    shift = 1 << (n - 1)
    # An upset of Q_n is exactly a pair A0 <= A1 of upsets of Q_{n-1}.
    return [(a1 << shift) | a0 for a1 in prev for a0 in prev if a0 & ~a1 == 0]


def enumerate_monotone(n: int) -> Iterator[MonotoneSet]:
    """Yield every non-empty monotone subset of {0,1}^n exactly once."""
    if n > MAX_ENUMERATE_N:
        raise ValueError(f"enumeration cap: n must be <= {MAX_ENUMERATE_N}")
    if n < 1:
        raise ValueError("n must be >= 1")
    for mask in _upsets_with_empty(n):
        if mask:
            yield MonotoneSet(n, mask, validate=False)


def random_upset(n: int, m: int, seed: int | np.random.Generator = 0) -> MonotoneSet:
    """Upward closure of m uniform random points.

    Reproducible given the seed; spans a range of densities. Not uniform over
    the space of all monotone sets.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if m < 1:
        raise ValueError("need at least one generator")
    gens = rng.integers(0, 1 << n, size=m)
    return make_upset(n, (int(g) for g in gens))


def stationary_coordinate_mean(n: int, k: int, i: int = 1) -> float:
    """E[x_i] under the uniform distribution on the threshold set {|x| >= k}.

    By symmetry the value is the same for every coordinate i; computed exactly
    from binomial counts.
    """
    if not 0 <= k <= n:
        raise ValueError(f"threshold k={k} out of range for n={n}")
    if not 1 <= i <= n:
        raise ValueError(f"coordinate i={i} out of range for n={n}")
    num = sum(math.comb(n - 1, j - 1) for j in range(max(k, 1), n + 1))
    den = sum(math.comb(n, j) for j in range(k, n + 1))
    return num / den


def parse_set_description(line: str) -> MonotoneSet:
    """Parse a one-line set description.

    Formats: `threshold n k`, `dictator n i`, `upset n p1,p2,...` with points
    as binary strings (leftmost character = coordinate n).
    """
    parts = line.split()
    if not parts:
        raise ValueError("empty set description")
    kind = parts[0]
    try:
        if kind == "threshold":
            n, k = int(parts[1]), int(parts[2])
            return threshold_set(n, k)
        if kind == "dictator":
            n, i = int(parts[1]), int(parts[2])
            return dictator_set(n, i)
        if kind == "upset":
            n = int(parts[1])
            points = [int(p, 2) for p in parts[2].split(",")]
            return make_upset(n, points)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad set description {line!r}: {exc}") from exc
    raise ValueError(f"unknown set family {kind!r}")
