"""Set partitions of ``{1..r}``, refinement, and their Moebius coefficients."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

MAX_R = 10


@dataclass(frozen=True, order=True)
class SetPartition:
    """Blocks stored as sorted tuples, ordered by least element."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        object.__setattr__(self, "blocks", blocks)
        items = [i for b in blocks for i in b]
        if any(not b for b in blocks):
            raise ValueError("empty block")
        if sorted(items) != list(range(1, len(items) + 1)):
            raise ValueError(f"blocks do not partition 1..{len(items)}: {blocks}")

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """``"1|23|4"`` style; multi-digit labels need commas, as in ``"1,10|2"``."""
        blocks = []
        for chunk in text.split("|"):
            chunk = chunk.strip()
            parts = chunk.split(",") if "," in chunk else list(chunk)
            blocks.append(tuple(int(p) for p in parts if p.strip()))
        return cls(tuple(blocks))

    @classmethod
    def finest(cls, r: int) -> "SetPartition":
        return cls(tuple((i,) for i in range(1, r + 1)))

    @classmethod
    def coarsest(cls, r: int) -> "SetPartition":
        return cls((tuple(range(1, r + 1)),))

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def profile(self) -> tuple[int, ...]:
        """``(s_1, ..., s_r)``: number of blocks of each size."""
        counts = Counter(len(b) for b in self.blocks)
        return tuple(counts.get(i, 0) for i in range(1, self.size + 1))

    def __str__(self) -> str:
        sep = "," if self.size >= 10 else ""
        return "|".join(sep.join(str(i) for i in b) for b in self.blocks)


def _restricted_growth(r: int):
    """Restricted-growth strings ``a`` with ``a[0] = 0`` and ``a[i] <= max(a[:i]) + 1``."""
    if r == 0:
        yield ()
        return
    a = [0] * r

    def rec(i: int, top: int):
        if i == r:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


@lru_cache(maxsize=None)
def _all_partitions(r: int) -> tuple[SetPartition, ...]:
    out = []
    for word in _restricted_growth(r):
        blocks: dict[int, list[int]] = {}
        for i, label in enumerate(word, start=1):
            blocks.setdefault(label, []).append(i)
        out.append(SetPartition(tuple(tuple(b) for b in blocks.values())))
    return tuple(out)


def all_partitions(r: int) -> list[SetPartition]:
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r > MAX_R:
        raise ValueError(f"r = {r} exceeds the enumeration limit {MAX_R}")
    return list(_all_partitions(r))


def refines(p1: SetPartition, p2: SetPartition) -> bool:
    """True iff every block of ``p1`` sits inside a block of ``p2``."""
    if p1.size != p2.size:
        raise ValueError(f"partitions of different sets ({p1.size} vs {p2.size})")
    owner = {i: k for k, b in enumerate(p2.blocks) for i in b}
    return all(len({owner[i] for i in b}) == 1 for b in p1.blocks)


def m_coefficient(partition: SetPartition) -> Fraction:
    """Product over blocks of ``(-1)^(n-1) (n-1)!``, ``n`` the block size."""
    out = 1
    for b in partition.blocks:
        n = len(b)
        out *= (-1) ** (n - 1) * factorial(n - 1)
    return Fraction(out)


def refinements(partition: SetPartition):
    """Every partition refining ``partition``, built block by block."""
    per_block = []
    for b in partition.blocks:
        per_block.append([[tuple(b[i - 1] for i in sub) for sub in q.blocks]
                          for q in _all_partitions(len(b))])
    for combo in product(*per_block):
        yield SetPartition(tuple(blk for piece in combo for blk in piece))


def interval_sum(partition: SetPartition) -> Fraction:
    """Sum of ``m`` over all partitions refining ``partition``."""
    return sum((m_coefficient(q) for q in refinements(partition)), Fraction(0))


def verify_moebius_recursion(r: int) -> bool:
    """Interval sums of ``m`` vanish above the bottom, and ``m`` of the top is ``(-1)^(r-1)(r-1)!``."""
    if r > 8:
        raise ValueError("verification is limited to r <= 8")
    if r < 1:
        return True
    parts = all_partitions(r)
    bottom = SetPartition.finest(r)
    for p in parts:
        if p == bottom:
            continue
        if interval_sum(p) != 0:
            return False
    return m_coefficient(SetPartition.coarsest(r)) == (-1) ** (r - 1) * factorial(r - 1)


def profile_count(profile, r: int | None = None) -> int:
    """How many partitions of ``{1..r}`` have ``profile[i-1]`` blocks of size ``i``."""
    profile = tuple(profile)
    total = sum(i * s for i, s in enumerate(profile, start=1))
    if r is None:
        r = total
    if total != r or any(s < 0 for s in profile):
        raise ValueError(f"profile {profile} does not describe a partition of {r} points")
    want = profile + (0,) * (r - len(profile))
    return sum(1 for p in all_partitions(r) if p.profile() == want[:r])


def profile_table(r: int) -> dict[tuple[int, ...], int]:
    """Count of partitions by profile, for all profiles at once."""
    return dict(Counter(p.profile() for p in all_partitions(r)))
