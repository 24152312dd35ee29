import re
from typing import Iterator

from app.config import settings
from app.services.relations import EnumerationLimitError

_BLOCK = re.compile(r"\{([^{}]*)\}")


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """
    Restricted growth strings of length n in lexicographic order:
    a[0] = 0 and a[i] <= 1 + max(a[:i]).
    """
    if n == 0:
        yield ()
        return
    word = [0] * n

    def extend(i: int, top: int):
        if i == n:
            yield tuple(word)
            return
        for v in range(top + 2):
            word[i] = v
            yield from extend(i + 1, max(top, v))

    yield from extend(1, 0)


def blocks_from_rgs(word: tuple[int, ...]) -> list[list[int]]:
    blocks: list[list[int]] = []
    for a, label in enumerate(word):
        if label == len(blocks):
            blocks.append([])
        blocks[label].append(a)
    return blocks


def enumerate_partitions(n: int, allow_large: bool = False) -> Iterator[list[list[int]]]:
    """Set partitions of 0..n-1 in canonical (restricted growth string) order."""
    if n > settings.MAX_PARTITION_SIZE and not allow_large:
        raise EnumerationLimitError(
            f"Partition enumeration of {n} elements exceeds MAX_PARTITION_SIZE="
            f"{settings.MAX_PARTITION_SIZE}"
        )
    for word in restricted_growth_strings(n):
        yield blocks_from_rgs(word)


def canonical_blocks(blocks) -> list[list[int]]:
    """Sort each block and order blocks by their minimum element."""
    return sorted((sorted(b) for b in blocks), key=lambda b: b[0])


def format_partition(blocks) -> str:
    return "".join("{" + ",".join(str(a) for a in block) + "}" for block in canonical_blocks(blocks))


def parse_partition(text: str, n: int) -> list[list[int]]:
    """Parse block syntax such as {0,1}{2}{3,4} into a partition of 0..n-1."""
    compact = re.sub(r"\s+", "", text)
    blocks = []
    position = 0
    for match in _BLOCK.finditer(compact):
        if match.start() != position:
            raise ValueError(f"Unexpected text at column {position + 1} of partition {text!r}")
        position = match.end()
        body = match.group(1)
        if not body:
            raise ValueError(f"Empty block in partition {text!r}")
        try:
            blocks.append([int(tok) for tok in body.split(",")])
        except ValueError:
            raise ValueError(f"Non-integer element in partition {text!r}") from None
    if position != len(compact) or not blocks:
        raise ValueError(f"Malformed partition {text!r}")
    seen = sorted(a for block in blocks for a in block)
    if seen != list(range(n)):
        raise ValueError(f"Partition {text!r} is not a partition of 0..{n - 1}")
    return canonical_blocks(blocks)
