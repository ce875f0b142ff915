"""Set partitions as restricted-growth strings (RGS).

An RGS ``a`` of length ``m`` satisfies ``a[0] == 0`` and
``a[i] <= 1 + max(a[:i])``; it names the partition whose blocks are the
level sets of ``a``.  Colorings up to renaming of colors are exactly RGSs.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

from structramsey.errors import InputError


def iter_rgs(m: int, max_blocks: int | None = None) -> Iterator[tuple[int, ...]]:
    """All RGSs of length ``m`` with at most ``max_blocks`` blocks, in lex order."""
    if max_blocks is None:
        max_blocks = m
    if m == 0:
        yield ()
        return
    if max_blocks < 1:
        return
    a = [0] * m

    def rec(i: int, top: int):
        if i == m:
            yield tuple(a)
            return
        for c in range(min(top + 2, max_blocks)):
            a[i] = c
            yield from rec(i + 1, max(top, c))

    yield from rec(1, 0)


def normalize(labels: Sequence[int]) -> tuple[int, ...]:
    """Rename labels in order of first appearance."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def is_rgs(labels: Sequence[int]) -> bool:
    return tuple(labels) == normalize(labels)


def blocks_of(rgs: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    out: dict[int, list[int]] = {}
    for i, c in enumerate(rgs):
        out.setdefault(c, []).append(i)
    return tuple(tuple(out[c]) for c in sorted(out))


def from_blocks(blocks: Sequence[Sequence[int]], m: int) -> tuple[int, ...]:
    labels = [-1] * m
    for b, block in enumerate(blocks):
        for i in block:
            if not 0 <= i < m or labels[i] != -1:
                raise InputError(f"blocks do not partition range({m})")
            labels[i] = b
    if -1 in labels:
        raise InputError(f"blocks do not cover range({m})")
    return normalize(labels)


@lru_cache(maxsize=None)
def stirling2(m: int, j: int) -> int:
    if m == j:
        return 1
    if j == 0 or j > m:
        return 0
    return j * stirling2(m - 1, j) + stirling2(m - 1, j - 1)


def count_partitions(m: int, max_blocks: int | None = None) -> int:
    if max_blocks is None:
        max_blocks = m
    if m == 0:
        return 1
    return sum(stirling2(m, j) for j in range(1, min(m, max_blocks) + 1))


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def rgs_to_string(rgs: Sequence[int]) -> str:
    """Base-36 digit string, or comma-separated when some label exceeds 35."""
    if not rgs:
        return "-"
    if max(rgs) < len(_DIGITS):
        return "".join(_DIGITS[c] for c in rgs)
    return ",".join(str(c) for c in rgs)


def rgs_from_string(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "-"):
        return ()
    if "," in text:
        labels = tuple(int(x) for x in text.split(","))
    else:
        try:
            labels = tuple(_DIGITS.index(ch) for ch in text.lower())
        except ValueError:
            raise InputError(f"bad restricted-growth string {text!r}") from None
    if not is_rgs(labels):
        raise InputError(f"{text!r} is not a restricted-growth string")
    return labels
