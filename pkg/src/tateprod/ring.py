"""Ring data for a product of projective spaces over a prime field.

A product P^{n_1} x ... x P^{n_t} is described by the factor dimensions and a
prime modulus for the coefficient field.  All degrees are tuples of t integers
under the termwise partial order; variables of the Cox ring have degree +1 in
their block, exterior variables -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from typing import Iterator

DEFAULT_PRIME = 32003

Multidegree = tuple[int, ...]


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    for q in range(2, isqrt(m) + 1):
        if m % q == 0:
            return False
    return True


@dataclass(frozen=True)
class RingSpec:
    """The product of projective spaces P^{n_1} x ... x P^{n_t} over F_p."""

    n: Multidegree
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        if len(self.n) < 1 or any(v < 1 for v in self.n):
            raise ValueError(f"factor dimensions must be positive, got {self.n}")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @property
    def t(self) -> int:
        return len(self.n)

    @cached_property
    def nvars(self) -> int:
        """Variables per algebra: block i contributes n_i + 1 of them."""
        return sum(v + 1 for v in self.n)

    @cached_property
    def block_start(self) -> tuple[int, ...]:
        starts, acc = [], 0
        for v in self.n:
            starts.append(acc)
            acc += v + 1
        return tuple(starts)

    @cached_property
    def var_block(self) -> tuple[int, ...]:
        """Block index of each variable slot, block-major layout."""
        return tuple(i for i, v in enumerate(self.n) for _ in range(v + 1))

    def variables(self) -> Iterator[tuple[int, int]]:
        """All (block, index) pairs, 0-based."""
        for i, v in enumerate(self.n):
            for j in range(v + 1):
                yield (i, j)

    def var_slot(self, i: int, j: int) -> int:
        if not (0 <= i < self.t and 0 <= j <= self.n[i]):
            raise ValueError(f"no variable ({i},{j}) in {self}")
        return self.block_start[i] + j

    def zero(self) -> Multidegree:
        return (0,) * self.t

    def one(self) -> Multidegree:
        return (1,) * self.t

    def unit(self, i: int) -> Multidegree:
        return tuple(int(k == i) for k in range(self.t))

    @cached_property
    def top(self) -> Multidegree:
        """n + 1^t, the socle-to-generator span of omega_E."""
        return tuple(v + 1 for v in self.n)

    def to_json(self) -> dict:
        return {"n": list(self.n), "p": self.p}

    @staticmethod
    def from_json(data: dict) -> "RingSpec":
        return RingSpec(tuple(data["n"]), int(data.get("p", DEFAULT_PRIME)))


def md_total(a: Multidegree) -> int:
    return sum(a)


def md_check(ring: RingSpec, a) -> Multidegree:
    a = tuple(int(v) for v in a)
    if len(a) != ring.t:
        raise ValueError(f"multidegree {a} has length {len(a)}, expected {ring.t}")
    return a


def md_leq(a: Multidegree, b: Multidegree) -> bool:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {a} vs {b}")
    return all(x <= y for x, y in zip(a, b))


def md_lt(a: Multidegree, b: Multidegree) -> bool:
    """Strict in every coordinate."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {a} vs {b}")
    return all(x < y for x, y in zip(a, b))


def md_add(a: Multidegree, b: Multidegree) -> Multidegree:
    return tuple(x + y for x, y in zip(a, b))


def md_sub(a: Multidegree, b: Multidegree) -> Multidegree:
    return tuple(x - y for x, y in zip(a, b))


def md_neg(a: Multidegree) -> Multidegree:
    return tuple(-x for x in a)


def md_max(a: Multidegree, b: Multidegree) -> Multidegree:
    return tuple(max(x, y) for x, y in zip(a, b))


def md_min(a: Multidegree, b: Multidegree) -> Multidegree:
    return tuple(min(x, y) for x, y in zip(a, b))


def desc_total_order(degrees) -> list[Multidegree]:
    """Descending by total degree, ties broken lexicographically descending.

    The deterministic processing order for generator searches.
    """
    return sorted(degrees, key=lambda a: (md_total(a), a), reverse=True)


@dataclass(frozen=True)
class DegreeBox:
    """The degrees a with lo <= a <= b termwise."""

    lo: Multidegree
    hi: Multidegree

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(int(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(int(v) for v in self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners of different lengths")
        if not md_leq(self.lo, self.hi):
            raise ValueError(f"empty box {self.lo}..{self.hi}")

    def __contains__(self, a) -> bool:
        return md_leq(self.lo, a) and md_leq(a, self.hi)

    def __iter__(self) -> Iterator[Multidegree]:
        ranges = [range(l, h + 1) for l, h in zip(self.lo, self.hi)]
        return iter(itertools.product(*ranges))

    def grow(self, m: int) -> "DegreeBox":
        return DegreeBox(tuple(v - m for v in self.lo), tuple(v + m for v in self.hi))

    def size(self) -> int:
        s = 1
        for l, h in zip(self.lo, self.hi):
            s *= h - l + 1
        return s
