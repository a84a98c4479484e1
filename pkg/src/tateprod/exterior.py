"""Exterior-monomial arithmetic with Koszul signs.

Monomials of the exterior algebra E on one variable per (block, index) slot
are stored as bitmasks over the block-major variable layout of the ring; an
element is a dict mask -> coefficient, homogeneous of one multidegree.  The
degree of a monomial using q_i variables from block i is (-q_1, ..., -q_t).

Two sign conventions are fixed once:

* products sort concatenated variable lists, sign = parity of the merge;
* contraction of a dual basis tensor removes variables from the right, i.e.
  a single variable contracts the rightmost matching slot with sign +1.

Contraction is the left action (e.w)(f) = w(f e) on dual tensors, the unique
one commuting with the right module structure, so morphisms of free modules
and the contraction operator are literally the same tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ring import Multidegree, RingSpec, md_add

Mask = int


def popcount(m: int) -> int:
    return m.bit_count()


@lru_cache(maxsize=None)
def tables(ring: RingSpec) -> "MonomialTables":
    return MonomialTables(ring)


class MonomialTables:
    """Per-ring monomial enumeration, signs, and contraction tables."""

    def __init__(self, ring: RingSpec):
        self.ring = ring
        self.nvars = ring.nvars
        self.top_mask: Mask = (1 << self.nvars) - 1
        self._block_masks = []
        for i, start in enumerate(ring.block_start):
            width = ring.n[i] + 1
            self._block_masks.append(((1 << width) - 1) << start)
        self._mono_cache: dict[tuple, tuple[Mask, ...]] = {}
        self._index_cache: dict[tuple, dict[Mask, int]] = {}
        self._action_cache: dict[tuple[Mask, tuple], tuple] = {}

    def profile(self, mask: Mask) -> tuple[int, ...]:
        """Variable count per block; the monomial has degree -profile."""
        return tuple(popcount(mask & bm) for bm in self._block_masks)

    def profile_ok(self, q) -> bool:
        return all(0 <= qi <= ni + 1 for qi, ni in zip(q, self.ring.n))

    def monomials(self, q) -> tuple[Mask, ...]:
        """All masks with the given per-block counts, ascending."""
        q = tuple(q)
        got = self._mono_cache.get(q)
        if got is not None:
            return got
        if not self.profile_ok(q):
            self._mono_cache[q] = ()
            return ()
        per_block = []
        for i, qi in enumerate(q):
            start = self.ring.block_start[i]
            slots = range(start, start + self.ring.n[i] + 1)
            per_block.append(
                [sum(1 << s for s in comb) for comb in itertools.combinations(slots, qi)]
            )
        masks = tuple(
            sorted(sum(parts) for parts in itertools.product(*per_block))
        )
        self._mono_cache[q] = masks
        return masks

    def index(self, q) -> dict[Mask, int]:
        q = tuple(q)
        got = self._index_cache.get(q)
        if got is None:
            got = {m: i for i, m in enumerate(self.monomials(q))}
            self._index_cache[q] = got
        return got

    @staticmethod
    def sign_mul(m1: Mask, m2: Mask) -> int:
        """Sign of m1 * m2 (0 on overlap): parity of merge inversions."""
        if m1 & m2:
            return 0
        sign = 1
        rest = m2
        while rest:
            v = rest & -rest
            if popcount(m1 >> v.bit_length()) & 1:
                sign = -sign
            rest ^= v
        return sign

    def contract_table(self, nu: Mask, q_src) -> tuple:
        """Vectorized action of the monomial nu on dual tensors of profile q_src.

        Returns (src_idx, dst_idx, sign) arrays: nu . m* = sign * (m - nu)*
        for every m of profile q_src containing nu; targets have profile
        q_src - profile(nu).
        """
        key = (nu, tuple(q_src))
        got = self._action_cache.get(key)
        if got is not None:
            return got
        q_dst = tuple(a - b for a, b in zip(q_src, self.profile(nu)))
        src, dst, sgn = [], [], []
        if self.profile_ok(q_dst):
            dst_index = self.index(q_dst)
            for i, m in enumerate(self.monomials(tuple(q_src))):
                if nu & m == nu:
                    rest = m ^ nu
                    src.append(i)
                    dst.append(dst_index[rest])
                    sgn.append(self.sign_mul(rest, nu))
        got = (
            np.asarray(src, dtype=np.int64),
            np.asarray(dst, dtype=np.int64),
            np.asarray(sgn, dtype=np.int64),
        )
        self._action_cache[key] = got
        return got


@dataclass(frozen=True)
class ExteriorElement:
    """Homogeneous element of E: no zero coefficients, distinct monomials."""

    ring: RingSpec
    degree: Multidegree
    terms: tuple[tuple[Mask, int], ...]

    @staticmethod
    def make(ring: RingSpec, degree, terms) -> "ExteriorElement":
        degree = tuple(int(v) for v in degree)
        if any(v > 0 for v in degree):
            raise ValueError(f"exterior degrees are nonpositive, got {degree}")
        T = tables(ring)
        q = tuple(-v for v in degree)
        clean: dict[Mask, int] = {}
        for mask, c in dict(terms).items():
            c %= ring.p
            if c == 0:
                continue
            if T.profile(mask) != q:
                raise ValueError(f"monomial {mask:b} not of degree {degree}")
            clean[mask] = c
        return ExteriorElement(ring, degree, tuple(sorted(clean.items())))

    @staticmethod
    def variable(ring: RingSpec, i: int, j: int) -> "ExteriorElement":
        return ExteriorElement.make(
            ring, tuple(-int(k == i) for k in range(ring.t)), {1 << ring.var_slot(i, j): 1}
        )

    @staticmethod
    def monomial(ring: RingSpec, pairs, coeff: int = 1) -> "ExteriorElement":
        """Product of the distinct variables (i, j) in `pairs`, in given order."""
        T = tables(ring)
        mask, sign = 0, 1
        for i, j in pairs:
            bit = 1 << ring.var_slot(i, j)
            sign *= T.sign_mul(mask, bit)
            mask |= bit
        if sign == 0:
            deg = tuple(-q for q in T.profile(mask))
            return ExteriorElement.make(ring, deg, {})
        deg = tuple(-q for q in T.profile(mask))
        return ExteriorElement.make(ring, deg, {mask: coeff * sign})

    @staticmethod
    def scalar(ring: RingSpec, c: int) -> "ExteriorElement":
        return ExteriorElement.make(ring, (0,) * ring.t, {0: c})

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c: int) -> "ExteriorElement":
        return ExteriorElement.make(
            self.ring, self.degree, {m: v * c for m, v in self.terms}
        )

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError("sum of elements of different degrees")
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return ExteriorElement.make(self.ring, self.degree, acc)

    def __neg__(self) -> "ExteriorElement":
        return self.scale(-1)

    def __sub__(self, other: "ExteriorElement") -> "ExteriorElement":
        return self + (-other)

    def __mul__(self, other: "ExteriorElement") -> "ExteriorElement":
        return ext_mul(self, other)


def ext_mul(u: ExteriorElement, v: ExteriorElement) -> ExteriorElement:
    """The product u*v with merge-sort Koszul signs."""
    if u.ring != v.ring:
        raise ValueError("product over different rings")
    T = tables(u.ring)
    degree = md_add(u.degree, v.degree)
    acc: dict[Mask, int] = {}
    for m1, c1 in u.terms:
        for m2, c2 in v.terms:
            s = T.sign_mul(m1, m2)
            if s:
                m = m1 | m2
                acc[m] = acc.get(m, 0) + s * c1 * c2
    return ExteriorElement.make(u.ring, degree, acc)


def contract(e: ExteriorElement, w_mask: Mask) -> dict[Mask, int]:
    """Contraction of a dual basis tensor w* by e; dict of resulting tensors.

    Satisfies contract(u*v, w) = contract(u, contract(v, w)) extended
    bilinearly, and equals the morphism action of e on dual monomial bases.
    """
    T = tables(e.ring)
    p = e.ring.p
    out: dict[Mask, int] = {}
    for nu, c in e.terms:
        if nu & w_mask == nu:
            rest = w_mask ^ nu
            s = T.sign_mul(rest, nu)
            val = (out.get(rest, 0) + s * c) % p
            if val:
                out[rest] = val
            else:
                out.pop(rest, None)
    return out


def contract_many(e: ExteriorElement, w_terms: dict[Mask, int]) -> dict[Mask, int]:
    """Bilinear extension of `contract` to a combination of dual tensors."""
    p = e.ring.p
    out: dict[Mask, int] = {}
    for w_mask, wc in w_terms.items():
        for m, c in contract(e, w_mask).items():
            val = (out.get(m, 0) + wc * c) % p
            if val:
                out[m] = val
            else:
                out.pop(m, None)
    return out


def act_right(w_mask: Mask, e: ExteriorElement) -> dict[Mask, int]:
    """The right module action w* . e, removing variables from the left.

    This carries the module structure (as opposed to morphisms); it commutes
    with `contract` and drives the transfer to the symmetric side.
    """
    T = tables(e.ring)
    p = e.ring.p
    out: dict[Mask, int] = {}
    for nu, c in e.terms:
        if nu & w_mask == nu:
            rest = w_mask ^ nu
            s = T.sign_mul(nu, rest)
            val = (out.get(rest, 0) + s * c) % p
            if val:
                out[rest] = val
            else:
                out.pop(rest, None)
    return out


def dual_sign(mask: Mask, ring: RingSpec) -> int:
    """tau(x) = (-1)^(k(k-1)/2) x on a monomial of total degree k."""
    k = popcount(mask)
    return -1 if (k * (k - 1) // 2) % 2 else 1


def e_transpose(e: ExteriorElement) -> ExteriorElement:
    """The sign anti-automorphism: tau(a*b) = tau(b)*tau(a)."""
    return ExteriorElement.make(
        e.ring, e.degree, {m: c * dual_sign(m, e.ring) for m, c in e.terms}
    )
