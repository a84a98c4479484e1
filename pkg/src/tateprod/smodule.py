"""Finitely generated multigraded modules over the Cox ring, by presentation.

Graded pieces are computed as cokernels of degree slices of the relation
matrix on monomial bases; no Groebner machinery.  Monomials are exponent
tuples over the same block-major variable layout as the exterior side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .linalg import ReducedSpan
from .ring import DegreeBox, Multidegree, RingSpec, md_add, md_check, md_leq, md_sub

Expvec = tuple[int, ...]


@lru_cache(maxsize=None)
def s_monomials(ring: RingSpec, q: Multidegree) -> tuple[Expvec, ...]:
    """Exponent vectors of the Cox-ring monomials of multidegree q."""
    if any(v < 0 for v in q):
        return ()
    per_block = []
    for i, qi in enumerate(q):
        width = ring.n[i] + 1
        block = []
        for cuts in itertools.combinations(range(qi + width - 1), width - 1):
            expo, prev = [], -1
            for c in cuts:
                expo.append(c - prev - 1)
                prev = c
            expo.append(qi + width - 2 - prev)
            block.append(tuple(expo))
        per_block.append(sorted(block, reverse=True))
    out = []
    for parts in itertools.product(*per_block):
        expo = tuple(v for part in parts for v in part)
        out.append(expo)
    return tuple(out)


def s_dim(ring: RingSpec, q: Multidegree) -> int:
    from math import comb

    d = 1
    for qi, ni in zip(q, ring.n):
        if qi < 0:
            return 0
        d *= comb(qi + ni, ni)
    return d


def exp_degree(ring: RingSpec, expo: Expvec) -> Multidegree:
    deg = [0] * ring.t
    for slot, e in enumerate(expo):
        deg[ring.var_block[slot]] += e
    return tuple(deg)


@dataclass(frozen=True)
class GradedPiece:
    """Monomial-coset basis of one graded piece of a presented module."""

    degree: Multidegree
    ambient: tuple  # [(gen index, exponent vector)]
    span: ReducedSpan  # relation subspace inside the ambient piece
    coset_coords: tuple[int, ...]  # ambient coordinates forming the basis

    @property
    def dim(self) -> int:
        return len(self.coset_coords)

    def ambient_index(self) -> dict:
        return {be: i for i, be in enumerate(self.ambient)}

    def project(self, vecs: np.ndarray) -> np.ndarray:
        """Ambient row vectors -> coset coordinates."""
        if not self.ambient:
            return linalg.zeros(np.atleast_2d(vecs).shape[0], 0)
        return self.span.reduce(vecs)[:, list(self.coset_coords)]


class SPresentation:
    """coker of a multihomogeneous relation matrix over S.

    `gens` are generator multidegrees; each relation is a column, a dict
    gen-index -> {exponent vector: coefficient}, homogeneous of one degree.
    """

    def __init__(self, ring: RingSpec, gens, relations=()):
        self.ring = ring
        self.gens = tuple(md_check(ring, g) for g in gens)
        cols = []
        for col in relations:
            deg = None
            norm: dict[int, dict[Expvec, int]] = {}
            for row, poly in col.items():
                row = int(row)
                if not 0 <= row < len(self.gens):
                    raise ValueError(f"relation row {row} out of range")
                for expo, c in poly.items():
                    expo = tuple(int(v) for v in expo)
                    if len(expo) != ring.nvars:
                        raise ValueError(f"exponent vector {expo} has wrong length")
                    c = int(c) % ring.p
                    if c == 0:
                        continue
                    d = md_add(self.gens[row], exp_degree(ring, expo))
                    if deg is None:
                        deg = d
                    elif d != deg:
                        raise ValueError("inhomogeneous relation column")
                    norm.setdefault(row, {})[expo] = c
            if norm:
                cols.append((deg, norm))
        self.relations = tuple(cols)
        self._pieces: dict[Multidegree, GradedPiece] = {}
        self._mult: dict = {}

    def twist(self, c: Multidegree) -> "SPresentation":
        """M(c), with M(c)_a = M_{c+a}: generator degrees drop by c."""
        c = md_check(self.ring, c)
        rel = [
            {row: dict(poly) for row, poly in col.items()}
            for _, col in self.relations
        ]
        return SPresentation(
            self.ring, [md_sub(g, c) for g in self.gens], rel
        )

    def piece(self, a: Multidegree) -> GradedPiece:
        a = md_check(self.ring, a)
        got = self._pieces.get(a)
        if got is not None:
            return got
        ambient = [
            (k, expo)
            for k, g in enumerate(self.gens)
            for expo in s_monomials(self.ring, md_sub(a, g))
        ]
        index = {be: i for i, be in enumerate(ambient)}
        rows = []
        for deg, col in self.relations:
            shift = md_sub(a, deg)
            if any(v < 0 for v in shift):
                continue
            for gamma in s_monomials(self.ring, shift):
                vec = linalg.zeros(1, len(ambient)).reshape(-1)
                for row, poly in col.items():
                    for expo, c in poly.items():
                        full = tuple(x + y for x, y in zip(expo, gamma))
                        vec[index[(row, full)]] = (vec[index[(row, full)]] + c) % self.ring.p
                rows.append(vec)
        span = ReducedSpan(
            len(ambient),
            self.ring.p,
            np.array(rows, dtype=np.int64) if rows else None,
        )
        got = GradedPiece(a, tuple(ambient), span, tuple(span.complement()))
        self._pieces[a] = got
        return got

    def dim(self, a: Multidegree) -> int:
        return self.piece(a).dim

    def mult_map(self, a: Multidegree, i: int, j: int) -> np.ndarray:
        """Matrix of x_{i,j}: M_a -> M_{a+1_i} on the coset bases."""
        a = md_check(self.ring, a)
        key = (a, i, j)
        got = self._mult.get(key)
        if got is not None:
            return got
        src = self.piece(a)
        tgt = self.piece(md_add(a, self.ring.unit(i)))
        slot = self.ring.var_slot(i, j)
        tgt_index = tgt.ambient_index()
        mat = linalg.zeros(tgt.dim, src.dim)
        if src.dim and tgt.dim:
            imgs = linalg.zeros(src.dim, len(tgt.ambient))
            for pos, amb_idx in enumerate(src.coset_coords):
                k, expo = src.ambient[amb_idx]
                up = list(expo)
                up[slot] += 1
                imgs[pos, tgt_index[(k, tuple(up))]] = 1
            mat = tgt.project(imgs).T.copy()
        self._mult[key] = mat
        return mat

    def socle_free_on(self, box: DegreeBox) -> bool:
        """No element of M in `box` is annihilated by every linear form."""
        for a in box:
            src = self.piece(a)
            if src.dim == 0:
                continue
            stacked = [
                self.mult_map(a, i, j)
                for i in range(self.ring.t)
                for j in range(self.ring.n[i] + 1)
            ]
            mat = np.vstack(stacked) if stacked else linalg.zeros(0, src.dim)
            if linalg.rank(mat, self.ring.p) < src.dim:
                return False
        return True

    def to_json(self) -> dict:
        rels = []
        for _, col in self.relations:
            rels.append(
                [
                    {"row": row, "terms": [[c, list(expo)] for expo, c in sorted(poly.items())]}
                    for row, poly in sorted(col.items())
                ]
            )
        return {
            "generators": [list(g) for g in self.gens],
            "relations": rels,
        }

    @staticmethod
    def from_json(ring: RingSpec, data: dict) -> "SPresentation":
        rels = []
        for col in data.get("relations", []):
            out: dict[int, dict[Expvec, int]] = {}
            for part in col:
                poly = out.setdefault(int(part["row"]), {})
                for c, expo in part["terms"]:
                    expo = tuple(int(v) for v in expo)
                    poly[expo] = poly.get(expo, 0) + int(c)
            rels.append(out)
        return SPresentation(ring, [tuple(g) for g in data["generators"]], rels)


def free_sum(ring: RingSpec, gen_degrees) -> SPresentation:
    """Direct sum of twisted frees: S(-g_1) + ... (no relations)."""
    return SPresentation(ring, gen_degrees, [])


def line_bundle_module(ring: RingSpec, c: Multidegree) -> SPresentation:
    """Sections module of O(c): the twisted free S(c), one generator at -c."""
    return SPresentation(ring, [md_sub(ring.zero(), md_check(ring, c))], [])


def line_bundle_sum(ring: RingSpec, summands) -> SPresentation:
    """Sections of a direct sum; summands = [(c, multiplicity)]."""
    gens = []
    for c, mult in summands:
        gens.extend([md_sub(ring.zero(), md_check(ring, c))] * mult)
    return SPresentation(ring, gens, [])


def monomial_quotient(ring: RingSpec, monomials) -> SPresentation:
    """S modulo the monomial ideal generated by the given exponent vectors."""
    rels = []
    for expo in monomials:
        expo = tuple(int(v) for v in expo)
        rels.append({0: {expo: 1}})
    return SPresentation(ring, [ring.zero()], rels)


def variable_exp(ring: RingSpec, pairs) -> Expvec:
    """Exponent vector of the monomial prod x_{i,j} over (i, j) pairs."""
    e = [0] * ring.nvars
    for i, j in pairs:
        e[ring.var_slot(i, j)] += 1
    return tuple(e)


def koszul_syzygy_module(ring: RingSpec) -> SPresentation:
    """Sections module of the tautological subbundle on a single P^n.

    For t = 1 this is the first syzygy module of (x_0, ..., x_n), twisted so
    that generators sit in degree 1: coker of the third Koszul differential.
    """
    if ring.t != 1:
        raise ValueError("tautological subbundle module implemented for one factor")
    nv = ring.nvars
    pairs = list(itertools.combinations(range(nv), 2))
    pair_index = {pq: i for i, pq in enumerate(pairs)}
    gens = [(1,)] * len(pairs)
    rels = []
    for a, b, c in itertools.combinations(range(nv), 3):
        col: dict[int, dict[Expvec, int]] = {}
        for sign, var, pair in (
            (1, a, (b, c)),
            (-1, b, (a, c)),
            (1, c, (a, b)),
        ):
            expo = [0] * nv
            expo[var] = 1
            col.setdefault(pair_index[pair], {})[tuple(expo)] = sign
        rels.append(col)
    return SPresentation(ring, gens, rels)
