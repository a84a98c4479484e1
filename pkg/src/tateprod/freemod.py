"""Free multigraded modules over the exterior algebra and their complexes.

A free module is a list of twists b_k, the summands omega(b_k) of the
injective/free generator omega = Hom_K(E, K); omega(b) is nonzero exactly in
degrees a with 0 <= a+b <= n+1^t, where its dimension is prod C(n_i+1, a_i+b_i).
Matrices carry one homogeneous exterior element per (target, source) summand
pair and expand to F_p matrices on dual-monomial bases degree by degree.

Complexes are cohomologically indexed: diff(d) maps term(d) -> term(d+1) and
carries a certified homological window [lo, hi].  The Betti ledger labels the
summand omega(-a) of term d by (d, a).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .exterior import ExteriorElement, tables
from .ring import (
    DegreeBox,
    Multidegree,
    RingSpec,
    md_add,
    md_max,
    md_min,
    md_neg,
    md_sub,
    md_total,
)


@dataclass(frozen=True)
class FreeEModule:
    ring: RingSpec
    twists: tuple[Multidegree, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "twists", tuple(tuple(int(v) for v in b) for b in self.twists)
        )
        for b in self.twists:
            if len(b) != self.ring.t:
                raise ValueError(f"twist {b} has wrong length for {self.ring}")

    @property
    def rank(self) -> int:
        return len(self.twists)

    def is_zero(self) -> bool:
        return not self.twists

    def summand_dims(self, a: Multidegree) -> list[int]:
        T = tables(self.ring)
        return [len(T.monomials(md_add(a, b))) for b in self.twists]

    def dim(self, a: Multidegree) -> int:
        return sum(self.summand_dims(a))

    @cached_property
    def _basis_cache(self) -> dict:
        return {}

    def basis(self, a: Multidegree) -> list[tuple[int, int]]:
        """Dual-monomial basis [(summand, mask)] of the degree-a piece."""
        a = tuple(a)
        got = self._basis_cache.get(a)
        if got is None:
            T = tables(self.ring)
            got = [
                (k, m)
                for k, b in enumerate(self.twists)
                for m in T.monomials(md_add(a, b))
            ]
            self._basis_cache[a] = got
        return got

    def basis_offsets(self, a: Multidegree) -> list[int]:
        offs, acc = [], 0
        for d in self.summand_dims(a):
            offs.append(acc)
            acc += d
        return offs

    def support_box(self) -> DegreeBox | None:
        """Smallest degree box containing every nonzero piece."""
        if not self.twists:
            return None
        lo = hi = md_neg(self.twists[0])
        for b in self.twists[1:]:
            lo = md_min(lo, md_neg(b))
            hi = md_max(hi, md_neg(b))
        return DegreeBox(lo, md_add(hi, self.ring.top))

    def support_degrees(self) -> list[Multidegree]:
        box = self.support_box()
        if box is None:
            return []
        return [a for a in box if self.dim(a)]

    def twist(self, c: Multidegree) -> "FreeEModule":
        return FreeEModule(self.ring, tuple(md_add(b, c) for b in self.twists))

    def generator_degree(self, k: int) -> Multidegree:
        """Internal degree of the free generator of summand k."""
        return md_sub(self.ring.top, self.twists[k])

    def __add__(self, other: "FreeEModule") -> "FreeEModule":
        return FreeEModule(self.ring, self.twists + other.twists)


class EMatrix:
    """Homogeneous matrix between free modules; entry (k,l) in E_{b_k - b_l}.

    Entries act on dual bases by contraction; composition multiplies the later
    entry on the left.  Degree slices are cached.
    """

    def __init__(self, source: FreeEModule, target: FreeEModule, entries: dict):
        if source.ring != target.ring:
            raise ValueError("matrix between modules over different rings")
        self.ring = source.ring
        self.source = source
        self.target = target
        clean = {}
        for (k, l), e in entries.items():
            if e is None or e.is_zero():
                continue
            want = md_sub(target.twists[k], source.twists[l])
            if e.degree != want:
                raise ValueError(
                    f"entry ({k},{l}) has degree {e.degree}, expected {want}"
                )
            clean[(k, l)] = e
        self.entries = clean
        self._slices: dict[Multidegree, np.ndarray] = {}

    @staticmethod
    def zero(source: FreeEModule, target: FreeEModule) -> "EMatrix":
        return EMatrix(source, target, {})

    @staticmethod
    def identity(f: FreeEModule) -> "EMatrix":
        one = {
            (k, k): ExteriorElement.scalar(f.ring, 1) for k in range(f.rank)
        }
        return EMatrix(f, f, one)

    def is_zero(self) -> bool:
        return not self.entries

    def slice(self, a: Multidegree) -> np.ndarray:
        """The induced map (source)_a -> (target)_a on dual-monomial bases."""
        a = tuple(a)
        got = self._slices.get(a)
        if got is not None:
            return got
        T = tables(self.ring)
        p = self.ring.p
        rows, cols = self.target.dim(a), self.source.dim(a)
        mat = linalg.zeros(rows, cols)
        if rows and cols:
            s_offs = self.source.basis_offsets(a)
            t_offs = self.target.basis_offsets(a)
            for (k, l), e in self.entries.items():
                q_src = md_add(a, self.source.twists[l])
                if not T.profile_ok(q_src) or not T.monomials(q_src):
                    continue
                for nu, c in e.terms:
                    src, dst, sgn = T.contract_table(nu, q_src)
                    if src.size:
                        np.add.at(
                            mat,
                            (t_offs[k] + dst, s_offs[l] + src),
                            c * sgn,
                        )
            mat %= p
        self._slices[a] = mat
        return mat

    def compose(self, other: "EMatrix") -> "EMatrix":
        """self o other (other applied first)."""
        if other.target.twists != self.source.twists:
            raise ValueError("composition shape mismatch")
        by_col: dict[int, list[tuple[int, ExteriorElement]]] = {}
        for (j, k), e in self.entries.items():
            by_col.setdefault(k, []).append((j, e))
        acc: dict[tuple[int, int], ExteriorElement] = {}
        for (k, l), e2 in other.entries.items():
            for j, e1 in by_col.get(k, ()):
                prod = e1 * e2
                if prod.is_zero():
                    continue
                prev = acc.get((j, l))
                acc[(j, l)] = prod if prev is None else prev + prod
        return EMatrix(other.source, self.target, acc)

    def __matmul__(self, other: "EMatrix") -> "EMatrix":
        return self.compose(other)

    def add(self, other: "EMatrix") -> "EMatrix":
        acc = dict(self.entries)
        for key, e in other.entries.items():
            prev = acc.get(key)
            acc[key] = e if prev is None else prev + e
        return EMatrix(self.source, self.target, acc)

    def scale(self, c: int) -> "EMatrix":
        return EMatrix(
            self.source, self.target, {k: e.scale(c) for k, e in self.entries.items()}
        )

    def restrict(self, row_idx: list[int], col_idx: list[int]) -> "EMatrix":
        rpos = {k: i for i, k in enumerate(row_idx)}
        cpos = {l: i for i, l in enumerate(col_idx)}
        source = FreeEModule(self.ring, tuple(self.source.twists[l] for l in col_idx))
        target = FreeEModule(self.ring, tuple(self.target.twists[k] for k in row_idx))
        ent = {
            (rpos[k], cpos[l]): e
            for (k, l), e in self.entries.items()
            if k in rpos and l in cpos
        }
        return EMatrix(source, target, ent)

    def hstack(self, other: "EMatrix") -> "EMatrix":
        """Concatenate sources (same target): [self | other]."""
        if other.target.twists != self.target.twists:
            raise ValueError("hstack target mismatch")
        off = self.source.rank
        ent = dict(self.entries)
        for (k, l), e in other.entries.items():
            ent[(k, l + off)] = e
        return EMatrix(self.source + other.source, self.target, ent)

    def unit_entries(self) -> list[tuple[int, int, int]]:
        """(k, l, scalar) for entries that are nonzero constants."""
        zero_deg = (0,) * self.ring.t
        out = []
        for (k, l), e in sorted(self.entries.items()):
            if e.degree == zero_deg:
                out.append((k, l, e.terms[0][1]))
        return out

    def is_minimal(self) -> bool:
        return not self.unit_entries()

    def twist(self, c: Multidegree) -> "EMatrix":
        return EMatrix(self.source.twist(c), self.target.twist(c), self.entries)


def vector_to_entries(
    f: FreeEModule, a: Multidegree, vec: np.ndarray
) -> dict[int, ExteriorElement]:
    """Express a degree-a vector of F as entries of a map omega(top - a) -> F.

    The free generator of omega(top - a) is the dual of the full monomial;
    entry l sends it to the summand-l component of `vec`.
    """
    T = tables(f.ring)
    top = T.top_mask
    out: dict[int, ExteriorElement] = {}
    offs = f.basis_offsets(a)
    for l, b in enumerate(f.twists):
        monos = T.monomials(md_add(a, b))
        terms = {}
        for i, m in enumerate(monos):
            c = int(vec[offs[l] + i]) % f.ring.p
            if c:
                comp = top ^ m
                terms[comp] = c * T.sign_mul(m, comp)
        if terms:
            deg = md_sub(md_add(a, b), f.ring.top)
            out[l] = ExteriorElement.make(f.ring, deg, terms)
    return out


def columns_matrix(
    f: FreeEModule, gens: list[tuple[Multidegree, np.ndarray]]
) -> EMatrix:
    """Map from a free module onto the given degree-labeled vectors of F."""
    ring = f.ring
    twists = tuple(md_sub(ring.top, a) for a, _ in gens)
    source = FreeEModule(ring, twists)
    entries = {}
    for j, (a, vec) in enumerate(gens):
        for l, e in vector_to_entries(f, a, vec).items():
            entries[(l, j)] = e
    return EMatrix(source, f, entries)


def generator_column(f: FreeEModule, k: int) -> np.ndarray:
    """Coordinates of summand k's free generator inside its degree piece."""
    T = tables(f.ring)
    a = f.generator_degree(k)
    basis = f.basis(a)
    vec = linalg.zeros(len(basis), 1).reshape(-1)
    vec[basis.index((k, T.top_mask))] = 1
    return vec


class ChainMap:
    """Degreewise homogeneous map of complexes; phi(d): A^d -> B^d."""

    def __init__(self, source: "FreeEComplex", target: "FreeEComplex", maps: dict):
        self.source = source
        self.target = target
        self.maps = {d: m for d, m in maps.items() if not m.is_zero()}

    def map_at(self, d: int) -> EMatrix:
        got = self.maps.get(d)
        if got is None:
            return EMatrix.zero(self.source.term(d), self.target.term(d))
        return got

    def is_chain_map(self, lo: int, hi: int) -> bool:
        for d in range(lo, hi):
            lhs = self.target.diff(d) @ self.map_at(d)
            rhs = self.map_at(d + 1) @ self.source.diff(d)
            if not lhs.add(rhs.scale(-1)).is_zero():
                return False
        return True


class FreeEComplex:
    """Cohomologically indexed complex of free modules, windowed.

    Differentials are certified for lo <= d < hi; terms exist for
    lo <= d <= hi.  Instances are treated as immutable.
    """

    def __init__(self, ring: RingSpec, terms: dict, diffs: dict, lo: int, hi: int):
        self.ring = ring
        self.terms = {d: t for d, t in terms.items() if not t.is_zero()}
        self.diffs = {d: m for d, m in diffs.items() if not m.is_zero()}
        self.lo = lo
        self.hi = hi
        for d, m in self.diffs.items():
            if m.source.twists != self.term(d).twists:
                raise ValueError(f"diff({d}) source mismatch")
            if m.target.twists != self.term(d + 1).twists:
                raise ValueError(f"diff({d}) target mismatch")

    @staticmethod
    def zero(ring: RingSpec, lo: int = 0, hi: int = 0) -> "FreeEComplex":
        return FreeEComplex(ring, {}, {}, lo, hi)

    def term(self, d: int) -> FreeEModule:
        got = self.terms.get(d)
        if got is None:
            return FreeEModule(self.ring, ())
        return got

    def diff(self, d: int) -> EMatrix:
        got = self.diffs.get(d)
        if got is None:
            return EMatrix.zero(self.term(d), self.term(d + 1))
        return got

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def betti(self) -> dict[tuple[int, Multidegree], int]:
        """(d, a) -> multiplicity of omega(-a) in term d."""
        out: dict[tuple[int, Multidegree], int] = {}
        for d, t in self.terms.items():
            for b in t.twists:
                key = (d, md_neg(b))
                out[key] = out.get(key, 0) + 1
        return out

    def check_squares(self) -> bool:
        """d(d+1) o d(d) == 0 as exterior matrices, inside the window."""
        for d in range(self.lo, self.hi - 1):
            if not (self.diff(d + 1) @ self.diff(d)).is_zero():
                return False
        return True

    def internal_degrees(self) -> list[Multidegree]:
        """All internal degrees where some term inside the window is nonzero."""
        seen = set()
        for d in range(self.lo, self.hi + 1):
            t = self.terms.get(d)
            if t is not None:
                seen.update(t.support_degrees())
        return sorted(seen)

    def slice_homology(self, b: Multidegree) -> dict[int, int]:
        """dim H^d of the degree-b strand of scalars, for lo < d < hi."""
        dims = {d: self.term(d).dim(b) for d in range(self.lo, self.hi + 1)}
        ranks = {
            d: linalg.rank(self.diff(d).slice(b), self.ring.p)
            for d in range(self.lo, self.hi)
        }
        out = {}
        for d in range(self.lo + 1, self.hi):
            out[d] = dims[d] - ranks.get(d, 0) - ranks.get(d - 1, 0)
        return out

    def is_exact_interior(self, b: Multidegree) -> bool:
        return all(v == 0 for v in self.slice_homology(b).values())

    def shift_twist(self, c: Multidegree, k: int) -> "FreeEComplex":
        """T(c)[k], with T(c)[k]^d = T^{k+d}(c) and differential sign (-1)^k."""
        terms = {d - k: t.twist(c) for d, t in self.terms.items()}
        sign = -1 if k % 2 else 1
        diffs = {}
        for d, m in self.diffs.items():
            mm = m.twist(c)
            diffs[d - k] = mm if sign == 1 else mm.scale(-1)
        return FreeEComplex(self.ring, terms, diffs, self.lo - k, self.hi - k)

    def select(self, keep) -> "FreeEComplex":
        """Subquotient keeping summands whose label a = -twist passes `keep`."""
        kept = {
            d: [k for k, b in enumerate(t.twists) if keep(md_neg(b))]
            for d, t in self.terms.items()
        }
        terms = {
            d: FreeEModule(self.ring, tuple(self.term(d).twists[k] for k in idx))
            for d, idx in kept.items()
            if idx
        }
        diffs = {}
        for d in range(self.lo, self.hi):
            rows = kept.get(d + 1, [])
            cols = kept.get(d, [])
            if rows and cols and d in self.diffs:
                m = self.diffs[d].restrict(rows, cols)
                if not m.is_zero():
                    diffs[d] = m
        return FreeEComplex(self.ring, terms, diffs, self.lo, self.hi)

    def block(self, d: int, keep_src, keep_tgt) -> EMatrix:
        """The diff(d) block from summands with label in keep_src to keep_tgt."""
        cols = [k for k, b in enumerate(self.term(d).twists) if keep_src(md_neg(b))]
        rows = [k for k, b in enumerate(self.term(d + 1).twists) if keep_tgt(md_neg(b))]
        return self.diff(d).restrict(rows, cols)

    def minimize(self) -> "FreeEComplex":
        """Cancel unit entries; homology on interior slices is unchanged."""
        alive = {d: [True] * t.rank for d, t in self.terms.items()}
        ents = {d: dict(m.entries) for d, m in self.diffs.items()}

        def live_entries(d):
            return {
                (k, l): e
                for (k, l), e in ents.get(d, {}).items()
                if alive.get(d + 1, [])[k] and alive.get(d, [])[l]
            }

        changed = True
        while changed:
            changed = False
            for d in sorted(ents):
                cur = live_entries(d)
                pivot = None
                zero_deg = (0,) * self.ring.t
                for (k, l), e in sorted(cur.items()):
                    if e.degree == zero_deg:
                        pivot = (k, l, e.terms[0][1])
                        break
                if pivot is None:
                    continue
                k0, l0, u = pivot
                uinv = pow(u, self.ring.p - 2, self.ring.p)
                row = {l: e for (k, l), e in cur.items() if k == k0 and l != l0}
                col = {k: e for (k, l), e in cur.items() if l == l0 and k != k0}
                for k, beta in col.items():
                    for l, gamma in row.items():
                        corr = (beta * gamma).scale(-uinv)
                        prev = ents[d].get((k, l))
                        new = corr if prev is None else prev + corr
                        if new.is_zero():
                            ents[d].pop((k, l), None)
                        else:
                            ents[d][(k, l)] = new
                alive[d][l0] = False
                alive[d + 1][k0] = False
                changed = True

        new_terms = {}
        remap = {}
        for d, t in self.terms.items():
            idx = [k for k, ok in enumerate(alive[d]) if ok]
            remap[d] = {k: i for i, k in enumerate(idx)}
            if idx:
                new_terms[d] = FreeEModule(self.ring, tuple(t.twists[k] for k in idx))
        new_diffs = {}
        for d, dd in ents.items():
            src, tgt = remap.get(d, {}), remap.get(d + 1, {})
            kept = {
                (tgt[k], src[l]): e
                for (k, l), e in dd.items()
                if k in tgt and l in src
            }
            if kept:
                s = new_terms.get(d, FreeEModule(self.ring, ()))
                t = new_terms.get(d + 1, FreeEModule(self.ring, ()))
                new_diffs[d] = EMatrix(s, t, kept)
        return FreeEComplex(self.ring, new_terms, new_diffs, self.lo, self.hi)


def cone(phi: ChainMap) -> FreeEComplex:
    """Mapping cone of phi: A -> B; term d is B^d + A^{d+1}.

    Differential ledger: [[d_B, phi], [0, -d_A]].
    """
    A, B = phi.source, phi.target
    ring = A.ring
    lo, hi = max(A.lo - 1, B.lo), min(A.hi - 1, B.hi)
    terms, diffs = {}, {}
    for d in range(lo, hi + 1):
        terms[d] = B.term(d) + A.term(d + 1)
    for d in range(lo, hi):
        src, tgt = terms[d], terms[d + 1]
        ents = {}
        for (k, l), e in B.diff(d).entries.items():
            ents[(k, l)] = e
        rb = B.term(d + 1).rank
        cb = B.term(d).rank
        for (k, l), e in phi.map_at(d + 1).entries.items():
            ents[(k, cb + l)] = e
        for (k, l), e in A.diff(d + 1).entries.items():
            ents[(rb + k, cb + l)] = e.scale(-1)
        m = EMatrix(src, tgt, ents)
        if not m.is_zero():
            diffs[d] = m
    return FreeEComplex(ring, {d: t for d, t in terms.items()}, diffs, lo, hi)


def betti_bands(betti: dict[tuple[int, Multidegree], int]) -> dict[int, dict[int, int]]:
    """Aggregate a Betti ledger into bands: row d-|a|, column d."""
    rows: dict[int, dict[int, int]] = {}
    for (d, a), mult in betti.items():
        r = d - md_total(a)
        rows.setdefault(r, {})
        rows[r][d] = rows[r].get(d, 0) + mult
    return rows


def format_betti_bands(
    betti: dict[tuple[int, Multidegree], int], col_shift: int = 0
) -> str:
    """Two-row-index Betti display: one line per band d-|a|, columns d."""
    bands = betti_bands(betti)
    if not bands:
        return "(zero complex)"
    cols = sorted({d for row in bands.values() for d in row})
    cols = list(range(cols[0], cols[-1] + 1))
    width = max(
        [len(str(c + col_shift)) for c in cols]
        + [len(str(v)) for row in bands.values() for v in row.values()]
    )
    lines = [
        "     " + " ".join(f"{c + col_shift:>{width}}" for c in cols)
    ]
    for r in sorted(bands, reverse=True):
        row = bands[r]
        cells = " ".join(
            f"{row[d]:>{width}}" if d in row else " " * (width - 1) + "." for d in cols
        )
        lines.append(f"{r:>3}: " + cells)
    return "\n".join(lines)
