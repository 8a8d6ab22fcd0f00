"""Z/2-graded free modules over a polynomial ring and parity-homogeneous maps.

A :class:`SuperModule` is a free module split into even and odd labelled
summands.  A :class:`ParityMap` stores the full matrix over the combined
basis (even labels first, then odd); its parity dictates which blocks may be
nonzero and the constructor enforces that.  Matrices act on column vectors,
composition is left multiplication, and tensor products follow the Koszul
sign rule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .polynomials import Poly, PolyRing
from .scalars import Scalar

EVEN = 0
ODD = 1


class ShapeError(ValueError):
    """Incompatible map shapes, parities or module contexts."""


@dataclass(frozen=True)
class SuperModule:
    ring: PolyRing
    even_labels: tuple[str, ...]
    odd_labels: tuple[str, ...]

    def __post_init__(self):
        labels = self.even_labels + self.odd_labels
        if len(set(labels)) != len(labels):
            raise ShapeError(f"duplicate basis labels in {labels}")

    @classmethod
    def free(cls, ring: PolyRing, even: int, odd: int, prefix: str = "") -> "SuperModule":
        return cls(
            ring,
            tuple(f"{prefix}e{i}" for i in range(even)),
            tuple(f"{prefix}o{i}" for i in range(odd)),
        )

    @property
    def even_rank(self) -> int:
        return len(self.even_labels)

    @property
    def odd_rank(self) -> int:
        return len(self.odd_labels)

    @property
    def total_rank(self) -> int:
        return self.even_rank + self.odd_rank

    @property
    def labels(self) -> tuple[str, ...]:
        return self.even_labels + self.odd_labels

    def parity(self, index: int) -> int:
        return EVEN if index < self.even_rank else ODD

    def shifted(self) -> "SuperModule":
        """The parity shift: even and odd summands trade places."""
        return SuperModule(self.ring, self.odd_labels, self.even_labels)

    def shift_perm(self) -> list[int]:
        """old basis index -> index of the same basis vector in shifted()."""
        e, o = self.even_rank, self.odd_rank
        return [o + i for i in range(e)] + [i for i in range(o)]

    def __repr__(self) -> str:
        return f"SuperModule({self.even_rank}|{self.odd_rank})"


class ParityMap:
    """A parity-homogeneous module map, stored as a full polynomial matrix."""

    __slots__ = ("source", "target", "parity", "entries")

    def __init__(self, source: SuperModule, target: SuperModule, parity: int,
                 entries: list[list[Poly]] | tuple[tuple[Poly, ...], ...]):
        if source.ring != target.ring:
            raise ShapeError("source and target live over different rings")
        if parity not in (EVEN, ODD):
            raise ShapeError(f"parity must be 0 or 1, got {parity}")
        rows = tuple(tuple(row) for row in entries)
        if len(rows) != target.total_rank or any(len(r) != source.total_rank for r in rows):
            raise ShapeError(
                f"matrix shape {len(rows)}x{len(rows[0]) if rows else 0} does not match "
                f"{target.total_rank}x{source.total_rank}"
            )
        ring = source.ring
        e_t, e_s = target.even_rank, source.even_rank
        for i, row in enumerate(rows):
            for j, p in enumerate(row):
                if p.ring is not ring and p.ring != ring:
                    raise ShapeError(f"entry ({i},{j}) lives in the wrong ring")
                if p.terms and ((i >= e_t) - (j >= e_s)) % 2 != parity:
                    raise ShapeError(
                        f"entry ({i},{j})={p} violates parity "
                        f"({'even' if parity == EVEN else 'odd'} map)"
                    )
        self.source = source
        self.target = target
        self.parity = parity
        self.entries = rows

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, source: SuperModule, target: SuperModule, parity: int) -> "ParityMap":
        z = source.ring.zero
        return cls(source, target,
                   parity, [[z] * source.total_rank for _ in range(target.total_rank)])

    @classmethod
    def identity(cls, module: SuperModule) -> "ParityMap":
        z, one = module.ring.zero, module.ring.one
        n = module.total_rank
        return cls(module, module, EVEN,
                   [[one if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_entries(cls, source, target, parity, entries) -> "ParityMap":
        return cls(source, target, parity, entries)

    # -- basic queries ------------------------------------------------------------

    def entry(self, i: int, j: int) -> Poly:
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParityMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.parity == other.parity and self.entries == other.entries)

    def __repr__(self) -> str:
        tag = "even" if self.parity == EVEN else "odd"
        return f"ParityMap({tag}, {self.source!r} -> {self.target!r})"

    # -- arithmetic ---------------------------------------------------------------

    def compose(self, other: "ParityMap") -> "ParityMap":
        """self after other (matrix product self * other)."""
        if other.target != self.source:
            raise ShapeError(f"cannot compose: {other.target!r} != {self.source!r}")
        ring = self.source.ring
        zero = ring.zero
        n_out, n_mid, n_in = self.target.total_rank, self.source.total_rank, other.source.total_rank
        acc: list[list[dict | None]] = [[None] * n_in for _ in range(n_out)]
        for i in range(n_out):
            row = self.entries[i]
            arow = acc[i]
            for k in range(n_mid):
                a = row[k]
                if not a.terms:
                    continue
                orow = other.entries[k]
                for j in range(n_in):
                    b = orow[j]
                    if not b.terms:
                        continue
                    bucket = arow[j]
                    if bucket is None:
                        bucket = arow[j] = {}
                    for e1, c1 in a.terms.items():
                        for e2, c2 in b.terms.items():
                            e = tuple(x + y for x, y in zip(e1, e2))
                            s = bucket.get(e)
                            s = c1 * c2 if s is None else s + c1 * c2
                            if s.is_zero():
                                bucket.pop(e, None)
                            else:
                                bucket[e] = s
        out = [[zero if bucket is None else Poly(ring, bucket) for bucket in arow]
               for arow in acc]
        return ParityMap(other.source, self.target, (self.parity + other.parity) % 2, out)

    def __add__(self, other: "ParityMap") -> "ParityMap":
        if (other.source, other.target, other.parity) != (self.source, self.target, self.parity):
            raise ShapeError("can only add maps with equal shape and parity")
        return ParityMap(self.source, self.target, self.parity,
                         [[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "ParityMap":
        return ParityMap(self.source, self.target, self.parity,
                         [[-p for p in row] for row in self.entries])

    def __sub__(self, other: "ParityMap") -> "ParityMap":
        return self + (-other)

    def scale(self, c) -> "ParityMap":
        """Multiply every entry by a polynomial or scalar (an even operation)."""
        if isinstance(c, (int, Scalar)):
            c = self.source.ring.const(c)
        if not isinstance(c, Poly):
            raise TypeError(f"cannot scale by {c!r}")
        return ParityMap(self.source, self.target, self.parity,
                         [[p * c for p in row] for row in self.entries])

    # -- structural operations ------------------------------------------------------

    def transposed(self) -> "ParityMap":
        """The dual map: plain transpose between the (self-dual) modules."""
        n_out, n_in = self.source.total_rank, self.target.total_rank
        out = [[self.entries[j][i] for j in range(n_in)] for i in range(n_out)]
        return ParityMap(self.target, self.source, self.parity, out)

    def shifted(self) -> "ParityMap":
        """The same map between the parity-shifted modules."""
        sp = self.source.shift_perm()
        tp = self.target.shift_perm()
        z = self.source.ring.zero
        out = [[z] * self.source.total_rank for _ in range(self.target.total_rank)]
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                if not p.is_zero():
                    out[tp[i]][sp[j]] = p
        return ParityMap(self.source.shifted(), self.target.shifted(), self.parity, out)

    def evaluate(self, point: dict) -> list[list[Scalar]]:
        return [[p.evaluate(point) for p in row] for row in self.entries]


# -----------------------------------------------------------------------------
# module-level operations mirroring the structural calculus
# -----------------------------------------------------------------------------

def compose(f: ParityMap, g: ParityMap) -> ParityMap:
    return f.compose(g)


def dual(x):
    """Dual of a module (self-dual here) or transpose of a map."""
    if isinstance(x, SuperModule):
        return x
    return x.transposed()


def shift(x):
    if isinstance(x, SuperModule):
        return x.shifted()
    return x.shifted()


def parity_unit(module: SuperModule) -> ParityMap:
    """The odd map shifted(module) -> module that is the identity underneath."""
    perm = module.shift_perm()
    z, one = module.ring.zero, module.ring.one
    n = module.total_rank
    out = [[z] * n for _ in range(n)]
    for old, new in enumerate(perm):
        out[old][new] = one
    return ParityMap(module.shifted(), module, ODD, out)


def direct_sum_modules(parts: list[SuperModule],
                       prefixes: list[str] | None = None) -> tuple[SuperModule, list[list[int]]]:
    """Concatenate modules; returns the sum and per-part index embeddings.

    ``embeddings[k][i]`` is the full-basis index in the sum of basis vector
    ``i`` of part ``k``.
    """
    if not parts:
        raise ShapeError("direct sum of no modules")
    ring = parts[0].ring
    if prefixes is None:
        prefixes = [f"s{k}." for k in range(len(parts))]
    even, odd = [], []
    even_pos, odd_pos = [], []
    for k, m in enumerate(parts):
        if m.ring != ring:
            raise ShapeError("direct summands live over different rings")
        even_pos.append(len(even))
        odd_pos.append(len(odd))
        even.extend(prefixes[k] + lbl for lbl in m.even_labels)
        odd.extend(prefixes[k] + lbl for lbl in m.odd_labels)
    total_even = len(even)
    embeddings = []
    for k, m in enumerate(parts):
        emb = [even_pos[k] + i for i in range(m.even_rank)]
        emb += [total_even + odd_pos[k] + i for i in range(m.odd_rank)]
        embeddings.append(emb)
    return SuperModule(ring, tuple(even), tuple(odd)), embeddings


def assemble(target: SuperModule, target_embs: list[list[int]],
             source: SuperModule, source_embs: list[list[int]],
             parity: int, blocks: dict[tuple[int, int], ParityMap]) -> ParityMap:
    """Build a map on direct sums from component maps indexed by (tgt, src) part."""
    z = source.ring.zero
    out = [[z] * source.total_rank for _ in range(target.total_rank)]
    for (ti, si), block in blocks.items():
        temb, semb = target_embs[ti], source_embs[si]
        if block.parity != parity:
            raise ShapeError(f"block ({ti},{si}) has parity {block.parity}, expected {parity}")
        for i, row in enumerate(block.entries):
            for j, p in enumerate(row):
                if not p.is_zero():
                    out[temb[i]][semb[j]] = out[temb[i]][semb[j]] + p
    return ParityMap(source, target, parity, out)


def direct_sum(f: ParityMap, g: ParityMap,
               prefixes: list[str] | None = None) -> ParityMap:
    if f.parity != g.parity:
        raise ShapeError("direct sum needs equal parities")
    src, src_embs = direct_sum_modules([f.source, g.source], prefixes)
    tgt, tgt_embs = direct_sum_modules([f.target, g.target], prefixes)
    return assemble(tgt, tgt_embs, src, src_embs, f.parity, {(0, 0): f, (1, 1): g})


def tensor_module(m: SuperModule, n: SuperModule) -> tuple[SuperModule, dict[tuple[int, int], int]]:
    """Tensor product module with pair-basis ordered lexicographically.

    Returns the module and the map (i, j) -> full index, where i, j run over
    the full bases of the factors.
    """
    if m.ring != n.ring:
        raise ShapeError("tensor factors live over different rings")
    even, odd = [], []
    placement = {}
    for i in range(m.total_rank):
        for j in range(n.total_rank):
            label = f"{m.labels[i]}*{n.labels[j]}"
            if (m.parity(i) + n.parity(j)) % 2 == EVEN:
                placement[(i, j)] = (EVEN, len(even))
                even.append(label)
            else:
                placement[(i, j)] = (ODD, len(odd))
                odd.append(label)
    module = SuperModule(m.ring, tuple(even), tuple(odd))
    index = {}
    for key, (par, pos) in placement.items():
        index[key] = pos if par == EVEN else len(even) + pos
    return module, index


def tensor(f: ParityMap, g: ParityMap) -> ParityMap:
    """Tensor product of maps with the Koszul sign (-1)^{|g||v|} on f(v)x g(w)."""
    src, src_idx = tensor_module(f.source, g.source)
    tgt, tgt_idx = tensor_module(f.target, g.target)
    z = src.ring.zero
    out = [[z] * src.total_rank for _ in range(tgt.total_rank)]
    for i in range(f.target.total_rank):
        for a in range(f.source.total_rank):
            fe = f.entries[i][a]
            if fe.is_zero():
                continue
            for j in range(g.target.total_rank):
                for b in range(g.source.total_rank):
                    ge = g.entries[j][b]
                    if ge.is_zero():
                        continue
                    sign = -1 if (g.parity * f.source.parity(a)) % 2 else 1
                    val = fe * ge
                    if sign < 0:
                        val = -val
                    r, c = tgt_idx[(i, j)], src_idx[(a, b)]
                    out[r][c] = out[r][c] + val
    return ParityMap(src, tgt, (f.parity + g.parity) % 2, out)
