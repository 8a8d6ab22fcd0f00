"""Curved Z/2-graded complexes: homotopies, cones, filtrations, exactness checks.

A curved complex is a module with an odd endomorphism d whose square is a
scalar polynomial times the identity (the curvature); curvature zero means a
genuine complex.  Identity checks return :class:`Verdict` values carrying the
first failing entry and its residual, so a false identity is data rather than
an exception.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .polynomials import Poly
from .scalars import Scalar
from .supermod import (EVEN, ODD, ParityMap, ShapeError, SuperModule,
                       assemble, direct_sum_modules, parity_unit)


class CurvatureError(ValueError):
    def __init__(self, message: str, entry: tuple[int, int] | None = None,
                 value: Poly | None = None):
        super().__init__(message)
        self.entry = entry
        self.value = value


class SampleError(RuntimeError):
    """Point sampling could not find a point off the excluded locus."""


@dataclass(frozen=True)
class SupportLocus:
    """A closed locus given by generators; no generators means the whole space."""

    generators: tuple[Poly, ...] = ()

    def is_everything(self) -> bool:
        return not self.generators

    def off_locus(self, point: dict) -> bool:
        return all(not g.evaluate(point).is_zero() for g in self.generators)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    kind: str
    message: str = ""
    location: tuple[int, int] | None = None
    residual: Poly | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"{self.kind}: pass"
        where = f" at entry {self.location}" if self.location else ""
        res = f", residual {self.residual}" if self.residual is not None else ""
        return f"{self.kind}: FAIL{where}{res} {self.message}".rstrip()


def _first_nonzero(m: ParityMap) -> tuple[tuple[int, int], Poly] | None:
    for i, row in enumerate(m.entries):
        for j, p in enumerate(row):
            if not p.is_zero():
                return (i, j), p
    return None


@dataclass(frozen=True)
class CurvedComplex:
    module: SuperModule
    d: ParityMap
    curvature: Poly

    def ring(self):
        return self.module.ring

    def is_flat(self) -> bool:
        return self.curvature.is_zero()

    def shifted(self) -> "CurvedComplex":
        """Parity shift; the differential changes sign, curvature is unchanged."""
        return CurvedComplex(self.module.shifted(), -self.d.shifted(), self.curvature)

    def identity_map(self) -> ParityMap:
        return ParityMap.identity(self.module)

    def zero_map(self) -> ParityMap:
        return ParityMap.zero(self.module, self.module, EVEN)

    def canonical_text(self) -> str:
        lines = [
            "even " + " ".join(self.module.even_labels),
            "odd " + " ".join(self.module.odd_labels),
            "curvature " + str(self.curvature),
        ]
        for row in self.d.entries:
            lines.append("; ".join(str(p) for p in row))
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]


def curvature_check(module: SuperModule, d: ParityMap) -> CurvedComplex:
    """Verify d is an odd endomorphism with scalar square and record the curvature."""
    if d.source != module or d.target != module:
        raise ShapeError("differential is not an endomorphism of the module")
    if d.parity != ODD:
        raise CurvatureError("differential must be odd")
    sq = d.compose(d)
    n = module.total_rank
    if n == 0:
        return CurvedComplex(module, d, module.ring.zero)
    c = sq.entries[0][0]
    for i in range(n):
        for j in range(n):
            got = sq.entries[i][j]
            if i == j:
                if got != c:
                    raise CurvatureError(
                        f"square is not scalar: diagonal entry ({i},{i}) is {got}, "
                        f"entry (0,0) is {c}", entry=(i, i), value=got)
            elif not got.is_zero():
                raise CurvatureError(
                    f"square is not scalar: off-diagonal entry ({i},{j}) is {got}",
                    entry=(i, j), value=got)
    return CurvedComplex(module, d, c)


@dataclass(frozen=True)
class ChainMap:
    source: CurvedComplex
    target: CurvedComplex
    map: ParityMap

    @classmethod
    def create(cls, source: CurvedComplex, target: CurvedComplex,
               m: ParityMap) -> "ChainMap":
        cm = cls(source, target, m)
        v = is_chain_map(cm)
        if not v:
            raise ShapeError(f"not a chain map: {v.describe()}")
        return cm

    @property
    def degree(self) -> int:
        return self.map.parity


def is_chain_map(f: ChainMap) -> Verdict:
    """Check the intertwining identity f.d = (-1)^{|f|} d.f, exactly."""
    if f.map.source != f.source.module or f.map.target != f.target.module:
        raise ShapeError("chain map shape does not match its complexes")
    if f.source.curvature != f.target.curvature:
        return Verdict(False, "chain-map", message="curvature mismatch")
    lhs = f.map.compose(f.source.d)
    rhs = f.target.d.compose(f.map)
    if f.map.parity == ODD:
        rhs = -rhs
    diff = lhs - rhs
    bad = _first_nonzero(diff)
    if bad is None:
        return Verdict(True, "chain-map")
    (i, j), p = bad
    return Verdict(False, "chain-map", location=(i, j), residual=p)


def is_homotopy(source: CurvedComplex, target: CurvedComplex, h: ParityMap,
                lhs: ParityMap, rhs: ParityMap) -> Verdict:
    """Check d_target.h + h.d_source == lhs - rhs, exactly."""
    if h.parity != ODD:
        return Verdict(False, "homotopy", message="homotopy must be odd")
    got = target.d.compose(h) + h.compose(source.d)
    diff = got - (lhs - rhs)
    bad = _first_nonzero(diff)
    if bad is None:
        return Verdict(True, "homotopy")
    (i, j), p = bad
    return Verdict(False, "homotopy", location=(i, j), residual=p)


@dataclass(frozen=True)
class Homotopy:
    """An odd endomorphism witnessing lhs - rhs = dh + hd on one complex."""

    complex: CurvedComplex
    h: ParityMap
    lhs: ParityMap
    rhs: ParityMap

    @classmethod
    def null_homotopy(cls, c: CurvedComplex, h: ParityMap) -> "Homotopy":
        hom = cls(c, h, c.identity_map(), c.zero_map())
        v = hom.verify()
        if not v:
            raise ShapeError(f"not a null homotopy: {v.describe()}")
        return hom

    def verify(self) -> Verdict:
        return is_homotopy(self.complex, self.complex, self.h, self.lhs, self.rhs)


# -----------------------------------------------------------------------------
# cones
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    complex: CurvedComplex
    inclusion: ChainMap    # target of f -> cone
    projection: ChainMap   # cone -> shifted source of f


def cone(f: ChainMap) -> Cone:
    """Mapping cone of an even chain map f: A -> B on B + A[1]."""
    if f.map.parity != EVEN:
        raise ShapeError("cone needs an even chain map")
    v = is_chain_map(f)
    if not v:
        raise ShapeError(f"cone of a non-chain-map: {v.describe()}")
    a, b = f.source, f.target
    a1 = a.shifted()
    module, embs = direct_sum_modules([b.module, a1.module], ["b.", "a."])
    coupling = f.map.compose(parity_unit(a.module))  # A[1] -> B, odd
    d = assemble(module, embs, module, embs, ODD, {
        (0, 0): b.d,
        (0, 1): coupling,
        (1, 1): a1.d,
    })
    total = curvature_check(module, d)
    incl = assemble(module, embs, b.module, [list(range(b.module.total_rank))], EVEN,
                    {(0, 0): ParityMap.identity(b.module)})
    proj_entries = [[module.ring.zero] * module.total_rank
                    for _ in range(a1.module.total_rank)]
    for i, pos in enumerate(embs[1]):
        proj_entries[i][pos] = module.ring.one
    proj = ParityMap(module, a1.module, EVEN, proj_entries)
    return Cone(
        total,
        ChainMap.create(b, total, incl),
        ChainMap.create(total, a1, proj),
    )


# -----------------------------------------------------------------------------
# filtrations
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Filtration:
    """A descending chain of basis-aligned submodules, indices into the full basis."""

    complex: CurvedComplex
    steps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        prev = None
        n = self.complex.module.total_rank
        for step in self.steps:
            s = set(step)
            if any(i < 0 or i >= n for i in s):
                raise ShapeError(f"filtration step {step} out of range")
            if prev is not None and not s.issubset(prev):
                raise ShapeError("filtration steps must be descending")
            prev = s

    def step_set(self, j: int) -> set[int]:
        """1-based; steps past the end are empty."""
        if j <= 0:
            raise ShapeError("filtration steps are 1-based")
        if j > len(self.steps):
            return set()
        return set(self.steps[j - 1])

    def slice_indices(self, j: int) -> list[int]:
        sl = self.step_set(j) - self.step_set(j + 1)
        return sorted(sl)


def filtration_verify(c: CurvedComplex, f: Filtration) -> Verdict:
    """Check the differential maps every step into itself."""
    if f.complex is not c and f.complex != c:
        raise ShapeError("filtration belongs to a different complex")
    for j in range(1, len(f.steps) + 1):
        step = f.step_set(j)
        for col in step:
            for row in range(c.module.total_rank):
                if row in step:
                    continue
                p = c.d.entries[row][col]
                if not p.is_zero():
                    return Verdict(
                        False, "filtration",
                        message=f"step {j} not invariant: basis vector "
                                f"{c.module.labels[col]} leaks to {c.module.labels[row]}",
                        location=(row, col), residual=p)
    return Verdict(True, "filtration")


def graded_slice(c: CurvedComplex, f: Filtration, j: int) -> tuple[SuperModule, ParityMap]:
    """The j-th slice module and the induced map, without curvature checking."""
    indices = f.slice_indices(j)
    mod = c.module
    even = tuple(mod.labels[i] for i in indices if mod.parity(i) == EVEN)
    odd = tuple(mod.labels[i] for i in indices if mod.parity(i) == ODD)
    ordered = [i for i in indices if mod.parity(i) == EVEN] + \
              [i for i in indices if mod.parity(i) == ODD]
    sub = SuperModule(mod.ring, even, odd)
    entries = [[c.d.entries[r][s] for s in ordered] for r in ordered]
    return sub, ParityMap(sub, sub, ODD, entries)


def associated_graded(c: CurvedComplex, f: Filtration, j: int) -> CurvedComplex:
    """The induced complex on the j-th slice, lower filtration set to zero."""
    sub, d = graded_slice(c, f, j)
    return curvature_check(sub, d)


# -----------------------------------------------------------------------------
# sampling-based exactness diagnostic
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class SamplePoint:
    point: dict
    rank_plus: int
    rank_minus: int
    exact: bool


@dataclass(frozen=True)
class SampleReport:
    ok: bool
    kind: str = "strict-exactness-sample"
    points: tuple[SamplePoint, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _rank(matrix: list[list[Scalar]]) -> int:
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, len(rows)):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        inv = rows[row][col].inverse()
        rows[row] = [x * inv for x in rows[row]]
        for r in range(len(rows)):
            if r != row and not rows[r][col].is_zero():
                c = rows[r][col]
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[row])]
        rank += 1
        row += 1
        if row == len(rows):
            break
    return rank


def _fiber_blocks(c: CurvedComplex, point: dict) -> tuple[list[list[Scalar]], list[list[Scalar]]]:
    """Evaluate d at a point and split into even->odd and odd->even blocks."""
    mod = c.module
    e = mod.even_rank
    num = c.d.evaluate(point)
    d_plus = [row[:e] for row in num[e:]]           # V+ -> V-
    d_minus = [row[e:] for row in num[:e]]          # V- -> V+
    return d_plus, d_minus


def strict_exactness_sample(c: CurvedComplex, z: SupportLocus, trials: int,
                            seed: int, height: int = 101) -> SampleReport:
    """Probe fiberwise exactness of a flat complex at random points off the locus.

    At each sampled point p the two-periodic fiber sequence is exact iff
    rank(d+) + rank(d-) equals both the odd and the even dimension; rank
    constancy across samples stands in for strictness.  This is a diagnostic:
    the certificate layer only accepts homotopy-based exactness proofs.
    """
    if not c.is_flat():
        raise CurvatureError(f"exactness sampling needs curvature 0, got {c.curvature}")
    if z.is_everything():
        return SampleReport(True, message="excluded locus is the whole space; vacuously exact")
    if c.module.total_rank == 0:
        return SampleReport(True, message="zero complex; vacuously exact")
    rng = random.Random(seed)
    half = height // 2
    variables = c.module.ring.variables
    points: list[SamplePoint] = []
    attempts = 0
    limit = max(100, 20 * trials)
    while len(points) < trials:
        attempts += 1
        if attempts > limit:
            raise SampleError(
                f"no point off the locus found in {limit} attempts")
        point = {v: rng.randint(-half, half) for v in variables}
        if not z.off_locus(point):
            continue
        d_plus, d_minus = _fiber_blocks(c, point)
        rp, rm = _rank(d_plus), _rank(d_minus)
        exact = (rp + rm == c.module.odd_rank) and (rm + rp == c.module.even_rank)
        points.append(SamplePoint(point, rp, rm, exact))
    all_exact = all(pt.exact for pt in points)
    ranks = {(pt.rank_plus, pt.rank_minus) for pt in points}
    constant = len(ranks) <= 1
    ok = all_exact and constant
    msg = ""
    if not all_exact:
        msg = "fiberwise exactness failed at a sampled point"
    elif not constant:
        msg = f"ranks vary across samples: {sorted(ranks)}"
    return SampleReport(ok, points=tuple(points), message=msg)
