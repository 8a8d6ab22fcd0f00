"""Replayable certificates for identities between classes of complexes.

A certificate claims that an integer combination of flat complexes vanishes
relative to a support locus, and justifies it by an ordered list of moves,
each of which encodes one admissible relation:

* a filtration move: a filtered complex equals the sum of its graded slices,
* a homotopy move: a null-homotopic complex vanishes,
* an isomorphism move: isomorphic complexes are equal.

Verification replays every move with exact arithmetic and then checks that
the claim is the stated integer combination of the move relations.  Nothing
is sampled on this path.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .complexes import (CurvedComplex, Filtration, SupportLocus, Verdict,
                        associated_graded, filtration_verify, is_homotopy)
from .polynomials import PolyRing
from .supermod import EVEN, ODD, ParityMap, ShapeError


@dataclass(frozen=True)
class IsoPair:
    forward: ParityMap
    inverse: ParityMap


@dataclass(frozen=True)
class HomotopyMove:
    """[C] = 0, witnessed by a contracting homotopy."""

    complex: CurvedComplex
    h: ParityMap

    def relation(self) -> Counter:
        return Counter({self.complex.digest(): 1})

    def involved(self) -> list[CurvedComplex]:
        return [self.complex]

    def replay(self) -> Verdict:
        if self.h.parity != ODD:
            return Verdict(False, "homotopy-move", message="witness must be odd")
        c = self.complex
        return is_homotopy(c, c, self.h, c.identity_map(), c.zero_map())


@dataclass(frozen=True)
class FiltrationMove:
    """[C] = sum of the graded-slice targets, witnessed by slice isomorphisms."""

    complex: CurvedComplex
    steps: tuple[tuple[int, ...], ...]
    targets: tuple[CurvedComplex, ...]
    isos: tuple[IsoPair, ...]

    def __init__(self, complex, steps, targets, isos):
        object.__setattr__(self, "complex", complex)
        object.__setattr__(self, "steps", tuple(tuple(s) for s in steps))
        object.__setattr__(self, "targets", tuple(targets))
        object.__setattr__(self, "isos", tuple(isos))

    def relation(self) -> Counter:
        rel = Counter({self.complex.digest(): 1})
        for t in self.targets:
            rel[t.digest()] -= 1
        return rel

    def involved(self) -> list[CurvedComplex]:
        return [self.complex, *self.targets]

    def replay(self) -> Verdict:
        if len(self.targets) != len(self.steps) or len(self.isos) != len(self.steps):
            return Verdict(False, "filtration-move",
                           message="one target and one isomorphism per step required")
        # the slices only sum to the whole complex if the first step spans it
        n = self.complex.module.total_rank
        if not self.steps or set(self.steps[0]) != set(range(n)):
            return Verdict(False, "filtration-move",
                           message="first filtration step must span the module")
        try:
            filt = Filtration(self.complex, self.steps)
        except ShapeError as exc:
            return Verdict(False, "filtration-move", message=str(exc))
        v = filtration_verify(self.complex, filt)
        if not v:
            return v
        for j, (target, pair) in enumerate(zip(self.targets, self.isos), start=1):
            gr = associated_graded(self.complex, filt, j)
            v = _verify_iso(gr, target, pair, f"filtration-move gr{j}")
            if not v:
                return v
        return Verdict(True, "filtration-move")


@dataclass(frozen=True)
class IsoMove:
    """[C] = [C'], witnessed by mutually inverse even chain isomorphisms."""

    source: CurvedComplex
    target: CurvedComplex
    iso: IsoPair

    def relation(self) -> Counter:
        rel = Counter({self.source.digest(): 1})
        rel[self.target.digest()] -= 1
        return rel

    def involved(self) -> list[CurvedComplex]:
        return [self.source, self.target]

    def replay(self) -> Verdict:
        return _verify_iso(self.source, self.target, self.iso, "iso-move")


Move = HomotopyMove | FiltrationMove | IsoMove


def _verify_iso(source: CurvedComplex, target: CurvedComplex, pair: IsoPair,
                kind: str) -> Verdict:
    fwd, bwd = pair.forward, pair.inverse
    if fwd.parity != EVEN or bwd.parity != EVEN:
        return Verdict(False, kind, message="isomorphisms must be even")
    if fwd.source != source.module or fwd.target != target.module:
        return Verdict(False, kind, message="forward map has the wrong shape")
    if bwd.source != target.module or bwd.target != source.module:
        return Verdict(False, kind, message="inverse map has the wrong shape")
    if source.curvature != target.curvature:
        return Verdict(False, kind, message="curvature mismatch")
    if fwd.compose(source.d) != target.d.compose(fwd):
        return Verdict(False, kind, message="forward map is not a chain map")
    if fwd.compose(bwd) != ParityMap.identity(target.module):
        return Verdict(False, kind, message="forward . inverse is not the identity")
    if bwd.compose(fwd) != ParityMap.identity(source.module):
        return Verdict(False, kind, message="inverse . forward is not the identity")
    return Verdict(True, kind)


@dataclass
class Certificate:
    """A claim sum a_i [C_i] = 0 rel Z together with its justifying moves."""

    ring: PolyRing
    z: SupportLocus
    claim: list[tuple[int, CurvedComplex]]
    moves: list[tuple[int, Move]]
    names: dict[str, str] = field(default_factory=dict)

    @classmethod
    def build(cls, ring: PolyRing, z: SupportLocus,
              claim: list[tuple[int, CurvedComplex]],
              moves: list[tuple[int, Move]],
              names: dict[str, str] | None = None) -> "Certificate":
        return cls(ring, z, list(claim), list(moves), dict(names or {}))

    def name_of(self, c: CurvedComplex) -> str:
        return self.names.get(c.digest(), c.digest())

    def all_complexes(self) -> list[CurvedComplex]:
        seen: dict[str, CurvedComplex] = {}
        for _, c in self.claim:
            seen.setdefault(c.digest(), c)
        for _, move in self.moves:
            for c in move.involved():
                seen.setdefault(c.digest(), c)
        return list(seen.values())

    def claim_counter(self) -> Counter:
        total: Counter = Counter()
        for coeff, c in self.claim:
            total[c.digest()] += coeff
        return total


@dataclass
class CertVerdict:
    ok: bool
    move_results: list[tuple[int, Verdict]]
    ledger_ok: bool
    assumed_exact: list[str]
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        out = []
        for idx, v in self.move_results:
            out.append(f"move {idx}: {v.describe()}")
        out.append("ledger: " + ("claim reduces to 0 = 0" if self.ledger_ok
                                 else f"FAIL {self.message}"))
        if self.assumed_exact:
            out.append("assumed strictly exact off the locus: "
                       + ", ".join(self.assumed_exact))
        out.append("certificate: " + ("PASS" if self.ok else "FAIL"))
        return out


def verify(cert: Certificate) -> CertVerdict:
    """Replay every move exactly and reduce the formal claim to zero."""
    move_results: list[tuple[int, Verdict]] = []
    all_ok = True
    for c in cert.all_complexes():
        sq = c.d.compose(c.d)
        if sq != ParityMap.identity(c.module).scale(c.curvature):
            return CertVerdict(
                False, [], False, [],
                message=f"complex {cert.name_of(c)} does not have its recorded curvature")
    for coeff, c in cert.claim:
        if coeff != 0 and not c.curvature.is_zero():
            return CertVerdict(
                False, [], False, [],
                message=f"claim term {cert.name_of(c)} is curved, not a complex")
    for idx, (coeff, move) in enumerate(cert.moves):
        try:
            v = move.replay()
        except Exception as exc:  # malformed move data fails the replay
            v = Verdict(False, "move", message=f"malformed move data: {exc}")
        move_results.append((idx, v))
        if not v:
            all_ok = False
    combo: Counter = Counter()
    for coeff, move in cert.moves:
        for digest, mult in move.relation().items():
            combo[digest] += coeff * mult
    residue = cert.claim_counter()
    residue.subtract(combo)
    residue = Counter({k: v for k, v in residue.items() if v != 0})
    ledger_ok = not residue
    message = ""
    if not ledger_ok:
        leftovers = ", ".join(f"{v} * [{cert.names.get(k, k)}]"
                              for k, v in sorted(residue.items()))
        message = f"unreduced terms: {leftovers}"
    discharged = {m.complex.digest() for _, m in cert.moves
                  if isinstance(m, HomotopyMove)}
    assumed = []
    for coeff, c in cert.claim:
        if coeff != 0 and c.digest() not in discharged:
            name = cert.name_of(c)
            if name not in assumed:
                assumed.append(name)
    return CertVerdict(all_ok and ledger_ok, move_results, ledger_ok,
                       assumed, message)


def compose_certs(c1: Certificate, c2: Certificate) -> Certificate:
    """Concatenate moves and add claims; both parts must share ring and locus."""
    if c1.ring != c2.ring:
        raise ShapeError("certificates live over different rings")
    if c1.z != c2.z:
        raise ShapeError("certificates have different support loci")
    by_digest: dict[str, CurvedComplex] = {}
    combined: Counter = Counter()
    for coeff, c in c1.claim + c2.claim:
        by_digest.setdefault(c.digest(), c)
        combined[c.digest()] += coeff
    claim = [(coeff, by_digest[d]) for d, coeff in combined.items() if coeff != 0]
    names = {**c1.names, **c2.names}
    return Certificate(c1.ring, c1.z, claim, c1.moves + c2.moves, names)
