"""Certificate replay: soundness, localization, composition, serialization."""

import random

import pytest

from mfcert import (Certificate, FiltrationMove, HomotopyMove, IsoMove,
                    IsoPair, LambdaFamily, ODD, ParityMap, PolyRing,
                    SuperModule, SupportLocus, TwistFamily, compose_certs,
                    curvature_check, lemma1_build, lemma2_build, rationals,
                    verify)
from mfcert.generators import gen_lambda_family, gen_twist_family
from mfcert.serialize import parse_bundle, write_bundle
from mfcert.supermod import ShapeError

RING = PolyRing(rationals(), ("x", "y", "lambda"))


def small_complex():
    v = SuperModule.free(RING, 1, 1)
    z = RING.zero
    d = ParityMap(v, v, ODD, [[z, RING.parse("-y")], [RING.parse("x"), z]])
    return curvature_check(v, d)


def flat_complex():
    v = SuperModule.free(RING, 1, 1)
    z = RING.zero
    d = ParityMap(v, v, ODD, [[z, z], [RING.parse("x"), z]])
    return curvature_check(v, d)


def test_trivial_iso_certificate():
    c = flat_complex()
    move = IsoMove(c, c, IsoPair(ParityMap.identity(c.module),
                                 ParityMap.identity(c.module)))
    cert = Certificate.build(RING, SupportLocus(),
                             claim=[(1, c), (-1, c)], moves=[(1, move)])
    v = verify(cert)
    assert v and v.ledger_ok
    # an unsupported claim does not reduce
    cert2 = Certificate.build(RING, SupportLocus(), claim=[(1, c)],
                              moves=[(1, move)])
    assert not verify(cert2)


def test_lemma1_certificate_roundtrip_and_names():
    inst = gen_lambda_family(3, 2, 21)
    fam = LambdaFamily.from_map(inst.module, inst.d_lambda, inst.r)
    res = lemma1_build(fam)
    v = verify(res.certificate)
    assert v
    assert v.assumed_exact == ["V.d0"]
    text = write_bundle(res.certificate)
    again = parse_bundle(text)
    assert verify(again)
    assert write_bundle(again) == text


def test_ledger_failure_reports_leftovers():
    inst = gen_lambda_family(2, 1, 5)
    fam = LambdaFamily.from_map(inst.module, inst.d_lambda, inst.r)
    res = lemma1_build(fam)
    cert = res.certificate
    bad = Certificate(cert.ring, cert.z,
                      [(coeff + 1, c) for coeff, c in cert.claim],
                      cert.moves, cert.names)
    v = verify(bad)
    assert not v and not v.ledger_ok
    assert "unreduced" in v.message


def _corrupt_map(m: ParityMap, rng: random.Random) -> ParityMap:
    slots = [(i, j) for i in range(m.target.total_rank)
             for j in range(m.source.total_rank)
             if (m.target.parity(i) - m.source.parity(j)) % 2 == m.parity]
    i, j = rng.choice(slots)
    entries = [list(row) for row in m.entries]
    entries[i][j] = entries[i][j] + 1
    return ParityMap(m.source, m.target, m.parity, entries)


def corrupt_one_move(cert: Certificate, rng: random.Random) -> tuple[Certificate, int]:
    idx = rng.randrange(len(cert.moves))
    coeff, move = cert.moves[idx]
    if isinstance(move, HomotopyMove):
        new_move = HomotopyMove(move.complex, _corrupt_map(move.h, rng))
    elif isinstance(move, FiltrationMove):
        j = rng.randrange(len(move.isos))
        pairs = list(move.isos)
        pairs[j] = IsoPair(_corrupt_map(pairs[j].forward, rng), pairs[j].inverse)
        new_move = FiltrationMove(move.complex, move.steps, move.targets, pairs)
    else:
        new_move = IsoMove(move.source, move.target,
                           IsoPair(_corrupt_map(move.iso.forward, rng),
                                   move.iso.inverse))
    moves = list(cert.moves)
    moves[idx] = (coeff, new_move)
    return Certificate(cert.ring, cert.z, cert.claim, moves, cert.names), idx


def test_corruption_flips_verdict_and_localizes():
    inst = gen_twist_family(2, 2, 9)
    fam = TwistFamily(inst.module, inst.d, inst.functions)
    res = lemma2_build(fam)
    rng = random.Random(1)
    for _ in range(25):
        bad, idx = corrupt_one_move(res.certificate, rng)
        v = verify(bad)
        assert not v
        failing = [i for i, mv in v.move_results if not mv]
        assert failing == [idx]


def test_compose_with_empty_certificate():
    inst = gen_twist_family(2, 1, 9)
    fam = TwistFamily(inst.module, inst.d, inst.functions)
    res = lemma2_build(fam)
    empty = Certificate.build(res.certificate.ring, res.certificate.z, [], [])
    combined = compose_certs(res.certificate, empty)
    assert combined.claim == res.certificate.claim
    assert len(combined.moves) == len(res.certificate.moves)
    assert verify(combined)


def test_compose_cancels_claims():
    c = small_complex()
    plus = Certificate.build(RING, SupportLocus(), [(1, c)], [])
    minus = Certificate.build(RING, SupportLocus(), [(-1, c)], [])
    combined = compose_certs(plus, minus)
    assert combined.claim == []
    assert verify(combined)


def test_compose_locus_mismatch():
    c = small_complex()
    a = Certificate.build(RING, SupportLocus(), [(1, c), (-1, c)], [])
    b = Certificate.build(RING, SupportLocus((RING.parse("x"),)),
                          [(1, c), (-1, c)], [])
    with pytest.raises(ShapeError):
        compose_certs(a, b)


def test_partial_first_step_is_rejected():
    # [C] = sum of slices is only a relation when the slices partition C
    inst = gen_lambda_family(2, 1, 5)
    fam = LambdaFamily.from_map(inst.module, inst.d_lambda, inst.r)
    res = lemma1_build(fam)
    cert = res.certificate
    fmove_idx, (coeff, fmove) = next(
        (i, m) for i, m in enumerate(cert.moves)
        if isinstance(m[1], FiltrationMove))
    truncated = FiltrationMove(fmove.complex, fmove.steps[1:],
                               fmove.targets[1:], fmove.isos[1:])
    moves = list(cert.moves)
    moves[fmove_idx] = (coeff, truncated)
    bad = Certificate(cert.ring, cert.z, cert.claim, moves, cert.names)
    v = verify(bad)
    assert not v
    assert any("span" in mv.message for _, mv in v.move_results if not mv)


def test_curved_claim_terms_are_rejected():
    c = small_complex()   # curvature -x*y, not a complex
    cert = Certificate.build(RING, SupportLocus(), [(1, c), (-1, c)], [])
    v = verify(cert)
    assert not v and "curved" in v.message


def test_recorded_curvature_is_rechecked():
    c = small_complex()
    from mfcert import CurvedComplex
    lying = CurvedComplex(c.module, c.d, RING.zero)
    cert = Certificate.build(RING, SupportLocus(),
                             claim=[(1, lying), (-1, lying)], moves=[])
    v = verify(cert)
    assert not v and "curvature" in v.message


def test_cyclotomic_bundle_file_roundtrip(tmp_path):
    # zeta-coefficient matrices survive the trip to disk and back
    from mfcert import RamondData, cyclotomic_field, s_xi_reduce
    ring = PolyRing(cyclotomic_field(3), ("xh1", "lambda"))
    one = ring.one
    data = RamondData(ring, 3, ("xh1",), 1,
                      ((one,),), {(2,): (ring.parse("-1 + 2^3"),)},
                      (one,), (ring.parse("2"),))
    res = s_xi_reduce(data)
    text = write_bundle(res.certificate)
    assert "zeta" in text
    path = tmp_path / "cyc-bundle.txt"
    path.write_text(text)
    again = parse_bundle(path.read_text())
    assert verify(again)
    assert write_bundle(again) == text


def test_homotopy_move_must_be_odd():
    c = small_complex()
    move = HomotopyMove(c, c.d)
    assert move.replay().kind == "homotopy"
    even = ParityMap.identity(c.module)
    bad = HomotopyMove(c, even)
    assert not bad.replay()
