import json

import numpy as np
import pytest

from mipcert.galgebra import GroupAlgebra
from mipcert.gf2 import Gf2Matrix, solve
from mipcert.mipverify import (
    EXHAUSTIVE_LIMIT,
    SAMPLED_PAIRS,
    CertificateFormatError,
    IsoCertificate,
    Proof,
    algebra_invariant_fingerprint,
    brute_force_iso_search,
    build_certificate,
    build_tilde_generators,
    check_multiplicativity,
    close_group_basis,
    run_pipeline,
    verify_certificate,
    verify_identities,
    verify_jennings_quotient,
    verify_nonisomorphism,
    verify_relations,
    verify_z4_via_J,
)
from mipcert.parsing import parse_algebra_literal
from mipcert.pcgroup import PcPresentation, build_G, build_H

RELATIONS = [
    "relation.x_power", "relation.x_square_central", "relation.z_conj_x", "relation.y_square_central",
    "relation.z_conj_y", "relation.y_power", "relation.z_fourth_power",
]
IDENTITIES = [
    "identity.C_in_I2", "identity.ytilde_mod_I2", "identity.ring_generation",
    "identity.ytilde_square", "identity.ytilde_power",
]


@pytest.fixture(scope="module")
def tilde43(kH43):
    return build_tilde_generators(kH43)


@pytest.fixture(scope="module")
def basis43(kH43, G43, tilde43):
    return close_group_basis(kH43, G43, *tilde43)


@pytest.fixture(scope="module")
def cert43(kG43, kH43, basis43):
    return build_certificate(kG43, kH43, basis43, 4, 3)


def failing_steps(kH, n, m, xt=None, yt=None, congruent_to=None):
    xt, yt, zt = build_tilde_generators(kH, xt, yt)
    proof = Proof()
    verify_identities(kH, yt, n, m, congruent_to=congruent_to, proof=proof)
    verify_relations(kH, xt, yt, zt, n, m, proof=proof)
    return {s.name for s in proof.steps if not s.verified}


# -- non-isomorphism ---------------------------------------------------------------

@pytest.mark.parametrize("n,m,eG,eH", [(4, 3, 16, 8), (5, 3, 32, 16), (5, 4, 32, 16)])
def test_nonisomorphism(n, m, eG, eH):
    step = verify_nonisomorphism(n, m)
    assert step.verified
    assert (step.witness["exponent_G"], step.witness["exponent_H"]) == (eG, eH)


def test_nonisomorphism_self_comparison(G43):
    step = verify_nonisomorphism(4, 3, G43, G43)
    assert not step.verified and "reason" in step.witness


def test_oracle_exhausts_G_to_H(oracle43):
    assert oracle43.exhausted
    assert oracle43.generating_survivors == 0
    assert oracle43.pairs_tested > 0


def test_oracle_finds_automorphism(G43):
    res = brute_force_iso_search(G43, G43)
    assert not res.exhausted
    u, v = res.isomorphism
    assert (u, v) == (G43.generator("x"), G43.generator("y"))


def test_oracle_preconditions(G43):
    with pytest.raises(ValueError, match="orders differ"):
        brute_force_iso_search(G43, build_H(5, 3))
    with pytest.raises(ValueError, match="limit"):
        brute_force_iso_search(build_G(5, 4), build_H(5, 4))


# -- tilde elements and relations -----------------------------------------------------

def test_tilde_generators(kH43, tilde43):
    xt, yt, zt = tilde43
    assert [e.augmentation() for e in tilde43] == [1, 1, 1]
    assert len(yt.support()) == 3
    assert zt != kH43.one
    assert xt == kH43.generators()[0]


def test_relations_hold(kH43, tilde43):
    steps = verify_relations(kH43, *tilde43, 4, 3)
    assert [s.name for s in steps] == RELATIONS
    assert all(s.verified for s in steps)
    z3 = steps[2].witness
    assert z3["direct"] and z3["[yt, xt^2] = zt zt^xt"] and z3["[yt, xt^2] = 1"]


def test_z_fourth_power_through_J(kH43, tilde43):
    ok, w = verify_z4_via_J(kH43, tilde43[2])
    assert ok
    assert w["1 + zt in J"] and w["J^4 = 0"]
    assert w["dim J^k (k=1..4)"] == [384, 256, 128, 0]


def test_identities_hold(kH43, tilde43):
    steps = verify_identities(kH43, tilde43[1], 4, 3)
    assert [s.name for s in steps] == [IDENTITIES[i] for i in (0, 1, 2, 3, 4)]
    assert all(s.verified for s in steps)
    a_step = steps[0]
    assert a_step.witness["C in I^2"] and a_step.witness["residue weight"] == 0
    sq = next(s for s in steps if s.name == "identity.ytilde_square").witness
    assert all(v for v in sq.values())


def test_identity_b_with_a_fails(kH43, tilde43):
    a = kH43.generators()[0]
    steps = verify_identities(kH43, tilde43[1], 4, 3, congruent_to=a)
    bad = {s.name: s for s in steps if not s.verified}
    assert set(bad) == {"identity.ytilde_mod_I2"}
    assert bad["identity.ytilde_mod_I2"].witness["residue weight"] > 0


def test_jennings_quotient(kG43, kH43):
    for kG in (kG43, kH43):
        ok, w = verify_jennings_quotient(kG)
        assert ok and w["|G/Phi(G)|"] == 4 and w["dim I/I^2"] == 2


# -- mutation sensitivity ------------------------------------------------------------

@pytest.mark.parametrize("yt", ["b(a+b+ab)", "b", "b(a+b+ab)c^2"])
def test_sabotaged_ytilde_fails(kH43, yt):
    failed = failing_steps(kH43, 4, 3, yt=parse_algebra_literal(yt, kH43))
    assert {"identity.ytilde_square", "relation.y_square_central", "relation.z_conj_y"} <= failed


def test_sabotaged_ytilde_mod_I2(kH43):
    failed = failing_steps(kH43, 4, 3, yt=parse_algebra_literal("b + ab + b^2 c^2", kH43))
    assert {"identity.ytilde_mod_I2", "identity.ring_generation", "identity.ytilde_power", "relation.y_power"} <= failed


def test_sabotaged_xtilde(kH43):
    xt = parse_algebra_literal("a + b^4 c + a^8 b + a^12 c + a^15 b c", kH43)
    assert xt.augmentation() == 1
    failed = failing_steps(kH43, 4, 3, xt=xt)
    assert {"relation.x_square_central", "relation.z_conj_x"} <= failed


def test_wrong_parameters_fail_x_power():
    # the algebra of H(5,3) with n = 4 claimed: a^16 != 1
    failed = failing_steps(GroupAlgebra(build_H(5, 3)), 4, 3)
    assert failed == {"relation.x_power"}


def test_c_of_order_8_fails_z_fourth_power():
    p = PcPresentation(("a", "b", "c"), (16, 8, 8), {}, {(0, 1): (0, 1, 1), (0, 2): (0, 0, 3)})
    failed = failing_steps(GroupAlgebra(p), 4, 3)
    assert "relation.z_fourth_power" in failed


def test_commuting_ab_fails_C_in_I2():
    p = PcPresentation(("a", "b", "c"), (16, 8, 4), {}, {(0, 2): (0, 0, 3)})
    failed = failing_steps(GroupAlgebra(p), 4, 3)
    assert "identity.C_in_I2" in failed


# -- group basis and certificate --------------------------------------------------------

def test_group_basis(kH43, basis43):
    gb = basis43
    assert gb.closure_order == 512 and gb.rank == 512
    assert gb.labels_bijective and not gb.capped
    assert np.array_equal(gb.images[0], kH43.one.bits)
    assert len({r.tobytes() for r in gb.images}) == 512


def test_group_basis_overflow_is_capped(kH43, G43):
    a, b, _ = kH43.generators()
    gb = close_group_basis(kH43, G43, a, a + b + a * b)
    assert gb.capped and gb.closure_order == 513
    assert not gb.labels_bijective


def test_bijective_labels_are_not_enough(kG43, kH43, G43):
    # yt = b closes to H itself with bijective labels; only multiplicativity catches it
    xt, yt, zt = build_tilde_generators(kH43, None, kH43.generators()[1])
    gb = close_group_basis(kH43, G43, xt, yt, zt)
    assert gb.closure_order == 512 and gb.rank == 512 and gb.labels_bijective
    cert, checks = build_certificate(kG43, kH43, gb, 4, 3)
    assert checks["invertible"] and not checks["multiplicative"]["ok"]
    assert not verify_certificate(cert.to_text()).ok


def test_certificate_properties(kH43, G43, cert43, tilde43):
    cert, checks = cert43
    assert checks["ok"] and checks["invertible"] and checks["phi(1) = 1"]
    assert checks["multiplicative"]["mode"] == "exhaustive"
    assert checks["multiplicative"]["pairs"] == 512 * 512
    images = cert.matrix.to_bits()
    zi = G43.index(G43.generator("z"))
    zt = kH43.element(images[zi])
    assert zt == tilde43[2] and zt**4 == kH43.one
    for g in (0, 1, 77, 300, 511):
        x = solve(cert.matrix, images[g])
        assert np.flatnonzero(x).tolist() == [g]


def test_multiplicativity_against_direct_products(kH43, G43, cert43):
    images = cert43[0].matrix.to_bits()
    rng = np.random.default_rng(0)
    T = G43.table
    for g, h in rng.integers(0, 512, size=(200, 2)):
        lhs = kH43.element(images[g]) * kH43.element(images[h])
        assert np.array_equal(lhs.bits, images[T[g, h]])


def test_sampled_mode(kH43, G43, cert43):
    images = cert43[0].matrix.to_bits()
    res = check_multiplicativity(images, G43, kH43, exhaustive=False, seed=5)
    assert res["ok"] and res["mode"] == "sampled"
    assert res["pairs"] >= SAMPLED_PAIRS
    again = check_multiplicativity(images, G43, kH43, exhaustive=False, seed=5)
    assert again == res
    bad = images.copy()
    bad[300, 17] ^= True
    assert not check_multiplicativity(bad, G43, kH43, exhaustive=False, seed=5)["ok"]


def test_certificate_text_round_trip(cert43):
    cert = cert43[0]
    text = cert.to_text()
    lines = text.splitlines()
    assert lines[0] == "mipcert v1 n=4 m=3 order=512"
    assert lines[1] == "gf2 512 512"
    assert lines[-1].startswith("sha256 ") and len(lines) == 512 + 3
    back = IsoCertificate.from_text(text)
    assert back.matrix == cert.matrix and back.checksum == cert.checksum
    assert verify_certificate(text).ok


def test_certificate_deterministic(kG43, kH43, G43):
    texts = set()
    for _ in range(2):
        xt, yt, zt = build_tilde_generators(kH43)
        gb = close_group_basis(kH43, G43, xt, yt, zt)
        texts.add(build_certificate(kG43, kH43, gb, 4, 3)[0].to_text())
    assert len(texts) == 1


def flip_bit(text: str, row: int, col: int, recompute: bool) -> str:
    cert = IsoCertificate.from_text(text)
    bits = cert.matrix.to_bits()
    bits[row, col] ^= True
    tampered = IsoCertificate(cert.n, cert.m, Gf2Matrix.from_bits(bits))
    if recompute:
        return tampered.to_text()
    return tampered.to_text().rsplit("sha256", 1)[0] + f"sha256 {cert.checksum}\n"


@pytest.mark.parametrize("row,col", [(0, 0), (0, 5), (1, 3), (200, 100), (511, 511)])
def test_flipped_bit_rejected(cert43, row, col):
    text = cert43[0].to_text()
    stale = verify_certificate(flip_bit(text, row, col, recompute=False))
    assert not stale.ok and "checksum" in stale.reasons[0]
    fresh = verify_certificate(flip_bit(text, row, col, recompute=True))
    assert not fresh.ok
    assert any("multiplicative" in r or "identity" in r or "invertible" in r for r in fresh.reasons)


def test_mismatched_header_rejected(cert43):
    cert = cert43[0]
    other = IsoCertificate(5, 3, cert.matrix).to_text()
    res = verify_certificate(other)
    assert not res.ok and "dimension" in res.reasons[0]
    bad_order = cert.to_text().replace("order=512", "order=1024", 1)
    res = verify_certificate(bad_order)
    assert not res.ok
    with pytest.raises(CertificateFormatError):
        IsoCertificate.from_text(bad_order)
    assert not verify_certificate("mipcert v2\n").ok
    assert not verify_certificate("").ok


# -- fingerprints and pipeline -----------------------------------------------------------

def test_fingerprints(kG43, kH43):
    fG, fH = algebra_invariant_fingerprint(kG43), algebra_invariant_fingerprint(kH43)
    for fp in (fG, fH):
        assert fp["center_dim"] == fp["class_count"]
        assert fp["frattini_quotient_order"] == 4
        assert fp["nilpotency_index"] == 28
    assert fG == fH


def test_pipeline_report(pipeline43):
    report, cert = pipeline43
    assert report.ok and cert is not None
    names = [s.name for s in report.steps]
    assert set(RELATIONS + IDENTITIES) <= set(names)
    assert names[:3] == ["groups", "structure", "nonisomorphism"]
    assert names[-3:] == ["group_basis", "certificate", "fingerprints"]
    d = report.to_dict()
    assert d["schema"] == "mip-report/1" and d["seed"] == 0 and d["failed"] == []
    json.dumps(d)
    assert "seconds" not in d["steps"][0] and "seconds" in report.to_dict(timings=True)["steps"][0]


def test_pipeline_deterministic(pipeline43):
    report, cert = run_pipeline(4, 3, seed=0)
    assert json.dumps(report.to_dict()) == json.dumps(pipeline43[0].to_dict())
    assert cert.to_text() == pipeline43[1].to_text()


def test_pipeline_drop_c_fails():
    report, cert = run_pipeline(4, 3, yt_literal="b(a+b+ab)", with_fingerprints=False)
    assert not report.ok
    failed = report.to_dict()["failed"]
    assert "relation.z_conj_y" in failed and "certificate" in failed


def test_pipeline_dependency_failure_is_reported(G43):
    bad = PcPresentation(G43.generator_names, G43.relative_orders, {},
                         {**G43.conjugation_rules, (0, 2): (0, 0, 2)})
    report, cert = run_pipeline(4, 3, pG=bad, with_fingerprints=False)
    assert cert is None and not report.ok
    steps = {s.name: s for s in report.steps}
    assert steps["groups"].witness["G"]["consistent"] is False
    assert steps["nonisomorphism"].witness["reason"].startswith("dependency failed")


def test_exhaustive_limit():
    assert EXHAUSTIVE_LIMIT == 1024
