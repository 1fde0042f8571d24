import itertools

import pytest

from amalgam.amalgam import InvariantViolation, amalgam_mul, elements_up_to, kappa, lambda_
from amalgam.groups import cyclic
from amalgam.instances import load
from amalgam.universal import AgreementFailure, Hom, check_agreement, continuity, extend_hom

SPEC = load("z4_z2_z6")
S = SPEC.instance


def brute_agree(pair):
    return all(pair.mu(S.alpha(b)) == pair.nu(S.gamma(b)) for b in S.B.elements())


@pytest.mark.parametrize("name", sorted(SPEC.hompairs))
def test_agreement_matches_exhaustive_check(name):
    pair = SPEC.hompairs[name]
    res = check_agreement(pair, S)
    assert bool(res) == brute_agree(pair)
    if not res:
        b = res.witness
        assert pair.mu(S.alpha(b)) != pair.nu(S.gamma(b))


def test_pairs_with_odd_nu_disagree():
    # nu(gamma(1)) = nu(3) is the parity of 3 under nu_mod2, while mu(alpha(1)) = mu(2) = 0
    verdicts = {n: bool(check_agreement(p, S)) for n, p in SPEC.hompairs.items()}
    assert verdicts == {"mod2_triv": True, "mod2_mod2": False, "triv_triv": True,
                        "triv_mod2": False}


def test_extension_value_and_refusal():
    phi = extend_hom(SPEC.hompairs["mod2_triv"], S)
    assert phi(kappa(S, 1) * lambda_(S, 1) * kappa(S, 1)) == 0
    assert phi(kappa(S, 1)) == 1
    with pytest.raises(AgreementFailure):
        extend_hom(SPEC.hompairs["mod2_mod2"], S)


@pytest.mark.parametrize("name", ["mod2_triv", "triv_triv"])
def test_extension_is_homomorphism_on_small_products(name):
    pair = SPEC.hompairs[name]
    phi = extend_hom(pair, S)
    pool = elements_up_to(S, 3, 8)
    for d1, d2 in itertools.product(pool[:120], repeat=2):
        assert phi(amalgam_mul(d1, d2)) == pair.E.op(phi(d1), phi(d2))
    # restricted to A and C it is mu and nu
    for a in S.A.elements():
        assert phi(kappa(S, a)) == pair.mu(a)
    for c in S.C.elements():
        assert phi(lambda_(S, c)) == pair.nu(c)


def test_non_homomorphism_rejected():
    with pytest.raises(InvariantViolation):
        Hom("bad", cyclic(4), cyclic(2), (0, 1, 1, 1))


def test_continuity_on_2adic_instance():
    spec = load("z_2z_z")
    pair = spec.hompairs["parity"]
    assert check_agreement(pair, spec.instance)
    assert continuity(pair, spec.instance, 3) is None
