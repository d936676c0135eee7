import itertools
import random

import numpy as np
import pytest

from ncspacetime.algebra import (IM, IMINV, M_IDS, P_IDS, X_IDS, Signature,
                                 build_deformed_algebra, identify_orthogonal,
                                 defining_rep, physical_rep)
from ncspacetime.enveloping import (EnvElement, UnsupportedInverseError,
                                    ad_generator, casimir, centrality_defect,
                                    env_commutator, env_product, levi_civita6,
                                    random_env_element)
from ncspacetime.scalars import S_I, Scalar

SIG = Signature(1, 1)


@pytest.fixture(scope="module")
def full():
    return build_deformed_algebra(SIG, "full")


@pytest.fixture(scope="module")
def tangent():
    return build_deformed_algebra(SIG, "tangent")


def gen(gid):
    return EnvElement.generator(gid)


class TestProduct:
    def test_unit_law(self, full):
        rng = random.Random(1)
        one = EnvElement.one()
        for _ in range(10):
            a = random_env_element(rng, full, 3, 3)
            assert env_product(one, a, full) == a
            assert env_product(a, one, full) == a

    def test_single_swap(self, full):
        # x1*x0 = x0*x1 + i*eps4*ell^2*M01
        got = env_product(gen(X_IDS[1]), gen(X_IDS[0]), full)
        want = EnvElement.monomial((X_IDS[0], X_IDS[1])) + EnvElement.monomial(
            (M_IDS[0],), S_I * Scalar.param("ell", 2))
        assert got == want

    def test_degree_filtration(self, full):
        rng = random.Random(2)
        for _ in range(10):
            a = random_env_element(rng, full, 2, 3)
            b = random_env_element(rng, full, 2, 3)
            assert env_product(a, b, full).degree() <= a.degree() + b.degree()

    def test_associativity_random(self, full):
        rng = random.Random(3)
        for _ in range(8):
            a = random_env_element(rng, full, 2, 2)
            b = random_env_element(rng, full, 2, 2)
            c = random_env_element(rng, full, 2, 2)
            lhs = env_product(env_product(a, b, full), c, full)
            rhs = env_product(a, env_product(b, c, full), full)
            assert lhs == rhs

    def test_confluence_different_swap_orders(self, full):
        # the same non-canonical word, canonicalized along different
        # association paths, must land on one canonical form
        words = [(IM, M_IDS[3], P_IDS[1], X_IDS[0]),
                 (P_IDS[2], P_IDS[2], X_IDS[3], X_IDS[1]),
                 (M_IDS[5], IM, X_IDS[2], P_IDS[0])]
        for w in words:
            whole = env_product(EnvElement.monomial(w), EnvElement.one(), full)
            for cut in range(1, len(w)):
                split = env_product(EnvElement.monomial(w[:cut]),
                                    EnvElement.monomial(w[cut:]), full)
                assert split == whole
            letter_by_letter = EnvElement.one()
            for letter in w:
                letter_by_letter = env_product(
                    letter_by_letter, EnvElement.monomial((letter,)), full)
            assert letter_by_letter == whole

    def test_product_matches_matrix_oracle(self, full):
        # (p0*x0)*(p0*x0) under the 6x6 oracle
        rep = physical_rep(SIG, 1.0, 0.5)
        env = {"ell": 1.0, "R_inv": 0.5, "phi": SIG.eps5 * 0.25}
        a = env_product(gen(P_IDS[0]), gen(X_IDS[0]), full)
        prod = env_product(a, a, full)
        lhs = prod.evaluate_matrix(rep, env)
        m = rep[P_IDS[0]] @ rep[X_IDS[0]]
        assert np.abs(lhs - m @ m).max() <= 1e-12


class TestCommutator:
    def test_degree_one_reduces_to_bracket(self, full):
        for a, b in itertools.combinations(sorted(full.basis), 2):
            got = env_commutator(gen(a), gen(b), full)
            want = EnvElement.from_algebra_element(full.bracket_ids(a, b))
            assert got == want

    def test_antisymmetry_random(self, full):
        rng = random.Random(5)
        for _ in range(10):
            a = random_env_element(rng, full, 2, 2)
            b = random_env_element(rng, full, 2, 2)
            assert env_commutator(a, b, full) == -(env_commutator(b, a, full))

    def test_jacobi_on_degree_two(self, full):
        rng = random.Random(6)
        for _ in range(5):
            a = random_env_element(rng, full, 2, 2)
            b = random_env_element(rng, full, 2, 2)
            c = random_env_element(rng, full, 2, 2)
            j = env_commutator(env_commutator(a, b, full), c, full) \
                + env_commutator(env_commutator(b, c, full), a, full) \
                + env_commutator(env_commutator(c, a, full), b, full)
            assert j.is_zero

    def test_ad_generator_matches_products(self, full):
        rng = random.Random(7)
        for _ in range(10):
            a = random_env_element(rng, full, 3, 3)
            g = rng.choice(full.basis)
            assert ad_generator(g, a, full) == \
                env_commutator(gen(g), a, full)


class TestImInverse:
    def test_rejected_in_full_regime(self, full):
        with pytest.raises(UnsupportedInverseError):
            env_product(EnvElement.monomial((IMINV,)), EnvElement.one(), full)

    def test_cancellation(self, tangent):
        one = env_product(EnvElement.monomial((IM,)),
                          EnvElement.monomial((IMINV,)), tangent)
        assert one == EnvElement.one()
        other = env_product(EnvElement.monomial((IMINV,)),
                            EnvElement.monomial((IM,)), tangent)
        assert other == EnvElement.one()

    def test_x_rewrite_rule(self, tangent):
        # ImInv * x0 = x0*ImInv + i*eps4*ell^2 * p0 * ImInv^2
        got = env_product(EnvElement.monomial((IMINV,)), gen(X_IDS[0]), tangent)
        want = EnvElement.monomial((X_IDS[0], IMINV)) + EnvElement.monomial(
            (P_IDS[0], IMINV, IMINV), S_I * Scalar.param("ell", 2))
        assert got == want

    def test_inverse_relation_two_sided(self, tangent):
        # (x0 * ImInv) * Im = x0 exactly
        a = env_product(gen(X_IDS[0]), EnvElement.monomial((IMINV,)), tangent)
        assert env_product(a, EnvElement.monomial((IM,)), tangent) == gen(X_IDS[0])

    def test_extended_spacetime_central_inverse(self):
        st = build_deformed_algebra(SIG, "spacetime", extend_im=True)
        assert st.im_is_central
        a = env_product(EnvElement.monomial((IMINV, IMINV)),
                        EnvElement.monomial((IM,)), st)
        assert a == EnvElement.monomial((IMINV,))
        # ImInv commutes with everything here
        x = EnvElement.generator(X_IDS[0])
        assert env_commutator(EnvElement.monomial((IMINV,)), x, st).is_zero

    def test_associativity_with_inverse(self, tangent):
        rng = random.Random(8)
        ids = list(tangent.basis) + [IMINV]
        for _ in range(8):
            words = []
            for _ in range(3):
                deg = rng.randrange(0, 3)
                words.append(EnvElement.monomial(
                    tuple(sorted(rng.choice(ids) for _ in range(deg)))))
            a, b, c = words
            lhs = env_product(env_product(a, b, tangent), c, tangent)
            rhs = env_product(a, env_product(b, c, tangent), tangent)
            assert lhs == rhs


class TestCasimirs:
    def test_levi_civita(self):
        assert levi_civita6(0, 1, 2, 3, 4, 5) == 1
        assert levi_civita6(1, 0, 2, 3, 4, 5) == -1
        assert levi_civita6(0, 0, 2, 3, 4, 5) == 0
        rng = random.Random(3)
        for _ in range(30):
            perm = rng.sample(range(6), 6)
            val = levi_civita6(*perm)
            assert val in (-1, 1)
            k = rng.randrange(5)
            swapped = list(perm)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            assert levi_civita6(*swapped) == -val

    def test_c1_structure(self, full):
        c1 = casimir("C1", SIG, full)
        # quadratic, no mixed monomials survive normal ordering up to Im^2
        assert c1.degree() == 2
        # contains the M-sector sum and the x,p,Im squares with the
        # identification factors ell^-2, R_inv^-2
        assert c1.terms[(X_IDS[0], X_IDS[0])] == Scalar.param("ell", -2) * Scalar.of(2)
        assert c1.terms[(P_IDS[0], P_IDS[0])] == Scalar.param("R_inv", -2) * Scalar.of(2)
        assert c1.terms[(M_IDS[0], M_IDS[0])] == Scalar.of(-2)
        assert (IM, IM) in c1.terms

    def test_c1_centrality_symbolic(self, full):
        assert centrality_defect(casimir("C1", SIG, full), full) == []

    def test_c2_c3_centrality_symbolic(self, full):
        c2 = casimir("C2", SIG, full)
        c3 = casimir("C3", SIG, full)
        assert not c2.is_zero and not c3.is_zero
        assert centrality_defect(c2, full) == []
        assert centrality_defect(c3, full) == []

    def test_c2_structure_pins(self, full):
        # regression pins on the canonical form (validated independently by
        # the matrix oracle and the exact centrality sweep): C2 is degree 3
        # and pairs each generator triple with its complementary index pair
        c2 = casimir("C2", SIG, full)
        assert c2.degree() == 3
        unit = Scalar.param("ell", -1) * Scalar.param("R_inv", -1)
        assert c2.terms[(X_IDS[0], P_IDS[1], M_IDS[5])] == unit * Scalar.of(-48)
        assert c2.terms[(M_IDS[0], M_IDS[5], IM)] == unit * Scalar.of(48)

    def test_x0_is_not_central(self, full):
        defects = centrality_defect(gen(X_IDS[0]), full)
        bad_ids = {g for g, _ in defects}
        assert P_IDS[0] in bad_ids

    @pytest.mark.parametrize("kind", ["C1", "C2", "C3"])
    def test_matrix_oracle_centrality(self, kind):
        for e4 in (1, -1):
            for e5 in (1, -1):
                sig = Signature(e4, e5)
                spec = build_deformed_algebra(sig, "full")
                elem = casimir(kind, sig, spec)
                rep6 = defining_rep(sig)
                ident = identify_orthogonal(sig)
                env = {"ell": 1.0, "R_inv": 0.5, "phi": e5 * 0.25}
                rep = {}
                for gid in spec.basis:
                    k, s = ident.to_mab(gid)
                    rep[gid] = complex(s.evaluate(env)) * rep6[k]
                mat = elem.evaluate_matrix(rep, env)
                scale = max(1.0, np.abs(mat).max())
                for m in rep6.values():
                    assert np.abs(mat @ m - m @ mat).max() / scale <= 1e-10

    def test_c1_matrix_image_is_scalar(self):
        # frozen: the defining-rep image of C1 commutes with everything and
        # is in fact a multiple of the identity (computed: 10*I at ell=1, R=2)
        sig = SIG
        spec = build_deformed_algebra(sig, "full")
        elem = casimir("C1", sig, spec)
        rep6 = defining_rep(sig)
        ident = identify_orthogonal(sig)
        env = {"ell": 1.0, "R_inv": 0.5, "phi": 0.25}
        rep = {gid: complex(ident.to_mab(gid)[1].evaluate(env)) *
               rep6[ident.to_mab(gid)[0]] for gid in spec.basis}
        mat = elem.evaluate_matrix(rep, env)
        assert np.abs(mat - 10.0 * np.eye(6)).max() <= 1e-12

    def test_unknown_kind(self, full):
        with pytest.raises(ValueError):
            casimir("C4", SIG, full)
