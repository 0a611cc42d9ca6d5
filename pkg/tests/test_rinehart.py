import random

import pytest

from rhocarroll.derivation import der_commutator
from rhocarroll.rinehart import (LieRinehartPair, PairError, check_morphism,
                                 is_isotropic, is_killing,
                                 lie_derivative_metric, verify_pair)
from rhocarroll.sampling import (random_homogeneous_element,
                                 random_homogeneous_section)


class TestAnchor:
    def test_torus_anchor_formula(self, nc_torus):
        pair = nc_torus.pair
        alg = nc_torus.algebra
        f = pair.section({"e1": alg.gen("u"), "e2": alg.gen("v", -1)})
        anchored = pair.anchor_of(f)
        # a_f = f_u delu + f_v delv acts as f_u u du + f_v v dv
        for n, m in ((1, 0), (0, 1), (2, -1)):
            el = alg.gen("u", n) * alg.gen("v", m)
            expected = alg.gen("u") * (alg.ring.gauss(n) * el) + \
                alg.gen("v", -1) * (alg.ring.gauss(m) * el)
            assert anchored(el) == expected

    def test_zero_section(self, nc_torus):
        pair = nc_torus.pair
        assert pair.anchor_of(pair.zero_section()).is_zero_operator()

    def test_module_homomorphism(self, quantum_plane, rng):
        pair = quantum_plane.pair
        alg = quantum_plane.algebra
        for _ in range(20):
            f = random_homogeneous_element(alg, rng)
            u = pair.basis_section("delx").scaled(f)
            au = pair.anchor_of(u)
            base = pair.anchor_of(pair.basis_section("delx"))
            for g in alg.generators:
                e = alg.gen(g.name)
                assert au(e) == f * base(e)


class TestBracket:
    def test_kernel_closure_formula(self, quantum_plane, rng):
        # [f sigma, g sigma] = (f a_sigma(g) - rho(|f|,|g|) g a_sigma(f)) sigma
        pair = quantum_plane.pair
        alg = quantum_plane.algebra
        sigma = pair.basis_section("dely")
        a_sigma = pair.anchor_of(sigma)
        for _ in range(25):
            f = random_homogeneous_element(alg, rng)
            g = random_homogeneous_element(alg, rng)
            got = pair.bracket(sigma.scaled(f), sigma.scaled(g))
            rho = alg.factor.rho(f.degree_of(), g.degree_of())
            h = f * a_sigma(g) - rho * (g * a_sigma(f))
            assert got == sigma.scaled(h)

    def test_torus_constant_sections_commute(self, nc_torus):
        pair = nc_torus.pair
        assert pair.bracket(pair.basis_section("e1"),
                            pair.basis_section("e2")).is_zero()

    def test_skew_for_trivial_self_factor(self, quantum_plane, rng):
        pair = quantum_plane.pair
        for _ in range(10):
            u = random_homogeneous_section(pair, rng)
            if pair.algebra.factor.rho(u.degree_of(), u.degree_of()) == \
                    pair.algebra.ring.one():
                assert pair.bracket(u, u).is_zero()

    def test_leibniz_axiom(self, all_entries):
        rng = random.Random(41)
        for entry in all_entries.values():
            pair = entry.pair
            alg = entry.algebra
            for _ in range(20):
                u = random_homogeneous_section(pair, rng)
                v = random_homogeneous_section(pair, rng)
                f = random_homogeneous_element(alg, rng)
                rho = alg.factor.rho(u.degree_of(), f.degree_of())
                lhs = pair.bracket(u, v.scaled(f))
                rhs = v.scaled(pair.anchor_of(u)(f)) + \
                    pair.bracket(u, v).scaled(f).scaled(rho)
                assert lhs == rhs, entry.key

    def test_agrees_with_anchored_commutator(self, quantum_plane, nc_torus):
        # injective anchors: bracket must match the derivation commutator
        rng = random.Random(43)
        for entry in (quantum_plane, nc_torus):
            pair = entry.pair
            alg = entry.algebra
            for _ in range(20):
                u = random_homogeneous_section(pair, rng)
                v = random_homogeneous_section(pair, rng)
                lhs = pair.anchor_of(pair.bracket(u, v))
                rhs = der_commutator(pair.anchor_of(u), pair.anchor_of(v))
                for g in alg.generators:
                    e = alg.gen(g.name)
                    assert lhs(e) == rhs.on_generator(g.name), entry.key


class TestVerifyPair:
    @pytest.mark.parametrize("key", ["quantum_plane", "nc_torus", "r22_super",
                                     "z22", "eq2", "torus_line"])
    def test_catalog_pairs_pass(self, key, all_entries):
        rep = verify_pair(all_entries[key].pair, samples=60, seed=4)
        assert rep.ok, rep.render_text()

    def test_corrupted_structure_constant_fails(self, nc_torus):
        alg = nc_torus.algebra
        src = nc_torus.pair
        bad = LieRinehartPair(
            "bad_torus", alg, list(src.basis),
            anchors=dict(src.anchors),
            structure={("e1", "e2"): {"e1": alg.one()}})
        rep = verify_pair(bad, samples=20, seed=4)
        assert not rep.ok
        assert any("anchor homomorphism" in c.check and c.status == "fail"
                   for c in rep.checks)


class TestIsotropy:
    def test_zero_section_isotropic(self, nc_torus):
        assert is_isotropic(nc_torus.pair.zero_section())

    def test_torus_basis_not_isotropic(self, nc_torus):
        assert not is_isotropic(nc_torus.pair.basis_section("e1"))

    def test_zero_pair_all_isotropic(self, quantum_plane):
        alg = quantum_plane.algebra
        zero_pair = LieRinehartPair("zero", alg, [("e", alg.group.zero())],
                                    anchors={})
        assert is_isotropic(zero_pair.basis_section("e"))
        assert verify_pair(zero_pair, samples=10, seed=1).ok


class TestLieDerivative:
    def test_quantum_plane_sigma_killing(self, quantum_plane):
        pair = quantum_plane.pair
        tensor = lie_derivative_metric(pair.basis_section("dely"),
                                       quantum_plane.metric)
        assert tensor.is_zero()
        assert is_killing(pair.basis_section("dely"), quantum_plane.metric)

    def test_torus_basis_killing(self, nc_torus):
        assert is_killing(nc_torus.pair.basis_section("e1"), nc_torus.metric)

    def test_zero_section_killing(self, quantum_plane):
        assert is_killing(quantum_plane.pair.zero_section(), quantum_plane.metric)

    def test_commutator_of_lie_derivatives_on_functions(self, nc_torus):
        # [L_u, L_v] f = L_[u,v] f via the anchor homomorphism
        rng = random.Random(47)
        pair = nc_torus.pair
        alg = nc_torus.algebra
        for _ in range(15):
            u = random_homogeneous_section(pair, rng)
            v = random_homogeneous_section(pair, rng)
            f = random_homogeneous_element(alg, rng)
            au, av = pair.anchor_of(u), pair.anchor_of(v)
            rho = alg.factor.rho(u.degree_of(), v.degree_of())
            lhs = au(av(f)) - rho * av(au(f))
            rhs = pair.anchor_of(pair.bracket(u, v))(f)
            assert lhs == rhs

    def test_killing_sections_closed_under_bracket(self, quantum_plane):
        # delx and dely are both Killing for the quantum plane metric
        pair = quantum_plane.pair
        metric = quantum_plane.metric
        kill = [pair.basis_section("delx"), pair.basis_section("dely")]
        for u in kill:
            assert is_killing(u, metric)
        for u in kill:
            for v in kill:
                assert is_killing(pair.bracket(u, v), metric)

    def test_non_killing_witness(self, quantum_plane):
        # metric entry G(delx,delx) = y is degree-inconsistent on purpose:
        # L_dely G picks up dely(y) = y
        from rhocarroll.geometry import Metric
        pair = quantum_plane.pair
        alg = quantum_plane.algebra
        bad = Metric(pair, {("delx", "delx"): alg.gen("y")}, strict=False)
        tensor = lie_derivative_metric(pair.basis_section("dely"), bad)
        assert tensor.table[("delx", "delx")] == alg.gen("y")
        assert not is_killing(pair.basis_section("dely"), bad)


class TestMorphism:
    def test_identity_morphism(self, nc_torus):
        pair = nc_torus.pair
        phi = {n: pair.basis_section(n) for n in pair.basis_names}
        assert check_morphism(phi, pair, pair, samples=20, seed=2).ok

    def test_nonunit_scaling_breaks_anchor(self, r22_super):
        pair = r22_super.pair
        alg = r22_super.algebra
        phi = {n: pair.basis_section(n) for n in pair.basis_names}
        phi["dx"] = pair.basis_section("dx").scaled(alg.gen("x"))
        rep = check_morphism(phi, pair, pair, samples=10, seed=2)
        assert not rep.ok
        assert any(c.check == "anchor compatibility" and c.status == "fail"
                   for c in rep.checks)

    def test_kernel_inclusion_into_pair(self, quantum_plane):
        # the cyclic module generated by sigma = dely is itself a pair; its
        # inclusion is a morphism
        alg = quantum_plane.algebra
        target = quantum_plane.pair
        sub = LieRinehartPair(
            "l", alg, [("sig", alg.group.zero())],
            anchors={"sig": target.anchors["dely"]})
        assert verify_pair(sub, samples=20, seed=3).ok
        phi = {"sig": target.basis_section("dely")}
        assert check_morphism(phi, sub, target, samples=20, seed=3).ok

    def test_shape_mismatch(self, quantum_plane):
        with pytest.raises(PairError):
            check_morphism({}, quantum_plane.pair, quantum_plane.pair)
