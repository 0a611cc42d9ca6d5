import random

import pytest

from rhocarroll.carroll import (CarrollStructure, NonzeroDegreeFlow,
                                SigmaNotBasisExtendable,
                                carroll_connection_check, carroll_distribution,
                                check_involutive, check_stationary, flow,
                                quotient_metric, verify_carroll)
from rhocarroll.coefficients import GaussianRational
from rhocarroll.derivation import DerivationCombo
from rhocarroll.geometry import Connection, Metric
from rhocarroll.rinehart import LieRinehartPair
from rhocarroll.sampling import random_homogeneous_element


class TestVerifyCarroll:
    def test_quantum_plane_all_pass_certified(self, quantum_plane):
        rep = verify_carroll(quantum_plane.carroll)
        assert rep.ok
        exact = [c for c in rep.checks if c.check == "kernel exactness"]
        assert exact and exact[0].status == "pass"

    def test_torus_all_pass(self, nc_torus):
        rep = verify_carroll(nc_torus.carroll)
        assert rep.ok
        exact = [c for c in rep.checks if c.check == "kernel exactness"]
        assert exact and exact[0].status == "pass"

    def test_super_uncertified_exactness(self, r22_super):
        rep = verify_carroll(r22_super.carroll)
        assert rep.ok  # uncertified does not fail
        exact = [c for c in rep.checks if c.check == "kernel exactness"]
        assert exact and exact[0].status == "uncertified"
        containment = [c for c in rep.checks if c.check == "kernel containment"]
        assert containment and containment[0].status == "pass"

    def test_nonzero_degree_sigma_fails(self, quantum_plane):
        pair = quantum_plane.pair
        alg = quantum_plane.algebra
        sigma = pair.basis_section("dely").scaled(alg.gen("y"))
        bad = CarrollStructure("bad", pair, quantum_plane.metric, sigma)
        rep = verify_carroll(bad)
        degree = [c for c in rep.checks if c.check == "sigma degree 0"]
        assert degree and degree[0].status == "fail"


class TestDistribution:
    def test_quantum_plane_non_singular(self, quantum_plane):
        gen, cls, witness = carroll_distribution(quantum_plane.carroll)
        assert cls == "non-singular"
        assert witness is None
        # generator is the anchored sigma: y * dy
        alg = quantum_plane.algebra
        assert gen(alg.gen("y")) == alg.gen("y")
        assert gen(alg.gen("x")).is_zero()

    def test_torus_non_singular(self, nc_torus):
        _, cls, _ = carroll_distribution(nc_torus.carroll)
        assert cls == "non-singular"

    def test_super_uncertified(self, r22_super):
        _, cls, _ = carroll_distribution(r22_super.carroll)
        assert cls == "uncertified"

    def test_zero_anchor_is_singular_with_unit_witness(self, quantum_plane):
        alg = quantum_plane.algebra
        pair = LieRinehartPair("zero_anchor", alg,
                               [("s", alg.group.zero())], anchors={})
        metric = Metric(pair, {})
        cs = CarrollStructure("cs", pair, metric, pair.basis_section("s"))
        gen, cls, witness = carroll_distribution(cs)
        assert cls == "singular"
        assert witness == alg.one()


class TestInvolutivity:
    @pytest.mark.parametrize("key", ["quantum_plane", "nc_torus", "r22_super",
                                     "z22", "eq2"])
    def test_catalog_structures_involutive(self, key, all_entries):
        rep = check_involutive(all_entries[key].carroll, samples=15, seed=19)
        assert rep.ok, rep.render_text()

    def test_explicit_factor_quantum_plane(self, quantum_plane):
        # [x a_sigma, y a_sigma] = (x a_sigma(y) - rho y a_sigma(x)) a_sigma
        pair = quantum_plane.pair
        alg = quantum_plane.algebra
        a_sigma = pair.anchor_of(quantum_plane.carroll.sigma)
        x, y = alg.gen("x"), alg.gen("y")
        X = a_sigma.scaled(x)
        Y = a_sigma.scaled(y)
        rho = alg.factor.rho(x.degree_of(), y.degree_of())
        h = x * a_sigma(y) - rho * (y * a_sigma(x))
        assert h == x * y  # a_sigma(y) = y, a_sigma(x) = 0
        HZ = a_sigma.scaled(h)
        for g in alg.generators:
            e = alg.gen(g.name)
            got = X(Y(e)) - alg.factor.rho(x.degree_of(), y.degree_of()) * Y(X(e))
            assert got == HZ(e)


class TestStationarity:
    @pytest.mark.parametrize("key", ["quantum_plane", "nc_torus", "r22_super",
                                     "z22", "eq2"])
    def test_catalog_structures_stationary(self, key, all_entries):
        rep = check_stationary(all_entries[key].carroll, samples=8, seed=21)
        assert rep.ok, rep.render_text()

    def test_non_killing_metric_witnessed(self, quantum_plane):
        pair = quantum_plane.pair
        alg = quantum_plane.algebra
        bad = Metric(pair, {("delx", "delx"): alg.gen("y")}, strict=False)
        cs = CarrollStructure("bad", pair, bad, pair.basis_section("dely"))
        rep = check_stationary(cs)
        assert not rep.ok
        first = rep.first_failure()
        assert first.value == alg.gen("y")


class TestConnectionCheck:
    def test_quantum_plane_connection_passes(self, quantum_plane):
        rep = carroll_connection_check(quantum_plane.carroll,
                                       quantum_plane.connection)
        assert rep.ok
        assert any(c.check == "nabla preserves l" and c.status == "pass"
                   for c in rep.checks)

    def test_torus_trivial_connection_passes(self, nc_torus):
        assert carroll_connection_check(nc_torus.carroll, nc_torus.connection).ok

    def test_incompatible_connection_witnessed(self, quantum_plane):
        pair = quantum_plane.pair
        alg = quantum_plane.algebra
        bad = Connection(pair, {("delx", "delx"): {"delx": alg.one()}})
        rep = carroll_connection_check(quantum_plane.carroll, bad)
        assert not rep.ok
        first = rep.first_failure()
        # the defect is -2 G(delx,delx) = -2
        assert first.value == alg.ring.gauss(-2) * alg.one()

    def test_preservation_of_kernel_on_multiples(self, quantum_plane, rng):
        # nabla_u (f sigma) stays in l for sampled u, f
        pair = quantum_plane.pair
        cs = quantum_plane.carroll
        conn = quantum_plane.connection
        for _ in range(15):
            f = random_homogeneous_element(quantum_plane.algebra, rng)
            for a in pair.basis_names:
                img = conn.nabla(pair.basis_section(a), cs.sigma.scaled(f))
                status, _ = cs.section_in_kernel_module(img)
                assert status is True


class TestQuotientMetric:
    def test_quantum_plane_quotient(self, quantum_plane):
        basis, matrix, status, rep = quotient_metric(quantum_plane.carroll)
        assert basis == ["delx"]
        assert matrix[("delx", "delx")] == quantum_plane.algebra.one()
        assert status == "nondegenerate"
        assert rep.ok

    def test_torus_quotient(self, nc_torus):
        basis, matrix, status, rep = quotient_metric(nc_torus.carroll)
        assert basis == ["e2"]
        assert matrix[("e2", "e2")] == nc_torus.algebra.one()
        assert status == "nondegenerate"
        assert rep.ok

    def test_lift_independence_is_reported(self, quantum_plane):
        _, _, _, rep = quotient_metric(quantum_plane.carroll)
        assert any(c.check == "lift independence" and c.status == "pass"
                   for c in rep.checks)

    def test_sigma_without_pivot_rejected(self, quantum_plane):
        pair = quantum_plane.pair
        alg = quantum_plane.algebra
        # coefficient 1 + x is not a unit monomial
        sigma = pair.basis_section("dely").scaled(alg.one() + alg.gen("x"))
        cs = CarrollStructure("no_pivot", pair,
                              Metric(pair, {}, strict=False), sigma)
        with pytest.raises(SigmaNotBasisExtendable):
            quotient_metric(cs)


class TestFlow:
    def test_euler_flow_exponential(self, quantum_plane):
        alg = quantum_plane.algebra
        dely = quantum_plane.derivations["dely"]
        y = alg.gen("y")
        poly = flow(dely, y, 3)
        from fractions import Fraction
        assert poly.coefficient(0) == y
        assert poly.coefficient(1) == y
        assert poly.coefficient(2) == y * GaussianRational(Fraction(1, 2))
        assert poly.coefficient(3) == y * GaussianRational(Fraction(1, 6))
        assert poly.render() == "y*(1 + t + 1/2*t^2 + 1/6*t^3)"

    def test_killed_argument_is_constant(self, quantum_plane):
        alg = quantum_plane.algebra
        dely = quantum_plane.derivations["dely"]
        poly = flow(dely, alg.gen("x"), 5)
        assert poly.coefficient(0) == alg.gen("x")
        for k in range(1, 6):
            assert poly.coefficient(k).is_zero()

    def test_nonzero_degree_rejected(self, quantum_plane):
        with pytest.raises(NonzeroDegreeFlow):
            flow(quantum_plane.derivations["dx"], quantum_plane.algebra.gen("x"), 3)

    def test_multiplicativity_through_order(self, quantum_plane):
        rng = random.Random(61)
        alg = quantum_plane.algebra
        dely = quantum_plane.derivations["dely"]
        for _ in range(25):
            f = random_homogeneous_element(alg, rng)
            g = random_homogeneous_element(alg, rng)
            order = 4
            lhs = flow(dely, f * g, order)
            rhs = flow(dely, f, order).truncated_product(flow(dely, g, order), order)
            assert lhs == rhs
