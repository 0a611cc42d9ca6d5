import random
from fractions import Fraction

import pytest

from rhocarroll.coefficients import GaussianRational
from rhocarroll.geometry import (Connection, InverseInvalid,
                                 InverseUnavailable, KernelNonTrivial, Metric,
                                 check_tensoriality,
                                 covariant_derivative_metric, curvature,
                                 koszul_rhs, levi_civita,
                                 metric_compatible_on_basis, torsion)
from rhocarroll.rinehart import PairError
from rhocarroll.sampling import (random_homogeneous_element,
                                 random_homogeneous_section)


class TestMetric:
    def test_quantum_plane_components(self, quantum_plane):
        pair = quantum_plane.pair
        G = quantum_plane.metric
        alg = quantum_plane.algebra
        assert G.eval(pair.basis_section("delx"), pair.basis_section("delx")) == alg.one()
        assert G.eval(pair.basis_section("dely"), pair.basis_section("dely")).is_zero()

    def test_torus_metric_formula(self, nc_torus):
        pair = nc_torus.pair
        alg = nc_torus.algebra
        rng = random.Random(3)
        for _ in range(20):
            fv = random_homogeneous_element(alg, rng)
            gv = random_homogeneous_element(alg, rng)
            f = pair.section({"e1": random_homogeneous_element(alg, rng), "e2": fv})
            g = pair.section({"e1": random_homogeneous_element(alg, rng), "e2": gv})
            assert nc_torus.metric.eval(f, g) == fv * gv

    def test_zero_slot(self, nc_torus):
        pair = nc_torus.pair
        assert nc_torus.metric.eval(pair.zero_section(),
                                    pair.basis_section("e2")).is_zero()

    def test_left_linearity(self, quantum_plane, rng):
        pair = quantum_plane.pair
        G = quantum_plane.metric
        for _ in range(15):
            f = random_homogeneous_element(quantum_plane.algebra, rng)
            u = random_homogeneous_section(pair, rng)
            v = random_homogeneous_section(pair, rng)
            assert G.eval(u.scaled(f), v) == f * G.eval(u, v)

    def test_rho_symmetry_fill(self, r22_super):
        # only (dth1,dth2) declared; (dth2,dth1) filled as rho * transpose = -1
        pair = r22_super.pair
        G = r22_super.metric
        alg = r22_super.algebra
        assert G.entry("dth1", "dth2") == alg.one()
        assert G.entry("dth2", "dth1") == -alg.one()

    def test_degree_violation_rejected(self, quantum_plane):
        with pytest.raises(PairError):
            Metric(quantum_plane.pair,
                   {("delx", "delx"): quantum_plane.algebra.gen("y")})

    def test_strict_false_permits_controls(self, quantum_plane):
        bad = Metric(quantum_plane.pair,
                     {("delx", "delx"): quantum_plane.algebra.gen("y")},
                     strict=False)
        assert bad.entry("delx", "delx") == quantum_plane.algebra.gen("y")


class TestConnection:
    def test_quantum_plane_table(self, quantum_plane):
        pair = quantum_plane.pair
        C = quantum_plane.connection
        delx, dely = pair.basis_section("delx"), pair.basis_section("dely")
        assert C.nabla(delx, delx) == dely
        assert C.nabla(dely, dely).is_zero()

    def test_torus_trivial_connection_formula(self, nc_torus):
        pair = nc_torus.pair
        alg = nc_torus.algebra
        C = nc_torus.connection
        rng = random.Random(13)
        for _ in range(15):
            f = random_homogeneous_section(pair, rng)
            gu = random_homogeneous_element(alg, rng)
            gv = random_homogeneous_element(alg, rng)
            g = pair.section({"e1": gu, "e2": gv})
            anchored = pair.anchor_of(f)
            expected = pair.section({"e1": anchored(gu), "e2": anchored(gv)})
            assert C.nabla(f, g) == expected

    def test_left_linearity_in_lower_slot(self, quantum_plane, rng):
        pair = quantum_plane.pair
        C = quantum_plane.connection
        for _ in range(15):
            f = random_homogeneous_element(quantum_plane.algebra, rng)
            u = random_homogeneous_section(pair, rng)
            v = random_homogeneous_section(pair, rng)
            assert C.nabla(u.scaled(f), v) == C.nabla(u, v).scaled(f)


class TestCurvatureTorsion:
    def test_quantum_plane_flat(self, quantum_plane):
        pair = quantum_plane.pair
        C = quantum_plane.connection
        delx, dely = pair.basis_section("delx"), pair.basis_section("dely")
        assert curvature(C, delx, dely, delx).is_zero()
        assert curvature(C, delx, dely, dely).is_zero()

    def test_quantum_plane_torsion_free(self, quantum_plane):
        pair = quantum_plane.pair
        C = quantum_plane.connection
        for a in pair.basis_names:
            for b in pair.basis_names:
                assert torsion(C, pair.basis_section(a),
                               pair.basis_section(b)).is_zero()

    def test_torus_flat_and_torsion_free(self, nc_torus):
        pair = nc_torus.pair
        C = nc_torus.connection
        for a in pair.basis_names:
            for b in pair.basis_names:
                assert torsion(C, pair.basis_section(a),
                               pair.basis_section(b)).is_zero()
                for c in pair.basis_names:
                    assert curvature(C, pair.basis_section(a),
                                     pair.basis_section(b),
                                     pair.basis_section(c)).is_zero()

    def test_trivial_self_slot(self, quantum_plane, rng):
        pair = quantum_plane.pair
        C = quantum_plane.connection
        for _ in range(10):
            u = random_homogeneous_section(pair, rng)
            w = random_homogeneous_section(pair, rng)
            if pair.algebra.factor.rho(u.degree_of(), u.degree_of()) == \
                    pair.algebra.ring.one():
                assert curvature(C, u, u, w).is_zero()
                assert torsion(C, u, u).is_zero()


class TestCovariantDerivative:
    def test_quantum_plane_xxx_component(self, quantum_plane):
        # a_delx(G(delx,delx)) = 0 and the two connection terms hit the kernel
        pair = quantum_plane.pair
        val = covariant_derivative_metric(
            quantum_plane.connection, quantum_plane.metric,
            pair.basis_section("delx"), pair.basis_section("delx"),
            pair.basis_section("delx"))
        assert val.is_zero()

    def test_all_basis_triples(self, quantum_plane, nc_torus):
        for entry in (quantum_plane, nc_torus):
            rep = metric_compatible_on_basis(entry.connection, entry.metric)
            assert rep.ok

    def test_zero_connection_constant_metric(self, nc_torus):
        pair = nc_torus.pair
        zero_conn = Connection(pair, {})
        rep = metric_compatible_on_basis(zero_conn, nc_torus.aux_metric)
        assert rep.ok


class TestTensoriality:
    @pytest.mark.parametrize("key", ["quantum_plane", "nc_torus", "r22_super",
                                     "z22", "eq2"])
    def test_catalog_connections_tensorial(self, key, all_entries):
        entry = all_entries[key]
        rep = check_tensoriality(entry.connection, samples=60, seed=6)
        assert rep.ok, rep.render_text()

    def test_non_connection_fails(self, nc_torus):
        # the bracket violates lower-slot left-linearity (axiom (2)), so
        # treating it as nabla must produce tensoriality failures
        class BracketAsNabla:
            def __init__(self, pair):
                self.pair = pair

            def nabla(self, u, v):
                return self.pair.bracket(u, v)

        rep = check_tensoriality(BracketAsNabla(nc_torus.pair),
                                 samples=40, seed=6)
        assert not rep.ok
        first = rep.first_failure()
        assert first.value is not None and not first.value.is_zero()


class TestLeviCivita:
    def test_torus_auxiliary_metric_gives_zero_table(self, nc_torus):
        conn = levi_civita(nc_torus.pair, nc_torus.aux_metric)
        for key, sec in conn.table.items():
            assert sec.is_zero(), key

    def test_brute_force_oracle_agreement(self, nc_torus):
        # independent solve: with G = identity the Koszul system reads
        # 2 Gamma^c_ab = RHS(a,b,c); solve directly and compare
        pair = nc_torus.pair
        alg = nc_torus.algebra
        conn = levi_civita(nc_torus.pair, nc_torus.aux_metric)
        half = alg.scalar(GaussianRational(Fraction(1, 2)))
        for a in pair.basis_names:
            for b in pair.basis_names:
                expected = {c: half * koszul_rhs(pair, nc_torus.aux_metric, a, b, c)
                            for c in pair.basis_names}
                got = conn.base(a, b)
                for c in pair.basis_names:
                    assert got.coefficient(c) == expected[c]

    def test_satisfies_defining_properties(self, nc_torus):
        conn = levi_civita(nc_torus.pair, nc_torus.aux_metric)
        pair = nc_torus.pair
        for a in pair.basis_names:
            for b in pair.basis_names:
                assert torsion(conn, pair.basis_section(a),
                               pair.basis_section(b)).is_zero()
        assert metric_compatible_on_basis(conn, nc_torus.aux_metric).ok

    def test_zero_brackets_identity_metric_gives_zero(self, quantum_plane):
        conn = levi_civita(quantum_plane.pair,
                           Metric(quantum_plane.pair, {
                               ("delx", "delx"): quantum_plane.algebra.one(),
                               ("dely", "dely"): quantum_plane.algebra.one()}))
        for key, sec in conn.table.items():
            assert sec.is_zero(), key

    def test_degenerate_metric_rejected(self, quantum_plane):
        with pytest.raises(KernelNonTrivial):
            levi_civita(quantum_plane.pair, quantum_plane.metric)

    def test_supplied_inverse_path(self, nc_torus):
        pair = nc_torus.pair
        alg = nc_torus.algebra
        # scale the metric by the unit q so the entries are not field scalars
        q = alg.ring.param("q")
        scaled = Metric(pair, {("e1", "e1"): q * alg.one(),
                               ("e2", "e2"): q * alg.one()})
        with pytest.raises(InverseUnavailable):
            levi_civita(pair, scaled)
        qinv = alg.scalar(alg.ring.param("q", -1))
        inverse = {("e1", "e1"): qinv, ("e2", "e2"): qinv,
                   ("e1", "e2"): alg.zero(), ("e2", "e1"): alg.zero()}
        conn = levi_civita(pair, scaled, g_inverse=inverse)
        for key, sec in conn.table.items():
            assert sec.is_zero(), key

    def test_invalid_inverse_rejected(self, nc_torus):
        pair = nc_torus.pair
        alg = nc_torus.algebra
        q = alg.ring.param("q")
        scaled = Metric(pair, {("e1", "e1"): q * alg.one(),
                               ("e2", "e2"): q * alg.one()})
        bad = {("e1", "e1"): alg.one(), ("e2", "e2"): alg.one(),
               ("e1", "e2"): alg.zero(), ("e2", "e1"): alg.zero()}
        with pytest.raises(InverseInvalid):
            levi_civita(pair, scaled, g_inverse=bad)

    def test_uniqueness_probe(self, nc_torus):
        # perturbing any Christoffel entry must break torsion-freeness or
        # metric compatibility
        rng = random.Random(15)
        pair = nc_torus.pair
        conn = levi_civita(pair, nc_torus.aux_metric)
        for _ in range(10):
            a = rng.choice(pair.basis_names)
            b = rng.choice(pair.basis_names)
            m = rng.choice(pair.basis_names)
            bump = random_homogeneous_element(nc_torus.algebra, rng)
            table = {key: sec for key, sec in conn.table.items()}
            table[(a, b)] = table[(a, b)] + pair.section({m: bump})
            perturbed = Connection(pair, table)
            torsion_broken = any(
                not torsion(perturbed, pair.basis_section(p),
                            pair.basis_section(q2)).is_zero()
                for p in pair.basis_names for q2 in pair.basis_names)
            compat_broken = not metric_compatible_on_basis(
                perturbed, nc_torus.aux_metric).ok
            assert torsion_broken or compat_broken
