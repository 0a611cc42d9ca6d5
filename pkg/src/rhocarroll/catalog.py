"""Catalog of built-in example structures, used as golden fixtures.

Every entry is constructed programmatically and passed through the module
verifiers at build time, so a catalog entry in hand is a certified object.
Coefficient rings that would classically be smooth functions or formal power
series are modeled with polynomial generators; the checks exercised here are
insensitive to that completion and each entry notes the modeling choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgebraPresentation, GeneratorSpec
from .carroll import CarrollStructure, verify_carroll
from .coefficients import CoefficientRing
from .derivation import DerivationCombo, RhoDerivation, as_combo, verify_derivation
from .geometry import Connection, Metric
from .grading import CommutationFactor, GradeGroup, check_commutation_axioms
from .report import VerificationReport
from .rinehart import LieRinehartPair, verify_pair


class CatalogError(ValueError):
    pass


@dataclass
class CatalogEntry:
    key: str
    description: str
    algebra: AlgebraPresentation
    derivations: dict = field(default_factory=dict)
    pair: LieRinehartPair | None = None
    metric: Metric | None = None
    connection: Connection | None = None
    carroll: CarrollStructure | None = None
    aux_metric: Metric | None = None
    notes: list = field(default_factory=list)

    def verify_all(self, samples: int = 50, seed: int = 0) -> VerificationReport:
        rep = VerificationReport(f"catalog entry {self.key}")
        rep.extend(check_commutation_axioms(self.algebra.factor, max(samples, 100), seed))
        for deriv in self.derivations.values():
            if isinstance(deriv, RhoDerivation):
                rep.extend(verify_derivation(deriv))
        if self.pair is not None:
            rep.extend(verify_pair(self.pair, samples=samples, seed=seed))
        if self.metric is not None:
            self.metric.validate()
            rep.passed("metric well-formed", self.key)
        if self.carroll is not None:
            rep.extend(verify_carroll(self.carroll))
        return rep


def _certify(entry: CatalogEntry):
    rep = entry.verify_all(samples=25)
    if not rep.ok:
        first = rep.first_failure()
        raise CatalogError(
            f"catalog entry {entry.key} failed its own verification: "
            f"{first.check} :: {first.target} :: {first.witness}")
    return entry


def build_quantum_plane() -> CatalogEntry:
    """Extended quantum plane K_q[x^{±1}, y^{±1}] with x y = q y x.

    Z^2-graded with |x| = (1,0), |y| = (0,1); commutation factor
    rho((n,m),(n',m')) = q^{n m' - m n'}.  The pair has the degree-(0,0)
    Euler derivations delx = x dx, dely = y dy as basis, identity anchor and
    zero brackets; the metric G(delx,delx) = 1 (all else 0) has kernel
    generated by dely; the connection nabla_delx delx = dely is a flat
    torsion-free Carroll connection.
    """
    ring = CoefficientRing(("q",))
    group = GradeGroup(2, 0)
    factor = CommutationFactor(group, ring, q_form=[[0, 1], [-1, 0]])
    alg = AlgebraPresentation("quantum_plane", ring, group, factor, [
        GeneratorSpec("x", group.degree(1, 0), invertible=True),
        GeneratorSpec("y", group.degree(0, 1), invertible=True),
    ], integral_domain=True)

    dx = RhoDerivation(alg, "dx", group.degree(-1, 0), {"x": alg.one()})
    dy = RhoDerivation(alg, "dy", group.degree(0, -1), {"y": alg.one()})
    delx = DerivationCombo(alg, {dx: alg.gen("x")})
    dely = DerivationCombo(alg, {dy: alg.gen("y")})

    pair = LieRinehartPair("quantum_plane_pair", alg,
                           [("delx", group.zero()), ("dely", group.zero())],
                           anchors={"delx": delx, "dely": dely})
    metric = Metric(pair, {("delx", "delx"): alg.one()})
    conn = Connection(pair, {("delx", "delx"): {"dely": alg.one()}})
    cs = CarrollStructure("quantum_plane_carroll", pair, metric,
                          pair.basis_section("dely"))
    entry = CatalogEntry(
        key="quantum_plane",
        description="extended quantum plane with its Carroll structure",
        algebra=alg,
        derivations={"dx": dx, "dy": dy, "delx": delx, "dely": dely},
        pair=pair, metric=metric, connection=conn, carroll=cs,
        notes=["basis sections delx, dely are the Euler derivations x*dx, y*dy"],
    )
    return _certify(entry)


def build_nc_torus(explicit_tau: bool = False) -> CatalogEntry:
    """Noncommutative 2-torus: u v = q v u with q a formal unit.

    The canonical action pair has two degree-(0,0) basis sections e1, e2
    anchored to the Euler derivations delu = u du, delv = v dv and zero
    brackets.  The 2*pi*i normalization of delu, delv is absorbed by default;
    ``explicit_tau=True`` declares tau (standing for 2*pi) and anchors to
    tau*i*u*du instead, which changes no verification outcome.  The metric
    G(f,g) = f_2 g_2 has kernel generated by e1; the trivial (zero
    Christoffel) connection is a flat Carroll connection.  An auxiliary
    nondegenerate metric f_1 g_1 + f_2 g_2 is attached for the Levi-Civita
    construction.
    """
    params = ("q", "tau") if explicit_tau else ("q",)
    ring = CoefficientRing(params)
    group = GradeGroup(2, 0)
    factor = CommutationFactor(group, ring, q_form=[[0, 1], [-1, 0]])
    alg = AlgebraPresentation("nc_torus", ring, group, factor, [
        GeneratorSpec("u", group.degree(1, 0), invertible=True),
        GeneratorSpec("v", group.degree(0, 1), invertible=True),
    ], integral_domain=True)

    du = RhoDerivation(alg, "du", group.degree(-1, 0), {"u": alg.one()})
    dv = RhoDerivation(alg, "dv", group.degree(0, -1), {"v": alg.one()})
    if explicit_tau:
        scale = ring.param("tau") * ring.i()
        delu = DerivationCombo(alg, {du: alg.gen("u") * scale})
        delv = DerivationCombo(alg, {dv: alg.gen("v") * scale})
    else:
        delu = DerivationCombo(alg, {du: alg.gen("u")})
        delv = DerivationCombo(alg, {dv: alg.gen("v")})

    pair = LieRinehartPair("nc_torus_pair", alg,
                           [("e1", group.zero()), ("e2", group.zero())],
                           anchors={"e1": delu, "e2": delv})
    metric = Metric(pair, {("e2", "e2"): alg.one()})
    aux = Metric(pair, {("e1", "e1"): alg.one(), ("e2", "e2"): alg.one()})
    conn = Connection(pair, {})
    cs = CarrollStructure("nc_torus_carroll", pair, metric, pair.basis_section("e1"))
    entry = CatalogEntry(
        key="nc_torus",
        description="noncommutative 2-torus canonical action pair",
        algebra=alg,
        derivations={"du": du, "dv": dv, "delu": delu, "delv": delv},
        pair=pair, metric=metric, connection=conn, carroll=cs, aux_metric=aux,
        notes=["q stands for the unit exp(2*pi*i*theta); never evaluated numerically",
               "2*pi*i scale of the Euler derivations absorbed"
               if not explicit_tau else
               "2*pi carried as the formal unit tau; scale tau*i on Euler derivations"],
    )
    return _certify(entry)


def build_r22_super() -> CatalogEntry:
    """Superdomain with two even and two odd coordinates, Z2-graded.

    Generators x, y (even), th1, th2 (odd, square-zero) over the sign factor
    rho(a,b) = (-1)^{ab}; polynomial coefficients model the classically
    smooth ones.  The pair is spanned by the coordinate derivations with
    identity anchor; the metric has G(dy,dy) = 1, G(dth1,dth2) = 1 =
    -G(dth2,dth1) and kernel generated by dx.  Odd nilpotents mean the
    no-zero-divisor flag is off, so kernel exactness reports uncertified.
    """
    ring = CoefficientRing(())
    group = GradeGroup(0, 1)
    factor = CommutationFactor(group, ring, sign_form=[[1]])
    alg = AlgebraPresentation("r22_super", ring, group, factor, [
        GeneratorSpec("x", group.degree(0)),
        GeneratorSpec("y", group.degree(0)),
        GeneratorSpec("th1", group.degree(1)),
        GeneratorSpec("th2", group.degree(1)),
    ], integral_domain=False)

    derivs = {}
    for name in ("x", "y", "th1", "th2"):
        derivs["d" + name] = RhoDerivation(
            alg, "d" + name, -alg.generator(name).degree, {name: alg.one()})

    basis = [("dx", group.degree(0)), ("dy", group.degree(0)),
             ("dth1", group.degree(1)), ("dth2", group.degree(1))]
    pair = LieRinehartPair("r22_super_pair", alg, basis,
                           anchors={n: derivs[n] for n, _ in basis})
    metric = Metric(pair, {
        ("dy", "dy"): alg.one(),
        ("dth1", "dth2"): alg.one(),
    })
    conn = Connection(pair, {})
    cs = CarrollStructure("r22_super_carroll", pair, metric, pair.basis_section("dx"))
    entry = CatalogEntry(
        key="r22_super",
        description="superdomain R^{2|2} with a Carrollian degenerate metric",
        algebra=alg,
        derivations=derivs,
        pair=pair, metric=metric, connection=conn, carroll=cs,
        notes=["polynomial coefficients stand in for smooth functions",
               "odd coordinates force th^2 = 0; no-zero-divisor flag off"],
    )
    return _certify(entry)


def build_z22() -> CatalogEntry:
    """Z2 x Z2 graded domain with coordinates x, z, xi1, xi2, th1, th2.

    Degrees |x| = (0,0), |z| = (1,1), |xi_i| = (0,1), |th_j| = (1,0) with the
    sign factor rho(a,b) = (-1)^{<a,b>}.  The factor forces z to anticommute
    with both xi and th (the inner product of (1,1) with either mixed degree
    is odd) and z^2 to survive; xi and th square to zero.  The metric has
    G(dz,dz) = 1 and symplectic-style xi and th blocks, kernel generated by
    dx; polynomial coefficients model the classically formal series.
    """
    ring = CoefficientRing(())
    group = GradeGroup(0, 2)
    factor = CommutationFactor(group, ring, sign_form=[[1, 0], [0, 1]])
    alg = AlgebraPresentation("z22_domain", ring, group, factor, [
        GeneratorSpec("x", group.degree(0, 0)),
        GeneratorSpec("z", group.degree(1, 1)),
        GeneratorSpec("xi1", group.degree(0, 1)),
        GeneratorSpec("xi2", group.degree(0, 1)),
        GeneratorSpec("th1", group.degree(1, 0)),
        GeneratorSpec("th2", group.degree(1, 0)),
    ], integral_domain=False)

    derivs = {}
    for name in ("x", "z", "xi1", "xi2", "th1", "th2"):
        derivs["d" + name] = RhoDerivation(
            alg, "d" + name, -alg.generator(name).degree, {name: alg.one()})

    basis = [("d" + n, alg.generator(n).degree)
             for n in ("x", "z", "xi1", "xi2", "th1", "th2")]
    pair = LieRinehartPair("z22_pair", alg, basis,
                           anchors={bn: derivs[bn] for bn, _ in basis})
    metric = Metric(pair, {
        ("dz", "dz"): alg.one(),
        ("dxi1", "dxi2"): alg.one(),
        ("dth1", "dth2"): alg.one(),
    })
    conn = Connection(pair, {})
    cs = CarrollStructure("z22_carroll", pair, metric, pair.basis_section("dx"))
    entry = CatalogEntry(
        key="z22",
        description="Z2 x Z2 graded domain with a Carrollian degenerate metric",
        algebra=alg,
        derivations=derivs,
        pair=pair, metric=metric, connection=conn, carroll=cs,
        notes=["polynomial coefficients stand in for formal power series",
               "sign factor forces z*th = -th*z and z*xi = -xi*z; "
               "no bicharacter admits z commuting with th while "
               "anticommuting with xi, since |z| = |xi| + |th|"],
    )
    return _certify(entry)


def build_eq2() -> CatalogEntry:
    """Quantum Euclidean group E_q(2): v (invertible), t, tbar with
    v t = q^2 t v, v tbar = q^-2 tbar v, t tbar = q^2 tbar t.

    Degrees |v| = (-1,1), |t| = (0,1), |tbar| = (1,0) with factor
    rho((n,m),(n',m')) = q^{-2(n m' - n' m)}.  The torus-action pair mirrors
    the noncommutative-torus construction: basis sections E1, E2 of degree
    (0,0) anchored to delv = v dv and delt = t dt with zero brackets; the
    metric and trivial connection follow the same pattern (delt is an
    engine-completed choice of second action generator, not given data).
    """
    ring = CoefficientRing(("q",))
    group = GradeGroup(2, 0)
    factor = CommutationFactor(group, ring, q_form=[[0, -2], [2, 0]])
    alg = AlgebraPresentation("eq2", ring, group, factor, [
        GeneratorSpec("v", group.degree(-1, 1), invertible=True),
        GeneratorSpec("t", group.degree(0, 1)),
        GeneratorSpec("tbar", group.degree(1, 0)),
    ], integral_domain=True)

    dvg = RhoDerivation(alg, "dv", -alg.generator("v").degree, {"v": alg.one()})
    dt = RhoDerivation(alg, "dt", -alg.generator("t").degree, {"t": alg.one()})
    dtbar = RhoDerivation(alg, "dtbar", -alg.generator("tbar").degree,
                          {"tbar": alg.one()})
    delv = DerivationCombo(alg, {dvg: alg.gen("v")})
    delvbar = DerivationCombo(alg, {dvg: -alg.gen("v")})
    delt = DerivationCombo(alg, {dt: alg.gen("t")})

    pair = LieRinehartPair("eq2_pair", alg,
                           [("E1", group.zero()), ("E2", group.zero())],
                           anchors={"E1": delv, "E2": delt})
    metric = Metric(pair, {("E2", "E2"): alg.one()})
    conn = Connection(pair, {})
    cs = CarrollStructure("eq2_carroll", pair, metric, pair.basis_section("E1"))
    entry = CatalogEntry(
        key="eq2",
        description="quantum Euclidean group E_q(2) torus-action pair",
        algebra=alg,
        derivations={"dv": dvg, "dt": dt, "dtbar": dtbar,
                     "delv": delv, "delvbar": delvbar, "delt": delt},
        pair=pair, metric=metric, connection=conn, carroll=cs,
        notes=["vbar realized as v^-1; delvbar = vbar*dvbar equals -delv",
               "pair/metric/connection completed by mirroring the torus "
               "construction; only the algebra, grading and delv, delvbar "
               "are given data"],
    )
    return _certify(entry)


def build_poly_line(template: CatalogEntry, name: str = "s") -> CatalogEntry:
    """Degree-0 polynomial line K[s] over the template entry's group, factor
    and ring; its derivation module is cyclic, generated by ds."""
    alg0 = template.algebra
    group = alg0.group
    alg = AlgebraPresentation(f"line_{name}", alg0.ring, group, alg0.factor, [
        GeneratorSpec(name, group.zero()),
    ], integral_domain=True)
    ds = RhoDerivation(alg, "d" + name, group.zero(), {name: alg.one()})
    pair = LieRinehartPair(f"line_{name}_pair", alg,
                           [("d" + name, group.zero())],
                           anchors={"d" + name: ds})
    metric = Metric(pair, {})
    entry = CatalogEntry(
        key=f"line_{name}",
        description=f"polynomial line in one degree-0 variable {name}",
        algebra=alg,
        derivations={"d" + name: ds},
        pair=pair, metric=metric,
        notes=["zero metric; derivation module is free cyclic"],
    )
    return _certify(entry)


def build_tensor_product(a: CatalogEntry, b: CatalogEntry,
                         metric: Metric | None = None,
                         key: str | None = None) -> CatalogEntry:
    """Tensor product of two entries over the same group, factor and ring.

    The combined algebra concatenates the generator lists; the cross
    commutation rules come from rho via the degrees, which is exactly the
    tensor product rule (f1 (x) p1)(f2 (x) p2) = rho(|p1|,|f2|) f1 f2 (x) p1 p2.
    Basis sections and anchors lift with zero cross brackets.  When ``metric``
    (defaulting to a's metric) is nondegenerate on a's pair and b's pair is a
    single degree-0 section, the product metric G_a (x) 0 makes the lift of
    b's section the kernel generator of a Carroll structure.
    """
    alg_a, alg_b = a.algebra, b.algebra
    if alg_a.group != alg_b.group or alg_a.ring != alg_b.ring:
        raise CatalogError("tensor factors must share group and ring")
    if alg_a.factor.q_form != alg_b.factor.q_form or \
            alg_a.factor.sign_form != alg_b.factor.sign_form:
        raise CatalogError("tensor factors must share the commutation factor")
    overlap = {g.name for g in alg_a.generators} & {g.name for g in alg_b.generators}
    if overlap:
        raise CatalogError(f"generator names collide: {sorted(overlap)}")
    if a.pair is None or b.pair is None:
        raise CatalogError("tensor factors must carry pairs")

    metric_a = metric if metric is not None else a.metric
    gens = [GeneratorSpec(g.name, g.degree, g.invertible, g.square_zero)
            for g in alg_a.generators + alg_b.generators]
    alg = AlgebraPresentation(
        f"{alg_a.name}_x_{alg_b.name}", alg_a.ring, alg_a.group, alg_a.factor,
        gens, integral_domain=alg_a.integral_domain and alg_b.integral_domain)

    n_a = alg_a.ngens

    def lift_element(el, side):
        pad_left = 0 if side == "a" else n_a
        pad_right = alg.ngens - pad_left - el.presentation.ngens
        return alg.element({
            (0,) * pad_left + m + (0,) * pad_right: c for m, c in el.terms.items()})

    def lift_derivation(deriv, side):
        action = {}
        for g in deriv.presentation.generators:
            action[g.name] = lift_element(deriv.on_generator(g.name), side)
        return RhoDerivation(alg, deriv.name, deriv.degree, action)

    lifted_bases = {}

    def lift_combo(combo, side):
        out = DerivationCombo(alg, {})
        for deriv, coeff in as_combo(combo).terms.items():
            key_ = (side, deriv.name)
            if key_ not in lifted_bases:
                lifted_bases[key_] = lift_derivation(deriv, side)
            out = out + DerivationCombo(
                alg, {lifted_bases[key_]: lift_element(coeff, side)})
        return out

    basis = [(n, d) for n, d in a.pair.basis] + [(n, d) for n, d in b.pair.basis]
    anchors = {n: lift_combo(a.pair.anchors[n], "a") for n in a.pair.basis_names}
    anchors.update({n: lift_combo(b.pair.anchors[n], "b") for n in b.pair.basis_names})
    structure = {}
    for src, side in ((a.pair, "a"), (b.pair, "b")):
        for (x, y), sec in src.structure.items():
            if sec.is_zero():
                continue
            structure[(x, y)] = {n: lift_element(c, side) for n, c in sec.terms.items()}
    pair = LieRinehartPair(f"{a.pair.name}_x_{b.pair.name}", alg, basis,
                           anchors=anchors, structure=structure)

    entries = {}
    for x in a.pair.basis_names:
        for y in a.pair.basis_names:
            v = metric_a.entry(x, y)
            if not v.is_zero():
                entries[(x, y)] = lift_element(v, "a")
    metric_t = Metric(pair, entries)

    carroll = None
    if len(b.pair.basis_names) == 1:
        sigma_name = b.pair.basis_names[0]
        if pair.basis_degree(sigma_name).is_zero():
            scalars = metric_a.scalar_matrix()
            from .geometry import _invert_scalar_matrix
            if scalars is not None and _invert_scalar_matrix(scalars) is not None:
                carroll = CarrollStructure(
                    f"{alg.name}_carroll", pair, metric_t,
                    pair.basis_section(sigma_name))

    derivs = {}
    for name, d in a.derivations.items():
        derivs[name] = lift_combo(d, "a") if isinstance(d, DerivationCombo) \
            else lifted_bases.setdefault(("a", d.name), lift_derivation(d, "a"))
    for name, d in b.derivations.items():
        derivs[name] = lift_combo(d, "b") if isinstance(d, DerivationCombo) \
            else lifted_bases.setdefault(("b", d.name), lift_derivation(d, "b"))

    entry = CatalogEntry(
        key=key or f"{a.key}_x_{b.key}",
        description=f"tensor product of {a.key} and {b.key}",
        algebra=alg,
        derivations=derivs,
        pair=pair, metric=metric_t, connection=None, carroll=carroll,
        notes=[f"cross commutation of {a.key} and {b.key} generators follows "
               "from the shared commutation factor"],
    )
    return _certify(entry)


def build_torus_line() -> CatalogEntry:
    """Tensor-product Carroll structure: torus with its nondegenerate
    auxiliary metric, tensored with a degree-0 polynomial line."""
    torus = build_nc_torus()
    line = build_poly_line(torus)
    entry = build_tensor_product(torus, line, metric=torus.aux_metric,
                                 key="torus_line")
    entry.notes.append("factor metric is the auxiliary nondegenerate torus metric")
    return entry


BUILDERS = {
    "quantum_plane": build_quantum_plane,
    "nc_torus": build_nc_torus,
    "r22_super": build_r22_super,
    "z22": build_z22,
    "eq2": build_eq2,
    "torus_line": build_torus_line,
}


def catalog_keys():
    return sorted(BUILDERS)


def build(key: str) -> CatalogEntry:
    try:
        builder = BUILDERS[key]
    except KeyError:
        raise CatalogError(
            f"unknown catalog key {key!r}; available: {', '.join(catalog_keys())}") from None
    return builder()
