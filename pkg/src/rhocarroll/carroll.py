"""Carrollian structures: degenerate metrics with a chosen kernel generator.

A Carroll structure is a quadruple (algebra, pair, metric, l) where l is the
free cyclic submodule generated by a degree-0 section sigma and the metric's
kernel is claimed to equal l.  The verifier checks what is decidable
symbolically and reports ``uncertified`` where its gates do not apply:
kernel *containment* is always decided, kernel *exactness* only when sigma
extends to a basis whose complementary metric block is an invertible
field-scalar matrix and the algebra is flagged as having no zero divisors.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import AlgebraElement
from .coefficients import GaussianRational
from .derivation import DerivationCombo, as_combo
from .geometry import (Connection, Metric, TensorValue,
                       _invert_scalar_matrix, covariant_derivative_metric)
from .report import VerificationReport
from .rinehart import (LieRinehartPair, PairError, Section, is_killing,
                       lie_derivative_metric)


class SigmaNotBasisExtendable(ValueError):
    """sigma has no unit coefficient on any basis section."""


class NonzeroDegreeFlow(ValueError):
    """Flows require a degree-0 derivation to preserve the grading."""


class CarrollStructure:
    """(pair, metric, sigma): sigma generates the claimed kernel module l."""

    def __init__(self, name: str, pair: LieRinehartPair, metric: Metric, sigma: Section):
        if metric.pair is not pair or sigma.pair is not pair:
            raise PairError("metric/sigma over a different pair")
        self.name = name
        self.pair = pair
        self.metric = metric
        self.sigma = sigma

    def pivot(self) -> str | None:
        """A basis name where sigma's coefficient is a unit, if any."""
        for n, c in self.sigma.terms.items():
            if c.is_unit():
                return n
        return None

    def section_in_kernel_module(self, r: Section):
        """Decide r in l = A*sigma via the pivot; returns (status, h).

        status True/False when decided, None when no unit pivot exists.
        On True, h satisfies r = h * sigma.
        """
        if r.is_zero():
            return True, self.pair.algebra.zero()
        piv = self.pivot()
        if piv is None:
            return None, None
        c = self.sigma.terms[piv]
        h = r.coefficient(piv) * c.inverse()
        if self.sigma.scaled(h) == r:
            return True, h
        return False, None

    def __repr__(self):
        return f"<carroll {self.name}: sigma = {self.sigma.render()}>"


def verify_carroll(cs: CarrollStructure, samples: int = 25, seed: int = 11) -> VerificationReport:
    """Degree of sigma, kernel containment, gated kernel exactness, and
    symbolic closure of l under the bracket."""
    rep = VerificationReport(f"carroll structure {cs.name}")
    pair = cs.pair
    alg = pair.algebra

    deg = cs.sigma.degree_of()
    if deg is not None and deg.is_zero():
        rep.passed("sigma degree 0", cs.sigma.render())
    else:
        rep.failed("sigma degree 0", cs.sigma.render(),
                   f"|sigma| = {deg if deg is not None else 'inhomogeneous'}")

    containment_ok = True
    for b in pair.basis_names:
        v = cs.metric.eval(cs.sigma, pair.basis_section(b))
        if not v.is_zero():
            rep.failed("kernel containment", f"G(sigma,{b})",
                       f"G(sigma,{b}) = {v}", v)
            containment_ok = False
    if containment_ok:
        rep.passed("kernel containment", "G(sigma, e_b) = 0 for all basis b")

    # exactness gate: complementary block invertible over scalars + no zero divisors
    piv = cs.pivot()
    if not containment_ok:
        rep.uncertified("kernel exactness", "containment failed")
    elif piv is None:
        rep.uncertified("kernel exactness",
                        "sigma has no unit basis coefficient; cannot complete a basis")
    else:
        rest = [n for n in pair.basis_names if n != piv]
        block = []
        scalar_block = True
        for a in rest:
            row = []
            for b in rest:
                v = cs.metric.entry(a, b)
                if not v.is_scalar() or not v.scalar_coefficient().is_scalar():
                    scalar_block = False
                    break
                row.append(v.scalar_coefficient().scalar_part())
            if not scalar_block:
                break
            block.append(row)
        if not scalar_block:
            rep.uncertified("kernel exactness",
                            "complementary metric block has non-scalar entries")
        elif rest and _invert_scalar_matrix(block) is None:
            rep.failed("kernel exactness", "complementary block",
                       "complementary metric block is singular: kernel exceeds l")
        elif not alg.integral_domain:
            rep.uncertified("kernel exactness",
                            "algebra not flagged as having no zero divisors")
        else:
            rep.passed("kernel exactness",
                       f"complementary block on {rest} invertible over the field")

    # [f sigma, g sigma] = (f a_sigma(g) - rho(|f|,|g|) g a_sigma(f)) sigma, sampled
    from .sampling import random_homogeneous_element
    rng = random.Random(seed)
    anchored = pair.anchor_of(cs.sigma)
    closure_fail = None
    for _ in range(samples):
        f = random_homogeneous_element(alg, rng)
        g = random_homogeneous_element(alg, rng)
        s = cs.sigma.scaled(f)
        t = cs.sigma.scaled(g)
        got = pair.bracket(s, t)
        rho = alg.factor.rho(f.degree_of(), g.degree_of())
        h = f * anchored(g) - rho * (g * anchored(f))
        if got != cs.sigma.scaled(h):
            closure_fail = (f, g, got - cs.sigma.scaled(h))
            break
    if closure_fail is None:
        rep.passed("bracket closure of l",
                   "[f sigma, g sigma] = (f a_sigma(g) - rho g a_sigma(f)) sigma")
    else:
        f, g, diff = closure_fail
        rep.failed("bracket closure of l", f"f={f}, g={g}",
                   f"defect = {diff.render()}", diff)
    return rep


def carroll_distribution(cs: CarrollStructure):
    """The anchored generator of the distribution and its singularity class.

    Returns (generator combo, classification, witness) with classification in
    {"non-singular", "singular", "uncertified"}.  Non-singularity is certified
    only when the generator has a unit coefficient on some base derivation and
    the algebra has no zero divisors; singularity requires an explicit
    annihilating witness (found among small monomial candidates).
    """
    pair = cs.pair
    alg = pair.algebra
    gen = pair.anchor_of(cs.sigma)

    if gen.is_zero_operator():
        return gen, "singular", alg.one()

    has_unit_coeff = any(c.is_unit() for c in gen.terms.values())
    if has_unit_coeff and alg.integral_domain:
        return gen, "non-singular", None

    # hunt for f != 0 annihilating the generator among small monomials
    candidates = [alg.gen(g.name) for g in alg.generators if not g.invertible]
    for gi in alg.generators:
        for gj in alg.generators:
            if gi.square_zero and gj.square_zero and gi.name != gj.name:
                candidates.append(alg.gen(gi.name) * alg.gen(gj.name))
    for f in candidates:
        if f.is_zero():
            continue
        if gen.scaled(f).is_zero_operator():
            return gen, "singular", f
    return gen, "uncertified", None


def check_involutive(cs: CarrollStructure, samples: int = 20, seed: int = 3) -> VerificationReport:
    """[f a_sigma, g a_sigma] must lie in the cyclic module generated by
    a_sigma; verified by exhibiting the factor h and comparing operator
    action tables on all generators."""
    from .sampling import random_homogeneous_element

    rep = VerificationReport(f"involutivity of the Carroll distribution ({cs.name})")
    pair = cs.pair
    alg = pair.algebra
    rng = random.Random(seed)
    anchored = pair.anchor_of(cs.sigma)
    d_sigma = cs.sigma.degree_of()

    fail = None
    for _ in range(samples):
        f = random_homogeneous_element(alg, rng)
        g = random_homogeneous_element(alg, rng)
        df, dg = f.degree_of(), g.degree_of()
        X = anchored.scaled(f)
        Y = anchored.scaled(g)
        rho = alg.factor.rho(df + d_sigma, dg + d_sigma)
        # candidate factor from the closure formula
        h = f * anchored(g) - alg.factor.rho(df, dg) * (g * anchored(f))
        HZ = anchored.scaled(h)
        for spec in alg.generators:
            e = alg.gen(spec.name)
            lhs = X(Y(e)) - rho * Y(X(e))
            if lhs != HZ(e):
                fail = (f, g, spec.name, lhs - HZ(e))
                break
        if fail:
            break
    if fail is None:
        rep.passed("involutivity", f"{samples} random (f,g) pairs")
    else:
        f, g, gname, diff = fail
        rep.failed("involutivity", f"f={f}, g={g} on {gname}",
                   f"[f a_sigma, g a_sigma] - h a_sigma = {diff} on {gname}", diff)
    return rep


def check_stationary(cs: CarrollStructure, samples: int = 10, seed: int = 5) -> VerificationReport:
    """sigma Killing certifies stationarity of all of l; also re-checked on
    sampled multiples f*sigma."""
    from .sampling import random_homogeneous_element

    rep = VerificationReport(f"stationarity of {cs.name}")
    tensor = lie_derivative_metric(cs.sigma, cs.metric)
    bad = [(k, v) for k, v in sorted(tensor.table.items()) if not v.is_zero()]
    if not bad:
        rep.passed("sigma is Killing", "L_sigma G = 0 on all basis pairs")
    else:
        (b, c), v = bad[0]
        rep.failed("sigma is Killing", f"(L_sigma G)({b},{c})",
                   f"(L_sigma G)({b},{c}) = {v}", v)
        return rep

    rng = random.Random(seed)
    alg = cs.pair.algebra
    for _ in range(samples):
        f = random_homogeneous_element(alg, rng)
        if not is_killing(cs.sigma.scaled(f), cs.metric):
            rep.failed("multiples of sigma are Killing", f"f={f}",
                       f"L_(f sigma) G != 0 for f = {f}")
            return rep
    rep.passed("multiples of sigma are Killing", f"{samples} sampled f")
    return rep


def carroll_connection_check(cs: CarrollStructure, conn: Connection) -> VerificationReport:
    """Metric compatibility on all basis triples plus preservation of l.

    The first term of the compatibility formula reads a_u(G(v,w)); the
    engine records that convention explicitly in the report.
    """
    rep = VerificationReport(f"carroll connection on {cs.name}")
    pair = cs.pair
    if conn.pair is not pair:
        raise PairError("connection over a different pair")

    ok = True
    for a in pair.basis_names:
        for b in pair.basis_names:
            for c in pair.basis_names:
                val = covariant_derivative_metric(
                    conn, cs.metric, pair.basis_section(a),
                    pair.basis_section(b), pair.basis_section(c))
                if not val.is_zero():
                    rep.failed("metric compatibility", f"({a},{b},{c})",
                               f"(nabla_{a} G)({b},{c}) = {val}", val)
                    ok = False
    if ok:
        rep.passed("metric compatibility", "nabla G = 0 on all basis triples")
    rep.info("convention", "covariant derivative of the metric",
             "first term evaluated as a_u(G(v,w))")

    for a in pair.basis_names:
        img = conn.nabla(pair.basis_section(a), cs.sigma)
        status, _h = cs.section_in_kernel_module(img)
        if status is True:
            rep.passed("nabla preserves l", f"nabla_{a} sigma")
        elif status is None:
            rep.uncertified("nabla preserves l", f"nabla_{a} sigma: no unit pivot")
        else:
            rep.failed("nabla preserves l", f"nabla_{a} sigma",
                       f"nabla_{a} sigma = {img.render()} not in l", img)
    return rep


def quotient_metric(cs: CarrollStructure, seed: int = 7):
    """Metric induced on the quotient module g/l.

    Requires sigma to be basis-extendable (unit pivot).  Returns
    (quotient basis names, matrix dict, nondegeneracy status, report); the
    lift-independence of the induced values is re-checked on random lifts.
    """
    from .sampling import random_homogeneous_element

    rep = VerificationReport(f"quotient metric of {cs.name}")
    pair = cs.pair
    alg = pair.algebra
    piv = cs.pivot()
    if piv is None:
        raise SigmaNotBasisExtendable(
            f"sigma = {cs.sigma.render()} has no unit basis coefficient")

    rest = [n for n in pair.basis_names if n != piv]
    matrix = {(a, b): cs.metric.entry(a, b) for a in rest for b in rest}

    scalar_rows = []
    scalar_ok = True
    for a in rest:
        row = []
        for b in rest:
            v = matrix[(a, b)]
            if v.is_scalar() and v.scalar_coefficient().is_scalar():
                row.append(v.scalar_coefficient().scalar_part())
            else:
                scalar_ok = False
        scalar_rows.append(row)
    if not rest:
        status = "nondegenerate"  # zero-dimensional quotient
    elif scalar_ok and _invert_scalar_matrix(scalar_rows) is not None:
        status = "nondegenerate"
    elif scalar_ok:
        status = "degenerate"
    else:
        status = "uncertified"
    rep.add("quotient nondegeneracy", f"basis {rest}",
            "pass" if status == "nondegenerate" else
            ("fail" if status == "degenerate" else "uncertified"),
            None if status != "degenerate" else "restricted matrix is singular")

    rng = random.Random(seed)
    lift_fail = None
    for a in rest:
        for b in rest:
            f = random_homogeneous_element(alg, rng)
            g = random_homogeneous_element(alg, rng)
            u = pair.basis_section(a) + cs.sigma.scaled(f)
            v = pair.basis_section(b) + cs.sigma.scaled(g)
            if cs.metric.eval(u, v) != matrix[(a, b)]:
                lift_fail = (a, b, f, g)
                break
        if lift_fail:
            break
    if lift_fail is None:
        rep.passed("lift independence", "two random lifts per basis pair")
    else:
        a, b, f, g = lift_fail
        rep.failed("lift independence", f"({a},{b})",
                   f"lifts by f={f}, g={g} change the value")
    return rest, matrix, status, rep


class FlowPolynomial:
    """Truncated exponential sum_k t^k X^k(f)/k! as a t-polynomial with
    algebra-element coefficients."""

    def __init__(self, presentation, coeffs):
        self.presentation = presentation
        self.coeffs = list(coeffs)

    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int):
        return self.coeffs[k] if k < len(self.coeffs) else self.presentation.zero()

    def __eq__(self, other):
        if not isinstance(other, FlowPolynomial):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coefficient(k) == other.coefficient(k) for k in range(n))

    def truncated_product(self, other: "FlowPolynomial", order: int) -> "FlowPolynomial":
        out = []
        for k in range(order + 1):
            c = self.presentation.zero()
            for i in range(k + 1):
                c = c + self.coefficient(i) * other.coefficient(k - i)
            out.append(c)
        return FlowPolynomial(self.presentation, out)

    def render(self) -> str:
        base = self.coeffs[0] if self.coeffs else self.presentation.zero()
        # factored display f*(c_0 + c_1*t + ...) when every coefficient is a
        # scalar multiple of the order-0 one
        if base and not base.is_zero():
            scalars = []
            for c in self.coeffs:
                s = _scalar_ratio(c, base)
                if s is None:
                    scalars = None
                    break
                scalars.append(s)
            if scalars is not None:
                inner = _render_t_poly([self.presentation.scalar(s) for s in scalars])
                return f"{base}*({inner})" if str(base) != "1" else inner
        return _render_t_poly(self.coeffs)

    def __repr__(self):
        return f"<flow {self.render()}>"


def _scalar_ratio(c: AlgebraElement, base: AlgebraElement):
    """c = s * base for a central scalar s, else None."""
    if c.is_zero():
        return c.presentation.ring.zero()
    if set(c.terms) != set(base.terms):
        return None
    ratio = None
    for m, cb in base.terms.items():
        if not cb.is_unit():
            return None
        r = c.terms[m] * cb.inverse()
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


def _render_t_poly(coeffs) -> str:
    from .coefficients import join_terms
    parts = []
    for k, c in enumerate(coeffs):
        if c.is_zero():
            continue
        cs = str(c)
        if k == 0:
            parts.append(cs)
        else:
            t = "t" if k == 1 else f"t^{k}"
            if cs == "1":
                parts.append(t)
            elif cs == "-1":
                parts.append(f"-{t}")
            elif c.is_scalar() and c.scalar_coefficient().is_unit():
                parts.append(f"{cs}*{t}")
            else:
                parts.append(f"({cs})*{t}")
    return join_terms(parts) if parts else "0"


def flow(X, f: AlgebraElement, order: int = 6) -> FlowPolynomial:
    """f(t) = e^{tX} f truncated at the given order; X must have degree 0."""
    Xc = as_combo(X)
    deg = Xc.degree_of()
    if deg is not None and not deg.is_zero():
        raise NonzeroDegreeFlow(f"flow generator must have degree 0, got {deg}")
    if deg is None:
        raise NonzeroDegreeFlow("flow generator must be homogeneous of degree 0")
    coeffs = [f]
    current = f
    fact = 1
    for k in range(1, order + 1):
        current = Xc(current)
        fact *= k
        coeffs.append(current * GaussianRational(Fraction(1, fact)))
    return FlowPolynomial(f.presentation, coeffs)
