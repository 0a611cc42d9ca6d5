"""Lie-Rinehart pairs over a rho-commutative algebra.

A pair consists of a free left module of "sections" with a graded basis, an
anchor sending each basis section to a derivation combo, and a structure
table holding the brackets of basis sections.  The bracket of two general
sections is derived mechanically from the two defining axioms (the Leibniz
rule in the second slot and rho-skewsymmetry):

    [f e_a, g e_b] = f a_{e_a}(g) e_b
                     - rho(|f e_a|, |g e_b|) g a_{e_b}(f) e_a
                     + rho(|e_a|, |g|) f g [e_a, e_b]

which reduces to the Leibniz axiom for f = 1 and is rho-skew by
construction.  ``verify_pair`` re-checks all axioms exhaustively on basis
tuples and on randomized coefficiented sections.
"""

from __future__ import annotations

import random

from .algebra import AlgebraElement, AlgebraPresentation, PresentationMismatch
from .derivation import DerivationCombo, as_combo, derivations_equal
from .grading import Degree
from .report import VerificationReport


class PairError(ValueError):
    pass


class Section:
    """Element of the section module: finite sum of left coefficients on basis names."""

    __slots__ = ("pair", "terms")

    def __init__(self, pair: "LieRinehartPair", terms: dict):
        self.pair = pair
        clean = {}
        for name, coeff in terms.items():
            if name not in pair.basis_index:
                raise PairError(f"unknown basis section {name!r}")
            if isinstance(coeff, int):
                coeff = pair.algebra.scalar(coeff)
            if coeff.presentation is not pair.algebra:
                raise PresentationMismatch("section coefficient over wrong algebra")
            if coeff.is_zero():
                continue
            clean[name] = clean.get(name, pair.algebra.zero()) + coeff
            if clean[name].is_zero():
                del clean[name]
        self.terms = clean

    def _check(self, other):
        if not isinstance(other, Section) or other.pair is not self.pair:
            raise PairError("sections over different pairs")

    def coefficient(self, name: str) -> AlgebraElement:
        return self.terms.get(name, self.pair.algebra.zero())

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for n, c in other.terms.items():
            s = terms.get(n)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(n, None)
            else:
                terms[n] = s
        return Section(self.pair, terms)

    def __neg__(self):
        return Section(self.pair, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, f) -> "Section":
        """Left module action f * (g e) = (f g) e."""
        if not isinstance(f, AlgebraElement):
            f = self.pair.algebra.scalar(f)
        return Section(self.pair, {n: f * c for n, c in self.terms.items()})

    def __rmul__(self, f):
        return self.scaled(f)

    def __eq__(self, other):
        if not isinstance(other, Section) or other.pair is not self.pair:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((n, hash(frozenset(c.terms.items())))
                              for n, c in self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degree_of(self) -> Degree | None:
        deg = None
        for name, coeff in self.terms.items():
            dc = coeff.degree_of()
            if dc is None:
                return None
            d = dc + self.pair.basis_degree(name)
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg if deg is not None else self.pair.algebra.group.zero()

    def homogeneous_parts(self) -> dict:
        parts = {}
        for name, coeff in self.terms.items():
            for d, c in coeff.homogeneous_parts().items():
                total = d + self.pair.basis_degree(name)
                parts.setdefault(total, {}).setdefault(name, self.pair.algebra.zero())
                parts[total][name] = parts[total][name] + c
        return {d: Section(self.pair, t) for d, t in parts.items()}

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for name in self.pair.basis_names:
            if name not in self.terms:
                continue
            c = self.terms[name]
            if c == self.pair.algebra.one():
                parts.append(name)
            else:
                parts.append(f"({c})*{name}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<section {self.render()}>"


class LieRinehartPair:
    """(algebra, free section module, anchor, bracket table)."""

    def __init__(self, name: str, algebra: AlgebraPresentation, basis,
                 anchors: dict, structure: dict | None = None):
        self.name = name
        self.algebra = algebra
        self.basis = [(n, d) for n, d in basis]
        self.basis_names = [n for n, _ in self.basis]
        self.basis_index = {n: k for k, (n, _) in enumerate(self.basis)}
        if len(self.basis_index) != len(self.basis):
            raise PairError("duplicate basis section names")
        for n, d in self.basis:
            if d.group != algebra.group:
                raise PairError(f"basis section {n}: degree over wrong group")

        self.anchors = {}
        for n, _ in self.basis:
            combo = anchors.get(n)
            combo = DerivationCombo(algebra, {}) if combo is None else as_combo(combo)
            if combo.presentation is not algebra:
                raise PairError(f"anchor of {n} over wrong algebra")
            self.anchors[n] = combo

        # structure table: entries arrive as raw {basis name: coefficient}
        # mappings (sections cannot exist before the pair does); the missing
        # half is filled by rho-skewsymmetry and unset pairs default to zero
        self.structure = {}
        for (a, b), raw in (structure or {}).items():
            if a not in self.basis_index or b not in self.basis_index:
                raise PairError(f"structure entry ({a},{b}) names unknown sections")
            self.structure[(a, b)] = raw if isinstance(raw, Section) and raw.pair is self \
                else Section(self, raw)
        for a in self.basis_names:
            for b in self.basis_names:
                if (a, b) in self.structure:
                    continue
                if (b, a) in self.structure:
                    # [a,b] = -rho(|a|,|b|) [b,a]
                    rho = algebra.factor.rho(self.basis_degree(a), self.basis_degree(b))
                    self.structure[(a, b)] = self.structure[(b, a)].scaled(-rho)
                else:
                    self.structure[(a, b)] = self.zero_section()

    # -- constructors -------------------------------------------------------

    def section(self, terms: dict) -> Section:
        return Section(self, terms)

    def basis_section(self, name: str) -> Section:
        if name not in self.basis_index:
            raise PairError(f"unknown basis section {name!r}")
        return Section(self, {name: self.algebra.one()})

    def zero_section(self) -> Section:
        return Section(self, {})

    def basis_degree(self, name: str) -> Degree:
        return self.basis[self.basis_index[name]][1]

    # -- operations ----------------------------------------------------------

    def anchor_of(self, u: Section) -> DerivationCombo:
        if u.pair is not self:
            raise PairError("section over a different pair")
        out = DerivationCombo(self.algebra, {})
        for name, coeff in u.terms.items():
            out = out + self.anchors[name].scaled(coeff)
        return out

    def bracket_basis(self, a: str, b: str) -> Section:
        return self.structure[(a, b)]

    def bracket(self, u: Section, v: Section) -> Section:
        """Bracket of general sections via the derived bilinear expansion."""
        if u.pair is not self or v.pair is not self:
            raise PairError("sections over a different pair")
        factor = self.algebra.factor
        out = self.zero_section()
        for a, fa in u.terms.items():
            da = self.basis_degree(a)
            anchor_a = self.anchors[a]
            for df, f in fa.homogeneous_parts().items():
                for b, gb in v.terms.items():
                    db = self.basis_degree(b)
                    anchor_b = self.anchors[b]
                    for dg, g in gb.homogeneous_parts().items():
                        t1 = Section(self, {b: f * anchor_a(g)})
                        rho_uv = factor.rho(df + da, dg + db)
                        t2 = Section(self, {a: g * anchor_b(f)}).scaled(
                            self.algebra.scalar(-rho_uv))
                        t3 = self.structure[(a, b)].scaled(
                            factor.rho(da, dg) * (f * g))
                        out = out + t1 + t2 + t3
        return out

    def __repr__(self):
        return f"<pair {self.name}: basis {', '.join(self.basis_names)}>"


def is_isotropic(u: Section) -> bool:
    """True iff the anchored derivation kills every generator of the algebra."""
    return u.pair.anchor_of(u).is_zero_operator()


def lie_derivative_metric(u: Section, metric) -> "object":
    """(L_u G)(v,w) = a_u(G(v,w)) - G([u,v],w) - rho(|u|,|v|) G(v,[u,w]).

    Returns a covariant 2-tensor value table on basis pairs (a
    geometry.TensorValue).  ``metric`` is duck-typed: anything with ``pair``
    and ``eval(u, v)``.
    """
    from .geometry import TensorValue

    pair = u.pair
    factor = pair.algebra.factor
    table = {}
    parts = u.homogeneous_parts()
    deg = u.degree_of()
    for b in pair.basis_names:
        vb = pair.basis_section(b)
        db = pair.basis_degree(b)
        for c in pair.basis_names:
            wc = pair.basis_section(c)
            total = pair.algebra.zero()
            for du, uh in parts.items():
                anchored = pair.anchor_of(uh)
                total = total + anchored(metric.eval(vb, wc))
                total = total - metric.eval(pair.bracket(uh, vb), wc)
                total = total - factor.rho(du, db) * metric.eval(vb, pair.bracket(uh, wc))
            table[(b, c)] = total
    return TensorValue(pair, deg if deg is not None else pair.algebra.group.zero(),
                       2, table)


def is_killing(u: Section, metric) -> bool:
    tensor = lie_derivative_metric(u, metric)
    return all(v.is_zero() for v in tensor.table.values())


def verify_pair(pair: LieRinehartPair, samples: int = 200, seed: int = 0) -> VerificationReport:
    """Axiom check: anchor degrees and homomorphism property, skewsymmetry,
    Jacobi, and the Leibniz rule, exhaustively on basis tuples and on
    ``samples`` random coefficiented sections."""
    from .sampling import random_homogeneous_element, random_homogeneous_section

    rep = VerificationReport(f"pair {pair.name}")
    alg = pair.algebra
    factor = alg.factor
    names = pair.basis_names

    for n in names:
        d = pair.anchors[n].degree_of()
        if d is not None and not pair.anchors[n].is_zero_operator() and d != pair.basis_degree(n):
            rep.failed("anchor degree", n,
                       f"|a_{n}| = {d} but |{n}| = {pair.basis_degree(n)}")
        else:
            rep.passed("anchor degree", n)

    for a in names:
        for b in names:
            s_ab = pair.structure[(a, b)]
            d_ab = s_ab.degree_of()
            want = pair.basis_degree(a) + pair.basis_degree(b)
            if not s_ab.is_zero() and d_ab != want:
                rep.failed("bracket degree", f"[{a},{b}]",
                           f"|[{a},{b}]| = {d_ab}, expected {want}")
            # [b,a] + rho(|b|,|a|) [a,b] must vanish
            rho_ba = factor.rho(pair.basis_degree(b), pair.basis_degree(a))
            skew = pair.structure[(b, a)] + s_ab.scaled(rho_ba)
            if skew.is_zero():
                rep.passed("rho-skewsymmetry", f"[{a},{b}]")
            else:
                rep.failed("rho-skewsymmetry", f"[{a},{b}]",
                           f"[{a},{b}] + rho*[{b},{a}] = {skew.render()}", skew)

    for a in names:
        for b in names:
            lhs = pair.anchor_of(pair.structure[(a, b)])
            ca, cb = pair.anchors[a], pair.anchors[b]
            da, db = pair.basis_degree(a), pair.basis_degree(b)
            rho = factor.rho(da, db)
            ok = True
            for g in alg.generators:
                e = alg.gen(g.name)
                rhs = ca(cb(e)) - rho * cb(ca(e))
                if lhs(e) != rhs:
                    rep.failed("anchor homomorphism", f"[{a},{b}] on {g.name}",
                               f"a_[{a},{b}]({g.name}) = {lhs(e)} but [a_{a},a_{b}]({g.name}) = {rhs}",
                               lhs(e) - rhs)
                    ok = False
            if ok:
                rep.passed("anchor homomorphism", f"[{a},{b}]")

    jacobi_fail = None
    for a in names:
        for b in names:
            for c in names:
                ua, ub, uc = (pair.basis_section(n) for n in (a, b, c))
                rho = factor.rho(pair.basis_degree(a), pair.basis_degree(b))
                lhs = pair.bracket(ua, pair.bracket(ub, uc))
                rhs = pair.bracket(pair.bracket(ua, ub), uc) + \
                    pair.bracket(ub, pair.bracket(ua, uc)).scaled(alg.scalar(rho))
                if lhs != rhs and jacobi_fail is None:
                    jacobi_fail = (a, b, c, lhs - rhs)
    if jacobi_fail is None:
        rep.passed("rho-Jacobi (basis)", f"{len(names)}^3 triples")
    else:
        a, b, c, diff = jacobi_fail
        rep.failed("rho-Jacobi (basis)", f"({a},{b},{c})",
                   f"[{a},[{b},{c}]] - [[{a},{b}],{c}] - rho[{b},[{a},{c}]] = {diff.render()}",
                   diff)

    rng = random.Random(seed)
    leib_fail = jac_fail = hom_fail = None
    for _ in range(samples):
        u = random_homogeneous_section(pair, rng)
        v = random_homogeneous_section(pair, rng)
        f = random_homogeneous_element(alg, rng)
        du, df = u.degree_of(), f.degree_of()
        if leib_fail is None:
            lhs = pair.bracket(u, v.scaled(f))
            rhs = v.scaled(pair.anchor_of(u)(f)) + \
                pair.bracket(u, v).scaled(f).scaled(alg.scalar(factor.rho(du, df)))
            if lhs != rhs:
                leib_fail = (u, f, v, lhs - rhs)
        if hom_fail is None:
            w = pair.bracket(u, v)
            aw = pair.anchor_of(w)
            au, av = pair.anchor_of(u), pair.anchor_of(v)
            rho = factor.rho(du, v.degree_of())
            for g in alg.generators:
                e = alg.gen(g.name)
                if aw(e) != au(av(e)) - rho * av(au(e)):
                    hom_fail = (u, v, g.name)
                    break
        if jac_fail is None:
            w = random_homogeneous_section(pair, rng)
            rho = factor.rho(du, v.degree_of())
            lhs = pair.bracket(u, pair.bracket(v, w))
            rhs = pair.bracket(pair.bracket(u, v), w) + \
                pair.bracket(v, pair.bracket(u, w)).scaled(alg.scalar(rho))
            if lhs != rhs:
                jac_fail = (u, v, w, lhs - rhs)

    if leib_fail is None:
        rep.passed("Leibniz rule (random)", f"{samples} samples")
    else:
        u, f, v, diff = leib_fail
        rep.failed("Leibniz rule (random)",
                   f"u={u.render()}, f={f}, v={v.render()}",
                   f"[u,f v] - a_u(f) v - rho f [u,v] = {diff.render()}", diff)
    if hom_fail is None:
        rep.passed("anchor homomorphism (random)", f"{samples} samples")
    else:
        u, v, gname = hom_fail
        rep.failed("anchor homomorphism (random)", f"u={u.render()}, v={v.render()}",
                   f"a_[u,v] and [a_u,a_v] differ on {gname}")
    if jac_fail is None:
        rep.passed("rho-Jacobi (random)", f"{samples} samples")
    else:
        u, v, w, diff = jac_fail
        rep.failed("rho-Jacobi (random)",
                   f"u={u.render()}, v={v.render()}, w={w.render()}",
                   f"Jacobi defect = {diff.render()}", diff)
    return rep


def check_morphism(phi: dict, source: LieRinehartPair, target: LieRinehartPair,
                   samples: int = 50, seed: int = 0) -> VerificationReport:
    """Check a module map (basis section -> target section) for degree
    preservation, bracket compatibility, and anchor compatibility.

    Both pairs must share the same underlying algebra.
    """
    from .sampling import random_homogeneous_element

    rep = VerificationReport("morphism check")
    if source.algebra is not target.algebra:
        raise PairError("morphism requires pairs over the same algebra")
    alg = source.algebra
    missing = [n for n in source.basis_names if n not in phi]
    if missing:
        raise PairError(f"morphism images missing for {missing}")

    def apply_phi(u: Section) -> Section:
        out = target.zero_section()
        for n, c in u.terms.items():
            out = out + phi[n].scaled(c)
        return out

    for n in source.basis_names:
        img = phi[n]
        d = img.degree_of()
        if not img.is_zero() and d != source.basis_degree(n):
            rep.failed("degree preservation", n,
                       f"|phi({n})| = {d}, expected {source.basis_degree(n)}")
        else:
            rep.passed("degree preservation", n)

    for a in source.basis_names:
        for b in source.basis_names:
            lhs = apply_phi(source.structure[(a, b)])
            rhs = target.bracket(phi[a], phi[b])
            if lhs == rhs:
                rep.passed("bracket compatibility", f"[{a},{b}]")
            else:
                rep.failed("bracket compatibility", f"[{a},{b}]",
                           f"phi([{a},{b}]) - [phi({a}),phi({b})] = {(lhs - rhs).render()}",
                           lhs - rhs)

    for n in source.basis_names:
        if derivations_equal(source.anchors[n], target.anchor_of(phi[n])):
            rep.passed("anchor compatibility", n)
        else:
            diff = None
            for g in alg.generators:
                e = alg.gen(g.name)
                d = source.anchors[n](e) - target.anchor_of(phi[n])(e)
                if not d.is_zero():
                    diff = (g.name, d)
                    break
            rep.failed("anchor compatibility", n,
                       f"a_{n} and a'_phi({n}) differ on {diff[0]}: {diff[1]}", diff[1])

    rng = random.Random(seed)
    rand_fail = None
    for _ in range(samples):
        f = random_homogeneous_element(alg, rng)
        a = rng.choice(source.basis_names)
        b = rng.choice(source.basis_names)
        u = source.basis_section(a).scaled(f)
        v = source.basis_section(b)
        if apply_phi(source.bracket(u, v)) != target.bracket(apply_phi(u), apply_phi(v)):
            rand_fail = (u, v)
            break
    if rand_fail is None:
        rep.passed("bracket compatibility (random)", f"{samples} samples")
    else:
        u, v = rand_fail
        rep.failed("bracket compatibility (random)",
                   f"u={u.render()}, v={v.render()}",
                   "phi([u,v]) != [phi(u),phi(v)]")
    return rep
