"""Graded derivations of a presented algebra.

A derivation X of degree |X| is stored by its action on generators only and
extended to arbitrary elements by the twisted Leibniz rule

    X(f g) = X(f) g + rho(|X|, |f|) f X(g),

equivalently, on a word g_1 ... g_k,

    X(g_1 ... g_k) = sum_i rho(|X|, |g_1...g_{i-1}|) g_1...g_{i-1} X(g_i) g_{i+1}...g_k.

The action on an inverse generator is forced by 0 = X(g g^{-1}):

    X(g^{-1}) = -rho(|X|, |g|)^{-1} g^{-1} X(g) g^{-1}.

``verify_derivation`` checks the declared action against every defining
relation of the presentation, so extension by Leibniz is independent of how
an element is factored.
"""

from __future__ import annotations

from .algebra import AlgebraElement, AlgebraPresentation, PresentationMismatch
from .grading import Degree
from .report import VerificationReport


class RhoDerivation:
    """A derivation given by a degree tag and its action on each generator."""

    def __init__(self, presentation: AlgebraPresentation, name: str, degree: Degree,
                 action: dict):
        self.presentation = presentation
        self.name = name
        self.degree = degree
        self.action = {}
        for gen in presentation.generators:
            value = action.get(gen.name, presentation.zero())
            if isinstance(value, int):
                value = presentation.scalar(value)
            if value.presentation is not presentation:
                raise PresentationMismatch(f"action on {gen.name} over wrong presentation")
            self.action[gen.name] = value
        unknown = set(action) - set(self.action)
        if unknown:
            raise ValueError(f"action on unknown generators: {sorted(unknown)}")

    def degree_of(self) -> Degree:
        return self.degree

    def on_generator(self, name: str) -> AlgebraElement:
        return self.action[name]

    def on_inverse(self, name: str) -> AlgebraElement:
        # forced by 0 = X(g g^{-1}): X(g^{-1}) = -rho(|X|,|g|)^{-1} g^{-1} X(g) g^{-1}
        pres = self.presentation
        g = pres.gen(name, -1)
        rho_inv = pres.factor.rho(self.degree, -pres.generator(name).degree)
        return -rho_inv * g * self.action[name] * g

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        return apply_derivation(self, f)

    def __repr__(self):
        acts = ", ".join(f"{g.name} -> {self.action[g.name]}"
                         for g in self.presentation.generators)
        return f"<derivation {self.name} deg={self.degree}: {acts}>"


class DerivationCombo:
    """Left-module combination sum_i f_i * X_i of named derivations.

    Keys are RhoDerivation objects (identity-hashed); coefficients are
    algebra elements acting from the left: (f X)(g) = f * X(g).
    """

    def __init__(self, presentation: AlgebraPresentation, terms: dict | None = None):
        self.presentation = presentation
        self.terms = {}
        for deriv, coeff in (terms or {}).items():
            if isinstance(coeff, int):
                coeff = presentation.scalar(coeff)
            if coeff.is_zero():
                continue
            if deriv.presentation is not presentation:
                raise PresentationMismatch("combo term over wrong presentation")
            self.terms[deriv] = coeff

    def degree_of(self) -> Degree | None:
        """Common degree |f_i| + |X_i| over all terms, or None if mixed."""
        deg = None
        for deriv, coeff in self.terms.items():
            dc = coeff.degree_of()
            if dc is None:
                return None
            d = dc + deriv.degree
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg if deg is not None else self.presentation.group.zero()

    def __add__(self, other: "DerivationCombo") -> "DerivationCombo":
        if other.presentation is not self.presentation:
            raise PresentationMismatch("combos over different presentations")
        terms = dict(self.terms)
        for d, c in other.terms.items():
            s = terms.get(d)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(d, None)
            else:
                terms[d] = s
        return DerivationCombo(self.presentation, terms)

    def __neg__(self):
        return DerivationCombo(self.presentation, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, f) -> "DerivationCombo":
        """Left multiplication by a function (or scalar): f * (g X) = (f g) X."""
        if isinstance(f, int) or not isinstance(f, AlgebraElement):
            f = self.presentation.scalar(f)
        return DerivationCombo(self.presentation, {d: f * c for d, c in self.terms.items()})

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        out = self.presentation.zero()
        for deriv, coeff in self.terms.items():
            out = out + coeff * apply_derivation(deriv, f)
        return out

    def is_zero_operator(self) -> bool:
        return all(not self(self.presentation.gen(g.name))
                   for g in self.presentation.generators)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for deriv in sorted(self.terms, key=lambda d: d.name):
            c = self.terms[deriv]
            if c == self.presentation.one():
                parts.append(deriv.name)
            else:
                parts.append(f"({c})*{deriv.name}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<combo {self.render()}>"


def as_combo(X) -> DerivationCombo:
    if isinstance(X, DerivationCombo):
        return X
    return DerivationCombo(X.presentation, {X: X.presentation.one()})


def apply_derivation(X, f: AlgebraElement) -> AlgebraElement:
    """Extend X to an arbitrary element by the Leibniz rule over each monomial."""
    if isinstance(X, DerivationCombo):
        return X(f)
    pres = X.presentation
    if f.presentation is not pres:
        raise PresentationMismatch("argument over a different presentation")
    out = pres.zero()
    for mono, c in f.terms.items():
        letters = []
        for idx, e in enumerate(mono):
            if e == 0:
                continue
            name = pres.generators[idx].name
            sign = 1 if e > 0 else -1
            letters += [(name, sign)] * abs(e)
        # X(l_1 ... l_k) with the rho prefix collecting the prefix degree
        prefix_deg = pres.group.zero()
        for i, (name, sign) in enumerate(letters):
            hit = X.on_generator(name) if sign > 0 else X.on_inverse(name)
            if not hit.is_zero():
                rho = pres.factor.rho(X.degree, prefix_deg)
                left = pres.normalize(letters[:i])
                right = pres.normalize(letters[i + 1:])
                out = out + (c * rho) * (left * hit * right)
            prefix_deg = prefix_deg + pres.generator(name).degree.scaled(sign)
    return out


def derivations_equal(X, Y) -> bool:
    """Operator equality: same action on every generator."""
    pres = as_combo(X).presentation
    if as_combo(Y).presentation is not pres:
        raise PresentationMismatch("comparing derivations over different presentations")
    Xc, Yc = as_combo(X), as_combo(Y)
    return all(Xc(pres.gen(g.name)) == Yc(pres.gen(g.name)) for g in pres.generators)


def verify_derivation(X: RhoDerivation) -> VerificationReport:
    """Soundness gate: the declared generator action must kill every relation.

    Checks (a) degree bookkeeping |X(g)| = |X| + |g|, (b) the swap relation
    g*h - rho(|g|,|h|) h*g for every generator pair, (c) g*g^{-1} = 1 for
    invertible g, and (d) g^2 = 0 for square-zero g.
    """
    rep = VerificationReport(f"derivation {X.name}")
    pres = X.presentation
    factor = pres.factor

    for g in pres.generators:
        val = X.on_generator(g.name)
        if val.is_zero():
            continue
        want = X.degree + g.degree
        got = val.degree_of()
        if got != want:
            rep.failed("degree of action", f"{X.name}({g.name})",
                       f"|{X.name}({g.name})| = {got} but |X|+|{g.name}| = {want}", val)
        else:
            rep.passed("degree of action", f"{X.name}({g.name})")

    def leibniz_on_pair(a: AlgebraElement, b: AlgebraElement, deg_a: Degree):
        return X(a) * b + factor.rho(X.degree, deg_a) * (a * X(b))

    names = [g.name for g in pres.generators]
    for i, gn in enumerate(names):
        for hn in names[i + 1:]:
            g, h = pres.gen(gn), pres.gen(hn)
            dg, dh = pres.generator(gn).degree, pres.generator(hn).degree
            lhs = leibniz_on_pair(g, h, dg)
            rhs = factor.rho(dg, dh) * leibniz_on_pair(h, g, dh)
            diff = lhs - rhs
            target = f"{gn}*{hn} - rho*{hn}*{gn}"
            if diff.is_zero():
                rep.passed("swap relation", target)
            else:
                rep.failed("swap relation", target, f"X applied to relation gives {diff}", diff)

    for g in pres.generators:
        if g.invertible:
            e = pres.gen(g.name)
            diff = leibniz_on_pair(e, pres.gen(g.name, -1), g.degree)
            target = f"{g.name}*{g.name}^-1 = 1"
            if diff.is_zero():
                rep.passed("inverse relation", target)
            else:
                rep.failed("inverse relation", target, f"X(1) = {diff}", diff)
        if g.square_zero:
            e = pres.gen(g.name)
            diff = leibniz_on_pair(e, e, g.degree)
            target = f"{g.name}^2 = 0"
            if diff.is_zero():
                rep.passed("square-zero relation", target)
            else:
                rep.failed("square-zero relation", target, f"X({g.name}^2) = {diff}", diff)
    return rep


def der_commutator(X, Y) -> RhoDerivation:
    """[X,Y] = X Y - rho(|X|,|Y|) Y X, re-derived as a generator-action table.

    Both arguments may be derivations or homogeneous combos; the composite
    operators are never materialized.
    """
    Xc, Yc = as_combo(X), as_combo(Y)
    pres = Xc.presentation
    if Yc.presentation is not pres:
        raise PresentationMismatch("operands over different presentations")
    dx, dy = Xc.degree_of(), Yc.degree_of()
    if dx is None or dy is None:
        raise ValueError("der_commutator requires homogeneous operands")
    rho = pres.factor.rho(dx, dy)
    action = {}
    for g in pres.generators:
        e = pres.gen(g.name)
        action[g.name] = Xc(Yc(e)) - rho * Yc(Xc(e))
    name = f"[{getattr(X, 'name', Xc.render())},{getattr(Y, 'name', Yc.render())}]"
    return RhoDerivation(pres, name, dx + dy, action)
