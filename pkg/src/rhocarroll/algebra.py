"""Presentations of rho-commutative algebras and exact normal-form arithmetic.

An algebra is presented by an ordered list of graded generators.  Monomials
are kept in normal form: generators in declaration order with exponents
collected.  Reordering a product into normal form multiplies the coefficient
by commutation-factor values, one per transposition of adjacent generators;
because rho is a bicharacter, the total factor for moving a block g^a past a
block h^b is rho(|g|,|h|)^(a*b), accumulated here as summed q- and
sign-exponents.

Square-zero generators (forced whenever rho(|g|,|g|) = -1, since then
2 g^2 = 0 in characteristic zero) are truncated eagerly; inverse generators
are first-class via negative exponents.
"""

from __future__ import annotations

from .coefficients import CoefficientRing, LaurentCoefficient
from .grading import CommutationFactor, Degree, GradeGroup


class PresentationError(ValueError):
    pass


class PresentationMismatch(ValueError):
    """Two operands live over different algebra presentations."""


class GeneratorSpec:
    """A graded generator: name, degree, and the invertible/square-zero flags."""

    __slots__ = ("name", "degree", "invertible", "square_zero")

    def __init__(self, name: str, degree: Degree, invertible: bool = False,
                 square_zero: bool = False):
        self.name = name
        self.degree = degree
        self.invertible = invertible
        self.square_zero = square_zero
        if invertible and square_zero:
            raise PresentationError(f"generator {name}: cannot be both invertible and square-zero")

    def __repr__(self):
        flags = []
        if self.invertible:
            flags.append("invertible")
        if self.square_zero:
            flags.append("square_zero")
        return f"<gen {self.name} deg={self.degree}{' ' + ' '.join(flags) if flags else ''}>"


class AlgebraPresentation:
    """A rho-commutative algebra given by graded generators.

    The defining relations are the rho-swap rule g*h = rho(|g|,|h|) h*g for
    every generator pair, g*g^{-1} = 1 for invertible generators, and g^2 = 0
    for square-zero ones.  ``integral_domain`` is a catalog-author flag that
    gates kernel-exactness certification downstream; it is never inferred.
    """

    def __init__(self, name: str, ring: CoefficientRing, group: GradeGroup,
                 factor: CommutationFactor, generators, integral_domain: bool = False):
        if factor.group != group or factor.ring != ring:
            raise PresentationError("factor must live over the same group and ring")
        self.name = name
        self.ring = ring
        self.group = group
        self.factor = factor
        self.generators = list(generators)
        self.integral_domain = integral_domain
        self._index = {}
        for k, g in enumerate(self.generators):
            if g.name in self._index:
                raise PresentationError(f"duplicate generator name {g.name!r}")
            if g.degree.group != group:
                raise PresentationError(f"generator {g.name}: degree over wrong group")
            self._index[g.name] = k
            # characteristic 0: rho(|g|,|g|) = -1 forces g^2 = 0
            if factor.rho(g.degree, g.degree) == ring.gauss(-1):
                if g.invertible:
                    raise PresentationError(
                        f"generator {g.name} has rho(d,d) = -1 and cannot be invertible")
                g.square_zero = True

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def generator_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PresentationError(f"unknown generator {name!r} in algebra {self.name}") from None

    def generator(self, name: str) -> GeneratorSpec:
        return self.generators[self.generator_index(name)]

    def check_exponent(self, idx: int, e: int):
        g = self.generators[idx]
        if e < 0 and not g.invertible:
            raise PresentationError(f"negative power of non-invertible generator {g.name}")
        if g.square_zero and e not in (0, 1):
            raise PresentationError(f"square-zero generator {g.name} admits exponents 0 and 1 only")

    def monomial_degree(self, exponents) -> Degree:
        d = self.group.zero()
        for e, g in zip(exponents, self.generators):
            if e:
                d = d + g.degree.scaled(e)
        return d

    # -- normal form ------------------------------------------------------

    def merge_monomials(self, m1, m2):
        """Concatenate two normal-form monomials and renormalize.

        Returns (coefficient, monomial) or None when a square-zero collision
        annihilates the term.  The coefficient collects
        rho(|g_i|,|g_j|)^(a_i*b_j) over all pairs with i after j in
        declaration order (the transpositions needed to interleave m2 into m1).
        """
        qe = 0
        se = 0
        gens = self.generators
        out = list(m1)
        for j, b in enumerate(m2):
            if not b:
                continue
            dj = gens[j].degree
            for i in range(j + 1, len(m1)):
                a = m1[i]
                if not a:
                    continue
                q, s = self.factor.exponents(gens[i].degree, dj)
                qe += a * b * q
                se += a * b * s
            e = out[j] + b
            if gens[j].square_zero and e not in (0, 1):
                return None
            if e < 0 and not gens[j].invertible:
                raise PresentationError(
                    f"negative power of non-invertible generator {gens[j].name}")
            out[j] = e
        return self.factor.from_scaled(qe, se % 2), tuple(out)

    def normalize(self, word, coefficient=None) -> "AlgebraElement":
        """Normal form of a word of (generator name, exponent) pairs."""
        coeff = self.ring.one() if coefficient is None else self.ring.scalar(coefficient)
        mono = (0,) * self.ngens
        for name, e in word:
            idx = self.generator_index(name)
            if e < 0 and not self.generators[idx].invertible:
                raise PresentationError(
                    f"negative power of non-invertible generator {name}")
            step = tuple(e if k == idx else 0 for k in range(self.ngens))
            merged = self.merge_monomials(mono, step)
            if merged is None:
                return self.zero()
            f, mono = merged
            coeff = coeff * f
        return AlgebraElement(self, {mono: coeff})

    # -- element constructors ---------------------------------------------

    def element(self, terms) -> "AlgebraElement":
        return AlgebraElement(self, terms)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(0,) * self.ngens: self.ring.one()})

    def scalar(self, value) -> "AlgebraElement":
        return AlgebraElement(self, {(0,) * self.ngens: self.ring.scalar(value)})

    def gen(self, name: str, power: int = 1) -> "AlgebraElement":
        idx = self.generator_index(name)
        self.check_exponent(idx, power)
        mono = tuple(power if k == idx else 0 for k in range(self.ngens))
        return AlgebraElement(self, {mono: self.ring.one()})

    def monomial_render(self, mono) -> str:
        parts = []
        for e, g in zip(mono, self.generators):
            if e == 0:
                continue
            parts.append(g.name if e == 1 else f"{g.name}^{e}")
        return "*".join(parts)

    def __repr__(self):
        return f"<algebra {self.name}: {', '.join(g.name for g in self.generators)}>"


class AlgebraElement:
    """Finite sum of normal-form monomials with Laurent coefficients."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation: AlgebraPresentation, terms):
        self.presentation = presentation
        clean = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if len(mono) != presentation.ngens:
                raise PresentationError(f"monomial {mono} has wrong arity")
            if c:
                prev = clean.get(mono)
                s = c if prev is None else prev + c
                if s:
                    clean[mono] = s
                else:
                    del clean[mono]
        self.terms = clean

    def _check(self, other):
        if other.presentation is not self.presentation:
            raise PresentationMismatch(
                f"elements live over {self.presentation.name} vs {other.presentation.name}")

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        if isinstance(other, (int, LaurentCoefficient)) or type(other).__name__ == "GaussianRational":
            return self.presentation.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in o.terms.items():
            s = terms.get(m)
            s = c if s is None else s + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return AlgebraElement(self.presentation, terms)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.presentation, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        pres = self.presentation
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                merged = pres.merge_monomials(m1, m2)
                if merged is None:
                    continue
                f, m = merged
                c = c1 * c2 * f
                prev = out.get(m)
                s = c if prev is None else prev + c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return AlgebraElement(pres, out)

    def __rmul__(self, other):
        # scalars are central, so this only fires for int/coefficient operands
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = self.presentation.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset((m, hash(c)) for m, c in self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        if not self.terms:
            return True
        zero_mono = (0,) * self.presentation.ngens
        return set(self.terms) == {zero_mono}

    def scalar_coefficient(self) -> LaurentCoefficient:
        return self.terms.get((0,) * self.presentation.ngens, self.presentation.ring.zero())

    def is_unit(self) -> bool:
        """Single term, unit coefficient, monomial supported on invertible generators."""
        if len(self.terms) != 1:
            return False
        (m, c), = self.terms.items()
        if not c.is_unit():
            return False
        gens = self.presentation.generators
        return all(e == 0 or gens[k].invertible for k, e in enumerate(m))

    def inverse(self) -> "AlgebraElement":
        if not self.is_unit():
            raise PresentationError(f"element {self} is not a unit monomial")
        (m, c), = self.terms.items()
        inv_mono = tuple(-e for e in m)
        candidate = AlgebraElement(self.presentation, {inv_mono: self.presentation.ring.one()})
        # self * candidate is a scalar s; the inverse is candidate * s^{-1}
        prod = self * candidate
        s = prod.scalar_coefficient()
        return candidate * s.inverse()

    # -- grading -----------------------------------------------------------

    def degree_of(self) -> Degree | None:
        """Common degree of all monomials, or None when inhomogeneous."""
        deg = None
        for m in self.terms:
            d = self.presentation.monomial_degree(m)
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg if deg is not None else self.presentation.group.zero()

    def is_homogeneous(self) -> bool:
        return self.degree_of() is not None or self.is_zero()

    def homogeneous_parts(self) -> dict:
        parts = {}
        for m, c in self.terms.items():
            d = self.presentation.monomial_degree(m)
            parts.setdefault(d, {})[m] = c
        return {d: AlgebraElement(self.presentation, t) for d, t in parts.items()}

    # -- display ------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items())

    def render(self) -> str:
        if not self.terms:
            return "0"
        from .coefficients import join_terms
        parts = []
        for mono, c in self.sorted_terms():
            mono_s = self.presentation.monomial_render(mono)
            if not mono_s:
                parts.append(c.render())
                continue
            if c.is_one():
                parts.append(mono_s)
            elif c == self.presentation.ring.gauss(-1):
                parts.append("-" + mono_s)
            elif c.is_unit():
                parts.append(f"{c.render()}*{mono_s}")
            else:
                parts.append(f"({c.render()})*{mono_s}")
        return join_terms(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"<{self.presentation.name}: {self.render()}>"


def rho_commutator(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """[f,g] = f*g - rho(|f|,|g|) g*f, extended bilinearly over homogeneous parts."""
    if f.presentation is not g.presentation:
        raise PresentationMismatch("operands over different presentations")
    pres = f.presentation
    out = pres.zero()
    for df, fh in f.homogeneous_parts().items():
        for dg, gh in g.homogeneous_parts().items():
            out = out + fh * gh - pres.factor.rho(df, dg) * (gh * fh)
    return out


def degree_of(f: AlgebraElement):
    return f.degree_of()
