"""Exact scalar arithmetic for the engine.

Every coefficient lives in Q(i)[p1^{±1}, ..., pk^{±1}]: multivariate Laurent
polynomials in finitely many central formal unit parameters (typically the
commutation parameter ``q``, optionally ``tau`` standing for 2*pi), with
Gaussian-rational coefficients.  There is no floating point anywhere;
zero-testing is therefore decidable and exact.
"""

from __future__ import annotations

from fractions import Fraction


class NotAUnit(ArithmeticError):
    """Inversion was requested for a coefficient that is not a single-term unit."""


class ParameterMismatch(ValueError):
    """Operands were built over different declared parameter lists."""


class GaussianRational:
    """An exact element of Q(i): re + im*i with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise NotAUnit("0 has no inverse")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return render_gaussian(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
IMAG = GaussianRational(0, 1)


def _frac_str(x: Fraction) -> str:
    return str(x) if x.denominator != 1 else str(x.numerator)


def render_gaussian(g: GaussianRational, wrap_mixed: bool = True) -> str:
    """Render as e.g. ``3/2``, ``-i``, ``1/2*i`` or ``(1-2*i)``."""
    if g.im == 0:
        return _frac_str(g.re)
    if g.re == 0:
        if g.im == 1:
            return "i"
        if g.im == -1:
            return "-i"
        return f"{_frac_str(g.im)}*i"
    im = render_gaussian(GaussianRational(0, g.im), wrap_mixed=False)
    joined = f"{_frac_str(g.re)}+{im}" if not im.startswith("-") else f"{_frac_str(g.re)}{im}"
    return f"({joined})" if wrap_mixed else joined


class LaurentCoefficient:
    """Sparse Laurent polynomial: map from exponent vectors to GaussianRational.

    ``params`` fixes the (ordered) list of formal unit parameters; every
    exponent vector has one slot per parameter.  Terms with zero coefficient
    are never stored.  Instances are immutable by convention.
    """

    __slots__ = ("params", "terms")

    def __init__(self, params, terms):
        self.params = tuple(params)
        n = len(self.params)
        clean = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ParameterMismatch(
                    f"exponent vector {exps} does not match parameters {self.params}"
                )
            if not isinstance(c, GaussianRational):
                c = GaussianRational(c)
            if c:
                clean[exps] = clean.get(exps, ZERO) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    def _check(self, other):
        if self.params != other.params:
            raise ParameterMismatch(
                f"parameter lists differ: {self.params} vs {other.params}"
            )

    def _coerce(self, other):
        if isinstance(other, LaurentCoefficient):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            z = (0,) * len(self.params)
            return LaurentCoefficient(self.params, {z: GaussianRational._coerce(other) or other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return LaurentCoefficient(self.params, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentCoefficient(self.params, {e: -c for e, c in self.terms.items()})

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
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = terms.get(e, ZERO) + c
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return LaurentCoefficient(self.params, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentCoefficient(self.params, {(0,) * len(self.params): ONE})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_unit(self) -> bool:
        """True iff a single nonzero term (every monomial c*q^a*... is a unit)."""
        return len(self.terms) == 1

    def is_one(self) -> bool:
        z = (0,) * len(self.params)
        return self.terms == {z: ONE}

    def is_scalar(self) -> bool:
        """True iff constant in all parameters (an element of Q(i))."""
        if not self.terms:
            return True
        z = (0,) * len(self.params)
        return set(self.terms) == {z}

    def scalar_part(self) -> GaussianRational:
        z = (0,) * len(self.params)
        return self.terms.get(z, ZERO)

    def inverse(self) -> "LaurentCoefficient":
        if len(self.terms) != 1:
            raise NotAUnit(f"{self} is not a single-term unit")
        (e, c), = self.terms.items()
        return LaurentCoefficient(self.params, {tuple(-x for x in e): c.inverse()})

    def substitute_ones(self) -> GaussianRational:
        """Ring homomorphism sending every parameter to 1 (classical limit)."""
        total = ZERO
        for c in self.terms.values():
            total = total + c
        return total

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash((self.params, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items())

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.params, exps):
                if k == 0:
                    continue
                factors.append(name if k == 1 else f"{name}^{k}")
            if not factors:
                parts.append(render_gaussian(c))
            elif c == ONE:
                parts.append("*".join(factors))
            elif c == -ONE:
                parts.append("-" + "*".join(factors))
            else:
                parts.append("*".join([render_gaussian(c)] + factors))
        return join_terms(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"<coeff {self.render()}>"


def join_terms(parts) -> str:
    """Join rendered terms with `` + `` / `` - `` so the result re-parses."""
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


class CoefficientRing:
    """Factory for LaurentCoefficient values over a fixed parameter list."""

    __slots__ = ("params",)

    def __init__(self, params=()):
        self.params = tuple(params)
        if len(set(self.params)) != len(self.params):
            raise ValueError("duplicate parameter names")

    def __eq__(self, other):
        return isinstance(other, CoefficientRing) and self.params == other.params

    def __hash__(self):
        return hash(self.params)

    def __repr__(self):
        return f"CoefficientRing{self.params!r}"

    def _zero_exp(self):
        return (0,) * len(self.params)

    def zero(self) -> LaurentCoefficient:
        return LaurentCoefficient(self.params, {})

    def one(self) -> LaurentCoefficient:
        return LaurentCoefficient(self.params, {self._zero_exp(): ONE})

    def scalar(self, value) -> LaurentCoefficient:
        if isinstance(value, LaurentCoefficient):
            if value.params != self.params:
                raise ParameterMismatch(f"{value.params} vs {self.params}")
            return value
        g = value if isinstance(value, GaussianRational) else GaussianRational(value)
        return LaurentCoefficient(self.params, {self._zero_exp(): g})

    def gauss(self, re, im=0) -> LaurentCoefficient:
        return self.scalar(GaussianRational(re, im))

    def i(self) -> LaurentCoefficient:
        return self.scalar(IMAG)

    def param(self, name: str, power: int = 1) -> LaurentCoefficient:
        if name not in self.params:
            raise ParameterMismatch(f"unknown parameter {name!r} (have {self.params})")
        e = [0] * len(self.params)
        e[self.params.index(name)] = power
        return LaurentCoefficient(self.params, {tuple(e): ONE})

    def monomial(self, coefficient, exponents) -> LaurentCoefficient:
        g = coefficient if isinstance(coefficient, GaussianRational) else GaussianRational(coefficient)
        return LaurentCoefficient(self.params, {tuple(exponents): g})
