"""Grading groups G = Z^r x Z2^s and commutation factors on them.

A commutation factor rho : G x G -> K^x controls how homogeneous elements
commute: f*g = rho(|f|,|g|) * g*f.  The engine realizes rho as a bicharacter

    rho(a, b) = q^{<a, B b>} * (-1)^{<a, C b>}

with B an antisymmetric integer form supported on the free block and C a
mod-2 symmetric form.  These matrix conditions are exactly equivalent to the
defining axioms rho(a,b) = rho(b,a)^{-1} and biadditivity, which
``check_commutation_axioms`` re-verifies pointwise on random degrees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .coefficients import CoefficientRing, LaurentCoefficient
from .report import VerificationReport


class DegreeMismatch(ValueError):
    """Degree vector does not match the declared grading group."""


@dataclass(frozen=True)
class GradeGroup:
    """Abelian grading group Z^free_rank x Z2^torsion_rank.

    Degrees are integer vectors of length free_rank + torsion_rank; the last
    torsion_rank slots are always reduced mod 2.
    """

    free_rank: int
    torsion_rank: int

    def __post_init__(self):
        if self.free_rank < 0 or self.torsion_rank < 0:
            raise ValueError("ranks must be nonnegative")

    @property
    def dim(self) -> int:
        return self.free_rank + self.torsion_rank

    def _reduce(self, vector):
        v = list(vector)
        if len(v) != self.dim:
            raise DegreeMismatch(f"expected {self.dim} components, got {len(v)}")
        for k in range(self.free_rank, self.dim):
            v[k] %= 2
        return tuple(v)

    def degree(self, *components) -> "Degree":
        if len(components) == 1 and isinstance(components[0], (tuple, list)):
            components = tuple(components[0])
        return Degree(self, self._reduce(components))

    def zero(self) -> "Degree":
        return Degree(self, (0,) * self.dim)

    def random_degree(self, rng: random.Random, bound: int = 3) -> "Degree":
        v = [rng.randint(-bound, bound) for _ in range(self.free_rank)]
        v += [rng.randint(0, 1) for _ in range(self.torsion_rank)]
        return Degree(self, tuple(v))

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        if self.torsion_rank:
            parts.append(f"Z2^{self.torsion_rank}")
        return " x ".join(parts) if parts else "trivial"


@dataclass(frozen=True)
class Degree:
    """A G-degree: immutable integer vector with torsion slots in {0,1}."""

    group: GradeGroup
    vector: tuple

    def __add__(self, other: "Degree") -> "Degree":
        self._check(other)
        return Degree(self.group, self.group._reduce(
            tuple(a + b for a, b in zip(self.vector, other.vector))))

    def __sub__(self, other: "Degree") -> "Degree":
        return self + (-other)

    def __neg__(self) -> "Degree":
        return Degree(self.group, self.group._reduce(tuple(-a for a in self.vector)))

    def scaled(self, k: int) -> "Degree":
        return Degree(self.group, self.group._reduce(tuple(k * a for a in self.vector)))

    def _check(self, other):
        if not isinstance(other, Degree) or other.group != self.group:
            raise DegreeMismatch(f"degree {other} not over group {self.group}")

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.vector)

    def __str__(self):
        return "(" + ",".join(str(a) for a in self.vector) + ")"


def _matrix(rows, dim, name):
    m = [tuple(int(x) for x in row) for row in rows]
    if len(m) != dim or any(len(r) != dim for r in m):
        raise ValueError(f"{name} must be a {dim}x{dim} integer matrix")
    return tuple(m)


class CommutationFactor:
    """Bicharacter rho(a,b) = q^{<a,Bb>} (-1)^{<a,Cb>} on a grading group.

    ``strict=False`` skips the well-formedness validation; this exists so a
    deliberately broken factor can be fed to ``check_commutation_axioms`` as
    a negative control.
    """

    def __init__(self, group: GradeGroup, ring: CoefficientRing,
                 q_form=None, sign_form=None, q_param: str = "q",
                 strict: bool = True):
        dim = group.dim
        self.group = group
        self.ring = ring
        self.q_param = q_param
        self.q_form = _matrix(q_form if q_form is not None else
                              [[0] * dim for _ in range(dim)], dim, "q_form")
        self.sign_form = _matrix(sign_form if sign_form is not None else
                                 [[0] * dim for _ in range(dim)], dim, "sign_form")
        self._has_q = any(any(row) for row in self.q_form)
        if self._has_q and q_param not in ring.params:
            raise ValueError(
                f"q_form is nonzero but parameter {q_param!r} is not in the ring")
        if strict:
            self.validate()

    def validate(self):
        dim = self.group.dim
        B, C = self.q_form, self.sign_form
        for a in range(dim):
            for b in range(dim):
                if B[a][b] != -B[b][a]:
                    raise ValueError("q_form must be antisymmetric")
                if (C[a][b] - C[b][a]) % 2:
                    raise ValueError("sign_form must be symmetric mod 2")
                # q-exponents on torsion slots are not well defined mod 2
                if (a >= self.group.free_rank or b >= self.group.free_rank) and B[a][b]:
                    raise ValueError("q_form must vanish on torsion slots")

    def _pairing(self, form, a: Degree, b: Degree) -> int:
        return sum(ai * form[i][j] * bj
                   for i, ai in enumerate(a.vector) if ai
                   for j, bj in enumerate(b.vector) if bj)

    def exponents(self, a: Degree, b: Degree) -> tuple[int, int]:
        """(q-exponent, sign-exponent mod 2) of rho(a, b)."""
        if a.group != self.group or b.group != self.group:
            raise DegreeMismatch("degrees do not belong to this factor's group")
        return self._pairing(self.q_form, a, b), self._pairing(self.sign_form, a, b) % 2

    def rho(self, a: Degree, b: Degree) -> LaurentCoefficient:
        qe, se = self.exponents(a, b)
        c = self.ring.gauss(-1 if se else 1)
        if qe and self._has_q:
            c = c * self.ring.param(self.q_param, qe)
        elif qe:
            # unreachable for validated factors; kept for broken test factors
            raise ValueError("q exponent without a q parameter")
        return c

    def from_scaled(self, qe: int, se: int) -> LaurentCoefficient:
        """Build q^qe * (-1)^se directly from accumulated exponents."""
        c = self.ring.gauss(-1 if se % 2 else 1)
        if qe:
            c = c * self.ring.param(self.q_param, qe)
        return c

    def is_sign_only(self) -> bool:
        return not self._has_q


def check_commutation_axioms(factor: CommutationFactor, samples: int = 500,
                             seed: int = 0) -> VerificationReport:
    """Re-verify the commutation-factor axioms on random degree triples.

    Checks rho(a,b)*rho(b,a) = 1, biadditivity in both slots, and
    rho(c,c) = +-1.  The first counterexample of each kind is reported as a
    witness.
    """
    rep = VerificationReport("commutation factor axioms")
    rng = random.Random(seed)
    group = factor.group
    one = factor.ring.one()
    minus_one = factor.ring.gauss(-1)

    bad_inverse = bad_left = bad_right = bad_diag = None
    for _ in range(samples):
        a = group.random_degree(rng)
        b = group.random_degree(rng)
        c = group.random_degree(rng)
        if bad_inverse is None and factor.rho(a, b) * factor.rho(b, a) != one:
            bad_inverse = (a, b)
        if bad_left is None and factor.rho(a + b, c) != factor.rho(a, c) * factor.rho(b, c):
            bad_left = (a, b, c)
        if bad_right is None and factor.rho(a, b + c) != factor.rho(a, b) * factor.rho(a, c):
            bad_right = (a, b, c)
        d = factor.rho(c, c)
        if bad_diag is None and d != one and d != minus_one:
            bad_diag = c

    if bad_inverse is None:
        rep.passed("rho(a,b)*rho(b,a) = 1", f"{samples} samples")
    else:
        a, b = bad_inverse
        rep.failed("rho(a,b)*rho(b,a) = 1", f"a={a}, b={b}",
                   f"rho(a,b)*rho(b,a) = {factor.rho(a, b) * factor.rho(b, a)}",
                   factor.rho(a, b) * factor.rho(b, a))
    if bad_left is None:
        rep.passed("rho(a+b,c) = rho(a,c)rho(b,c)", f"{samples} samples")
    else:
        a, b, c = bad_left
        rep.failed("rho(a+b,c) = rho(a,c)rho(b,c)", f"a={a}, b={b}, c={c}",
                   f"rho(a+b,c) = {factor.rho(a + b, c)} but product = "
                   f"{factor.rho(a, c) * factor.rho(b, c)}")
    if bad_right is None:
        rep.passed("rho(a,b+c) = rho(a,b)rho(a,c)", f"{samples} samples")
    else:
        a, b, c = bad_right
        rep.failed("rho(a,b+c) = rho(a,b)rho(a,c)", f"a={a}, b={b}, c={c}",
                   f"rho(a,b+c) = {factor.rho(a, b + c)} but product = "
                   f"{factor.rho(a, b) * factor.rho(a, c)}")
    if bad_diag is None:
        rep.passed("rho(c,c) in {+1,-1}", f"{samples} samples")
    else:
        rep.failed("rho(c,c) in {+1,-1}", f"c={bad_diag}",
                   f"rho(c,c) = {factor.rho(bad_diag, bad_diag)}",
                   factor.rho(bad_diag, bad_diag))
    return rep
