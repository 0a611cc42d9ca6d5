"""Seeded random generators for homogeneous test data.

Randomized axiom checks draw coefficients with total exponent bounded by 2
(enough to exercise every extension code path while keeping normal forms
small), from a deterministic ``random.Random`` so reports are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import AlgebraElement, AlgebraPresentation
from .coefficients import GaussianRational

_SCALARS = (
    GaussianRational(1),
    GaussianRational(-1),
    GaussianRational(2),
    GaussianRational(Fraction(1, 2)),
    GaussianRational(0, 1),
    GaussianRational(1, 1),
    GaussianRational(-3),
)


def random_coefficient(ring, rng: random.Random):
    c = ring.scalar(rng.choice(_SCALARS))
    if ring.params and rng.random() < 0.4:
        c = c * ring.param(rng.choice(ring.params), rng.choice((-1, 1)))
    return c


def random_monomial(presentation: AlgebraPresentation, rng: random.Random,
                    max_total: int = 2) -> tuple:
    """Exponent vector with total |e| <= max_total honoring generator flags."""
    budget = rng.randint(0, max_total)
    exps = [0] * presentation.ngens
    while budget > 0:
        k = rng.randrange(presentation.ngens)
        g = presentation.generators[k]
        if g.square_zero:
            if exps[k] == 0:
                exps[k] = 1
                budget -= 1
            else:
                budget -= 1  # burn budget so loops terminate on all-odd algebras
            continue
        step = rng.choice((-1, 1)) if g.invertible else 1
        exps[k] += step
        budget -= 1
    return tuple(exps)


def random_homogeneous_element(presentation: AlgebraPresentation, rng: random.Random,
                               max_total: int = 2, extra_term_chance: float = 0.3,
                               allow_zero: bool = False) -> AlgebraElement:
    """A nonzero homogeneous element; occasionally multi-term when the
    grading admits several monomials of equal degree."""
    mono = random_monomial(presentation, rng, max_total)
    terms = {mono: random_coefficient(presentation.ring, rng)}
    want = presentation.monomial_degree(mono)
    if rng.random() < extra_term_chance:
        for _ in range(4):
            other = random_monomial(presentation, rng, max_total)
            if other != mono and presentation.monomial_degree(other) == want:
                terms[other] = random_coefficient(presentation.ring, rng)
                break
    el = AlgebraElement(presentation, terms)
    if el.is_zero() and not allow_zero:
        return presentation.one()
    return el


def random_element(presentation: AlgebraPresentation, rng: random.Random,
                   max_terms: int = 3, max_total: int = 2) -> AlgebraElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[random_monomial(presentation, rng, max_total)] = \
            random_coefficient(presentation.ring, rng)
    el = AlgebraElement(presentation, terms)
    return el if not el.is_zero() else presentation.one()


def random_homogeneous_section(pair, rng: random.Random, max_total: int = 2):
    """Homogeneous section: one or two basis terms of matching total degree."""
    from .rinehart import Section

    name = rng.choice(pair.basis_names)
    coeff = random_homogeneous_element(pair.algebra, rng, max_total)
    terms = {name: coeff}
    want = coeff.degree_of() + pair.basis_degree(name)
    if rng.random() < 0.25:
        other = rng.choice(pair.basis_names)
        if other != name:
            need = want - pair.basis_degree(other)
            for _ in range(4):
                cand = random_homogeneous_element(pair.algebra, rng, max_total)
                if cand.degree_of() == need:
                    terms[other] = cand
                    break
    return Section(pair, terms)
