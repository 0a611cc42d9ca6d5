"""Independent oracles the engine is checked against.

``naive_normal_form`` reorders a word one adjacent transposition at a time,
multiplying in a single commutation-factor value per swap, exactly as the
rewriting rule is stated; the engine's block-merge normal form must agree
with it term by term.  ``FreeWord`` is a free (non-reordering) algebra used
to exhibit nonzero commutators when the swap rule is absent.
"""

from rhocarroll.algebra import AlgebraElement, AlgebraPresentation


def flatten_word(presentation: AlgebraPresentation, word):
    letters = []
    for name, e in word:
        idx = presentation.generator_index(name)
        step = 1 if e > 0 else -1
        letters += [(idx, step)] * abs(e)
    return letters


def naive_normal_form(presentation: AlgebraPresentation, word,
                      coefficient=None) -> AlgebraElement:
    letters = flatten_word(presentation, word)
    coeff = presentation.ring.one() if coefficient is None \
        else presentation.ring.scalar(coefficient)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            (gi, ei), (gj, ej) = letters[i], letters[i + 1]
            if gi > gj:
                di = presentation.generators[gi].degree.scaled(ei)
                dj = presentation.generators[gj].degree.scaled(ej)
                coeff = coeff * presentation.factor.rho(di, dj)
                letters[i], letters[i + 1] = letters[i + 1], letters[i]
                changed = True
    exps = [0] * presentation.ngens
    for idx, e in letters:
        exps[idx] += e
        if presentation.generators[idx].square_zero and exps[idx] not in (0, 1):
            return presentation.zero()
    if not coeff:
        return presentation.zero()
    return AlgebraElement(presentation, {tuple(exps): coeff})


def random_word(presentation: AlgebraPresentation, rng, max_len=8):
    word = []
    for _ in range(rng.randint(0, max_len)):
        g = rng.choice(presentation.generators)
        e = rng.choice((-1, 1)) if g.invertible else 1
        word.append((g.name, e))
    return word


class FreeWord:
    """Free algebra on the same letters: multiplication is concatenation,
    no reordering ever happens.  Elements are {word tuple: coefficient}."""

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {w: c for w, c in terms.items() if c}

    @classmethod
    def letter(cls, ring, name):
        return cls(ring, {(name,): ring.one()})

    @classmethod
    def scalar(cls, ring, c):
        return cls(ring, {(): ring.scalar(c)})

    def __add__(self, other):
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w, self.ring.zero()) + c
            if s:
                terms[w] = s
            else:
                terms.pop(w, None)
        return FreeWord(self.ring, terms)

    def __neg__(self):
        return FreeWord(self.ring, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = terms.get(w, self.ring.zero()) + c1 * c2
                if s:
                    terms[w] = s
                else:
                    terms.pop(w, None)
        return FreeWord(self.ring, terms)

    def scale(self, c):
        return FreeWord(self.ring, {w: c * v for w, v in self.terms.items()})

    def is_zero(self):
        return not self.terms
