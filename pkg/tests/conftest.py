"""Shared generators for randomized suites.

Random W-coherent assessments are built as lower envelopes of strictly
positive probability vectors (the envelope theorem guarantees
coherence); arbitrary assessments draw values freely around the
variable range and may be inconsistent.
"""

import random
from fractions import Fraction

from previsio.envelopes import lower_envelope
from previsio.model import Assessment, Event, PossibilitySpace, restrict

F = Fraction

ATOM_NAMES = ("a", "b", "c", "d", "e")


def random_space(rng: random.Random, min_atoms=3, max_atoms=4) -> PossibilitySpace:
    return PossibilitySpace(ATOM_NAMES[: rng.randint(min_atoms, max_atoms)])


def random_event(rng: random.Random, space: PossibilitySpace, nonempty=True) -> Event:
    while True:
        picked = [a for a in space.atoms if rng.random() < 0.5]
        if picked or not nonempty:
            return space.event(picked)


def random_variable(rng: random.Random, space: PossibilitySpace, span=4):
    return space.variable(
        {a: F(rng.randint(-span, span), rng.randint(1, 2)) for a in space.atoms}
    )


def positive_vector(rng: random.Random, space: PossibilitySpace):
    weights = [rng.randint(1, 6) for _ in space.atoms]
    total = sum(weights)
    return [F(w, total) for w in weights]


def random_domain(rng: random.Random, space: PossibilitySpace, max_entries=4,
                  conditional=True):
    cvs = []
    for _ in range(rng.randint(1, max_entries)):
        x = random_variable(rng, space)
        event = random_event(rng, space) if conditional else space.omega()
        cv = restrict(x, event)
        if cv not in cvs:
            cvs.append(cv)
    return cvs


def random_coherent_assessment(
    rng: random.Random,
    space=None,
    max_entries=4,
    members=None,
    conditional=True,
) -> Assessment:
    space = space or random_space(rng)
    domain = random_domain(rng, space, max_entries, conditional)
    vectors = [
        positive_vector(rng, space) for _ in range(members or rng.randint(1, 3))
    ]
    return lower_envelope(space, vectors, domain, check_members=False)


def random_arbitrary_assessment(
    rng: random.Random, space=None, max_entries=4, conditional=True
) -> Assessment:
    space = space or random_space(rng)
    domain = random_domain(rng, space, max_entries, conditional)
    items = []
    for cv in domain:
        lo, hi = cv.inf(), cv.sup()
        value = lo + (hi - lo) * F(rng.randint(-1, 5), 4)
        items.append((cv, value))
    return Assessment.build(space, items)


def random_precise_assessment(rng: random.Random, space=None, max_entries=4,
                              conditional=True) -> Assessment:
    """Precise and dF-coherent: Bayes values of one positive vector."""
    space = space or random_space(rng)
    domain = random_domain(rng, space, max_entries, conditional)
    p = positive_vector(rng, space)
    items = []
    for cv in domain:
        mass = sum(p[i] for i in cv.cond.members)
        value = sum(p[i] * v for i, v in cv.value_map().items()) / mass
        items.append((cv, value, value))
    return Assessment.build(space, items)
