"""The small-instance corpus: every instance has at most 3 atoms and at
most 3 entries, so the brute-force stake grid is exhaustive enough to
find any violation the checkers find."""

from fractions import Fraction

from previsio.model import Assessment, PossibilitySpace, restrict

F = Fraction


def _build(atoms, rows):
    space = PossibilitySpace(atoms)
    items = []
    for values, event_atoms, lower, upper in rows:
        variable = space.variable(dict(zip(atoms, values)))
        event = space.event(event_atoms)
        items.append((restrict(variable, event), lower, upper))
    return Assessment.build(space, items)


def small_corpus():
    """(name, assessment) pairs used by the oracle-equivalence suites."""
    two = ("a", "b")
    three = ("a", "b", "c")
    return [
        ("vacuous-pair", _build(two, [
            ((1, 0), two, F(0), None),
            ((0, 1), two, F(0), None),
        ])),
        ("overpriced-atoms", _build(two, [
            ((1, 0), two, F(3, 5), None),
            ((0, 1), two, F(3, 5), None),
        ])),
        ("uniform-precise", _build(three, [
            ((1, 0, 0), three, F(1, 3), F(1, 3)),
            ((0, 1, 0), three, F(1, 3), F(1, 3)),
            ((0, 0, 1), three, F(1, 3), F(1, 3)),
        ])),
        ("price-above-sup", _build(two, [
            ((1, 0), two, F(3, 2), None),
        ])),
        ("price-below-inf", _build(two, [
            ((3, 5), two, F(1), None),
        ])),
        ("upper-below-lower", _build(two, [
            ((1, 0), two, F(2, 3), F(1, 3)),
        ])),
        ("conditional-consistent", _build(three, [
            ((1, 0, 0), ("a", "b"), F(1, 2), None),
            ((0, 1, 2), three, F(1), None),
        ])),
        ("conditional-overpriced", _build(three, [
            ((1, 0, 0), ("a", "b"), F(1, 2), F(1, 2)),
            ((2, 0, 0), ("a", "b"), F(1, 3), F(1, 3)),
        ])),
        ("scaled-conflict", _build(two, [
            ((1, 0), two, F(1, 2), F(1, 2)),
            ((2, 0), two, F(2, 3), F(2, 3)),
        ])),
        ("imprecise-sound", _build(three, [
            ((1, 0, 0), three, F(1, 4), F(1, 2)),
            ((0, 1, 0), three, F(1, 6), F(1, 3)),
        ])),
        ("superadditivity-break", _build(two, [
            ((1, 0), two, F(1, 2), None),
            ((0, 1), two, F(1, 4), None),
            ((1, 1), two, F(1, 2), None),
        ])),
        ("mixed-conditional", _build(three, [
            ((1, 0, 0), ("a", "c"), F(1, 3), None),
            ((0, 2, 1), ("b", "c"), F(1, 2), None),
            ((1, 1, 0), three, F(1, 3), None),
        ])),
        ("single-entry-tight", _build(two, [
            ((4, -2), two, F(-2), F(4)),
        ])),
        ("zero-variable", _build(two, [
            ((0, 0), two, F(0), F(0)),
            ((1, 0), two, F(1, 3), None),
        ])),
        ("zero-priced-wrong", _build(two, [
            ((0, 0), two, F(1, 8), None),
        ])),
    ]
