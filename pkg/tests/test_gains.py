import random
from fractions import Fraction

import pytest

from previsio.errors import UnassessedVariable
from previsio.gains import (
    Bet,
    against,
    condition_predicates,
    gain,
    in_favour,
    income_expense,
    pruned,
)
from previsio.model import Assessment, PossibilitySpace, restrict

F = Fraction


@pytest.fixture
def two_atoms():
    space = PossibilitySpace(("a", "b"))
    a_ind = space.indicator(space.event(["a"]))
    b_ind = space.indicator(space.event(["b"]))
    assessment = Assessment.build(
        space,
        [(a_ind.unconditional(), F(3, 5)), (b_ind.unconditional(), F(3, 5))],
    )
    return space, a_ind, b_ind, assessment


def test_vacuous_single_term_gain():
    space = PossibilitySpace(("a", "b", "c"))
    x = space.variable({"a": 2, "b": 5, "c": 3})
    assessment = Assessment.build(space, [(x.unconditional(), 2)])  # inf
    table = gain(Bet.of(in_favour(x.unconditional(), 1)), assessment)
    assert all(v >= 0 for v in table.values.values)
    assert table.sup_on_conditioning() >= 0


def test_both_atoms_overpriced_gain(two_atoms):
    space, a_ind, b_ind, assessment = two_atoms
    bet = Bet.of(
        in_favour(a_ind.unconditional(), 1), in_favour(b_ind.unconditional(), 1)
    )
    table = gain(bet, assessment)
    assert table.values.values == (F(-1, 5), F(-1, 5))
    assert table.sup_on_conditioning() == F(-1, 5)
    assert table.conditioning == space.omega()
    assert table.support == space.omega()


def test_zero_stake_bet(two_atoms):
    space, a_ind, b_ind, assessment = two_atoms
    bet = Bet.of(in_favour(a_ind.unconditional(), 0))
    table = gain(bet, assessment)
    assert all(v == 0 for v in table.values.values)
    assert table.sup_on_conditioning() == 0
    assert table.support.is_empty
    assert not table.conditioning.is_empty


def test_unassessed_variable_rejected(two_atoms):
    space, a_ind, b_ind, assessment = two_atoms
    other = space.variable({"a": 3, "b": 4})
    with pytest.raises(UnassessedVariable):
        gain(Bet.of(in_favour(other.unconditional(), 1)), assessment)
    with pytest.raises(UnassessedVariable):
        gain(Bet.of(against(a_ind.unconditional(), 1, price="upper")), assessment)


def test_negative_stake_rejected(two_atoms):
    _, a_ind, _, _ = two_atoms
    with pytest.raises(ValueError):
        in_favour(a_ind.unconditional(), -1)


def _random_setup(rng):
    space = PossibilitySpace(("a", "b", "c", "d"))
    events = [
        space.event([a for i, a in enumerate(space.atoms) if mask >> i & 1])
        for mask in range(1, 16)
    ]
    items = []
    cvs = []
    for _ in range(rng.randint(1, 4)):
        x = space.variable({a: rng.randint(-4, 4) for a in space.atoms})
        b = rng.choice(events)
        cv = restrict(x, b)
        if any(cv == c for c in cvs):
            continue
        cvs.append(cv)
        items.append((cv, F(rng.randint(-8, 8), rng.randint(1, 4))))
    assessment = Assessment.build(space, items)
    terms = []
    for cv, _ in items:
        stake = F(rng.randint(0, 5), rng.randint(1, 3))
        side = rng.choice(["for", "against"])
        terms.append(in_favour(cv, stake) if side == "for" else against(cv, stake))
    return assessment, Bet(tuple(terms))


def test_income_minus_expense_is_gain_randomized():
    rng = random.Random(7)
    for _ in range(80):
        assessment, bet = _random_setup(rng)
        if not bet.terms:
            continue
        table = gain(bet, assessment)
        income, expense = income_expense(bet, assessment)
        assert (income - expense) == table.values


def test_unconditional_expense_is_constant():
    space = PossibilitySpace(("a", "b"))
    x = space.variable({"a": 1, "b": 0})
    y = space.variable({"a": 0, "b": 2})
    assessment = Assessment.build(
        space, [(x.unconditional(), F(1, 2)), (y.unconditional(), F(1, 3))]
    )
    bet = Bet.of(in_favour(x.unconditional(), 2), against(y.unconditional(), 1))
    _, expense = income_expense(bet, assessment)
    assert len(set(expense.values)) == 1


def test_conditional_term_expense_vanishes_off_event():
    space = PossibilitySpace(("a", "b", "c"))
    x = space.variable({"a": 1, "b": 0, "c": 9})
    cell = space.event(["a", "b"])
    assessment = Assessment.build(space, [(restrict(x, cell), F(1, 2))])
    _, expense = income_expense(
        Bet.of(in_favour(restrict(x, cell), 3)), assessment
    )
    assert expense.value_at("c") == 0
    assert expense.value_at("a") == F(3, 2)


def test_zero_bet_income_expense(two_atoms):
    _, a_ind, _, assessment = two_atoms
    income, expense = income_expense(
        Bet.of(in_favour(a_ind.unconditional(), 0)), assessment
    )
    assert all(v == 0 for v in income.values)
    assert all(v == 0 for v in expense.values)


def test_positive_homogeneity():
    rng = random.Random(11)
    for _ in range(40):
        assessment, bet = _random_setup(rng)
        if not bet.terms:
            continue
        lam = F(rng.randint(1, 6), rng.randint(1, 3))
        table = gain(bet, assessment)
        scaled = gain(bet.scaled(lam), assessment)
        assert scaled.values == table.values.scale(lam)


def test_pruning_preserves_gain_on_support(two_atoms):
    space, a_ind, b_ind, assessment = two_atoms
    bet = Bet.of(
        in_favour(a_ind.unconditional(), 1), in_favour(b_ind.unconditional(), 0)
    )
    lean = pruned(bet)
    assert len(lean.terms) == 1
    full_table = gain(bet, assessment)
    lean_table = gain(lean, assessment)
    assert full_table.support == lean_table.conditioning
    assert full_table.sup_on_support() == lean_table.sup_on_conditioning()


def test_predicates_reduce_unconditionally(two_atoms):
    # for unconditional bets both expense bounds coincide with sup G >= 0
    rng = random.Random(23)
    space = PossibilitySpace(("a", "b"))
    x = space.variable({"a": 1, "b": 0})
    y = space.variable({"a": 0, "b": 1})
    assessment = Assessment.build(
        space, [(x.unconditional(), F(3, 5)), (y.unconditional(), F(3, 5))]
    )
    for _ in range(60):
        terms = []
        for cv in (x.unconditional(), y.unconditional()):
            stake = F(rng.randint(0, 4), rng.randint(1, 3))
            terms.append(
                in_favour(cv, stake) if rng.random() < 0.5 else against(cv, stake)
            )
        bet = Bet(tuple(terms))
        preds = condition_predicates(bet, assessment)
        nonneg = gain(bet, assessment).sup_on_conditioning() >= 0
        assert preds.sufficient_expense_bound == preds.necessary_expense_bound == nonneg


def test_predicate_directions_on_random_conditional_bets():
    rng = random.Random(31)
    sufficient_seen = necessary_refutations = 0
    for _ in range(300):
        assessment, bet = _random_setup(rng)
        if not bet.terms:
            continue
        preds = condition_predicates(bet, assessment)
        nonneg = gain(bet, assessment).sup_on_conditioning() >= 0
        if preds.sufficient_expense_bound:
            sufficient_seen += 1
            assert nonneg
        if nonneg:
            assert preds.necessary_expense_bound
        if not preds.necessary_expense_bound:
            necessary_refutations += 1
            assert not nonneg
        if preds.nested_price_bound:
            assert nonneg
    assert sufficient_seen > 5
    assert necessary_refutations > 5


def test_zero_stake_bet_predicates(two_atoms):
    _, a_ind, b_ind, assessment = two_atoms
    bet = Bet.of(in_favour(a_ind.unconditional(), 0))
    preds = condition_predicates(bet, assessment)
    assert preds.sufficient_expense_bound
    assert preds.necessary_expense_bound
    assert preds.nested_price_bound
