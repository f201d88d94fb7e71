"""Bets, gains, supports and the income/expense decomposition.

A bet is a finite list of terms.  A term "for" X|B with stake s pays
s*B*(X - price); a term "against" pays the negative.  The price of a
term is the assessed lower or upper prevision of its variable: betting
for at the lower price and against at the upper price are the two
conjugate directions, while betting against at the *lower* price is the
distinguished single term of the coherence notions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ImpossibleConditioningEvent, UnassessedVariable
from .model import (
    Assessment,
    ConditionalVariable,
    Event,
    RandomVariable,
    RationalLike,
    as_rational,
)

FOR = "for"
AGAINST = "against"
LOWER = "lower"
UPPER = "upper"


@dataclass(frozen=True)
class BetTerm:
    variable: ConditionalVariable
    stake: Fraction
    side: str = FOR
    price: str = LOWER

    def __post_init__(self) -> None:
        object.__setattr__(self, "stake", as_rational(self.stake))
        if self.stake < 0:
            raise ValueError("stakes are nonnegative; bet against instead")
        if self.side not in (FOR, AGAINST):
            raise ValueError(f"unknown side {self.side!r}")
        if self.price not in (LOWER, UPPER):
            raise ValueError(f"unknown price selector {self.price!r}")


@dataclass(frozen=True)
class Bet:
    terms: tuple[BetTerm, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        spaces = {t.variable.space for t in self.terms}
        if len(spaces) > 1:
            raise ValueError("bet terms live on different spaces")

    @classmethod
    def of(cls, *terms: BetTerm) -> Bet:
        return cls(tuple(terms))

    def scaled(self, factor: RationalLike) -> Bet:
        k = as_rational(factor)
        return Bet(tuple(
            BetTerm(t.variable, t.stake * k, t.side, t.price) for t in self.terms
        ))


def in_favour(cv: ConditionalVariable, stake: RationalLike = 1) -> BetTerm:
    return BetTerm(cv, as_rational(stake), FOR, LOWER)


def against(cv: ConditionalVariable, stake: RationalLike = 1, price: str = LOWER) -> BetTerm:
    return BetTerm(cv, as_rational(stake), AGAINST, price)


@dataclass(frozen=True)
class GainTable:
    """Per-atom gain of a bet, with its conditioning event and support."""

    values: RandomVariable
    conditioning: Event   # disjunction of all terms' conditioning events
    support: Event        # disjunction over terms with nonzero stake

    def sup_on_conditioning(self) -> Fraction:
        return self._extreme(max, self.conditioning)

    def inf_on_conditioning(self) -> Fraction:
        return self._extreme(min, self.conditioning)

    def sup_on_support(self) -> Fraction:
        return self._extreme(max, self.support)

    def _extreme(self, pick, event: Event) -> Fraction:
        if event.is_empty:
            raise ImpossibleConditioningEvent(
                "the gain is conditioned on the impossible event"
            )
        return pick(self.values.values[i] for i in event.members)


def _price(term: BetTerm, assessment: Assessment) -> Fraction:
    entry = assessment.entry_for(term.variable)
    if entry is None:
        raise UnassessedVariable("bet references an unassessed variable")
    if term.price == LOWER:
        return entry.lower
    if entry.upper is None:
        raise UnassessedVariable(
            "term is priced at the upper prevision, but none is assessed"
        )
    return entry.upper


def _signed_terms(bet: Bet, assessment: Assessment) -> Iterable[
    tuple[ConditionalVariable, Fraction, Fraction]
]:
    """Yield (variable, signed stake, price) with 'against' negated."""
    for term in bet.terms:
        price = _price(term, assessment)
        stake = term.stake if term.side == FOR else -term.stake
        yield term.variable, stake, price


def gain(bet: Bet, assessment: Assessment) -> GainTable:
    """Exact per-atom gain; zero outside the union of conditioning events."""
    space = assessment.space
    values = [Fraction(0)] * space.size
    cond_members: set[int] = set()
    supp_members: set[int] = set()
    for term in bet.terms:
        term.variable.space._check(space)
        cond_members |= term.variable.cond.members
        if term.stake != 0:
            supp_members |= term.variable.cond.members
    for cv, stake, price in _signed_terms(bet, assessment):
        if stake == 0:
            continue
        for i, v in cv.value_map().items():
            values[i] += stake * (v - price)
    return GainTable(
        RandomVariable(space, tuple(values)),
        Event(space, frozenset(cond_members)),
        Event(space, frozenset(supp_members)),
    )


def income_expense(bet: Bet, assessment: Assessment) -> tuple[RandomVariable, RandomVariable]:
    """Split the gain into income I and expense E with G = I - E.

    In a conditional environment the expense is itself random: each
    term's price is paid only when its conditioning event happens.
    """
    space = assessment.space
    income = [Fraction(0)] * space.size
    expense = [Fraction(0)] * space.size
    for cv, stake, price in _signed_terms(bet, assessment):
        if stake == 0:
            continue
        for i, v in cv.value_map().items():
            income[i] += stake * v
            expense[i] += stake * price
    return (
        RandomVariable(space, tuple(income)),
        RandomVariable(space, tuple(expense)),
    )


@dataclass(frozen=True)
class ConditionPredicates:
    """Diagnostics relating a bet's income and expense to sup(G|B) >= 0.

    * ``sufficient_expense_bound``: inf(-I|B) <= inf(-E|B); implies
      sup(G|B) >= 0.
    * ``necessary_expense_bound``: inf(-I|B) <= sup(-E|B); implied by
      sup(G|B) >= 0, so its failure refutes coherence.
    * ``nested_price_bound``: defined only when the meet of all
      conditioning events is nonempty: the bet's net price covers
      sup(-I|B).  Also sufficient for sup(G|B) >= 0.

    These are diagnostics only, never a standalone consistency notion.
    """

    sufficient_expense_bound: bool
    necessary_expense_bound: bool
    nested_price_bound: bool | None


def condition_predicates(bet: Bet, assessment: Assessment) -> ConditionPredicates:
    income, expense = income_expense(bet, assessment)
    table = gain(bet, assessment)
    b = table.conditioning
    if b.is_empty:
        raise ImpossibleConditioningEvent("bet has no terms")
    neg_income = [-income.values[i] for i in sorted(b.members)]
    neg_expense = [-expense.values[i] for i in sorted(b.members)]
    lam = min(neg_income)  # extreme instantiation inf(-I|B)
    sufficient = lam <= min(neg_expense)
    necessary = lam <= max(neg_expense)
    nested: bool | None = None
    meet = None
    for term in bet.terms:
        meet = term.variable.cond if meet is None else (meet & term.variable.cond)
    if meet is not None and not meet.is_empty:
        net_price = Fraction(0)
        for _, stake, price in _signed_terms(bet, assessment):
            net_price -= stake * price
        nested = net_price >= max(neg_income)
    return ConditionPredicates(sufficient, necessary, nested)


def pruned(bet: Bet) -> Bet:
    """Drop zero-stake terms; the gain conditioned on the support is
    unchanged."""
    return Bet(tuple(t for t in bet.terms if t.stake != 0))
