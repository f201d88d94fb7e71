"""Finite possibility spaces, events, random variables and assessments.

Everything is exact: values are `fractions.Fraction`, events are atom
subsets, and all types are immutable (hence hashable and safe to share
between threads).  A variable conditioned on an event keeps only the
values inside that event, so two variables that agree on the event are
the *same* conditional variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    DuplicateEntry,
    ImpossibleConditioningEvent,
    SpaceMismatch,
)

RationalLike = Union[Fraction, int, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, "p/q" strings and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class PossibilitySpace:
    """An ordered finite partition of atoms; the sample space of a problem."""

    atoms: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("a possibility space needs at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("atoms must be pairwise distinct")
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def size(self) -> int:
        return len(self.atoms)

    def index(self, atom: str) -> int:
        try:
            return self.atoms.index(atom)
        except ValueError:
            raise KeyError(f"unknown atom {atom!r}") from None

    def omega(self) -> Event:
        return Event(self, frozenset(range(self.size)))

    def empty_event(self) -> Event:
        return Event(self, frozenset())

    def event(self, atoms: Iterable[str]) -> Event:
        return Event(self, frozenset(self.index(a) for a in atoms))

    def variable(self, values: Mapping[str, RationalLike]) -> RandomVariable:
        missing = set(self.atoms) - set(values)
        if missing:
            raise ValueError(f"no value for atoms {sorted(missing)}")
        extra = set(values) - set(self.atoms)
        if extra:
            raise KeyError(f"unknown atoms {sorted(extra)}")
        return RandomVariable(
            self, tuple(as_rational(values[a]) for a in self.atoms)
        )

    def constant(self, value: RationalLike) -> RandomVariable:
        return RandomVariable(self, (as_rational(value),) * self.size)

    def indicator(self, event: Event) -> RandomVariable:
        """The 0/1 variable of an event (de Finetti's convention)."""
        self._check(event.space)
        one, zero = Fraction(1), Fraction(0)
        return RandomVariable(
            self,
            tuple(one if i in event.members else zero for i in range(self.size)),
        )

    def _check(self, other: PossibilitySpace) -> None:
        if other != self:
            raise SpaceMismatch("objects live on different possibility spaces")


@dataclass(frozen=True)
class Event:
    """A subset of atoms of one possibility space."""

    space: PossibilitySpace
    members: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        if any(i < 0 or i >= self.space.size for i in self.members):
            raise ValueError("event members outside the atom index range")

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def is_sure(self) -> bool:
        return len(self.members) == self.space.size

    def atoms(self) -> tuple[str, ...]:
        return tuple(self.space.atoms[i] for i in sorted(self.members))

    def __and__(self, other: Event) -> Event:
        self.space._check(other.space)
        return Event(self.space, self.members & other.members)

    def __or__(self, other: Event) -> Event:
        self.space._check(other.space)
        return Event(self.space, self.members | other.members)

    def __invert__(self) -> Event:
        return Event(
            self.space, frozenset(range(self.space.size)) - self.members
        )

    def implies(self, other: Event) -> bool:
        self.space._check(other.space)
        return self.members <= other.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class RandomVariable:
    """A bounded random variable: one exact rational per atom."""

    space: PossibilitySpace
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.space.size:
            raise ValueError("one value per atom is required")
        object.__setattr__(self, "values", tuple(map(as_rational, self.values)))

    def __getitem__(self, atom_index: int) -> Fraction:
        return self.values[atom_index]

    def value_at(self, atom: str) -> Fraction:
        return self.values[self.space.index(atom)]

    def _zip(self, other: RandomVariable) -> Iterable[tuple[Fraction, Fraction]]:
        self.space._check(other.space)
        return zip(self.values, other.values)

    def __add__(self, other: RandomVariable) -> RandomVariable:
        return RandomVariable(self.space, tuple(a + b for a, b in self._zip(other)))

    def __sub__(self, other: RandomVariable) -> RandomVariable:
        return RandomVariable(self.space, tuple(a - b for a, b in self._zip(other)))

    def __neg__(self) -> RandomVariable:
        return RandomVariable(self.space, tuple(-a for a in self.values))

    def scale(self, factor: RationalLike) -> RandomVariable:
        k = as_rational(factor)
        return RandomVariable(self.space, tuple(k * a for a in self.values))

    def shift(self, offset: RationalLike) -> RandomVariable:
        c = as_rational(offset)
        return RandomVariable(self.space, tuple(a + c for a in self.values))

    def pointwise_min(self, other: RandomVariable) -> RandomVariable:
        return RandomVariable(self.space, tuple(min(a, b) for a, b in self._zip(other)))

    def pointwise_max(self, other: RandomVariable) -> RandomVariable:
        return RandomVariable(self.space, tuple(max(a, b) for a, b in self._zip(other)))

    def pointwise_mul(self, other: RandomVariable) -> RandomVariable:
        return RandomVariable(self.space, tuple(a * b for a, b in self._zip(other)))

    def given(self, event: Event) -> ConditionalVariable:
        return restrict(self, event)

    def unconditional(self) -> ConditionalVariable:
        return restrict(self, self.space.omega())


@dataclass(frozen=True)
class ConditionalVariable:
    """A variable restricted to a nonempty conditioning event.

    Canonical form: only the values on the conditioning event are kept
    (aligned with the event's sorted atom indices), so BX = BY implies
    X|B == Y|B.
    """

    cond: Event
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.cond.is_empty:
            raise ImpossibleConditioningEvent(
                "cannot condition on the impossible event"
            )
        if len(self.values) != len(self.cond.members):
            raise ValueError("one value per conditioning atom is required")
        object.__setattr__(self, "values", tuple(map(as_rational, self.values)))

    @property
    def space(self) -> PossibilitySpace:
        return self.cond.space

    def sup(self) -> Fraction:
        return max(self.values)

    def inf(self) -> Fraction:
        return min(self.values)

    def value_map(self) -> dict[int, Fraction]:
        """Atom index -> value, for atoms inside the conditioning event."""
        return dict(zip(sorted(self.cond.members), self.values))

    def as_variable(self, fill: RationalLike = 0) -> RandomVariable:
        """Extend back to a full variable, `fill` outside the event."""
        filled = [as_rational(fill)] * self.space.size
        for i, v in self.value_map().items():
            filled[i] = v
        return RandomVariable(self.space, tuple(filled))

    def is_constant(self, value: RationalLike) -> bool:
        v = as_rational(value)
        return all(x == v for x in self.values)


def restrict(variable: RandomVariable, event: Event) -> ConditionalVariable:
    """Canonical restriction X|B; values outside B are discarded."""
    variable.space._check(event.space)
    if event.is_empty:
        raise ImpossibleConditioningEvent(
            "cannot condition on the impossible event"
        )
    return ConditionalVariable(
        event, tuple(variable.values[i] for i in sorted(event.members))
    )


def cond_sup(cv: ConditionalVariable) -> Fraction:
    """Exact supremum of X|B, i.e. the max over atoms implying B."""
    return cv.sup()


def cond_inf(cv: ConditionalVariable) -> Fraction:
    return cv.inf()


def zero_given(event: Event) -> ConditionalVariable:
    """The conditional variable 0|B."""
    return ConditionalVariable(event, (Fraction(0),) * len(event.members))


@dataclass(frozen=True)
class Entry:
    """One assessed value: a conditional variable with its lower prevision
    and, optionally, an upper prevision (lower == upper encodes a precise
    assessment).  upper >= lower is deliberately not enforced here; the
    checkers must detect such conflicts."""

    variable: ConditionalVariable
    lower: Fraction
    upper: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", as_rational(self.lower))
        if self.upper is not None:
            object.__setattr__(self, "upper", as_rational(self.upper))

    @property
    def is_precise(self) -> bool:
        return self.upper is not None and self.upper == self.lower


@dataclass(frozen=True)
class Assessment:
    """A finite mapping from conditional variables to assessed previsions."""

    space: PossibilitySpace
    entries: tuple[Entry, ...]
    _index: dict[ConditionalVariable, Entry] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        index: dict[ConditionalVariable, Entry] = {}
        for entry in self.entries:
            entry.variable.space._check(self.space)
            if entry.variable in index:
                raise DuplicateEntry(
                    "assessment already prices this conditional variable"
                )
            index[entry.variable] = entry
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, cv: ConditionalVariable) -> bool:
        return cv in self._index

    def entry_for(self, cv: ConditionalVariable) -> Entry | None:
        return self._index.get(cv)

    def lower(self, cv: ConditionalVariable) -> Fraction:
        entry = self._index.get(cv)
        if entry is None:
            raise KeyError("conditional variable is not assessed")
        return entry.lower

    @property
    def is_precise(self) -> bool:
        return all(e.is_precise for e in self.entries)

    @property
    def is_unconditional(self) -> bool:
        return all(e.variable.cond.is_sure for e in self.entries)

    def conditioning_events(self) -> tuple[Event, ...]:
        seen: list[Event] = []
        for e in self.entries:
            if e.variable.cond not in seen:
                seen.append(e.variable.cond)
        return tuple(seen)

    def with_entry(
        self,
        cv: ConditionalVariable,
        lower: RationalLike,
        upper: RationalLike | None = None,
    ) -> Assessment:
        extra = Entry(cv, as_rational(lower), None if upper is None else as_rational(upper))
        return Assessment(self.space, self.entries + (extra,))

    @classmethod
    def build(
        cls,
        space: PossibilitySpace,
        items: Sequence[tuple[ConditionalVariable, RationalLike]
                        | tuple[ConditionalVariable, RationalLike, RationalLike | None]],
    ) -> Assessment:
        entries = []
        for item in items:
            cv, lower = item[0], as_rational(item[1])
            upper = None
            if len(item) > 2 and item[2] is not None:
                upper = as_rational(item[2])  # type: ignore[arg-type]
            entries.append(Entry(cv, lower, upper))
        return cls(space, tuple(entries))
