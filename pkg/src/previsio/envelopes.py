"""Credal-set geometry: dominating previsions and envelope constructors.

The credal set of an assessment is the polytope of probability vectors
p with, for every assessed X|B, sum_w p(w)B(w)X(w) >= LP(X|B) *
sum_w p(w)B(w) (and the conjugate inequality when an upper prevision is
given).  Vertices are enumerated by the double description method:
start from the probability simplex and cut one halfspace at a time,
keeping satisfying vertices and the cuts of edges between kept and
dropped ones.

Dominating previsions conditional on an event only make sense when the
event has positive probability, so the polytope is built either under
P(B) >= delta for a user-chosen delta > 0, or as the closed polytope
with a post-filter discarding vertices with P(B) = 0.  Emptiness in
these regimes does not prove incoherence; it is reported as a distinct
error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .checkers import check_df_precise_conditional
from .errors import (
    DimensionLimitExceeded,
    EmptyCredalSet,
    MemberNotCoherent,
    ZeroProbabilityConditioning,
)
from .model import (
    Assessment,
    ConditionalVariable,
    Event,
    PossibilitySpace,
    RationalLike,
    as_rational,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

MAX_ATOMS = 8


@dataclass(frozen=True)
class HalfSpace:
    """coeffs . p >= rhs"""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction

    def slack(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * x for a, x in zip(self.coeffs, point)), _ZERO) - self.rhs


@dataclass(frozen=True)
class CredalSet:
    space: PossibilitySpace
    vertices: tuple[tuple[Fraction, ...], ...]
    constraints: tuple[HalfSpace, ...]

    def per_entry_min(self, assessment: Assessment) -> dict[ConditionalVariable, Fraction]:
        """Pointwise minimum of the conditional previsions of the
        vertices on the assessed domain."""
        out: dict[ConditionalVariable, Fraction] = {}
        for entry in assessment.entries:
            values = []
            for vertex in self.vertices:
                value = _conditional_prevision(vertex, entry.variable)
                if value is not None:
                    values.append(value)
            if values:
                out[entry.variable] = min(values)
        return out


def _conditional_prevision(
    p: Sequence[Fraction], cv: ConditionalVariable
) -> Fraction | None:
    mass = sum((p[i] for i in cv.cond.members), _ZERO)
    if mass == 0:
        return None
    scaled = sum((p[i] * v for i, v in cv.value_map().items()), _ZERO)
    return scaled / mass


def _simplex_vertices(n: int) -> list[tuple[Fraction, ...]]:
    return [
        tuple(_ONE if j == i else _ZERO for j in range(n)) for i in range(n)
    ]


def _tight_set(point: Sequence[Fraction], halfspaces: Sequence[HalfSpace]) -> frozenset[int]:
    tight = {i for i, h in enumerate(halfspaces) if h.slack(point) == 0}
    tight |= {
        len(halfspaces) + j for j, x in enumerate(point) if x == 0
    }
    return frozenset(tight)


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next(
            (r for r in range(rank, len(rows)) if rows[r][col] != 0), None
        )
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [a * inv for a in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _adjacent(
    a: tuple[Fraction, ...],
    b: tuple[Fraction, ...],
    tight_a: frozenset[int],
    tight_b: frozenset[int],
    halfspaces: Sequence[HalfSpace],
    n: int,
) -> bool:
    common = tight_a & tight_b
    rows = []
    for idx in common:
        if idx < len(halfspaces):
            rows.append(list(halfspaces[idx].coeffs))
        else:
            j = idx - len(halfspaces)
            rows.append([_ONE if c == j else _ZERO for c in range(n)])
    if not rows:
        return n - 1 <= 1
    # on the simplex the ambient affine dimension is n - 1; an edge
    # needs n - 2 independent tight constraints besides the simplex
    return _rank(rows) >= n - 2


def _cut(
    vertices: list[tuple[Fraction, ...]],
    halfspace: HalfSpace,
    halfspaces_so_far: list[HalfSpace],
    n: int,
) -> list[tuple[Fraction, ...]]:
    slacks = [halfspace.slack(v) for v in vertices]
    kept = [v for v, s in zip(vertices, slacks) if s >= 0]
    if len(kept) == len(vertices):
        return kept
    tights = {
        v: _tight_set(v, halfspaces_so_far) for v in vertices
    }
    for above, s_above in zip(vertices, slacks):
        if s_above <= 0:
            continue
        for below, s_below in zip(vertices, slacks):
            if s_below >= 0:
                continue
            if not _adjacent(
                above, below, tights[above], tights[below], halfspaces_so_far, n
            ):
                continue
            t = s_above / (s_above - s_below)
            point = tuple(
                a + t * (b - a) for a, b in zip(above, below)
            )
            if point not in kept:
                kept.append(point)
    return kept


def _enumerate_vertices(
    n: int, halfspaces: Sequence[HalfSpace]
) -> list[tuple[Fraction, ...]]:
    vertices = _simplex_vertices(n)
    processed: list[HalfSpace] = []
    for halfspace in halfspaces:
        vertices = _cut(vertices, halfspace, processed, n)
        processed.append(halfspace)
        if not vertices:
            return []
    return sorted(vertices)


def domination_constraints(assessment: Assessment) -> list[HalfSpace]:
    out: list[HalfSpace] = []
    n = assessment.space.size
    for entry in assessment.entries:
        cv = entry.variable
        members = cv.cond.members
        values = cv.value_map()
        lower_row = [
            (values[i] - entry.lower) if i in members else _ZERO for i in range(n)
        ]
        out.append(HalfSpace(tuple(lower_row), _ZERO))
        if entry.upper is not None and entry.upper != entry.lower:
            upper_row = [
                (entry.upper - values[i]) if i in members else _ZERO
                for i in range(n)
            ]
            out.append(HalfSpace(tuple(upper_row), _ZERO))
    return out


def credal_polytope(
    assessment: Assessment,
    positivity: Sequence[Event] | None = None,
    *,
    mode: str = "filter",
    delta: RationalLike | None = None,
) -> CredalSet:
    """Vertices of the dominating credal set.

    `positivity` lists the events whose probability must be positive
    (default: all conditioning events of the assessment).  With
    mode="delta" the polytope carries P(B) >= delta for a rational
    delta > 0; with mode="filter" the closed polytope is enumerated and
    vertices giving some listed event probability zero are discarded.
    """
    space = assessment.space
    if space.size > MAX_ATOMS:
        raise DimensionLimitExceeded(
            f"vertex enumeration is capped at {MAX_ATOMS} atoms"
        )
    if mode not in ("filter", "delta"):
        raise ValueError(f"unknown positivity mode {mode!r}")
    required = list(positivity) if positivity is not None else [
        e for e in assessment.conditioning_events() if not e.is_sure
    ]
    halfspaces = domination_constraints(assessment)
    if mode == "delta":
        if delta is None:
            raise ValueError("delta mode needs a rational delta > 0")
        d = as_rational(delta)
        if d <= 0:
            raise ValueError("delta must be positive")
        for event in required:
            row = [
                _ONE if i in event.members else _ZERO for i in range(space.size)
            ]
            halfspaces.append(HalfSpace(tuple(row), d))
    vertices = _enumerate_vertices(space.size, halfspaces)
    if mode == "filter":
        vertices = [
            v
            for v in vertices
            if all(
                sum((v[i] for i in event.members), _ZERO) > 0
                for event in required
            )
        ]
    if not vertices:
        raise EmptyCredalSet(
            "no dominating prevision exists in the requested positivity "
            "regime (this alone does not prove incoherence)"
        )
    return CredalSet(space, tuple(vertices), tuple(halfspaces))


# ---------------------------------------------------------------------------
# envelope constructors


def _probability_vector(
    space: PossibilitySpace, p: Sequence[RationalLike]
) -> tuple[Fraction, ...]:
    vec = tuple(as_rational(x) for x in p)
    if len(vec) != space.size:
        raise ValueError("one probability per atom is required")
    if any(x < 0 for x in vec) or sum(vec) != 1:
        raise MemberNotCoherent("not a probability vector")
    return vec


def _member_prevision(
    space: PossibilitySpace, p: Sequence[Fraction], cv: ConditionalVariable
) -> Fraction:
    value = _conditional_prevision(p, cv)
    if value is None:
        raise ZeroProbabilityConditioning(
            "a member gives zero probability to a conditioning event"
        )
    return value


def _member_assessment(
    space: PossibilitySpace,
    p: Sequence[Fraction],
    domain: Sequence[ConditionalVariable],
) -> Assessment:
    items = []
    for cv in domain:
        value = _member_prevision(space, p, cv)
        items.append((cv, value, value))
    return Assessment.build(space, items)


def lower_envelope(
    space: PossibilitySpace,
    members: Sequence[Sequence[RationalLike]],
    domain: Sequence[ConditionalVariable],
    *,
    check_members: bool = True,
) -> Assessment:
    """Pointwise minimum of finitely many precise conditional previsions,
    each given as a probability vector with positive mass on every
    conditioning event."""
    if not members:
        raise ValueError("an envelope needs at least one member")
    vectors = [_probability_vector(space, p) for p in members]
    if check_members:
        for p in vectors:
            verdict = check_df_precise_conditional(
                _member_assessment(space, p, domain)
            )
            if not verdict.passed:
                raise MemberNotCoherent(
                    "an envelope member is not a dF-coherent prevision"
                )
    items = []
    for cv in domain:
        value = min(_member_prevision(space, p, cv) for p in vectors)
        items.append((cv, value))
    return Assessment.build(space, items)


@dataclass(frozen=True)
class ConvexEnvelope:
    assessment: Assessment
    centered: bool


def convex_envelope(
    space: PossibilitySpace,
    members: Sequence[Sequence[RationalLike]],
    alphas: Sequence[RationalLike],
    domain: Sequence[ConditionalVariable],
) -> ConvexEnvelope:
    """The alpha-shifted envelope: LP(X|B) = min_P [P(X|B) + a(P)/P(B)].

    Always a convex conditional lower prevision; centered exactly when
    min_P a(P)/P(B) = 0 for every conditioning event of the domain.
    """
    if not members:
        raise ValueError("an envelope needs at least one member")
    if len(alphas) != len(members):
        raise ValueError("one alpha per member is required")
    vectors = [_probability_vector(space, p) for p in members]
    shifts = [as_rational(a) for a in alphas]
    items = []
    for cv in domain:
        value = min(
            _member_prevision(space, p, cv)
            + a / sum((p[i] for i in cv.cond.members), _ZERO)
            for p, a in zip(vectors, shifts)
        )
        items.append((cv, value))
    events: list[Event] = []
    for cv in domain:
        if cv.cond not in events:
            events.append(cv.cond)
    centered = all(
        min(
            a / sum((p[i] for i in event.members), _ZERO)
            for p, a in zip(vectors, shifts)
        )
        == 0
        for event in events
    )
    return ConvexEnvelope(Assessment.build(space, items), centered)
