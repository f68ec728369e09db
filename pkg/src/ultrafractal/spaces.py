"""Symbolic Cantor-Bendixson calculus on compact ordinal intervals.

Spaces are the closed intervals [0, gamma] of ordinals (gamma in CNF) plus a
distinguished Cantor token standing in for the uncountable zero-dimensional
case.  Every countable compact Hausdorff space is homeomorphic to such an
interval, so nothing is lost at this scale.  Derivatives, heights and
decompositions are computed on the CNF of gamma, never on point sets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DomainError, OrdinalParseError
from .ordinals import (
    ExtHeight,
    INFINITY,
    Kind,
    ZERO,
    classify_kind,
    height_minus_one,
    nat,
    ordinal,
    parse_ordinal,
)


@dataclass(frozen=True)
class Space:
    kind: str  # "empty" | "interval" | "cantor"
    gamma: ExtHeight | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("empty", "interval", "cantor"):
            raise DomainError(f"bad space kind {self.kind!r}")
        if self.kind == "interval":
            if self.gamma is None or not self.gamma.is_ordinal:
                raise DomainError("interval endpoint must be an ordinal >= 0")
        elif self.gamma is not None:
            raise DomainError(f"{self.kind} space carries no endpoint")

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def is_cantor(self) -> bool:
        return self.kind == "cantor"

    def literal(self) -> str:
        if self.kind == "interval":
            return self.gamma.literal()
        return self.kind

    def __repr__(self) -> str:
        return f"Space({self.literal()!r})"


EMPTY = Space("empty")
CANTOR = Space("cantor")


def interval(gamma: ExtHeight) -> Space:
    return Space("interval", gamma)


def parse_space(text: str) -> Space:
    """Space literal: an ordinal literal (meaning [0, gamma]) or 'cantor'."""
    stripped = text.strip()
    if stripped == "cantor":
        return CANTOR
    gamma = parse_ordinal(stripped)
    if not gamma.is_ordinal:
        raise OrdinalParseError("interval endpoint must be an ordinal >= 0")
    return interval(gamma)


@dataclass(frozen=True)
class ScatteredHeight:
    """Height plus the size of the top derived set; multiplicity None = infinite."""

    height: ExtHeight
    multiplicity: int | None

    def multiplicity_literal(self) -> str:
        return "inf" if self.multiplicity is None else str(self.multiplicity)


class Verdict(enum.Enum):
    BANACH_ULTRAFRACTAL = "BanachUltrafractal"
    NOT_TOPOLOGICAL_FRACTAL = "NotTopologicalFractal"


def derived_set(space: Space) -> Space:
    """One symbolic derivation step (the set of non-isolated points).

    On CNF terms: the exponent-0 term is dropped, successor exponents step
    down, limit exponents stay.  The quotient delta then names the result:
    empty for 0, [0, delta-1] for finite delta, [0, delta] for infinite delta.
    Cantor and the empty space are fixed.
    """
    if space.kind != "interval":
        return space
    new_terms = []
    for exponent, coeff in space.gamma.terms:
        kind = classify_kind(exponent)
        if kind is Kind.ZERO:
            continue
        if kind is Kind.SUCCESSOR:
            new_terms.append((height_minus_one(exponent), coeff))
        else:
            new_terms.append((exponent, coeff))
    delta = ordinal(new_terms)
    if delta.is_zero:
        return EMPTY
    if delta.is_finite:
        return interval(nat(delta.as_int() - 1))
    return interval(delta)


def scattered_height(space: Space) -> ScatteredHeight:
    """Closed-formula scattered height: the leading CNF exponent, with the
    leading coefficient as multiplicity.  Cantor reports (inf, inf)."""
    if space.is_empty:
        raise DomainError("the empty space has no scattered height")
    if space.is_cantor:
        return ScatteredHeight(INFINITY, None)
    if space.gamma.is_zero:
        return ScatteredHeight(ZERO, 1)
    exponent, coeff = space.gamma.terms[0]
    return ScatteredHeight(exponent, coeff)


def is_unital(space: Space) -> bool:
    """Uncountable, or countable with a singleton top derived set."""
    if space.is_empty:
        raise DomainError("the empty space is not classified")
    if space.is_cantor:
        return True
    return scattered_height(space).multiplicity == 1


def unital_decomposition(space: Space) -> list[Space]:
    """Split [0, w^a*m + rho] into (m-1) copies of [0, w^a] plus [0, w^a + rho].

    Every piece is unital with the input's scattered height, and the pieces'
    endpoints sum (ordinal addition, left to right) back to the input's.
    Cantor is already unital and returns itself.
    """
    if space.is_empty:
        raise DomainError("cannot decompose the empty space")
    if space.is_cantor:
        return [CANTOR]
    gamma = space.gamma
    if gamma.is_zero:
        return [space]
    (exponent, coeff), rest = gamma.terms[0], gamma.terms[1:]
    head = interval(ordinal(((exponent, 1),)))
    last = interval(ordinal(((exponent, 1),) + rest))
    return [head] * (coeff - 1) + [last]


def classify_fractal(space: Space) -> Verdict:
    """Self-similar or not, by the kind of the scattered height.

    Exactly the limit heights fail; infinity, 0 and successors admit a
    disjoint contracting self-covering.
    """
    if space.is_empty:
        raise DomainError("the empty space is not classified")
    kind = classify_kind(scattered_height(space).height)
    if kind is Kind.LIMIT:
        return Verdict.NOT_TOPOLOGICAL_FRACTAL
    return Verdict.BANACH_ULTRAFRACTAL
