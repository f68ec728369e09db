"""Exact arithmetic on extended heights.

An extended height is -1, an ordinal below epsilon_0 written in Cantor normal
form (CNF), or infinity, with -1 < every ordinal < infinity.  Ordinals are
immutable tuples of (exponent, coefficient) terms with strictly descending
exponents and positive integer coefficients; the empty tuple is 0.  All
operations are pure, so values are safe to share across threads.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator

from .errors import DomainError, OrdinalParseError

_TAG_MINUS_ONE = -1
_TAG_ORDINAL = 0
_TAG_INFINITY = 1


class Kind(enum.Enum):
    MINUS_ONE = "minus_one"
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"
    INFINITY = "infinity"


@total_ordering
@dataclass(frozen=True)
class ExtHeight:
    """-1, a CNF ordinal below epsilon_0, or infinity."""

    tag: int
    terms: tuple[tuple["ExtHeight", int], ...] = ()

    def __post_init__(self) -> None:
        if self.tag not in (_TAG_MINUS_ONE, _TAG_ORDINAL, _TAG_INFINITY):
            raise DomainError(f"bad tag {self.tag!r}")
        if self.tag != _TAG_ORDINAL:
            if self.terms:
                raise DomainError("only ordinals carry CNF terms")
            return
        prev = None
        for exponent, coeff in self.terms:
            if not isinstance(exponent, ExtHeight) or exponent.tag != _TAG_ORDINAL:
                raise DomainError("CNF exponents must be ordinals")
            if not isinstance(coeff, int) or coeff < 1:
                raise DomainError("CNF coefficients must be positive integers")
            if prev is not None and not exponent < prev:
                raise DomainError("CNF exponents must be strictly descending")
            prev = exponent

    # Ordering: -1 < ordinals (lexicographic on CNF) < infinity.
    def __lt__(self, other: "ExtHeight") -> bool:
        if not isinstance(other, ExtHeight):
            return NotImplemented
        return compare(self, other) < 0

    @property
    def is_ordinal(self) -> bool:
        return self.tag == _TAG_ORDINAL

    @property
    def is_infinity(self) -> bool:
        return self.tag == _TAG_INFINITY

    @property
    def is_minus_one(self) -> bool:
        return self.tag == _TAG_MINUS_ONE

    @property
    def is_zero(self) -> bool:
        return self.tag == _TAG_ORDINAL and not self.terms

    @property
    def is_finite(self) -> bool:
        """True for 0 and the positive naturals."""
        if self.tag != _TAG_ORDINAL:
            return False
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    def as_int(self) -> int:
        if not self.is_finite:
            raise DomainError(f"{self} is not a finite ordinal")
        return self.terms[0][1] if self.terms else 0

    def literal(self) -> str:
        return format_ordinal(self)

    def __str__(self) -> str:
        return self.literal()

    def __repr__(self) -> str:
        return f"ExtHeight({self.literal()!r})"


MINUS_ONE = ExtHeight(_TAG_MINUS_ONE)
INFINITY = ExtHeight(_TAG_INFINITY)
ZERO = ExtHeight(_TAG_ORDINAL)


def nat(n: int) -> ExtHeight:
    """The finite ordinal n >= 0."""
    if n < 0:
        raise DomainError("naturals are non-negative")
    if n == 0:
        return ZERO
    return ExtHeight(_TAG_ORDINAL, ((ZERO, n),))


ONE = nat(1)


def ordinal(terms) -> ExtHeight:
    """Ordinal from CNF terms (validated by the constructor)."""
    return ExtHeight(_TAG_ORDINAL, tuple(terms))


def omega_power(exponent: ExtHeight, coeff: int = 1) -> ExtHeight:
    if exponent.is_zero:
        return nat(coeff)
    return ordinal(((exponent, coeff),))


OMEGA = omega_power(ONE)


def compare(a: ExtHeight, b: ExtHeight) -> int:
    """-1, 0 or +1; total order on extended heights."""
    if a.tag != b.tag:
        return -1 if a.tag < b.tag else 1
    if a.tag != _TAG_ORDINAL:
        return 0
    for (ea, ma), (eb, mb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c != 0:
            return c
        if ma != mb:
            return -1 if ma < mb else 1
    if len(a.terms) != len(b.terms):
        return -1 if len(a.terms) < len(b.terms) else 1
    return 0


def classify_kind(a: ExtHeight) -> Kind:
    """-1 / 0 / successor / limit / infinity of an extended height."""
    if a.is_minus_one:
        return Kind.MINUS_ONE
    if a.is_infinity:
        return Kind.INFINITY
    if not a.terms:
        return Kind.ZERO
    if a.terms[-1][0].is_zero:
        return Kind.SUCCESSOR
    return Kind.LIMIT


def ord_add(a: ExtHeight, b: ExtHeight) -> ExtHeight:
    """Ordinal addition in CNF; left terms below b's leading exponent are absorbed."""
    if not (a.is_ordinal and b.is_ordinal):
        raise DomainError("ordinal addition needs two ordinals")
    if not b.terms:
        return a
    if not a.terms:
        return b
    lead = b.terms[0][0]
    kept = []
    merged_coeff = 0
    for exponent, coeff in a.terms:
        c = compare(exponent, lead)
        if c > 0:
            kept.append((exponent, coeff))
        elif c == 0:
            merged_coeff = coeff
            break
        else:
            break
    first = (lead, b.terms[0][1] + merged_coeff)
    return ordinal(tuple(kept) + (first,) + b.terms[1:])


def successor(a: ExtHeight) -> ExtHeight:
    if not a.is_ordinal:
        raise DomainError("successor needs an ordinal")
    return ord_add(a, ONE)


def height_minus_one(a: ExtHeight) -> ExtHeight:
    """Predecessor in the scattered-height sense.

    Successors step down; limits and 0 are their own predecessor (the supremum
    of {b : b + 1 <= a}); infinity stays infinity.  Rejects -1.
    """
    kind = classify_kind(a)
    if kind is Kind.MINUS_ONE:
        raise DomainError("-1 has no predecessor")
    if kind in (Kind.INFINITY, Kind.ZERO, Kind.LIMIT):
        return a
    exponent, coeff = a.terms[-1]
    assert exponent.is_zero
    if coeff > 1:
        return ordinal(a.terms[:-1] + ((exponent, coeff - 1),))
    return ordinal(a.terms[:-1])


def fundamental_sequence(a: ExtHeight, n: int) -> ExtHeight:
    """n-th member of the canonical increasing sequence converging to limit a.

    Rules: (g + w^(b+1))[n] = g + w^b * n, and (g + w^d)[n] = g + w^(d[n]) for
    limit d.  Strictly increasing in n with supremum a.
    """
    if classify_kind(a) is not Kind.LIMIT:
        raise DomainError(f"{a} is not a limit ordinal")
    if n < 1:
        raise DomainError("sequence index must be >= 1")
    exponent, coeff = a.terms[-1]
    prefix = a.terms[:-1]
    if coeff > 1:
        prefix = prefix + ((exponent, coeff - 1),)
    if classify_kind(exponent) is Kind.SUCCESSOR:
        tail: tuple = ((height_minus_one(exponent), n),)
    else:
        tail = ((fundamental_sequence(exponent, n), 1),)
    return ordinal(prefix + tail)


# --- literals -------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(w|inf|-1|\d+|[\^*+()])")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise OrdinalParseError(f"unexpected character at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise OrdinalParseError("unexpected end of literal")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.take()
        if got != tok:
            raise OrdinalParseError(f"expected {tok!r}, got {got!r}")

    def parse_sum(self) -> ExtHeight:
        terms = [self.parse_term()]
        while self.peek() == "+":
            self.take()
            terms.append(self.parse_term())
        prev = None
        for exponent, coeff in terms:
            if prev is not None and not compare(exponent, prev) < 0:
                raise OrdinalParseError(
                    "exponents must be strictly descending (input is not in normal form)"
                )
            prev = exponent
        return ordinal(terms)

    def parse_term(self) -> tuple[ExtHeight, int]:
        tok = self.take()
        if tok.isdigit():
            value = int(tok)
            if value == 0:
                raise OrdinalParseError("zero coefficient")
            return (ZERO, value)
        if tok != "w":
            raise OrdinalParseError(f"expected term, got {tok!r}")
        exponent = ONE
        if self.peek() == "^":
            self.take()
            exponent = self.parse_exponent()
        coeff = 1
        if self.peek() == "*":
            self.take()
            num = self.take()
            if not num.isdigit():
                raise OrdinalParseError(f"expected coefficient, got {num!r}")
            coeff = int(num)
            if coeff == 0:
                raise OrdinalParseError("zero coefficient")
        return (exponent, coeff)

    def parse_exponent(self) -> ExtHeight:
        tok = self.peek()
        if tok == "(":
            self.take()
            value = self.parse_sum()
            self.expect(")")
            return value
        tok = self.take()
        if tok == "w":
            return OMEGA
        if tok is not None and tok.isdigit():
            return nat(int(tok))
        raise OrdinalParseError(f"expected exponent, got {tok!r}")


def parse_ordinal(text: str) -> ExtHeight:
    """Parse an extended-height literal ('-1', 'inf', or a CNF sum).

    Grammar: terms 'w^E*m' / 'w^E' / 'w*m' / 'w' / 'm' joined by '+', with
    strictly descending exponents; E is a natural, 'w', or a parenthesized sum.
    Non-normal-form input is rejected rather than normalized.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise OrdinalParseError("empty literal")
    if tokens == ["-1"]:
        return MINUS_ONE
    if tokens == ["inf"]:
        return INFINITY
    if tokens[0] == "0" and len(tokens) == 1:
        return ZERO
    parser = _Parser(tokens)
    value = parser.parse_sum()
    if parser.peek() is not None:
        raise OrdinalParseError(f"trailing input {parser.peek()!r}")
    return value


def _exponent_literal(exponent: ExtHeight) -> str:
    if exponent.is_finite:
        return str(exponent.as_int())
    if exponent == OMEGA:
        return "w"
    return "(" + format_ordinal(exponent) + ")"


def format_ordinal(a: ExtHeight) -> str:
    """Canonical literal for an extended height; inverse of parse_ordinal."""
    if a.is_minus_one:
        return "-1"
    if a.is_infinity:
        return "inf"
    if not a.terms:
        return "0"
    parts = []
    for exponent, coeff in a.terms:
        if exponent.is_zero:
            parts.append(str(coeff))
            continue
        piece = "w"
        if exponent != ONE:
            piece += "^" + _exponent_literal(exponent)
        if coeff != 1:
            piece += f"*{coeff}"
        parts.append(piece)
    return "+".join(parts)


def iter_cnf_grid(max_exponent: int, max_coeff: int) -> Iterator[ExtHeight]:
    """All ordinals whose CNF uses exponents <= max_exponent and coefficients
    <= max_coeff (finite exponents only).  Includes 0."""
    exponents = [nat(e) for e in range(max_exponent, -1, -1)]

    def build(idx: int, current: tuple) -> Iterator[tuple]:
        if idx == len(exponents):
            yield current
            return
        yield from build(idx + 1, current)
        for coeff in range(1, max_coeff + 1):
            yield from build(idx + 1, current + ((exponents[idx], coeff),))

    for terms in build(0, ()):
        yield ordinal(terms)
