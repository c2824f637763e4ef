"""Decidable Boolean algebra of definable subsets of a ground set.

The ground set is either a finite initial segment {0, ..., n-1} or all of
the naturals.  Over the naturals a definable set is eventually periodic:
membership is given bit-by-bit below a threshold and by a residue pattern
from the threshold on.  The pair (threshold, period) is canonicalized to
the unique minimal description, so structural equality of two DefSets is
extensional equality.

Sets combine under union, intersection, difference and complement without
leaving the class, which is what makes every question about a finitely
generated subalgebra decidable: the atoms below a finite generator list
can be enumerated outright.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    AtomCapExceeded,
    GroundMismatch,
    OutOfGround,
    ParseError,
    PeriodOverflow,
    UnknownName,
)

PERIOD_CAP = 1 << 20
GENERATOR_CAP = 16


@dataclass(frozen=True)
class Ground:
    """Point universe: Ground(n) is {0,...,n-1}, Ground(None) is the naturals."""

    size: int | None = None

    def __post_init__(self):
        if self.size is not None and self.size < 0:
            raise ValueError("finite ground needs size >= 0")

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        return self.size is None or n < self.size

    def __repr__(self) -> str:
        return "omega" if self.size is None else f"finite({self.size})"


OMEGA = Ground(None)


def _divisors(p: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= p:
        if p % d == 0:
            small.append(d)
            if d != p // d:
                large.append(p // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class DefSet:
    """One definable set in canonical form.

    Finite ground: `low` is the membership bitmask on [0, size), with
    threshold == size, period == 1, residues == 0.  Infinite ground:
    membership of m is bit m of `low` for m < threshold and bit
    (m mod period) of `residues` otherwise; (threshold, period) is the
    componentwise minimum over all valid descriptions.  __post_init__
    canonicalizes, so any valid description may be passed in.
    """

    ground: Ground
    low: int
    threshold: int
    period: int = 1
    residues: int = 0

    def __post_init__(self):
        if self.threshold < 0 or self.period < 1:
            raise ValueError("need threshold >= 0 and period >= 1")
        if self.low < 0 or self.low >> self.threshold:
            raise ValueError("low mask has bits at or above the threshold")
        if self.residues < 0 or self.residues >> self.period:
            raise ValueError("residue mask has bits at or above the period")
        if self.period > PERIOD_CAP:
            raise PeriodOverflow(f"period {self.period} exceeds cap {PERIOD_CAP}")
        if self.ground.is_finite:
            if self.threshold != self.ground.size or self.period != 1 or self.residues:
                raise ValueError("finite-ground sets are plain bitmasks over the ground")
            return
        low, t, p, res = _canonical(self.low, self.threshold, self.period, self.residues)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "threshold", t)
        object.__setattr__(self, "period", p)
        object.__setattr__(self, "residues", res)

    # -- constructors ------------------------------------------------

    @staticmethod
    def from_members(ground: Ground, members: Iterable[int]) -> "DefSet":
        """Finite collection of points, e.g. {1, 3, 7}."""
        mask = 0
        for m in members:
            if m not in ground:
                raise OutOfGround(f"{m} is not in {ground!r}")
            mask |= 1 << m
        if ground.is_finite:
            return DefSet(ground, mask, ground.size)
        return DefSet(ground, mask, mask.bit_length())

    @staticmethod
    def arithmetic(ground: Ground, start: int, step: int) -> "DefSet":
        """ap(start, step): the progression {start, start+step, ...} in the ground."""
        if start < 0 or step < 1:
            raise ValueError("need start >= 0 and step >= 1")
        if ground.is_finite:
            return DefSet.from_members(ground, range(start, ground.size, step))
        if step > PERIOD_CAP:
            raise PeriodOverflow(f"period {step} exceeds cap {PERIOD_CAP}")
        return DefSet(ground, 0, start, step, 1 << (start % step))

    @staticmethod
    def tail(ground: Ground, t: int) -> "DefSet":
        """All points >= t."""
        if t < 0:
            raise ValueError("need t >= 0")
        if ground.is_finite:
            return DefSet.from_members(ground, range(t, ground.size))
        return DefSet(ground, 0, t, 1, 1)

    @staticmethod
    def empty(ground: Ground) -> "DefSet":
        if ground.is_finite:
            return DefSet(ground, 0, ground.size)
        return DefSet(ground, 0, 0)

    @staticmethod
    def full(ground: Ground) -> "DefSet":
        if ground.is_finite:
            return DefSet(ground, (1 << ground.size) - 1, ground.size)
        return DefSet(ground, 0, 0, 1, 1)

    @staticmethod
    def from_predicate(ground: Ground, pred: Callable[[int], bool],
                       threshold: int, period: int = 1) -> "DefSet":
        """Sample pred on one full window; pred must be (threshold, period)-described."""
        if ground.is_finite:
            mask = sum(1 << m for m in range(ground.size) if pred(m))
            return DefSet(ground, mask, ground.size)
        if period > PERIOD_CAP:
            raise PeriodOverflow(f"period {period} exceeds cap {PERIOD_CAP}")
        low = sum(1 << m for m in range(threshold) if pred(m))
        res = sum(1 << r for r in range(period)
                  if pred(threshold + ((r - threshold) % period)))
        return DefSet(ground, low, threshold, period, res)

    # -- membership and structure ------------------------------------

    def __contains__(self, n: int) -> bool:
        if n not in self.ground:
            raise OutOfGround(f"{n} is not in {self.ground!r}")
        if n < self.threshold:
            return bool((self.low >> n) & 1)
        return bool((self.residues >> (n % self.period)) & 1)

    @property
    def is_empty(self) -> bool:
        return self.low == 0 and self.residues == 0

    def members_below(self, n: int) -> list[int]:
        """The members in [0, n); n may exceed a finite ground's size."""
        if self.ground.is_finite:
            n = min(n, self.ground.size)
        return [m for m in range(n) if m in self]

    def __and__(self, other: "DefSet") -> "DefSet":
        return ds_combine("inter", self, other)

    def __or__(self, other: "DefSet") -> "DefSet":
        return ds_combine("union", self, other)

    def __sub__(self, other: "DefSet") -> "DefSet":
        return ds_combine("diff", self, other)

    def __invert__(self) -> "DefSet":
        return ds_combine("complement", self)

    def __repr__(self) -> str:
        return f"DefSet({self.describe()!r})"

    def describe(self) -> str:
        """Render as a parseable set expression (round-trips through parse_set_expr)."""
        if self.ground.is_finite:
            return "{" + ",".join(str(m) for m in self.members_below(self.ground.size)) + "}"
        parts = []
        lows = [m for m in range(self.threshold) if (self.low >> m) & 1]
        if lows:
            parts.append("{" + ",".join(map(str, lows)) + "}")
        if self.residues and self.residues == (1 << self.period) - 1:
            parts.append(f"tail({self.threshold})")
        else:
            t, p = self.threshold, self.period
            for r in range(p):
                if (self.residues >> r) & 1:
                    parts.append(f"ap({t + ((r - t) % p)},{p})")
        return "|".join(parts) if parts else "{}"


def _canonical(low: int, t: int, p: int, res: int) -> tuple[int, int, int, int]:
    """Minimize (threshold, period) without changing pointwise membership.

    Eventual periods of a set are closed under gcd, so the minimal one
    divides any valid period; it is found among the divisors of p.  The
    threshold then shrinks while the last explicit bit already matches
    the tail pattern.
    """
    for d in _divisors(p):
        if d == p:
            break
        shrunk = res & ((1 << d) - 1)
        if all(((res >> r) & 1) == ((shrunk >> (r % d)) & 1) for r in range(p)):
            res, p = shrunk, d
            break
    while t > 0:
        m = t - 1
        if ((low >> m) & 1) != ((res >> (m % p)) & 1):
            break
        t = m
        low &= (1 << t) - 1
    return low, t, p, res


def ds_member(s: DefSet, n: int) -> bool:
    return n in s


def _tail_bit(s: DefSet, m: int) -> int:
    if m < s.threshold:
        return (s.low >> m) & 1
    return (s.residues >> (m % s.period)) & 1


_OPS: dict[str, Callable[[int, int], int]] = {
    "union": lambda a, b: a | b,
    "inter": lambda a, b: a & b,
    "diff": lambda a, b: a & ~b & 1,
}


def ds_combine(op: str, a: DefSet, b: DefSet | None = None) -> DefSet:
    """Boolean combination; op is union, inter, diff or complement."""
    if op == "complement":
        if b is not None:
            raise ValueError("complement takes one operand")
        if a.ground.is_finite:
            full = (1 << a.ground.size) - 1
            return DefSet(a.ground, a.low ^ full, a.threshold)
        return DefSet(a.ground, a.low ^ ((1 << a.threshold) - 1), a.threshold,
                      a.period, a.residues ^ ((1 << a.period) - 1))
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    if b is None:
        raise ValueError(f"{op} takes two operands")
    if a.ground != b.ground:
        raise GroundMismatch(f"{a.ground!r} vs {b.ground!r}")
    f = _OPS[op]
    if a.ground.is_finite:
        mask = (1 << a.ground.size) - 1
        low = sum(1 << m for m in range(a.ground.size)
                  if f((a.low >> m) & 1, (b.low >> m) & 1)) & mask
        return DefSet(a.ground, low, a.ground.size)
    t = max(a.threshold, b.threshold)
    p = math.lcm(a.period, b.period)
    if p > PERIOD_CAP:
        raise PeriodOverflow(f"lcm({a.period}, {b.period}) = {p} exceeds cap {PERIOD_CAP}")
    low = sum(1 << m for m in range(t) if f(_tail_bit(a, m), _tail_bit(b, m)))
    res = sum(1 << r for r in range(p)
              if f((a.residues >> (r % a.period)) & 1, (b.residues >> (r % b.period)) & 1))
    return DefSet(a.ground, low, t, p, res)


@dataclass(frozen=True)
class SetRelation:
    """Decision record for a pair of sets over one ground."""

    equal: bool
    subset: bool
    superset: bool
    disjoint: bool

    @property
    def incomparable(self) -> bool:
        return not self.subset and not self.superset


def ds_compare(a: DefSet, b: DefSet) -> SetRelation:
    if a.ground != b.ground:
        raise GroundMismatch(f"{a.ground!r} vs {b.ground!r}")
    subset = ds_combine("diff", a, b).is_empty
    superset = ds_combine("diff", b, a).is_empty
    disjoint = ds_combine("inter", a, b).is_empty
    equal = subset and superset
    assert equal == (a == b), "canonical forms must agree with extensional equality"
    return SetRelation(equal, subset, superset, disjoint)


@dataclass(frozen=True)
class AlgebraBasis:
    """Finite generator list for a subalgebra, with a hard count cap."""

    generators: tuple[DefSet, ...]
    cap: int = GENERATOR_CAP

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(self.generators) > self.cap:
            raise AtomCapExceeded(
                f"{len(self.generators)} generators exceed the cap of {self.cap}")
        grounds = {g.ground for g in self.generators}
        if len(grounds) > 1:
            raise GroundMismatch("generators span several grounds")

    @property
    def ground(self) -> Ground | None:
        return self.generators[0].ground if self.generators else None


def atoms_of(basis: AlgebraBasis, ground: Ground | None = None) -> list[DefSet]:
    """Atoms of the generated algebra, in signature order.

    Each atom is the nonempty intersection of every generator or its
    complement; the branch order (generator before complement) makes the
    output order the lexicographic order of those choice vectors.  Empty
    partial intersections are pruned, so the cost is bounded by the atom
    count times the generator count rather than 2**k.  An empty basis
    yields the ground itself as the single atom, or nothing over an
    empty ground.
    """
    g = basis.ground or ground
    if g is None:
        raise ValueError("an empty basis needs an explicit ground")
    if basis.ground is not None and ground is not None and ground != basis.ground:
        raise GroundMismatch(f"{ground!r} vs {basis.ground!r}")
    gens = basis.generators
    out: list[DefSet] = []

    def descend(i: int, cell: DefSet) -> None:
        if cell.is_empty:
            return
        if i == len(gens):
            out.append(cell)
            return
        descend(i + 1, ds_combine("inter", cell, gens[i]))
        descend(i + 1, ds_combine("diff", cell, gens[i]))

    descend(0, DefSet.full(g))
    return out


# -- set expression parser -------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([{}(),&|!]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = len(text) - len(stripped) + 1
            raise ParseError(f"unexpected character {stripped[0]!r}", col=col)
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1) + 1))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2) + 1))
        else:
            toks.append(("punct", m.group(3), m.start(3) + 1))
        pos = m.end()
    return toks


class _ExprParser:
    """Recursive descent over: expr := term ('|' term)*, term := factor ('&' factor)*,
    factor := '!' factor | '{...}' | ap(s,p) | tail(t) | name | '(' expr ')'."""

    def __init__(self, text: str, ground: Ground, names: Mapping[str, DefSet]):
        self.toks = _tokenize(text)
        self.i = 0
        self.ground = ground
        self.names = names
        self.end_col = len(text) + 1

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind: str, value: str | None = None):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {value or kind}, found end of expression",
                             col=self.end_col)
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}", col=tok[2])
        self.i += 1
        return tok

    def parse(self) -> DefSet:
        out = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"trailing {tok[1]!r}", col=tok[2])
        return out

    def expr(self) -> DefSet:
        out = self.term()
        while (tok := self.peek()) and tok[:2] == ("punct", "|"):
            self.i += 1
            out = ds_combine("union", out, self.term())
        return out

    def term(self) -> DefSet:
        out = self.factor()
        while (tok := self.peek()) and tok[:2] == ("punct", "&"):
            self.i += 1
            out = ds_combine("inter", out, self.factor())
        return out

    def factor(self) -> DefSet:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected a set expression", col=self.end_col)
        if tok[:2] == ("punct", "!"):
            self.i += 1
            return ds_combine("complement", self.factor())
        if tok[:2] == ("punct", "("):
            self.i += 1
            out = self.expr()
            self.take("punct", ")")
            return out
        if tok[:2] == ("punct", "{"):
            return self.literal()
        if tok[0] == "name":
            self.i += 1
            if tok[1] == "ap":
                self.take("punct", "(")
                s = int(self.take("num")[1])
                self.take("punct", ",")
                p = int(self.take("num")[1])
                self.take("punct", ")")
                if p < 1:
                    raise ParseError("ap needs step >= 1", col=tok[2])
                return DefSet.arithmetic(self.ground, s, p)
            if tok[1] == "tail":
                self.take("punct", "(")
                t = int(self.take("num")[1])
                self.take("punct", ")")
                return DefSet.tail(self.ground, t)
            if tok[1] in self.names:
                named = self.names[tok[1]]
                if named.ground != self.ground:
                    raise GroundMismatch(f"{tok[1]} is over {named.ground!r}")
                return named
            raise UnknownName(f"unknown set name {tok[1]!r}")
        raise ParseError(f"unexpected {tok[1]!r}", col=tok[2])

    def literal(self) -> DefSet:
        open_tok = self.take("punct", "{")
        members = []
        tok = self.peek()
        if tok is not None and tok[:2] == ("punct", "}"):
            self.i += 1
            return DefSet.from_members(self.ground, members)
        while True:
            members.append(int(self.take("num")[1]))
            tok = self.peek()
            if tok is None:
                raise ParseError("unterminated set literal", col=open_tok[2])
            if tok[:2] == ("punct", ","):
                self.i += 1
                continue
            if tok[:2] == ("punct", "}"):
                self.i += 1
                return DefSet.from_members(self.ground, members)
            raise ParseError(f"expected ',' or '}}', found {tok[1]!r}", col=tok[2])


def parse_set_expr(text: str, ground: Ground,
                   names: Mapping[str, DefSet] | None = None) -> DefSet:
    """Parse a set expression such as '{1,3}|ap(0,2)&!tail(9)' over the ground."""
    return _ExprParser(text, ground, names or {}).parse()
