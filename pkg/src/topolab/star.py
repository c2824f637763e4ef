"""Fragment model of the extension of a presented space.

A presentation picks a ground set, finitely many definable opens (the
subbase) and finitely many sample points.  The model's points are the
atoms of the algebra generated by the subbase together with the sample
singletons; the model topology is generated by the star sets of the
fragment opens.  Standard points are the singleton atoms of samples, so
the ground embeds where it is sampled, and every Boolean identity of the
star map is machine-checkable by quantifying over atoms.

Definable ground-to-ground maps extend to atom maps functorially; the
preimage of every target generator must land in (the algebra of) the
source, which is what replaces measurability at this scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import fintop
from .errors import (
    AmbiguousImage,
    AtomCapExceeded,
    GroundMismatch,
    NotInAlgebra,
    PeriodOverflow,
    PreimageNotInAlgebra,
    SampleImageNotSample,
    SampleNotInGround,
)
from .fintop import FinSpace, generate_topology
from .setalg import (
    GENERATOR_CAP,
    PERIOD_CAP,
    AlgebraBasis,
    DefSet,
    Ground,
    atoms_of,
    ds_combine,
    ds_compare,
)


@dataclass(frozen=True)
class SpacePresentation:
    """Ground set, subbase of definable opens, and designated sample points."""

    ground: Ground
    subbase: tuple[DefSet, ...]
    samples: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "subbase", tuple(self.subbase))
        object.__setattr__(self, "samples", tuple(self.samples))
        for g in self.subbase:
            if g.ground != self.ground:
                raise GroundMismatch(f"subbase set over {g.ground!r}, not {self.ground!r}")
        seen = set()
        for s in self.samples:
            if s in seen:
                raise ValueError(f"duplicate sample {s}")
            seen.add(s)
            if s not in self.ground:
                raise SampleNotInGround(f"sample {s} outside {self.ground!r}")

    def sample_misses(self) -> list[int]:
        """Indices of nonempty subbase sets containing no sample (warning-level)."""
        return [i for i, g in enumerate(self.subbase)
                if not g.is_empty and not any(s in g for s in self.samples)]


@dataclass(frozen=True)
class StarModel:
    """Atoms, their space under the star topology, and the sample embedding.

    labels[i] is the sample whose singleton is atom i, or None for a
    nonstandard atom; by construction no atom properly contains a sample.
    """

    presentation: SpacePresentation
    atoms: tuple[DefSet, ...]
    space: FinSpace
    embedding: tuple[int, ...]
    labels: tuple[int | None, ...]

    @property
    def standard_mask(self) -> int:
        out = 0
        for i in self.embedding:
            out |= 1 << i
        return out

    def union_of(self, mask: int) -> DefSet:
        """The ground set that a mask of atoms stands for."""
        out = DefSet.empty(self.presentation.ground)
        for i in range(len(self.atoms)):
            if (mask >> i) & 1:
                out = ds_combine("union", out, self.atoms[i])
        return out

    def atom_of_sample(self, s: int) -> int:
        return self.embedding[self.presentation.samples.index(s)]


def build_star(p: SpacePresentation, cap: int | None = None) -> StarModel:
    """Construct the fragment model of p.

    Atoms come from the subbase plus one singleton per sample, so each
    sample owns an atom and the embedding is injective.  Model opens are
    the star masks of the fragment topology, i.e. of the closure of the
    subbase under intersection and union with the empty and full sets.
    """
    cap = GENERATOR_CAP if cap is None else cap
    singles = tuple(DefSet.from_members(p.ground, (s,)) for s in p.samples)
    gens = p.subbase + singles
    if len(gens) > cap:
        raise AtomCapExceeded(f"{len(gens)} generators (subbase + samples) exceed cap {cap}")
    atoms = tuple(atoms_of(AlgebraBasis(gens, cap=cap), p.ground))
    index = {a: i for i, a in enumerate(atoms)}
    n = len(atoms)

    def mask_of(ds: DefSet) -> int:
        out = 0
        for i, a in enumerate(atoms):
            if ds_combine("diff", a, ds).is_empty:
                out |= 1 << i
        return out

    space = generate_topology(n, [mask_of(g) for g in p.subbase])
    embedding = tuple(index[s] for s in singles)
    labels: list[int | None] = [None] * n
    for pos, s in enumerate(p.samples):
        labels[embedding[pos]] = s
    return StarModel(p, atoms, space, embedding, tuple(labels))


def star_of(m: StarModel, a: DefSet) -> int:
    """Atoms below a, as a mask; a must be a union of atoms (algebra member)."""
    if a.ground != m.presentation.ground:
        raise GroundMismatch(f"{a.ground!r} vs {m.presentation.ground!r}")
    mask = 0
    for i, atom in enumerate(m.atoms):
        if ds_combine("diff", atom, a).is_empty:
            mask |= 1 << i
    if m.union_of(mask) != a:
        raise NotInAlgebra(f"{a.describe()} is not a union of model atoms")
    return mask


def model_monad(m: StarModel, atom: int) -> int:
    return fintop.monad(m.space, atom)


def algebra_sets(m: StarModel) -> list[DefSet]:
    """Every member of the finite algebra, i.e. every union of atoms."""
    return [m.union_of(mask) for mask in range(1 << len(m.atoms))]


def star_identity_violations(m: StarModel,
                             sets: Sequence[DefSet] | None = None) -> list[str]:
    """Check the star identities over all pairs from `sets`.

    Fixed points: star of the empty set is empty, star of the ground is
    every atom.  Commutation: star of a union / intersection / difference
    / complement is the mask union / intersection / difference /
    complement.  With sets=None the whole algebra is used up to 6 atoms,
    the fragment opens beyond that.
    """
    if sets is None:
        if len(m.atoms) <= 6:
            sets = algebra_sets(m)
        else:
            sets = [m.union_of(o) for o in m.space.opens]
    full = (1 << len(m.atoms)) - 1
    out = []
    if star_of(m, DefSet.empty(m.presentation.ground)) != 0:
        out.append("star of the empty set is nonempty")
    if star_of(m, DefSet.full(m.presentation.ground)) != full:
        out.append("star of the ground misses an atom")
    masks = [star_of(m, a) for a in sets]
    for i, a in enumerate(sets):
        if star_of(m, ds_combine("complement", a)) != full ^ masks[i]:
            out.append(f"complement breaks at {a.describe()}")
        for j, b in enumerate(sets):
            if star_of(m, ds_combine("union", a, b)) != masks[i] | masks[j]:
                out.append(f"union breaks at {a.describe()}, {b.describe()}")
            if star_of(m, ds_combine("inter", a, b)) != masks[i] & masks[j]:
                out.append(f"intersection breaks at {a.describe()}, {b.describe()}")
            if star_of(m, ds_combine("diff", a, b)) != masks[i] & ~masks[j] & full:
                out.append(f"difference breaks at {a.describe()}, {b.describe()}")
    return out


@dataclass(frozen=True)
class CoverageReport:
    covered: bool
    uncovered: tuple[int, ...]


def robinson_coverage(m: StarModel) -> CoverageReport:
    """Which atoms miss every standard monad.

    An uncovered atom certifies the fragment topology is not compact;
    full coverage is evidence relative to this fragment only.
    """
    hit = 0
    for i in m.embedding:
        hit |= model_monad(m, i)
    uncovered = tuple(i for i in range(len(m.atoms)) if not (hit >> i) & 1)
    return CoverageReport(not uncovered, uncovered)


def sandwich_violations(m: StarModel) -> list[tuple[int, int]]:
    """Nested fragment opens G ⊆ V where star(G) ⊆ ∪{monad(η(x)) : x ∈ G∩samples}
    ⊆ star(V) fails.  Meaningful when robinson_coverage holds; the caller gates."""
    out = []
    samples = m.presentation.samples
    monads = {i: model_monad(m, i) for i in m.embedding}
    for g in m.space.opens:
        spread = 0
        gset = m.union_of(g)
        for pos, s in enumerate(samples):
            if s in gset:
                spread |= monads[m.embedding[pos]]
        for v in m.space.opens:
            if g & ~v:
                continue
            if g & ~spread or spread & ~v:
                out.append((g, v))
    return out


def density_violations(m: StarModel) -> list[int]:
    """Nonempty model opens with no standard atom; empty when sample-hitting holds."""
    std = m.standard_mask
    return [o for o in m.space.opens if o and not o & std]


def embedding_is_homeomorphic(m: StarModel) -> bool:
    """The samples with their fragment topology match the standard atoms with
    the subspace topology, under the embedding."""
    k = len(m.presentation.samples)
    sub, pts = fintop.subspace(m.space, m.standard_mask)
    pos_of_atom = {atom: j for j, atom in enumerate(pts)}
    sample_opens = set()
    for o in m.space.opens:
        gset = m.union_of(o)
        sample_opens.add(sum(1 << j for j, s in enumerate(m.presentation.samples) if s in gset))
    transferred = set()
    for o in sub.opens:
        transferred.add(sum(1 << j for j in range(k)
                            if (o >> pos_of_atom[m.embedding[j]]) & 1))
    return sample_opens == transferred


@dataclass(frozen=True)
class UltrafilterTrace:
    """The algebra members above one atom, each recorded as an atom mask."""

    atom: int
    sets: tuple[int, ...]


def ultrafilter_trace(m: StarModel, atom: int) -> UltrafilterTrace:
    n = len(m.atoms)
    if not 0 <= atom < n:
        raise ValueError(f"atom {atom} outside the model")
    bit = 1 << atom
    sets = tuple(mask for mask in range(1 << n) if mask & bit)
    return UltrafilterTrace(atom, sets)


# -- definable maps ---------------------------------------------------

Rule = tuple[str, int]


@dataclass(frozen=True)
class DefMap:
    """Total map on the ground: a table on [0, threshold), then per residue
    class r mod len(rules) either ("const", c) or ("shift", d)."""

    ground: Ground
    table: tuple[int, ...]
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.ground.is_finite:
            if self.rules:
                raise ValueError("finite-ground maps are plain tables")
            if len(self.table) != self.ground.size:
                raise ValueError("table must cover the whole finite ground")
        else:
            if not self.rules:
                raise ValueError("maps on the infinite ground need residue rules")
            if len(self.rules) > PERIOD_CAP:
                raise PeriodOverflow(f"period {len(self.rules)} exceeds cap {PERIOD_CAP}")
        if any(v < 0 for v in self.table):
            raise ValueError("table values must be natural numbers")
        t, p = self.threshold, self.period
        for r, (kind, arg) in enumerate(self.rules):
            if kind == "const":
                if arg < 0:
                    raise ValueError("constant values must be natural numbers")
            elif kind == "shift":
                first = t + ((r - t) % p)
                if first + arg < 0:
                    raise ValueError(f"shift {arg} drops class {r} below zero")
            else:
                raise ValueError(f"unknown rule kind {kind!r}")

    @property
    def threshold(self) -> int:
        return len(self.table)

    @property
    def period(self) -> int:
        return max(len(self.rules), 1)

    def __call__(self, m: int) -> int:
        if m not in self.ground:
            raise ValueError(f"{m} outside {self.ground!r}")
        if m < len(self.table):
            return self.table[m]
        kind, arg = self.rules[m % len(self.rules)]
        return arg if kind == "const" else m + arg

    @staticmethod
    def identity(ground: Ground) -> "DefMap":
        if ground.is_finite:
            return DefMap(ground, tuple(range(ground.size)))
        return DefMap(ground, (), (("shift", 0),))

    @staticmethod
    def constant(ground: Ground, c: int) -> "DefMap":
        if ground.is_finite:
            return DefMap(ground, (c,) * ground.size)
        return DefMap(ground, (), (("const", c),))

    @staticmethod
    def shift(ground: Ground, d: int) -> "DefMap":
        """m ↦ m + d; for negative d the first -d points map to 0."""
        if ground.is_finite:
            return DefMap(ground, tuple(min(max(m + d, 0), ground.size - 1)
                                        for m in range(ground.size)))
        table = tuple(0 for _ in range(max(0, -d)))
        return DefMap(ground, table, (("shift", d),))


def dm_compose(g: DefMap, f: DefMap) -> DefMap:
    """g after f.  Both maps must live on the same kind of ground."""
    if f.ground.is_finite != g.ground.is_finite:
        raise GroundMismatch("cannot compose across ground kinds")
    if f.ground.is_finite:
        return DefMap(f.ground, tuple(g(f(m)) for m in range(f.ground.size)))
    p = math.lcm(f.period, g.period)
    if p > PERIOD_CAP:
        raise PeriodOverflow(f"composite period {p} exceeds cap {PERIOD_CAP}")
    t = f.threshold
    for r, (kind, arg) in enumerate(f.rules):
        if kind == "shift":
            # beyond t the g-rule must apply to f's output on this class
            t = max(t, g.threshold - arg)
    table = tuple(g(f(m)) for m in range(t))
    rules: list[Rule] = []
    for r in range(p):
        kind, arg = f.rules[r % f.period]
        if kind == "const":
            rules.append(("const", g(arg)))
            continue
        first = t + ((r - t) % p)
        gkind, garg = g.rules[(first + arg) % g.period]
        rules.append(("const", garg) if gkind == "const" else ("shift", arg + garg))
    return DefMap(f.ground, table, tuple(rules))


def ds_preimage(f: DefMap, b: DefSet) -> DefSet:
    """f⁻¹(b) as a definable set over f's ground."""
    src = f.ground
    if src.is_finite:
        return DefSet.from_predicate(src, lambda m: f(m) in b, src.size)
    t = f.threshold
    for r, (kind, arg) in enumerate(f.rules):
        if kind == "shift":
            t = max(t, b.threshold - arg)
    p = math.lcm(f.period, b.period)
    if p > PERIOD_CAP:
        raise PeriodOverflow(f"preimage period {p} exceeds cap {PERIOD_CAP}")
    return DefSet.from_predicate(src, lambda m: f(m) in b, t, p)


@dataclass(frozen=True)
class StarMap:
    """Induced atom map between two models, with its continuity verdict."""

    src: StarModel
    dst: StarModel
    atom_map: tuple[int, ...]
    continuous: bool

    def __call__(self, atom: int) -> int:
        return self.atom_map[atom]

    def preimage_mask(self, dst_mask: int) -> int:
        out = 0
        for i, j in enumerate(self.atom_map):
            if (dst_mask >> j) & 1:
                out |= 1 << i
        return out


def _check_range(f: DefMap, dst: Ground) -> None:
    if dst.is_finite:
        size = dst.size
        if any(v >= size for v in f.table):
            raise GroundMismatch(f"map value outside {dst!r}")
        for kind, arg in f.rules:
            if kind == "const":
                if arg >= size:
                    raise GroundMismatch(f"map value {arg} outside {dst!r}")
            else:
                raise GroundMismatch(f"a shift rule cannot land inside {dst!r}")


def star_map(f: DefMap, src: SpacePresentation, dst: SpacePresentation,
             src_model: StarModel | None = None,
             dst_model: StarModel | None = None) -> StarMap:
    """Extend f to atoms: each source atom goes to the unique target atom
    with the same membership signature across the target generators'
    preimages.  Verifies sample preservation and that every preimage stays
    inside the source algebra; reports continuity of the induced map.
    """
    if f.ground != src.ground:
        raise GroundMismatch(f"map over {f.ground!r}, source over {src.ground!r}")
    _check_range(f, dst.ground)
    for s in src.samples:
        if f(s) not in dst.samples:
            raise SampleImageNotSample(s, f(s))
    sm = src_model if src_model is not None else build_star(src)
    dm = dst_model if dst_model is not None else build_star(dst)
    if sm.presentation != src or dm.presentation != dst:
        raise ValueError("supplied models do not match the presentations")
    dst_gens = dm.presentation.subbase + tuple(
        DefSet.from_members(dst.ground, (s,)) for s in dst.samples)
    pre_masks = []
    for j, gen in enumerate(dst_gens):
        pre = ds_preimage(f, gen)
        try:
            pre_masks.append(star_of(sm, pre))
        except NotInAlgebra as exc:
            raise PreimageNotInAlgebra(j, str(exc)) from exc
    dst_signature = {}
    for b, atom in enumerate(dm.atoms):
        sig = tuple(ds_combine("diff", atom, gen).is_empty for gen in dst_gens)
        dst_signature[sig] = b
    atom_map = []
    for i in range(len(sm.atoms)):
        sig = tuple(bool((mask >> i) & 1) for mask in pre_masks)
        if sig not in dst_signature:
            raise AmbiguousImage(i)
        atom_map.append(dst_signature[sig])
    continuous = all(
        sm.space.is_open(sum(1 << i for i, j in enumerate(atom_map) if (o >> j) & 1))
        for o in dm.space.opens)
    return StarMap(sm, dm, tuple(atom_map), continuous)


def fragment_continuous(f: DefMap, src: SpacePresentation, dst: SpacePresentation,
                        src_model: StarModel | None = None,
                        dst_model: StarModel | None = None) -> bool:
    """Ground-level continuity: preimages of target fragment opens are source
    fragment opens (as definable sets)."""
    sm = src_model if src_model is not None else build_star(src)
    dm = dst_model if dst_model is not None else build_star(dst)
    src_opens = {sm.union_of(o) for o in sm.space.opens}
    for o in dm.space.opens:
        if ds_preimage(f, dm.union_of(o)) not in src_opens:
            return False
    return True
