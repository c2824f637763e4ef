"""Reflections of finite spaces and the standard-part retraction.

The T0 reflection collapses points with equal minimal neighbourhoods;
the T2 reflection collapses specialization-connected components, which
for finite spaces lands in discrete spaces in one step.  Applied to a
star model these give the fragment versions of the two
compactifications: the T2 reflection of the model and the T0 reflection
of the model.

The retraction sends each atom to the class of samples whose closure
matches the adherence of the atom's ultrafilter trace; it can fail, and
the failure kind (no candidate, or candidates from several monad
classes) is part of the result contract.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels, fintop
from .errors import AmbiguousRetraction, NoRetraction
from .fintop import FinSpace, enumerate_topologies, monad, property_report, specialization
from .star import (
    SpacePresentation,
    StarModel,
    UltrafilterTrace,
    build_star,
    model_monad,
    ultrafilter_trace,
)


@dataclass(frozen=True)
class QuotientMap:
    """Surjective continuous point map whose target carries the final topology."""

    source: FinSpace
    target: FinSpace
    assign: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assign", tuple(self.assign))
        if len(self.assign) != self.source.n:
            raise ValueError("assign must cover every source point")
        if set(self.assign) != set(range(self.target.n)):
            raise ValueError("assign must be onto the target points")
        final = {o for o in range(1 << self.target.n)
                 if self.source.is_open(self.preimage(o))}
        if final != set(self.target.opens):
            raise ValueError("target does not carry the final topology")

    def preimage(self, target_mask: int) -> int:
        out = 0
        for x, c in enumerate(self.assign):
            if (target_mask >> c) & 1:
                out |= 1 << x
        return out

    def image(self, source_mask: int) -> int:
        out = 0
        for x, c in enumerate(self.assign):
            if (source_mask >> x) & 1:
                out |= 1 << c
        return out

    @property
    def is_identity(self) -> bool:
        return self.assign == tuple(range(self.source.n))


def _classes_by_key(keys: Sequence[int]) -> tuple[list[list[int]], list[int]]:
    classes: list[list[int]] = []
    index: dict[int, int] = {}
    assign = []
    for x, key in enumerate(keys):
        if key not in index:
            index[key] = len(classes)
            classes.append([])
        classes[index[key]].append(x)
        assign.append(index[key])
    return classes, assign


def t0_reflection(s: FinSpace) -> QuotientMap:
    """Quotient by monad equality.  Opens are unions of monads, hence saturated,
    so the final topology is just the image family."""
    classes, assign = _classes_by_key([monad(s, x) for x in range(s.n)])
    opens = set()
    for o in s.opens:
        img = 0
        for x in range(s.n):
            if (o >> x) & 1:
                img |= 1 << assign[x]
        opens.add(img)
    return QuotientMap(s, FinSpace(len(classes), tuple(opens)), tuple(assign))


def t2_reflection(s: FinSpace) -> QuotientMap:
    """Quotient by specialization connectivity.  Components are clopen in a
    finite space, so the quotient is discrete and the map continuous."""
    leq = specialization(s).leq
    parent = list(range(s.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in range(s.n):
        for y in range(s.n):
            if (leq[x] >> y) & 1:
                parent[find(x)] = find(y)
    classes, assign = _classes_by_key([find(x) for x in range(s.n)])
    k = len(classes)
    return QuotientMap(s, FinSpace(k, tuple(range(1 << k))), tuple(assign))


def beta_fragment(p: SpacePresentation, cap: int | None = None) -> tuple[StarModel, QuotientMap]:
    """Fragment analogue of the largest compactification: the T2 reflection
    of the star model."""
    m = build_star(p, cap)
    return m, t2_reflection(m.space)


def beta2_fragment(p: SpacePresentation, cap: int | None = None) -> tuple[StarModel, QuotientMap]:
    """Fragment analogue of the T0 compactification: the T0 reflection of
    the star model.  The target always passes t0, compact, locally_compact
    and supercompact."""
    m = build_star(p, cap)
    return m, t0_reflection(m.space)


def adherence(m: StarModel, trace: UltrafilterTrace) -> frozenset[int]:
    """Samples whose every fragment-open neighbourhood meets every trace member.

    Neighbourhoods and members are both atom masks, so "meets" is a mask
    intersection; atoms are nonempty, making this exact over the ground."""
    out = []
    for pos, s in enumerate(m.presentation.samples):
        a = m.embedding[pos]
        ok = True
        for g in m.space.opens:
            if not (g >> a) & 1:
                continue
            if any(g & member == 0 for member in trace.sets):
                ok = False
                break
        if ok:
            out.append(s)
    return frozenset(out)


@dataclass(frozen=True)
class RetractionMap:
    """Atom → class of samples with matching closure; identity on standard
    atoms, with continuity into the sample classes reported."""

    model: StarModel
    assign: tuple[frozenset[int], ...]
    continuous: bool

    def __post_init__(self):
        for pos, s in enumerate(self.model.presentation.samples):
            if s not in self.assign[self.model.embedding[pos]]:
                raise ValueError("retraction must fix the standard part")


def _sample_closures(m: StarModel) -> dict[int, frozenset[int]]:
    """cl{x} ∩ samples for each sample x, computed inside the model: y is in
    cl{x} iff the atom of x lies in every open around the atom of y."""
    out = {}
    for pos, x in enumerate(m.presentation.samples):
        ax = m.embedding[pos]
        members = []
        for qos, y in enumerate(m.presentation.samples):
            ay = m.embedding[qos]
            if (model_monad(m, ay) >> ax) & 1:
                members.append(y)
        out[x] = frozenset(members)
    return out


def retraction(m: StarModel) -> RetractionMap:
    """Standard-part map on atoms.

    For each atom take the adherence of its ultrafilter trace and collect
    the samples x with cl{x} ∩ samples equal to it.  Any two such samples
    share a monad (each lies in the other's sample closure), so the class
    is monad-unique whenever it is nonempty; the ambiguity branch is kept
    to honour the result contract.
    """
    samples = m.presentation.samples
    closures = _sample_closures(m)
    monads = {x: model_monad(m, m.atom_of_sample(x)) for x in samples}
    assign: list[frozenset[int]] = []
    for i in range(len(m.atoms)):
        adh = adherence(m, ultrafilter_trace(m, i))
        cands = [x for x in samples if closures[x] == adh]
        if not cands:
            raise NoRetraction(i, f"adherence {sorted(adh)} matches no sample closure")
        groups: list[frozenset[int]] = []
        for x in cands:
            for g in groups:
                if monads[x] == monads[next(iter(g))]:
                    break
            else:
                groups.append(frozenset(y for y in cands if monads[y] == monads[x]))
        if len(groups) > 1:
            raise AmbiguousRetraction(i, tuple(groups))
        assign.append(groups[0])

    # continuity into the T0 quotient of the sample subspace
    k = len(samples)
    sample_opens = set()
    for o in m.space.opens:
        gset = m.union_of(o)
        sample_opens.add(sum(1 << j for j, s in enumerate(samples) if s in gset))
    sample_space = FinSpace(k, tuple(sample_opens))
    q = t0_reflection(sample_space)
    cls_of_sample = {s: q.assign[j] for j, s in enumerate(samples)}
    continuous = True
    for o in q.target.opens:
        pre = sum(1 << i for i in range(len(m.atoms))
                  if (o >> cls_of_sample[next(iter(assign[i]))]) & 1)
        if not m.space.is_open(pre):
            continuous = False
            break
    return RetractionMap(m, tuple(assign), continuous)


# -- factorization search and the exhaustive sweep ---------------------


def continuous_point_maps(a: FinSpace, b: FinSpace) -> list[tuple[int, ...]]:
    """All continuous maps a → b, by exhaustive search."""
    out = []
    for f in itertools.product(range(b.n), repeat=a.n):
        if all(a.is_open(sum(1 << x for x in range(a.n) if (o >> f[x]) & 1))
               for o in b.opens):
            out.append(f)
    return out


def factorizations_through(q: QuotientMap, f: Sequence[int],
                           target: FinSpace) -> list[tuple[int, ...]]:
    """All continuous F: q.target → target with F ∘ q.assign = f, found by
    trying every point map outright."""
    out = []
    for big in itertools.product(range(target.n), repeat=q.target.n):
        if any(big[q.assign[x]] != f[x] for x in range(q.source.n)):
            continue
        if all(q.target.is_open(sum(1 << c for c in range(q.target.n)
                                    if (o >> big[c]) & 1))
               for o in target.opens):
            out.append(big)
    return out


@dataclass(frozen=True)
class SweepReport:
    sources: int
    targets: int
    maps: int
    unfactored_pairs: tuple[tuple[int, int], ...]
    nonunique_pairs: tuple[tuple[int, int], ...]


def _space_bitmap(s: FinSpace) -> np.ndarray:
    out = np.zeros(1 << s.n, dtype=np.bool_)
    for o in s.opens:
        out[o] = True
    return out


def weak_reflection_sweep(max_n: int = 4, kind: str = "t0") -> SweepReport:
    """Check the weak universal property exhaustively.

    Every continuous map from any space on ≤ max_n points into any T0
    (resp. discrete) space on ≤ max_n points must factor through the T0
    (resp. T2) reflection; for T0 the factorization must be unique.  The
    per-pair counting runs in the selected kernel backend.
    """
    if kind not in ("t0", "t2"):
        raise ValueError("kind must be 't0' or 't2'")
    sources = [s for n in range(max_n + 1) for s in enumerate_topologies(n)]
    if kind == "t0":
        targets = [s for n in range(max_n + 1) for s in enumerate_topologies(n)
                   if property_report(s).t0]
        quotients = [t0_reflection(s) for s in sources]
    else:
        targets = [FinSpace(n, tuple(range(1 << n))) for n in range(max_n + 1)]
        quotients = [t2_reflection(s) for s in sources]
    src_data = []
    for s, q in zip(sources, quotients):
        src_data.append((s.n, _space_bitmap(s), q.target.n, _space_bitmap(q.target),
                         np.array(q.assign, dtype=np.int64)))
    unfactored = []
    nonunique = []
    total_maps = 0
    for ti, t in enumerate(targets):
        opens = np.array(t.opens, dtype=np.int64)
        for si, (n_s, sbm, n_q, qbm, assign) in enumerate(src_data):
            ncont, nfact, nuniq = (int(v) for v in _kernels.reflection_counts(
                n_s, sbm, n_q, qbm, assign, t.n, opens))
            total_maps += ncont
            if nfact != ncont:
                unfactored.append((si, ti))
            if kind == "t0" and nuniq != ncont:
                nonunique.append((si, ti))
    return SweepReport(len(sources), len(targets), total_maps,
                       tuple(unfactored), tuple(nonunique))
