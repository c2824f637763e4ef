"""Finite spaces: generation, closure operators, checkers, enumeration, iso.

The enumeration counts are validated against two independently coded
oracles (a bitmask filter and a frozenset filter) rather than against
the library's own kernel, and iso_check is validated against a plain
permutation search.
"""
import itertools

import pytest

from topolab.errors import SizeCapExceeded
from topolab.fintop import (
    FinSpace,
    closure,
    enumerate_topologies,
    generate_topology,
    hasse_dot,
    interior,
    iso_check,
    locally_compact_literal,
    monad,
    property_report,
    specialization,
    subspace,
)

SIERP = FinSpace(2, (0, 1, 3))
DISCRETE2 = FinSpace(2, (0, 1, 2, 3))
INDISCRETE2 = FinSpace(2, (0, 3))
CHAIN4 = FinSpace(4, (0, 1, 3, 7, 15))


def test_finspace_validation():
    with pytest.raises(ValueError):
        FinSpace(2, (0, 1))           # missing the full set
    with pytest.raises(ValueError):
        FinSpace(2, (1, 3))           # missing the empty set
    with pytest.raises(ValueError):
        FinSpace(2, (0, 1, 2, 3, 4))  # mask out of range
    with pytest.raises(ValueError):
        FinSpace(3, (0, 3, 5, 7))     # 3 & 5 = 1 missing
    with pytest.raises(SizeCapExceeded):
        FinSpace(17, (0, (1 << 17) - 1))
    assert FinSpace(2, (3, 0, 3, 1)).opens == (0, 1, 3)  # dedup + sort


def test_generate_topology_examples():
    assert generate_topology(2, [1]) == SIERP
    assert generate_topology(3, [1, 2]).opens == (0, 1, 2, 3, 7)
    assert generate_topology(4, [1, 3, 7]) == CHAIN4
    assert generate_topology(0, []).opens == (0,)
    with pytest.raises(ValueError):
        generate_topology(2, [4])
    with pytest.raises(SizeCapExceeded):
        generate_topology(17, [])


def test_closure_and_interior():
    assert closure(SIERP, 0b01) == 0b11   # {0} is dense
    assert closure(SIERP, 0b10) == 0b10   # {1} is closed
    assert closure(SIERP, 0) == 0
    assert interior(SIERP, 0b10) == 0
    assert interior(SIERP, 0b01) == 0b01


def test_monad_examples():
    assert monad(SIERP, 0) == 0b01
    assert monad(SIERP, 1) == 0b11
    d3 = generate_topology(3, [1, 2, 4])
    assert [monad(d3, i) for i in range(3)] == [1, 2, 4]
    assert monad(CHAIN4, 3) == 0b1111
    with pytest.raises(ValueError):
        monad(SIERP, 2)


def test_specialization_examples():
    assert specialization(SIERP).leq == (0b01, 0b11)
    assert specialization(SIERP).holds(1, 0) and not specialization(SIERP).holds(0, 1)
    assert specialization(INDISCRETE2).leq == (3, 3)
    assert specialization(DISCRETE2).leq == (1, 2)


def test_subspace():
    sub, pts = subspace(CHAIN4, 0b0110)
    assert pts == [1, 2]
    assert sub.opens == (0, 1, 3)


# -- closure-operator laws over the full enumeration --------------------

def test_kuratowski_laws(enumerations):
    for n, spaces in enumerations.items():
        for s in spaces:
            cl = {a: closure(s, a) for a in range(1 << n)}
            assert cl[0] == 0
            for a in range(1 << n):
                assert cl[a] & ~cl[cl[a]] == 0 and cl[cl[a]] == cl[a]
                assert a & ~cl[a] == 0
            for a in range(1 << n):
                for b in range(1 << n):
                    assert cl[a | b] == cl[a] | cl[b]


def test_interior_closure_duality(enumerations):
    for n, spaces in enumerations.items():
        full = (1 << n) - 1
        for s in spaces:
            for a in range(1 << n):
                assert interior(s, a) == full ^ closure(s, full ^ a)


def test_monad_is_minimum_open(enumerations):
    for spaces in enumerations.values():
        for s in spaces:
            for x in range(s.n):
                m = monad(s, x)
                assert s.is_open(m) and (m >> x) & 1
                for o in s.opens:
                    if (o >> x) & 1:
                        assert m & ~o == 0


def test_leq_agrees_with_closure(enumerations):
    # row masks come from monads; recompute from point closures independently
    for spaces in enumerations.values():
        for s in spaces:
            leq = specialization(s).leq
            for x in range(s.n):
                for y in range(s.n):
                    assert ((leq[x] >> y) & 1) == ((closure(s, 1 << y) >> x) & 1)


# -- property report ------------------------------------------------------

def test_report_sierpinski():
    rep = property_report(SIERP)
    assert rep.flags() == {
        "t0": True, "t1": False, "t2": False, "regular": False,
        "completely_regular": False, "normal": True, "all_opens_closed": False,
        "compact": True, "locally_compact": True, "supercompact": True,
    }
    assert rep.witness("t1") == (0, 0b11)       # cl{0} is not {0}
    assert rep.witness("all_opens_closed") == (1,)
    assert rep.witness("t0") is None


def test_report_discrete_and_indiscrete():
    assert all(property_report(DISCRETE2).flags().values())
    rep = property_report(INDISCRETE2)
    flags = rep.flags()
    assert not flags["t0"] and not flags["t1"] and not flags["t2"]
    assert flags["regular"] and flags["completely_regular"]
    assert flags["normal"] and flags["all_opens_closed"]
    assert rep.witness("t0") == (0, 1)


def test_every_finite_space_compact_lc_supercompact(enumerations):
    for spaces in enumerations.values():
        for s in spaces:
            rep = property_report(s)
            assert rep.compact and rep.locally_compact and rep.supercompact


def test_locally_compact_reduction_lemma(enumerations):
    # the monad-based checker must agree with the literal subset search
    for n in range(4):
        for s in enumerations[n]:
            assert locally_compact_literal(s) == property_report(s).locally_compact


def test_hierarchy_and_discreteness(enumerations):
    for n, spaces in enumerations.items():
        for s in spaces:
            rep = property_report(s)
            if rep.t2:
                assert rep.t1
            if rep.t1:
                assert rep.t0
            assert rep.t2 == (len(s.opens) == 1 << n)


def test_regular_iff_completely_regular_iff_clopen(enumerations):
    for spaces in enumerations.values():
        for s in spaces:
            rep = property_report(s)
            assert rep.regular == rep.completely_regular == rep.all_opens_closed


def test_witnesses_only_for_false_flags(enumerations):
    for spaces in enumerations.values():
        for s in spaces:
            rep = property_report(s)
            for name, ok in rep.flags().items():
                assert (rep.witness(name) is None) == ok


# -- enumeration oracle ----------------------------------------------------

def family_closed(fam):
    mem = set(fam)
    return all((a | b) in mem and (a & b) in mem for a in fam for b in fam)


def oracle_families_bitmask(n):
    """All open families, by filtering every subset of the nontrivial masks."""
    full = (1 << n) - 1
    middles = [m for m in range(1 << n) if m not in (0, full)]
    out = []
    for pick in range(1 << len(middles)):
        fam = [0, full] if n > 0 else [0]
        fam += [m for i, m in enumerate(middles) if (pick >> i) & 1]
        if family_closed(fam):
            out.append(tuple(sorted(set(fam))))
    # promised order: ascending in the family bit-encoding (bit s set iff s open)
    return sorted(set(out), key=lambda fam: sum(1 << o for o in fam))


def oracle_families_frozenset(n):
    """Same count from a set-of-frozensets encoding, no bit arithmetic."""
    points = frozenset(range(n))
    subsets = [frozenset(c) for r in range(n + 1)
               for c in itertools.combinations(range(n), r)]
    middles = [s for s in subsets if s not in (frozenset(), points)]
    count = 0
    for r in range(len(middles) + 1):
        for pick in itertools.combinations(middles, r):
            fam = set(pick) | {frozenset(), points}
            if all((a | b) in fam and (a & b) in fam for a in fam for b in fam):
                count += 1
    return count


def test_enumeration_counts(enumerations):
    assert [len(enumerations[n]) for n in range(5)] == [1, 1, 4, 29, 355]
    for n in range(5):
        assert [s.opens for s in enumerations[n]] == oracle_families_bitmask(n)
    for n in range(4):
        assert len(enumerations[n]) == oracle_families_frozenset(n)


def test_enumeration_order_and_cap(enumerations):
    for n, spaces in enumerations.items():
        codes = [sum(1 << o for o in s.opens) for s in spaces]
        assert codes == sorted(codes) and len(set(codes)) == len(codes)
    with pytest.raises(SizeCapExceeded):
        list(enumerate_topologies(5))


# -- homeomorphism search ----------------------------------------------------

def brute_iso(a, b):
    if a.n != b.n:
        return None
    for perm in itertools.permutations(range(b.n)):
        mapped = {sum(1 << perm[x] for x in range(a.n) if (o >> x) & 1)
                  for o in a.opens}
        if mapped == set(b.opens):
            return perm
    return None


def test_iso_examples():
    relabeled = FinSpace(2, (0, 2, 3))
    got = iso_check(SIERP, relabeled)
    assert got == (1, 0)
    assert iso_check(SIERP, DISCRETE2) is None
    assert iso_check(CHAIN4, generate_topology(4, [8, 12, 14])) is not None


def test_iso_cap():
    big = FinSpace(11, (0, (1 << 11) - 1))
    with pytest.raises(SizeCapExceeded):
        iso_check(big, big)


def test_iso_agrees_with_permutation_search(enumerations):
    spaces = enumerations[3]
    for a in spaces:
        for b in spaces:
            got = iso_check(a, b)
            want = brute_iso(a, b)
            assert (got is None) == (want is None)
            if got is not None:
                mapped = {sum(1 << got[x] for x in range(a.n) if (o >> x) & 1)
                          for o in a.opens}
                assert mapped == set(b.opens)


# -- DOT export ----------------------------------------------------------------

def test_hasse_dot_chain():
    chain3 = generate_topology(3, [1, 3])
    assert hasse_dot(specialization(chain3)) == (
        "digraph hasse {\n"
        "  rankdir=BT;\n"
        '  n0 [label="0"];\n'
        '  n1 [label="1"];\n'
        '  n2 [label="2"];\n'
        "  n1 -> n0;\n"
        "  n2 -> n1;\n"
        "}\n"
    )


def test_hasse_dot_merges_classes_and_skips_transitive_edges():
    out = hasse_dot(specialization(INDISCRETE2), labels=["a", "b"])
    assert 'n0 [label="a = b"]' in out and "->" not in out
    out = hasse_dot(specialization(CHAIN4))
    assert "n3 -> n2;" in out and "n3 -> n0;" not in out
