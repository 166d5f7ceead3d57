import pytest

from lrgroups.amalgam import realize_finite
from lrgroups.cosetenum import conjugate_test
from lrgroups.lowindex import (
    IndexBoundExceeded,
    SearchSpaceExceeded,
    filter_lr,
    low_index,
    maximal_members,
)
from lrgroups.lranalysis import candidate_classes
from lrgroups.presentation import parse_presentation

GROUPS = {
    "D6": "gens: r f\nrels: r^6, f^2, (rf)^2",
    "D10": "gens: r f\nrels: r^10, f^2, (rf)^2",
    "Q8": "gens: i j\nrels: i^4, i^2 = j^2, j^-1 i j = i^-1",
    "A4": "gens: a b\nrels: a^2, b^3, (ab)^3",
    "C2^3": "gens: u v w\nrels: u^2, v^2, w^2, [u,v], [u,w], [v,w]",
    "S3xS3": "gens: a b c d\nrels: a^3, b^2, (ab)^2, c^3, d^2, (cd)^2, [a,c], [a,d], [b,c], [b,d]",
    "Sym5": "gens: s t\nrels: s^5, t^2, (st)^4, [t, s]^3",
    "C5:C4": "gens: r f\nrels: r^5, f^4, r^f = r^2",
    "C3xA4": "gens: z a b\nrels: z^3, a^2, b^3, (ab)^3, [z,a], [z,b]",
}


def oracle_check(pres, G, n=6):
    classes = low_index(pres, n)
    for c in classes:
        assert c.table.check() == []
    got = {}
    for c in classes:
        H = G.words_subgroup(c.generators)
        assert H.order * c.index == G.order
        got[G.conjugacy_canon(H.indices_in(G))[0]] = c.index
    brute = {}
    for H in G.subgroup_classes():
        if G.order // H.order <= n:
            brute[G.conjugacy_canon(H.indices_in(G))[0]] = G.order // H.order
    assert len(got) == len(classes)
    assert got == brute
    return classes


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_oracle_small_groups(name):
    pres = parse_presentation(GROUPS[name])
    G = realize_finite(pres)
    assert G.order <= 200
    oracle_check(pres, G)


@pytest.mark.parametrize("row", ["S4", "C3xS4", "S3xS4"])
def test_oracle_vertex_stabilisers(row, get_amalgam):
    am = get_amalgam(row)
    classes = oracle_check(am.L_pres, am.L)
    if row == "S4":
        assert [c.index for c in classes] == [1, 2, 3, 4, 6, 6, 6]


@pytest.mark.parametrize("row,index,count,lr", [
    ("S4", 6, 8, 1),
    ("C3xS4", 18, 9, 1),
    ("C3xS4star", 18, 3, 1),
    ("S3xS4", 18, 7, 1),
    ("S3xS4", 36, 23, 3),
])
def test_unconstrained_counts(row, index, count, lr, get_amalgam):
    am = get_amalgam(row)
    classes = low_index(am.A, index, exact=True)
    assert len(classes) == count
    assert all(c.index == index and c.table.check() == [] for c in classes)
    assert len(filter_lr(am, classes)) == lr


def test_contains_mode(get_amalgam):
    am = get_amalgam("4AT")
    words = am.A.words(["x", "y", "t"])
    classes = low_index(am.A, 54, exact=True, contains=words)
    assert len(classes) == 3
    for c in classes:
        assert all(c.table.trace(0, w) == 0 for w in words)
    assert len(filter_lr(am, classes)) == 1


def test_limits(get_amalgam):
    A = get_amalgam("4AT").A
    with pytest.raises(IndexBoundExceeded):
        low_index(A, 65)
    with pytest.raises(SearchSpaceExceeded):
        low_index(A, 54, exact=True, node_cap=10**5)


def _same_classes(xs, ys):
    return len(xs) == len(ys) and all(any(conjugate_test(a.table, b.table) is not None for b in ys) for a in xs)


@pytest.mark.parametrize("row", ["S4", "C3xS4", "C3xS4star", "S3xS4"])
def test_constrained_equals_unconstrained(row, get_amalgam, get_report):
    am = get_amalgam(row)
    rep = get_report(row)
    indices = sorted({am.L.order // x.order for x in rep.x_classes})
    free = [c for n in indices for c in filter_lr(am, low_index(am.A, n, exact=True))]
    assert _same_classes(rep.lr_classes, free)


@pytest.mark.slow
def test_4at_unconstrained_cross_check(get_amalgam, get_report):
    am = get_amalgam("4AT")
    classes = low_index(am.A, 54, exact=True, node_cap=10**8)
    assert len(classes) == 3
    free = filter_lr(am, classes)
    assert _same_classes(get_report("4AT").lr_classes, free)
    assert len(maximal_members(free)) == 1
