"""Low-index subgroups of finitely presented groups.

Subgroups of index at most ``n`` correspond to transitive actions on
``{0..n-1}`` with the subgroup as the stabiliser of 0.  The search fills a
partial coset table one entry at a time (first undefined entry in
coset-major order), propagates relator scans after each choice, and rejects
any partial table that is not minimal among its rebasings.  What survives is
exactly one standardized table per conjugacy class.

With ``contains=words`` only subgroups containing those words are produced.
Rebasing is then limited to cosets fixed by the words, so two survivors
may still be conjugate by an element moving ``<words>``; such duplicates
are removed afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numba
import numpy as np

from .cosetenum import (
    CosetTable,
    action_of,
    conjugate_test,
    contains as table_contains,
    orbit_count,
    schreier_generators,
    stabilizer_words,
)
from .presentation import Presentation, Word

MAX_INDEX = 64
DEFAULT_NODE_CAP = 10**7


class IndexBoundExceeded(ValueError):
    pass


class SearchSpaceExceeded(RuntimeError):
    def __init__(self, nodes: int, what: str = ""):
        self.nodes = nodes
        msg = f"low-index search exceeded {nodes} nodes"
        super().__init__(msg + (f" ({what})" if what else ""))


@dataclass(frozen=True)
class SubgroupClass:
    table: CosetTable

    @property
    def index(self) -> int:
        return self.table.n

    @property
    def generators(self) -> list[Word]:
        return schreier_generators(self.table)

    def to_json(self) -> dict:
        pres = self.table.presentation
        return {
            "index": self.index,
            "schreier_generators": [pres.format_word(w) for w in self.generators],
            "table": self.table.to_json(),
        }


# ---------------------------------------------------------------------------
# search kernel


def _relator_data(pres: Presentation):
    """Flattened cyclic conjugates of relators and inverses, bucketed by first letter."""
    g2 = 2 * pres.ngens
    buckets: list[list[tuple[int, ...]]] = [[] for _ in range(g2)]
    seen = set()
    for r in pres.cyclic_relators:
        for w in (r.letters, r.inverse().letters):
            for i in range(len(w)):
                c = w[i:] + w[:i]
                if c not in seen:
                    seen.add(c)
                    buckets[c[0]].append(c)
    flat, start, length, bstart = [], [], [], [0]
    for b in buckets:
        for c in b:
            start.append(len(flat))
            length.append(len(c))
            flat.extend(c)
        bstart.append(len(start))
    as_arr = lambda v: np.array(v, dtype=np.int64)
    return as_arr(flat), as_arr(start), as_arr(length), as_arr(bstart)


def _word_data(words: Sequence[Word]):
    flat, start, length = [], [], []
    for w in words:
        start.append(len(flat))
        length.append(len(w.letters))
        flat.extend(w.letters)
    as_arr = lambda v: np.array(v, dtype=np.int64)
    return as_arr(flat), as_arr(start), as_arr(length)


@numba.njit(cache=True)
def _set(table, c, x, d, log, nlog, queue, nq):
    table[c, x] = d
    table[d, x ^ 1] = c
    log[nlog] = c * table.shape[1] + x
    log[nlog + 1] = d * table.shape[1] + (x ^ 1)
    queue[nq] = c
    queue[nq + 1] = x
    return nlog + 2, nq + 2


@numba.njit(cache=True)
def _scan(table, c, word, s, ln, log, nlog, queue, nq):
    """Scan ``word[s:s+ln]`` from ``c`` back to ``c``; returns (ok, nlog, nq)."""
    f = c
    i = 0
    while i < ln:
        v = table[f, word[s + i]]
        if v < 0:
            break
        f = v
        i += 1
    if i == ln:
        return f == c, nlog, nq
    b = c
    j = ln - 1
    while j >= i:
        v = table[b, word[s + j] ^ 1]
        if v < 0:
            break
        b = v
        j -= 1
    if j < i:
        return f == b, nlog, nq
    if j == i:
        x = word[s + i]
        if table[b, x ^ 1] >= 0:
            return False, nlog, nq
        nlog, nq = _set(table, f, x, b, log, nlog, queue, nq)
    return True, nlog, nq


@numba.njit(cache=True)
def _propagate(table, queue, nq, log, nlog, rflat, rstart, rlen, bstart, sflat, sstart, slen):
    head = 0
    while head < nq:
        c = queue[head]
        x = queue[head + 1]
        head += 2
        d = table[c, x]
        for k in range(bstart[x], bstart[x + 1]):
            ok, nlog, nq = _scan(table, c, rflat, rstart[k], rlen[k], log, nlog, queue, nq)
            if not ok:
                return False, nlog
        y = x ^ 1
        for k in range(bstart[y], bstart[y + 1]):
            ok, nlog, nq = _scan(table, d, rflat, rstart[k], rlen[k], log, nlog, queue, nq)
            if not ok:
                return False, nlog
        for k in range(len(sstart)):
            ok, nlog, nq = _scan(table, 0, sflat, sstart[k], slen[k], log, nlog, queue, nq)
            if not ok:
                return False, nlog
    return True, nlog


@numba.njit(cache=True)
def _fixes(table, b, sflat, sstart, slen):
    for k in range(len(sstart)):
        f = b
        for i in range(slen[k]):
            f = table[f, sflat[sstart[k] + i]]
            if f < 0:
                return False
        if f != b:
            return False
    return True


@numba.njit(cache=True)
def _canonical(table, ncos, sflat, sstart, slen, constrained, newof, oldof):
    g2 = table.shape[1]
    for b in range(1, ncos):
        if constrained and not _fixes(table, b, sflat, sstart, slen):
            continue
        for i in range(ncos):
            newof[i] = -1
        newof[b] = 0
        oldof[0] = b
        nxt = 1
        decided = False
        for nc in range(ncos):
            if nc >= nxt:
                break
            oc = oldof[nc]
            for x in range(g2):
                o = table[oc, x]
                orig = table[nc, x]
                if o < 0 or orig < 0:
                    decided = True
                    break
                if newof[o] < 0:
                    newof[o] = nxt
                    oldof[nxt] = o
                    nxt += 1
                v = newof[o]
                if v < orig:
                    return False
                if v > orig:
                    decided = True
                    break
            if decided:
                break
    return True


@numba.njit(cache=True)
def _search(nmax, g2, exact, rflat, rstart, rlen, bstart, sflat, sstart, slen, constrained,
            node_cap, out_cap):
    table = -np.ones((nmax, g2), dtype=np.int64)
    cap_log = nmax * g2 + 2
    log = np.zeros(cap_log, dtype=np.int64)
    queue = np.zeros(2 * cap_log, dtype=np.int64)
    newof = np.zeros(nmax, dtype=np.int64)
    oldof = np.zeros(nmax, dtype=np.int64)
    depth_cap = nmax * g2 + 1
    f_c = np.zeros(depth_cap, dtype=np.int64)
    f_x = np.zeros(depth_cap, dtype=np.int64)
    f_d = np.zeros(depth_cap, dtype=np.int64)
    f_log = np.zeros(depth_cap, dtype=np.int64)
    f_k = np.zeros(depth_cap, dtype=np.int64)
    room = 64
    results = np.zeros((room, nmax, g2), dtype=np.int64)
    rsize = np.zeros(room, dtype=np.int64)
    nres = 0
    nodes = 0
    nlog = 0
    ncos = 1
    # the empty table may already be complete (no generators)
    level = 0
    f_c[0] = -1
    found = False
    for c in range(ncos):
        for x in range(g2):
            if table[c, x] < 0 and not found:
                f_c[0] = c
                f_x[0] = x
                found = True
    if not found:
        rsize[0] = 1
        return results, rsize, 1, 0, False
    f_d[0] = 0
    f_log[0] = 0
    f_k[0] = 1
    while level >= 0:
        c = f_c[level]
        x = f_x[level]
        # undo back to this frame's state
        while nlog > f_log[level]:
            nlog -= 1
            e = log[nlog]
            table[e // g2, e % g2] = -1
        ncos = f_k[level]
        d = f_d[level]
        # next admissible target
        while d < ncos and table[d, x ^ 1] >= 0:
            d += 1
        if d > ncos or (d == ncos and ncos >= nmax):
            level -= 1
            continue
        f_d[level] = d + 1
        if d == ncos:
            ncos += 1
        nodes += 1
        if nodes > node_cap:
            return results, rsize, nres, nodes, True
        nq = 0
        nlog, nq = _set(table, c, x, d, log, nlog, queue, nq)
        ok, nlog = _propagate(table, queue, nq, log, nlog, rflat, rstart, rlen, bstart,
                              sflat, sstart, slen)
        if not ok:
            continue
        if not _canonical(table, ncos, sflat, sstart, slen, constrained, newof, oldof):
            continue
        # next undefined entry
        nc = -1
        nx = -1
        for cc in range(ncos):
            for xx in range(g2):
                if table[cc, xx] < 0:
                    nc = cc
                    nx = xx
                    break
            if nc >= 0:
                break
        if nc < 0:
            if (not exact) or ncos == nmax:
                if nres >= out_cap:
                    return results, rsize, nres, nodes, True
                if nres == room:
                    room *= 2
                    grown = np.zeros((room, nmax, g2), dtype=np.int64)
                    grown[:nres] = results
                    results = grown
                    grown_s = np.zeros(room, dtype=np.int64)
                    grown_s[:nres] = rsize
                    rsize = grown_s
                results[nres, :ncos, :] = table[:ncos, :]
                rsize[nres] = ncos
                nres += 1
            continue
        level += 1
        f_c[level] = nc
        f_x[level] = nx
        f_d[level] = 0
        f_log[level] = nlog
        f_k[level] = ncos
    return results, rsize, nres, nodes, False


def _run(pres: Presentation, n: int, exact: bool, contains: Sequence[Word], node_cap: int,
         out_cap: int = 100000):
    rflat, rstart, rlen, bstart = _relator_data(pres)
    sflat, sstart, slen = _word_data([w.reduce() for w in contains])
    res, sizes, nres, nodes, over = _search(
        n, 2 * pres.ngens, exact, rflat, rstart, rlen, bstart, sflat, sstart, slen,
        len(contains) > 0, node_cap, out_cap,
    )
    return res, sizes, int(nres), int(nodes), bool(over)


def low_index(
    pres: Presentation,
    n: int,
    exact: bool = False,
    contains: Sequence[Word] = (),
    node_cap: int = DEFAULT_NODE_CAP,
    name: str = "",
) -> list[SubgroupClass]:
    """Conjugacy classes of subgroups of index ``n`` (or at most ``n``).

    With ``contains`` the classes are those of subgroups containing a
    conjugate of every listed word simultaneously, i.e. containing some
    conjugate of ``<contains>``.
    """
    if not 1 <= n <= MAX_INDEX:
        raise IndexBoundExceeded(f"index {n} outside 1..{MAX_INDEX}")
    contains = list(contains)
    res, sizes, nres, nodes, over = _run(pres, n, exact, contains, node_cap)
    if over:
        raise SearchSpaceExceeded(nodes, name)
    tables = []
    for r in range(nres):
        k = int(sizes[r])
        rows = res[r, :k, :].tolist()
        tables.append(CosetTable(pres, tuple(contains), rows))
    if contains:
        tables = _dedupe_conjugates(tables)
    tables.sort(key=lambda t: (t.n, t.key()))
    return [SubgroupClass(t) for t in tables]


def _dedupe_conjugates(tables: list[CosetTable]) -> list[CosetTable]:
    out: list[CosetTable] = []
    for t in tables:
        if not any(conjugate_test(u, t) is not None for u in out):
            out.append(t)
    return out


def merge_classes(groups: Iterable[Iterable[SubgroupClass]]) -> list[SubgroupClass]:
    """Union of class lists, dropping conjugate duplicates."""
    out: list[SubgroupClass] = []
    for group in groups:
        for c in group:
            if not any(conjugate_test(o.table, c.table) is not None for o in out):
                out.append(c)
    out.sort(key=lambda c: (c.index, c.table.key()))
    return out


# ---------------------------------------------------------------------------
# LR filtering


def lr_orbit_counts(am, table: CosetTable) -> dict[str, int]:
    A = am.A
    return {
        "L": orbit_count(table, A.gen_words(am.L_pres.generators)),
        "B": orbit_count(table, A.gen_words(am.B_pres.generators)),
        "R": orbit_count(table, A.gen_words(am.R_pres.generators)),
    }


def stabilizer_in_L(am, table: CosetTable):
    """``T cap L`` as a subgroup of the realized L."""
    A = am.A
    words = stabilizer_words(table, A.gen_words(am.L_pres.generators))
    return am.L_subgroup(words)


def is_lr_class(am, table: CosetTable) -> bool:
    from .permgroup import is_intransitive_klein

    counts = lr_orbit_counts(am, table)
    if (counts["L"], counts["B"], counts["R"]) != (1, 2, 2):
        return False
    return is_intransitive_klein(am.local_action_of(stabilizer_in_L(am, table)))


def filter_lr(am, classes: Sequence[SubgroupClass]) -> list[SubgroupClass]:
    """Keep the classes whose subgroup acts on the tree as an LR-group."""
    return [c for c in classes if is_lr_class(am, c.table)]


def maximal_members(classes: Sequence[SubgroupClass]) -> list[SubgroupClass]:
    """Classes not properly contained in a conjugate of another listed class."""
    out = []
    for c in classes:
        dominated = False
        for o in classes:
            if o is c or o.index >= c.index or c.index % o.index:
                continue
            if any(table_contains(c.table, _rebased(o.table, k)) for k in range(o.index)):
                dominated = True
                break
        if not dominated:
            out.append(c)
    return out


def _rebased(t: CosetTable, k: int) -> CosetTable:
    from .cosetenum import standardize

    return standardize(t, k)
