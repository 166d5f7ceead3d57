"""Todd-Coxeter coset enumeration and operations on complete coset tables.

Cosets are numbered from 0; coset 0 is the subgroup itself.  Column ``2*i``
of a table holds the action of generator ``i`` and column ``2*i + 1`` that of
its inverse, matching the letter encoding of :class:`~lrgroups.presentation.Word`.
Groups act on cosets from the right: coset ``Hu`` times ``g`` is ``Hug``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .presentation import Presentation, Word

DEFAULT_MAX_COSETS = 10**6


class CosetLimitExceeded(RuntimeError):
    """More cosets were needed than allowed; the index may be infinite."""

    def __init__(self, limit, what=""):
        self.limit = limit
        super().__init__(f"coset enumeration{' of ' + what if what else ''} exceeded {limit} cosets")


class _Enumerator:
    """Mutable state of one enumeration.  Dead cosets forward through ``p``."""

    def __init__(self, pres: Presentation, max_cosets: int):
        self.ncols = 2 * pres.ngens
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.p = [0]
        self.max = max_cosets
        self.live = 1
        self.queue: list[int] = []
        self.deductions: list[tuple[int, int]] = []
        self.track = False

    # -- coincidences --------------------------------------------------------
    def rep(self, k: int) -> int:
        p = self.p
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def merge(self, k: int, l: int):
        a, b = self.rep(k), self.rep(l)
        if a != b:
            if a > b:
                a, b = b, a
            self.p[b] = a
            self.live -= 1
            self.queue.append(b)

    def coincidence(self, a: int, b: int):
        table = self.table
        self.queue = []
        self.merge(a, b)
        q = self.queue
        i = 0
        while i < len(q):
            g = q[i]
            i += 1
            row = table[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                xi = x ^ 1
                table[d][xi] = -1
                mu, nu = self.rep(g), self.rep(d)
                if table[mu][x] >= 0:
                    self.merge(nu, table[mu][x])
                elif table[nu][xi] >= 0:
                    self.merge(mu, table[nu][xi])
                else:
                    table[mu][x] = nu
                    table[nu][xi] = mu
                    if self.track:
                        self.deductions.append((mu, x))

    # -- definitions and scans -------------------------------------------------
    def define(self, a: int, x: int) -> int:
        if len(self.table) >= self.max:
            raise _Full()
        b = len(self.table)
        row = [-1] * self.ncols
        row[x ^ 1] = a
        self.table.append(row)
        self.p.append(b)
        self.table[a][x] = b
        self.live += 1
        if self.track:
            self.deductions.append((a, x))
        return b

    def scan_and_fill(self, a: int, w: Sequence[int]):
        table = self.table
        f = b = a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                if self.track:
                    self.deductions.append((f, w[i]))
                return
            self.define(f, w[i])

    def scan(self, a: int, w: Sequence[int]):
        """Scan without defining; record a deduction or a coincidence."""
        table = self.table
        f = a
        i, j = 0, len(w) - 1
        while i <= j and table[f][w[i]] >= 0:
            f = table[f][w[i]]
            i += 1
        if i > j:
            if f != a:
                self.coincidence(f, a)
            return
        b = a
        while j >= i and table[b][w[j] ^ 1] >= 0:
            b = table[b][w[j] ^ 1]
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif i == j:
            table[f][w[i]] = b
            table[b][w[i] ^ 1] = f
            if self.track:
                self.deductions.append((f, w[i]))

    def is_live(self, k: int) -> bool:
        return self.p[k] == k

    def compact(self) -> list[list[int]]:
        """Renumber live cosets in increasing order; returns the new table."""
        alive = [k for k in range(len(self.table)) if self.p[k] == k]
        new = {k: i for i, k in enumerate(alive)}
        out = []
        for k in alive:
            out.append([new[self.rep(v)] if v >= 0 else -1 for v in self.table[k]])
        return out


class _Full(Exception):
    pass


def _hlt(e: _Enumerator, relators, subgens):
    for w in subgens:
        e.scan_and_fill(0, w)
    a = 0
    while a < len(e.table):
        if e.is_live(a):
            try:
                for r in relators:
                    e.scan_and_fill(a, r)
                    if not e.is_live(a):
                        break
                else:
                    row = e.table[a]
                    for x in range(e.ncols):
                        if row[x] < 0:
                            e.define(a, x)
            except _Full:
                a = _lookahead(e, relators, a)
                if a is None:
                    raise
                continue
        a += 1


def _lookahead(e: _Enumerator, relators, current: int) -> int | None:
    """Scan every live coset without defining, then compact.

    Returns the new number of the coset the main loop should resume at, or
    None when no space was freed.
    """
    before = e.live
    for b in range(len(e.table)):
        if e.is_live(b):
            for r in relators:
                e.scan(b, r)
                if not e.is_live(b):
                    break
    if e.live >= before:
        return None
    resume = sum(1 for k in range(current) if e.p[k] == k)
    _compact_in_place(e)
    return resume


def _compact_in_place(e: _Enumerator):
    table = e.compact()
    e.table = table
    e.p = list(range(len(table)))
    e.live = len(table)


def _felsch(e: _Enumerator, relators, subgens):
    ncols = e.ncols
    # cyclic conjugates of relators and their inverses, bucketed by first letter
    starts: list[list[tuple[int, ...]]] = [[] for _ in range(ncols)]
    seen = set()
    for r in relators:
        inv = tuple(a ^ 1 for a in reversed(r))
        for w in (r, inv):
            for k in range(len(w)):
                c = w[k:] + w[:k]
                if c not in seen:
                    seen.add(c)
                    starts[c[0]].append(c)
    e.track = True

    def process():
        ded = e.deductions
        while ded:
            g, x = ded.pop()
            if not e.is_live(g):
                continue
            for w in starts[x]:
                e.scan(g, w)
                if not e.is_live(g):
                    break
            if not e.is_live(g):
                continue
            d = e.table[g][x]
            if d >= 0 and e.is_live(d):
                for w in starts[x ^ 1]:
                    e.scan(d, w)
                    if not e.is_live(d):
                        break

    for w in subgens:
        e.scan_and_fill(0, w)
    process()
    a = 0
    while a < len(e.table):
        if e.is_live(a):
            row = e.table[a]
            for x in range(ncols):
                if e.is_live(a) and row[x] < 0:
                    try:
                        e.define(a, x)
                    except _Full:
                        raise CosetLimitExceeded(e.max) from None
                    process()
        a += 1


def enumerate_cosets(
    pres: Presentation,
    subgens: Iterable[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
    strategy: str = "hlt",
) -> "CosetTable":
    """Enumerate the right cosets of ``<subgens>`` in the group ``pres``.

    Raises :class:`CosetLimitExceeded` when more than ``max_cosets`` cosets
    would be alive at once.  The returned table is standardized.
    """
    subgens = [w for w in subgens]
    relators = [r.letters for r in pres.cyclic_relators]
    e = _Enumerator(pres, max_cosets)
    sub_letters = [w.reduce().letters for w in subgens]
    try:
        if strategy == "hlt":
            _hlt(e, relators, sub_letters)
        elif strategy == "felsch":
            _felsch(e, relators, sub_letters)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
    except _Full:
        raise CosetLimitExceeded(max_cosets) from None
    rows = e.compact()
    t = CosetTable(pres, tuple(subgens), rows)
    return standardize(t)


# ---------------------------------------------------------------------------
# complete tables


@dataclass(frozen=True, eq=False)
class CosetTable:
    presentation: Presentation
    subgens: tuple[Word, ...]
    rows: list[list[int]] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, CosetTable):
            return NotImplemented
        return self.presentation == other.presentation and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(map(tuple, self.rows)))

    def key(self) -> tuple:
        return tuple(map(tuple, self.rows))

    def columns(self) -> np.ndarray:
        """``(2*ngens, n)`` array; row ``x`` is the permutation of letter ``x``."""
        cols = self.__dict__.get("_cols")
        if cols is None:
            cols = np.array(self.rows, dtype=np.int64).T.copy()
            object.__setattr__(self, "_cols", cols)
        return cols

    def trace(self, coset: int, w: Word) -> int:
        rows = self.rows
        for a in w.letters:
            coset = rows[coset][a]
        return coset

    def is_complete(self) -> bool:
        return all(v >= 0 for row in self.rows for v in row)

    def check(self) -> list[str]:
        """List of invariant violations (empty when the table is sound)."""
        problems = []
        rows = self.rows
        n = self.n
        for k, row in enumerate(rows):
            for x, v in enumerate(row):
                if not 0 <= v < n:
                    problems.append(f"entry ({k},{x}) undefined")
                elif rows[v][x ^ 1] != k:
                    problems.append(f"columns {x},{x ^ 1} not inverse at coset {k}")
        if problems:
            return problems
        for r in self.presentation.relators:
            perm = action_of(self, r)
            if not np.array_equal(perm, np.arange(n)):
                problems.append(f"relator {self.presentation.format_word(r)} acts nontrivially")
        for w in self.subgens:
            if self.trace(0, w) != 0:
                problems.append(f"subgroup generator {self.presentation.format_word(w)} moves coset 0")
        return problems

    def to_json(self) -> dict:
        pres = self.presentation
        return {
            "n": self.n,
            "generators": list(pres.generators),
            "subgroup": [pres.format_word(w) for w in self.subgens],
            "action": {
                g: [self.rows[k][2 * i] for k in range(self.n)] for i, g in enumerate(pres.generators)
            },
        }

    @classmethod
    def from_json(cls, data: dict, pres: Presentation) -> "CosetTable":
        if list(data["generators"]) != list(pres.generators):
            raise ValueError("generator names do not match the presentation")
        n = data["n"]
        rows = [[-1] * (2 * pres.ngens) for _ in range(n)]
        for i, g in enumerate(pres.generators):
            for k, v in enumerate(data["action"][g]):
                rows[k][2 * i] = v
                rows[v][2 * i + 1] = k
        subgens = tuple(pres.word(s) for s in data["subgroup"])
        return cls(pres, subgens, rows)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def action_of(table: CosetTable, w: Word) -> np.ndarray:
    """Permutation of cosets induced by right multiplication by ``w``."""
    cols = table.columns()
    perm = np.arange(table.n)
    for a in w.letters:
        perm = cols[a][perm]
    return perm


def _orbit_labels(n: int, perms: Sequence[np.ndarray]) -> np.ndarray:
    parent = list(range(n))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for perm in perms:
        for k, v in enumerate(perm.tolist()):
            a, b = find(k), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return np.array([find(k) for k in range(n)])


def orbits(table: CosetTable, gens: Sequence[Word]) -> list[list[int]]:
    labels = _orbit_labels(table.n, [action_of(table, w) for w in gens])
    out: dict[int, list[int]] = {}
    for k, lab in enumerate(labels.tolist()):
        out.setdefault(lab, []).append(k)
    return list(out.values())


def orbit_count(table: CosetTable, gens: Sequence[Word]) -> int:
    return len(orbits(table, gens))


def fixed_cosets(table: CosetTable, gens: Sequence[Word]) -> list[int]:
    """Cosets fixed by every word in ``gens``.

    When ``gens`` generate the subgroup ``H`` of the table, ``H`` fixes the
    coset ``Hx`` iff ``xHx^-1 <= H``; a conjugate of a finite-index subgroup
    has the same index, so this forces equality and the fixed cosets are
    exactly ``N(H)/H``.
    """
    fixed = np.ones(table.n, dtype=bool)
    for w in gens:
        fixed &= action_of(table, w) == np.arange(table.n)
    return [int(k) for k in np.flatnonzero(fixed)]


def _bfs_order(rows: list[list[int]], start: int) -> list[int]:
    order = [start]
    seen = {start}
    i = 0
    while i < len(order):
        for v in rows[order[i]]:
            if v not in seen:
                seen.add(v)
                order.append(v)
        i += 1
    return order


def standardize(table: CosetTable, base: int = 0) -> CosetTable:
    """Renumber cosets in BFS discovery order from ``base`` (columns in order).

    With ``base != 0`` the result is the table of the stabiliser of ``base``,
    i.e. of the subgroup conjugated by a transversal word of ``base``.
    """
    rows = table.rows
    order = _bfs_order(rows, base)
    if len(order) != len(rows):
        raise ValueError("coset table is not transitive")
    new = {k: i for i, k in enumerate(order)}
    out = [[new[v] for v in rows[k]] for k in order]
    subgens = table.subgens
    if base != 0:
        u = transversal(table)[base]
        subgens = tuple(w.conj(u) for w in subgens)
    return CosetTable(table.presentation, subgens, out)


def rebase(table: CosetTable, base: int) -> CosetTable:
    return standardize(table, base)


def transversal(table: CosetTable) -> list[Word]:
    """Words ``u_k`` with ``0 . u_k = k`` along the BFS tree of the table."""
    rows = table.rows
    words: list[Word | None] = [None] * table.n
    words[0] = Word()
    q = deque([0])
    while q:
        k = q.popleft()
        for x, v in enumerate(rows[k]):
            if words[v] is None:
                words[v] = Word(words[k].letters + (x,))
                q.append(v)
    return words  # type: ignore[return-value]


def schreier_generators(table: CosetTable) -> list[Word]:
    """Schreier generators ``u_k g u_{kg}^-1`` of the subgroup (nontrivial only)."""
    u = transversal(table)
    out = []
    seen = set()
    rows = table.rows
    for k in range(table.n):
        for x in range(0, len(rows[k]), 2):
            w = (u[k] * Word((x,)) * u[rows[k][x]].inverse())
            if w and w.letters not in seen:
                seen.add(w.letters)
                out.append(w)
    if table.n == 1:
        return [Word.gen(i) for i in range(table.presentation.ngens)]
    return out


def conjugate_test(t1: CosetTable, t2: CosetTable) -> int | None:
    """A coset ``k`` of ``t1`` whose stabiliser is the subgroup of ``t2``.

    Returns None when the two subgroups are not conjugate.
    """
    if t1.presentation != t2.presentation or t1.n != t2.n:
        return None
    target = standardize(t2).rows
    for k in range(t1.n):
        if standardize(t1, k).rows == target:
            return k
    return None


def contains(t_sub: CosetTable, t_super: CosetTable) -> bool:
    """True iff the subgroup of ``t_sub`` lies in the subgroup of ``t_super``."""
    if t_sub.presentation != t_super.presentation:
        raise ValueError("tables over different presentations")
    if t_super.n > t_sub.n or t_sub.n % t_super.n:
        return False
    return all(t_super.trace(0, w) == 0 for w in schreier_generators(t_sub))


def stabilizer_words(table: CosetTable, gens: Sequence[Word], point: int = 0) -> list[Word]:
    """Words generating the stabiliser of ``point`` in ``<gens>``.

    The words are over the table's generators but are products of ``gens``
    and their inverses, so they live in ``<gens>`` as abstract elements.
    """
    rows = table.rows
    reps: dict[int, Word] = {point: Word()}
    q = deque([point])
    gens = list(gens)
    perms = [action_of(table, g) for g in gens]
    out: list[Word] = []
    seen = set()
    while q:
        k = q.popleft()
        for g, perm in zip(gens, perms):
            v = int(perm[k])
            if v not in reps:
                reps[v] = reps[k] * g
                q.append(v)
    for k in reps:
        for g, perm in zip(gens, perms):
            w = reps[k] * g * reps[int(perm[k])].inverse()
            if w and w.letters not in seen:
                seen.add(w.letters)
                out.append(w)
    return out


def index_of(pres: Presentation, subgens: Iterable[Word], max_cosets: int = DEFAULT_MAX_COSETS) -> int:
    return enumerate_cosets(pres, subgens, max_cosets).n
