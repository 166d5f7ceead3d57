"""Finite realizations of the groups L, B, R of an amalgam and the checks
that ``(L, B, R)`` is a faithful amalgam of index ``(d, 2)``.

L, B and R are presented by the relators of A that use only their
generators.  Each is realized as its right regular representation: element
``k`` is coset ``k`` of the trivial subgroup, and acts on the others by right
multiplication.  B is identified with its images in L and R through the
shared generator names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cosetenum import DEFAULT_MAX_COSETS, CosetTable, enumerate_cosets, transversal
from .permgroup import PermGroup, Permutation, closure, is_intransitive_klein
from .presentation import Presentation, Word
from .registry import AmalgamSpec, get_amalgam


class AmalgamError(ValueError):
    pass


class Realization(PermGroup):
    """Regular representation of a finitely presented finite group."""

    def __init__(self, pres: Presentation, table: CosetTable):
        cols = table.columns()
        n = table.n
        elements = np.empty((n, n), dtype=np.int16 if n < 2**15 else np.int32)
        elements[0] = np.arange(n)
        parent, letter = _bfs_tree(table)
        for k in range(1, n):
            elements[k] = cols[letter[k]][elements[parent[k]]]
        gens = [table.rows[0][2 * i] for i in range(pres.ngens)]
        super().__init__(elements, generators=[g for g in gens if g != 0], base=(0,))
        self.presentation = pres
        self.table = table
        self.gen_elements = gens
        self.tree = (parent, letter)

    def element(self, w: Word, source: Presentation | None = None) -> int:
        """Index of the element represented by ``w``.

        ``source`` is the presentation ``w`` is written over (matched by
        generator names); by default the realization's own.
        """
        if source is not None and source is not self.presentation:
            w = source.translate(w, self.presentation)
        return self.table.trace(0, w)

    def word_of(self, k: int) -> Word:
        """A shortest word (over this presentation) for element ``k``."""
        parent, letter = self.tree
        out = []
        while k:
            out.append(letter[k])
            k = parent[k]
        return Word(tuple(reversed(out)))

    def words_subgroup(self, words: Iterable[Word], source: Presentation | None = None) -> PermGroup:
        return self.generated(self.element(w, source) for w in words)


def _bfs_tree(table: CosetTable) -> tuple[np.ndarray, np.ndarray]:
    """Parent coset and letter for each coset along a BFS spanning tree."""
    n = table.n
    parent = np.full(n, -1, dtype=np.int64)
    letter = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = [0]
    i = 0
    rows = table.rows
    while i < len(queue):
        k = queue[i]
        for x, v in enumerate(rows[k]):
            if not seen[v]:
                seen[v] = True
                parent[v] = k
                letter[v] = x
                queue.append(v)
        i += 1
    return parent, letter


def realize_finite(pres: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> Realization:
    """Regular permutation representation of the finite group ``pres``.

    Raises ``CosetLimitExceeded`` when the group is infinite or too large.
    """
    return Realization(pres, enumerate_cosets(pres, (), max_cosets))


@dataclass(frozen=True)
class LocalAction:
    group: PermGroup
    # transversal words of (L:B) in the order of the four points
    omega: tuple[Word, ...]

    @property
    def order(self) -> int:
        return self.group.order

    def is_intransitive_klein(self) -> bool:
        return is_intransitive_klein(self.group)

    def is_symmetric(self) -> bool:
        return self.group.order == 24 and self.group.is_transitive()


class Amalgam:
    """An amalgam ``(L, B, R)`` with its finite realizations and ``rho``."""

    def __init__(self, spec: AmalgamSpec, d: int | None = None, max_cosets: int = DEFAULT_MAX_COSETS):
        self.spec = spec
        self.d = spec.d if d is None else d
        A = spec.presentation
        self.A = A
        order = lambda names: tuple(sorted(names, key=A.index))
        self.L_pres = A.restrict(order(spec.L_gens))
        self.B_pres = A.restrict(order(spec.B_gens))
        self.R_pres = A.restrict(order(spec.R_gens))
        self.L = realize_finite(self.L_pres, max_cosets)
        self.B = realize_finite(self.B_pres, max_cosets)
        self.R = realize_finite(self.R_pres, max_cosets)
        self.B_in_L = self._embed(self.L)
        self.B_in_R = self._embed(self.R)
        # action of L on (L:B); point k is the k-th coset in BFS order
        self.LB_table = enumerate_cosets(self.L_pres, self.L_pres.gen_words(self.B_pres.generators))
        self._rho_all = None

    def _embed(self, G: Realization) -> np.ndarray:
        """Image in ``G`` of every element of B (by words in B's generators)."""
        parent, letter = self.B.tree
        gens = [G.element(Word((x,)), self.B_pres) for x in range(2 * self.B_pres.ngens)]
        out = np.zeros(self.B.order, dtype=np.int64)
        for k in range(1, self.B.order):
            out[k] = int(G.mul(out[parent[k]], gens[letter[k]]))
        return out

    # -- local action ----------------------------------------------------------------
    @property
    def omega(self) -> tuple[Word, ...]:
        return tuple(self.L_pres.translate(w, self.A) for w in transversal(self.LB_table))

    @property
    def rho_images(self) -> np.ndarray:
        """``(|L|, d)`` array: row ``k`` is rho of element ``k`` of L."""
        if self._rho_all is None:
            L = self.L
            cols = self.LB_table.columns()
            parent, letter = L.tree
            phi = np.zeros(L.order, dtype=np.int64)
            for k in range(1, L.order):
                phi[k] = cols[letter[k]][phi[parent[k]]]
            reps = [L.element(w) for w in transversal(self.LB_table)]
            # rho(k) sends point w to the coset of t_w * k
            self._rho_all = np.stack([phi[L.elements[:, t]] for t in reps], axis=1)
        return self._rho_all

    def rho(self, w: Word) -> Permutation:
        """rho of an A-word over the L-generators."""
        return Permutation(self.rho_images[self.L_element(w)].tolist())

    def L_element(self, w: Word) -> int:
        self._check_over(w, self.L_pres)
        return self.L.element(w, self.A)

    def R_element(self, w: Word) -> int:
        self._check_over(w, self.R_pres)
        return self.R.element(w, self.A)

    def _check_over(self, w: Word, sub: Presentation):
        allowed = {self.A.index(g) for g in sub.generators}
        bad = [self.A.generators[i] for i in w.generators_used() if i not in allowed]
        if bad:
            raise AmalgamError(f"word uses generators {bad} outside {list(sub.generators)}")

    def L_subgroup(self, words: Sequence[Word]) -> PermGroup:
        return self.L.generated(self.L_element(w) for w in words)

    def R_subgroup(self, words: Sequence[Word]) -> PermGroup:
        return self.R.generated(self.R_element(w) for w in words)

    def local_action_of(self, H: PermGroup) -> PermGroup:
        """rho-image of a subgroup of the realized L."""
        idx = H.indices_in(self.L)
        imgs = np.unique(self.rho_images[idx], axis=0)
        return closure([row for row in imgs], degree=self.LB_table.n)


def build_amalgam(name_or_spec, d: int | None = None, max_cosets: int = DEFAULT_MAX_COSETS) -> Amalgam:
    spec = get_amalgam(name_or_spec) if isinstance(name_or_spec, str) else name_or_spec
    return Amalgam(spec, d=d, max_cosets=max_cosets)


def local_action(am: Amalgam, words: Sequence[Word]) -> LocalAction:
    """Image of ``<words>`` under the action of L on ``(L:B)``."""
    imgs = [am.rho_images[am.L_element(w)] for w in words]
    return LocalAction(closure(imgs, degree=am.LB_table.n), am.omega)


def validate(am: Amalgam) -> dict:
    """Check the amalgam conditions; JSON-ready report with witnesses."""
    L, B, R = am.L, am.B, am.R
    checks = []

    def add(name, ok, **info):
        checks.append({"condition": name, "pass": bool(ok), **info})

    add("B finite", True, order=B.order)
    emb_L_order = len(np.unique(am.B_in_L))
    emb_R_order = len(np.unique(am.B_in_R))
    add("B embeds in L", emb_L_order == B.order, image_order=emb_L_order)
    add("B embeds in R", emb_R_order == B.order, image_order=emb_R_order)
    idx_L = L.order // B.order if L.order % B.order == 0 else None
    idx_R = R.order // B.order if R.order % B.order == 0 else None
    add("|L:B| = d", idx_L == am.d, index=idx_L, d=am.d, coset_count=am.LB_table.n)
    add("|R:B| = 2", idx_R == 2, index=idx_R)

    core = two_sided_core(am)
    witness = None
    if len(core) > 1:
        witness = am.B_pres.format_word(B.word_of(int(core[1])))
    add("core trivial", len(core) == 1, core_order=int(len(core)), witness=witness)
    add("generated by L and R", set(am.spec.L_gens) | set(am.spec.R_gens) == set(am.A.generators))
    return {
        "amalgam": am.spec.name,
        "orders": {"L": L.order, "B": B.order, "R": R.order},
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }


def two_sided_core(am: Amalgam) -> np.ndarray:
    """Largest subgroup of B normal in both L and R, as B-element indices."""
    M = np.arange(am.B.order)
    while True:
        ML = _normal_core(M, am.L, am.B_in_L)
        MR = _normal_core(M, am.R, am.B_in_R)
        nxt = np.intersect1d(ML, MR)
        if len(nxt) == len(M):
            return M
        M = nxt


def _normal_core(M: np.ndarray, G: Realization, embed: np.ndarray) -> np.ndarray:
    """Intersect ``M`` with its conjugates under the generators of ``G`` until stable."""
    cur = np.asarray(M)
    gens = [g for g in G.gen_elements if g != 0]
    while True:
        inside = np.zeros(G.order, dtype=bool)
        inside[embed[cur]] = True
        keep = np.ones(len(cur), dtype=bool)
        elems = embed[cur]
        for g in gens:
            for x in (g, int(G.inverses[g])):
                xinv = np.full(len(cur), int(G.inverses[x]))
                images = G.mul(G.mul(xinv, elems), np.full(len(cur), x))
                keep &= inside[images]
        if keep.all():
            return cur
        cur = cur[keep]


def assemble_universal(am: Amalgam) -> Presentation:
    """Presentation of ``L *_B R``: L- and R-generators with all their relators."""
    A = am.A
    names = [g for g in A.generators if g in set(am.spec.L_gens) | set(am.spec.R_gens)]
    Lset = {A.index(g) for g in am.spec.L_gens}
    Rset = {A.index(g) for g in am.spec.R_gens}
    rels = [r for r in A.relators if r.generators_used() <= Lset or r.generators_used() <= Rset]
    sub = Presentation(tuple(A.generators), tuple(rels))
    return sub.restrict(tuple(names))
