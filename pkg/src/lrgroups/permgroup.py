"""Finite permutation groups stored as explicit element lists.

All groups handled here are small (order at most a few times 10^4), so a
group is simply an ``(order, degree)`` integer array of images, one row per
element, with the identity in row 0.  Points are numbered from 0; products
compose left to right, ``(p*q)(i) = q(p(i))``.

Elements are looked up through a *base*: a few points whose images already
determine the element.  For a regular representation one point suffices.
"""

from __future__ import annotations

import re
from collections import deque
from typing import Callable, Iterable, Sequence

import numpy as np


class GroupTooLarge(RuntimeError):
    pass


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        self.images = tuple(int(v) for v in images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        img = list(range(degree))
        for c in cycles:
            for k, v in enumerate(c):
                img[v] = c[(k + 1) % len(c)]
        return cls(img)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "Permutation":
        """Parse ``"[1, 0, 3, 2]"`` (0-based images) or ``"(1 2)(3 4)"``.

        Cycle notation is 1-based, as in GAP or Magma.
        """
        text = text.strip()
        if text.startswith("["):
            return cls(int(v) for v in re.findall(r"-?\d+", text))
        cycles = [
            [int(v) - 1 for v in re.findall(r"\d+", c)] for c in re.findall(r"\(([^)]*)\)", text)
        ]
        if degree is None:
            degree = max((max(c) for c in cycles if c), default=-1) + 1
        return cls.from_cycles([c for c in cycles if c], degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(other.images[v] for v in self.images)

    def __pow__(self, n: int) -> "Permutation":
        base = self if n >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(n)):
            out = out * base
        return out

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for k, v in enumerate(self.images):
            inv[v] = k
        return Permutation(inv)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({self.cycle_string()})"

    def is_identity(self) -> bool:
        return all(k == v for k, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for k in range(len(self.images)):
            if k in seen or self.images[k] == k:
                continue
            c = [k]
            seen.add(k)
            j = self.images[k]
            while j != k:
                c.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(c))
        return out

    def cycle_string(self) -> str:
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + " ".join(str(v + 1) for v in c) + ")" for c in cs)

    def order(self) -> int:
        o = 1
        for c in self.cycles():
            o = o * len(c) // np.gcd(o, len(c))
        return int(o)


def _dtype(degree: int):
    return np.int16 if degree <= np.iinfo(np.int16).max else np.int32


class PermGroup:
    """A finite permutation group with its full element list.

    ``elements[i]`` is the image array of element ``i``; row 0 is the
    identity.  A subgroup created through :meth:`subgroup` remembers the
    indices of its elements in the parent (``parent_index``).
    """

    def __init__(self, elements, generators: Sequence[int] | None = None, base=None,
                 parent: "PermGroup | None" = None, parent_index=None):
        self.elements = np.ascontiguousarray(elements)
        self.order, self.degree = self.elements.shape
        if self.order == 0 or not np.array_equal(self.elements[0], np.arange(self.degree)):
            raise ValueError("row 0 must be the identity")
        self.base = tuple(base) if base is not None else _find_base(self.elements)
        self._build_lookup()
        self.generators = list(generators) if generators is not None else _greedy_generators(self)
        self.parent = parent
        self.parent_index = None if parent_index is None else np.asarray(parent_index)
        self._inv = None
        self._orders = None
        self._inv_base = None

    # -- construction ----------------------------------------------------------
    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(np.arange(degree, dtype=_dtype(degree))[None, :], generators=[])

    def _build_lookup(self):
        m = self.degree
        if len(self.base) and m ** len(self.base) >= 2**62:
            raise GroupTooLarge("base too long for integer keys")
        keys = self._keys_of(self.elements[:, list(self.base)])
        order = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[order]
        self._sorted_idx = order
        if len(np.unique(keys)) != self.order:
            raise ValueError("base does not separate the elements (duplicate elements?)")

    def _keys_of(self, base_images: np.ndarray) -> np.ndarray:
        keys = np.zeros(base_images.shape[:-1], dtype=np.int64)
        for j in range(base_images.shape[-1]):
            keys = keys * self.degree + base_images[..., j].astype(np.int64)
        return keys

    # -- lookup ----------------------------------------------------------------
    def indices_from_base_images(self, base_images: np.ndarray, missing_ok=False) -> np.ndarray:
        keys = self._keys_of(np.asarray(base_images))
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        hit = self._sorted_keys[pos] == keys
        idx = self._sorted_idx[pos]
        if missing_ok:
            return np.where(hit, idx, -1)
        if not hit.all():
            raise KeyError("permutation is not an element of the group")
        return idx

    def indices(self, rows: np.ndarray, missing_ok=False) -> np.ndarray:
        rows = np.asarray(rows)
        idx = self.indices_from_base_images(rows[..., list(self.base)], missing_ok=True)
        # the base only identifies elements *of this group*; confirm membership
        ok = idx >= 0
        if ok.any():
            flat_rows = rows.reshape(-1, self.degree)
            flat_idx = idx.reshape(-1)
            good = np.flatnonzero(flat_idx >= 0)
            same = (self.elements[flat_idx[good]] == flat_rows[good]).all(axis=1)
            flat_idx[good[~same]] = -1
            idx = flat_idx.reshape(idx.shape)
        if not missing_ok and (idx < 0).any():
            raise KeyError("permutation is not an element of the group")
        return idx

    def index(self, perm) -> int:
        images = perm.images if isinstance(perm, Permutation) else perm
        return int(self.indices(np.asarray(images)[None, :])[0])

    def __contains__(self, perm) -> bool:
        images = perm.images if isinstance(perm, Permutation) else perm
        if len(images) != self.degree:
            return False
        return int(self.indices(np.asarray(images)[None, :], missing_ok=True)[0]) >= 0

    def perm(self, i: int) -> Permutation:
        return Permutation(self.elements[i].tolist())

    def __len__(self):
        return self.order

    # -- arithmetic on element indices ---------------------------------------------
    def mul(self, i, j):
        """Index of ``elements[i] * elements[j]`` (vectorised over arrays)."""
        i = np.asarray(i)
        j = np.asarray(j)
        bi = self.elements[i][..., list(self.base)]
        imgs = np.take_along_axis(self.elements[j], bi, axis=-1) if bi.ndim > 1 else self.elements[j][bi]
        return self.indices_from_base_images(imgs)

    def right_mult(self, j: int) -> np.ndarray:
        """Indices of ``g * elements[j]`` for every element ``g``."""
        imgs = self.elements[j][self.elements[:, list(self.base)]]
        return self.indices_from_base_images(imgs)

    @property
    def inverses(self) -> np.ndarray:
        if self._inv is None:
            # the inverse of g sends g(b) back to b for every base point b
            out = np.empty((self.order, len(self.base)), dtype=np.int64)
            chunk = max(1, 2**24 // max(1, self.degree))
            for k, b in enumerate(self.base):
                for s in range(0, self.order, chunk):
                    out[s:s + chunk, k] = np.argmax(self.elements[s:s + chunk] == b, axis=1)
            self._inv = self.indices_from_base_images(out)
        return self._inv

    def conj_all(self, h: int) -> np.ndarray:
        """Indices of ``x^-1 h x`` for every element ``x``."""
        if self._inv_base is None:
            self._inv_base = self.elements[self.inverses][:, list(self.base)]
        t = self.elements[h][self._inv_base]
        imgs = np.take_along_axis(self.elements, t.astype(np.int64), axis=1)
        return self.indices_from_base_images(imgs)

    def conj(self, h: int, x: int) -> int:
        xinv = int(self.inverses[x])
        return int(self.mul(self.mul(xinv, h), x))

    @property
    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            cur = np.arange(n)
            allidx = np.arange(n)
            k = 1
            while True:
                done = (cur == 0) & (orders == 0)
                orders[done] = k
                if (orders > 0).all():
                    break
                cur = self.mul(cur, allidx)
                k += 1
            self._orders = orders
        return self._orders

    # -- subgroups -------------------------------------------------------------
    def subgroup(self, idx: Iterable[int]) -> "PermGroup":
        idx = np.array(sorted(set(int(i) for i in idx)), dtype=np.int64)
        if idx[0] != 0:
            raise ValueError("subgroup must contain the identity")
        return PermGroup(self.elements[idx], base=self.base, parent=self, parent_index=idx)

    def closure_indices(self, gens: Iterable[int], start: Iterable[int] = (0,)) -> np.ndarray:
        """Sorted indices of the subgroup generated by ``gens`` (and ``start``)."""
        gens = [int(g) for g in gens]
        cols = [self.right_mult(g) for g in gens]
        seen = np.zeros(self.order, dtype=bool)
        frontier = np.unique(np.asarray(list(start), dtype=np.int64))
        seen[frontier] = True
        while frontier.size:
            nxt = []
            for col in cols:
                v = col[frontier]
                v = v[~seen[v]]
                if v.size:
                    v = np.unique(v)
                    seen[v] = True
                    nxt.append(v)
            frontier = np.unique(np.concatenate(nxt)) if nxt else np.empty(0, dtype=np.int64)
        return np.flatnonzero(seen)

    def generated(self, gens: Iterable[int]) -> "PermGroup":
        gens = [int(g) for g in gens]
        sub = self.subgroup(self.closure_indices(gens))
        sub.generators = [int(np.searchsorted(sub.parent_index, g)) for g in gens if g != 0]
        return sub

    def indices_in(self, ambient: "PermGroup") -> np.ndarray:
        """Indices of this group's elements inside ``ambient``."""
        if self.parent is ambient and self.parent_index is not None:
            return self.parent_index
        return np.sort(ambient.indices(self.elements))

    def orbits(self) -> list[list[int]]:
        return orbits_of(self.degree, [self.elements[g] for g in self.generators])

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def point_stabilizer(self, point: int) -> "PermGroup":
        idx = np.flatnonzero(self.elements[:, point] == point)
        return self.subgroup(idx)

    def setwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        mask = np.zeros(self.degree, dtype=bool)
        mask[list(points)] = True
        keep = mask[self.elements][:, mask].all(axis=1)
        return self.subgroup(np.flatnonzero(keep))

    def normalizer(self, H: "PermGroup") -> "PermGroup":
        """``N_G(H)`` by filtering the elements of ``G``."""
        hidx = H.indices_in(self)
        member = np.zeros(self.order, dtype=bool)
        member[hidx] = True
        keep = np.ones(self.order, dtype=bool)
        hsub = self.subgroup(hidx)
        for g in hsub.generators:
            keep &= member[self.conj_all(int(hidx[g]))]
        return self.subgroup(np.flatnonzero(keep))

    def is_normal(self, H: "PermGroup") -> bool:
        return self.normalizer(H).order == self.order

    def conjugacy_canon(self, idx: np.ndarray) -> tuple[tuple[int, ...], np.ndarray]:
        """Canonical label of the class of the subgroup ``idx`` and its normaliser.

        The label is the lexicographically least sorted tuple of element
        indices over all conjugates.
        """
        idx = np.asarray(idx, dtype=np.int64)
        conj = np.stack([self.conj_all(int(h)) for h in idx], axis=1)
        conj.sort(axis=1)
        rows = np.unique(conj, axis=0)
        canon = tuple(int(v) for v in rows[0])
        own = np.sort(idx)
        normaliser = np.flatnonzero((conj == own).all(axis=1))
        return canon, normaliser

    def subgroup_classes(
        self,
        predicate: Callable[["PermGroup"], bool] | None = None,
        prune: Callable[["PermGroup"], bool] | None = None,
        p: int | None = None,
        cap: int = 100000,
    ) -> list["PermGroup"]:
        """Representatives of the conjugacy classes of subgroups.

        ``p`` restricts the search to ``p``-subgroups.  ``prune`` must be
        inherited by subgroups (a subgroup of a passing group passes); groups
        failing it are not extended.  ``predicate`` filters the final list.
        """
        return [self.subgroup(ix) for ix in _subgroup_class_indices(self, prune, p, cap)
                if predicate is None or predicate(self.subgroup(ix))]

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1


def _find_base(elements: np.ndarray) -> tuple[int, ...]:
    order, degree = elements.shape
    if order == 1:
        return ()
    base: list[int] = []
    keys = np.zeros(order, dtype=np.int64)
    best = 1
    for pt in range(degree):
        trial = keys * degree + elements[:, pt].astype(np.int64)
        distinct = len(np.unique(trial))
        if distinct > best:
            base.append(pt)
            keys = trial
            best = distinct
            if best == order:
                return tuple(base)
    raise ValueError("duplicate elements in element list")


def _greedy_generators(G: PermGroup) -> list[int]:
    gens: list[int] = []
    inside = np.zeros(G.order, dtype=bool)
    inside[0] = True
    for i in range(G.order):
        if not inside[i]:
            gens.append(i)
            inside[:] = False
            inside[G.closure_indices(gens)] = True
    return gens


def orbits_of(degree: int, perms: Sequence[np.ndarray]) -> list[list[int]]:
    parent = list(range(degree))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for perm in perms:
        for k, v in enumerate(np.asarray(perm).tolist()):
            a, b = find(k), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    out: dict[int, list[int]] = {}
    for k in range(degree):
        out.setdefault(find(k), []).append(k)
    return list(out.values())


def closure(gens: Sequence[Permutation | Sequence[int]], cap: int = 20000, degree: int | None = None) -> PermGroup:
    """All elements of ``<gens>`` in breadth-first order from the identity."""
    rows = [np.asarray(g.images if isinstance(g, Permutation) else g) for g in gens]
    if degree is None:
        if not rows:
            raise ValueError("degree required for an empty generator list")
        degree = len(rows[0])
    dt = _dtype(degree)
    rows = [r.astype(dt) for r in rows]
    if any(len(r) != degree for r in rows):
        raise ValueError("generators on different domains")
    ident = np.arange(degree, dtype=dt)
    elems = [ident]
    seen = {ident.tobytes(): 0}
    gen_idx = []
    for r in rows:
        key = r.tobytes()
        if key not in seen:
            seen[key] = len(elems)
            elems.append(r)
        gen_idx.append(seen[key])
    i = 0
    while i < len(elems):
        e = elems[i]
        for r in rows:
            prod = r[e]
            key = prod.tobytes()
            if key not in seen:
                if len(elems) >= cap:
                    raise GroupTooLarge(f"group order exceeds cap {cap}")
                seen[key] = len(elems)
                elems.append(prod)
        i += 1
    return PermGroup(np.stack(elems), generators=[g for g in gen_idx if g != 0])


def from_cayley_columns(elements: np.ndarray, generators: Sequence[int]) -> PermGroup:
    """A regular representation whose element ``k`` sends point 0 to ``k``."""
    return PermGroup(elements, generators=generators, base=(0,))


def is_intransitive_klein(G: PermGroup) -> bool:
    if G.degree != 4 or G.order != 4:
        return False
    if not (G.element_orders[1:] == 2).all():
        return False
    return sorted(len(o) for o in G.orbits()) == [2, 2]


def is_dihedral_of_order_8(G: PermGroup) -> bool:
    if G.order != 8:
        return False
    counts = np.bincount(G.element_orders, minlength=9)
    # D4: one identity, five involutions, two elements of order 4
    return bool(counts[1] == 1 and counts[2] == 5 and counts[4] == 2)


def is_elementary_abelian_2(G: PermGroup) -> bool:
    return G.is_p_group(2) and bool((G.element_orders[1:] == 2).all())


def _subgroup_class_indices(G: PermGroup, prune, p, cap) -> list[np.ndarray]:
    trivial = np.array([0], dtype=np.int64)
    canon, norm = G.conjugacy_canon(trivial)
    found = {canon: trivial}
    layer = [(trivial, norm)]
    pool = np.arange(1, G.order)
    if p is not None:
        orders = G.element_orders
        o = orders.copy()
        while True:
            divisible = (o % p == 0)
            if not divisible.any():
                break
            o[divisible] //= p
        pool = np.flatnonzero((o == 1) & (orders > 1))
    while layer:
        nxt = []
        for H, normaliser in layer:
            member = np.zeros(G.order, dtype=bool)
            member[H] = True
            cand = pool[~member[pool]]
            if p is not None:
                # K = <H, g> with g normalising H and g^p in H
                inN = np.zeros(G.order, dtype=bool)
                inN[normaliser] = True
                cand = cand[inN[cand]]
                gp = cand.copy()
                for _ in range(p - 1):
                    gp = G.mul(gp, cand)
                cand = cand[member[gp]]
            made = np.zeros(G.order, dtype=bool)
            hgens = _generators_of(G, H)
            for g in cand.tolist():
                if made[g]:
                    continue
                # every element of the coset Hg gives the same extension
                made[G.mul(H, np.full(H.shape, g))] = True
                K = G.closure_indices(hgens + [g])
                if prune is not None and not prune(G.subgroup(K)):
                    continue
                c, nK = G.conjugacy_canon(K)
                if c not in found:
                    if len(found) >= cap:
                        raise GroupTooLarge(f"more than {cap} subgroup classes")
                    found[c] = K
                    nxt.append((K, nK))
        layer = nxt
    return [found[c] for c in sorted(found, key=lambda c: (len(c), c))]


def _generators_of(G: PermGroup, idx: np.ndarray) -> list[int]:
    gens: list[int] = []
    inside = np.zeros(G.order, dtype=bool)
    inside[0] = True
    for i in idx.tolist():
        if not inside[i]:
            gens.append(i)
            inside[:] = False
            inside[G.closure_indices(gens)] = True
    return gens
