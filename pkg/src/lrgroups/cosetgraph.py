"""Finite tetravalent graphs: automorphism groups, LR-decompositions and
self-duality, and coset graphs of finite completions of an amalgam.

A decomposition is stored as an edge colouring with two colours.  Colour 0
(ℒ) is the class of the lexicographically smallest edge; each colour class
is a spanning 2-regular subgraph whose components are the cycles.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cosetenum import CosetLimitExceeded, enumerate_cosets, transversal
from .permgroup import GroupTooLarge, PermGroup, Permutation, closure, is_intransitive_klein, orbits_of
from .presentation import Presentation, Word

MAX_AUT_VERTICES = 512
MAX_DECOMPOSITION_VERTICES = 64


class GraphError(ValueError):
    pass


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Graph:
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], check: bool = True) -> "Graph":
        nb: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at {u}")
            if v in nb[u]:
                raise GraphError(f"repeated edge {u}-{v}")
            nb[u].add(v)
            nb[v].add(u)
        g = cls(tuple(tuple(sorted(s)) for s in nb))
        if check:
            g.validate()
        return g

    @property
    def n(self) -> int:
        return len(self.adj)

    def validate(self, degree: int = 4):
        for v, nb in enumerate(self.adj):
            if len(nb) != degree:
                raise GraphError(f"vertex {v} has degree {len(nb)}, expected {degree}")
            for w in nb:
                if w == v or v not in self.adj[w]:
                    raise GraphError(f"adjacency not symmetric at {v}-{w}")
        if self.n and len(self.components()) != 1:
            raise GraphError("graph is not connected")

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            q = deque([s])
            while q:
                v = q.popleft()
                for w in self.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        q.append(w)
            out.append(sorted(comp))
        return out

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def edge_ids(self) -> np.ndarray:
        """``n x n`` matrix of edge indices (``-1`` for non-edges)."""
        ids = self.__dict__.get("_eids")
        if ids is None:
            ids = -np.ones((self.n, self.n), dtype=np.int64)
            for k, (u, v) in enumerate(self.edges()):
                ids[u, v] = ids[v, u] = k
            object.__setattr__(self, "_eids", ids)
        return ids

    def distances(self) -> np.ndarray:
        d = self.__dict__.get("_dist")
        if d is None:
            d = np.full((self.n, self.n), -1, dtype=np.int64)
            for s in range(self.n):
                d[s, s] = 0
                q = deque([s])
                while q:
                    v = q.popleft()
                    for w in self.adj[v]:
                        if d[s, w] < 0:
                            d[s, w] = d[s, v] + 1
                            q.append(w)
            object.__setattr__(self, "_dist", d)
        return d

    def is_automorphism(self, perm) -> bool:
        p = perm.images if isinstance(perm, Permutation) else tuple(int(v) for v in perm)
        if sorted(p) != list(range(self.n)):
            return False
        return all(tuple(sorted(p[w] for w in self.adj[v])) == self.adj[p[v]] for v in range(self.n))

    def format(self) -> str:
        lines = [f"n {self.n}"]
        lines += [f"{v}: " + " ".join(map(str, nb)) for v, nb in enumerate(self.adj)]
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse ``n <count>`` followed by lines ``v: a b c d``."""
    n = None
    nb: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if n is None:
                key, val = line.split()
                if key != "n":
                    raise ValueError
                n = int(val)
                continue
            head, _, rest = line.partition(":")
            if not _:
                raise ValueError
            nb[int(head)] = [int(t) for t in rest.split()]
        except ValueError:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise GraphError("missing 'n <count>' header")
    if sorted(nb) != list(range(n)):
        raise GraphError("vertex lines must cover 0..n-1 exactly once")
    edges = set()
    for v, ws in nb.items():
        for w in ws:
            if not 0 <= w < n:
                raise GraphError(f"vertex {v}: neighbour {w} out of range")
            if v not in nb[w]:
                raise GraphError(f"edge {v}-{w} listed on one side only")
            edges.add((min(v, w), max(v, w)))
    return Graph.from_edges(n, sorted(edges))


def product_graph(m: int, n: int) -> Graph:
    """``C_m x C_n`` (Cartesian); vertex ``(i, j)`` is ``j*m + i``."""
    if m < 5 or n < 5:
        raise GraphError("cycle lengths must be at least 5")
    vid = lambda i, j: (j % n) * m + (i % m)
    edges = set()
    for j in range(n):
        for i in range(m):
            for a, b in ((vid(i, j), vid(i + 1, j)), (vid(i, j), vid(i, j + 1))):
                edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(m * n, sorted(edges))


def product_generators(m: int, n: int) -> list[Permutation]:
    """Rotations and reflections of each factor of ``C_m x C_n``."""
    vid = lambda i, j: (j % n) * m + (i % m)
    maps = [
        lambda i, j: (i + 1, j),
        lambda i, j: (-i, j),
        lambda i, j: (i, j + 1),
        lambda i, j: (i, -j),
    ]
    out = []
    for f in maps:
        img = [0] * (m * n)
        for j in range(n):
            for i in range(m):
                img[vid(i, j)] = vid(*f(i, j))
        out.append(Permutation(img))
    return out


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2), check=False)


# ---------------------------------------------------------------------------
# automorphisms


def _refine_colours(g: Graph) -> list[int]:
    colours = [len(nb) for nb in g.adj]
    while True:
        sig = [(colours[v], tuple(sorted(colours[w] for w in g.adj[v]))) for v in range(g.n)]
        table = {s: k for k, s in enumerate(sorted(set(sig)))}
        new = [table[s] for s in sig]
        if len(set(new)) == len(set(colours)):
            return new
        colours = new


def automorphisms(g: Graph, cap: int = 10**6) -> PermGroup:
    """The full automorphism group, enumerated by backtracking.

    Vertices are mapped in breadth-first order from vertex 0, each one to a
    free neighbour of its parent's image with the same refined colour,
    keeping distances to the first few mapped vertices.
    """
    n = g.n
    if n > MAX_AUT_VERTICES:
        raise GraphError(f"automorphism search limited to {MAX_AUT_VERTICES} vertices")
    if n == 0:
        raise GraphError("empty graph")
    if len(g.components()) != 1:
        raise GraphError("graph is not connected")
    colour = _refine_colours(g)
    dist = g.distances()
    order = [0]
    parent = {0: -1}
    for v in order:
        for w in g.adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    anchors = order[: min(n, 6)]
    adjset = [set(nb) for nb in g.adj]
    found: list[list[int]] = []
    image = [-1] * n
    used = [False] * n

    def candidates(pos: int) -> list[int]:
        u = order[pos]
        if pos == 0:
            return [w for w in range(n) if colour[w] == colour[u]]
        pu = image[parent[u]]
        out = []
        for w in g.adj[pu]:
            if used[w] or colour[w] != colour[u]:
                continue
            ok = True
            for a in anchors[: min(pos, len(anchors))]:
                if dist[u, a] != dist[w, image[a]]:
                    ok = False
                    break
            if ok:
                for x in g.adj[u]:
                    if image[x] >= 0 and image[x] not in adjset[w]:
                        ok = False
                        break
            if ok:
                out.append(w)
        return out

    stack = [(0, candidates(0))]
    while stack:
        pos, cands = stack[-1]
        if not cands:
            stack.pop()
            if stack:
                prev = order[stack[-1][0]]
                used[image[prev]] = False
                image[prev] = -1
            continue
        w = cands.pop(0)
        u = order[pos]
        image[u] = w
        used[w] = True
        if pos + 1 == n:
            if g.is_automorphism(image):
                found.append(list(image))
                if len(found) > cap:
                    raise GroupTooLarge(f"more than {cap} automorphisms")
            used[w] = False
            image[u] = -1
            continue
        stack.append((pos + 1, candidates(pos + 1)))
    found.sort()
    ident = list(range(n))
    found.remove(ident)
    elements = np.array([ident] + found, dtype=np.int16 if n < 2**15 else np.int32)
    return PermGroup(elements)


# ---------------------------------------------------------------------------
# orbits on edges and arcs


def _perm_rows(perms: Sequence) -> list[np.ndarray]:
    return [np.asarray(p.images if isinstance(p, Permutation) else p, dtype=np.int64) for p in perms]


def edge_orbits(g: Graph, perms: Sequence) -> list[list[int]]:
    ids = g.edge_ids()
    E = np.array(g.edges(), dtype=np.int64).reshape(-1, 2)
    acts = [ids[p[E[:, 0]], p[E[:, 1]]] for p in _perm_rows(perms)]
    return sorted(orbits_of(len(E), acts), key=min)


def arc_orbits(g: Graph, perms: Sequence) -> list[list[int]]:
    arcs = [(u, v) for u in range(g.n) for v in g.adj[u]]
    idx = {a: k for k, a in enumerate(arcs)}
    acts = []
    for p in _perm_rows(perms):
        acts.append(np.array([idx[(int(p[u]), int(p[v]))] for u, v in arcs]))
    return sorted(orbits_of(len(arcs), acts), key=min)


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class CycleDecomposition:
    graph: Graph = field(repr=False)
    # colour of each edge (edge order as in Graph.edges()); colour 0 is ℒ
    colour: tuple[int, ...]

    @classmethod
    def from_colour(cls, g: Graph, colour: Sequence[int]) -> "CycleDecomposition":
        colour = [int(c) for c in colour]
        if colour and colour[0] != 0:
            colour = [1 - c for c in colour]
        return cls(g, tuple(colour))

    def edges_of(self, c: int) -> list[tuple[int, int]]:
        return [e for e, k in zip(self.graph.edges(), self.colour) if k == c]

    def cycles(self, c: int) -> list[list[int]]:
        """Cycles of colour ``c`` as vertex sequences.

        Each starts at its smallest vertex and continues to the smaller of
        its two neighbours in the cycle.
        """
        nb: dict[int, list[int]] = {}
        for u, v in self.edges_of(c):
            nb.setdefault(u, []).append(v)
            nb.setdefault(v, []).append(u)
        seen = set()
        out = []
        for s in sorted(nb):
            if s in seen:
                continue
            cyc = [s]
            seen.add(s)
            prev, cur = s, min(nb[s])
            while cur != s:
                cyc.append(cur)
                seen.add(cur)
                a, b = nb[cur]
                prev, cur = cur, (b if a == prev else a)
            out.append(cyc)
        return out

    @property
    def L(self) -> list[list[int]]:
        return self.cycles(0)

    @property
    def R(self) -> list[list[int]]:
        return self.cycles(1)

    def is_valid_partition(self) -> bool:
        g = self.graph
        count = np.zeros((g.n, 2), dtype=np.int64)
        for (u, v), c in zip(g.edges(), self.colour):
            count[u, c] += 1
            count[v, c] += 1
        return bool((count == 2).all())

    def cycle_through(self, v: int, c: int) -> list[int]:
        for cyc in self.cycles(c):
            if v in cyc:
                return cyc
        raise GraphError(f"no colour-{c} cycle through {v}")

    def key(self) -> tuple[int, ...]:
        return self.colour

    def to_json(self) -> dict:
        return {"L": self.L, "R": self.R}


def _colour_images(g: Graph, aut: PermGroup, colour: np.ndarray) -> np.ndarray:
    """``(|aut|, |E|)``: colour of the image of every edge under every element."""
    ids = g.edge_ids()
    E = np.array(g.edges(), dtype=np.int64)
    P = aut.elements.astype(np.int64)
    img = ids[P[:, E[:, 0]], P[:, E[:, 1]]]
    return np.asarray(colour)[img]


def decomposition_groups(g: Graph, c: CycleDecomposition, aut: PermGroup) -> tuple[PermGroup, PermGroup]:
    """``(Aut+(Γ,𝒞), Aut(Γ,𝒞))`` as subgroups of ``aut``.

    Since every vertex meets one cycle of each colour and the graph is
    connected, an automorphism preserving 𝒞 either fixes both colour
    classes or swaps them.
    """
    col = np.array(c.colour)
    imgs = _colour_images(g, aut, col)
    keep = (imgs == col).all(axis=1)
    swap = (imgs == 1 - col).all(axis=1)
    return aut.subgroup(np.flatnonzero(keep)), aut.subgroup(np.flatnonzero(keep | swap))


def _reflection_witness(G: PermGroup, c: CycleDecomposition, v: int, colour: int) -> int | None:
    """An element of ``G_v`` reflecting the ``colour`` cycle at ``v`` and
    fixing the other cycle through ``v`` pointwise."""
    C = c.cycle_through(v, colour)
    D = c.cycle_through(v, 1 - colour)
    k = C.index(v)
    a, b = C[k - 1], C[(k + 1) % len(C)]
    E = G.elements
    ok = (E[:, v] == v) & (E[:, a] == b) & (E[:, b] == a)
    ok &= (E[:, D] == np.array(D)).all(axis=1)
    # preserving C setwise with v fixed and its neighbours swapped is a reflection
    Cset = np.zeros(G.degree, dtype=bool)
    Cset[C] = True
    ok &= Cset[E[:, C]].all(axis=1)
    hits = np.flatnonzero(ok)
    return int(hits[0]) if len(hits) else None


def satisfies_definition(g: Graph, c: CycleDecomposition, aut: PermGroup) -> tuple[bool, dict]:
    """Check conditions (a) and (b) for ``c``; witnesses at vertex 0.

    Given (a), a witness at one vertex transports to every vertex by
    conjugation inside Aut+.
    """
    info: dict = {"partition": c.is_valid_partition()}
    if not info["partition"]:
        return False, info
    plus, full = decomposition_groups(g, c, aut)
    info["aut_plus_order"] = plus.order
    info["aut_order"] = full.order
    info["vertex_transitive"] = plus.is_transitive()
    wit = {}
    for colour, label in ((0, "L"), (1, "R")):
        k = _reflection_witness(plus, c, 0, colour)
        wit[label] = None if k is None else plus.perm(k).cycle_string()
    info["reflections"] = wit
    ok = info["vertex_transitive"] and all(w is not None for w in wit.values())
    return ok, info


@dataclass
class LRVerdict:
    is_lr_group: bool
    vertex_transitive: bool
    edge_orbits: int
    arc_orbits: int
    local_action: str
    group_order: int
    decomposition: CycleDecomposition | None = None
    witnesses: dict | None = None
    self_dual: bool | None = None
    swap_witness: str | None = None

    def to_json(self) -> dict:
        out = {
            "is_lr_group": self.is_lr_group,
            "vertex_transitive": self.vertex_transitive,
            "edge_orbits": self.edge_orbits,
            "arc_orbits": self.arc_orbits,
            "local_action": self.local_action,
            "group_order": self.group_order,
        }
        if self.decomposition is not None:
            out["decomposition"] = self.decomposition.to_json()
            out["witnesses"] = self.witnesses
        if self.self_dual is not None:
            out["self_dual"] = self.self_dual
            out["swap_witness"] = self.swap_witness
        return out


def _local_action_name(H: PermGroup) -> str:
    if H.order == 1:
        return "trivial"
    if is_intransitive_klein(H):
        return "V4 intransitive"
    if H.order == 24:
        return "Sym(4)"
    orbit_sizes = sorted(len(o) for o in H.orbits())
    return f"order {H.order}, orbits {orbit_sizes}"


def detect_lr(g: Graph, gens: Sequence, cap: int = 10**6, self_dual: bool = False) -> LRVerdict:
    """Decide whether ``<gens>`` is an LR-group of ``g`` and build its decomposition.

    With ``self_dual`` the decomposition is also tested for an automorphism
    of ``g`` swapping its two classes.
    """
    for p in gens:
        if not g.is_automorphism(p):
            raise GraphError("generator is not an automorphism of the graph")
    G = closure([Permutation(list(p.images if isinstance(p, Permutation) else p)) for p in gens],
                cap=cap, degree=g.n)
    vt = G.is_transitive()
    eorb = edge_orbits(g, [G.elements[k] for k in G.generators])
    aorb = arc_orbits(g, [G.elements[k] for k in G.generators])
    Gv = G.point_stabilizer(0)
    nb = list(g.adj[0])
    pos = {w: k for k, w in enumerate(nb)}
    local = closure([[pos[int(Gv.elements[k][w])] for w in nb] for k in range(Gv.order)], degree=len(nb))
    verdict = LRVerdict(
        is_lr_group=False,
        vertex_transitive=vt,
        edge_orbits=len(eorb),
        arc_orbits=len(aorb),
        local_action=_local_action_name(local),
        group_order=G.order,
    )
    if not (vt and len(eorb) == 2 and is_intransitive_klein(local)):
        return verdict
    colour = np.zeros(len(g.edges()), dtype=np.int64)
    colour[eorb[1]] = 1
    c = CycleDecomposition.from_colour(g, colour)
    if not c.is_valid_partition():
        return verdict
    wit = {}
    for col, label in ((0, "L"), (1, "R")):
        k = _reflection_witness(G, c, 0, col)
        wit[label] = None if k is None else G.perm(k).cycle_string()
    verdict.witnesses = wit
    verdict.decomposition = c
    verdict.is_lr_group = all(w is not None for w in wit.values())
    if not verdict.is_lr_group:
        verdict.decomposition = None
    elif self_dual:
        x = check_self_dual(g, c)
        verdict.self_dual = x is not None
        verdict.swap_witness = None if x is None else x.cycle_string()
    return verdict


_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def _local_pairings(g: Graph, aut: PermGroup) -> list[list[tuple]]:
    """Pairings of the edges at each vertex that condition (b) allows.

    A pairing ``{{a,b},{c,d}}`` of the neighbours of ``v`` survives only if
    ``Aut_v`` induces both ``(a b)`` and ``(c d)`` on them, since the
    reflection witnesses must.
    """
    E = aut.elements.astype(np.int64)
    out = []
    for v in range(g.n):
        nb = np.array(g.adj[v])
        local = {tuple(r) for r in E[E[:, v] == v][:, nb].tolist()}
        keep = []
        for p, q in _PAIRINGS:
            for first, second in ((p, q), (q, p)):
                want = list(nb)
                want[first[0]], want[first[1]] = want[first[1]], want[first[0]]
                if tuple(want) not in local:
                    break
            else:
                keep.append((p, q))
        out.append(keep)
    return out


def _colouring_search(g: Graph, aut: PermGroup, allowed: list[list[tuple]]) -> list[CycleDecomposition]:
    """Colourings with two edges of each colour at every vertex whose pairing
    at each vertex is in ``allowed``; each is checked against the definition."""
    ids = g.edge_ids()
    edge_at = [[int(ids[v, w]) for w in g.adj[v]] for v in range(g.n)]
    allowed_sets = [{frozenset(map(frozenset, pq)) for pq in a} for a in allowed]
    colour = [-1] * len(g.edges())
    order = [c for comp in g.components() for c in comp]
    order.sort(key=lambda v: (g.distances()[0, v], v))
    out = []

    def pairing_ok(v):
        es = edge_at[v]
        cs = [colour[e] for e in es]
        if -1 in cs:
            return cs.count(0) <= 2 and cs.count(1) <= 2
        if cs.count(0) != 2:
            return False
        p = frozenset(k for k in range(4) if cs[k] == 0)
        return frozenset((p, frozenset(range(4)) - p)) in allowed_sets[v]

    def rec(i):
        if i == len(order):
            c = CycleDecomposition(g, tuple(colour))
            if satisfies_definition(g, c, aut)[0]:
                out.append(c)
            return
        v = order[i]
        es = edge_at[v]
        for p, q in allowed[v]:
            for cp, cq in ((0, 1), (1, 0)):
                want = {}
                for k in p:
                    want[es[k]] = cp
                for k in q:
                    want[es[k]] = cq
                if any(colour[e] not in (-1, c) for e, c in want.items()):
                    continue
                # colour 0 is the class of the smallest edge
                if colour[0] == -1 and 0 in want and want[0] != 0:
                    continue
                fresh = [e for e in want if colour[e] == -1]
                for e in fresh:
                    colour[e] = want[e]
                if all(pairing_ok(w) for w in g.adj[v]):
                    rec(i + 1)
                for e in fresh:
                    colour[e] = -1

    rec(0)
    return sorted(out, key=lambda c: c.key())


def all_lr_decompositions(g: Graph, aut: PermGroup | None = None) -> list[CycleDecomposition]:
    """Every LR-decomposition of ``g``, compared as exact partitions.

    Scans the edge colourings with two edges of each colour at every vertex,
    using only the local pairings that admit reflection witnesses, and keeps
    those satisfying conditions (a) and (b).
    """
    if g.n > MAX_DECOMPOSITION_VERTICES:
        raise GraphError(f"decomposition search limited to {MAX_DECOMPOSITION_VERTICES} vertices")
    aut = automorphisms(g) if aut is None else aut
    return _colouring_search(g, aut, _local_pairings(g, aut))


def _orbit_of_decomposition(g: Graph, aut: PermGroup, c: CycleDecomposition) -> list[tuple[int, ...]]:
    ids = g.edge_ids()
    E = np.array(g.edges(), dtype=np.int64)
    col = np.array(c.colour)
    out = set()
    for P in aut.elements.astype(np.int64):
        img = ids[P[E[:, 0]], P[E[:, 1]]]
        new = np.empty_like(col)
        new[img] = col
        d = CycleDecomposition.from_colour(g, new)
        out.add(d.key())
    return sorted(out)


def brute_force_lr_decompositions(g: Graph, aut: PermGroup | None = None) -> list[CycleDecomposition]:
    """Oracle: the same scan without the local pruning."""
    if g.n > 30:
        raise GraphError("brute-force scan limited to 30 vertices")
    aut = automorphisms(g) if aut is None else aut
    return _colouring_search(g, aut, [list(_PAIRINGS)] * g.n)


def decomposition_orbits(g: Graph, decs: Sequence[CycleDecomposition], aut: PermGroup) -> list[list[int]]:
    """Partition of ``decs`` (by position) into Aut(Γ)-orbits."""
    pos = {d.key(): k for k, d in enumerate(decs)}
    seen = set()
    out = []
    for k, d in enumerate(decs):
        if k in seen:
            continue
        orb = sorted(pos[key] for key in _orbit_of_decomposition(g, aut, d) if key in pos)
        seen.update(orb)
        out.append(orb)
    return out


def check_self_dual(g: Graph, c: CycleDecomposition, aut: PermGroup | None = None) -> Permutation | None:
    """An automorphism swapping ℒ and ℛ, or None."""
    lengths = lambda cs: sorted(len(x) for x in cs)
    if lengths(c.L) != lengths(c.R):
        return None
    aut = automorphisms(g) if aut is None else aut
    col = np.array(c.colour)
    imgs = _colour_images(g, aut, col)
    hits = np.flatnonzero((imgs == 1 - col).all(axis=1))
    return aut.perm(int(hits[0])) if len(hits) else None


def index_two_overgroup(aut: PermGroup, G: PermGroup) -> Permutation | None:
    """Some ``x`` with ``<G, x>`` containing ``G`` with index 2, or None."""
    N = aut.normalizer(G)
    gidx = set(G.indices_in(aut).tolist())
    for k in N.parent_index.tolist():
        if k in gidx:
            continue
        if int(aut.mul(k, k)) in gidx:
            return aut.perm(k)
    return None


# ---------------------------------------------------------------------------
# coset graphs of finite completions


@dataclass
class FiniteCompletion:
    spec: object
    extra: tuple[Word, ...]
    presentation: Presentation
    vertex_table: object
    order: int
    labels: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "amalgam": self.spec.name,
            "extra_relators": list(self.labels) or [self.spec.presentation.format_word(w) for w in self.extra],
            "order": self.order,
            "vertices": self.vertex_table.n,
        }


def finite_completion(spec, extra: Sequence[Word], max_order: int = 20000,
                      labels: Sequence[str] = ()) -> FiniteCompletion:
    """The quotient of A by ``extra``, checked to keep L and R intact."""
    A = spec.presentation
    pres = Presentation(A.generators, tuple(A.relators) + tuple(w.reduce() for w in extra))
    am = _amalgam(spec)
    vt = enumerate_cosets(pres, pres.gen_words(am.L_pres.generators),
                          max_cosets=max(1000, 4 * max_order // am.L.order))
    # |Q| = #vertices * |L| unless the kernel meets L
    if vt.n * am.L.order > max_order:
        raise GraphError(f"quotient has {vt.n} vertices, more than {max_order} / |L|")
    order = enumerate_cosets(pres, (), max_cosets=max_order * 4).n
    rt = enumerate_cosets(pres, pres.gen_words(am.R_pres.generators))
    if order != vt.n * am.L.order:
        raise GraphError("the kernel meets L")
    if order != rt.n * am.R.order:
        raise GraphError("the kernel meets R")
    return FiniteCompletion(spec, tuple(extra), pres, vt, order, tuple(labels))


_AMALGAMS: dict = {}


def _amalgam(spec):
    from .amalgam import build_amalgam

    if spec.name not in _AMALGAMS or _AMALGAMS[spec.name].spec is not spec:
        _AMALGAMS[spec.name] = build_amalgam(spec)
    return _AMALGAMS[spec.name]


def build_coset_graph(fc: FiniteCompletion) -> tuple[Graph, dict[str, Permutation]]:
    """The graph on L-cosets with ``Lg ~ L a t g`` for ``t`` in a transversal of B in L.

    Returns the graph and the action of each generator of A on its vertices.
    """
    am = _amalgam(fc.spec)
    pres = fc.presentation
    T = fc.vertex_table
    if T.n < 5:
        raise GraphError(f"completion has only {T.n} vertices")
    a = pres.word(fc.spec.arc_reverser)
    trans = [am.L_pres.translate(w, pres) for w in transversal(am.LB_table)]
    u = transversal(T)
    edges = set()
    for k in range(T.n):
        for t in trans:
            w = T.trace(0, a * t * u[k])
            if w == k:
                raise GraphError("coset graph has a loop")
            edges.add((min(k, w), max(k, w)))
    g = Graph.from_edges(T.n, sorted(edges), check=False)
    g.validate()
    cols = T.columns()
    actions = {name: Permutation(cols[2 * i].tolist()) for i, name in enumerate(pres.generators)}
    return g, actions


def completion_generators(fc: FiniteCompletion, words: Sequence[Word]) -> list[Permutation]:
    """Action on the vertices of the completion graph of A-words."""
    T = fc.vertex_table
    return [Permutation([T.trace(k, w) for k in range(T.n)]) for w in words]


def completion_lr_check(fc: FiniteCompletion, self_dual: bool = True) -> LRVerdict:
    """detect_lr on the completion graph for the image of the maximal LR-group."""
    g, _ = build_coset_graph(fc)
    if fc.spec.lr_group is None:
        raise GraphError(f"{fc.spec.name} has no LR-group to map")
    gens = completion_generators(fc, fc.spec.words(fc.spec.lr_group))
    return detect_lr(g, gens, self_dual=self_dual)


def search_completion(spec, words: Sequence[str] | None = None, max_power: int = 12,
                      min_order: int = 24, max_order: int = 20000,
                      require_lr: bool = False) -> FiniteCompletion:
    """First quotient ``A / <<w^k>>`` giving a valid coset graph.

    Words are tried in the given order and, for each, ``k = 1..max_power``.
    With ``require_lr`` the image of the maximal LR-group must act on the
    graph as an LR-group.
    """
    A = spec.presentation
    if words is None:
        words = default_completion_words(spec)
    for text in words:
        w = A.word(text)
        for k in range(1, max_power + 1):
            try:
                fc = finite_completion(spec, [w ** k], max_order, labels=[f"({text})^{k}"])
            except (GraphError, CosetLimitExceeded):
                continue
            if not min_order <= fc.order <= max_order:
                continue
            try:
                build_coset_graph(fc)
                if require_lr and not completion_lr_check(fc, self_dual=False).is_lr_group:
                    continue
            except GraphError:
                continue
            return fc
    raise GraphError("no finite completion found among the candidate relators")


def default_completion_words(spec) -> list[str]:
    a = spec.arc_reverser
    L = [g for g in spec.L_gens if g not in spec.B_gens]
    out = [f"{a}{x}" for x in L]
    out += [f"{a}{x}{b}" for x in L for b in spec.B_gens]
    out += [f"{a}{x}{a}{y}" for x in L for y in spec.L_gens]
    return out
