"""Folded labeled graphs for finitely generated subgroups of free groups.

A graph here is a based multigraph with edges labeled by generators and
stored direction-normalized: one (source, target, label) triple per
edge, label positive, traversal handling sign.  Folding identifies edge
pairs that break determinism until, at every vertex, each signed label
is readable outgoing at most once.  The result is the classic subgroup
graph: membership, rank, and basepoint structure all read off it.

Folding runs on a union-find over vertices with per-class slot maps,
merging small into large, so big generator families stay near-linear.
The fold result is unique up to based labeled isomorphism; use
:func:`canonical_form` to compare graphs modulo vertex naming.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .words import Alphabet, Word, cyclic_reduce, free_reduce, letter_key


@dataclass(frozen=True)
class CoreGraph:
    alphabet: Alphabet
    num_vertices: int
    basepoint: int
    edges: tuple[tuple[int, int, int], ...]  # (source, target, positive label)
    folded: bool
    cored: bool

    def __post_init__(self) -> None:
        if not 0 <= self.basepoint < self.num_vertices:
            raise ValueError("basepoint out of range")
        for u, v, g in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError("edge endpoint out of range")
            if not 1 <= g <= self.alphabet.size:
                raise ValueError(f"edge label {g} outside alphabet")

    def with_alphabet(self, alphabet: Alphabet) -> "CoreGraph":
        """Reinterpret over a larger alphabet sharing the name prefix."""
        if alphabet.names[: self.alphabet.size] != self.alphabet.names:
            raise ValueError("alphabet is not an extension")
        return replace(self, alphabet=alphabet)

    def outgoing_labels(self, vertex: int) -> set[int]:
        """Signed labels readable leaving the vertex."""
        out: set[int] = set()
        for u, v, g in self.edges:
            if u == vertex:
                out.add(g)
            if v == vertex:
                out.add(-g)
        return out

    def degree(self, vertex: int) -> int:
        d = 0
        for u, v, _ in self.edges:
            d += (u == vertex) + (v == vertex)
        return d


def bouquet(alphabet: Alphabet, generators: Sequence[Word]) -> CoreGraph:
    """Wedge of one loop path per generator word, unfolded."""
    edges: list[tuple[int, int, int]] = []
    n = 1
    for w in generators:
        if len(w) == 0:
            raise ValueError("empty generator word")
        if w.max_letter() > alphabet.size:
            raise ValueError("generator word outside alphabet")
        cur = 0
        for i, x in enumerate(w):
            nxt = 0 if i == len(w) - 1 else n
            if i < len(w) - 1:
                n += 1
            if x > 0:
                edges.append((cur, nxt, x))
            else:
                edges.append((nxt, cur, -x))
            cur = nxt
    folded = not generators
    return CoreGraph(alphabet, n, 0, tuple(edges), folded, folded)


def fold(g: CoreGraph, order_seed: int | None = None) -> CoreGraph:
    """Identify non-deterministic edge pairs until none remain.

    The result is independent of the fold order up to isomorphism;
    ``order_seed`` shuffles the work order, which the tests use to
    exercise exactly that.
    """
    n = g.num_vertices
    parent = list(range(n))
    size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    slots: list[dict[tuple[int, int], int]] = [dict() for _ in range(n)]
    pending: deque[tuple[int, int]] = deque()

    def add_half(vertex: int, key: tuple[int, int], other: int) -> None:
        cur = slots[vertex].get(key)
        if cur is None:
            slots[vertex][key] = other
        else:
            pending.append((cur, other))

    edge_list = list(g.edges)
    if order_seed is not None:
        import random

        random.Random(order_seed).shuffle(edge_list)
    for u, v, lab in edge_list:
        add_half(u, (lab, 1), v)
        add_half(v, (lab, -1), u)

    while pending:
        a, b = pending.popleft()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if size[ra] < size[rb] or (size[ra] == size[rb] and len(slots[ra]) < len(slots[rb])):
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
        moved = slots[rb]
        slots[rb] = {}
        for key, nb in moved.items():
            cur = slots[ra].get(key)
            if cur is None:
                slots[ra][key] = nb
            elif find(cur) != find(nb):
                pending.append((cur, nb))

    roots = sorted({find(v) for v in range(n)})
    renum = {r: i for i, r in enumerate(roots)}
    out_edges = set()
    for r in roots:
        for (lab, direction), nb in slots[r].items():
            if direction == 1:
                out_edges.add((renum[r], renum[find(nb)], lab))
    return CoreGraph(
        g.alphabet,
        len(roots),
        renum[find(g.basepoint)],
        tuple(sorted(out_edges)),
        True,
        False,
    )


def _require(g: CoreGraph, folded: bool = False, cored: bool = False) -> None:
    if folded and not g.folded:
        raise ValueError("graph is not folded")
    if cored and not g.cored:
        raise ValueError("graph is not core-trimmed")


def trim_to_core(g: CoreGraph) -> CoreGraph:
    """Drop non-basepoint vertices of degree at most 1, repeatedly."""
    _require(g, folded=True)
    incident: list[set[int]] = [set() for _ in range(g.num_vertices)]
    deg = [0] * g.num_vertices
    for i, (u, v, _) in enumerate(g.edges):
        incident[u].add(i)
        incident[v].add(i)
        deg[u] += 1
        deg[v] += 1
    dead_edge = [False] * len(g.edges)
    dead_vertex = [False] * g.num_vertices
    queue = [v for v in range(g.num_vertices) if v != g.basepoint and deg[v] <= 1]
    while queue:
        v = queue.pop()
        if dead_vertex[v] or v == g.basepoint:
            continue
        dead_vertex[v] = True
        for i in incident[v]:
            if dead_edge[i]:
                continue
            dead_edge[i] = True
            u, w, _ = g.edges[i]
            for end in (u, w):
                if end != v:
                    deg[end] -= 1
                    if end != g.basepoint and deg[end] <= 1 and not dead_vertex[end]:
                        queue.append(end)
    keep = [v for v in range(g.num_vertices) if not dead_vertex[v]]
    renum = {v: i for i, v in enumerate(keep)}
    edges = tuple(
        sorted(
            (renum[u], renum[v], lab)
            for i, (u, v, lab) in enumerate(g.edges)
            if not dead_edge[i]
        )
    )
    return CoreGraph(g.alphabet, len(keep), renum[g.basepoint], edges, True, True)


def _adjacency(g: CoreGraph) -> list[dict[int, int]]:
    adj: list[dict[int, int]] = [dict() for _ in range(g.num_vertices)]
    for u, v, lab in g.edges:
        adj[u][lab] = v
        adj[v][-lab] = u
    return adj


def membership(g: CoreGraph, w: Word) -> bool:
    """Is the reduction of w readable as a closed basepoint path?"""
    _require(g, folded=True)
    adj = _adjacency(g)
    cur = g.basepoint
    for x in free_reduce(w):
        nxt = adj[cur].get(x)
        if nxt is None:
            return False
        cur = nxt
    return cur == g.basepoint


def _reachable(g: CoreGraph) -> set[int]:
    adj = _adjacency(g)
    seen = {g.basepoint}
    todo = [g.basepoint]
    while todo:
        v = todo.pop()
        for nb in adj[v].values():
            if nb not in seen:
                seen.add(nb)
                todo.append(nb)
    return seen


def rank(g: CoreGraph) -> int:
    """First Betti number |E| - |V| + 1 of the folded core."""
    _require(g, folded=True, cored=True)
    if len(_reachable(g)) != g.num_vertices:
        raise ValueError("graph is disconnected")
    return len(g.edges) - g.num_vertices + 1


def basepoint_degree(g: CoreGraph) -> int:
    _require(g, folded=True, cored=True)
    return g.degree(g.basepoint)


def unused_basepoint_labels(g: CoreGraph) -> list[int]:
    """Signed letters not readable leaving the basepoint, canonical order."""
    _require(g, folded=True)
    used = g.outgoing_labels(g.basepoint)
    return [x for x in sorted(g.alphabet.signed(), key=letter_key) if x not in used]


def subgroup_core(alphabet: Alphabet, generators: Sequence[Word]) -> CoreGraph:
    """Folded, trimmed based graph of the generated subgroup."""
    return trim_to_core(fold(bouquet(alphabet, generators)))


def is_monomorphism(alphabet: Alphabet, images: Sequence[Word]) -> bool:
    """Do the images generate a free group of full rank |images|?

    Rank equality certifies injectivity of the induced map from the free
    group on len(images) generators: free groups are Hopfian, so a
    surjection onto an equal-rank free group cannot collapse anything.
    """
    images = list(images)
    if any(len(free_reduce(w)) == 0 for w in images):
        return False
    if not images:
        return True
    return rank(subgroup_core(alphabet, images)) == len(images)


def wedge_extension_check(core: CoreGraph, new_loops: Sequence[Word]) -> bool:
    """Would attaching the loops at the basepoint stay fold-free there?

    Each loop contributes its two end labels to the basepoint star; a
    loop that is a conjugate hangs by its stem and contributes only the
    stem's first letter.  True iff the contributions and the existing
    basepoint labels are pairwise distinct, in which case the folded
    union is the wedge of the core with the loops.
    """
    _require(core, folded=True)
    labels: list[int] = sorted(core.outgoing_labels(core.basepoint))
    for w in new_loops:
        fr = free_reduce(w)
        if len(fr) == 0:
            raise ValueError("trivial loop")
        if fr.max_letter() > core.alphabet.size:
            raise ValueError("loop word outside alphabet")
        _core_part, conj = cyclic_reduce(fr)
        if conj:
            labels.append(conj[0])
        else:
            labels.append(fr[0])
            labels.append(-fr[-1])
    return len(labels) == len(set(labels))


def canonical_form(g: CoreGraph) -> tuple:
    """Basepoint-BFS normal form; equal iff based labeled graphs agree."""
    _require(g, folded=True)
    adj = _adjacency(g)
    order = sorted(g.alphabet.signed(), key=letter_key)
    ids = {g.basepoint: 0}
    queue = deque([g.basepoint])
    while queue:
        v = queue.popleft()
        for lab in order:
            nb = adj[v].get(lab)
            if nb is not None and nb not in ids:
                ids[nb] = len(ids)
                queue.append(nb)
    if len(ids) != g.num_vertices:
        raise ValueError("graph is disconnected")
    edges = tuple(sorted((ids[u], ids[v], lab) for u, v, lab in g.edges))
    return (g.num_vertices, edges)


def graphs_equal(a: CoreGraph, b: CoreGraph) -> bool:
    return a.alphabet == b.alphabet and canonical_form(a) == canonical_form(b)
