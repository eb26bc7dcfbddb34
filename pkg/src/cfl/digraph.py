"""Acyclic digraphs, topological labelings and path enumeration.

Vertices are opaque strings. Internally every vertex gets a dense integer
handle (its position in ``Digraph.vertices``) and all canonical orderings
compare handle sequences.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal

from .errors import CapExceeded, CycleDetected, DuplicateEdge, NotATandem, UnknownVertex, default_cap

Path = tuple[str, ...]
Labeling = dict[str, int]


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    _succ: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise DuplicateEdge(f"duplicate vertex {v!r}")
            seen.add(v)
        succ: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            if u not in succ:
                raise UnknownVertex(f"edge ({u!r}, {v!r}) uses undeclared vertex {u!r}")
            if v not in succ:
                raise UnknownVertex(f"edge ({u!r}, {v!r}) uses undeclared vertex {v!r}")
            if u == v:
                raise CycleDetected(f"self-loop at {u!r}")
            succ[u].append(v)
        for v in succ:
            succ[v].sort(key=self.handle.__getitem__)
        object.__setattr__(self, "_succ", succ)
        _check_acyclic(self)

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable) -> Digraph:
        """Validate and construct; repeated edges raise ``DuplicateEdge``."""
        vertices = tuple(str(v) for v in vertices)
        edge_list = [(str(u), str(v)) for u, v in edges]
        seen = set()
        for e in edge_list:
            if e in seen:
                raise DuplicateEdge(f"edge {e} listed twice")
            seen.add(e)
        return cls(vertices, frozenset(edge_list))

    @cached_property
    def handle(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def successors(self, v: str) -> list[str]:
        return self._succ[v]

    def predecessors(self, v: str) -> list[str]:
        return self._pred[v]

    @cached_property
    def _pred(self) -> dict[str, list[str]]:
        pred = {v: [] for v in self.vertices}
        for u in self.vertices:
            for v in self._succ[u]:
                pred[v].append(u)
        return pred

    def reversed(self) -> Digraph:
        return Digraph(self.vertices, frozenset((v, u) for u, v in self.edges))

    def path_key(self, path: Path) -> tuple[int, ...]:
        return tuple(self.handle[v] for v in path)

    def to_json(self) -> dict:
        edges = sorted(self.edges, key=lambda e: (self.handle[e[0]], self.handle[e[1]]))
        return {"vertices": list(self.vertices), "edges": [list(e) for e in edges]}


def _check_acyclic(g: Digraph) -> None:
    state = {v: 0 for v in g.vertices}  # 0 new, 1 on stack, 2 done
    for root in g.vertices:
        if state[root]:
            continue
        stack = [(root, iter(g.successors(root)))]
        state[root] = 1
        trail = [root]
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                trail.pop()
                state[v] = 2
            elif state[nxt] == 1:
                cyc = trail[trail.index(nxt):] + [nxt]
                raise CycleDetected("directed cycle " + " -> ".join(cyc))
            elif state[nxt] == 0:
                state[nxt] = 1
                trail.append(nxt)
                stack.append((nxt, iter(g.successors(nxt))))


def parse_digraph(document: str | dict) -> Digraph:
    """Parse the JSON digraph format ``{"vertices": [...], "edges": [[u, v], ...]}``."""
    data = json.loads(document) if isinstance(document, str) else document
    return Digraph.build(data["vertices"], data["edges"])


def load_digraph(path) -> Digraph:
    with open(path) as fh:
        return parse_digraph(fh.read())


def topological_labeling(g: Digraph, direction: Literal["forward", "reverse"] = "forward") -> Labeling:
    """Kahn's algorithm, always taking the smallest available handle first.

    ``forward`` gives ``label[u] < label[v]`` on every edge, ``reverse`` the
    opposite inequality.
    """
    indeg = {v: len(g.predecessors(v)) for v in g.vertices}
    heap = [g.handle[v] for v in g.vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = g.vertices[heapq.heappop(heap)]
        order.append(v)
        for w in g.successors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, g.handle[w])
    n = len(order)
    if direction == "forward":
        return {v: i + 1 for i, v in enumerate(order)}
    if direction == "reverse":
        return {v: n - i for i, v in enumerate(order)}
    raise ValueError(f"unknown direction {direction!r}")


def is_topological(g: Digraph, label: Labeling, direction: str = "forward") -> bool:
    if sorted(label.values()) != list(range(1, len(g.vertices) + 1)):
        return False
    if direction == "forward":
        return all(label[u] < label[v] for u, v in g.edges)
    return all(label[u] > label[v] for u, v in g.edges)


def enumerate_paths(g: Digraph, cap: int | None = None) -> list[Path]:
    """All nontrivial paths, sorted canonically by handle sequence."""
    cap = default_cap() if cap is None else cap
    out: list[Path] = []

    def extend(path):
        for w in g.successors(path[-1]):
            longer = path + (w,)
            out.append(longer)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} paths")
            extend(longer)

    for v in g.vertices:
        extend((v,))
    out.sort(key=g.path_key)
    return out


def enumerate_routes(g: Digraph) -> list[Path]:
    """Inclusion-maximal nontrivial paths: from in-degree-0 to out-degree-0 vertices."""
    routes: list[Path] = []

    def extend(path):
        succ = g.successors(path[-1])
        if not succ:
            if len(path) > 1:
                routes.append(path)
            return
        for w in succ:
            extend(path + (w,))

    for v in g.vertices:
        if not g.predecessors(v):
            extend((v,))
    routes.sort(key=g.path_key)
    return routes


def concatenate(p: Path, q: Path) -> Path:
    if p[-1] != q[0]:
        raise NotATandem(f"head {p[-1]!r} of {p} differs from tail {q[0]!r} of {q}")
    return p + q[1:]


def path_graph(n: int) -> Digraph:
    """Directed path 1 -> 2 -> ... -> n."""
    names = [str(i) for i in range(1, n + 1)]
    return Digraph.build(names, zip(names, names[1:]))


def two_route_graph() -> Digraph:
    """The five-vertex graph with two routes sharing the prefix 1-2-3."""
    return Digraph.build(["1", "2", "3", "4", "4'"], [("1", "2"), ("2", "3"), ("3", "4"), ("3", "4'")])


def small_dags(max_vertices: int) -> list[Digraph]:
    """All DAGs with at most ``max_vertices`` vertices, one per isomorphism class."""
    from itertools import permutations, product

    out = []
    for n in range(1, max_vertices + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        perms = list(permutations(range(n)))
        seen = set()
        for bits in product((0, 1), repeat=len(pairs)):
            edges = [pr for pr, b in zip(pairs, bits) if b]
            canon = min(tuple(sorted((p[i], p[j]) for i, j in edges)) for p in perms)
            if canon in seen:
                continue
            seen.add(canon)
            names = [str(i + 1) for i in range(n)]
            out.append(Digraph.build(names, [(names[i], names[j]) for i, j in edges]))
    return out
