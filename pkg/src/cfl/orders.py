"""Convex orders on (d-1)-corteges, their type assignments, density and flips.

A convex order of degree ``d`` is a linear order on the (d-1)-corteges of a
digraph.  Its equivalence class is determined by which d-corteges are of
anti-standard type, so classes are stored as that set (the inversion set).

Internally every class is a bitmask over the canonically sorted d-corteges,
and the forced relations of a class form a DAG on the (d-1)-corteges whose
reachability relation is exactly stable precedence.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal

from .corteges import Cortege, cortege_key, endpoint_type, enumerate_corteges, subcortege_sequence
from .digraph import Digraph, topological_labeling
from .errors import (
    CapExceeded,
    InconsistentAssignment,
    NotConvex,
    NotDense,
    PropertyViolated,
    default_cap,
)

STANDARD = "standard"
ANTI_STANDARD = "anti-standard"


class CortegeSystem:
    """Index tables for the (d-1)- and d-corteges of a digraph."""

    def __init__(self, graph: Digraph, d: int):
        if d < 2:
            raise ValueError("degree d must be at least 2")
        self.graph = graph
        self.d = d
        self.lower: list[Cortege] = enumerate_corteges(graph, d - 1)
        self.upper: list[Cortege] = enumerate_corteges(graph, d)
        self.lower_index = {c: i for i, c in enumerate(self.lower)}
        self.upper_index = {c: i for i, c in enumerate(self.upper)}
        # chains[j] = indices of s_1 .. s_{d+1} of the j-th d-cortege
        self.chains: list[tuple[int, ...]] = [
            tuple(self.lower_index[s] for s in subcortege_sequence(p)) for p in self.upper
        ]
        self.full_mask = (1 << len(self.upper)) - 1
        self.containing: list[list[int]] = [[] for _ in self.lower]
        for j, ch in enumerate(self.chains):
            for i in ch:
                self.containing[i].append(j)

    @property
    def m(self) -> int:
        return len(self.lower)

    def mask_of(self, corteges: Iterable[Cortege]) -> int:
        mask = 0
        for p in corteges:
            mask |= 1 << self.upper_index[p]
        return mask

    def corteges_of(self, mask: int) -> frozenset[Cortege]:
        return frozenset(self.upper[j] for j in range(len(self.upper)) if mask >> j & 1)

    def arcs(self, mask: int) -> list[tuple[int, int]]:
        out = []
        for j, ch in enumerate(self.chains):
            seq = ch if mask >> j & 1 else ch[::-1]
            out.extend(zip(seq, seq[1:]))
        return out

    def closure(self, mask: int) -> tuple[list[int], list[int], list[int]] | None:
        """Topological order plus descendant/ancestor bitsets, or None on a cycle."""
        m = self.m
        succ = [[] for _ in range(m)]
        indeg = [0] * m
        for a, b in self.arcs(mask):
            succ[a].append(b)
            indeg[b] += 1
        heap = [i for i in range(m) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(order) != m:
            return None
        desc = [0] * m
        for v in reversed(order):
            bits = 0
            for w in succ[v]:
                bits |= desc[w] | (1 << w)
            desc[v] = bits
        anc = [0] * m
        for v in range(m):
            bits = desc[v]
            while bits:
                low = bits & -bits
                anc[low.bit_length() - 1] |= 1 << v
                bits ^= low
        return order, desc, anc

    def dense_mask(self, mask: int, desc: list[int], anc: list[int]) -> int:
        """Bitmask of d-corteges that are dense under the class ``mask``."""
        out = 0
        for j, ch in enumerate(self.chains):
            seq = ch if mask >> j & 1 else ch[::-1]
            own = 0
            for i in ch:
                own |= 1 << i
            if all(not (desc[a] & anc[b] & ~own) for a, b in zip(seq, seq[1:])):
                out |= 1 << j
        return out


@lru_cache(maxsize=256)
def cortege_system(graph: Digraph, d: int) -> CortegeSystem:
    return CortegeSystem(graph, d)


@dataclass(frozen=True)
class TypeAssignment:
    """Equivalence class of convex orders of degree ``d``, keyed by its anti-standard d-corteges."""

    graph: Digraph = field(repr=False)
    d: int
    anti_standard: frozenset[Cortege]

    @property
    def system(self) -> CortegeSystem:
        return cortege_system(self.graph, self.d)

    @property
    def mask(self) -> int:
        return self.system.mask_of(self.anti_standard)

    @property
    def rank(self) -> int:
        return len(self.anti_standard)

    def type_of(self, p: Cortege) -> str:
        if p not in self.system.upper_index:
            raise KeyError(f"{p} is not a {self.d}-cortege")
        return ANTI_STANDARD if p in self.anti_standard else STANDARD

    def sorted_anti(self) -> list[Cortege]:
        return sorted(self.anti_standard, key=lambda c: cortege_key(self.graph, c))

    @classmethod
    def from_mask(cls, graph: Digraph, d: int, mask: int) -> TypeAssignment:
        return cls(graph, d, cortege_system(graph, d).corteges_of(mask))


@dataclass(frozen=True)
class ConvexOrder:
    """A linear order on all (d-1)-corteges; ``sequence[0]`` is the smallest."""

    graph: Digraph = field(repr=False)
    d: int
    sequence: tuple[Cortege, ...]

    def ranks(self) -> dict[Cortege, int]:
        return {c: i for i, c in enumerate(self.sequence)}


def check_convex(order: ConvexOrder) -> TypeAssignment:
    """Type of every d-cortege under ``order``; raises ``NotConvex`` on a violation."""
    sysm = cortege_system(order.graph, order.d)
    rank = order.ranks()
    if len(rank) != len(order.sequence) or set(rank) != set(sysm.lower):
        raise ValueError("order must rank every (d-1)-cortege exactly once")
    anti = []
    for p, ch in zip(sysm.upper, sysm.chains):
        r = [rank[sysm.lower[i]] for i in ch]
        if all(a < b for a, b in zip(r, r[1:])):
            anti.append(p)
        elif not all(a > b for a, b in zip(r, r[1:])):
            i = next(k for k in range(1, len(r) - 1) if (r[k] - r[k - 1]) * (r[k + 1] - r[k]) < 0)
            witness = tuple(sysm.lower[ch[k]] for k in (i - 1, i, i + 1))
            raise NotConvex(p, witness)
    return TypeAssignment(order.graph, order.d, frozenset(anti))


@dataclass
class ForcedDag:
    """Forced relations of a class; ``desc[i]`` is the bitset of elements stably after i."""

    system: CortegeSystem
    arcs: list[tuple[int, int]]
    topo: list[int]
    desc: list[int]
    anc: list[int]

    def reaches(self, a: Cortege, b: Cortege) -> bool:
        ia, ib = self.system.lower_index[a], self.system.lower_index[b]
        return bool(self.desc[ia] >> ib & 1)

    def linear_extension(self) -> tuple[Cortege, ...]:
        """Lexicographically smallest topological sort (canonical representative)."""
        return tuple(self.system.lower[i] for i in self.topo)


def forced_relation_dag(sigma: TypeAssignment) -> ForcedDag:
    sysm = sigma.system
    mask = sigma.mask
    res = sysm.closure(mask)
    if res is None:
        raise InconsistentAssignment(f"forced relations of {sorted(sigma.sorted_anti())} contain a cycle")
    topo, desc, anc = res
    return ForcedDag(sysm, sysm.arcs(mask), topo, desc, anc)


def representative(sigma: TypeAssignment) -> ConvexOrder:
    return ConvexOrder(sigma.graph, sigma.d, forced_relation_dag(sigma).linear_extension())


def stably_precedes(sigma: TypeAssignment, r: Cortege, s: Cortege) -> bool:
    return forced_relation_dag(sigma).reaches(r, s)


def separators(sigma: TypeAssignment, p: Cortege) -> list[tuple[int, Cortege]]:
    """Pairs (i, r) where r stably separates the neighbours s_i, s_{i+1} of p."""
    dag = forced_relation_dag(sigma)
    sysm = sigma.system
    ch = sysm.chains[sysm.upper_index[p]]
    own = set(ch)
    anti = p in sigma.anti_standard
    out = []
    for i in range(len(ch) - 1):
        a, b = (ch[i], ch[i + 1]) if anti else (ch[i + 1], ch[i])
        between = dag.desc[a] & dag.anc[b]
        for r in range(sysm.m):
            if between >> r & 1 and r not in own:
                out.append((i + 1, sysm.lower[r]))
    return out


def is_dense(sigma: TypeAssignment, p: Cortege) -> bool:
    return not separators(sigma, p)


def apply_flip(sigma: TypeAssignment, p: Cortege) -> TypeAssignment:
    """Raising flip if ``p`` is standard, lowering flip if it is anti-standard."""
    seps = separators(sigma, p)
    if seps:
        i, r = seps[0]
        raise NotDense(f"{p} is loose: {r} separates s_{i} and s_{i + 1}")
    return TypeAssignment(sigma.graph, sigma.d, sigma.anti_standard ^ {p})


def extreme_order(graph: Digraph, d: int, side: Literal["min", "max"] = "min") -> ConvexOrder:
    """Lexicographic order of the labels of the endpoint types; ties by canonical order."""
    direction = {"min": "forward", "max": "reverse"}[side]
    label = topological_labeling(graph, direction)
    lower = cortege_system(graph, d).lower

    def key(c):
        return tuple(label[v] for v in _endpoints(c)), cortege_key(graph, c)

    return ConvexOrder(graph, d, tuple(sorted(lower, key=key)))


def _endpoints(c: Cortege):
    return (c[0][0],) + tuple(part[-1] for part in c)


@dataclass
class FlipGraph:
    """Flip structure on classes: ``nodes`` sorted by (rank, sorted inversion set)."""

    graph: Digraph = field(repr=False)
    d: int
    masks: list[int]
    arcs: list[tuple[int, int, int]]  # (from node, to node, flipped d-cortege index)

    @property
    def system(self) -> CortegeSystem:
        return cortege_system(self.graph, self.d)

    def __len__(self) -> int:
        return len(self.masks)

    def node(self, i: int) -> TypeAssignment:
        return TypeAssignment.from_mask(self.graph, self.d, self.masks[i])

    def nodes(self) -> list[TypeAssignment]:
        return [self.node(i) for i in range(len(self.masks))]

    def rank(self, i: int) -> int:
        return bin(self.masks[i]).count("1")

    def node_sets(self) -> set[frozenset[Cortege]]:
        sysm = self.system
        return {sysm.corteges_of(m) for m in self.masks}

    def to_dot(self) -> str:
        sysm = self.system
        lines = ["digraph flips {", "  rankdir=BT;"]
        for i, m in enumerate(self.masks):
            label = _fmt_set(sysm.upper[j] for j in range(len(sysm.upper)) if m >> j & 1)
            lines.append(f'  n{i} [label="{label}"];')
        for a, b, _ in self.arcs:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _fmt_cortege(c: Cortege) -> str:
    return "(" + ",".join("".join(part) if all(len(v) == 1 for v in part) else "-".join(part) for part in c) + ")"


def _fmt_set(corteges) -> str:
    return "{" + " ".join(_fmt_cortege(c) for c in corteges) + "}"


def _sort_masks(masks, width):
    def key(m):
        return bin(m).count("1"), [j for j in range(width) if m >> j & 1]

    return sorted(masks, key=key)


def flip_graph(graph: Digraph, d: int, cap: int | None = None) -> FlipGraph:
    """Closure of the all-standard class under raising flips on dense corteges."""
    cap = default_cap() if cap is None else cap
    sysm = cortege_system(graph, d)
    start = check_convex(extreme_order(graph, d, "min")).mask if sysm.upper else 0
    seen = {start}
    queue = deque([start])
    raw_arcs = []
    while queue:
        mask = queue.popleft()
        res = sysm.closure(mask)
        if res is None:
            raise InconsistentAssignment(f"reached unrealizable class {mask:b}")
        _, desc, anc = res
        dense = sysm.dense_mask(mask, desc, anc) & ~mask
        j = 0
        while dense >> j:
            if dense >> j & 1:
                nxt = mask | (1 << j)
                raw_arcs.append((mask, nxt, j))
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise CapExceeded(f"more than {cap} classes")
                    queue.append(nxt)
            j += 1
    masks = _sort_masks(seen, len(sysm.upper))
    index = {m: i for i, m in enumerate(masks)}
    arcs = sorted((index[a], index[b], j) for a, b, j in raw_arcs)
    return FlipGraph(graph, d, masks, arcs)


@dataclass
class PosetReport:
    nodes: int
    arcs: int
    acyclic: bool
    sources: list[int]
    sinks: list[int]
    source_rank: int | None
    sink_rank: int | None
    expected_sink_rank: int
    graded: bool
    shortest_chain: int | None
    longest_chain: int | None
    lowering_everywhere: bool
    raising_everywhere: bool
    realizable: bool
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["ok"] = self.ok
        return out


def verify_poset(fg: FlipGraph, strict: bool = False) -> PosetReport:
    """Check the flip graph has a unique source and sink and is graded by inversion count."""
    sysm = fg.system
    n = len(fg.masks)
    out_deg = [0] * n
    in_deg = [0] * n
    succ = [[] for _ in range(n)]
    violations = []
    graded = True
    for a, b, j in fg.arcs:
        out_deg[a] += 1
        in_deg[b] += 1
        succ[a].append(b)
        if fg.rank(b) != fg.rank(a) + 1 or fg.masks[b] != fg.masks[a] | (1 << j):
            graded = False
            violations.append(f"arc {a}->{b} does not add exactly one inversion")

    # rank strictly increases on arcs, so checking grading also settles acyclicity;
    # verify independently by Kahn's algorithm anyway
    indeg = list(in_deg)
    stack = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    topo = []
    while stack:
        v = stack.pop()
        topo.append(v)
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    acyclic = seen == n
    if not acyclic:
        violations.append("flip graph has a directed cycle")

    sources = [i for i in range(n) if in_deg[i] == 0]
    sinks = [i for i in range(n) if out_deg[i] == 0]
    full = sysm.full_mask
    if len(sources) != 1 or fg.masks[sources[0]] != 0:
        violations.append(f"sources {[fg.masks[i] for i in sources]} (expected only the empty set)")
    if len(sinks) != 1 or fg.masks[sinks[0]] != full:
        violations.append(f"sinks {[fg.masks[i] for i in sinks]} (expected only the full set)")

    # every class with an anti-standard (standard) cortege admits a lowering (raising) flip
    lowering = raising = realizable = True
    for i, mask in enumerate(fg.masks):
        res = sysm.closure(mask)
        if res is None:
            realizable = False
            violations.append(f"node {i} is not realizable")
            continue
        topo_i, desc, anc = res
        dense = sysm.dense_mask(mask, desc, anc)
        if mask and not dense & mask:
            lowering = False
            violations.append(f"node {i}: no lowering flip")
        if mask != full and not dense & ~mask & full:
            raising = False
            violations.append(f"node {i}: no raising flip")
        if strict:
            order = ConvexOrder(fg.graph, fg.d, tuple(sysm.lower[k] for k in topo_i))
            if check_convex(order).mask != mask:
                realizable = False
                violations.append(f"node {i}: representative has a different assignment")

    shortest = longest = None
    if acyclic and len(sources) == 1:
        INF = float("inf")
        lo = [INF] * n
        hi = [-INF] * n
        lo[sources[0]] = hi[sources[0]] = 0
        for v in topo:
            for w in succ[v]:
                lo[w] = min(lo[w], lo[v] + 1)
                hi[w] = max(hi[w], hi[v] + 1)
        if len(sinks) == 1:
            shortest, longest = int(lo[sinks[0]]), int(hi[sinks[0]])
            if shortest != len(sysm.upper) or longest != len(sysm.upper):
                violations.append(f"maximal chains have lengths {shortest}..{longest}, expected {len(sysm.upper)}")
    report = PosetReport(
        nodes=n,
        arcs=len(fg.arcs),
        acyclic=acyclic,
        sources=sources,
        sinks=sinks,
        source_rank=fg.rank(sources[0]) if sources else None,
        sink_rank=fg.rank(sinks[0]) if sinks else None,
        expected_sink_rank=len(sysm.upper),
        graded=graded,
        shortest_chain=shortest,
        longest_chain=longest,
        lowering_everywhere=lowering,
        raising_everywhere=raising,
        realizable=realizable,
        violations=violations,
    )
    return report


def require_poset(fg: FlipGraph) -> PosetReport:
    report = verify_poset(fg, strict=True)
    if not report.ok:
        raise PropertyViolated("; ".join(report.violations))
    return report


def brute_force_orders(graph: Digraph, d: int, max_elements: int = 8) -> set[frozenset[Cortege]]:
    """Type assignments of all convex orders, by backtracking over linear orders.

    Independent of the forced-relation machinery: partial orders are pruned as
    soon as the ranks of some subcortege sequence stop being monotone.
    """
    sysm = CortegeSystem(graph, d)
    m = sysm.m
    if m > max_elements:
        raise CapExceeded(f"{m} elements exceed the brute-force limit {max_elements}")
    # for each element: list of (d-cortege j, position of the element in chain j)
    member = [[] for _ in range(m)]
    for j, ch in enumerate(sysm.chains):
        for pos, i in enumerate(ch):
            member[i].append((j, pos))
    rank = [-1] * m
    found: set[int] = set()

    def monotone(j):
        r = [rank[i] for i in sysm.chains[j] if rank[i] >= 0]
        return all(a < b for a, b in zip(r, r[1:])) or all(a > b for a, b in zip(r, r[1:]))

    def place(step):
        if step == m:
            mask = 0
            for j, ch in enumerate(sysm.chains):
                if rank[ch[0]] < rank[ch[1]]:
                    mask |= 1 << j
            found.add(mask)
            return
        for i in range(m):
            if rank[i] >= 0:
                continue
            rank[i] = step
            if all(monotone(j) for j, _ in member[i]):
                place(step + 1)
            rank[i] = -1

    place(0)
    return {sysm.corteges_of(mask) for mask in found}


def flip_chain_assignments(graph: Digraph, d: int, flips: list[Cortege]) -> list[TypeAssignment]:
    """Apply raising flips in sequence from the all-standard class."""
    sigma = TypeAssignment(graph, d, frozenset())
    out = [sigma]
    for p in flips:
        if p in sigma.anti_standard:
            raise NotDense(f"{p} is already anti-standard; a chain only raises")
        sigma = apply_flip(sigma, p)
        out.append(sigma)
    return out


def endpoint_labels(graph: Digraph, c: Cortege, direction="forward"):
    return endpoint_type(c, topological_labeling(graph, direction))


def mirror_cortege(c: Cortege) -> Cortege:
    """The same cortege read backwards, as a cortege of the reversed graph."""
    return tuple(tuple(reversed(part)) for part in reversed(c))


def mirror_assignment(sigma: TypeAssignment) -> TypeAssignment:
    """Class on the reversed graph obtained by reading every cortege backwards.

    Reversal turns s_1..s_{d+1} into s_{d+1}..s_1, so a standard cortege becomes
    anti-standard and vice versa: the image is the complement of the mirrored set.
    """
    rg = sigma.graph.reversed()
    upper = cortege_system(rg, sigma.d).upper
    image = {mirror_cortege(p) for p in sigma.anti_standard}
    return TypeAssignment(rg, sigma.d, frozenset(p for p in upper if p not in image))


def mirror_is_antiisomorphism(fg: FlipGraph, fg_mirror: FlipGraph) -> bool:
    """Whether mirror_assignment maps ``fg`` onto ``fg_mirror`` with every arc reversed."""
    if len(fg) != len(fg_mirror) or len(fg.arcs) != len(fg_mirror.arcs):
        return False
    msys = fg_mirror.system
    where = {m: i for i, m in enumerate(fg_mirror.masks)}
    image = []
    for sigma in fg.nodes():
        i = where.get(msys.mask_of(mirror_assignment(sigma).anti_standard))
        if i is None:
            return False
        image.append(i)
    if len(set(image)) != len(image):
        return False
    arcs = {(image[b], image[a]) for a, b, _ in fg.arcs}
    return arcs == {(a, b) for a, b, _ in fg_mirror.arcs}
