"""Correspondence between convex orders and cubillages along routes, and the
passage between maximal chains of degree d and convex orders of degree d+1."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache

from .corteges import Cortege, cortege_from_type, lies_in
from .cubillage import (
    Cube,
    Cubillage,
    capsid,
    capsid_flip,
    color_subsets,
    cubillage_with_inversions,
    default_configuration,
    extreme_cubillage,
    is_dense_capsid,
    is_membrane,
    Membrane,
    membrane_facets,
    bits,
    mask_of,
    natural_order_dag,
    ziegler_check,
)
from .digraph import Digraph, Path, enumerate_routes
from .errors import (
    CapExceeded,
    ChaseDiverged,
    CombinedCycle,
    NotRealizable,
    PreconditionViolated,
    PropertyViolated,
)
from .orders import (
    ConvexOrder,
    TypeAssignment,
    apply_flip,
    check_convex,
    cortege_system,
    flip_chain_assignments,
    forced_relation_dag,
)


@lru_cache(maxsize=1024)
def route_corteges(route: Path, k: int) -> dict[int, Cortege]:
    """k-corteges inside a route keyed by their endpoint positions (as a color mask)."""
    n = len(route)
    return {t: cortege_from_type(route, bits(t)) for t in color_subsets(n, k + 1)}


def cortege_colors(p: Cortege, route: Path) -> int:
    pos = {v: i + 1 for i, v in enumerate(route)}
    return mask_of(pos[v] for v in (p[0][0],) + tuple(part[-1] for part in p))


def routes_containing(graph: Digraph, p: Cortege) -> list[Path]:
    return [r for r in enumerate_routes(graph) if lies_in(p, r)]


@dataclass(frozen=True)
class RouteCubillage:
    route: Path
    cubillage: Cubillage

    def cortege_of(self, cube: Cube) -> Cortege:
        return route_corteges(self.route, self.cubillage.d - 1)[cube.T]

    def cube_of(self, p: Cortege) -> Cube:
        return self.cubillage.by_type[cortege_colors(p, self.route)]


def route_inversions(sigma: TypeAssignment, route: Path) -> frozenset[int]:
    return frozenset(cortege_colors(p, route) for p in sigma.anti_standard if lies_in(p, route))


def route_cubillage(sigma: TypeAssignment, route: Path) -> RouteCubillage:
    """The cubillage on Z(|R|, d) whose inversions are the anti-standard d-corteges inside R."""
    n, d = len(route), sigma.d
    if n < d:
        raise PreconditionViolated(f"route {route} has fewer than d={d} vertices")
    target = route_inversions(sigma, route)
    if not ziegler_check(target, n, d):
        raise NotRealizable(f"inversions of route {route} fail the prefix/suffix criterion")
    q = cubillage_with_inversions(n, d, target)
    if q is None:
        raise NotRealizable(f"no cubillage of Z({n},{d}) has the inversions of route {route}")
    return RouteCubillage(route, q)


@dataclass(frozen=True)
class MaximalChain:
    """Raising flips taking the all-standard class of degree ``d`` to the all-anti-standard one."""

    graph: Digraph = field(repr=False)
    d: int
    flips: tuple[Cortege, ...]

    def assignments(self) -> list[TypeAssignment]:
        """sigma_0 .. sigma_N; raises if some step is not a flip on a dense cortege."""
        steps = flip_chain_assignments(self.graph, self.d, list(self.flips))
        upper = cortege_system(self.graph, self.d).upper
        if len(self.flips) != len(upper) or steps[-1].anti_standard != frozenset(upper):
            raise PropertyViolated("chain does not end at the all-anti-standard class")
        return steps

    def to_json(self) -> dict:
        return {"d": self.d, "flips": [[list(part) for part in p] for p in self.flips]}

    @classmethod
    def from_json(cls, graph: Digraph, data: dict) -> MaximalChain:
        flips = tuple(tuple(tuple(str(v) for v in part) for part in p) for p in data["flips"])
        return cls(graph, int(data["d"]), flips)


def _active_routes(graph: Digraph, size: int) -> list[Path]:
    return [r for r in enumerate_routes(graph) if len(r) >= size]


@dataclass
class Lift:
    order: ConvexOrder
    assignment: TypeAssignment
    route_cubillages: dict[Path, Cubillage]
    step_of: dict[Path, dict[Cube, int]]


def lift_chain_details(chain: MaximalChain) -> Lift:
    graph, d = chain.graph, chain.d
    chain.assignments()
    route_qs: dict[Path, Cubillage] = {}
    step_of: dict[Path, dict[Cube, int]] = {}
    for route in _active_routes(graph, d + 1):
        n = len(route)
        q = extreme_cubillage(default_configuration(n, d), "front")
        steps = {}
        for step, p in enumerate(chain.flips, 1):
            if not lies_in(p, route):
                continue
            packet = bits(cortege_colors(p, route))
            c = capsid(q, packet)
            if c.filling != "standard" or not is_dense_capsid(q, c):
                raise PropertyViolated(f"step {step}: capsid {packet} of route {route} is not a dense standard capsid")
            (y,) = c.bottom_outside
            steps[Cube(y, mask_of(packet))] = step
            q = capsid_flip(q, packet)
        big = Cubillage.of(default_configuration(n, d + 1), steps)
        # the gap between consecutive membranes is one cube, so precedence follows flip order
        for a, succ in natural_order_dag(big).items():
            for b in succ:
                if steps[a] >= steps[b]:
                    raise PropertyViolated(f"route {route}: cube {a} precedes {b} but was flipped later")
        route_qs[route] = big
        step_of[route] = steps

    system = cortege_system(graph, d + 1)
    index = system.lower_index
    succ: list[set[int]] = [set() for _ in system.lower]
    for route, big in route_qs.items():
        names = route_corteges(route, d)
        for a, after in natural_order_dag(big).items():
            for b in after:
                succ[index[names[a.T]]].add(index[names[b.T]])
    indeg = [0] * len(succ)
    for s in succ:
        for w in s:
            indeg[w] += 1
    heap = [i for i, k in enumerate(indeg) if k == 0]
    heapq.heapify(heap)
    seq = []
    while heap:
        v = heapq.heappop(heap)
        seq.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(seq) != len(succ):
        stuck = [system.lower[i] for i, k in enumerate(indeg) if k > 0]
        raise CombinedCycle(f"combined natural orders have a cycle through {stuck[:3]}")
    order = ConvexOrder(graph, d + 1, tuple(system.lower[i] for i in seq))
    return Lift(order, check_convex(order), route_qs, step_of)


def lift_chain(chain: MaximalChain) -> ConvexOrder:
    """Convex order on the d-corteges determined by a maximal chain of degree d."""
    return lift_chain_details(chain).order


def descend(sigma_prime: TypeAssignment, check_membranes: bool = False) -> MaximalChain:
    """Maximal chain of degree d representing a class of degree d+1.

    Works top-down from the all-anti-standard class: each step picks a cube pressed
    to the current membrane of some route, chases it across routes sharing the
    cortege until it is pressed everywhere, and applies the lowering flip.
    """
    graph = sigma_prime.graph
    d = sigma_prime.d - 1
    if d < 2:
        raise PreconditionViolated("descend needs a class of degree at least 3")
    routes = _active_routes(graph, d + 1)
    rqs = {r: route_cubillage(sigma_prime, r) for r in routes}
    succ = {r: natural_order_dag(rq.cubillage) for r, rq in rqs.items()}
    names = {r: route_corteges(r, d) for r in routes}
    upper = cortege_system(graph, d).upper
    key = {p: i for i, p in enumerate(upper)}
    containing: dict[Cortege, list[Path]] = {p: [] for p in upper}
    for r in routes:
        for p in names[r].values():
            containing[p].append(r)

    active = set(upper)
    sigma = TypeAssignment(graph, d, frozenset(upper))
    lowered = []

    def cube(r, p):
        return rqs[r].cube_of(p)

    def pressed(r, c):
        return all(names[r][w.T] not in active for w in succ[r][c])

    def maximal_above(r, c):
        q = rqs[r].cubillage
        out = []
        for w in q.cubes:
            p = names[r][w.T]
            if p in active and q.precedes(c, w) and pressed(r, w):
                out.append(p)
        return out

    while active:
        starts = [
            names[r][c.T]
            for r in routes
            for c in rqs[r].cubillage.cubes
            if names[r][c.T] in active and pressed(r, c)
        ]
        if not starts:
            raise PropertyViolated("no cube is pressed to a membrane although anti-standard corteges remain")
        p = min(starts, key=key.__getitem__)
        visited = {p}
        while True:
            blocked = next((r for r in containing[p] if not pressed(r, cube(r, p))), None)
            if blocked is None:
                break
            above = maximal_above(blocked, cube(blocked, p))
            if not above:
                raise PropertyViolated(f"cube of {p} is not pressed in {blocked} yet nothing above it is")
            p = min(above, key=key.__getitem__)
            if p in visited:
                raise ChaseDiverged(f"chase revisited {p}")
            visited.add(p)
        sigma = apply_flip(sigma, p)
        active.discard(p)
        lowered.append(p)
        if check_membranes:
            for r in routes:
                q = rqs[r].cubillage
                ideal = frozenset(c for c in q.cubes if names[r][c.T] in active)
                if not is_membrane(Membrane(q, ideal, membrane_facets(q, ideal))):
                    raise PropertyViolated(f"route {r}: current class does not cut a membrane")
    return MaximalChain(graph, d, tuple(reversed(lowered)))


@dataclass
class CompatibilityReport:
    is_ideal: bool
    compatible: bool
    chain_found: bool | None
    chain: MaximalChain | None = None
    explored: int = 0

    def to_json(self) -> dict:
        return {
            "is_ideal": self.is_ideal,
            "compatible": self.compatible,
            "chain_found": self.chain_found,
            "chain": None if self.chain is None else self.chain.to_json(),
            "explored": self.explored,
        }


def compatibility_check(
    sigma: TypeAssignment,
    ideal: frozenset[Cortege],
    sigma_prime: TypeAssignment,
    search: bool = True,
    budget: int = 200_000,
) -> CompatibilityReport:
    """Is ``ideal`` an ideal of stable precedence under ``sigma_prime``, is ``sigma``
    compatible with it, and (optionally) does some chain representing
    ``sigma_prime`` pass through ``sigma``."""
    graph, d = sigma.graph, sigma.d
    if sigma_prime.d != d + 1 or sigma_prime.graph != graph:
        raise PreconditionViolated("sigma' must be of degree d+1 over the same graph")
    dag = forced_relation_dag(sigma_prime)
    system = cortege_system(graph, d)
    # the order of degree d+1 lives on the d-corteges: same canonical indexing
    assert dag.system.lower == system.upper
    target = system.mask_of(ideal)
    anc = dag.anc

    def is_down_closed(mask):
        for j in bits(mask):
            if anc[j] & ~mask:
                return False
        return True

    is_ideal = is_down_closed(target)
    compatible = sigma.anti_standard == frozenset(ideal)
    if not search or not (is_ideal and compatible):
        return CompatibilityReport(is_ideal, compatible, None if not search else False)

    full = system.full_mask
    size = bin(target).count("1")
    explored = 0
    path: list[int] = []

    def dfs(mask):
        nonlocal explored
        explored += 1
        if explored > budget:
            raise CapExceeded(f"chain search exceeded {budget} states")
        if mask == full:
            chain = MaximalChain(graph, d, tuple(system.upper[j] for j in path))
            if lift_chain_details(chain).assignment.anti_standard == sigma_prime.anti_standard:
                return chain
            return None
        res = system.closure(mask)
        _, desc, anc_d = res
        dense = system.dense_mask(mask, desc, anc_d) & ~mask & full
        count = bin(mask).count("1")
        for j in bits(dense):
            nxt = mask | 1 << j
            if anc[j] & ~mask:
                continue
            if count < size and nxt & ~target:
                continue
            if count >= size and target & ~nxt:
                continue
            path.append(j)
            found = dfs(nxt)
            path.pop()
            if found is not None:
                return found
        return None

    chain = dfs(0)
    return CompatibilityReport(is_ideal, compatible, chain is not None, chain, explored)


def principal_ideal(sigma_prime: TypeAssignment, p: Cortege) -> frozenset[Cortege]:
    """Smallest ideal of stable precedence under ``sigma_prime`` containing ``p``."""
    dag = forced_relation_dag(sigma_prime)
    j = dag.system.lower_index[p]
    mask = dag.anc[j] | 1 << j
    return frozenset(dag.system.lower[i] for i in bits(mask))
