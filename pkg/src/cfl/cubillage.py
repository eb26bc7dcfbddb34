"""Cubillages (fine zonotopal tilings) of cyclic zonotopes Z(n, d).

Colors are 1..n. Color sets are int bitmasks with bit ``i`` standing for
color ``i`` (bit 0 is never used). A cube ``(X|T)`` has bottom vertex X and
edge colors T. All orientation tests are signs of exact integer
determinants of the configuration vectors, never floating point.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Literal, NamedTuple

from .errors import (
    CapExceeded,
    ChainBroken,
    CycleDetected,
    NotAChain,
    NotAMembrane,
    NotDense,
    NotPresent,
    PreconditionViolated,
    default_cap,
)
from .zonotope import CyclicConfiguration, default_configuration, dot, subset_point


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask >> i:
        if mask >> i & 1:
            out.append(i)
        i += 1
    return out


def mask_of(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        m |= 1 << c
    return m


def color_subsets(n: int, k: int) -> list[int]:
    """k-subsets of [n] as masks, in lexicographic order of their sorted tuples."""
    return [mask_of(c) for c in combinations(range(1, n + 1), k)]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Cube(NamedTuple):
    X: int
    T: int

    def colors(self) -> tuple[list[int], list[int]]:
        return bits(self.X), bits(self.T)

    def __str__(self) -> str:
        x, t = self.colors()
        return f"({''.join(map(str, x)) or '0'}|{''.join(map(str, t))})"


Facet = tuple[int, int]  # (bottom, type) with |type| = d - 1


def _facet_pairs(config: CyclicConfiguration, cube: Cube) -> list[tuple[Facet, Facet]]:
    """(front, rear) facet pairs of a cube, one pair per color of its type."""
    out = []
    for t in bits(cube.T):
        s = cube.T & ~(1 << t)
        low, high = (cube.X, s), (cube.X | 1 << t, s)
        # the facet with coefficient 0 on xi_t is front iff det[xi_S, xi_t] > 0
        if config.orientation(bits(s) + [t]) > 0:
            out.append((low, high))
        else:
            out.append((high, low))
    return out


@dataclass(frozen=True)
class Cubillage:
    config: CyclicConfiguration = field(compare=False, repr=False)
    cubes: frozenset[Cube]
    n: int
    d: int

    @classmethod
    def of(cls, config: CyclicConfiguration, cubes: Iterable[Cube]) -> Cubillage:
        return cls(config, frozenset(Cube(*c) for c in cubes), config.n, config.d)

    @cached_property
    def by_type(self) -> dict[int, Cube]:
        return {c.T: c for c in self.cubes}

    @cached_property
    def sorted_cubes(self) -> list[Cube]:
        return sorted(self.cubes, key=lambda c: (bits(c.T), bits(c.X)))

    @cached_property
    def facet_sides(self) -> tuple[dict[Facet, Cube], dict[Facet, Cube]]:
        """(facet -> cube having it as front facet, facet -> cube having it as rear facet)."""
        front_of: dict[Facet, Cube] = {}
        rear_of: dict[Facet, Cube] = {}
        for cube in self.sorted_cubes:
            for fr, re in _facet_pairs(self.config, cube):
                if fr in front_of or re in rear_of:
                    raise CycleDetected(f"facet shared on the same side by two cubes near {cube}")
                front_of[fr] = cube
                rear_of[re] = cube
        return front_of, rear_of

    @cached_property
    def _order(self) -> tuple[dict[Cube, int], list[list[int]], list[int], list[int]]:
        cubes = self.sorted_cubes
        index = {c: i for i, c in enumerate(cubes)}
        front_of, rear_of = self.facet_sides
        succ: list[list[int]] = [[] for _ in cubes]
        for f, c in rear_of.items():
            nxt = front_of.get(f)
            if nxt is not None:
                succ[index[c]].append(index[nxt])
        indeg = [0] * len(cubes)
        for s in succ:
            for w in s:
                indeg[w] += 1
        stack = [i for i, k in enumerate(indeg) if k == 0]
        topo = []
        while stack:
            v = stack.pop()
            topo.append(v)
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        if len(topo) != len(cubes):
            raise CycleDetected("natural order has a directed cycle")
        desc = [0] * len(cubes)
        for v in reversed(topo):
            b = 0
            for w in succ[v]:
                b |= desc[w] | 1 << w
            desc[v] = b
        return index, succ, topo, desc

    def precedes(self, a: Cube, b: Cube) -> bool:
        """Strict natural order a < b."""
        index, _, _, desc = self._order
        return bool(desc[index[a]] >> index[b] & 1)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "cubes": [{"X": bits(c.X), "T": bits(c.T)} for c in self.sorted_cubes],
        }

    @classmethod
    def from_json(cls, data: dict, config: CyclicConfiguration | None = None) -> Cubillage:
        n, d = data["n"], data["d"]
        config = config or default_configuration(n, d)
        return cls.of(config, (Cube(mask_of(c["X"]), mask_of(c["T"])) for c in data["cubes"]))


def extreme_cubillage(config: CyclicConfiguration, side: Literal["front", "rear"] = "front") -> Cubillage:
    """Projection of the front (standard) or rear (anti-standard) side of the lifted zonotope."""
    n, d = config.n, config.d
    if n < d:
        raise PreconditionViolated(f"need n >= d, got n={n}, d={d}")
    lifted = config.lift()
    want = -1 if side == "front" else 1
    cubes = []
    for tmask in color_subsets(n, d):
        ts = bits(tmask)
        x = 0
        for i in range(1, n + 1):
            if not tmask >> i & 1 and lifted.orientation(ts + [i]) == want:
                x |= 1 << i
        cubes.append(Cube(x, tmask))
    return Cubillage.of(config, cubes)


def standard_cubillage(n: int, d: int) -> Cubillage:
    return extreme_cubillage(default_configuration(n, d), "front")


def anti_standard_cubillage(n: int, d: int) -> Cubillage:
    return extreme_cubillage(default_configuration(n, d), "rear")


# ---------------------------------------------------------------- validation


def _interval(config: CyclicConfiguration, h, base_colors: int, gen_colors: int) -> tuple[int, int]:
    base = dot(h, subset_point(config, bits(base_colors)))
    lo = hi = base
    for t in bits(gen_colors):
        v = dot(h, config.xi(t))
        if v < 0:
            lo += v
        else:
            hi += v
    return lo, hi


@dataclass
class ValidationReport:
    failures: dict[str, list[str]]

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def __bool__(self) -> bool:
        return self.ok


def validate_cubillage(q: Cubillage) -> ValidationReport:
    """Exact tiling check: count and distinct types, containment in Z, pairwise
    interior disjointness, and no vertex of the complex hanging on a cube."""
    config, n, d = q.config, q.n, q.d
    fail: dict[str, list[str]] = {"count": [], "inside": [], "disjoint": [], "closure": []}
    full = mask_of(range(1, n + 1))
    cubes = q.sorted_cubes
    if len(cubes) != comb(n, d):
        fail["count"].append(f"{len(cubes)} cubes, expected {comb(n, d)}")
    if len({c.T for c in cubes}) != len(cubes):
        fail["count"].append("repeated cube types")
    for c in cubes:
        if popcount(c.T) != d or c.X & c.T or (c.X | c.T) & ~full:
            fail["count"].append(f"malformed cube {c}")
    if fail["count"]:
        return ValidationReport(fail)

    # Z is the intersection of slabs along the normals of all (d-1)-subsets of colors
    zonotope_slabs = {}
    for s in combinations(range(1, n + 1), d - 1):
        h = config.normal_of(list(s))
        zonotope_slabs[s] = (h, _interval(config, h, 0, full))
    for c in cubes:
        for h, (lo, hi) in zonotope_slabs.values():
            clo, chi = _interval(config, h, c.X, c.T)
            if clo < lo or chi > hi:
                fail["inside"].append(f"{c} leaves the zonotope")
                break

    # separating direction search: facet normals of the difference zonotope
    for a, b in combinations(cubes, 2):
        colors = bits(a.T | b.T)
        separated = False
        for s in combinations(colors, d - 1):
            h = config.normal_of(list(s))
            alo, ahi = _interval(config, h, a.X, a.T)
            blo, bhi = _interval(config, h, b.X, b.T)
            if ahi <= blo or bhi <= alo:
                separated = True
                break
        if not separated:
            fail["disjoint"].append(f"{a} and {b} overlap")

    # face-to-face: every vertex of the complex inside a closed cube is one of its corners
    points = {}
    for c in cubes:
        for sub in _submasks(c.T):
            y = c.X | sub
            points.setdefault(subset_point(config, bits(y)), y)
    for c in cubes:
        corners = {subset_point(config, bits(c.X | sub)) for sub in _submasks(c.T)}
        slabs = []
        for s in combinations(bits(c.T), d - 1):
            h = config.normal_of(list(s))
            slabs.append((h, _interval(config, h, c.X, c.T)))
        for p, y in points.items():
            if p in corners:
                continue
            if all(lo <= dot(h, p) <= hi for h, (lo, hi) in slabs):
                fail["closure"].append(f"vertex {bits(y)} lies on cube {c} without being a corner")
    return ValidationReport(fail)


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def vertex_set(q: Cubillage) -> set[int]:
    return {c.X | sub for c in q.cubes for sub in _submasks(c.T)}


def faces_from_vertices(vertices: set[int], n: int, k: int) -> set[Cube]:
    """All (X|T) with |T| = k whose 2^k corners all lie in ``vertices``."""
    out = set()
    for t in color_subsets(n, k):
        for x in vertices:
            if x & t:
                continue
            if all(x | sub in vertices for sub in _submasks(t)):
                out.add(Cube(x, t))
    return out


# ------------------------------------------------------------ natural order


def natural_order_dag(q: Cubillage) -> dict[Cube, list[Cube]]:
    """Immediate-precedence arcs: C -> C' when a rear facet of C is a front facet of C'."""
    index, succ, _, _ = q._order
    cubes = q.sorted_cubes
    return {cubes[i]: [cubes[j] for j in sorted(succ[i])] for i in range(len(cubes))}


def natural_linear_extension(q: Cubillage) -> list[Cube]:
    _, _, topo, _ = q._order
    return [q.sorted_cubes[i] for i in topo]


# ------------------------------------------------------- pies and expansion


def contract(q: Cubillage, color: int) -> Cubillage:
    """Delete the pie of ``color`` and renumber colors above it down by one."""
    n, d = q.n, q.d
    if not 1 <= color <= n:
        raise PreconditionViolated(f"color {color} outside 1..{n}")
    if n - 1 < d:
        raise PreconditionViolated(f"contracting Z({n},{d}) leaves fewer colors than the dimension")
    low = (1 << color) - 1
    cubes = []
    for c in q.cubes:
        if c.T >> color & 1:
            continue
        x = c.X & ~(1 << color)
        cubes.append(Cube((x & low) | (x >> 1 & ~low), (c.T & low) | (c.T >> 1 & ~low)))
    return Cubillage.of(q.config.delete(color), cubes)


def restrict(q: Cubillage, colors: Iterable[int]) -> Cubillage:
    """Contract every color outside ``colors``."""
    keep = set(colors)
    out = q
    for c in sorted(set(range(1, q.n + 1)) - keep, reverse=True):
        out = contract(out, c)
    return out


def pie_components(q: Cubillage, color: int) -> dict[Cube, int]:
    """Connected components (0 or 1) of the cubes outside the pie of ``color``."""
    rest = [c for c in q.sorted_cubes if not c.T >> color & 1]
    by_facet: dict[Facet, list[Cube]] = {}
    for c in rest:
        for fr, re in _facet_pairs(q.config, c):
            by_facet.setdefault(fr, []).append(c)
            by_facet.setdefault(re, []).append(c)
    adj = {c: set() for c in rest}
    for group in by_facet.values():
        for a in group:
            adj[a].update(g for g in group if g != a)
    comp: dict[Cube, int] = {}
    label = 0
    for c in rest:
        if c in comp:
            continue
        comp[c] = label
        queue = deque([c])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in comp:
                    comp[w] = label
                    queue.append(w)
        label += 1
    return comp


@dataclass(frozen=True)
class Membrane:
    """A membrane of a cubillage, stored as its facets and the ideal of cubes before it."""

    host: Cubillage = field(repr=False)
    ideal: frozenset[Cube]
    facets: frozenset[Facet]

    def projection(self) -> Cubillage:
        return Cubillage.of(self.host.config.project(), (Cube(y, s) for y, s in self.facets))

    def inversion_types(self) -> frozenset[int]:
        return frozenset(c.T for c in self.ideal)


def membrane_facets(q: Cubillage, ideal: frozenset[Cube]) -> frozenset[Facet]:
    """Rear boundary of the union of the front side of Z and the cubes of ``ideal``."""
    front_of, rear_of = q.facet_sides
    out = set()
    for f in set(front_of) | set(rear_of):
        before = rear_of.get(f)
        after = front_of.get(f)
        if (before is None or before in ideal) and (after is None or after not in ideal):
            out.add(f)
    return frozenset(out)


def membrane_from_ideal(q: Cubillage, ideal: Iterable[Cube]) -> Membrane:
    ideal = frozenset(ideal)
    m = Membrane(q, ideal, membrane_facets(q, ideal))
    if not is_membrane(m):
        raise NotAMembrane("facets do not project onto a cubillage of one dimension less")
    return m


def is_membrane(m: Membrane) -> bool:
    q = m.host
    if q.d < 2:
        return False
    if len(m.facets) != comb(q.n, q.d - 1):
        return False
    if len({s for _, s in m.facets}) != len(m.facets):
        return False
    return validate_cubillage(m.projection()).ok


def front_membrane(q: Cubillage) -> Membrane:
    return membrane_from_ideal(q, ())


def rear_membrane(q: Cubillage) -> Membrane:
    return membrane_from_ideal(q, q.cubes)


def order_ideals(q: Cubillage, cap: int | None = None) -> list[frozenset[Cube]]:
    cap = default_cap() if cap is None else cap
    index, succ, _, _ = q._order
    cubes = q.sorted_cubes
    pred_mask = [0] * len(cubes)
    for i, s in enumerate(succ):
        for j in s:
            pred_mask[j] |= 1 << i
    seen = {0}
    queue = deque([0])
    while queue:
        ideal = queue.popleft()
        for i in range(len(cubes)):
            if not ideal >> i & 1 and pred_mask[i] & ~ideal == 0:
                nxt = ideal | 1 << i
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise CapExceeded(f"more than {cap} order ideals")
                    queue.append(nxt)
    ordered = sorted(seen, key=lambda m: (popcount(m), bits(m)))
    return [frozenset(cubes[i] for i in bits(m)) for m in ordered]


@dataclass
class MembraneLattice:
    members: list[Membrane]

    @cached_property
    def _by_ideal(self) -> dict[frozenset[Cube], Membrane]:
        return {m.ideal: m for m in self.members}

    def __len__(self) -> int:
        return len(self.members)

    def meet(self, a: Membrane, b: Membrane) -> Membrane:
        return self._by_ideal[a.ideal & b.ideal]

    def join(self, a: Membrane, b: Membrane) -> Membrane:
        return self._by_ideal[a.ideal | b.ideal]

    @property
    def bottom(self) -> Membrane:
        return min(self.members, key=lambda m: len(m.ideal))

    @property
    def top(self) -> Membrane:
        return max(self.members, key=lambda m: len(m.ideal))


def membranes(q: Cubillage, cap: int | None = None) -> MembraneLattice:
    """Membranes of ``q``: ideals of the natural order whose rear boundary projects bijectively."""
    out = []
    for ideal in order_ideals(q, cap):
        m = Membrane(q, ideal, membrane_facets(q, ideal))
        if is_membrane(m):
            out.append(m)
    return MembraneLattice(out)


def expand(q: Cubillage, m: Membrane, side: Literal["high", "low"] = "high") -> Cubillage:
    """Insert a new color above all others (high) or below (low) along membrane ``m``."""
    if m.host != q or not is_membrane(m):
        raise NotAMembrane("membrane does not belong to this cubillage")
    n, d = q.n, q.d
    cubes = []
    if side == "high":
        alpha = 1 << (n + 1)
        for c in q.cubes:
            cubes.append(c if c in m.ideal else Cube(c.X | alpha, c.T))
        cubes.extend(Cube(y, s | alpha) for y, s in m.facets)
    elif side == "low":
        alpha = 1 << 1
        # xi_1 points to the front of a hyperplane of the others iff d is odd,
        # so the side that absorbs the new color alternates with the parity of d
        shifted_inside = d % 2 == 0
        for c in q.cubes:
            x, t = c.X << 1, c.T << 1
            cubes.append(Cube(x | alpha, t) if (c in m.ideal) == shifted_inside else Cube(x, t))
        cubes.extend(Cube(y << 1, (s << 1) | alpha) for y, s in m.facets)
    else:
        raise ValueError(f"unknown side {side!r}")
    return Cubillage.of(default_configuration(n + 1, d), cubes)


# -------------------------------------------------------------------- tunnels


def tunnel(q: Cubillage, s_colors: Iterable[int]) -> list[Cube]:
    """Cubes whose type contains the (d-1)-set S, ordered front to rear."""
    s = mask_of(s_colors)
    if popcount(s) != q.d - 1:
        raise PreconditionViolated("tunnel needs |S| = d-1")
    front_of, rear_of = q.facet_sides
    members = [c for c in q.sorted_cubes if c.T & s == s]
    sides = {}
    for c in members:
        (t,) = bits(c.T & ~s)
        low, high = (c.X, s), (c.X | 1 << t, s)
        sides[c] = (low, high) if q.config.orientation(bits(s) + [t]) > 0 else (high, low)
    by_front = {fr: c for c, (fr, _) in sides.items()}
    rears = {re for _, re in sides.values()}
    starts = [c for c, (fr, _) in sides.items() if fr not in rears]
    if len(starts) != 1:
        raise ChainBroken(f"tunnel {bits(s)} has {len(starts)} starting cubes")
    chain = [starts[0]]
    while sides[chain[-1]][1] in by_front:
        chain.append(by_front[sides[chain[-1]][1]])
        if len(chain) > len(members):
            raise ChainBroken(f"tunnel {bits(s)} loops")
    if len(chain) != q.n - q.d + 1 or len(chain) != len(members):
        raise ChainBroken(f"tunnel {bits(s)} has {len(chain)} chained cubes of {len(members)}")
    if sides[chain[0]][0] in rear_of or sides[chain[-1]][1] in front_of:
        raise ChainBroken(f"tunnel {bits(s)} does not run from the front side to the rear side")
    return chain


# -------------------------------------------------------- capsids and flips


@dataclass(frozen=True)
class Capsid:
    packet: tuple[int, ...]
    cubes: tuple[Cube, ...]  # C_i has type packet - p_i
    filling: str  # "standard" or "anti-standard"

    @property
    def bottom_outside(self) -> set[int]:
        p = mask_of(self.packet)
        return {c.X & ~p for c in self.cubes}


def capsid(q: Cubillage, packet: Iterable[int]) -> Capsid:
    ps = tuple(sorted(packet))
    if len(ps) != q.d + 1:
        raise PreconditionViolated(f"packet must have d+1 = {q.d + 1} colors")
    pm = mask_of(ps)
    try:
        cubes = tuple(q.by_type[pm & ~(1 << p)] for p in ps)
    except KeyError as exc:
        raise NotPresent(f"packet {ps} is missing a cube") from exc
    if all(q.precedes(b, a) for a, b in zip(cubes, cubes[1:])):
        filling = "standard"
    elif all(q.precedes(a, b) for a, b in zip(cubes, cubes[1:])):
        filling = "anti-standard"
    else:
        raise NotAChain(f"cubes of packet {ps} are not a monotone chain")
    return Capsid(ps, cubes, filling)


def is_dense_capsid(q: Cubillage, c: Capsid) -> bool:
    """No pie of a color outside the packet separates two cubes of the capsid."""
    return len(c.bottom_outside) == 1


def pie_separated(q: Cubillage, c: Capsid) -> bool:
    """Oracle for looseness via connected components of the complement of each pie."""
    pm = mask_of(c.packet)
    for color in range(1, q.n + 1):
        if pm >> color & 1:
            continue
        comp = pie_components(q, color)
        if len({comp[cube] for cube in c.cubes}) > 1:
            return True
    return False


def capsid_fillings(config: CyclicConfiguration, bottom: int, packet: Iterable[int]) -> tuple[frozenset[Cube], frozenset[Cube]]:
    """(standard, anti-standard) fillings of the (d+1)-cube (bottom|packet): the
    projections of its front and rear facets in the lifted configuration."""
    ps = sorted(packet)
    pm = mask_of(ps)
    lifted = config.lift()
    front, rear = [], []
    for p in ps:
        s = pm & ~(1 << p)
        low, high = Cube(bottom, s), Cube(bottom | 1 << p, s)
        if lifted.orientation(bits(s) + [p]) > 0:
            front.append(low)
            rear.append(high)
        else:
            front.append(high)
            rear.append(low)
    return frozenset(front), frozenset(rear)


def capsid_flip(q: Cubillage, packet: Iterable[int]) -> Cubillage:
    """Raising flip on a dense standard capsid, lowering flip on a dense anti-standard one."""
    c = capsid(q, packet)
    if not is_dense_capsid(q, c):
        raise NotDense(f"capsid {c.packet} is loose")
    (y,) = c.bottom_outside
    standard, anti = capsid_fillings(q.config, y, c.packet)
    current = frozenset(c.cubes)
    if current == standard:
        new = anti
    elif current == anti:
        new = standard
    else:
        raise NotPresent(f"cubes of packet {c.packet} do not form a filling of ({bits(y)}|{c.packet})")
    return Cubillage.of(q.config, (q.cubes - current) | new)


def inversions(q: Cubillage) -> frozenset[int]:
    """Packets (as masks) whose capsid has the anti-standard filling."""
    return frozenset(
        pm for pm in color_subsets(q.n, q.d + 1) if capsid(q, bits(pm)).filling == "anti-standard"
    )


def ziegler_check(packets: Iterable[int], n: int, d: int) -> bool:
    """Every (d+2)-set P meets the set in a prefix or a suffix of its lex-ordered (d+1)-subsets."""
    chosen = set(packets)
    for big in color_subsets(n, d + 2):
        fam = [big & ~(1 << p) for p in reversed(bits(big))]  # lexicographic order
        flags = [f in chosen for f in fam]
        k = sum(flags)
        if flags != [True] * k + [False] * (len(fam) - k) and flags != [False] * (len(fam) - k) + [True] * k:
            return False
    return True


def ziegler_sets(n: int, d: int, cap: int | None = None) -> list[frozenset[int]]:
    """All subsets of C([n], d+1) passing the prefix/suffix criterion, by backtracking."""
    cap = default_cap() if cap is None else cap
    packets = color_subsets(n, d + 1)
    bigs = color_subsets(n, d + 2)
    position = {p: i for i, p in enumerate(packets)}
    fams = []
    for big in bigs:
        fams.append([position[big & ~(1 << p)] for p in reversed(bits(big))])
    # families become checkable once their last packet is decided
    ready = [[] for _ in packets]
    for fam in fams:
        ready[max(fam)].append(fam)
    choice = [False] * len(packets)
    out = []

    def ok(fam):
        flags = [choice[i] for i in fam]
        k = sum(flags)
        return flags == [True] * k + [False] * (len(fam) - k) or flags == [False] * (len(fam) - k) + [True] * k

    def go(i):
        if i == len(packets):
            out.append(frozenset(p for p, c in zip(packets, choice) if c))
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} admissible sets")
            return
        for value in (False, True):
            choice[i] = value
            if all(ok(f) for f in ready[i]):
                go(i + 1)
        choice[i] = False

    go(0)
    return out


def reverse_colors(q: Cubillage) -> Cubillage:
    """Relabel color i as n+1-i (a mirror image of the tiling)."""
    n = q.n

    def rev(mask):
        return mask_of(n + 1 - i for i in bits(mask))

    return Cubillage.of(default_configuration(n, q.d), (Cube(rev(c.X), rev(c.T)) for c in q.cubes))


# ----------------------------------------------------------------- flip graph


@dataclass
class CubillageFlipGraph:
    n: int
    d: int
    keys: list[frozenset[int]]  # inversion sets, sorted by (size, sorted packets)
    cubillages: list[Cubillage]
    arcs: list[tuple[int, int, int]]  # (from, to, packet mask)

    def __len__(self) -> int:
        return len(self.keys)

    @cached_property
    def index(self) -> dict[frozenset[int], int]:
        return {k: i for i, k in enumerate(self.keys)}

    def sources(self) -> list[int]:
        targets = {b for _, b, _ in self.arcs}
        return [i for i in range(len(self.keys)) if i not in targets]

    def sinks(self) -> list[int]:
        origins = {a for a, _, _ in self.arcs}
        return [i for i in range(len(self.keys)) if i not in origins]


def dense_capsids(q: Cubillage) -> list[Capsid]:
    out = []
    for pm in color_subsets(q.n, q.d + 1):
        c = capsid(q, bits(pm))
        if is_dense_capsid(q, c):
            out.append(c)
    return out


def cubillage_flip_graph(n: int, d: int, config: CyclicConfiguration | None = None, cap: int | None = None) -> CubillageFlipGraph:
    """BFS from the standard cubillage through raising flips on dense capsids."""
    cap = default_cap() if cap is None else cap
    config = config or default_configuration(n, d)
    start = extreme_cubillage(config, "front")
    found = {inversions(start): start}
    queue = deque([start])
    raw = []
    while queue:
        q = queue.popleft()
        key = inversions(q)
        for c in dense_capsids(q):
            if c.filling != "standard":
                continue
            nxt = capsid_flip(q, c.packet)
            nkey = key | {mask_of(c.packet)}
            raw.append((key, nkey, mask_of(c.packet)))
            if nkey not in found:
                found[nkey] = nxt
                if len(found) > cap:
                    raise CapExceeded(f"more than {cap} cubillages of Z({n},{d})")
                queue.append(nxt)
    keys = sorted(found, key=lambda k: (len(k), sorted(bits(p) for p in k)))
    idx = {k: i for i, k in enumerate(keys)}
    arcs = sorted((idx[a], idx[b], p) for a, b, p in raw)
    return CubillageFlipGraph(n, d, keys, [found[k] for k in keys], arcs)


_FLIP_GRAPHS: dict[tuple[int, int], CubillageFlipGraph] = {}


def cached_flip_graph(n: int, d: int) -> CubillageFlipGraph:
    if (n, d) not in _FLIP_GRAPHS:
        _FLIP_GRAPHS[(n, d)] = cubillage_flip_graph(n, d)
    return _FLIP_GRAPHS[(n, d)]


def cubillage_with_inversions(n: int, d: int, packets: Iterable[int]) -> Cubillage | None:
    """The cubillage of Z(n, d) with the given inversion set (packet masks), if any."""
    fg = cached_flip_graph(n, d)
    i = fg.index.get(frozenset(packets))
    return None if i is None else fg.cubillages[i]


def random_membrane(q: Cubillage, rng: random.Random) -> Membrane:
    """A membrane obtained by growing a random order ideal and keeping the last valid one."""
    index, succ, _, _ = q._order
    cubes = q.sorted_cubes
    pred = [0] * len(cubes)
    for i, s in enumerate(succ):
        for j in s:
            pred[j] |= 1 << i
    target = rng.randint(0, len(cubes))
    ideal = 0
    best = front_membrane(q)
    for _ in range(target):
        avail = [i for i in range(len(cubes)) if not ideal >> i & 1 and pred[i] & ~ideal == 0]
        if not avail:
            break
        ideal |= 1 << rng.choice(avail)
        cand = Membrane(q, frozenset(cubes[i] for i in bits(ideal)), membrane_facets(q, frozenset(cubes[i] for i in bits(ideal))))
        if is_membrane(cand):
            best = cand
    return best
