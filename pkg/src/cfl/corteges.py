"""Corteges (chained tuples of paths), their subcortege sequences and endpoint types."""

from __future__ import annotations

from collections import defaultdict

from .digraph import Digraph, Labeling, Path, concatenate, enumerate_paths
from .errors import CapExceeded, NotATandem, NotMonotone, default_cap

Cortege = tuple[Path, ...]


def is_cortege(parts: Cortege) -> bool:
    return len(parts) >= 1 and all(len(p) >= 2 for p in parts) and all(
        a[-1] == b[0] for a, b in zip(parts, parts[1:])
    )


def endpoints(p: Cortege) -> tuple[str, ...]:
    """Tail of the first part followed by the head of every part."""
    return (p[0][0],) + tuple(part[-1] for part in p)


def vertex_sequence(p: Cortege) -> Path:
    out = p[0]
    for part in p[1:]:
        out = concatenate(out, part)
    return out


def cortege_key(g: Digraph, p: Cortege) -> tuple:
    return tuple(g.path_key(part) for part in p)


def enumerate_corteges(g: Digraph, k: int, cap: int | None = None) -> list[Cortege]:
    """All k-corteges of ``g`` in canonical order; k=1 gives the 1-tuples of paths."""
    if k < 1:
        raise ValueError("k must be positive")
    cap = default_cap() if cap is None else cap
    paths = enumerate_paths(g, cap)
    by_tail = defaultdict(list)
    for q in paths:
        by_tail[q[0]].append(q)
    out: list[Cortege] = []

    def extend(prefix):
        if len(prefix) == k:
            out.append(prefix)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} {k}-corteges")
            return
        for q in by_tail[prefix[-1][-1]]:
            extend(prefix + (q,))

    for q in paths:
        extend((q,))
    out.sort(key=lambda c: cortege_key(g, c))
    return out


def subcortege_sequence(p: Cortege) -> tuple[Cortege, ...]:
    """The d+1 (d-1)-corteges s_1..s_{d+1}: drop the first part, merge each
    consecutive pair, drop the last part."""
    d = len(p)
    if d < 2:
        raise ValueError("subcortege sequence needs d >= 2")
    seq = [p[1:]]
    for i in range(2, d + 1):
        seq.append(p[: i - 2] + (concatenate(p[i - 2], p[i - 1]),) + p[i:])
    seq.append(p[:-1])
    return tuple(seq)


def endpoint_type(p: Cortege, labeling: Labeling) -> tuple[int, ...]:
    """Labels of the endpoints of ``p``; must increase strictly."""
    t = tuple(labeling[v] for v in endpoints(p))
    if any(a >= b for a, b in zip(t, t[1:])):
        raise NotMonotone(f"labels {t} of cortege {p} do not increase")
    return t


def route_labeling(route: Path) -> Labeling:
    """Positions 1..n along a route, used as colors."""
    return {v: i + 1 for i, v in enumerate(route)}


def lies_in(p: Cortege, route: Path) -> bool:
    pos = route_labeling(route)
    seq = vertex_sequence(p)
    if any(v not in pos for v in seq):
        return False
    return all(pos[b] == pos[a] + 1 for a, b in zip(seq, seq[1:]))


def cortege_from_type(route: Path, colors) -> Cortege:
    """Inverse of ``endpoint_type`` on a route: colors are 1-based positions."""
    cs = sorted(colors)
    return tuple(route[a - 1 : b] for a, b in zip(cs, cs[1:]))


def _merge(a: Path, b: Path) -> Path | None:
    for i in range(len(a)):
        tail = a[i:]
        if b[: len(tail)] == tail:
            return a + b[len(tail):]
        if len(tail) > len(b) and tail[: len(b)] == b:
            return a
    return None


def cortege_from_pair(s: Cortege, t: Cortege) -> Cortege:
    """Recover the d-cortege having both ``s`` and ``t`` in its subcortege sequence."""
    cs, ct = vertex_sequence(s), vertex_sequence(t)
    full = _merge(cs, ct) or _merge(ct, cs)
    if full is None:
        raise NotATandem(f"{s} and {t} do not lie on a common path")
    cut = set(endpoints(s)) | set(endpoints(t))
    idx = [i for i, v in enumerate(full) if v in cut]
    return tuple(full[a : b + 1] for a, b in zip(idx, idx[1:]))
