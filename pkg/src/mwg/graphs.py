"""Circuit detection and cycle analysis on multi-weighted multigraphs.

The central operation decides whether a directed multigraph carries a
circuit (a closed walk, possibly revisiting edges) whose total weight is
zero, or nonnegative, in every dimension. Existence is decided through a
linear program over edge multiplicities: a circuit induces a balanced
multiplicity vector (inflow equals outflow at every vertex), and
conversely any balanced integer vector whose support is weakly connected
is realized by some closed walk (Euler). Connectivity is not linear, so
the search runs per strongly connected component and recurses on the
support of a maximal feasible point; see _component_witness for the
completeness argument.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Hashable, Mapping, Optional, Sequence

import numpy as np

from .errors import DimensionError, WalkError
from .lp import integer_scale, lp_feasible, max_support_solution, system

EdgeId = Hashable
Vertex = Hashable


@dataclass(frozen=True)
class GraphEdge:
    id: EdgeId
    src: Vertex
    dst: Vertex
    weight: tuple[int, ...]


@dataclass(frozen=True)
class MultiGraph:
    """Directed multigraph with integer weight vectors on edges.

    Vertex and edge ids may be any sortable hashables (game state ids are
    strings; product graphs use tuples). `source` is optional and only
    used by operations that restrict to the reachable part.
    """

    dimension: int
    vertices: tuple[Vertex, ...]
    edges: tuple[GraphEdge, ...]
    source: Optional[Vertex] = None


@dataclass(frozen=True)
class Circuit:
    """A closed walk given as edge ids, with its edge multiset."""

    edges: tuple[EdgeId, ...]
    multiplicity: Mapping[EdgeId, int] = field(hash=False, compare=True)

    @staticmethod
    def from_walk(ids: Sequence[EdgeId]) -> "Circuit":
        return Circuit(tuple(ids), dict(Counter(ids)))


# A circulation is a plain mapping from edge id to a nonnegative count.
Circulation = Mapping[EdgeId, int]


def validate_circuit(g: MultiGraph, c: Circuit) -> None:
    """Raise WalkError unless c is a closed connected walk in g with a
    multiplicity map matching its occurrence counts."""
    if not c.edges:
        raise WalkError("circuit must be nonempty")
    by_id = {e.id: e for e in g.edges}
    for eid in c.edges:
        if eid not in by_id:
            raise WalkError(f"unknown edge id {eid!r} in circuit")
    for a, b in zip(c.edges, c.edges[1:]):
        if by_id[a].dst != by_id[b].src:
            raise WalkError(f"edges {a!r} and {b!r} are not consecutive")
    if by_id[c.edges[-1]].dst != by_id[c.edges[0]].src:
        raise WalkError("circuit does not close")
    if dict(Counter(c.edges)) != dict(c.multiplicity):
        raise WalkError("multiplicity map does not match the walk")


def circuit_weight(g: MultiGraph, c: Circuit) -> tuple[int, ...]:
    """Componentwise weight of the circuit's edge multiset."""
    by_id = {e.id: e for e in g.edges}
    total = [0] * g.dimension
    for eid, n in c.multiplicity.items():
        for d, w in enumerate(by_id[eid].weight):
            total[d] += n * w
    return tuple(total)


def dominance(a: Sequence[int], b: Sequence[int]) -> bool:
    """Componentwise a <= b (the wqo ordering on credit vectors)."""
    if len(a) != len(b):
        raise DimensionError(f"vectors of length {len(a)} and {len(b)} are not comparable")
    return all(x <= y for x, y in zip(a, b))


# -- strongly connected components ------------------------------------------


def _tarjan(vertices: Sequence[Vertex], succ: Mapping[Vertex, list[Vertex]]) -> list[list[Vertex]]:
    index: dict[Vertex, int] = {}
    low: dict[Vertex, int] = {}
    on_stack: set[Vertex] = set()
    stack: list[Vertex] = []
    out: list[list[Vertex]] = []
    counter = count()
    for root in vertices:
        if root in index:
            continue
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(succ.get(root, ())))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def sccs(g: MultiGraph) -> list[list[Vertex]]:
    """Strongly connected components, each sorted, ordered by smallest member."""
    succ: dict[Vertex, list[Vertex]] = {v: [] for v in g.vertices}
    for e in sorted(g.edges, key=lambda e: repr(e.id)):
        succ.setdefault(e.src, []).append(e.dst)
    comps = _tarjan(sorted(g.vertices), succ)
    return sorted((sorted(c) for c in comps), key=lambda c: c[0])


def reachable_subgraph(g: MultiGraph, source: Vertex) -> MultiGraph:
    """Restriction of g to vertices reachable from source."""
    if source not in set(g.vertices):
        raise WalkError(f"unknown source vertex {source!r}")
    succ: dict[Vertex, list[Vertex]] = {}
    for e in g.edges:
        succ.setdefault(e.src, []).append(e.dst)
    seen = {source}
    queue = [source]
    while queue:
        v = queue.pop()
        for w in succ.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    vertices = tuple(v for v in g.vertices if v in seen)
    edges = tuple(e for e in g.edges if e.src in seen)
    return MultiGraph(g.dimension, vertices, edges, source)


def with_unit_drain_loops(g: MultiGraph) -> MultiGraph:
    """Add, at every vertex, one self-loop per dimension with weight -1 in
    that dimension and 0 elsewhere.

    The loops drain arbitrary surplus, reducing nonnegative-circuit search
    to zero-circuit search: the modified graph has a zero circuit exactly
    when the original has a nonnegative one (strip the loops to recover it).
    """
    extra = []
    for v in g.vertices:
        for d in range(g.dimension):
            w = tuple(-1 if i == d else 0 for i in range(g.dimension))
            extra.append(GraphEdge(("drain", v, d + 1), v, v, w))
    return MultiGraph(g.dimension, g.vertices, g.edges + tuple(extra), g.source)


# -- internal circuit search -------------------------------------------------
#
# Internal edges are records (src, dst, weight, expansion) where expansion
# is the tuple of original edge ids the record stands for. Chain
# contraction merges forced passthroughs (out-degree-1 vertices) into
# composite edges; circuits of the contracted graph correspond exactly to
# circuits of the original, so witnesses expand back losslessly.

_Rec = tuple[Vertex, Vertex, tuple[int, ...], tuple]


def _simplify(recs: list[_Rec]) -> list[_Rec]:
    """Drop vertices that no circuit can visit and contract forced chains."""
    edges: dict[int, _Rec] = dict(enumerate(recs))
    next_id = len(recs)
    outs: dict[Vertex, set[int]] = {}
    ins: dict[Vertex, set[int]] = {}
    for i, (src, dst, _, _) in edges.items():
        outs.setdefault(src, set()).add(i)
        ins.setdefault(dst, set()).add(i)
        outs.setdefault(dst, set())
        ins.setdefault(src, set())

    def drop_edge(i: int) -> None:
        src, dst, _, _ = edges.pop(i)
        outs[src].discard(i)
        ins[dst].discard(i)

    queue = sorted(outs, key=repr)
    queued = set(queue)
    while queue:
        v = queue.pop()
        queued.discard(v)
        if v not in outs:
            continue
        touched: set[Vertex] = set()
        if not outs[v] or not ins[v]:
            # No circuit passes through v; remove it and its edges.
            for i in list(outs[v]) + list(ins[v]):
                if i in edges:
                    touched.update((edges[i][0], edges[i][1]))
                    drop_edge(i)
            del outs[v], ins[v]
            touched.discard(v)
        elif len(outs[v]) == 1:
            (oi,) = outs[v]
            osrc, odst, ow, oexp = edges[oi]
            if odst != v:
                # Forced passthrough: fuse every incoming edge with the
                # single outgoing one.
                for fi in list(ins[v]):
                    fsrc, _, fw, fexp = edges[fi]
                    drop_edge(fi)
                    fused = (fsrc, odst, tuple(a + b for a, b in zip(fw, ow)), fexp + oexp)
                    edges[next_id] = fused
                    outs[fsrc].add(next_id)
                    ins[odst].add(next_id)
                    next_id += 1
                    touched.update((fsrc, odst))
                drop_edge(oi)
                del outs[v], ins[v]
                touched.discard(v)
        for w in touched:
            if w in outs and w not in queued:
                queue.append(w)
                queued.add(w)
    return [edges[i] for i in sorted(edges)]


def _rec_sccs(recs: list[_Rec]) -> list[list[int]]:
    """Indices of recs grouped by SCC (internal edges only), deterministic."""
    vertices = sorted({r[0] for r in recs} | {r[1] for r in recs}, key=repr)
    succ: dict[Vertex, list[Vertex]] = {v: [] for v in vertices}
    for src, dst, _, _ in recs:
        succ[src].append(dst)
    comp_of: dict[Vertex, int] = {}
    comps = _tarjan(vertices, succ)
    comps = sorted((sorted(c, key=repr) for c in comps), key=lambda c: repr(c[0]))
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    grouped: dict[int, list[int]] = {}
    for i, (src, dst, _, _) in enumerate(recs):
        if comp_of[src] == comp_of[dst]:
            grouped.setdefault(comp_of[src], []).append(i)
    return [grouped[ci] for ci in sorted(grouped)]


def _weakly_connected(recs: list[_Rec]) -> bool:
    parent: dict[Vertex, Vertex] = {}

    def find(x: Vertex) -> Vertex:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for src, dst, _, _ in recs:
        parent.setdefault(src, src)
        parent.setdefault(dst, dst)
        parent[find(src)] = find(dst)
    roots = {find(v) for v in parent}
    return len(roots) <= 1


def _euler_walk(recs: list[_Rec], counts: list[int]) -> list[int]:
    """Hierholzer on the multiset {recs[i] with multiplicity counts[i]}.

    Precondition: balanced and weakly connected support. Returns rec
    indices in walk order.
    """
    remaining = list(counts)
    adj: dict[Vertex, list[int]] = {}
    for i, (src, _, _, _) in enumerate(recs):
        if remaining[i] > 0:
            adj.setdefault(src, []).append(i)
    ptr = {v: 0 for v in adj}
    start = min(adj, key=repr)
    vstack = [start]
    estack: list[int] = []
    walk: list[int] = []
    while vstack:
        v = vstack[-1]
        lst = adj.get(v, ())
        i = ptr.get(v, 0)
        while i < len(lst) and remaining[lst[i]] == 0:
            i += 1
        ptr[v] = i
        if i < len(lst):
            ei = lst[i]
            remaining[ei] -= 1
            vstack.append(recs[ei][1])
            estack.append(ei)
        else:
            vstack.pop()
            if estack:
                walk.append(estack.pop())
    if any(remaining):
        raise WalkError("circulation support is not connected")
    walk.reverse()
    return walk


def _circulation_system(recs: list[_Rec], dimension: int, mode: str):
    vertices = sorted({r[0] for r in recs} | {r[1] for r in recs}, key=repr)
    names = [f"x{i}" for i in range(len(recs))]
    rows = []
    for v in vertices:
        coeffs = [0] * len(recs)
        for i, (src, dst, _, _) in enumerate(recs):
            if dst == v:
                coeffs[i] += 1
            if src == v:
                coeffs[i] -= 1
        rows.append((coeffs, "=", 0))
    relation = "=" if mode == "zero" else ">="
    for d in range(dimension):
        rows.append(([r[2][d] for r in recs], relation, 0))
    rows.append(([1] * len(recs), ">=", 1))
    for i in range(len(recs)):
        coeffs = [0] * len(recs)
        coeffs[i] = 1
        rows.append((coeffs, ">=", 0))
    return system(names, rows), names


def _component_witness(recs: list[_Rec], dimension: int, mode: str) -> list | None:
    """Witness walk (original edge ids) within one SCC, or None.

    Any qualifying circuit C confined to this component induces a feasible
    multiplicity vector, so LP infeasibility is conclusive. If feasible,
    the support of a maximal feasible point contains the support of every
    feasible point, C's included; either that support spans the component
    (then it is strongly connected, and the scaled point itself is
    realizable as a circuit), or recursing on the strictly smaller support
    subgraph keeps C intact. Termination: the edge set shrinks each level.
    """
    sys_, names = _circulation_system(recs, dimension, mode)
    out = lp_feasible(sys_)
    if out.status != "feasible":
        return None
    counts = integer_scale(out.assignment)
    used = [i for i in range(len(recs)) if counts[names[i]] > 0]
    if _weakly_connected([recs[i] for i in used]):
        walk = _euler_walk(recs, [counts[n] for n in names])
        return [eid for i in walk for eid in recs[i][3]]
    sol, support = max_support_solution(sys_)
    used = sorted(i for i in range(len(recs)) if names[i] in support)
    if len(used) == len(recs):
        counts = integer_scale(sol.assignment)
        walk = _euler_walk(recs, [counts[n] for n in names])
        return [eid for i in walk for eid in recs[i][3]]
    return _search_circuit([recs[i] for i in used], dimension, mode)


def _search_circuit(recs: list[_Rec], dimension: int, mode: str) -> list | None:
    recs = _simplify(recs)
    for comp in _rec_sccs(recs):
        found = _component_witness([recs[i] for i in comp], dimension, mode)
        if found is not None:
            return found
    return None


def zero_circuit(g: MultiGraph) -> Circuit | None:
    """A circuit whose weight is exactly zero in every dimension, if any."""
    recs = [(e.src, e.dst, e.weight, (e.id,)) for e in sorted(g.edges, key=lambda e: repr(e.id))]
    walk = _search_circuit(recs, g.dimension, "zero")
    return Circuit.from_walk(walk) if walk is not None else None


def nonnegative_circuit(g: MultiGraph, source: Vertex) -> Circuit | None:
    """A circuit reachable from source with weight >= 0 in every dimension."""
    sub = reachable_subgraph(g, source)
    recs = [(e.src, e.dst, e.weight, (e.id,)) for e in sorted(sub.edges, key=lambda e: repr(e.id))]
    walk = _search_circuit(recs, g.dimension, "nonnegative")
    return Circuit.from_walk(walk) if walk is not None else None


def eulerian_circuit_from_circulation(g: MultiGraph, circulation: Circulation) -> Circuit:
    """Closed walk using each edge exactly its circulation count of times.

    The circulation must be balanced at every vertex, total at least one,
    and weakly connected in its support; otherwise WalkError is raised.
    """
    by_id = {e.id: e for e in g.edges}
    counts: dict[EdgeId, int] = {}
    for eid, n in circulation.items():
        if eid not in by_id:
            raise WalkError(f"unknown edge id {eid!r} in circulation")
        if not isinstance(n, int) or n < 0:
            raise WalkError(f"multiplicity of {eid!r} must be a nonnegative integer")
        if n > 0:
            counts[eid] = n
    if not counts:
        raise WalkError("circulation must use at least one edge")
    balance: dict[Vertex, int] = {}
    for eid, n in counts.items():
        e = by_id[eid]
        balance[e.dst] = balance.get(e.dst, 0) + n
        balance[e.src] = balance.get(e.src, 0) - n
    if any(balance.values()):
        raise WalkError("circulation is not balanced")
    recs = [(by_id[eid].src, by_id[eid].dst, by_id[eid].weight, (eid,)) for eid in sorted(counts, key=repr)]
    walk = _euler_walk(recs, [counts[r[3][0]] for r in recs])
    return Circuit.from_walk([recs[i][3][0] for i in walk])


# -- exact shortest-walk table (Bellman-Ford in array form) ------------------


def _walk_table(n: int, recs: list[tuple[int, int, int, EdgeId]], start: int | None):
    """D[k][v] = min weight of a walk with exactly k edges ending at v.

    recs are (src_index, dst_index, scalar_weight, edge_id). With start
    None every vertex is a zero-weight origin (super-source); otherwise
    only start is. Also returns parent pointers P[k][v] = (src_index,
    rec_index) realizing D[k][v]. None entries mean unreachable.
    """
    D: list[list[int | None]] = [[None] * n for _ in range(n + 1)]
    P: list[list[tuple[int, int] | None]] = [[None] * n for _ in range(n + 1)]
    if start is None:
        D[0] = [0] * n
    else:
        D[0][start] = 0
    for k in range(1, n + 1):
        prev = D[k - 1]
        cur = D[k]
        par = P[k]
        for ri, (u, v, w, _) in enumerate(recs):
            du = prev[u]
            if du is None:
                continue
            cand = du + w
            if cur[v] is None or cand < cur[v]:
                cur[v] = cand
                par[v] = (u, ri)
    return D, P


def negative_cycle_in_dimension(g: MultiGraph, d: int, source: Vertex) -> tuple[EdgeId, ...] | None:
    """A simple cycle, reachable from source, with negative total weight in
    dimension d (1-based), or None if every reachable cycle is nonnegative
    there.

    Works on the exact walk table: some vertex admits an n-edge walk
    strictly better than every shorter walk iff a negative cycle exists,
    and every cycle on such a walk is itself negative, so cutting at the
    first repeated vertex yields a simple witness.
    """
    if not 1 <= d <= g.dimension:
        raise DimensionError(f"dimension index {d} out of range 1..{g.dimension}")
    sub = reachable_subgraph(g, source)
    vertices = sorted(sub.vertices, key=repr)
    vindex = {v: i for i, v in enumerate(vertices)}
    recs = [
        (vindex[e.src], vindex[e.dst], e.weight[d - 1], e.id)
        for e in sorted(sub.edges, key=lambda e: repr(e.id))
    ]
    n = len(vertices)
    if n == 0 or not recs:
        return None
    D, P = _walk_table(n, recs, None)
    target = None
    for vi in range(n):
        if D[n][vi] is None:
            continue
        if all(D[k][vi] is None or D[k][vi] > D[n][vi] for k in range(n)):
            target = vi
            break
    if target is None:
        return None
    # Reconstruct the n-edge optimum backwards. path[i] is the rec taken
    # as step n - i, so the walk visits position k's vertex between
    # path[n - k] and path[n - k - 1].
    seen = {target: n}
    path: list[int] = []
    v = target
    for k in range(n, 0, -1):
        u, ri = P[k][v]
        path.append(ri)
        v = u
        if v in seen:
            q = seen[v]
            # Steps k..q form a closed walk at v with distinct interior.
            forward = list(reversed(path))
            cycle = forward[: q - (k - 1)]
            assert sum(recs[r][2] for r in cycle) < 0
            return tuple(recs[r][3] for r in cycle)
        seen[v] = k - 1
    raise AssertionError("n-edge walk without repeated vertex")


def min_mean_cycle(g: MultiGraph, d: int) -> Fraction | None:
    """Minimum mean weight of a cycle in dimension d (1-based), as an exact
    Fraction, or None if the graph is acyclic. If g has a source set, only
    the part reachable from it is considered.

    Computed per strongly connected component from the exact walk table:
    within an SCC of n vertices, the minimum cycle mean equals
    min over v of max over k of (D[n][v] - D[k][v]) / (n - k).
    """
    if not 1 <= d <= g.dimension:
        raise DimensionError(f"dimension index {d} out of range 1..{g.dimension}")
    sub = reachable_subgraph(g, g.source) if g.source is not None else g
    best: Fraction | None = None
    for comp in sccs(sub):
        members = set(comp)
        vindex = {v: i for i, v in enumerate(comp)}
        recs = [
            (vindex[e.src], vindex[e.dst], e.weight[d - 1], e.id)
            for e in sorted(sub.edges, key=lambda e: repr(e.id))
            if e.src in members and e.dst in members
        ]
        if not recs:
            continue
        n = len(comp)
        D, _ = _walk_table(n, recs, 0)
        comp_best: Fraction | None = None
        for vi in range(n):
            if D[n][vi] is None:
                continue
            worst: Fraction | None = None
            for k in range(n):
                if D[k][vi] is None:
                    continue
                ratio = Fraction(D[n][vi] - D[k][vi], n - k)
                if worst is None or ratio > worst:
                    worst = ratio
            if worst is not None and (comp_best is None or worst < comp_best):
                comp_best = worst
        if comp_best is not None and (best is None or comp_best < best):
            best = comp_best
    return best


# -- exhaustive reference oracle ---------------------------------------------


def bounded_circulation_oracle(g: MultiGraph, bound: int, mode: str) -> Circuit | None:
    """Exhaustively search edge multiplicity maps with entries in 0..bound
    for one that is balanced, weakly connected in its support, and has
    total weight zero ("zero" mode) or nonnegative ("nonnegative" mode) in
    every dimension. Returns the circuit of the lexicographically first
    qualifying map (edges ordered by id), or None.

    Reference implementation for cross-checking the LP-based search at
    test scale; cost grows as (bound + 1) ** len(edges).
    """
    if mode not in ("zero", "nonnegative"):
        raise ValueError(f"unknown mode {mode!r}")
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    edges = sorted(g.edges, key=lambda e: repr(e.id))
    m = len(edges)
    if m == 0 or bound == 0:
        return None
    if m > 12:
        raise ValueError("oracle is exhaustive; refusing more than 12 edges")
    vertices = sorted(set(g.vertices), key=repr)
    vindex = {v: i for i, v in enumerate(vertices)}
    # Incidence: +1 into dst, -1 out of src; self-loops cancel to 0.
    inc = np.zeros((m, len(vertices)), dtype=np.int64)
    wmat = np.zeros((m, g.dimension), dtype=np.int64)
    for i, e in enumerate(edges):
        inc[i, vindex[e.dst]] += 1
        inc[i, vindex[e.src]] -= 1
        wmat[i] = e.weight
    # Support connectivity depends only on the nonzero pattern; precompute
    # which of the 2**m patterns qualify.
    pattern_ok = np.zeros(1 << m, dtype=bool)
    for mask in range(1, 1 << m):
        chosen = [edges[i] for i in range(m) if mask >> i & 1]
        pattern_ok[mask] = _weakly_connected([(e.src, e.dst, e.weight, (e.id,)) for e in chosen])
    # Enumerate in blocks: the first m-h digits are constant per block and
    # the last h digits run through a precomputed template, so block order
    # plus template order is exactly lexicographic order over all maps.
    bits = np.int64(1) << np.arange(m, dtype=np.int64)
    base = bound + 1
    h = min(m, 5)
    radix_lo = base ** np.arange(h - 1, -1, -1, dtype=np.int64)
    lo_counts = (np.arange(base**h, dtype=np.int64)[:, None] // radix_lo) % base
    lo_balance = lo_counts @ inc[m - h :]
    lo_sums = lo_counts @ wmat[m - h :]
    lo_bits = (lo_counts > 0) @ bits[m - h :]
    lo_any = lo_counts.any(axis=1)
    radix_hi = base ** np.arange(m - h - 1, -1, -1, dtype=np.int64)
    for block in range(base ** (m - h)):
        hi = (block // radix_hi) % base if m > h else np.zeros(0, dtype=np.int64)
        hi_balance = hi @ inc[: m - h]
        hi_sums = hi @ wmat[: m - h]
        ok = (lo_balance == -hi_balance).all(axis=1)
        if mode == "zero":
            ok &= (lo_sums == -hi_sums).all(axis=1)
        else:
            ok &= (lo_sums >= -hi_sums).all(axis=1)
        if not hi.any():
            ok &= lo_any
        ok &= pattern_ok[lo_bits | int((hi > 0) @ bits[: m - h])]
        hit = int(np.argmax(ok))
        if ok[hit]:
            row = np.concatenate([hi, lo_counts[hit]])
            circulation = {edges[i].id: int(row[i]) for i in range(m) if row[i] > 0}
            return eulerian_circuit_from_circulation(g, circulation)
    return None
