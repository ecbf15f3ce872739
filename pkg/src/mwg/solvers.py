"""Decision procedures for multi-weighted games.

Solves the unknown-initial-credit problem (does some nonnegative starting
credit let Player 1 keep all running sums nonnegative forever?), its
mean-payoff threshold counterpart for finite-memory strategies, and the
variants where Player 1 is restricted to memoryless strategies.

The master procedure rests on two facts. First, if Player 2 can spoil at
all, a memoryless strategy suffices, so enumerating Player 2's memoryless
strategies is exhaustive. Second, with Player 2 fixed the game is a
one-player graph, and Player 1 survives from some credit exactly when a
circuit with componentwise-nonnegative total weight is reachable from the
initial state. A No answer therefore comes with a spoiling strategy and a
Yes answer with one witness circuit per enumerated strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterator, Optional, Sequence, Union

from . import graphs
from .errors import DimensionError, InvalidGameError, StrategyError
from .graphs import Circuit, GraphEdge, MultiGraph, negative_cycle_in_dimension
from .model import (
    Edge,
    GameStructure,
    Lasso,
    MemorylessStrategy,
    MooreStrategy,
    ProductGraph,
    WeightVector,
    as_moore,
    check_strategy,
    product_with_strategy,
    scale_weights,
    shift_weights,
    validate_game,
)


@dataclass(frozen=True)
class Verdict:
    """Outcome of an unknown-initial-credit (or threshold) decision.

    On Yes, `witnesses` pairs every enumerated Player-2 memoryless
    strategy with a reachable nonnegative circuit of the fixed graph, and
    `credit` is a suggested (not minimal) sufficient credit vector. On No,
    `spoiler` is a Player-2 memoryless strategy whose fixed graph has no
    such circuit.
    """

    answer: bool
    witnesses: Optional[tuple[tuple[MemorylessStrategy, Circuit], ...]] = None
    credit: Optional[WeightVector] = None
    spoiler: Optional[MemorylessStrategy] = None


@dataclass(frozen=True)
class MemorylessVerdict:
    """Outcome of the memoryless-Player-1 variants. On Yes carries the
    winning strategy and an initial credit for it; a No is by exhaustion
    and carries nothing."""

    answer: bool
    strategy: Optional[MemorylessStrategy] = None
    credit: Optional[WeightVector] = None


@dataclass(frozen=True)
class CertificateCheck:
    accepted: bool
    credit: Optional[WeightVector] = None


def as_multigraph(g: GameStructure) -> MultiGraph:
    """View a game as a plain multigraph (ownership forgotten)."""
    edges = tuple(GraphEdge(e.id, e.src, e.dst, e.weight) for e in g.edges)
    return MultiGraph(g.dimension, tuple(s.id for s in g.states), edges, g.init)


def product_multigraph(p: ProductGraph) -> MultiGraph:
    """View a strategy product as a multigraph; edge ids are (src, edge id)
    pairs, unique because out-edges of a product vertex carry distinct
    game edge ids."""
    edges = tuple(GraphEdge((e.src, e.edge_id), e.src, e.dst, e.weight) for e in p.edges)
    return MultiGraph(p.game.dimension, p.vertices, edges, p.init)


def _require_valid(g: GameStructure) -> None:
    violations = validate_game(g)
    if violations:
        raise InvalidGameError(violations)


def _choice_space(g: GameStructure, player: int) -> tuple[list[str], list[tuple[str, ...]]]:
    states = list(g.states_of(player))
    options = [tuple(e.id for e in g.out_edges(s)) for s in states]
    return states, options


def enumerate_p2_memoryless(g: GameStructure) -> Iterator[MemorylessStrategy]:
    """All maps from Player-2 states to one of their outgoing edges, in
    lexicographic order (states by id, edges by id). A game without
    Player-2 states yields exactly one empty strategy."""
    states, options = _choice_space(g, 2)
    for combo in product(*options):
        yield MemorylessStrategy(2, dict(zip(states, combo)))


def _reachable_states(g: GameStructure, source: str) -> set[str]:
    seen = {source}
    queue = [source]
    while queue:
        s = queue.pop()
        for e in g.out_edges(s):
            if e.dst not in seen:
                seen.add(e.dst)
                queue.append(e.dst)
    return seen


def _suggested_credit(g: GameStructure) -> WeightVector:
    """Heuristic credit suggestion: the classical n*W bound instantiated
    with the reachable state count. Advisory; the witnesses, not this
    vector, are the verifiable part of a Yes verdict."""
    n = len(_reachable_states(g, g.init))
    w = g.max_abs_weight
    return tuple(n * w for _ in range(g.dimension))


def solve_unknown_credit(g: GameStructure) -> Verdict:
    """Decide whether Player 1 wins the energy objective for some
    nonnegative initial credit.

    Enumerates Player-2 memoryless strategies; each fixed graph is
    searched for a reachable circuit with nonnegative weight in every
    dimension. The search result is cached by the shape of the fixed
    graph after chain contraction and removal of duplicate parallel
    edges, which collapses the bulk of the enumeration for structured
    games (all strategies picking the same literal set, for instance).
    """
    _require_valid(g)
    k = g.dimension
    state_ids = [s.id for s in g.states]
    sindex = {sid: i for i, sid in enumerate(state_ids)}
    init = sindex[g.init]
    p2_states, options = _choice_space(g, 2)
    # Records are prebuilt per edge so the per-strategy loop only
    # concatenates lists: (src index, dst index, weight, (edge id,)).
    fixed_recs = [
        (sindex[e.src], sindex[e.dst], e.weight, (e.id,))
        for s in g.states
        if s.owner == 1
        for e in g.out_edges(s.id)
    ]
    rec_of_edge = {
        e.id: (sindex[e.src], sindex[e.dst], e.weight, (e.id,)) for e in g.edges
    }
    cache: dict[tuple, Optional[list[int]]] = {}
    witnesses: list[tuple[MemorylessStrategy, Circuit]] = []
    for combo in product(*options):
        recs = fixed_recs + [rec_of_edge[eid] for eid in combo]
        succ: dict[int, list[int]] = {}
        for src, dst, _, _ in recs:
            succ.setdefault(src, []).append(dst)
        seen = {init}
        queue = [init]
        while queue:
            v = queue.pop()
            for w in succ.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        live = [r for r in recs if r[0] in seen]
        # Duplicate parallel edges are interchangeable for circuit
        # existence; keep one representative each and remember its ids.
        rep: dict[tuple, tuple] = {}
        for src, dst, weight, exp in graphs._simplify(live):
            key = (src, dst, weight)
            if key not in rep or exp < rep[key]:
                rep[key] = exp
        items = sorted(rep.items())
        shape = tuple(t for t, _ in items)
        if shape in cache:
            abstract = cache[shape]
        else:
            abstract = graphs._search_circuit(
                [(t[0], t[1], t[2], (i,)) for i, (t, _) in enumerate(items)], k, "nonnegative"
            )
            cache[shape] = abstract
        strategy = MemorylessStrategy(2, dict(zip(p2_states, combo)))
        if abstract is None:
            return Verdict(False, spoiler=strategy)
        walk = [eid for i in abstract for eid in items[i][1]]
        witnesses.append((strategy, Circuit.from_walk(walk)))
    return Verdict(True, witnesses=tuple(witnesses), credit=_suggested_credit(g))


def _lasso_strategy(g: GameStructure, lasso: Lasso) -> MooreStrategy:
    """Finite-memory strategy that plays out the lasso: one memory state
    per walk position, advancing unconditionally and wrapping to the
    cycle start."""
    walk = list(lasso.stem) + list(lasso.cycle)
    by_id = g.edge_by_id
    length = len(walk)
    memory = tuple(f"m{i}" for i in range(length))
    update = {}
    action = {}
    for i in range(length):
        nxt = memory[i + 1] if i + 1 < length else memory[len(lasso.stem)]
        for s in g.states:
            update[(memory[i], s.id)] = nxt
            if s.owner == 1:
                eid = walk[i] if by_id[walk[i]].src == s.id else g.out_edges(s.id)[0].id
                action[(memory[i], s.id)] = eid
    return MooreStrategy(1, memory, memory[0], update, action)


def _stem_to(g: GameStructure, target: str) -> list[str]:
    """Edge ids of a shortest path from the initial state to target."""
    if target == g.init:
        return []
    back: dict[str, tuple[str, str]] = {}
    queue = [g.init]
    qi = 0
    while qi < len(queue):
        s = queue[qi]
        qi += 1
        for e in g.out_edges(s):
            if e.dst not in back and e.dst != g.init:
                back[e.dst] = (s, e.id)
                if e.dst == target:
                    path = []
                    cur = target
                    while cur != g.init:
                        prev, eid = back[cur]
                        path.append(eid)
                        cur = prev
                    path.reverse()
                    return path
                queue.append(e.dst)
    raise StrategyError(f"state {target!r} is not reachable")


def solve_one_player_energy(g: GameStructure) -> Verdict:
    """Unknown-initial-credit decision for games without Player-2 states.

    Yes exactly when a nonnegative circuit is reachable from the initial
    state; the credit comes from the n*W bound applied to the lasso that
    reaches the witness and loops on it.
    """
    _require_valid(g)
    if g.states_of(2):
        raise ValueError("game has Player-2 states; use solve_unknown_credit")
    circuit = graphs.nonnegative_circuit(as_multigraph(g), g.init)
    if circuit is None:
        return Verdict(False, spoiler=MemorylessStrategy(2, {}))
    start = g.edge_by_id[circuit.edges[0]].src
    lasso = Lasso(tuple(_stem_to(g, start)), circuit.edges)
    p = product_with_strategy(g, _lasso_strategy(g, lasso))
    witness = ((MemorylessStrategy(2, {}), circuit),)
    return Verdict(True, witnesses=witness, credit=sufficient_credit(p))


def _as_fractions(v: Sequence, k: int) -> list[Fraction]:
    vals = [Fraction(x) for x in v]
    if len(vals) != k:
        raise DimensionError(f"threshold has {len(vals)} components, expected {k}")
    return vals


def threshold_shifted(g: GameStructure, v: Sequence) -> GameStructure:
    """Scale weights to clear the threshold's denominators, then shift so
    that meeting threshold v in g becomes meeting 0 in the result."""
    vals = _as_fractions(v, g.dimension)
    c = lcm(*[x.denominator for x in vals]) if vals else 1
    scaled = scale_weights(g, c)
    shift = tuple(int(c * x) for x in vals)
    return shift_weights(scaled, shift)


def solve_meanpayoff_threshold(g: GameStructure, v: Sequence) -> Verdict:
    """Decide whether a finite-memory Player-1 strategy achieves mean
    payoff at least v in every dimension against all finite-memory
    opposition. Equivalent to the unknown-credit problem of the scaled
    and shifted game; the returned certificates refer to that game (same
    state and edge ids, weights shifted)."""
    _require_valid(g)
    return solve_unknown_credit(threshold_shifted(g, v))


def sufficient_credit(p: ProductGraph) -> WeightVector:
    """The n*W vector: n reachable product vertices, W the largest
    absolute weight in the underlying game. Sufficient whenever the
    product has no negative reachable cycle in any dimension (which is
    what verify_p1_certificate establishes)."""
    n = len(p.vertices)
    w = p.game.max_abs_weight
    return tuple(n * w for _ in range(p.game.dimension))


def verify_p1_certificate(
    g: GameStructure, s: Union[MooreStrategy, MemorylessStrategy]
) -> CertificateCheck:
    """Accept a Player-1 strategy iff its product with the game has no
    reachable negative simple cycle in any dimension; on acceptance the
    certificate is winning from the returned credit."""
    if s.player != 1:
        raise StrategyError("certificate must belong to Player 1")
    moore = as_moore(g, s) if isinstance(s, MemorylessStrategy) else s
    check_strategy(g, moore)
    p = product_with_strategy(g, moore)
    pm = product_multigraph(p)
    for d in range(1, g.dimension + 1):
        if negative_cycle_in_dimension(pm, d, p.init) is not None:
            return CertificateCheck(False)
    return CertificateCheck(True, sufficient_credit(p))


def _fixed_player_edges(g: GameStructure, s: MemorylessStrategy) -> list[Edge]:
    fixed = []
    for st in g.states:
        if st.owner == s.player:
            fixed.append(g.edge_by_id[s.choice[st.id]])
        else:
            fixed.extend(g.out_edges(st.id))
    return fixed


def _strategy_subgraph(g: GameStructure, s: MemorylessStrategy) -> MultiGraph:
    edges = tuple(GraphEdge(e.id, e.src, e.dst, e.weight) for e in _fixed_player_edges(g, s))
    return MultiGraph(g.dimension, tuple(st.id for st in g.states), edges, g.init)


def verify_p2_spoiler(g: GameStructure, s: MemorylessStrategy) -> bool:
    """Accept a Player-2 memoryless strategy iff the graph it induces has
    no circuit, reachable from the initial state, with nonnegative weight
    in every dimension. Acceptance means no initial credit saves
    Player 1."""
    if s.player != 2:
        raise StrategyError("spoiler must belong to Player 2")
    check_strategy(g, s)
    return graphs.nonnegative_circuit(_strategy_subgraph(g, s), g.init) is None


def _accepts_all_cycles(g: GameStructure, chosen: dict[str, str]) -> bool:
    """True iff the graph where Player 1 plays `chosen` has no reachable
    cycle that is negative in some dimension."""
    succ_edges: dict[str, list[Edge]] = {}
    for st in g.states:
        if st.owner == 1:
            succ_edges[st.id] = [g.edge_by_id[chosen[st.id]]]
        else:
            succ_edges[st.id] = list(g.out_edges(st.id))
    seen = {g.init}
    queue = [g.init]
    functional = True
    while queue:
        sid = queue.pop()
        outs = succ_edges[sid]
        if len(outs) != 1:
            functional = False
        for e in outs:
            if e.dst not in seen:
                seen.add(e.dst)
                queue.append(e.dst)
    if functional:
        # Deterministic play: from the initial state the walk enters a
        # unique cycle; check it directly.
        pos: dict[str, int] = {}
        path: list[Edge] = []
        cur = g.init
        while cur not in pos:
            pos[cur] = len(path)
            e = succ_edges[cur][0]
            path.append(e)
            cur = e.dst
        cycle = path[pos[cur] :]
        return all(
            sum(e.weight[d] for e in cycle) >= 0 for d in range(g.dimension)
        )
    edges = tuple(
        GraphEdge(e.id, e.src, e.dst, e.weight)
        for sid in seen
        for e in succ_edges[sid]
    )
    sub = MultiGraph(g.dimension, tuple(seen), edges, g.init)
    return all(
        negative_cycle_in_dimension(sub, d, g.init) is None
        for d in range(1, g.dimension + 1)
    )


def solve_memoryless_p1_energy(g: GameStructure) -> MemorylessVerdict:
    """Decide whether some memoryless Player-1 strategy wins the energy
    objective for some initial credit: a candidate wins iff its fixed
    graph (Player-2 branching intact) has no reachable negative cycle in
    any dimension. Exhaustive over candidates, first hit returned."""
    _require_valid(g)
    states, options = _choice_space(g, 1)
    for combo in product(*options):
        chosen = dict(zip(states, combo))
        if _accepts_all_cycles(g, chosen):
            strategy = MemorylessStrategy(1, chosen)
            p = product_with_strategy(g, as_moore(g, strategy))
            return MemorylessVerdict(True, strategy, sufficient_credit(p))
    return MemorylessVerdict(False)


def solve_memoryless_p1_meanpayoff(g: GameStructure, v: Sequence) -> MemorylessVerdict:
    """Memoryless variant of the threshold problem: accept a candidate iff
    every cycle of its fixed graph has mean weight at least v in every
    dimension, i.e. the scaled-and-shifted graph has minimum cycle mean
    >= 0 (equivalently, no negative cycle). Certificates refer to the
    shifted game."""
    _require_valid(g)
    return solve_memoryless_p1_energy(threshold_shifted(g, v))


def clamped_fixed_credit_oracle(g: GameStructure, v0: WeightVector, cap: int) -> bool:
    """Decide the finite safety game on (state, energy clamped to
    [0..cap]^k): any move driving a component negative is unavailable to
    Player 1 and immediately winning for Player 2.

    Clamping discards surplus above cap, so True underapproximates
    Player 1's power in the real fixed-credit game: True implies Player 1
    wins with credit v0, False is inconclusive.
    """
    _require_valid(g)
    if len(v0) != g.dimension:
        raise DimensionError(f"credit has {len(v0)} components, expected {g.dimension}")
    if any(c < 0 for c in v0):
        raise ValueError("credit components must be nonnegative")
    if any(c > cap for c in v0):
        raise ValueError("cap is smaller than a credit component")
    start = (g.init, tuple(v0))
    moves: dict[tuple, list[Optional[tuple]]] = {}
    queue = [start]
    while queue:
        vtx = queue.pop()
        if vtx in moves:
            continue
        sid, energy = vtx
        succs: list[Optional[tuple]] = []
        for e in g.out_edges(sid):
            ne = tuple(c + w for c, w in zip(energy, e.weight))
            if any(c < 0 for c in ne):
                succs.append(None)  # losing move
                continue
            tgt = (e.dst, tuple(min(c, cap) for c in ne))
            succs.append(tgt)
            if tgt not in moves:
                queue.append(tgt)
        moves[vtx] = succs
    alive = set(moves)
    changed = True
    while changed:
        changed = False
        for vtx in sorted(moves, key=repr):
            if vtx not in alive:
                continue
            succs = moves[vtx]
            if g.owner(vtx[0]) == 1:
                ok = any(t is not None and t in alive for t in succs)
            else:
                ok = all(t is not None and t in alive for t in succs)
            if not ok:
                alive.discard(vtx)
                changed = True
    return start in alive


def _canonical_machine(
    states: list[str], memory: tuple[str, ...], update: dict, action: dict
) -> tuple:
    """Signature of a Moore machine under breadth-first relabeling of the
    reachable memory states (unreachable ones dropped)."""
    order = [memory[0]]
    rank = {memory[0]: 0}
    qi = 0
    while qi < len(order):
        m = order[qi]
        qi += 1
        for s in states:
            nxt = update[(m, s)]
            if nxt not in rank:
                rank[nxt] = len(order)
                order.append(nxt)
    sig = []
    for m in order:
        for s in states:
            sig.append((rank[update[(m, s)]], action.get((m, s))))
    return (len(order), tuple(sig))


def search_finite_memory_strategy(
    g: GameStructure, max_memory: int
) -> Optional[tuple[MooreStrategy, WeightVector]]:
    """Search for a winning finite-memory Player-1 strategy with at most
    max_memory memory states, by enumeration in a canonical order.

    Returns the first strategy accepted by verify_p1_certificate together
    with its credit. Exhausting the bound proves nothing (no a priori
    memory bound is known), so absence is None, not a refusal. Intended
    for small games; the candidate space grows doubly exponentially.
    """
    _require_valid(g)
    if max_memory < 1:
        raise ValueError("max_memory must be at least 1")
    state_ids = [s.id for s in g.states]
    p1_states = list(g.states_of(1))
    for size in range(1, max_memory + 1):
        memory = tuple(f"m{i}" for i in range(size))
        update_keys = [(m, s) for m in memory for s in state_ids]
        action_keys = [(m, s) for m in memory for s in p1_states]
        action_options = [tuple(e.id for e in g.out_edges(s)) for _, s in action_keys]
        seen_machines: set[tuple] = set()
        for upd_combo in product(memory, repeat=len(update_keys)):
            update = dict(zip(update_keys, upd_combo))
            for act_combo in product(*action_options):
                action = dict(zip(action_keys, act_combo))
                sig = _canonical_machine(state_ids, memory, update, action)
                if sig[0] < size or sig in seen_machines:
                    # Reachable part is a smaller machine (covered by an
                    # earlier size) or a relabeling of one already tried.
                    continue
                seen_machines.add(sig)
                strategy = MooreStrategy(1, memory, memory[0], update, action)
                result = verify_p1_certificate(g, strategy)
                if result.accepted:
                    return strategy, result.credit
    return None
