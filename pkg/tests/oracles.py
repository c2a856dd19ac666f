"""Independent brute-force reference implementations.

Everything here recomputes results from raw synset edges with naive
algorithms (straight-loop sums, repeated DFS/BFS, no caching, no closed
forms), so the tests can cross-check the package against a second path that
shares none of its code.
"""

from __future__ import annotations

import math
import random
from collections import deque

from cdwsd.disambiguator import Fallback, Weighting
from cdwsd.lexicon import RelationType, SemanticNetwork, Synset


# ----------------------------------------------------------------------
# density: literal term-by-term evaluation

def oracle_density(kind: str, alpha: float, adesc: float, h: int, d: int,
                   desc: int, m: float) -> float:
    if m == 0:
        return 0.0
    if kind == "sdf":
        return m / desc
    full = int(math.floor(m))
    frac = m - full
    if kind == "lf":
        total = 0.0
        power = 1.0
        for _ in range(full):  # term-by-term: 1, adesc, adesc^2, ...
            total += power
            power *= adesc
        if frac > 0:
            total += frac * power
        return (1.0 / desc) * math.log2(d + 1) * total
    if kind == "ar" or alpha == 1.0:
        num = 0.0
        power = 1.0
        for _ in range(full):
            num += power
            power *= adesc
        if frac > 0:
            num += frac * power
    else:
        num = 0.0
        for i in range(full):
            num += adesc ** (i ** alpha)
        if frac > 0:
            num += frac * adesc ** (full ** alpha)
    den = 0.0
    power = 1.0
    for _ in range(h):
        den += power
        power *= adesc
    return num / den


# ----------------------------------------------------------------------
# graph: recompute adjacency from raw synset edges

def derived_adjacency(net: SemanticNetwork, relations) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {cid: set() for cid in net.concept_ids()}
    for cid in net.concept_ids():
        for rel, target in net.synset(cid).edges:
            if rel in relations:
                adj[cid].add(target)
            if rel.inverse in relations:
                adj[target].add(cid)
    return adj


def naive_depths(net: SemanticNetwork) -> dict[str, int]:
    down = derived_adjacency(net, {RelationType.HYPONYM})
    up = derived_adjacency(net, {RelationType.HYPERNYM})
    roots = sorted(cid for cid in net.concept_ids() if not up[cid])
    depth = {cid: 1 for cid in roots}
    queue = deque(roots)
    while queue:
        cid = queue.popleft()
        for child in down[cid]:
            if child not in depth:
                depth[child] = depth[cid] + 1
                queue.append(child)
    return depth


def naive_ancestors_within(net: SemanticNetwork, start: str, relations,
                           chain_limit: int = 0, top_cut: int = 0):
    adj = derived_adjacency(net, relations)
    dist = {start: 0}
    frontier = [start]
    steps = 0
    while frontier:
        if chain_limit and steps >= chain_limit:
            break
        steps += 1
        nxt = []
        for cid in frontier:
            for other in adj[cid]:
                if other not in dist:
                    dist[other] = steps
                    nxt.append(other)
        frontier = nxt
    if top_cut:
        depth = naive_depths(net)
        dist = {cid: n for cid, n in dist.items() if depth[cid] > top_cut}
    return sorted(dist.items(), key=lambda pair: (pair[1], pair[0]))


def naive_reachable_down(net: SemanticNetwork, start: str) -> set[str]:
    down = derived_adjacency(net, {RelationType.HYPONYM})
    seen = {start}
    stack = [start]
    while stack:
        cid = stack.pop()
        for child in down[cid]:
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return seen


def _naive_height(down, node, memo):
    if node in memo:
        return memo[node]
    kids = down[node]
    value = 1 if not kids else 1 + max(_naive_height(down, kid, memo) for kid in kids)
    memo[node] = value
    return value


def naive_subtree_stats(net: SemanticNetwork, cid: str):
    """(desc, h, d, adesc) recomputed from scratch for one concept."""
    down = derived_adjacency(net, {RelationType.HYPONYM})
    members = naive_reachable_down(net, cid)
    desc = len(members)
    internal = sum(1 for member in members if down[member])
    adesc = max(1.0, (desc - 1) / max(1, internal))
    return desc, _naive_height(down, cid, {}), naive_depths(net)[cid], adesc


def naive_network_stats(net: SemanticNetwork):
    """Per-concept (desc, h, d, adesc) by direct search over the whole graph.

    Adjacency and depths are built once per network; each concept's subtree
    is then rediscovered with a fresh DFS, so no per-concept result is
    shared with any other.
    """
    down = derived_adjacency(net, {RelationType.HYPONYM})
    depths = naive_depths(net)
    out = {}
    for cid in net.concept_ids():
        seen = {cid}
        stack = [cid]
        while stack:
            node = stack.pop()
            for child in down[node]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        desc = len(seen)
        internal = sum(1 for member in seen if down[member])
        adesc = max(1.0, (desc - 1) / max(1, internal))
        out[cid] = (desc, _naive_height(down, cid, {}), depths[cid], adesc)
    return out


# ----------------------------------------------------------------------
# scoring: full naive reimplementation of the sense scorer

def naive_score_senses(net: SemanticNetwork, target: str, window_lemmas, cfg):
    """Distribution over the target's senses, recomputed the long way.

    ``window_lemmas`` lists every window occurrence including the target.
    Returns (scores in sense order, abstained flag).
    """
    relations = cfg.relations
    marks: dict[str, float] = {}
    contributors: dict[str, set[str]] = {}
    for lemma in window_lemmas:
        senses = net.senses_of(lemma)
        for sense in senses:
            for cid, _ in naive_ancestors_within(
                net, sense, relations, cfg.chain_limit, cfg.top_cut
            ):
                if cfg.weighting is Weighting.SYNSETS:
                    marks[cid] = marks.get(cid, 0.0) + 1.0
                elif cfg.weighting is Weighting.FRACTIONAL:
                    marks[cid] = marks.get(cid, 0.0) + 1.0 / len(senses)
                else:
                    contributors.setdefault(cid, set()).add(lemma)
    if cfg.weighting is Weighting.WORDS:
        marks = {cid: float(len(who)) for cid, who in contributors.items()}

    senses = net.senses_of(target)
    raw = []
    for sense in senses:
        best = 0.0
        for cid, dist in naive_ancestors_within(
            net, sense, relations, cfg.chain_limit, cfg.top_cut
        ):
            if dist == 0:
                continue
            m = marks.get(cid, 0.0)
            if m <= 0:
                continue
            desc, h, d, adesc = naive_subtree_stats(net, cid)
            value = oracle_density(
                cfg.formula.kind.value, cfg.formula.alpha, adesc, h, d, desc, m
            )
            best = max(best, value)
        raw.append(best)
    total = sum(raw)
    if total <= 0:
        if cfg.fallback is Fallback.UNIFORM:
            return [1.0 / len(senses)] * len(senses), False
        return [0.0] * len(senses), True
    return [value / total for value in raw], False


# ----------------------------------------------------------------------
# random network generators

def random_dag_synsets(rng: random.Random, max_nodes: int = 100,
                       share_lemmas: bool = True,
                       meronym_prob: float = 0.0) -> list[Synset]:
    """A random hypernym DAG: node i may take 1-2 parents among 0..i-1.

    With ``meronym_prob`` > 0, nodes also get part-of edges to arbitrary
    other nodes (the part-of relation has no acyclicity constraint).
    """
    n = rng.randint(1, max_nodes)
    lemma_pool = max(1, n // 3)
    synsets = []
    for i in range(n):
        edges = []
        if i > 0 and rng.random() < 0.9:
            first = rng.randrange(i)
            edges.append((RelationType.HYPERNYM, f"c{first:03d}"))
            if i > 1 and rng.random() < 0.25:
                second = rng.randrange(i)
                if second != first:
                    edges.append((RelationType.HYPERNYM, f"c{second:03d}"))
        if n > 1 and rng.random() < meronym_prob:
            other = rng.randrange(n)
            if other != i:
                edges.append((RelationType.MERONYM, f"c{other:03d}"))
        lemmas = [f"n{i}"]
        if share_lemmas:
            lemmas.append(f"w{i % lemma_pool}")
        synsets.append(
            Synset(
                id=f"c{i:03d}",
                lemmas=tuple(lemmas),
                gloss=f"gloss for node {i}",
                edges=tuple(edges),
            )
        )
    return synsets


def random_tree_synsets(rng: random.Random, max_nodes: int = 60) -> list[Synset]:
    """A random hypernym tree (single parent), for tree-only invariants."""
    n = rng.randint(1, max_nodes)
    lemma_pool = max(1, n // 3)
    synsets = []
    for i in range(n):
        edges = ()
        if i > 0:
            edges = ((RelationType.HYPERNYM, f"c{rng.randrange(i):03d}"),)
        synsets.append(
            Synset(
                id=f"c{i:03d}",
                lemmas=(f"n{i}", f"w{i % lemma_pool}"),
                gloss="",
                edges=edges,
            )
        )
    return synsets
