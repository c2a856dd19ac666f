"""Semantic network loading, validation, and traversal.

A :class:`SemanticNetwork` is an immutable graph of noun concepts (synsets)
connected by typed relations, plus a word index that preserves the source
sense order (first listed sense = most frequent).  Two loaders are provided:
the WordNet database file pair (``data.noun`` / ``index.noun``) and a compact
tab-separated format used for small hand-written lexicons.

Per-concept subtree statistics (subtree size, subtree depth, global depth,
mean branching) are computed once on first use and cached for the lifetime
of the network; after that the network is safe to share across threads.
"""

from __future__ import annotations

import io
import os
from collections import deque
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence


class LexiconError(Exception):
    """Base class for lexicon loading failures."""


class LexiconFormatError(LexiconError):
    """A malformed input line; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LexiconValidationError(LexiconError):
    """A structurally invalid network (dangling references, hypernym cycles)."""


class RelationType(str, Enum):
    HYPERNYM = "hypernym"
    HYPONYM = "hyponym"
    MERONYM = "meronym"
    HOLONYM = "holonym"

    @property
    def inverse(self) -> "RelationType":
        return _INVERSE[self]


_INVERSE = {
    RelationType.HYPERNYM: RelationType.HYPONYM,
    RelationType.HYPONYM: RelationType.HYPERNYM,
    RelationType.MERONYM: RelationType.HOLONYM,
    RelationType.HOLONYM: RelationType.MERONYM,
}

HYPERNYMY = frozenset({RelationType.HYPERNYM})


@dataclass(frozen=True)
class Synset:
    """One concept: identifier, member word forms, gloss, outgoing edges."""

    id: str
    lemmas: tuple[str, ...]
    gloss: str = ""
    edges: tuple[tuple[RelationType, str], ...] = ()


@dataclass(frozen=True)
class ConceptStats:
    """Precomputed statistics of a concept's hyponym subtree.

    desc:  number of concepts in the subtree, the concept itself included.
    h:     subtree depth in levels (a leaf has h = 1).
    d:     global depth, 1 + shortest hypernym path to any root (root d = 1).
    adesc: mean branching of the subtree, (desc - 1) / max(1, internal
           nodes), floored at 1.0 so geometric sums stay monotone.
    """

    desc: int
    h: int
    d: int
    adesc: float


class SemanticNetwork:
    """Immutable concept graph with sense-ordered word lookup.

    Relation adjacency is symmetrized at construction: a hypernym edge
    implies the inverse hyponym edge and vice versa (likewise meronym /
    holonym), so traversal sees a consistent picture regardless of which
    direction the source encoded.
    """

    def __init__(
        self,
        synsets: Sequence[Synset],
        word_index: Mapping[str, Sequence[str]] | None = None,
    ):
        self._synsets: dict[str, Synset] = {}
        for syn in synsets:
            if syn.id in self._synsets:
                raise LexiconValidationError(f"duplicate concept id {syn.id!r}")
            if not syn.lemmas:
                raise LexiconValidationError(f"synset {syn.id!r} has no lemmas")
            self._synsets[syn.id] = syn

        self._validate_edges()
        self._adj = self._build_adjacency()
        self._word_index = self._build_word_index(word_index)

        hypernyms = self._adj[RelationType.HYPERNYM]
        self.roots: tuple[str, ...] = tuple(
            sorted(cid for cid in self._synsets if not hypernyms[cid])
        )
        self._topo = self._toposort()  # parents before children; also cycle check
        self._stats: dict[str, ConceptStats] | None = None
        # Per-(relations, chain_limit, top_cut) traversal caches used by the
        # scoring hot path.  dict get/setdefault are atomic under the GIL, so
        # concurrent readers may share them.
        self._traversal_cache: dict = {}

    # ------------------------------------------------------------------
    # construction helpers

    def _validate_edges(self) -> None:
        dangling = sorted(
            {
                target
                for syn in self._synsets.values()
                for _, target in syn.edges
                if target not in self._synsets
            }
        )
        if dangling:
            raise LexiconValidationError(
                "dangling edge targets: " + ", ".join(dangling)
            )

    def _build_adjacency(self) -> dict[RelationType, dict[str, tuple[str, ...]]]:
        raw: dict[RelationType, dict[str, set[str]]] = {
            rel: {cid: set() for cid in self._synsets} for rel in RelationType
        }
        for syn in self._synsets.values():
            for rel, target in syn.edges:
                raw[rel][syn.id].add(target)
                raw[rel.inverse][target].add(syn.id)
        return {
            rel: {cid: tuple(sorted(targets)) for cid, targets in per.items()}
            for rel, per in raw.items()
        }

    def _build_word_index(
        self, explicit: Mapping[str, Sequence[str]] | None
    ) -> dict[str, tuple[str, ...]]:
        if explicit is not None:
            index = {}
            for lemma, cids in explicit.items():
                missing = [c for c in cids if c not in self._synsets]
                if missing:
                    raise LexiconValidationError(
                        f"word index for {lemma!r} references unknown concepts: "
                        + ", ".join(missing)
                    )
                index[lemma] = tuple(cids)
            return index
        index: dict[str, list[str]] = {}
        for syn in self._synsets.values():  # insertion order = source order
            for lemma in syn.lemmas:
                index.setdefault(lemma, []).append(syn.id)
        return {lemma: tuple(cids) for lemma, cids in index.items()}

    def _toposort(self) -> tuple[str, ...]:
        """Order with every hypernym before its hyponyms; fails on cycles."""
        children = self._adj[RelationType.HYPONYM]
        parents = self._adj[RelationType.HYPERNYM]
        pending = {cid: len(parents[cid]) for cid in self._synsets}
        queue = deque(self.roots)
        order: list[str] = []
        while queue:
            cid = queue.popleft()
            order.append(cid)
            for child in children[cid]:
                pending[child] -= 1
                if pending[child] == 0:
                    queue.append(child)
        if len(order) != len(self._synsets):
            stuck = sorted(cid for cid, n in pending.items() if n > 0)
            raise LexiconValidationError(
                "hypernym relation contains a cycle involving: " + ", ".join(stuck)
            )
        return tuple(order)

    # ------------------------------------------------------------------
    # lookup

    def __len__(self) -> int:
        return len(self._synsets)

    def __contains__(self, cid: str) -> bool:
        return cid in self._synsets

    def concept_ids(self) -> Iterable[str]:
        return self._synsets.keys()

    def words(self) -> Iterable[str]:
        return self._word_index.keys()

    def synset(self, cid: str) -> Synset:
        try:
            return self._synsets[cid]
        except KeyError:
            raise KeyError(f"unknown concept id {cid!r}") from None

    def senses_of(self, lemma: str) -> tuple[str, ...]:
        """Concept ids for ``lemma`` in source sense order; empty if unknown."""
        return self._word_index.get(lemma, ())

    def polysemy(self, lemma: str) -> int:
        return len(self._word_index.get(lemma, ()))

    def related(self, cid: str, relation: RelationType) -> tuple[str, ...]:
        return self._adj[relation][cid]

    # ------------------------------------------------------------------
    # traversal

    def ancestors_within(
        self,
        start: str,
        relations: frozenset[RelationType] | set[RelationType],
        chain_limit: int = 0,
        top_cut: int = 0,
    ) -> list[tuple[str, int]]:
        """Concepts reachable from ``start`` over ``relations``, with distance.

        Breadth-first over the union of the selected relation edges; every
        concept is reported once at its minimum distance, ``start`` itself at
        distance 0.  ``chain_limit`` > 0 drops concepts further than that
        many steps (0 = unlimited); ``top_cut`` > 0 drops concepts whose
        global depth d is <= the cut (0 = keep everything).  Output is
        sorted by (distance, id).
        """
        if start not in self._synsets:
            raise KeyError(f"unknown concept id {start!r}")
        if not relations:
            raise ValueError("relations must be nonempty")
        adjs = [self._adj[rel] for rel in relations]
        dist = {start: 0}
        frontier = [start]
        depth = 0
        while frontier:
            if chain_limit and depth >= chain_limit:
                break
            depth += 1
            nxt = []
            for cid in frontier:
                for adj in adjs:
                    for other in adj[cid]:
                        if other not in dist:
                            dist[other] = depth
                            nxt.append(other)
            frontier = nxt
        if top_cut:
            stats = self._ensure_stats()
            result = [
                (cid, n) for cid, n in dist.items() if stats[cid].d > top_cut
            ]
        else:
            result = list(dist.items())
        result.sort(key=lambda pair: (pair[1], pair[0]))
        return result

    # ------------------------------------------------------------------
    # statistics

    def subtree_stats(self, cid: str) -> ConceptStats:
        """Statistics of the hyponym subtree rooted at ``cid`` (cached).

        Always computed over the hyponym hierarchy, independent of the
        relation set used for traversal, because subtree size and branching
        are hierarchy properties.
        """
        if cid not in self._synsets:
            raise KeyError(f"unknown concept id {cid!r}")
        return self._ensure_stats()[cid]

    def _ensure_stats(self) -> dict[str, ConceptStats]:
        if self._stats is None:
            self._stats = self._compute_stats()
        return self._stats

    def _compute_stats(self) -> dict[str, ConceptStats]:
        children = self._adj[RelationType.HYPONYM]

        # Global depth: multi-source BFS down from the roots (root d = 1).
        d: dict[str, int] = {cid: 1 for cid in self.roots}
        queue = deque(self.roots)
        while queue:
            cid = queue.popleft()
            for child in children[cid]:
                if child not in d:
                    d[child] = d[cid] + 1
                    queue.append(child)

        # Subtree membership, size and depth, bottom-up in reverse
        # topological order.  Multiple inheritance is handled with set
        # semantics: a shared descendant counts once.
        reach: dict[str, frozenset[str]] = {}
        h: dict[str, int] = {}
        desc: dict[str, int] = {}
        internal: dict[str, int] = {}
        for cid in reversed(self._topo):
            kids = children[cid]
            if not kids:
                reach[cid] = frozenset((cid,))
                h[cid] = 1
            else:
                members = set((cid,))
                for kid in kids:
                    members |= reach[kid]
                reach[cid] = frozenset(members)
                h[cid] = 1 + max(h[kid] for kid in kids)
            desc[cid] = len(reach[cid])
            internal[cid] = sum(1 for member in reach[cid] if children[member])

        stats = {}
        for cid in self._synsets:
            branching = (desc[cid] - 1) / max(1, internal[cid])
            stats[cid] = ConceptStats(
                desc=desc[cid],
                h=h[cid],
                d=d[cid],
                adesc=max(1.0, branching),
            )
        return stats


# ----------------------------------------------------------------------
# WordNet database file parser (data.noun / index.noun)

_POINTER_MAP = {
    "@": RelationType.HYPERNYM,
    "~": RelationType.HYPONYM,
    "%p": RelationType.MERONYM,
    "%m": RelationType.MERONYM,
    "%s": RelationType.MERONYM,
    "#p": RelationType.HOLONYM,
    "#m": RelationType.HOLONYM,
    "#s": RelationType.HOLONYM,
}


def _as_text(stream: IO) -> IO[str]:
    data = stream.read()
    if isinstance(data, bytes):
        return io.StringIO(data.decode("latin-1"))
    return io.StringIO(data)


def parse_wndb(data_stream: IO, index_stream: IO) -> SemanticNetwork:
    """Parse a WordNet noun database pair into a :class:`SemanticNetwork`.

    ``data_stream`` is ``data.noun`` and ``index_stream`` is ``index.noun``.
    License header lines (two leading spaces) are skipped.  Pointer symbols
    ``@`` / ``~`` map to hypernym / hyponym, ``%p %m %s`` to meronym and
    ``#p #m #s`` to holonym; every other pointer is ignored.  The word index
    comes from ``index.noun``, whose synset offset order encodes sense order.
    """
    synsets = []
    for lineno, line in enumerate(_as_text(data_stream), start=1):
        if not line.strip() or line.startswith("  "):
            continue
        try:
            synsets.append(_parse_data_line(line))
        except (ValueError, IndexError) as exc:
            raise LexiconFormatError(f"bad data.noun record: {exc}", lineno) from exc

    word_index: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(_as_text(index_stream), start=1):
        if not line.strip() or line.startswith("  "):
            continue
        try:
            lemma, offsets = _parse_index_line(line)
        except (ValueError, IndexError) as exc:
            raise LexiconFormatError(f"bad index.noun record: {exc}", lineno) from exc
        word_index[lemma] = offsets

    return SemanticNetwork(synsets, word_index)


def _parse_data_line(line: str) -> Synset:
    body, _, gloss = line.partition("|")
    fields = body.split()
    offset = fields[0]
    if len(offset) != 8 or not offset.isdigit():
        raise ValueError(f"synset offset {offset!r} is not 8 decimal digits")
    w_cnt = int(fields[3], 16)
    if w_cnt < 1:
        raise ValueError("word count is zero")
    lemmas = tuple(fields[4 + 2 * i].lower() for i in range(w_cnt))
    p_base = 4 + 2 * w_cnt
    p_cnt = int(fields[p_base], 10)
    edges = []
    for j in range(p_cnt):
        sym = fields[p_base + 1 + 4 * j]
        target = fields[p_base + 2 + 4 * j]
        pos = fields[p_base + 3 + 4 * j]
        # fields[p_base + 4 + 4*j] is the source/target word spec; unused here
        rel = _POINTER_MAP.get(sym)
        if rel is not None and pos == "n":
            edges.append((rel, target))
    return Synset(id=offset, lemmas=lemmas, gloss=gloss.strip(), edges=tuple(edges))


def _parse_index_line(line: str) -> tuple[str, tuple[str, ...]]:
    fields = line.split()
    lemma = fields[0].lower()
    if fields[1] != "n":
        raise ValueError(f"unexpected part of speech {fields[1]!r}")
    synset_cnt = int(fields[2])
    if synset_cnt < 1:
        raise ValueError("synset count is zero")
    offsets = tuple(fields[-synset_cnt:])
    for off in offsets:
        if len(off) != 8 or not off.isdigit():
            raise ValueError(f"synset offset {off!r} is not 8 decimal digits")
    return lemma, offsets


# ----------------------------------------------------------------------
# compact lexicon format

_COMPACT_RELS = {rel.value: rel for rel in RelationType}


def parse_compact_lexicon(stream: IO) -> SemanticNetwork:
    """Parse the compact tab-separated lexicon format.

    One record per line::

        id <TAB> lemma1,lemma2 <TAB> rel:target;rel:target <TAB> gloss

    The relations field may be empty (a root), the gloss field may be empty
    or omitted.  Blank lines and lines starting with ``#`` are skipped.
    Sense order for each lemma is the order its synsets appear in the file.
    """
    synsets = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(_as_text(stream), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 3 or len(fields) > 4:
            raise LexiconFormatError(
                f"expected 3 or 4 tab-separated fields, got {len(fields)}", lineno
            )
        cid = fields[0].strip()
        if not cid:
            raise LexiconFormatError("empty concept id", lineno)
        if cid in seen:
            raise LexiconFormatError(
                f"duplicate concept id {cid!r} (first seen on line {seen[cid]})",
                lineno,
            )
        seen[cid] = lineno
        lemmas = tuple(w.strip().lower() for w in fields[1].split(",") if w.strip())
        if not lemmas:
            raise LexiconFormatError(f"synset {cid!r} has no lemmas", lineno)
        edges = []
        relfield = fields[2].strip()
        if relfield:
            for token in relfield.split(";"):
                token = token.strip()
                if not token:
                    continue
                rel_name, sep, target = token.partition(":")
                if not sep or rel_name not in _COMPACT_RELS or not target:
                    raise LexiconFormatError(
                        f"bad relation token {token!r} "
                        f"(expected rel:target with rel in {sorted(_COMPACT_RELS)})",
                        lineno,
                    )
                edges.append((_COMPACT_RELS[rel_name], target))
        gloss = fields[3].strip() if len(fields) == 4 else ""
        synsets.append(Synset(id=cid, lemmas=lemmas, gloss=gloss, edges=tuple(edges)))
    return SemanticNetwork(synsets)


# ----------------------------------------------------------------------
# path-based convenience loader

def load_lexicon(path: str | os.PathLike, fmt: str = "auto") -> SemanticNetwork:
    """Load a lexicon from a path.

    ``fmt`` is ``wndb``, ``compact``, or ``auto``.  Auto-detection: a
    directory (or a file named ``data.noun``) is treated as a WordNet
    database; any other file as compact format.
    """
    p = Path(path)
    if fmt == "auto":
        if p.is_dir() or p.name == "data.noun":
            fmt = "wndb"
        else:
            fmt = "compact"
    if fmt == "wndb":
        data_path = p / "data.noun" if p.is_dir() else p
        index_path = data_path.with_name("index.noun")
        if not data_path.exists():
            raise FileNotFoundError(f"missing {data_path}")
        if not index_path.exists():
            raise FileNotFoundError(f"missing {index_path}")
        with open(data_path, "rb") as df, open(index_path, "rb") as xf:
            return parse_wndb(df, xf)
    if fmt == "compact":
        with open(p, "r", encoding="utf-8") as fh:
            return parse_compact_lexicon(fh)
    raise ValueError(f"unknown lexicon format {fmt!r}")
