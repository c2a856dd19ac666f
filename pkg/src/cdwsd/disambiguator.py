"""Windowed mark propagation and sense scoring.

The disambiguation pipeline for one noun occurrence:

1. collect the nouns within a fixed radius of the target (the window; the
   target itself counts as a window word),
2. for every window word and every one of its senses, deposit a weighted
   mark on each concept reachable from that sense through the configured
   relations (subject to the chain limit and the top cut),
3. score each sense of the target by the best density over its proper
   ancestors, and normalize the scores into a distribution.

Scoring considers proper ancestors only (one or more relation steps away
from the sense): a sense's own synset holds its self-mark, which would
otherwise saturate the density of every leaf sense and erase the contrast
between senses.

Document-level disambiguation slides the window incrementally and keeps all
mark bookkeeping in exact integer counters, so it is bit-for-bit identical
to rebuilding the window from scratch at every position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .density import DensityFormula, conceptual_density
from .lexicon import HYPERNYMY, RelationType, SemanticNetwork


class UnknownWordError(ValueError):
    """The target occurrence cannot be disambiguated (not a known noun)."""


class Weighting(str, Enum):
    SYNSETS = "synsets"        # one mark per sense of each window occurrence
    FRACTIONAL = "fractional"  # 1/polysemy per sense
    WORDS = "words"            # number of distinct contributing words


class Fallback(str, Enum):
    ABSTAIN = "abstain"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class WsdConfig:
    """Every tunable of the algorithm in one immutable value.

    The defaults are the best-performing combination: plain geometric
    formula, hypernymy only, distinct-word weighting, chains capped at two
    steps, a 150-noun window radius, no top cut, and a uniform fallback so
    coverage stays total.
    """

    relations: frozenset[RelationType] = HYPERNYMY
    formula: DensityFormula = DensityFormula()
    window_radius: int = 150
    top_cut: int = 0
    chain_limit: int = 2
    weighting: Weighting = Weighting.WORDS
    fallback: Fallback = Fallback.UNIFORM

    def __post_init__(self):
        if not self.relations:
            raise ValueError("relations must be nonempty")
        for name in ("window_radius", "top_cut", "chain_limit"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class Token:
    """One document token: its lemma and whether it is a noun occurrence."""

    lemma: str
    is_noun: bool = True


@dataclass(frozen=True)
class Window:
    """Context of one target occurrence: noun neighbors within the radius."""

    target: int
    target_lemma: str
    context: tuple[tuple[str, int], ...]  # (lemma, token position)
    radius: int


@dataclass(frozen=True)
class SenseDistribution:
    """Normalized scores over the senses of one occurrence, in sense order."""

    entries: tuple[tuple[str, float], ...]
    abstained: bool = False

    def score_of(self, sense_id: str) -> float:
        for sid, score in self.entries:
            if sid == sense_id:
                return score
        return 0.0

    def best(self) -> tuple[str, float] | None:
        if self.abstained or not self.entries:
            return None
        return max(self.entries, key=lambda e: e[1])


@dataclass(frozen=True)
class TokenResult:
    position: int
    lemma: str
    distribution: SenseDistribution


class ScoringContext:
    """Shared per-run caches: mark profiles and candidate concept lists.

    A lemma's *profile* maps each concept admissible under the traversal
    parameters to the number of the lemma's senses that reach it; it fully
    determines the marks one window occurrence deposits.  Safe for
    concurrent readers: cache writes are idempotent dict insertions.
    """

    def __init__(self, net: SemanticNetwork, cfg: WsdConfig):
        self.net = net
        self.cfg = cfg
        self._relations = frozenset(cfg.relations)
        self._profiles: dict[str, dict[str, int]] = {}
        self._candidates: dict[str, tuple] = {}

    def profile(self, lemma: str) -> dict[str, int]:
        prof = self._profiles.get(lemma)
        if prof is None:
            prof = {}
            for sense in self.net.senses_of(lemma):
                for cid, _ in self.net.ancestors_within(
                    sense,
                    self._relations,
                    chain_limit=self.cfg.chain_limit,
                    top_cut=self.cfg.top_cut,
                ):
                    prof[cid] = prof.get(cid, 0) + 1
            self._profiles[lemma] = prof
        return prof

    def candidates(self, sense_id: str):
        """Proper ancestors of a sense with their stats, scoring order."""
        cands = self._candidates.get(sense_id)
        if cands is None:
            cands = tuple(
                (cid, self.net.subtree_stats(cid))
                for cid, dist in self.net.ancestors_within(
                    sense_id,
                    self._relations,
                    chain_limit=self.cfg.chain_limit,
                    top_cut=self.cfg.top_cut,
                )
                if dist > 0
            )
            self._candidates[sense_id] = cands
        return cands


class MarkTable:
    """Per-concept mark accumulator over the current window.

    All state is held in integer counters keyed by concept (and, for the
    fractional scheme, by contributing-word polysemy), so adding and later
    removing an occurrence restores the exact previous state, and the mark
    value read for a concept never depends on insertion history.
    """

    def __init__(self, ctx: ScoringContext):
        self._ctx = ctx
        self._weighting = ctx.cfg.weighting
        self._contrib: dict[str, dict[str, int]] = {}
        self._sense_counts: dict[str, int] = {}
        self._frac_counts: dict[str, dict[int, int]] = {}

    def add(self, lemma: str) -> None:
        """Deposit the marks of one window occurrence of ``lemma``."""
        profile = self._ctx.profile(lemma)
        if not profile:
            return
        polysemy = self._ctx.net.polysemy(lemma)
        for cid, reached in profile.items():
            words = self._contrib.setdefault(cid, {})
            words[lemma] = words.get(lemma, 0) + 1
            self._sense_counts[cid] = self._sense_counts.get(cid, 0) + reached
            per_poly = self._frac_counts.setdefault(cid, {})
            per_poly[polysemy] = per_poly.get(polysemy, 0) + reached

    def remove(self, lemma: str) -> None:
        """Withdraw the marks of one previously added occurrence."""
        profile = self._ctx.profile(lemma)
        if not profile:
            return
        polysemy = self._ctx.net.polysemy(lemma)
        for cid, reached in profile.items():
            words = self._contrib[cid]
            words[lemma] -= 1
            if not words[lemma]:
                del words[lemma]
            if not words:
                del self._contrib[cid]
            self._sense_counts[cid] -= reached
            if not self._sense_counts[cid]:
                del self._sense_counts[cid]
            per_poly = self._frac_counts[cid]
            per_poly[polysemy] -= reached
            if not per_poly[polysemy]:
                del per_poly[polysemy]
            if not per_poly:
                del self._frac_counts[cid]

    def marks(self, cid: str) -> float:
        """Current mark count of a concept under the configured weighting."""
        if self._weighting is Weighting.WORDS:
            return float(len(self._contrib.get(cid, ())))
        if self._weighting is Weighting.SYNSETS:
            return float(self._sense_counts.get(cid, 0))
        per_poly = self._frac_counts.get(cid)
        if not per_poly:
            return 0.0
        return sum(count / poly for poly, count in sorted(per_poly.items()))

    def contributing_words(self, cid: str) -> frozenset[str]:
        return frozenset(self._contrib.get(cid, ()))

    def concepts(self) -> Iterable[str]:
        return self._contrib.keys()


def build_window(doc: Sequence[Token], target_index: int, radius: int) -> Window:
    """Collect up to ``radius`` noun tokens on each side of the target.

    The radius counts noun tokens, not raw tokens, so the effective context
    stays comparable across documents with different function-word density.
    """
    if target_index < 0 or target_index >= len(doc):
        raise IndexError(f"target index {target_index} out of range")
    target = doc[target_index]
    if not target.is_noun:
        raise UnknownWordError(
            f"cannot disambiguate: token {target.lemma!r} at position "
            f"{target_index} is not a noun"
        )
    noun_positions = [i for i, tok in enumerate(doc) if tok.is_noun]
    rank = noun_positions.index(target_index)
    lo = max(0, rank - radius)
    hi = min(len(noun_positions) - 1, rank + radius)
    context = tuple(
        (doc[pos].lemma, pos)
        for pos in noun_positions[lo : hi + 1]
        if pos != target_index
    )
    return Window(
        target=target_index,
        target_lemma=target.lemma,
        context=context,
        radius=radius,
    )


def collect_marks(
    window: Window,
    cfg: WsdConfig,
    net: SemanticNetwork,
    _ctx: ScoringContext | None = None,
) -> MarkTable:
    """Propagate the marks of every window word, the target included."""
    ctx = _ctx if _ctx is not None else ScoringContext(net, cfg)
    table = MarkTable(ctx)
    table.add(window.target_lemma)
    for lemma, _ in window.context:
        table.add(lemma)
    return table


def _raw_scores(
    target_lemma: str,
    marks: MarkTable,
    ctx: ScoringContext,
) -> list[tuple[str, float, str | None]]:
    """Per sense: (sense id, best density, concept achieving it).

    Ties on density prefer the deeper concept, then the smaller id, which
    pins the reported winner deterministically.
    """
    senses = ctx.net.senses_of(target_lemma)
    if not senses:
        raise UnknownWordError(f"unknown word {target_lemma!r}")
    formula = ctx.cfg.formula
    out = []
    for sense in senses:
        best = 0.0
        best_d = -1
        best_cid: str | None = None
        for cid, stats in ctx.candidates(sense):
            m = marks.marks(cid)
            if m <= 0.0:
                continue
            value = conceptual_density(formula, stats, m)
            if value > best or (
                value == best
                and best_cid is not None
                and (stats.d > best_d or (stats.d == best_d and cid < best_cid))
            ):
                best, best_d, best_cid = value, stats.d, cid
        out.append((sense, best, best_cid))
    return out


def _normalize(
    raw: list[tuple[str, float, str | None]], fallback: Fallback
) -> SenseDistribution:
    total = sum(value for _, value, _ in raw)
    if total <= 0.0:
        if fallback is Fallback.UNIFORM:
            share = 1.0 / len(raw)
            return SenseDistribution(
                entries=tuple((sense, share) for sense, _, _ in raw)
            )
        return SenseDistribution(
            entries=tuple((sense, 0.0) for sense, _, _ in raw), abstained=True
        )
    return SenseDistribution(
        entries=tuple((sense, value / total) for sense, value, _ in raw)
    )


def score_senses(
    target_lemma: str,
    marks: MarkTable,
    cfg: WsdConfig,
    net: SemanticNetwork,
    _ctx: ScoringContext | None = None,
) -> SenseDistribution:
    """Score every sense of the target against the mark table and normalize.

    A sense's raw score is the highest conceptual density over its proper
    ancestors.  When every sense scores zero the fallback policy decides
    between a uniform distribution (coverage preserved) and abstention.
    """
    ctx = _ctx if _ctx is not None else ScoringContext(net, cfg)
    return _normalize(_raw_scores(target_lemma, marks, ctx), cfg.fallback)


def explain_senses(
    target_lemma: str,
    marks: MarkTable,
    cfg: WsdConfig,
    net: SemanticNetwork,
) -> list[tuple[str, float, str | None]]:
    """Like :func:`score_senses` but exposing raw densities and winners."""
    return _raw_scores(target_lemma, marks, ScoringContext(net, cfg))


def disambiguate_document(
    doc: Sequence[Token],
    cfg: WsdConfig,
    net: SemanticNetwork,
    _ctx: ScoringContext | None = None,
) -> list[TokenResult]:
    """One distribution per noun token, deterministic for fixed inputs.

    Nouns whose lemma is absent from the lexicon yield an abstention record
    with no entries.  The window slides over the document's noun sequence,
    updating the shared mark table incrementally.
    """
    ctx = _ctx if _ctx is not None else ScoringContext(net, cfg)
    noun_positions = [i for i, tok in enumerate(doc) if tok.is_noun]
    if not noun_positions:
        return []
    table = MarkTable(ctx)
    radius = cfg.window_radius
    last = len(noun_positions) - 1
    lo, hi = 0, -1  # current inclusive slice of noun_positions in the table
    results = []
    for rank, pos in enumerate(noun_positions):
        new_lo = max(0, rank - radius)
        new_hi = min(last, rank + radius)
        while lo < new_lo:
            table.remove(doc[noun_positions[lo]].lemma)
            lo += 1
        while hi < new_hi:
            hi += 1
            table.add(doc[noun_positions[hi]].lemma)
        lemma = doc[pos].lemma
        if net.senses_of(lemma):
            dist = _normalize(_raw_scores(lemma, marks=table, ctx=ctx), cfg.fallback)
        else:
            dist = SenseDistribution(entries=(), abstained=True)
        results.append(TokenResult(position=pos, lemma=lemma, distribution=dist))
    return results
