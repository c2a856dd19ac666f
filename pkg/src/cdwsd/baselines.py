"""Reference disambiguation systems: first sense, seeded random, gloss overlap.

The gloss-overlap system is the classic dictionary-only strategy: a sense of
the target is scored by how many distinct word types its gloss shares with
the context bag (the window lemmas plus every gloss of every sense of every
window word), after lowercasing and stopword removal.  Overlaps count once
per type, so a gloss repeating a context word gains nothing.
"""

from __future__ import annotations

import random
import re
from functools import lru_cache
from importlib import resources

from .disambiguator import Fallback, SenseDistribution, Window
from .lexicon import SemanticNetwork

_WORD_RE = re.compile(r"[a-z0-9_']+")


@lru_cache(maxsize=1)
def load_stopwords() -> frozenset[str]:
    """The built-in 50-token stopword list (one lowercase token per line)."""
    text = resources.files("cdwsd").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(tok for tok in text.split() if tok)


def read_stopwords(path) -> frozenset[str]:
    """Load a custom stopword file in the same one-token-per-line format."""
    with open(path, "r", encoding="utf-8") as fh:
        return frozenset(tok.strip().lower() for tok in fh if tok.strip())


def _abstention() -> SenseDistribution:
    return SenseDistribution(entries=(), abstained=True)


def _point_mass(senses: tuple[str, ...], chosen: int) -> SenseDistribution:
    return SenseDistribution(
        entries=tuple(
            (sense, 1.0 if i == chosen else 0.0) for i, sense in enumerate(senses)
        )
    )


def first_sense(target_lemma: str, net: SemanticNetwork) -> SenseDistribution:
    """All mass on the first listed (most frequent) sense."""
    senses = net.senses_of(target_lemma)
    if not senses:
        return _abstention()
    return _point_mass(senses, 0)


def random_sense(
    target_lemma: str, net: SemanticNetwork, rng: random.Random | int
) -> SenseDistribution:
    """All mass on one uniformly drawn sense.

    ``rng`` is a :class:`random.Random` stream (or a seed to start one); a
    caller evaluating a corpus passes the same stream for every item so the
    whole run is reproducible from a single seed.
    """
    senses = net.senses_of(target_lemma)
    if not senses:
        return _abstention()
    if isinstance(rng, int):
        rng = random.Random(rng)
    return _point_mass(senses, rng.randrange(len(senses)))


def _gloss_types(gloss: str, stop: frozenset[str]) -> set[str]:
    return {tok for tok in _WORD_RE.findall(gloss.lower()) if tok not in stop}


def lesk_score(
    target_lemma: str,
    window: Window,
    net: SemanticNetwork,
    fallback: Fallback = Fallback.UNIFORM,
    stopwords: frozenset[str] | None = None,
) -> SenseDistribution:
    """Type-level gloss overlap between each target sense and the context bag.

    Invariant to context word order.  When no sense overlaps at all the
    fallback policy applies, exactly as in the density scorer.
    """
    senses = net.senses_of(target_lemma)
    if not senses:
        return _abstention()
    stop = load_stopwords() if stopwords is None else stopwords

    bag: set[str] = set()
    for lemma, _ in window.context:
        if lemma not in stop:
            bag.add(lemma)
        for sense in net.senses_of(lemma):
            bag |= _gloss_types(net.synset(sense).gloss, stop)

    raws = [
        float(len(_gloss_types(net.synset(sense).gloss, stop) & bag))
        for sense in senses
    ]
    total = sum(raws)
    if total <= 0.0:
        if fallback is Fallback.UNIFORM:
            share = 1.0 / len(senses)
            return SenseDistribution(
                entries=tuple((sense, share) for sense in senses)
            )
        return SenseDistribution(
            entries=tuple((sense, 0.0) for sense in senses), abstained=True
        )
    return SenseDistribution(
        entries=tuple(
            (sense, raw / total) for sense, raw in zip(senses, raws)
        )
    )
