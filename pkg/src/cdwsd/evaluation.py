"""Corpus ingestion, recall scoring, and parameter sweeps.

Recall follows the shared-mass scoring rule: an item's score is the
probability mass the system assigns to its gold senses, abstentions score
zero, and recall is the score sum divided by the number of items (so low
coverage directly depresses recall).  Reports break recall down by text
category and compare against an analytically computed random baseline.

The normalized corpus format is one noun occurrence per line::

    doc_id <TAB> category <TAB> position <TAB> lemma <TAB> gold_id[,gold_id...]

where category is a one-letter Brown text category code (A-R).
"""

from __future__ import annotations

import math
import random
import re
from collections.abc import Callable, Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import IO

from .baselines import first_sense, lesk_score, random_sense
from .density import DensityFormula, FormulaKind
from .disambiguator import (
    ScoringContext,
    SenseDistribution,
    Token,
    Weighting,
    WsdConfig,
    build_window,
    disambiguate_document,
)
from .lexicon import RelationType, SemanticNetwork


class CorpusFormatError(Exception):
    """Malformed corpus input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SemcorParseError(Exception):
    """Structurally unparseable tagged file; carries the byte offset."""

    def __init__(self, message: str, offset: int = 0):
        self.offset = offset
        super().__init__(f"byte {offset}: {message}")


@dataclass(frozen=True)
class CorpusItem:
    doc_id: str
    category: str
    position: int
    lemma: str
    gold: frozenset[str]


SystemFn = Callable[[CorpusItem], SenseDistribution]


# ----------------------------------------------------------------------
# normalized corpus TSV

_CATEGORIES = frozenset("ABCDEFGHIJKLMNOPQR")


def load_corpus(stream: IO[str]) -> list[CorpusItem]:
    """Parse the normalized TSV corpus, in file order."""
    items: list[CorpusItem] = []
    seen: dict[tuple[str, int], int] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise CorpusFormatError(
                f"expected 5 tab-separated fields, got {len(fields)}", lineno
            )
        doc_id, category, position_s, lemma, gold_s = fields
        category = category.strip().upper()
        if category not in _CATEGORIES:
            raise CorpusFormatError(
                f"bad category code {fields[1]!r} (expected a letter A-R)", lineno
            )
        try:
            position = int(position_s)
        except ValueError:
            raise CorpusFormatError(
                f"bad token position {position_s!r}", lineno
            ) from None
        key = (doc_id, position)
        if key in seen:
            raise CorpusFormatError(
                f"duplicate (doc, position) {key!r} (first seen on line {seen[key]})",
                lineno,
            )
        seen[key] = lineno
        gold = frozenset(g.strip() for g in gold_s.split(",") if g.strip())
        if not gold:
            raise CorpusFormatError("empty gold field", lineno)
        items.append(
            CorpusItem(
                doc_id=doc_id,
                category=category,
                position=position,
                lemma=lemma.strip().lower(),
                gold=gold,
            )
        )
    return items


def render_corpus_tsv(items: Iterable[CorpusItem]) -> str:
    lines = [
        "\t".join(
            (
                item.doc_id,
                item.category,
                str(item.position),
                item.lemma,
                ",".join(sorted(item.gold)),
            )
        )
        for item in items
    ]
    return "".join(line + "\n" for line in lines)


# ----------------------------------------------------------------------
# Semcor-style tagged file ingestion

_CONTEXT_RE = re.compile(r"<context\s+([^>]*)>")
_WF_RE = re.compile(r"<wf\s+([^>]*)>([^<]*)</wf>")
_DOC_ID_RE = re.compile(r"^br-([a-r])\d+$")


@dataclass(frozen=True)
class RejectedItem:
    doc_id: str
    position: int
    reason: str


@dataclass(frozen=True)
class IngestResult:
    items: list[CorpusItem]
    rejects: list[RejectedItem]


def _parse_attrs(blob: str) -> dict[str, str]:
    attrs = {}
    for chunk in blob.split():
        key, sep, value = chunk.partition("=")
        if sep:
            attrs[key] = value.strip('"')
    return attrs


def ingest_semcor(stream: IO, net: SemanticNetwork) -> IngestResult:
    """Extract gold-annotated noun occurrences from one tagged document.

    Word forms are ``<wf ...>token</wf>`` elements with unquoted attributes;
    a noun is any ``pos`` starting with ``NN``.  The sense number ``wnsn``
    is a 1-based ordinal into the lemma's sense list (``;``-separated when
    the annotator kept several senses).  Occurrences whose annotation does
    not resolve against the lexicon are reported as rejects with a reason.
    """
    data = stream.read()
    text = data.decode("latin-1") if isinstance(data, bytes) else data

    ctx_match = _CONTEXT_RE.search(text)
    if not ctx_match:
        raise SemcorParseError("no <context> element found")
    ctx_attrs = _parse_attrs(ctx_match.group(1))
    doc_id = ctx_attrs.get("filename", "")
    id_match = _DOC_ID_RE.match(doc_id)
    if not id_match:
        raise SemcorParseError(
            f"context filename {doc_id!r} is not a recognizable document id",
            ctx_match.start(),
        )
    category = id_match.group(1).upper()

    items: list[CorpusItem] = []
    rejects: list[RejectedItem] = []
    for position, match in enumerate(_WF_RE.finditer(text)):
        attrs = _parse_attrs(match.group(1))
        pos_tag = attrs.get("pos", "")
        if not pos_tag.startswith("NN"):
            continue
        lemma = attrs.get("lemma", "").lower()
        if not lemma:
            rejects.append(RejectedItem(doc_id, position, "no lemma attribute"))
            continue
        wnsn = attrs.get("wnsn", "")
        ordinals = [tok for tok in wnsn.split(";") if tok]
        if not ordinals or ordinals == ["0"]:
            rejects.append(RejectedItem(doc_id, position, "no sense annotation"))
            continue
        senses = net.senses_of(lemma)
        if not senses:
            rejects.append(
                RejectedItem(doc_id, position, f"lemma {lemma!r} not in lexicon")
            )
            continue
        gold = set()
        bad = None
        for tok in ordinals:
            try:
                ordinal = int(tok)
            except ValueError:
                bad = f"unreadable sense number {tok!r}"
                break
            if ordinal < 1 or ordinal > len(senses):
                bad = (
                    f"sense {ordinal} out of range "
                    f"(lemma {lemma!r} has {len(senses)} senses)"
                )
                break
            gold.add(senses[ordinal - 1])
        if bad:
            rejects.append(RejectedItem(doc_id, position, bad))
            continue
        items.append(
            CorpusItem(
                doc_id=doc_id,
                category=category,
                position=position,
                lemma=lemma,
                gold=frozenset(gold),
            )
        )
    return IngestResult(items=items, rejects=rejects)


def render_rejects_tsv(rejects: Iterable[RejectedItem]) -> str:
    return "".join(
        f"{r.doc_id}\t{r.position}\t{r.reason}\n" for r in rejects
    )


# ----------------------------------------------------------------------
# scoring

def score_item(system: SenseDistribution, gold: frozenset[str]) -> float:
    """Probability mass the system put on the gold senses; abstention is 0."""
    if system.abstained:
        return 0.0
    return sum(score for sense, score in system.entries if sense in gold)


@dataclass(frozen=True)
class CategoryReport:
    items: int
    random_recall: float
    system_recall: float
    improvement_pct: float
    coverage: float


@dataclass(frozen=True)
class EvalReport:
    total_items: int
    score_sum: float
    recall: float
    coverage: float
    random_recall: float
    unresolvable: int
    per_category: tuple[tuple[str, CategoryReport], ...]


def _analytic_random(item: CorpusItem, net: SemanticNetwork) -> float:
    """Expected score of a uniform single-choice system on this item."""
    senses = net.senses_of(item.lemma)
    if not senses:
        return 0.0
    return len(item.gold.intersection(senses)) / len(senses)


def evaluate(
    corpus: Sequence[CorpusItem],
    system: SystemFn,
    net: SemanticNetwork,
) -> EvalReport:
    """Score every item and aggregate recall overall and per category.

    The random column is the analytic expectation (mean gold mass of a
    uniform pick over each item's senses), not a sampled run.  The overall
    score sum is assembled from the per-category sums so the partition
    identity holds exactly.
    """
    per_cat: dict[str, dict[str, list[float] | int]] = {}
    unresolvable = 0
    for item in corpus:
        dist = system(item)
        score = score_item(dist, item.gold)
        bucket = per_cat.setdefault(
            item.category,
            {"scores": [], "randoms": [], "covered": 0},
        )
        bucket["scores"].append(score)
        bucket["randoms"].append(_analytic_random(item, net))
        if not dist.abstained:
            bucket["covered"] += 1
        if not net.senses_of(item.lemma):
            unresolvable += 1

    categories = []
    cat_sums = []
    total_items = 0
    covered_total = 0
    random_sum = 0.0
    for letter in sorted(per_cat):
        bucket = per_cat[letter]
        n = len(bucket["scores"])
        cat_score = math.fsum(bucket["scores"])
        cat_random = math.fsum(bucket["randoms"])
        sys_recall = cat_score / n
        rand_recall = cat_random / n
        improvement = (
            (sys_recall - rand_recall) / rand_recall * 100.0 if rand_recall > 0 else 0.0
        )
        categories.append(
            (
                letter,
                CategoryReport(
                    items=n,
                    random_recall=rand_recall,
                    system_recall=sys_recall,
                    improvement_pct=improvement,
                    coverage=bucket["covered"] / n,
                ),
            )
        )
        cat_sums.append(cat_score)
        total_items += n
        covered_total += bucket["covered"]
        random_sum += cat_random

    score_sum = math.fsum(cat_sums)
    return EvalReport(
        total_items=total_items,
        score_sum=score_sum,
        recall=score_sum / total_items if total_items else 0.0,
        coverage=covered_total / total_items if total_items else 0.0,
        random_recall=random_sum / total_items if total_items else 0.0,
        unresolvable=unresolvable,
        per_category=tuple(categories),
    )


# ----------------------------------------------------------------------
# systems under test

def _documents(corpus: Sequence[CorpusItem]) -> list[list[CorpusItem]]:
    """Group items into documents, positions ascending, doc order preserved."""
    by_doc: dict[str, list[CorpusItem]] = {}
    for item in corpus:
        by_doc.setdefault(item.doc_id, []).append(item)
    return [sorted(items, key=lambda it: it.position) for items in by_doc.values()]


def _thread_map(fn, jobs, threads: int):
    if threads <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def make_density_system(
    corpus: Sequence[CorpusItem],
    cfg: WsdConfig,
    net: SemanticNetwork,
    threads: int = 1,
) -> SystemFn:
    """Precompute density distributions for every corpus occurrence.

    Each document is reconstructed as its annotated noun sequence, so the
    window radius counts exactly the corpus occurrences around the target.
    Documents are independent; ``threads`` > 1 fans them out over a thread
    pool without changing any result.
    """
    ctx = ScoringContext(net, cfg)

    def run_doc(doc_items: list[CorpusItem]):
        doc = [Token(item.lemma, is_noun=True) for item in doc_items]
        results = disambiguate_document(doc, cfg, net, _ctx=ctx)
        return [
            ((item.doc_id, item.position), res.distribution)
            for item, res in zip(doc_items, results)
        ]

    table: dict[tuple[str, int], SenseDistribution] = {}
    for chunk in _thread_map(run_doc, _documents(corpus), threads):
        table.update(chunk)

    def system(item: CorpusItem) -> SenseDistribution:
        dist = table.get((item.doc_id, item.position))
        if dist is None:
            return SenseDistribution(entries=(), abstained=True)
        return dist

    return system


def make_lesk_system(
    corpus: Sequence[CorpusItem],
    cfg: WsdConfig,
    net: SemanticNetwork,
    threads: int = 1,
) -> SystemFn:
    """Gloss-overlap system over the same reconstructed document windows."""

    def run_doc(doc_items: list[CorpusItem]):
        doc = [Token(item.lemma, is_noun=True) for item in doc_items]
        out = []
        for idx, item in enumerate(doc_items):
            window = build_window(doc, idx, cfg.window_radius)
            dist = lesk_score(item.lemma, window, net, fallback=cfg.fallback)
            out.append(((item.doc_id, item.position), dist))
        return out

    table: dict[tuple[str, int], SenseDistribution] = {}
    for chunk in _thread_map(run_doc, _documents(corpus), threads):
        table.update(chunk)

    def system(item: CorpusItem) -> SenseDistribution:
        dist = table.get((item.doc_id, item.position))
        if dist is None:
            return SenseDistribution(entries=(), abstained=True)
        return dist

    return system


def make_first_sense_system(net: SemanticNetwork) -> SystemFn:
    return lambda item: first_sense(item.lemma, net)


def make_random_system(net: SemanticNetwork, seed: int) -> SystemFn:
    """Single seeded stream; items must be presented in a fixed order."""
    rng = random.Random(seed)
    return lambda item: random_sense(item.lemma, net, rng)


def make_system(
    name: str,
    corpus: Sequence[CorpusItem],
    cfg: WsdConfig,
    net: SemanticNetwork,
    seed: int | None = None,
    threads: int = 1,
) -> SystemFn:
    if name == "cd":
        return make_density_system(corpus, cfg, net, threads=threads)
    if name == "lesk":
        return make_lesk_system(corpus, cfg, net, threads=threads)
    if name == "first":
        return make_first_sense_system(net)
    if name == "random":
        if seed is None:
            raise ValueError("the random system requires a seed")
        return make_random_system(net, seed)
    raise ValueError(f"unknown system {name!r}")


# ----------------------------------------------------------------------
# parameter sweeps

SWEEP_AXES = ("relations", "window", "formula", "top-cut", "chain-limit", "weighting")

_RELATION_TOKENS = {rel.value: rel for rel in RelationType}


def parse_relations(text: str) -> frozenset[RelationType]:
    """Parse a relation union like ``hypernym+meronym`` (``,`` also splits)."""
    tokens = [tok for tok in re.split(r"[+,]", text.strip()) if tok]
    rels = set()
    for tok in tokens:
        tok = tok.strip().lower()
        if tok not in _RELATION_TOKENS:
            raise ValueError(
                f"unknown relation {tok!r} (expected one of {sorted(_RELATION_TOKENS)})"
            )
        rels.add(_RELATION_TOKENS[tok])
    if not rels:
        raise ValueError("empty relation list")
    return frozenset(rels)


def relations_label(relations: frozenset[RelationType]) -> str:
    order = [r.value for r in RelationType]
    return "+".join(sorted((r.value for r in relations), key=order.index))


def apply_axis_value(cfg: WsdConfig, axis: str, value) -> tuple[WsdConfig, str]:
    """Return ``cfg`` with one axis replaced, plus the CSV row label."""
    if axis == "relations":
        rels = value if isinstance(value, frozenset) else parse_relations(str(value))
        return replace(cfg, relations=rels), f"relations={relations_label(rels)}"
    if axis == "window":
        radius = int(value)
        return replace(cfg, window_radius=radius), f"window={radius}"
    if axis == "formula":
        kind = value if isinstance(value, FormulaKind) else FormulaKind(str(value).lower())
        formula = DensityFormula(kind=kind, alpha=cfg.formula.alpha)
        return replace(cfg, formula=formula), f"formula={kind.value}"
    if axis == "top-cut":
        cut = int(value)
        return replace(cfg, top_cut=cut), f"top-cut={cut}"
    if axis == "chain-limit":
        limit = int(value)
        return replace(cfg, chain_limit=limit), f"chain-limit={limit}"
    if axis == "weighting":
        weighting = value if isinstance(value, Weighting) else Weighting(str(value).lower())
        return replace(cfg, weighting=weighting), f"weighting={weighting.value}"
    raise ValueError(f"unknown sweep axis {axis!r} (expected one of {SWEEP_AXES})")


@dataclass(frozen=True)
class SweepRow:
    label: str
    recall: float
    coverage: float


def sweep(
    corpus: Sequence[CorpusItem],
    net: SemanticNetwork,
    base_cfg: WsdConfig,
    axes: Mapping[str, Sequence],
    threads: int = 1,
) -> dict[str, list[SweepRow]]:
    """Evaluate the density system varying one parameter axis at a time.

    Rows keep the order the values were given, so reports are reproducible
    verbatim.
    """
    reports: dict[str, list[SweepRow]] = {}
    for axis, values in axes.items():
        rows = []
        for value in values:
            cfg, label = apply_axis_value(base_cfg, axis, value)
            system = make_density_system(corpus, cfg, net, threads=threads)
            report = evaluate(corpus, system, net)
            rows.append(
                SweepRow(label=label, recall=report.recall, coverage=report.coverage)
            )
        reports[axis] = rows
    return reports


# ----------------------------------------------------------------------
# CSV rendering (UTF-8, comma separated, header row, 4 decimal places)

def _fmt(x: float) -> str:
    return f"{x:.4f}"


def render_evaluation_csv(report: EvalReport) -> str:
    lines = ["category,items,random_recall,system_recall,improvement_pct,coverage"]
    for letter, cat in report.per_category:
        lines.append(
            ",".join(
                (
                    letter,
                    str(cat.items),
                    _fmt(cat.random_recall),
                    _fmt(cat.system_recall),
                    _fmt(cat.improvement_pct),
                    _fmt(cat.coverage),
                )
            )
        )
    overall_improvement = (
        (report.recall - report.random_recall) / report.random_recall * 100.0
        if report.random_recall > 0
        else 0.0
    )
    lines.append(
        ",".join(
            (
                "OVERALL",
                str(report.total_items),
                _fmt(report.random_recall),
                _fmt(report.recall),
                _fmt(overall_improvement),
                _fmt(report.coverage),
            )
        )
    )
    return "".join(line + "\n" for line in lines)


def render_sweep_csv(rows: Sequence[SweepRow]) -> str:
    lines = ["config,recall,coverage"]
    for row in rows:
        lines.append(",".join((row.label, _fmt(row.recall), _fmt(row.coverage))))
    return "".join(line + "\n" for line in lines)
