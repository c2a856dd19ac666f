"""Service operations shared by the HTTP endpoints and the CLI.

Each handler takes the loaded lexicon state plus a request model and returns
a response model.  Handlers never write files: report content (CSV, TSV,
manifest) is returned to the caller, which decides where to persist it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .. import baselines
from ..disambiguator import (
    ScoringContext,
    SenseDistribution,
    Token,
    UnknownWordError,
    build_window,
    collect_marks,
    explain_senses,
    score_senses,
)
from ..evaluation import (
    SWEEP_AXES,
    evaluate,
    ingest_semcor,
    load_corpus,
    make_system,
    render_corpus_tsv,
    render_evaluation_csv,
    render_rejects_tsv,
    render_sweep_csv,
    sweep,
)
from ..lexicon import SemanticNetwork, load_lexicon
from ..manifest import build_manifest
from . import models


def threads_from_env() -> int:
    """Worker cap from ``CDWSD_THREADS``: unset = 1, 0 = auto."""
    raw = os.environ.get("CDWSD_THREADS", "").strip()
    if not raw:
        return 1
    count = int(raw)
    if count < 0:
        raise ValueError("CDWSD_THREADS must be >= 0")
    if count == 0:
        return os.cpu_count() or 1
    return count


@dataclass
class ServiceState:
    net: SemanticNetwork
    lexicon_path: str
    lexicon_format: str
    input_files: list[str]  # concrete files backing the lexicon, for digests


def load_state(path: str, fmt: str = "auto") -> ServiceState:
    p = Path(path)
    net = load_lexicon(p, fmt=fmt)
    if p.is_dir() or p.name == "data.noun":
        data = p / "data.noun" if p.is_dir() else p
        inputs = [str(data), str(data.with_name("index.noun"))]
        resolved = "wndb"
    else:
        inputs = [str(p)]
        resolved = "compact"
    return ServiceState(
        net=net, lexicon_path=str(p), lexicon_format=resolved, input_files=inputs
    )


def lexicon_info(state: ServiceState) -> models.LexiconInfo:
    return models.LexiconInfo(
        path=state.lexicon_path,
        format=state.lexicon_format,
        synsets=len(state.net),
        words=sum(1 for _ in state.net.words()),
        roots=len(state.net.roots),
    )


def get_senses(state: ServiceState, req: models.SensesRequest) -> models.SensesResponse:
    net = state.net
    lemma = req.lemma.strip().lower()
    senses = [
        models.SenseInfo(
            id=cid,
            lemmas=list(net.synset(cid).lemmas),
            gloss=net.synset(cid).gloss,
        )
        for cid in net.senses_of(lemma)
    ]
    return models.SensesResponse(lemma=lemma, senses=senses)


def _context_document(word: str, context: list[str]) -> tuple[list[Token], int]:
    """Target inserted mid-context; every supplied word counts as a noun."""
    lemmas = [tok.strip().lower() for tok in context if tok.strip()]
    target_at = len(lemmas) // 2
    doc = [Token(lemma) for lemma in lemmas]
    doc.insert(target_at, Token(word.strip().lower()))
    return doc, target_at


def disambiguate(
    state: ServiceState, req: models.DisambiguateRequest
) -> models.DisambiguateResponse:
    net = state.net
    word = req.word.strip().lower()
    if not net.senses_of(word):
        raise UnknownWordError(f"unknown word {word!r}")
    cfg = req.config.to_core()
    doc, target_at = _context_document(word, req.context)
    window = build_window(doc, target_at, cfg.window_radius)

    supports: dict[str, str | None] = {}
    if req.system == "cd":
        marks = collect_marks(window, cfg, net)
        for sense, _, winner in explain_senses(word, marks, cfg, net):
            supports[sense] = winner
        dist = score_senses(word, marks, cfg, net)
    elif req.system == "first":
        dist = baselines.first_sense(word, net)
    elif req.system == "random":
        if req.seed is None:
            raise ValueError("the random system requires a seed")
        dist = baselines.random_sense(word, net, req.seed)
    elif req.system == "lesk":
        dist = baselines.lesk_score(word, window, net, fallback=cfg.fallback)
    else:
        raise ValueError(f"unknown system {req.system!r}")

    best = dist.best()
    return models.DisambiguateResponse(
        word=word,
        system=req.system,
        abstained=dist.abstained,
        scores=[
            models.SenseScore(sense=sense, score=score, support=supports.get(sense))
            for sense, score in dist.entries
        ],
        best=best[0] if best else None,
    )


def _report_model(report) -> models.EvalReportModel:
    return models.EvalReportModel(
        total_items=report.total_items,
        recall=report.recall,
        coverage=report.coverage,
        random_recall=report.random_recall,
        unresolvable=report.unresolvable,
        categories=[
            models.CategoryRow(
                category=letter,
                items=cat.items,
                random_recall=cat.random_recall,
                system_recall=cat.system_recall,
                improvement_pct=cat.improvement_pct,
                coverage=cat.coverage,
            )
            for letter, cat in report.per_category
        ],
    )


def run_evaluate(
    state: ServiceState, req: models.EvaluateRequest
) -> models.EvaluateResponse:
    if req.system == "random" and req.seed is None:
        raise ValueError("the random system requires a seed")
    if req.system != "random" and req.seed is not None:
        raise ValueError("--seed only applies to the random system")
    with open(req.corpus, "r", encoding="utf-8") as fh:
        corpus = load_corpus(fh)
    cfg = req.config.to_core()
    system = make_system(
        req.system, corpus, cfg, state.net, seed=req.seed, threads=threads_from_env()
    )
    report = evaluate(corpus, system, state.net)
    manifest = build_manifest(
        command="evaluate",
        config={
            "system": req.system,
            "seed": req.seed,
            "corpus": str(req.corpus),
            "lexicon": state.lexicon_path,
            **req.config.model_dump(),
        },
        inputs=[req.corpus, *state.input_files],
    )
    return models.EvaluateResponse(
        report=_report_model(report),
        csv=render_evaluation_csv(report),
        manifest=manifest,
    )


def run_sweep(state: ServiceState, req: models.SweepRequest) -> models.SweepResponse:
    if not req.axes:
        raise ValueError("at least one sweep axis is required")
    for axis in req.axes:
        if axis.axis not in SWEEP_AXES:
            raise ValueError(
                f"unknown sweep axis {axis.axis!r} (expected one of {SWEEP_AXES})"
            )
        if not axis.values:
            raise ValueError(f"axis {axis.axis!r} has an empty value list")
    with open(req.corpus, "r", encoding="utf-8") as fh:
        corpus = load_corpus(fh)
    cfg = req.config.to_core()
    axes = {axis.axis: axis.values for axis in req.axes}
    results = sweep(corpus, state.net, cfg, axes, threads=threads_from_env())
    reports = [
        models.SweepAxisReport(
            axis=axis,
            rows=[
                {"config": row.label, "recall": row.recall, "coverage": row.coverage}
                for row in rows
            ],
            csv=render_sweep_csv(rows),
        )
        for axis, rows in results.items()
    ]
    manifest = build_manifest(
        command="sweep",
        config={
            "axes": {axis.axis: list(axis.values) for axis in req.axes},
            "corpus": str(req.corpus),
            "lexicon": state.lexicon_path,
            **req.config.model_dump(),
        },
        inputs=[req.corpus, *state.input_files],
    )
    return models.SweepResponse(reports=reports, manifest=manifest)


def run_ingest(state: ServiceState, req: models.IngestRequest) -> models.IngestResponse:
    root = Path(req.semcor_dir)
    if not root.is_dir():
        raise NotADirectoryError(f"{root} is not a readable directory")
    files = sorted(
        p for p in root.rglob("*") if p.is_file() and p.name.startswith("br-")
    )
    items = []
    rejects = []
    docs = set()
    for path in files:
        with open(path, "rb") as fh:
            result = ingest_semcor(fh, state.net)
        items.extend(result.items)
        rejects.extend(result.rejects)
        docs.update(item.doc_id for item in result.items)
    return models.IngestResponse(
        items=len(items),
        rejects=len(rejects),
        docs=len(docs),
        tsv=render_corpus_tsv(items),
        rejects_tsv=render_rejects_tsv(rejects),
    )
