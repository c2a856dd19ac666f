"""Pydantic request/response models for the HTTP service and the CLI.

The CLI builds these same models and calls the service handlers in process,
so both front ends share one typed contract.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..density import DensityFormula, FormulaKind
from ..disambiguator import Fallback, Weighting, WsdConfig
from ..evaluation import parse_relations, relations_label


class WsdConfigModel(BaseModel):
    """Wire form of :class:`cdwsd.WsdConfig`; defaults are the best config."""

    relations: str = "hypernym"
    formula: str = "ar"
    alpha: float = 0.2
    window: int = Field(default=150, ge=0)
    top_cut: int = Field(default=0, ge=0)
    chain_limit: int = Field(default=2, ge=0)
    weighting: str = "words"
    fallback: str = "uniform"

    def to_core(self) -> WsdConfig:
        return WsdConfig(
            relations=parse_relations(self.relations),
            formula=DensityFormula(kind=FormulaKind(self.formula), alpha=self.alpha),
            window_radius=self.window,
            top_cut=self.top_cut,
            chain_limit=self.chain_limit,
            weighting=Weighting(self.weighting),
            fallback=Fallback(self.fallback),
        )

    @classmethod
    def from_core(cls, cfg: WsdConfig) -> "WsdConfigModel":
        return cls(
            relations=relations_label(cfg.relations),
            formula=cfg.formula.kind.value,
            alpha=cfg.formula.alpha,
            window=cfg.window_radius,
            top_cut=cfg.top_cut,
            chain_limit=cfg.chain_limit,
            weighting=cfg.weighting.value,
            fallback=cfg.fallback.value,
        )


class LexiconInfo(BaseModel):
    path: str
    format: str
    synsets: int
    words: int
    roots: int


class HealthResponse(BaseModel):
    status: str
    version: str
    lexicon: LexiconInfo | None = None


class SenseInfo(BaseModel):
    id: str
    lemmas: list[str]
    gloss: str


class SensesRequest(BaseModel):
    lemma: str


class SensesResponse(BaseModel):
    lemma: str
    senses: list[SenseInfo]


class SenseScore(BaseModel):
    sense: str
    score: float
    support: str | None = None  # concept whose density produced the score


class DisambiguateRequest(BaseModel):
    word: str
    context: list[str] = Field(default_factory=list)
    system: str = "cd"  # cd | first | random | lesk
    seed: int | None = None
    config: WsdConfigModel = Field(default_factory=WsdConfigModel)


class DisambiguateResponse(BaseModel):
    word: str
    system: str
    abstained: bool
    scores: list[SenseScore]  # source sense order
    best: str | None = None


class CategoryRow(BaseModel):
    category: str
    items: int
    random_recall: float
    system_recall: float
    improvement_pct: float
    coverage: float


class EvalReportModel(BaseModel):
    total_items: int
    recall: float
    coverage: float
    random_recall: float
    unresolvable: int
    categories: list[CategoryRow]


class EvaluateRequest(BaseModel):
    corpus: str  # path to a normalized corpus TSV
    system: str = "cd"
    seed: int | None = None
    config: WsdConfigModel = Field(default_factory=WsdConfigModel)


class EvaluateResponse(BaseModel):
    report: EvalReportModel
    csv: str
    manifest: dict


class SweepAxis(BaseModel):
    axis: str
    values: list[str]


class SweepAxisReport(BaseModel):
    axis: str
    rows: list[dict]
    csv: str


class SweepRequest(BaseModel):
    corpus: str
    axes: list[SweepAxis]
    config: WsdConfigModel = Field(default_factory=WsdConfigModel)


class SweepResponse(BaseModel):
    reports: list[SweepAxisReport]
    manifest: dict


class IngestRequest(BaseModel):
    semcor_dir: str


class IngestResponse(BaseModel):
    items: int
    rejects: int
    docs: int
    tsv: str
    rejects_tsv: str
