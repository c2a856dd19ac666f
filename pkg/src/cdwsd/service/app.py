"""FastAPI application exposing the disambiguation service.

The lexicon is loaded once at application creation and shared read-only by
every request; loading is the only single-threaded phase.  Run it with::

    cdwsd serve --lexicon /path/to/wordnet --port 8000

or programmatically via :func:`create_app`.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..disambiguator import UnknownWordError
from ..evaluation import CorpusFormatError, SemcorParseError
from ..lexicon import LexiconError
from . import handlers, models


def create_app(
    lexicon_path: str | None = None, lexicon_format: str = "auto"
) -> FastAPI:
    app = FastAPI(title="cdwsd", version=__version__)

    path = lexicon_path or os.environ.get("CDWSD_LEXICON")
    state = handlers.load_state(path, fmt=lexicon_format) if path else None

    def require_state() -> handlers.ServiceState:
        if state is None:
            raise HTTPException(
                status_code=503,
                detail="no lexicon loaded; start the service with --lexicon",
            )
        return state

    @app.get("/health", response_model=models.HealthResponse)
    def health() -> models.HealthResponse:
        return models.HealthResponse(
            status="ok",
            version=__version__,
            lexicon=handlers.lexicon_info(state) if state else None,
        )

    @app.get("/lexicon", response_model=models.LexiconInfo)
    def lexicon() -> models.LexiconInfo:
        return handlers.lexicon_info(require_state())

    @app.post("/senses", response_model=models.SensesResponse)
    def senses(req: models.SensesRequest) -> models.SensesResponse:
        return handlers.get_senses(require_state(), req)

    @app.post("/disambiguate", response_model=models.DisambiguateResponse)
    def disambiguate(req: models.DisambiguateRequest) -> models.DisambiguateResponse:
        try:
            return handlers.disambiguate(require_state(), req)
        except UnknownWordError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/evaluate", response_model=models.EvaluateResponse)
    def evaluate(req: models.EvaluateRequest) -> models.EvaluateResponse:
        try:
            return handlers.run_evaluate(require_state(), req)
        except FileNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except (CorpusFormatError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/sweep", response_model=models.SweepResponse)
    def sweep(req: models.SweepRequest) -> models.SweepResponse:
        try:
            return handlers.run_sweep(require_state(), req)
        except FileNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except (CorpusFormatError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/ingest", response_model=models.IngestResponse)
    def ingest(req: models.IngestRequest) -> models.IngestResponse:
        try:
            return handlers.run_ingest(require_state(), req)
        except NotADirectoryError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except (SemcorParseError, LexiconError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    return app
