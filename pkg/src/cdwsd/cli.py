"""Command-line front end.

Every command is a thin client of the service layer: flags are packed into
the same pydantic request models the HTTP endpoints accept, the shared
handlers do the work, and the CLI persists the returned report content
(atomically, with a manifest next to every report).

Exit codes: 0 success, 1 environment or I/O failure, 2 usage or domain
error (unknown word, bad axis, conflicting flags).
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import __version__
from .disambiguator import UnknownWordError
from .evaluation import CorpusFormatError, SemcorParseError
from .lexicon import LexiconError
from .manifest import atomic_write_text, manifest_path_for, write_manifest
from .service import handlers, models


class DomainError(click.ClickException):
    """Domain-level misuse; exits with the usage code."""

    exit_code = 2


def _load_state(path: str, fmt: str) -> handlers.ServiceState:
    try:
        return handlers.load_state(path, fmt=fmt)
    except (LexiconError, FileNotFoundError, OSError) as exc:
        raise click.ClickException(f"cannot load lexicon: {exc}") from exc


def _config_options(fn):
    options = [
        click.option(
            "--formula",
            type=click.Choice(["ar", "sar", "sdf", "lf"]),
            default="ar",
            show_default=True,
            help="Density formula.",
        ),
        click.option(
            "--alpha",
            type=float,
            default=0.2,
            show_default=True,
            help="Damping exponent used by the sar formula.",
        ),
        click.option(
            "--window",
            type=click.IntRange(min=0),
            default=150,
            show_default=True,
            help="Window radius, counted in noun tokens per side.",
        ),
        click.option(
            "--relations",
            default="hypernym",
            show_default=True,
            help="Relation union, e.g. 'hypernym' or 'hypernym+meronym'.",
        ),
        click.option(
            "--weighting",
            type=click.Choice(["synsets", "fractional", "words"]),
            default="words",
            show_default=True,
            help="Mark weighting scheme.",
        ),
        click.option(
            "--chain-limit",
            type=click.IntRange(min=0),
            default=2,
            show_default=True,
            help="Maximum relation steps a mark may travel (0 = unlimited).",
        ),
        click.option(
            "--top-cut",
            type=click.IntRange(min=0),
            default=0,
            show_default=True,
            help="Number of uppermost hierarchy levels to exclude (0 = none).",
        ),
        click.option(
            "--fallback",
            type=click.Choice(["uniform", "abstain"]),
            default="uniform",
            show_default=True,
            help="Policy when every sense scores zero.",
        ),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _config_model(formula, alpha, window, relations, weighting, chain_limit, top_cut, fallback):
    try:
        model = models.WsdConfigModel(
            relations=relations,
            formula=formula,
            alpha=alpha,
            window=window,
            top_cut=top_cut,
            chain_limit=chain_limit,
            weighting=weighting,
            fallback=fallback,
        )
        model.to_core()  # validate eagerly (relation names, alpha > 0)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    return model


_lexicon_option = click.option(
    "--lexicon",
    required=True,
    type=click.Path(exists=True),
    help="Lexicon path: a WordNet database directory (or its data.noun) "
    "or a compact-format file.",
)
_lexicon_format_option = click.option(
    "--lexicon-format",
    type=click.Choice(["auto", "wndb", "compact"]),
    default="auto",
    show_default=True,
)


@click.group()
@click.version_option(version=__version__, prog_name="cdwsd")
def main():
    """Conceptual-density word sense disambiguation toolkit."""


@main.command()
@_lexicon_option
@_lexicon_format_option
@click.option("--word", required=True, help="Target noun lemma.")
@click.option(
    "--context",
    default="",
    help="Space-separated context nouns; the full context forms the window.",
)
@click.option(
    "--system",
    type=click.Choice(["cd", "first", "random", "lesk"]),
    default="cd",
    show_default=True,
)
@click.option("--seed", type=int, default=None, help="Seed for --system random.")
@_config_options
def disambiguate(lexicon, lexicon_format, word, context, system, seed, **cfg_flags):
    """Rank the senses of one word occurrence and print them, best first."""
    if seed is not None and system != "random":
        raise click.UsageError("--seed only applies to --system random")
    if seed is None and system == "random":
        raise click.UsageError("--system random requires --seed")
    state = _load_state(lexicon, lexicon_format)
    request = models.DisambiguateRequest(
        word=word,
        context=context.split(),
        system=system,
        seed=seed,
        config=_config_model(**cfg_flags),
    )
    try:
        response = handlers.disambiguate(state, request)
    except UnknownWordError as exc:
        raise DomainError(str(exc)) from exc
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    if response.abstained:
        click.echo("abstained")
        return
    ranked = sorted(
        response.scores, key=lambda s: (-s.score, [e.sense for e in response.scores].index(s.sense))
    )
    for entry in ranked:
        line = f"{entry.sense}\t{entry.score:.4f}"
        if entry.support:
            line += f"\t{entry.support}"
        click.echo(line)


@main.command()
@_lexicon_option
@_lexicon_format_option
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option(
    "--system",
    type=click.Choice(["cd", "lesk", "random", "first"]),
    default="cd",
    show_default=True,
)
@click.option("--seed", type=int, default=None, help="Seed for --system random.")
@click.option(
    "--out",
    type=click.Path(),
    default="evaluate.csv",
    show_default=True,
    help="Report CSV path; the manifest lands next to it.",
)
@_config_options
def evaluate(lexicon, lexicon_format, corpus, system, seed, out, **cfg_flags):
    """Score a system against a corpus; write the recall CSV and manifest."""
    if seed is not None and system != "random":
        raise click.UsageError("--seed only applies to --system random")
    if seed is None and system == "random":
        raise click.UsageError("--system random requires --seed")
    state = _load_state(lexicon, lexicon_format)
    request = models.EvaluateRequest(
        corpus=corpus,
        system=system,
        seed=seed,
        config=_config_model(**cfg_flags),
    )
    try:
        response = handlers.run_evaluate(state, request)
    except CorpusFormatError as exc:
        raise click.ClickException(f"bad corpus: {exc}") from exc
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    atomic_write_text(out, response.csv)
    write_manifest(manifest_path_for(out), response.manifest)
    report = response.report
    click.echo(
        f"items={report.total_items} recall={report.recall:.4f} "
        f"coverage={report.coverage:.4f} unresolvable={report.unresolvable} "
        f"-> {out}"
    )


@main.command()
@_lexicon_option
@_lexicon_format_option
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option(
    "--axis",
    "axes",
    multiple=True,
    required=True,
    type=click.Choice(list(handlers.SWEEP_AXES)),
    help="Sweep axis; repeatable, paired with --values in order.",
)
@click.option(
    "--values",
    "values_lists",
    multiple=True,
    required=True,
    help="Comma-separated values for the matching --axis.",
)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False),
    default=".",
    show_default=True,
    help="Directory receiving sweep_<axis>.csv files and the manifest.",
)
@_config_options
def sweep(lexicon, lexicon_format, corpus, axes, values_lists, out_dir, **cfg_flags):
    """Evaluate the density system across parameter values, one CSV per axis."""
    if len(axes) != len(values_lists):
        raise click.UsageError("each --axis needs a matching --values list")
    sweep_axes = []
    for axis, values_s in zip(axes, values_lists):
        values = [v.strip() for v in values_s.split(",") if v.strip()]
        if not values:
            raise click.UsageError(f"axis {axis!r}: empty value list")
        sweep_axes.append(models.SweepAxis(axis=axis, values=values))
    state = _load_state(lexicon, lexicon_format)
    request = models.SweepRequest(
        corpus=corpus,
        axes=sweep_axes,
        config=_config_model(**cfg_flags),
    )
    try:
        response = handlers.run_sweep(state, request)
    except CorpusFormatError as exc:
        raise click.ClickException(f"bad corpus: {exc}") from exc
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    out = Path(out_dir)
    for axis_report in response.reports:
        path = out / f"sweep_{axis_report.axis}.csv"
        atomic_write_text(path, axis_report.csv)
        click.echo(f"{axis_report.axis}: {len(axis_report.rows)} rows -> {path}")
    write_manifest(out / "sweep.manifest.json", response.manifest)


@main.command()
@_lexicon_option
@_lexicon_format_option
@click.option(
    "--semcor",
    "semcor_dir",
    required=True,
    type=click.Path(exists=True, file_okay=False),
    help="Directory of tagged documents (files named br-*).",
)
@click.option("--out", required=True, type=click.Path())
def ingest(lexicon, lexicon_format, semcor_dir, out):
    """Normalize tagged documents into the corpus TSV plus a reject log."""
    state = _load_state(lexicon, lexicon_format)
    request = models.IngestRequest(semcor_dir=semcor_dir)
    try:
        response = handlers.run_ingest(state, request)
    except (SemcorParseError, NotADirectoryError, OSError) as exc:
        raise click.ClickException(str(exc)) from exc
    atomic_write_text(out, response.tsv)
    rejects_path = Path(out).with_name(Path(out).name + ".rejects.tsv")
    atomic_write_text(rejects_path, response.rejects_tsv)
    click.echo(
        f"{response.items} items, {response.rejects} rejects, "
        f"{response.docs} docs -> {out}"
    )


@main.command()
@_lexicon_option
@_lexicon_format_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(lexicon, lexicon_format, host, port):
    """Run the HTTP service with the lexicon loaded once at startup."""
    import uvicorn

    from .service import create_app

    app = create_app(lexicon_path=lexicon, lexicon_format=lexicon_format)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
