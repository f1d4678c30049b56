"""`stageseat` maintenance CLI: serve, fixtures, seed, sentiment."""

from __future__ import annotations

import sys

import click

from . import sentiment as sentiment_mod
from .config import ServerConfig
from .db import Database
from .seed import seed_database


@click.group()
def main():
    """Movie ticketing service utilities."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="JSON config file")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--db", "db_path", default=None, help="sqlite database path")
def serve(config_path, host, port, db_path):
    """Run the HTTP API."""
    import uvicorn

    from .api import create_app

    cfg = ServerConfig.load(config_path)
    if host:
        cfg.host = host
    if port:
        cfg.port = port
    if db_path:
        cfg.database_path = db_path
    app = create_app(cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")


@main.group()
def fixtures():
    """Export/import the store as JSON-lines fixtures."""


@fixtures.command("export")
@click.argument("path")
@click.option("--db", "db_path", default="stageseat.db")
def fixtures_export(path, db_path):
    Database(db_path).export_fixtures(path)
    click.echo(f"exported to {path}")


@fixtures.command("import")
@click.argument("path")
@click.option("--db", "db_path", default="stageseat.db")
def fixtures_import(path, db_path):
    counts = Database(db_path).import_fixtures(path)
    for kind, n in counts.items():
        click.echo(f"{kind}: {n}")


@main.command()
@click.option("--movies", type=int, default=20)
@click.option("--venues", type=int, default=4)
@click.option("--seed", "seed_value", type=int, default=42)
@click.option("--db", "db_path", default="stageseat.db")
def seed(movies, venues, seed_value, db_path):
    """Generate a deterministic demo dataset."""
    db = Database(db_path)
    if not db.is_empty():
        raise click.ClickException("refusing to seed a non-empty store")
    counts = seed_database(db, movies=movies, venues=venues, seed=seed_value)
    for kind, n in counts.items():
        click.echo(f"{kind}: {n}")


@main.group()
def sentiment():
    """Sentiment scoring utilities."""


@sentiment.command("score")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True),
              default=None, help="TSV lexicon (default: packaged seed)")
@click.option("--text", default=None)
@click.option("--stdin", "use_stdin", is_flag=True,
              help="score each stdin line")
def sentiment_score(lexicon_path, text, use_stdin):
    """Print `compound<TAB>label` per input line."""
    if lexicon_path:
        with open(lexicon_path, "rb") as fh:
            lex = sentiment_mod.load_lexicon(fh)
    else:
        lex = sentiment_mod.load_seed_lexicon()
    if text is None and not use_stdin:
        raise click.UsageError("provide --text or --stdin")
    lines = [text] if text is not None else (l.rstrip("\n") for l in sys.stdin)
    for line in lines:
        score = sentiment_mod.score_text(lex, line)
        click.echo(f"{score.compound:.4f}\t{score.label}")


if __name__ == "__main__":
    main()
