"""Command-line entry point.

Exit codes are a stable scripting contract: 0 success, 1 usage error,
2 data error, 3 adapter error.
"""
from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path

import click

from .config import _policy_actions, load_config
from .corpus import (
    load_tweets,
    read_annotations,
    read_detections,
    write_annotations,
    write_detections,
    write_masked,
    write_tweets,
)
from .evaluation import evaluate_corpus
from .model import AdapterError, ConfigError, DataError, NightjarError
from .pipeline import run_detect, run_mask
from .synth import DEFAULT_VERIFIED_RATE, generate_synthetic_corpus, parse_rates

_config_option = click.option(
    "--config", "config_path", envvar="NIGHTJAR_CONFIG", default=None,
    type=click.Path(exists=True, dir_okay=False),
    help="INI config file (default: $NIGHTJAR_CONFIG).")
_jobs_option = click.option(
    "--jobs", default=1, show_default=True,
    help="Worker processes; output is byte-identical for any value.")


@click.group()
def cli() -> None:
    """De-identification toolkit for short social-media texts."""


@cli.command("detect")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Tweet corpus (NDJSON).")
@_config_option
@click.option("--recognizers", default=None,
              help="Comma list: builtin and/or external:CMD.")
@click.option("--output", "output_path", required=True,
              type=click.Path(dir_okay=False))
@_jobs_option
def cmd_detect(input_path: str, config_path: str | None,
               recognizers: str | None, output_path: str, jobs: int) -> None:
    """Detect identifiable spans and write resolved detections."""
    config = load_config(config_path)
    if recognizers is not None:
        config = replace(config, recognizer_specs=tuple(
            s.strip() for s in recognizers.split(",") if s.strip()))
    config.recognizers()  # fail fast on unknown recognizer names
    with open(input_path, encoding="utf-8") as fh:
        tweets = load_tweets(fh)
    ordered = sorted(tweets.values(), key=lambda t: t.id)
    detections = run_detect(ordered, config, jobs=jobs)
    with open(output_path, "w", encoding="utf-8") as out:
        write_detections(detections, out)
    click.echo(f"detected spans in {len(ordered)} tweets -> {output_path}")


@cli.command("mask")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@_config_option
@click.option("--seed", default=None, type=int,
              help="Masking seed (overrides config).")
@click.option("--policy", "policy_name", default=None,
              type=click.Choice(["default", "placeholder", "synthetic",
                                 "delete"]),
              help="Replacement policy (overrides config).")
@click.option("--output", "output_path", required=True,
              type=click.Path(dir_okay=False))
@_jobs_option
def cmd_mask(input_path: str, config_path: str | None, seed: int | None,
             policy_name: str | None, output_path: str, jobs: int) -> None:
    """De-identify a corpus and write masked tweets with their edits."""
    config = load_config(config_path)
    if seed is not None:
        config = replace(config, seed=seed)
    if policy_name is not None:
        config = replace(config, policy_name=policy_name,
                         actions=_policy_actions(policy_name))
    with open(input_path, encoding="utf-8") as fh:
        tweets = load_tweets(fh)
    ordered = sorted(tweets.values(), key=lambda t: t.id)
    masked = run_mask(ordered, config, jobs=jobs)
    with open(output_path, "w", encoding="utf-8") as out:
        write_masked(masked, out)
    click.echo(f"masked {len(masked)} tweets -> {output_path}")


@cli.command("evaluate")
@click.option("--gold", "gold_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Gold annotations (NDJSON standoff with inline text).")
@click.option("--pred", "pred_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Predicted detections (same standoff schema).")
@click.option("--report", "report_path", default=None,
              type=click.Path(dir_okay=False),
              help="Write the report as JSON here.")
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Render metric figures next to the report.")
def cmd_evaluate(gold_path: str, pred_path: str, report_path: str | None,
                 figures: bool) -> None:
    """Score predictions against gold annotations and print the table."""
    with open(gold_path, encoding="utf-8") as fh:
        gold = list(read_annotations(fh))
    tweets_by_id = {a.tweet.id: a.tweet for a in gold}
    with open(pred_path, encoding="utf-8") as fh:
        predictions = read_detections(fh, tweets_by_id)
    report = evaluate_corpus(gold, predictions)
    click.echo(report.format_table())
    if report_path:
        import json
        path = Path(report_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report.to_json_dict(), indent=2) + "\n",
                        encoding="utf-8")
        click.echo(f"report -> {report_path}")
        if figures:
            from .figures import save_metrics_figures
            written = save_metrics_figures(report, path.parent / "figures")
            for figure_path in written:
                click.echo(f"figure -> {figure_path}")


@cli.command("synth")
@click.option("--seed", default=1, show_default=True, type=int)
@click.option("--n", default=100, show_default=True, type=int)
@click.option("--rates", default=None,
              help="Per-label injection rates, e.g. URL=0.5,PHONE=0.2.")
@click.option("--verified-rate", default=DEFAULT_VERIFIED_RATE,
              show_default=True, type=float)
@click.option("--out-tweets", "tweets_path", required=True,
              type=click.Path(dir_okay=False))
@click.option("--out-gold", "gold_path", required=True,
              type=click.Path(dir_okay=False))
def cmd_synth(seed: int, n: int, rates: str | None, verified_rate: float,
              tweets_path: str, gold_path: str) -> None:
    """Generate a synthetic gold-labeled corpus."""
    rate_map = parse_rates(rates) if rates else None
    tweets, annotated = generate_synthetic_corpus(
        seed, n, rates=rate_map, verified_rate=verified_rate)
    with open(tweets_path, "w", encoding="utf-8") as out:
        write_tweets(tweets, out)
    with open(gold_path, "w", encoding="utf-8") as out:
        write_annotations(annotated, out)
    click.echo(f"wrote {len(tweets)} tweets -> {tweets_path}, "
               f"gold -> {gold_path}")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except AdapterError as exc:
        click.echo(f"adapter error: {exc}", err=True)
        return 3
    except (DataError, NightjarError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
