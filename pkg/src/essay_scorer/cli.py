"""Command-line interface.

Subcommands: stats, features extract, train, eval, cv, qwk, pos-tag.
A flat key=value config file may supply any flag's value; explicit
command-line flags win.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import cv as cvmod
from .data import dataset_stats, load_dataset
from .features import (
    DEFAULT_REGISTRY,
    apply_normalization,
    assemble,
    fit_normalization,
)
from .metrics import ASAP_PROMPTS, PromptMeta, quadratic_weighted_kappa
from .model import load_checkpoint, save_checkpoint
from .textproc import preprocess, read_pretagged, write_pretagged

log = logging.getLogger("essay_scorer")


def _read_config_file(path):
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise click.ClickException(f"{path}:{lineno}: expected key=value")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve(cli_value, key, file_config, default, cast=str):
    if cli_value is not None:
        return cli_value
    if key in file_config:
        raw = file_config[key]
        if cast is bool:
            return raw.lower() in ("1", "true", "on", "yes")
        return cast(raw)
    return default


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _build_run_config(file_config, *, mode, features, seed, epochs, batch,
                      subsample) -> cvmod.RunConfig:
    return cvmod.RunConfig(
        mode=_resolve(mode, "mode", file_config, "pos"),
        use_features=_resolve(
            None if features is None else features == "on",
            "features", file_config, True, bool,
        ),
        seed=_resolve(seed, "seed", file_config, 42, int),
        epochs=_resolve(epochs, "epochs", file_config, 60, int),
        batch_size=_resolve(batch, "batch", file_config, 16, int),
        subsample=_resolve(subsample, "subsample", file_config, 1.0, float),
    )


def _run_options(fn):
    for option in reversed([
        click.option("--data", type=click.Path(exists=True), default=None),
        click.option("--mode", type=click.Choice(["pos", "word", "none"]), default=None),
        click.option("--features", type=click.Choice(["on", "off"]), default=None),
        click.option("--seed", type=int, default=None),
        click.option("--epochs", type=int, default=None),
        click.option("--batch", type=int, default=None),
        click.option("--subsample", type=float, default=None),
        click.option("--out", type=click.Path(), default=None),
        click.option("--config", "config_path", type=click.Path(exists=True), default=None),
    ]):
        fn = option(fn)
    return fn


def _require_data(data, file_config):
    data = _resolve(data, "data", file_config, None)
    if data is None:
        raise click.ClickException("--data is required (flag or config file)")
    return data


def _write_run_log(out_dir: Path, config: cvmod.RunConfig, data_path):
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "config": config.to_dict(),
        "data": str(data_path),
        "data_sha256": _sha256(data_path),
    }
    (out_dir / "run.json").write_text(json.dumps(payload, indent=2) + "\n")


def _write_fold_outputs(out_dir: Path, artifacts, result, config):
    prompt = result.target_prompt
    save_checkpoint(
        out_dir / f"checkpoint_{prompt}.npz",
        artifacts["params"],
        artifacts["model_config"],
        artifacts["vocab"],
        artifacts["norm_stats"],
        extra_config=config.to_dict(),
    )
    with open(out_dir / f"predictions_{prompt}.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["essay_id", "gold", "predicted"])
        writer.writerows(result.predictions)


def _write_results_csv(out_dir: Path, results):
    with open(out_dir / "results.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["prompt", "qwk", "epoch", "seconds"])
        for r in results:
            writer.writerow(
                [r.target_prompt, f"{r.test_qwk:.6f}", r.selected_epoch,
                 f"{r.seconds:.2f}"]
            )


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable info logging.")
def main(verbose):
    """Cross-prompt automated essay scoring toolkit."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.option("--data", type=click.Path(exists=True), required=True)
def stats(data):
    """Per-set dataset summary (counts, lengths, extreme-score counts)."""
    rows = dataset_stats(load_dataset(data))
    header = f"{'set':>3} {'count':>6} {'genre':>5} {'mean_len':>8} " \
             f"{'range':>7} {'min#':>5} {'max#':>5}"
    click.echo(header)
    for row in rows:
        click.echo(
            f"{row['essay_set']:>3} {row['count']:>6} {row['genre']:>5} "
            f"{row['mean_length']:>8.1f} {row['score_range']:>7} "
            f"{row['min_score_count']:>5} {row['max_score_count']:>5}"
        )


@main.group()
def features():
    """Feature extraction commands."""


@features.command("extract")
@click.option("--data", type=click.Path(exists=True), default=None)
@click.option("--pretagged", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), required=True)
def features_extract(data, pretagged, out):
    """Extract the 86 features to CSV (raw plus set-wise normalized)."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = DEFAULT_REGISTRY.feature_names

    if pretagged is not None:
        sentences = read_pretagged(pretagged)
        vec = assemble(sentences, essay_set=0)
        with open(out_dir / "features_raw.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["essay_id", "essay_set", *names])
            writer.writerow([0, 0, *[f"{v:.10g}" for v in vec.values]])
        click.echo(f"wrote {out_dir / 'features_raw.csv'}")
        return

    if data is None:
        raise click.ClickException("supply --data or --pretagged")
    dataset = load_dataset(data)
    vectors = []
    for essay in dataset.essays:
        sentences = preprocess(essay.text)
        vectors.append((essay, assemble(sentences, essay.essay_set)))
    stats_all = fit_normalization([v for _, v in vectors])

    for name, rows in (
        ("features_raw.csv", [(e, v.values) for e, v in vectors]),
        ("features_normalized.csv",
         [(e, apply_normalization(v, stats_all).values) for e, v in vectors]),
    ):
        with open(out_dir / name, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["essay_id", "essay_set", *names])
            for essay, values in rows:
                writer.writerow(
                    [essay.essay_id, essay.essay_set,
                     *[f"{v:.10g}" for v in values]]
                )
        click.echo(f"wrote {out_dir / name}")


@main.command()
@click.option("--target-prompt", type=click.IntRange(1, 8), required=True)
@_run_options
def train(target_prompt, data, mode, features, seed, epochs, batch,
          subsample, out, config_path):
    """Train one fold (all other prompts -> the target prompt)."""
    file_config = _read_config_file(config_path) if config_path else {}
    data = _require_data(data, file_config)
    config = _build_run_config(file_config, mode=mode, features=features,
                               seed=seed, epochs=epochs, batch=batch,
                               subsample=subsample)
    out_dir = Path(_resolve(out, "out", file_config, "runs"))
    dataset = load_dataset(data)
    plans = {p.target_prompt: p for p in cvmod.make_folds(dataset, config)}
    artifacts, result = cvmod.train_fold(plans[target_prompt], config, dataset.metas)
    _write_run_log(out_dir, config, data)
    _write_fold_outputs(out_dir, artifacts, result, config)
    _write_results_csv(out_dir, [result])
    click.echo(
        f"prompt {target_prompt}: test QWK {result.test_qwk:.4f} "
        f"(epoch {result.selected_epoch}, {result.seconds:.1f}s)"
    )


@main.command("eval")
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--target-prompt", type=click.IntRange(1, 8), required=True)
@click.option("--checkpoint", type=click.Path(exists=True), required=True)
def eval_cmd(data, target_prompt, checkpoint):
    """Evaluate a saved checkpoint on one prompt's essays."""
    params, model_cfg, vocab, norm_stats, meta = load_checkpoint(checkpoint)
    run_cfg = cvmod.RunConfig(**{
        k: v for k, v in meta.get("run_config", {}).items()
        if k in cvmod.RunConfig().__dict__
    }) if meta.get("run_config") else cvmod.RunConfig()
    dataset = load_dataset(data)
    essays = [e for e in dataset.essays if e.essay_set == target_prompt]
    if not essays:
        raise click.ClickException(f"no essays for prompt {target_prompt}")
    cvmod._ensure_preprocessed(essays)
    cvmod.encode_essays(essays, vocab, run_cfg)
    if model_cfg.n_features:
        feats = {
            e.essay_id: apply_normalization(
                assemble(e.sentences, e.essay_set), norm_stats
            ).values
            for e in essays
        }
    else:
        feats = {e.essay_id: np.zeros(0) for e in essays}
    pred = cvmod.predict_scores(essays, feats, params, model_cfg, dataset.metas)
    kappa = quadratic_weighted_kappa(
        [e.score for e in essays], pred, dataset.metas[target_prompt]
    )
    click.echo(f"prompt {target_prompt}: QWK {kappa:.4f} over {len(essays)} essays")


@main.command()
@_run_options
def cv(data, mode, features, seed, epochs, batch, subsample, out, config_path):
    """Eight-fold prompt-wise cross-validation."""
    file_config = _read_config_file(config_path) if config_path else {}
    data = _require_data(data, file_config)
    config = _build_run_config(file_config, mode=mode, features=features,
                               seed=seed, epochs=epochs, batch=batch,
                               subsample=subsample)
    out_dir = Path(_resolve(out, "out", file_config, "runs"))
    dataset = load_dataset(data)
    _write_run_log(out_dir, config, data)
    results = []
    for plan in cvmod.make_folds(dataset, config):
        artifacts, result = cvmod.train_fold(plan, config, dataset.metas)
        _write_fold_outputs(out_dir, artifacts, result, config)
        results.append(result)
        click.echo(f"prompt {result.target_prompt}: QWK {result.test_qwk:.4f}")
    average = float(np.mean([r.test_qwk for r in results]))
    _write_results_csv(out_dir, results)
    click.echo(cvmod.format_results_table(results, average))
    click.echo(f"average QWK: {average:.4f}")


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True), required=True)
@click.option("--range", "score_range", required=True,
              help="Score range as MIN-MAX, e.g. 0-3.")
def qwk(input_path, score_range):
    """QWK for a two-column CSV of (human, predicted) integer scores."""
    try:
        lo, hi = (int(x) for x in score_range.split("-", 1))
    except ValueError as exc:
        raise click.ClickException(f"bad --range {score_range!r}") from exc
    meta = PromptMeta(0, lo, hi)
    human, pred = [], []
    with open(input_path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip().lstrip("-").isdigit():
                continue  # header or blank
            human.append(int(row[0]))
            pred.append(int(row[1]))
    kappa = quadratic_weighted_kappa(human, pred, meta)
    click.echo(f"{kappa:.4f}")


@main.command("pos-tag")
@click.option("--text", default=None, help="Literal text to tag.")
@click.option("--input", "input_path", type=click.Path(exists=True), default=None)
@click.option("--pretagged", type=click.Path(exists=True), default=None,
              help="Validate and echo an existing pre-tagged file.")
def pos_tag_cmd(text, input_path, pretagged):
    """Tokenize and POS-tag text; emits token<TAB>tag lines with blank
    lines between sentences."""
    if pretagged is not None:
        sentences = read_pretagged(pretagged)
    else:
        if text is None and input_path is None:
            text = sys.stdin.read()
        elif input_path is not None:
            text = Path(input_path).read_text(encoding="cp1252", errors="replace")
        sentences = preprocess(text)
    write_pretagged(sentences, sys.stdout)


if __name__ == "__main__":
    main()
