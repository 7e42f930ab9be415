"""Command-line pipeline: generate → run/audit → report.

Subcommands:

* ``generate`` — build instance files and per-seed splits from a lexicon,
  print dataset statistics.
* ``run`` — for each seed: split, train the suffix-rule baseline, predict
  the test split, audit, write per-seed reports; then aggregate consistency.
* ``audit`` — audit external prediction files against the gold forms.
* ``report`` — re-render tables, delimited rows and figures from existing
  report JSON files.

Data goes to files, rendered tables to stdout, logs to stderr. Exit codes:
0 success, 1 data error, 2 configuration error. All randomness flows from
the configured seeds; nothing reads the clock or OS entropy.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import dataset as ds
from . import reports as rp
from . import taxonomy as tx
from . import transducer as td
from .errors import ConfigError, DataError

log = logging.getLogger("kakokei")

DEFAULT_SEEDS = (0, 1, 2, 3, 4)

CONFIG_KEYS = {
    "lexicon", "out", "seeds", "max_suffix_len", "stratify", "predictions", "format",
}


@dataclass(frozen=True)
class RunConfig:
    lexicon: Path
    out: Path
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    max_suffix_len: int = td.DEFAULT_MAX_SUFFIX_LEN
    stratify: bool = False
    predictions: tuple[Path, ...] = ()
    fmt: str = "table"
    audit_seed: int | None = None


def bundled_lexicon_path() -> Path:
    """Path of the replication lexicon shipped with the package."""
    return Path(str(resources.files("kakokei").joinpath("data/lexicon.tsv")))


def parse_config_file(path: Path) -> dict[str, str]:
    """Read the plain ``key = value`` config format (# comments allowed)."""
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _parse_seeds(raw: str) -> tuple[int, ...]:
    try:
        seeds = tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"bad seed list {raw!r}") from exc
    if not seeds:
        raise ConfigError("seed list is empty")
    if any(seed < 0 for seed in seeds):
        raise ConfigError("seeds must be non-negative")
    if len(set(seeds)) != len(seeds):
        raise ConfigError(f"seeds must be distinct, got {raw!r}")
    return seeds


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"bad boolean {raw!r}")


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file and CLI flags (flags win)."""
    file_values: dict[str, str] = {}
    if args.config:
        file_values = parse_config_file(Path(args.config))

    def pick(flag_value, key: str, parse, default):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return parse(file_values[key])
        return default

    lexicon = Path(pick(args.lexicon, "lexicon", Path, bundled_lexicon_path()))
    out = pick(getattr(args, "out", None), "out", Path, None)
    if out is None:
        raise ConfigError("an output directory is required (--out DIR)")
    seeds = pick(
        _parse_seeds(args.seeds) if args.seeds else None, "seeds", _parse_seeds, DEFAULT_SEEDS
    )
    max_suffix_len = pick(args.max_suffix_len, "max_suffix_len", int, td.DEFAULT_MAX_SUFFIX_LEN)
    if max_suffix_len < 1:
        raise ConfigError("max-suffix-len must be at least 1")
    stratify = pick(
        True if args.stratify else None, "stratify", _parse_bool, False
    )
    raw_preds = getattr(args, "predictions", None)
    predictions = pick(
        tuple(Path(p) for p in raw_preds.split(",")) if raw_preds else None,
        "predictions",
        lambda raw: tuple(Path(p) for p in raw.split(",") if p.strip()),
        (),
    )
    fmt = pick(args.format, "format", str, "table")
    if fmt not in ("table", "json"):
        raise ConfigError(f"unknown format {fmt!r}")
    if not lexicon.exists():
        raise ConfigError(f"lexicon file not found: {lexicon}")
    for pred in predictions:
        if not pred.exists():
            raise ConfigError(f"prediction file not found: {pred}")
    return RunConfig(
        lexicon=lexicon,
        out=Path(out),
        seeds=seeds,
        max_suffix_len=max_suffix_len,
        stratify=stratify,
        predictions=predictions,
        fmt=fmt,
    )


def _load_lexicon(config: RunConfig) -> ds.Lexicon:
    lexicon = ds.ingest_lexicon(config.lexicon)
    for issue in lexicon.issues:
        if issue.is_error:
            log.error("lexicon: %s", issue)
        else:
            log.info("lexicon: %s", issue)
    if lexicon.has_errors:
        raise DataError(
            f"lexicon {config.lexicon} has "
            f"{sum(1 for i in lexicon.issues if i.is_error)} blocking issue(s)"
        )
    return lexicon


def _split_for_seed(config: RunConfig, lexicon: ds.Lexicon, pairs, seed: int) -> ds.SplitSet:
    types = {e.lemma: lexicon.verb_type(e.lemma) for e in lexicon.emitting_entries()}
    return ds.split(pairs, seed, stratify_types=types if config.stratify else None)


def cmd_generate(config: RunConfig) -> int:
    lexicon = _load_lexicon(config)
    entries = lexicon.entries
    counts = ds.stats(entries)
    pairs = ds.generate_pairs(entries)
    ds.write_sigmorphon(pairs, config.out / "dataset.tsv")
    for seed in config.seeds:
        split_set = _split_for_seed(config, lexicon, pairs, seed)
        ds.write_split(split_set, config.out / f"seed{seed}")
    rp.write_json(rp.stats_to_dict(counts), config.out / "stats.json")
    if config.fmt == "json":
        sys.stdout.write(rp.canonical_json(rp.stats_to_dict(counts)))
    else:
        sys.stdout.write(rp.render_type_counts(counts))
    log.info("wrote %d instances and %d split(s) under %s", len(pairs), len(config.seeds), config.out)
    return 0


def _emit_report(config: RunConfig, report: tx.AuditReport, counts: ds.TypeCounts) -> None:
    if config.fmt == "json":
        sys.stdout.write(rp.canonical_json(rp.report_to_dict(report)))
        return
    sys.stdout.write(f"== {report.run_id}: accuracy {report.accuracy:.4f} "
                     f"({report.correct}/{report.total})\n")
    rows = tx.error_distribution(report)
    if rows:
        sys.stdout.write(rp.render_error_distribution(rows, report.error_total))
        sys.stdout.write(
            rp.render_verb_type_distribution(
                tx.verb_class_distribution(report, counts), report.error_total
            )
        )
    else:
        sys.stdout.write("no errors\n")


def cmd_run(config: RunConfig) -> int:
    lexicon = _load_lexicon(config)
    counts = ds.stats(lexicon.entries)
    pairs = ds.generate_pairs(lexicon.entries)
    ds.write_sigmorphon(pairs, config.out / "dataset.tsv")
    reports: list[tx.AuditReport] = []
    for seed in config.seeds:
        try:
            seed_dir = config.out / f"seed{seed}"
            split_set = _split_for_seed(config, lexicon, pairs, seed)
            ds.write_split(split_set, seed_dir)
            ruleset = td.learn_rules(split_set.train, max_suffix_len=config.max_suffix_len)
            td.write_rules(ruleset, seed_dir / "rules.tsv")
            run_id = f"suffix-rules-seed{seed}"
            predictions = td.predict_pairs(ruleset, split_set.test, source=run_id)
            td.write_predictions(predictions, seed_dir / "predictions.tsv")
            report = tx.evaluate(split_set.test, predictions, lexicon.by_lemma, run_id=run_id)
            rp.write_json(rp.report_to_dict(report), seed_dir / "report.json")
            reports.append(report)
            log.info("%s: accuracy %.4f (%d errors)", run_id, report.accuracy,
                     report.error_total)
        except DataError as exc:
            log.error("seed %d failed: %s", seed, exc)
    if not reports:
        raise DataError("every seed failed")
    for report in reports:
        _emit_report(config, report, counts)
    pooled = tx.AuditReport.from_items(
        "pooled", [item for report in reports for item in report.items]
    )
    rp.render_report_artifacts(pooled, counts, config.out / "report")
    if len(reports) >= 2:
        consistency = tx.cross_run_consistency(reports)
        rp.write_json(rp.consistency_to_dict(consistency), config.out / "consistency.json")
        if config.fmt == "table":
            sys.stdout.write(rp.render_consistency(consistency))
    mean_accuracy = sum(r.accuracy for r in reports) / len(reports)
    log.info("mean test accuracy over %d seed(s): %.4f", len(reports), mean_accuracy)
    return 0


def cmd_audit(config: RunConfig) -> int:
    if not config.predictions:
        raise ConfigError("audit needs at least one --predictions file")
    lexicon = _load_lexicon(config)
    counts = ds.stats(lexicon.entries)
    pairs = ds.generate_pairs(lexicon.entries)
    reference = pairs
    if config.audit_seed is not None:
        reference = list(_split_for_seed(config, lexicon, pairs, config.audit_seed).test)
    reports: list[tx.AuditReport] = []
    for path in config.predictions:
        loaded = td.ingest_predictions(path, reference)
        if loaded.missing:
            log.info(
                "%s: %d of %d reference lemmas have no prediction; auditing the covered subset",
                path, len(loaded.missing), len(reference),
            )
        covered_lemmas = {p.lemma for p in loaded.predictions}
        covered_pairs = [p for p in reference if p.lemma in covered_lemmas]
        report = tx.evaluate(covered_pairs, loaded.predictions, lexicon.by_lemma)
        reports.append(report)
        out_dir = config.out / "audit" / report.run_id
        rp.write_json(rp.report_to_dict(report), out_dir / "report.json")
        rp.render_report_artifacts(report, counts, out_dir)
        _emit_report(config, report, counts)
    if len(reports) >= 2:
        consistency = tx.cross_run_consistency(reports)
        rp.write_json(rp.consistency_to_dict(consistency), config.out / "audit" / "consistency.json")
        if config.fmt == "table":
            sys.stdout.write(rp.render_consistency(consistency))
    return 0


def cmd_report(config: RunConfig) -> int:
    import json

    report_paths = sorted(config.out.glob("seed*/report.json"))
    report_paths += sorted(config.out.glob("audit/*/report.json"))
    if not report_paths:
        raise DataError(f"no report.json files found under {config.out}")
    lexicon = _load_lexicon(config)
    counts = ds.stats(lexicon.entries)
    loaded: list[tuple[Path, tx.AuditReport]] = []
    for path in report_paths:
        payload = json.loads(path.read_text(encoding="utf-8"))
        loaded.append((path, rp.report_from_dict(payload)))
    for path, report in loaded:
        _emit_report(config, report, counts)
        rp.render_report_artifacts(report, counts, path.parent / "rendered")
    reports = [report for _, report in loaded]
    pooled = tx.AuditReport.from_items(
        "pooled", [item for report in reports for item in report.items]
    )
    rp.render_report_artifacts(pooled, counts, config.out / "report")
    if len(reports) >= 2:
        consistency = tx.cross_run_consistency(reports)
        if config.fmt == "table":
            sys.stdout.write(rp.render_consistency(consistency))
        else:
            sys.stdout.write(rp.canonical_json(rp.consistency_to_dict(consistency)))
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file; flags override it")
    parser.add_argument("--lexicon", help="lexicon TSV (default: bundled replication lexicon)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seeds", help="comma-separated seed list (default 0,1,2,3,4)")
    parser.add_argument("--max-suffix-len", type=int, dest="max_suffix_len",
                        help="longest suffix key the rule learner records (default 4)")
    parser.add_argument("--stratify", action="store_true", default=None,
                        help="stratify splits by verb class")
    parser.add_argument("--format", choices=("table", "json"),
                        help="stdout rendering (default table)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kakokei",
        description="Hiragana past-tense inflection workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="emit instance files, splits and statistics")
    _add_common(p_gen)

    p_run = sub.add_parser("run", help="train and audit the suffix-rule baseline per seed")
    _add_common(p_run)

    p_audit = sub.add_parser("audit", help="audit external prediction files")
    _add_common(p_audit)
    p_audit.add_argument("--predictions",
                         help="comma-separated lemma TAB prediction files")
    p_audit.add_argument("--split-seed", type=int, dest="audit_seed", default=None,
                         help="audit against this seed's test split instead of the full dataset")

    p_report = sub.add_parser("report", help="re-render tables and figures from report JSON")
    _add_common(p_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s", force=True
    )
    parser = make_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "predictions"):
        args.predictions = None
    try:
        config = build_config(args)
        config = replace(config, audit_seed=getattr(args, "audit_seed", None))
        handler = {
            "generate": cmd_generate,
            "run": cmd_run,
            "audit": cmd_audit,
            "report": cmd_report,
        }[args.command]
        return handler(config)
    except ConfigError as exc:
        log.error("configuration: %s", exc)
        return 2
    except DataError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
