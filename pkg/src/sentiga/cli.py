"""Command-line interface: preprocess, train, evaluate, predict, benchmark, export.

Exit codes: 0 success, 2 usage error, 3 data/schema error, 4 training
error, 5 I/O or bundle error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bundle as bundle_mod
from . import corpus, datasets, evaluation, export, learners, textnorm
from .errors import BundleError, DataError, SentigaError, TrainingError
from .features import TfidfConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_TRAINING = 4
EXIT_IO = 5


class _UsageError(SentigaError):
    pass


def _bool_flag(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {value!r}")


def _int_tuple(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="split/model seed (default 42)")
    common.add_argument("--test-fraction", type=float, default=None,
                        help="held-out fraction for evaluation (default 0.2)")
    common.add_argument("--data", default=None,
                        help="raw CSV path (default: bundled reference corpus)")
    common.add_argument("--bundle", default=None, help="model bundle path")
    common.add_argument("--out-dir", default=".", help="directory for exported files")
    common.add_argument("--model", choices=evaluation.MODEL_KINDS, default="logreg")
    common.add_argument("--label-map", default=None, help="label map asset path")
    common.add_argument("--slang", default=None, help="slang dictionary asset path")
    common.add_argument("--leet", default=None, help="leet map asset path")
    common.add_argument("--drop-unmapped", action="store_true",
                        help="drop records with unmapped labels instead of failing")
    common.add_argument("--lenient", action="store_true",
                        help="map unparseable numeric cells to 0")

    hyper = argparse.ArgumentParser(add_help=False)
    group = hyper.add_argument_group("hyperparameter overrides")
    group.add_argument("--C", type=float, default=None)
    group.add_argument("--class_weight", choices=["balanced", "none"], default=None)
    group.add_argument("--max_iter", type=int, default=None)
    group.add_argument("--tol", type=float, default=None)
    group.add_argument("--random_state", type=int, default=None)
    group.add_argument("--hidden_layer_sizes", type=_int_tuple, default=None)
    group.add_argument("--activation", default=None)
    group.add_argument("--solver", default=None)
    group.add_argument("--alpha", type=float, default=None)
    group.add_argument("--learning_rate_init", type=float, default=None)
    group.add_argument("--early_stopping", type=_bool_flag, default=None)
    group.add_argument("--regularization", type=float, default=None)
    group.add_argument("--epochs", type=int, default=None)
    group.add_argument("--max_features", type=int, default=None)
    group.add_argument("--min_df", type=int, default=None)
    group.add_argument("--max_df", type=float, default=None)
    group.add_argument("--ngram_range", type=_int_tuple, default=None)
    group.add_argument("--sublinear_tf", type=_bool_flag, default=None)

    parser = argparse.ArgumentParser(
        prog="sentiga",
        description="Three-class sentiment toolkit for Indonesian social-media text.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", parents=[common],
                       help="clean, remap, deduplicate, and write the prepared corpus")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", parents=[common, hyper],
                       help="train one model and save a bundle")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", parents=[common],
                       help="evaluate a bundle on the held-out split of a dataset")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", parents=[common],
                       help="classify one post with a trained bundle")
    p.add_argument("--text", required=True)
    p.add_argument("--retweets", type=int, default=0)
    p.add_argument("--likes", type=int, default=0)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("benchmark", parents=[common, hyper],
                       help="train and compare all models on one shared split")
    p.add_argument("--extra-row", action="append", default=[],
                   metavar="MODEL,FAMILY,ACC,MACRO,WEIGHTED",
                   help="externally supplied benchmark row (repeatable)")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("export", parents=[common],
                       help="write the report tables for a trained bundle")
    p.add_argument("--extra-row", action="append", default=[],
                   metavar="MODEL,FAMILY,ACC,MACRO,WEIGHTED",
                   help="externally supplied benchmark row (repeatable)")
    p.set_defaults(func=cmd_export)
    return parser


# --------------------------------------------------------------------------
# shared helpers
# --------------------------------------------------------------------------

def _resolve_data_path(args) -> Path:
    return Path(args.data) if args.data else datasets.reference_corpus_path()


def _load_assets(args):
    slang = textnorm.load_slang(args.slang) if args.slang else textnorm.default_slang()
    leet = textnorm.load_leet(args.leet) if args.leet else textnorm.default_leet()
    policy = "drop" if args.drop_unmapped else "error"
    if args.label_map:
        label_map = corpus.LabelMap.from_file(args.label_map, policy)
    else:
        label_map = corpus.default_label_map(policy)
    return label_map, slang, leet


def _load_records(args):
    label_map, slang, leet = _load_assets(args)
    raw = corpus.load_raw(_resolve_data_path(args), lenient=args.lenient)
    records = corpus.prepare_corpus(raw, label_map, slang, leet)
    return records, label_map, slang, leet


def _seed(args) -> int:
    return 42 if args.seed is None else args.seed


def _test_fraction(args) -> float:
    return 0.2 if args.test_fraction is None else args.test_fraction


def _tfidf_config(args) -> TfidfConfig:
    base = TfidfConfig()
    try:
        return TfidfConfig(
            max_features=base.max_features if args.max_features is None else args.max_features,
            min_df=base.min_df if args.min_df is None else args.min_df,
            max_df=base.max_df if args.max_df is None else args.max_df,
            ngram_range=base.ngram_range if args.ngram_range is None else args.ngram_range,
            sublinear_tf=base.sublinear_tf if args.sublinear_tf is None else args.sublinear_tf,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _model_config(args, seed: int):
    model_seed = args.random_state if args.random_state is not None else seed
    if args.model == "logreg":
        base = learners.LogRegConfig()
        class_weight = base.class_weight
        if args.class_weight is not None:
            class_weight = None if args.class_weight == "none" else args.class_weight
        return learners.LogRegConfig(
            C=base.C if args.C is None else args.C,
            class_weight=class_weight,
            solver=base.solver if args.solver is None else args.solver,
            max_iter=base.max_iter if args.max_iter is None else args.max_iter,
            tol=base.tol if args.tol is None else args.tol,
            seed=model_seed,
        )
    if args.model == "mlp":
        base = learners.MlpConfig()
        return learners.MlpConfig(
            hidden_layer_sizes=(
                base.hidden_layer_sizes
                if args.hidden_layer_sizes is None
                else args.hidden_layer_sizes
            ),
            activation=base.activation if args.activation is None else args.activation,
            solver=base.solver if args.solver is None else args.solver,
            alpha=base.alpha if args.alpha is None else args.alpha,
            learning_rate_init=(
                base.learning_rate_init
                if args.learning_rate_init is None
                else args.learning_rate_init
            ),
            max_iter=base.max_iter if args.max_iter is None else args.max_iter,
            early_stopping=(
                base.early_stopping if args.early_stopping is None else args.early_stopping
            ),
            seed=model_seed,
        )
    base = learners.LinearSvmConfig()
    return learners.LinearSvmConfig(
        regularization=base.regularization if args.regularization is None else args.regularization,
        epochs=base.epochs if args.epochs is None else args.epochs,
        seed=model_seed,
    )


def _require_bundle_path(args) -> Path:
    if not args.bundle:
        raise _UsageError("--bundle is required for this command")
    return Path(args.bundle)


def _print_report(rep: evaluation.EvalReport) -> None:
    print("confusion matrix (rows true, columns predicted; negative/neutral/positive):")
    for row in rep.confusion.counts:
        print("  " + " ".join(f"{int(v):5d}" for v in row))
    print(f"{'class':<10} {'precision':>9} {'recall':>9} {'f1':>9} {'support':>8}")
    for m in rep.per_class:
        print(f"{m.name:<10} {m.precision:9.4f} {m.recall:9.4f} {m.f1:9.4f} {m.support:8d}")
    print(f"accuracy    {rep.accuracy:.4f}")
    print(f"macro F1    {rep.macro_f1:.4f}")
    print(f"weighted F1 {rep.weighted_f1:.4f}")


def _parse_extra_rows(raw_rows) -> list[evaluation.BenchmarkRow]:
    rows = []
    for raw in raw_rows:
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != 5:
            raise _UsageError(
                f"--extra-row expects MODEL,FAMILY,ACC,MACRO,WEIGHTED, got {raw!r}"
            )
        try:
            rows.append(
                evaluation.BenchmarkRow(
                    model=parts[0],
                    family=parts[1],
                    accuracy=float(parts[2]),
                    macro_f1=float(parts[3]),
                    weighted_f1=float(parts[4]),
                )
            )
        except ValueError:
            raise _UsageError(f"--extra-row has non-numeric metrics: {raw!r}") from None
    return rows


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_preprocess(args) -> int:
    records, _, _, _ = _load_records(args)
    counts = corpus.class_counts(records)
    out_path = Path(args.out_dir) / "clean_corpus.csv"
    export.write_csv_atomic(
        out_path,
        ("clean_text", "label", "word_count", "engagement", "hashtag_count"),
        (
            (r.clean_text, r.label.label, r.word_count, r.engagement, r.hashtag_count)
            for r in records
        ),
    )
    print(f"prepared {len(records)} records -> {out_path}")
    for cls in corpus.SentimentClass:
        print(f"  {cls.label}: {counts[int(cls)]}")
    return EXIT_OK


def cmd_train(args) -> int:
    bundle_path = _require_bundle_path(args)
    records, label_map, slang, leet = _load_records(args)
    seed = _seed(args)
    result = bundle_mod.train_bundle(
        records,
        kind=args.model,
        model_config=_model_config(args, seed),
        tfidf_config=_tfidf_config(args),
        label_map=label_map,
        slang=slang,
        leet=leet,
        seed=seed,
        test_fraction=_test_fraction(args),
    )
    bundle_mod.save_bundle(result.bundle, bundle_path)
    print(
        f"trained {args.model} on {len(result.train_indices)} records, "
        f"evaluated on {len(result.test_indices)} -> {bundle_path}"
    )
    _print_report(result.holdout_report)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    loaded = bundle_mod.load_bundle(_require_bundle_path(args))
    policy = "drop" if args.drop_unmapped else "error"
    if args.label_map:
        label_map = corpus.LabelMap.from_file(args.label_map, policy)
    else:
        label_map = corpus.default_label_map(policy)
    raw = corpus.load_raw(_resolve_data_path(args), lenient=args.lenient)
    records = corpus.prepare_corpus(raw, label_map, loaded.slang, loaded.leet)

    seed = loaded.seed if args.seed is None else args.seed
    fraction = loaded.test_fraction if args.test_fraction is None else args.test_fraction
    split = evaluation.stratified_split([r.label for r in records], fraction, seed)
    test_records = [records[i] for i in split.test_indices]
    space = bundle_mod.HybridFeatureSpace(tfidf=loaded.tfidf, scaler=loaded.scaler)
    X_test = space.featurize(test_records).to_csr()
    y_test = [int(r.label) for r in test_records]
    predictions = evaluation.predict_model(loaded.kind, loaded.classifier, X_test)
    rep = evaluation.report(evaluation.confusion(y_test, predictions))
    print(f"evaluated {loaded.kind} bundle on {len(test_records)} held-out records")
    _print_report(rep)
    return EXIT_OK


def cmd_predict(args) -> int:
    loaded = bundle_mod.load_bundle(_require_bundle_path(args))
    result = bundle_mod.predict(loaded, args.text, args.retweets, args.likes)
    scores = {
        cls.label: float(result.scores[int(cls)]) for cls in corpus.SentimentClass
    }
    payload = {"class": result.label.label, "probabilistic": result.probabilistic}
    payload["probabilities" if result.probabilistic else "decision_scores"] = scores
    print(json.dumps(payload))
    return EXIT_OK


def cmd_benchmark(args) -> int:
    records, _, _, _ = _load_records(args)
    seed = _seed(args)
    rows = evaluation.run_benchmark(
        records,
        model_specs=evaluation.default_model_specs(seed),
        seed=seed,
        test_fraction=_test_fraction(args),
        tfidf_config=_tfidf_config(args),
    )
    rows.extend(_parse_extra_rows(args.extra_row))
    rows.sort(key=lambda r: (r.failed, -(r.accuracy if r.accuracy is not None else 0.0)))

    print(f"{'Model':<22} {'Family':<16} {'Accuracy':>9} {'MacroF1':>9} {'WeightedF1':>11}")
    for row in rows:
        if row.failed:
            print(f"{row.model:<22} {row.family:<16} {'failed':>9} ({row.error})")
        else:
            print(
                f"{row.model:<22} {row.family:<16} {row.accuracy:>9.4f} "
                f"{row.macro_f1:>9.4f} {row.weighted_f1:>11.4f}"
            )
    out_path = export.write_csv_atomic(
        Path(args.out_dir) / export.BENCHMARK_FILE,
        export.BENCHMARK_HEADER,
        export.benchmark_table_rows(rows),
    )
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_export(args) -> int:
    loaded = bundle_mod.load_bundle(_require_bundle_path(args))
    if loaded.metrics_snapshot is None:
        raise DataError("bundle carries no metrics snapshot; retrain to export tables")
    name, family = evaluation.MODEL_DISPLAY[loaded.kind]
    benchmark_rows = [
        evaluation.BenchmarkRow(
            model=name,
            family=family,
            accuracy=loaded.metrics_snapshot.accuracy,
            macro_f1=loaded.metrics_snapshot.macro_f1,
            weighted_f1=loaded.metrics_snapshot.weighted_f1,
        )
    ]
    benchmark_rows.extend(_parse_extra_rows(args.extra_row))
    benchmark_rows.sort(
        key=lambda r: (r.failed, -(r.accuracy if r.accuracy is not None else 0.0))
    )
    label_map = (
        corpus.LabelMap.from_file(args.label_map) if args.label_map else corpus.default_label_map()
    )
    written = export.export_tables(
        args.out_dir,
        report=loaded.metrics_snapshot,
        benchmark=benchmark_rows,
        tfidf_config=loaded.tfidf.config,
        model_configs={loaded.kind: loaded.classifier.config},
        label_map=label_map,
    )
    for path in written.values():
        print(f"wrote {path}")
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage/help itself
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TrainingError as exc:
        print(f"training error: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except (BundleError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
