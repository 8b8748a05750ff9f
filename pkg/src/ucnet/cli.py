"""Batch command-line front door wiring the library into reproducible runs.

Every artifact-producing subcommand writes a `<output>.manifest.json`
recording the tool version, seeds, argument values and SHA-256 digests of
all inputs and lexicons, which is enough to reproduce the run bit for bit.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, classic, corpus, evaluation, lexical, network, synthetic
from .embeddings import load_embeddings, save_embeddings
from .lexical import FEATURE_NAMES, LexiconSet, TitleScorer, train_title_scorer

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

ENV_LEXICON_DIR = "UCNET_LEXICON_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _lexicon_dir(args) -> Path:
    if getattr(args, "lexicon_dir", None):
        return Path(args.lexicon_dir)
    env = os.environ.get(ENV_LEXICON_DIR)
    if env:
        return Path(env)
    return lexical.default_lexicon_dir()


def _lexicon_digests(directory: Path) -> dict[str, str]:
    out = {}
    for name in ("clickbait_phrases.txt", "violent_words.txt",
                 "fakeness_patterns.txt", "swear_words.txt"):
        path = directory / name
        if path.exists():
            out[name] = _sha256(path)
    return out


def _write_manifest(primary_output, args, inputs: dict, lexicons: dict,
                    outputs: list) -> None:
    manifest = {
        "tool": "ucnet",
        "version": __version__,
        "subcommand": args.subcommand,
        "seed": getattr(args, "seed", None),
        "arguments": {k: v for k, v in sorted(vars(args).items())
                      if k not in ("func", "subcommand")},
        "inputs": {name: {"path": str(p), "sha256": _sha256(p)}
                   for name, p in inputs.items() if p is not None},
        "lexicons": lexicons,
        "outputs": [str(p) for p in outputs],
    }
    path = Path(str(primary_output) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _load_labeled_titles(path) -> list[tuple[str, str]]:
    titles = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t", 1)
        if len(parts) != 2:
            raise ValueError(f"{path}: line {lineno}: expected label<TAB>title")
        label, title = parts[0].strip(), parts[1]
        if label not in ("fake", "real"):
            raise ValueError(f"{path}: line {lineno}: label must be fake or real")
        titles.append((title, label))
    return titles


def _get_scorer(args, lexicons: LexiconSet) -> tuple[TitleScorer, dict]:
    inputs = {}
    if getattr(args, "scorer", None):
        scorer = TitleScorer.load(args.scorer, lexicons)
        inputs["scorer"] = args.scorer
    elif getattr(args, "train_titles", None):
        titles = _load_labeled_titles(args.train_titles)
        config = lexical.TitleScorerConfig(seed=getattr(args, "scorer_seed", 0))
        scorer = train_title_scorer(titles, lexicons, config)
        inputs["train_titles"] = args.train_titles
    else:
        raise ValueError("either --scorer or --train-titles is required")
    if getattr(args, "save_scorer", None):
        scorer.save(args.save_scorer)
    return scorer, inputs


def _write_features_csv(path, ids, matrix, labels) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["video_id", *FEATURE_NAMES, "label"])
        for vid, row, label in zip(ids, matrix, labels):
            writer.writerow([vid] + [f"{v:.17g}" for v in row] + [label])


def _read_features_csv(path):
    ids, rows, labels = [], [], []
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["video_id", *FEATURE_NAMES, "label"]:
            raise ValueError(f"{path}: unexpected feature CSV header")
        for row in reader:
            ids.append(row[0])
            rows.append([float(v) for v in row[1:-1]])
            labels.append(row[-1])
    matrix = np.array(rows, dtype=np.float64) if rows else \
        np.zeros((0, len(FEATURE_NAMES)))
    return ids, matrix, labels


def _write_predictions_csv(path, ids, labels, p_fake) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["video_id", "label", "p_fake"])
        for vid, label, p in zip(ids, labels, p_fake):
            writer.writerow([vid, label, f"{p:.17g}"])


def _read_predictions_csv(path):
    ids, labels, p_fake = [], [], []
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["video_id", "label"]:
            raise ValueError(f"{path}: expected a video_id,label[,p_fake] CSV")
        for row in reader:
            ids.append(row[0])
            labels.append(row[1])
            p_fake.append(float(row[2]) if len(row) > 2 else float("nan"))
    return ids, labels, p_fake


def _classic_labels(labels, path) -> np.ndarray:
    bad = sorted({lab for lab in labels if lab not in ("fake", "real")})
    if bad:
        raise ValueError(f"{path}: non fake/real labels present: {bad}")
    return np.array([1 if lab == "fake" else 0 for lab in labels], dtype=np.int64)


def _cmd_mine(args) -> int:
    dataset = corpus.load_dataset(args.input, args.name or Path(args.input).stem)
    seed_path = args.seed_phrases or str(lexical.default_lexicon_dir() / "seed_phrases.txt")
    seed_phrases = lexical.load_lexicon_lines(seed_path)
    expansion = ()
    if args.expansion_lexicon:
        expansion = lexical.load_lexicon_lines(args.expansion_lexicon)
    mined = corpus.mine_candidates(
        dataset, seed_phrases, min_views=args.min_views,
        min_comments=args.min_comments,
        min_dislike_like_ratio=args.min_dislike_ratio,
        rounds=args.rounds, expansion_lexicon=expansion)
    corpus.save_dataset(mined, args.output)
    inputs = {"dataset": args.input, "seed_phrases": seed_path}
    if args.expansion_lexicon:
        inputs["expansion_lexicon"] = args.expansion_lexicon
    _write_manifest(args.output, args, inputs, {}, [args.output])
    print(f"mined {len(mined)} candidate videos -> {args.output}")
    return EXIT_OK


def _cmd_agreement(args) -> int:
    round1 = corpus.load_annotation_round(args.round1)
    round2 = corpus.load_annotation_round(args.round2)
    matrix = corpus.agreement_matrix(round1, round2)
    with Path(args.output).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["", *corpus.ANNOTATION_LABELS])
        for i, label in enumerate(corpus.ANNOTATION_LABELS):
            writer.writerow([label] + [int(v) for v in matrix[i]])
    _write_manifest(args.output, args,
                    {"round1": args.round1, "round2": args.round2}, {},
                    [args.output])
    print(f"agreement matrix over {int(matrix.sum())} videos -> {args.output}")
    return EXIT_OK


def _cmd_features(args) -> int:
    lexicon_dir = _lexicon_dir(args)
    lexicons = LexiconSet.from_directory(lexicon_dir)
    dataset = corpus.load_dataset(args.input, Path(args.input).stem)
    scorer, scorer_inputs = _get_scorer(args, lexicons)
    videos = list(dataset)
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            vectors = list(pool.map(
                lambda v: lexical.extract_features(v, lexicons, scorer).as_array(),
                videos))
    else:
        vectors = [lexical.extract_features(v, lexicons, scorer).as_array()
                   for v in videos]
    matrix = np.stack(vectors) if vectors else np.zeros((0, len(FEATURE_NAMES)))
    _write_features_csv(args.output, dataset.ids(), matrix,
                        [v.label for v in videos])
    outputs = [args.output]
    if args.save_scorer:
        outputs.append(args.save_scorer)
    _write_manifest(args.output, args, {"dataset": args.input, **scorer_inputs},
                    _lexicon_digests(lexicon_dir), outputs)
    print(f"extracted features for {len(videos)} videos -> {args.output}")
    return EXIT_OK


def _cmd_prune(args) -> int:
    ids, matrix, labels = _read_features_csv(args.features)
    y = _classic_labels(labels, args.features)
    forest = classic.train_forest(matrix, y, n_trees=args.trees,
                                  max_depth=args.max_depth, seed=args.seed)
    importances = classic.feature_importances(forest)
    selected = lexical.prune_correlated(matrix, importances, args.threshold)
    payload = {
        "threshold": args.threshold,
        "importances": [float(v) for v in importances],
        "selected_indices": list(selected),
        "selected_names": [FEATURE_NAMES[i] for i in selected],
    }
    Path(args.output).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                                 encoding="utf-8")
    _write_manifest(args.output, args, {"features": args.features}, {},
                    [args.output])
    print(f"kept {len(selected)}/{len(FEATURE_NAMES)} features -> {args.output}")
    return EXIT_OK


def _load_selected(path) -> tuple[int, ...]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return tuple(int(i) for i in payload["selected_indices"])


def _cmd_train_classic(args) -> int:
    ids, matrix, labels = _read_features_csv(args.features)
    y = _classic_labels(labels, args.features)
    indices = _load_selected(args.selected) if args.selected else \
        tuple(range(len(FEATURE_NAMES)))
    X = matrix[:, indices]
    if args.model == "forest":
        model = classic.train_forest(X, y, n_trees=args.trees,
                                     max_depth=args.max_depth,
                                     features_per_split=args.features_per_split,
                                     seed=args.seed)
        classic.save_forest(model, args.output, max_depth=args.max_depth)
    elif args.model == "tree":
        model = classic.train_tree(X, y, max_depth=args.max_depth, seed=args.seed)
        classic.save_tree(model, args.output)
    else:
        model = classic.train_logistic(X, y, learning_rate=args.learning_rate,
                                       epochs=args.epochs, seed=args.seed)
        classic.save_logistic(model, args.output)
    inputs = {"features": args.features}
    if args.selected:
        inputs["selected"] = args.selected
    outputs = [args.output]
    if args.test_features:
        test_ids, test_matrix, _ = _read_features_csv(args.test_features)
        X_test = test_matrix[:, indices]
        if args.model == "logistic":
            p_fake = model.predict_proba_fake(X_test)
        else:
            p_fake = model.predict_proba_fake(X_test) if args.model == "forest" \
                else model.predict_proba(X_test)[:, 1]
        predicted = ["fake" if p >= 0.5 else "real" for p in p_fake]
        if not args.predictions:
            raise ValueError("--test-features requires --predictions")
        _write_predictions_csv(args.predictions, test_ids, predicted, p_fake)
        inputs["test_features"] = args.test_features
        outputs.append(args.predictions)
    _write_manifest(args.output, args, inputs, {}, outputs)
    print(f"trained {args.model} on {len(y)} videos -> {args.output}")
    return EXIT_OK


def _cmd_train_ucnet(args) -> int:
    lexicon_dir = _lexicon_dir(args)
    lexicons = LexiconSet.from_directory(lexicon_dir)
    phrases_path = args.phrases or str(lexicon_dir / "fakeness_phrases.txt")
    if not Path(phrases_path).exists():
        phrases_path = str(lexical.default_lexicon_dir() / "fakeness_phrases.txt")
    phrases = lexical.load_lexicon_lines(phrases_path)
    table = load_embeddings(args.embeddings, args.embedding_dim)
    scorer, scorer_inputs = _get_scorer(args, lexicons)

    inputs = {"embeddings": args.embeddings, "phrases": phrases_path,
              **scorer_inputs}
    if args.train:
        train_set = corpus.load_dataset(args.train, Path(args.train).stem)
        test_set = None
        inputs["train"] = args.train
        if args.test:
            test_set = corpus.load_dataset(args.test, Path(args.test).stem)
            inputs["test"] = args.test
    elif args.input:
        full = corpus.load_dataset(args.input, Path(args.input).stem)
        train_set, test_set = corpus.split_dataset(full, args.test_fraction,
                                                   args.seed)
        inputs["input"] = args.input
    else:
        raise ValueError("either --train or --input is required")

    if args.all_features:
        indices = tuple(range(len(FEATURE_NAMES)))
    elif args.selected:
        indices = _load_selected(args.selected)
        inputs["selected"] = args.selected
    else:
        raise ValueError("either --selected or --all-features is required")

    config = network.TrainingConfig(
        learning_rate=args.learning_rate, epochs=args.epochs,
        batch_size=args.batch_size, seed=args.seed,
        max_comments_per_video=args.max_comments,
        max_tokens_per_comment=args.max_tokens)
    model = network.train(train_set, table, lexicons, scorer, config,
                          phrases=phrases, feature_indices=indices,
                          lstm_hidden=args.lstm_hidden)
    model.save(args.output)
    outputs = [args.output]

    if test_set is not None and args.predictions:
        rows = []
        for record in test_set:
            prediction = model.predict_record(record, table, lexicons, scorer)
            rows.append((record.id, network.classify(prediction),
                         prediction.p_fake))
        _write_predictions_csv(args.predictions, [r[0] for r in rows],
                               [r[1] for r in rows], [r[2] for r in rows])
        outputs.append(args.predictions)
        if args.truth_out:
            _write_predictions_csv(args.truth_out, [r.id for r in test_set],
                                   [r.label for r in test_set],
                                   [float("nan")] * len(test_set))
            outputs.append(args.truth_out)
    _write_manifest(args.output, args, inputs,
                    _lexicon_digests(lexicon_dir), outputs)
    final_loss = model.loss_history[-1] if model.loss_history else float("nan")
    print(f"trained ucnet on {len(train_set)} videos "
          f"(final mean loss {final_loss:.4f}) -> {args.output}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    pred_ids, pred_labels, _ = _read_predictions_csv(args.pred)
    truth_ids, truth_labels, _ = _read_predictions_csv(args.truth)
    truth = dict(zip(truth_ids, truth_labels))
    missing = [vid for vid in pred_ids if vid not in truth]
    if missing:
        raise ValueError(f"{args.truth}: no ground truth for ids {missing[:5]}")
    y_true = [truth[vid] for vid in pred_ids]
    report = evaluation.evaluate(y_true, pred_labels)
    evaluation.export_report(report, args.output)
    _write_manifest(args.output, args,
                    {"pred": args.pred, "truth": args.truth}, {},
                    [args.output])
    print(f"macro_precision={report.macro_precision:.4f} "
          f"macro_recall={report.macro_recall:.4f} "
          f"macro_f1={report.macro_f1:.4f}")
    return EXIT_OK


def _cmd_pca(args) -> int:
    if args.features:
        ids, matrix, labels = _read_features_csv(args.features)
        inputs = {"features": args.features}
    elif args.input and args.model and args.embeddings:
        dataset = corpus.load_dataset(args.input, Path(args.input).stem)
        phrases = lexical.load_fakeness_phrases(args.phrases) if args.phrases \
            else lexical.load_fakeness_phrases()
        model = network.UCNetModel.load(args.model, phrases)
        table = load_embeddings(args.embeddings, model.embedding_dim)
        matrix = network.extract_unified_embeddings(
            dataset, table, model.params, model.phrases,
            model.config.max_comments_per_video,
            model.config.max_tokens_per_comment)
        ids = dataset.ids()
        labels = [r.label for r in dataset]
        inputs = {"input": args.input, "model": args.model,
                  "embeddings": args.embeddings}
    else:
        raise ValueError(
            "pca needs --features, or --input with --model and --embeddings")
    projected, variances = evaluation.pca_project(matrix, args.components)
    evaluation.export_report(projected, args.output, video_ids=ids, labels=labels)
    _write_manifest(args.output, args, inputs, {}, [args.output])
    print("explained variances: "
          + " ".join(f"{v:.6g}" for v in variances))
    return EXIT_OK


def _cmd_make_synthetic(args) -> int:
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lexicons = LexiconSet.default()
    dataset = synthetic.make_synthetic_corpus(args.n_videos, args.seed, lexicons)
    table = synthetic.make_embedding_table(args.seed, args.embedding_dim, lexicons)
    titles = synthetic.make_labeled_titles(args.n_titles, args.seed, lexicons)
    corpus_path = out_dir / "corpus.jsonl"
    corpus.save_dataset(dataset, corpus_path)
    save_embeddings(table, out_dir / "embeddings.txt")
    with (out_dir / "titles.tsv").open("w", encoding="utf-8", newline="\n") as fh:
        for title, label in titles:
            fh.write(f"{label}\t{title}\n")
    _write_manifest(corpus_path, args, {}, {},
                    [corpus_path, out_dir / "embeddings.txt",
                     out_dir / "titles.tsv"])
    print(f"synthetic corpus with {len(dataset)} videos -> {out_dir}")
    return EXIT_OK


def _add_scorer_flags(parser) -> None:
    parser.add_argument("--scorer", help="trained title-scorer file")
    parser.add_argument("--train-titles",
                        help="label<TAB>title file to train the title scorer on")
    parser.add_argument("--save-scorer", help="write the trained scorer here")
    parser.add_argument("--scorer-seed", type=int, default=0)


def _build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="ucnet",
                     description="Misleading-video detection pipelines")
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="subcommand", required=True,
                                       metavar="SUBCOMMAND")
    subs: dict[str, _Parser] = {}

    p = subs["mine"] = subparsers.add_parser(
        "mine", help="heuristic candidate mining")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--name", default=None)
    p.add_argument("--seed-phrases", default=None)
    p.add_argument("--expansion-lexicon", default=None)
    p.add_argument("--min-views", type=int, default=10_000)
    p.add_argument("--min-comments", type=int, default=120)
    p.add_argument("--min-dislike-ratio", type=float, default=0.3)
    p.add_argument("--rounds", type=int, default=3)
    p.set_defaults(func=_cmd_mine)

    p = subs["agreement"] = subparsers.add_parser(
        "agreement", help="inter-annotator agreement matrix")
    p.add_argument("--round1", required=True)
    p.add_argument("--round2", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_agreement)

    p = subs["features"] = subparsers.add_parser(
        "features", help="extract the eight simple features")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--lexicon-dir", default=None)
    p.add_argument("--threads", type=int, default=1)
    _add_scorer_flags(p)
    p.set_defaults(func=_cmd_features)

    p = subs["prune"] = subparsers.add_parser(
        "prune", help="correlation-based feature pruning")
    p.add_argument("--features", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--threshold", type=float, default=0.2)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_prune)

    p = subs["train-classic"] = subparsers.add_parser(
        "train-classic", help="train a baseline classifier on features")
    p.add_argument("--features", required=True)
    p.add_argument("--model", choices=("forest", "tree", "logistic"),
                   default="forest")
    p.add_argument("--output", required=True)
    p.add_argument("--selected", default=None)
    p.add_argument("--test-features", default=None)
    p.add_argument("--predictions", default=None)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--features-per-split", type=int, default=3)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_train_classic)

    p = subs["train-ucnet"] = subparsers.add_parser(
        "train-ucnet", help="train the unified-comments network")
    p.add_argument("--train", default=None)
    p.add_argument("--test", default=None)
    p.add_argument("--input", default=None,
                   help="full dataset to split with --test-fraction")
    p.add_argument("--test-fraction", type=float, default=0.3)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--embedding-dim", type=int, default=300)
    p.add_argument("--lexicon-dir", default=None)
    p.add_argument("--phrases", default=None)
    p.add_argument("--selected", default=None)
    p.add_argument("--all-features", action="store_true")
    p.add_argument("--learning-rate", type=float, default=1e-4)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-comments", type=int, default=200)
    p.add_argument("--max-tokens", type=int, default=100)
    p.add_argument("--lstm-hidden", type=int, default=300)
    p.add_argument("--output", required=True)
    p.add_argument("--predictions", default=None)
    p.add_argument("--truth-out", default=None,
                   help="write the held-out ids and true labels here")
    _add_scorer_flags(p)
    p.set_defaults(func=_cmd_train_ucnet)

    p = subs["evaluate"] = subparsers.add_parser(
        "evaluate", help="macro-averaged report from prediction/truth CSVs")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = subs["pca"] = subparsers.add_parser(
        "pca", help="2-D projection of features or unified embeddings")
    p.add_argument("--features", default=None)
    p.add_argument("--input", default=None)
    p.add_argument("--model", default=None)
    p.add_argument("--embeddings", default=None)
    p.add_argument("--phrases", default=None)
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_pca)

    p = subs["make-synthetic"] = subparsers.add_parser("make-synthetic")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--n-videos", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--embedding-dim", type=int, default=16)
    p.add_argument("--n-titles", type=int, default=240)
    p.set_defaults(func=_cmd_make_synthetic)

    return parser, subs


def _read_config_file(path) -> dict[str, str]:
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}: line {lineno}: expected key=value")
        key, value = stripped.split("=", 1)
        overrides[key.strip().replace("-", "_")] = value.strip()
    return overrides


def _apply_config(subs: dict[str, _Parser], overrides: dict[str, str],
                  parser: _Parser) -> None:
    recognized = set()
    for sub in subs.values():
        for action in sub._actions:
            if action.dest in overrides:
                recognized.add(action.dest)
                raw = overrides[action.dest]
                if isinstance(action, argparse._StoreTrueAction):
                    value = raw.lower() in ("1", "true", "yes", "on")
                elif action.type is not None:
                    value = action.type(raw)
                else:
                    value = raw
                sub.set_defaults(**{action.dest: value})
    unknown = sorted(set(overrides) - recognized)
    if unknown:
        parser.error(f"unknown config keys: {', '.join(unknown)}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = _build_parser()

    config_path = None
    if "--config" in argv:
        pos = argv.index("--config")
        if pos + 1 >= len(argv):
            parser.error("--config requires a file argument")
        config_path = argv[pos + 1]
        del argv[pos:pos + 2]

    try:
        if config_path is not None:
            _apply_config(subs, _read_config_file(config_path), parser)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
