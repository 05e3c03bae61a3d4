"""CLI: train, eval, bench.

Consumes the labeling pipeline's JSONL records plus the WAV directory they
refer to; emits metrics and reports as JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

import torch

from .data import load_labeled_set, split_train_eval
from .latency import infer_bench, read_ins_bench_report
from .model import PRESETS, ClassifierConfig, StationarityNet, build_model
from .training import DEFAULT_EPOCHS, DEFAULT_LR, accuracy, predict, train
from .metrics import evaluate_scores


def save_model(model: StationarityNet, path: str) -> None:
    torch.save({"config": model.cfg.__dict__, "state_dict": model.state_dict()}, path)


def load_model(path: str) -> StationarityNet:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    model = StationarityNet(ClassifierConfig(**payload["config"]))
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model


def cmd_train(args) -> int:
    data = load_labeled_set(args.manifest, args.audio_dir)
    torch.manual_seed(args.seed)  # weight init must not depend on ambient RNG state
    model = build_model(args.preset, use_spectral_encoder=not args.no_spectral_encoder)
    if args.eval_fraction > 0:
        train_set, eval_set = split_train_eval(data, args.eval_fraction, seed=args.seed)
    else:
        train_set, eval_set = data, None
    state = train(
        model,
        train_set,
        epochs=args.epochs,
        lr=args.lr,
        batch_size=args.batch_size,
        seed=args.seed,
        log_every=1,
    )
    save_model(model, args.out)
    summary = {
        "preset": args.preset,
        "n_parameters": model.n_parameters(),
        "epochs": state.epoch,
        "final_loss": state.final_loss,
        "train_accuracy": accuracy(predict(model, train_set), train_set.labels),
        "n_train": len(train_set),
    }
    if eval_set is not None:
        metrics = evaluate_scores(predict(model, eval_set).numpy(), eval_set.labels.numpy())
        summary["eval"] = json.loads(metrics.to_json())
        summary["eval"].pop("roc", None)
        summary["n_eval"] = len(eval_set)
    print(json.dumps(summary, indent=2))
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    data = load_labeled_set(args.manifest, args.audio_dir)
    metrics = evaluate_scores(predict(model, data).numpy(), data.labels.numpy())
    text = metrics.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def cmd_bench(args) -> int:
    model = load_model(args.model) if args.model else build_model(args.preset)
    ins_ms = read_ins_bench_report(args.ins_bench) if args.ins_bench else None
    report = infer_bench(model, n_clips=args.n, ins_total_ms=ins_ms, seed=args.seed)
    text = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonstat-clf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on a labeled manifest")
    p.add_argument("--manifest", required=True, help="JSONL of label records")
    p.add_argument("--audio-dir", required=True, help="directory of <id>.wav clips")
    p.add_argument("--preset", choices=sorted(PRESETS), default="lw")
    p.add_argument("--epochs", type=int, default=DEFAULT_EPOCHS)
    p.add_argument("--lr", type=float, default=DEFAULT_LR)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eval-fraction", type=float, default=0.0, help="held-out fraction")
    p.add_argument("--no-spectral-encoder", action="store_true", help="ablation variant")
    p.add_argument("--out", required=True, help="model checkpoint path")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="metrics on a labeled manifest")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--audio-dir", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("bench", help="per-clip inference latency")
    p.add_argument("--model", help="checkpoint; defaults to a fresh preset model")
    p.add_argument("--preset", choices=sorted(PRESETS), default="lw")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ins-bench", help="bench JSON from the labeling pipeline, for the speedup ratio")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
