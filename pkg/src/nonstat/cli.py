"""Command-line interface.

Subcommands: analyze, label, batch, validate-synthetic, bench, plot-data,
synth.  Any long flag can also be set in a config file of ``key = value``
lines (``#`` comments allowed); explicit flags override the file, and the
NONSTAT_SEED environment variable supplies the base seed when neither does.

Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 precondition
violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field

from .bench import run_bench
from .errors import (
    AudioReadError,
    EmptyAudioError,
    NonstatError,
    PreconditionError,
    UnsupportedAudioError,
)
from .hlc import DEFAULT_ALPHA, DEFAULT_REGIONS, HlcConfig, RegionPartition, hlc_label
from .ingest import CLIP_SAMPLES, CLIP_SECONDS, SynthSpec, synth_signal, write_wav
from .ins import (
    DEFAULT_EPSILON,
    DEFAULT_SURROGATES,
    DEFAULT_TAPERS,
    DistanceSpec,
    InsConfig,
)
from .labeling import (
    LabelRecord,
    batch_label,
    extract_clip,
    label_clip,
    read_manifest,
    write_records,
)
from .synthval import validate_synthetic

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_PRECONDITION = 3

SEED_ENV_VAR = "NONSTAT_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; our contract reserves 2 for I/O.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _parse_scales(text: str) -> tuple[float, ...]:
    try:
        scales = tuple(float(tok) for tok in text.replace(";", ",").split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"bad --scales value {text!r}: {exc}") from exc
    if not scales:
        raise UsageError("--scales must list at least one ratio")
    return scales


def _parse_partition(text: str) -> RegionPartition:
    try:
        regions = tuple(
            tuple(float(tok) for tok in group.split(",") if tok.strip())
            for group in text.split(";")
            if group.strip()
        )
        return RegionPartition(regions=regions)
    except (ValueError, PreconditionError) as exc:
        raise UsageError(f"bad --partition value {text!r}: {exc}") from exc


def _parse_params(items: list[str]) -> dict[str, float]:
    params = {}
    for item in items:
        for tok in item.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if "=" not in tok:
                raise UsageError(f"--param expects name=value, got {tok!r}")
            name, _, value = tok.partition("=")
            try:
                params[name.strip()] = float(value)
            except ValueError as exc:
                raise UsageError(f"--param {tok!r}: {exc}") from exc
    return params


@dataclass
class Settings:
    """Fully resolved analysis configuration (CLI > config file > env > defaults)."""

    seed: int = 0
    surrogates: int = DEFAULT_SURROGATES
    alpha: float = DEFAULT_ALPHA
    scales: tuple[float, ...] | None = None  # None -> partition scales
    tapers: int = DEFAULT_TAPERS
    distance: str = "combined"
    epsilon: float = DEFAULT_EPSILON
    jobs: int = 1
    partition: RegionPartition = field(default_factory=RegionPartition)

    def ins_config(self, seed: int | None = None) -> InsConfig:
        return InsConfig(
            j_surrogates=self.surrogates,
            epsilon=self.epsilon,
            distance=DistanceSpec(mode=self.distance),
            tapers=self.tapers,
            seed=self.seed if seed is None else seed,
        )

    def hlc_config(self) -> HlcConfig:
        return HlcConfig(alpha=self.alpha, partition=self.partition)

    def curve_scales(self) -> tuple[float, ...]:
        return self.scales if self.scales is not None else tuple(self.partition.all_scales())


def load_config_file(path: str) -> dict[str, str]:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
                key, _, value = line.partition("=")
                values[key.strip().lower().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


_CONFIG_KEYS = {
    "seed",
    "surrogates",
    "alpha",
    "scales",
    "tapers",
    "distance",
    "epsilon",
    "jobs",
    "partition",
}


def resolve_settings(args: argparse.Namespace) -> Settings:
    config = load_config_file(args.config) if getattr(args, "config", None) else {}
    unknown = set(config) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config key(s): {sorted(unknown)}")

    def pick(name: str, cast, default):
        cli_value = getattr(args, name, None)
        if cli_value is not None:
            return cli_value
        if name in config:
            try:
                return cast(config[name])
            except (ValueError, UsageError) as exc:
                raise UsageError(f"config key {name}: {exc}") from exc
        return default

    seed_default = 0
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            seed_default = int(env_seed)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}") from exc

    settings = Settings(
        seed=pick("seed", int, seed_default),
        surrogates=pick("surrogates", int, DEFAULT_SURROGATES),
        alpha=pick("alpha", float, DEFAULT_ALPHA),
        scales=pick("scales", _parse_scales, None),
        tapers=pick("tapers", int, DEFAULT_TAPERS),
        distance=pick("distance", str, "combined"),
        epsilon=pick("epsilon", float, DEFAULT_EPSILON),
        jobs=pick("jobs", int, 1),
        partition=pick("partition", _parse_partition, RegionPartition(regions=DEFAULT_REGIONS)),
    )
    if settings.distance not in ("kl", "lsd", "combined"):
        raise UsageError(f"--distance must be kl, lsd, or combined, got {settings.distance!r}")
    if settings.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return settings


def _add_common(parser: argparse.ArgumentParser, *, jobs: bool = False) -> None:
    parser.add_argument("--config", help="config file of key = value lines")
    parser.add_argument("--seed", type=int, help="base random seed")
    parser.add_argument("--surrogates", type=int, metavar="J", help="surrogates per clip")
    parser.add_argument("--alpha", type=float, help="hard-label threshold multiplier")
    parser.add_argument("--scales", type=_parse_scales, help="comma-separated scale ratios")
    parser.add_argument("--tapers", type=int, help="tapers per spectral estimate")
    parser.add_argument("--distance", choices=("kl", "lsd", "combined"), help="spectral distance mode")
    parser.add_argument("--epsilon", type=float, help="false-alarm rate for the threshold")
    parser.add_argument("--partition", type=_parse_partition, help="regions as 's,s,s;s,s,s;...'")
    if jobs:
        parser.add_argument("--jobs", type=int, help="parallel worker processes")


def build_parser() -> _Parser:
    parser = _Parser(prog="nonstat", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="per-scale index curve for one clip")
    p.add_argument("wav", help="input WAV file")
    p.add_argument("--start", type=float, default=0.0, help="clip start offset in seconds")
    p.add_argument("--out", help="write JSON here instead of stdout")
    _add_common(p)

    p = sub.add_parser("label", help="index curve + hard label for one clip")
    p.add_argument("wav")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--out")
    _add_common(p)

    p = sub.add_parser("batch", help="label every clip in a JSONL manifest")
    p.add_argument("--manifest", required=True, help="JSONL with id/path/start_sec records")
    p.add_argument("--out", required=True, help="output JSONL of label records")
    p.add_argument("--sorted", action="store_true", help="sort output by id instead of manifest order")
    _add_common(p, jobs=True)

    p = sub.add_parser("validate-synthetic", help="hard-label accuracy on the synthetic corpus")
    p.add_argument("--n", type=int, required=True, help="samples per kind")
    p.add_argument("--out", help="write the JSON report here")
    _add_common(p, jobs=True)

    p = sub.add_parser("bench", help="wall-clock cost of the full per-clip pipeline")
    p.add_argument("--n", type=int, required=True, help="number of clips to time")
    p.add_argument("--out", help="write the JSON report here")
    _add_common(p)

    p = sub.add_parser("plot-data", help="scale,ins,gamma,gamma_hlc CSV for one clip")
    p.add_argument("wav")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--out", required=True, help="output CSV path")
    _add_common(p)

    p = sub.add_parser("synth", help="write a synthetic test WAV")
    p.add_argument("--kind", required=True, help="signal kind (e.g. white_noise, impulse_train)")
    p.add_argument("--duration", type=float, default=CLIP_SECONDS, help="seconds")
    p.add_argument("--param", action="append", default=[], help="kind parameter name=value")
    p.add_argument("--fmt", choices=("float32", "int16"), default="float32")
    p.add_argument("--out", required=True, help="output WAV path")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)

    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_analyze(args, settings: Settings) -> int:
    clip = extract_clip(args.wav, args.start, CLIP_SAMPLES)
    from .ins import ins_curve

    curve = ins_curve(clip, settings.curve_scales(), settings.ins_config())
    doc = {
        "clip_id": curve.clip_id,
        "config_fingerprint": curve.config_fingerprint,
        "points": [{"scale": p.scale, "ins": p.ins, "gamma": p.gamma} for p in curve.points],
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return EXIT_OK


def cmd_label(args, settings: Settings) -> int:
    clip = extract_clip(args.wav, args.start, CLIP_SAMPLES)
    result, curve, elapsed_ms = label_clip(
        clip, settings.curve_scales(), settings.ins_config(), settings.hlc_config()
    )
    record = LabelRecord(
        id=os.path.splitext(os.path.basename(args.wav))[0],
        label=result.label,
        region_flags=result.region_flags,
        ins_points=[(p.scale, p.ins, p.gamma) for p in curve.points],
        elapsed_ms=elapsed_ms,
        config_fingerprint=curve.config_fingerprint,
        seed=settings.seed,
    )
    _emit(record.to_json(), args.out)
    return EXIT_OK


def cmd_batch(args, settings: Settings) -> int:
    records = read_manifest(args.manifest)
    labeled, failures = batch_label(
        records,
        base_seed=settings.seed,
        scales=settings.curve_scales(),
        ins_cfg=settings.ins_config(),
        hlc_cfg=settings.hlc_config(),
        clip_samples=CLIP_SAMPLES,
        jobs=settings.jobs,
    )
    write_records(labeled, args.out, sort=args.sorted)
    n_ns = sum(r.label for r in labeled)
    frac = n_ns / len(labeled) if labeled else 0.0
    print(f"labeled {len(labeled)}/{len(records)} clips; non-stationary {n_ns} ({frac:.1%})")
    if failures:
        print(f"failed {len(failures)}: " + ", ".join(fid for fid, _ in failures), file=sys.stderr)
        for fid, reason in failures:
            print(f"  {fid}: {reason}", file=sys.stderr)
    return EXIT_OK


def cmd_validate_synthetic(args, settings: Settings) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    report = validate_synthetic(
        args.n,
        seed=settings.seed,
        ins_cfg=settings.ins_config(),
        hlc_cfg=settings.hlc_config(),
        jobs=settings.jobs,
    )
    print(report.table())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    return EXIT_OK


def cmd_bench(args, settings: Settings) -> int:
    if args.n < 3:
        raise UsageError("--n must be >= 3")
    report = run_bench(
        args.n,
        seed=settings.seed,
        scales=settings.curve_scales(),
        ins_cfg=settings.ins_config(),
        hlc_cfg=settings.hlc_config(),
    )
    print(report.summary())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    return EXIT_OK


def cmd_plot_data(args, settings: Settings) -> int:
    clip = extract_clip(args.wav, args.start, CLIP_SAMPLES)
    from .ins import ins_curve

    curve = ins_curve(clip, settings.curve_scales(), settings.ins_config())
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scale", "ins", "gamma", "gamma_hlc"])
        for p in curve.points:
            writer.writerow([repr(p.scale), repr(p.ins), repr(p.gamma), repr(settings.alpha * p.gamma)])
    return EXIT_OK


def cmd_synth(args) -> int:
    config = load_config_file(args.config) if args.config else {}
    kind = args.kind or config.get("kind")
    seed = args.seed
    if seed is None:
        if "seed" in config:
            seed = int(config["seed"])
        else:
            seed = int(os.environ.get(SEED_ENV_VAR, "0"))
    spec = SynthSpec(kind=kind, params=_parse_params(args.param), seed=seed)
    clip = synth_signal(spec, args.duration)
    write_wav(clip, args.out, fmt=args.fmt)
    print(f"wrote {args.out}: {spec.kind}, {args.duration}s, seed {seed}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "synth":
            return cmd_synth(args)
        settings = resolve_settings(args)
        dispatch = {
            "analyze": cmd_analyze,
            "label": cmd_label,
            "batch": cmd_batch,
            "validate-synthetic": cmd_validate_synthetic,
            "bench": cmd_bench,
            "plot-data": cmd_plot_data,
        }
        return dispatch[args.command](args, settings)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (AudioReadError, UnsupportedAudioError, EmptyAudioError) as exc:
        print(f"audio error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NonstatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
