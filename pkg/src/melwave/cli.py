"""Command-line front end: segment, evaluate, grid and synth subcommands.

All outputs are CSV with headers (JSON optionally for evaluate). Exit
codes: 0 on success, 1 for runtime and domain errors, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .corpus import load_corpus, synth_corpus, write_corpus
from .errors import MelwaveError
from .evaluator import (
    COMBOS,
    KS,
    METRICS,
    EvalResult,
    PipelineConfig,
    grid_search,
    loocv,
    run_pipeline,
)
from .midi_ingest import parse_midi
from .pitch_signal import sample_melody
from .segmentation import extract_segments, lbdm_boundaries, wavelet_boundaries
from .wavelet import DYADIC_SCALES, cwt_haar


def _fmt(value) -> str:
    """Format a float with at least six significant digits."""
    if value is None:
        return ""
    return format(float(value), ".8g")


def _write_rows(rows, out_path) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerows(rows)
    text = buffer.getvalue()
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_config_flags(parser: argparse.ArgumentParser, with_knn: bool) -> None:
    parser.add_argument("--rate", type=int, default=8, help="samples per quarter note")
    parser.add_argument(
        "--representation", choices=("vr", "wr"), default="vr", help="segment values"
    )
    parser.add_argument(
        "--segmentation", choices=("ws", "lbdm"), required=True, help="boundary method"
    )
    parser.add_argument(
        "--scale", type=int, choices=range(1, 9), metavar="{1..8}",
        help="dyadic scale index (kernel of 2**index samples)",
    )
    parser.add_argument(
        "--threshold", type=float, choices=[round(0.1 * i, 1) for i in range(1, 9)],
        metavar="{0.1..0.8}", help="LBDM boundary threshold",
    )
    if with_knn:
        parser.add_argument("--k", type=int, choices=KS, default=1, help="kNN neighbours")
        parser.add_argument(
            "--metric", choices=("euclidean", "cityblock"), default="cityblock"
        )


def _config_from_args(parser, args, k: int = 1, metric: str = "cityblock") -> PipelineConfig:
    try:
        return PipelineConfig(
            representation=args.representation,
            segmentation=args.segmentation,
            scale_index=args.scale,
            threshold=args.threshold,
            k=k,
            metric=metric,
            rate=args.rate,
        )
    except ValueError as exc:
        parser.error(str(exc))


def cmd_segment(parser, args) -> int:
    config = _config_from_args(parser, args)
    data = Path(args.midi).read_bytes()
    melody = parse_midi(data, Path(args.midi).stem)
    signal = sample_melody(melody, config.rate)
    if config.segmentation == "ws":
        cuts = wavelet_boundaries(signal, config.scale_samples)
    else:
        cuts = lbdm_boundaries(melody, config.threshold, config.rate)
    if config.representation == "wr":
        series = cwt_haar(signal.samples, [config.scale_samples]).row(config.scale_samples)
    else:
        series = signal.samples
    segments = extract_segments(series, cuts, config.representation, melody.id)

    rows = [["melody_id", "cut_samples"], [melody.id, " ".join(str(c) for c in cuts)]]
    rows.append([])
    rows.append(["melody_id", "start", "end", "values"])
    for seg in segments:
        rows.append(
            [seg.melody_id, seg.start, seg.end, " ".join(_fmt(v) for v in seg.values)]
        )
    _write_rows(rows, args.out)

    if args.coeffs_out:
        coeffs = cwt_haar(signal.samples, list(DYADIC_SCALES))
        header = ["scale"] + [f"p{i}" for i in range(len(signal.samples))]
        coeff_rows = [header]
        for scale, row in zip(coeffs.scales, coeffs.matrix):
            coeff_rows.append([scale] + [_fmt(v) for v in row])
        _write_rows(coeff_rows, args.coeffs_out)
    return 0


def _result_rows(result: EvalResult):
    cfg = result.config
    rows = [
        [
            "representation", "segmentation", "scale", "threshold",
            "k", "metric", "accuracy",
        ],
        [
            cfg.representation,
            cfg.segmentation,
            cfg.scale_index if cfg.scale_index is not None else "",
            _fmt(cfg.threshold) if cfg.threshold is not None else "",
            cfg.k,
            cfg.metric.value,
            _fmt(result.accuracy),
        ],
        [],
        ["melody_id", "true_label", "predicted_label"],
    ]
    rows.extend(list(p) for p in result.predictions)
    return rows


def cmd_evaluate(parser, args) -> int:
    corpus = load_corpus(args.corpus, args.labels)
    config = _config_from_args(parser, args, k=args.k, metric=args.metric)
    result = loocv(corpus, config)
    if args.json:
        payload = {
            "config": {
                "representation": config.representation,
                "segmentation": config.segmentation,
                "scale": config.scale_index,
                "threshold": config.threshold,
                "k": config.k,
                "metric": config.metric.value,
                "rate": config.rate,
            },
            "accuracy": result.accuracy,
            "predictions": [
                {"melody_id": m, "true_label": t, "predicted_label": p}
                for m, t, p in result.predictions
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        _write_rows(_result_rows(result), args.out)
    return 0


def cmd_grid(parser, args) -> int:
    corpus = load_corpus(args.corpus, args.labels)
    results, summary = grid_search(corpus, rate=args.rate)

    rows = [
        ["representation", "segmentation", "scale", "threshold", "k", "metric", "accuracy"]
    ]
    for result in results:
        cfg = result.config
        rows.append(
            [
                cfg.representation,
                cfg.segmentation,
                cfg.scale_index if cfg.scale_index is not None else "",
                _fmt(cfg.threshold) if cfg.threshold is not None else "",
                cfg.k,
                cfg.metric.value,
                _fmt(result.accuracy),
            ]
        )
    _write_rows(rows, args.out)

    summary_rows = [
        ["metric", "representation", "segmentation", "value", "k1", "k2", "k3", "k4", "k5"]
    ]
    for metric in METRICS:
        for rep, seg in COMBOS:
            for kind, pick in (("best", 0), ("worst", 1)):
                cells = [_fmt(summary[(metric, rep, seg, k)][pick]) for k in KS]
                summary_rows.append([metric.value, rep, seg, kind] + cells)
    _write_rows(summary_rows, args.summary_out)

    scored = [r for r in results if r.accuracy is not None]
    if scored:
        best = max(scored, key=lambda r: r.accuracy)
        cfg = best.config
        print(
            "best: representation={} segmentation={} scale={} threshold={} "
            "k={} metric={} accuracy={}".format(
                cfg.representation,
                cfg.segmentation,
                cfg.scale_index if cfg.scale_index is not None else "-",
                _fmt(cfg.threshold) if cfg.threshold is not None else "-",
                cfg.k,
                cfg.metric.value,
                _fmt(best.accuracy),
            )
        )
    return 0


def cmd_synth(parser, args) -> int:
    if args.families < 2:
        parser.error("--families must be at least 2")
    if args.variants < 1:
        parser.error("--variants must be at least 1")
    if not 0.0 <= args.ornament_prob <= 1.0:
        parser.error("--ornament-prob must be in [0, 1]")
    if args.transpose_range < 0:
        parser.error("--transpose-range must be non-negative")
    corpus = synth_corpus(
        args.seed,
        args.families,
        args.variants,
        transpose_range=args.transpose_range,
        ornament_prob=args.ornament_prob,
    )
    paths = write_corpus(corpus, args.out)
    print(f"wrote {len(paths) - 1} MIDI files and labels.csv to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="melwave",
        description="Wavelet filtering, segmentation and tune-family "
        "classification of symbolic melodies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_segment = sub.add_parser("segment", help="segment one MIDI file")
    p_segment.add_argument("midi", help="path to a MIDI file")
    _add_config_flags(p_segment, with_knn=False)
    p_segment.add_argument("--out", help="write boundary+segment CSV here")
    p_segment.add_argument("--coeffs-out", help="also dump the coefficient matrix CSV")
    p_segment.set_defaults(func=cmd_segment, parser=p_segment)

    p_eval = sub.add_parser("evaluate", help="LOOCV accuracy of one configuration")
    p_eval.add_argument("--corpus", required=True, help="directory of MIDI files")
    p_eval.add_argument("--labels", help="label CSV (default: <corpus>/labels.csv)")
    _add_config_flags(p_eval, with_knn=True)
    p_eval.add_argument("--out", help="output path (default: stdout)")
    p_eval.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p_eval.set_defaults(func=cmd_evaluate, parser=p_eval)

    p_grid = sub.add_parser("grid", help="full parameter grid search")
    p_grid.add_argument("--corpus", required=True, help="directory of MIDI files")
    p_grid.add_argument("--labels", help="label CSV (default: <corpus>/labels.csv)")
    p_grid.add_argument("--rate", type=int, default=8, help="samples per quarter note")
    p_grid.add_argument("--out", help="results CSV path (default: stdout)")
    p_grid.add_argument("--summary-out", help="summary CSV path (default: stdout)")
    p_grid.set_defaults(func=cmd_grid, parser=p_grid)

    p_synth = sub.add_parser("synth", help="write a synthetic labeled corpus")
    p_synth.add_argument("--seed", type=int, required=True)
    p_synth.add_argument("--families", type=int, required=True)
    p_synth.add_argument("--variants", type=int, required=True)
    p_synth.add_argument("--ornament-prob", type=float, default=0.15)
    p_synth.add_argument("--transpose-range", type=int, default=7)
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.set_defaults(func=cmd_synth, parser=p_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args.parser, args)
    except MelwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
