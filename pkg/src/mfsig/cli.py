"""Command-line interface.

Subcommands: split-bands, mfdfa, analyze, synth, listening, report.
Exit codes: 0 success, 1 data/validation error, 2 usage error. Every JSON
output embeds the resolved configuration and a content hash of its inputs
so runs can be reproduced byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dataio, synth
from .bands import normalize, rms, split_bands
from .errors import AnalysisError
from .pipeline import RunConfig, analyze_recording, analyze_series
from .protocol import aggregate_responses, build_timeline, timeline_from_markers
from .report import emit_report, report_from_json_dict

ENV_WORKERS = "MFSIG_WORKERS"
ENV_OUTDIR = "MFSIG_OUTDIR"


def _default_outdir(flag_value: str | None) -> Path:
    if flag_value is not None:
        return Path(flag_value)
    return Path(os.environ.get(ENV_OUTDIR, "."))


def _default_workers(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    return int(os.environ.get(ENV_WORKERS, "1"))


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def cmd_split_bands(args) -> int:
    audio = dataio.read_wav(args.input)
    outdir = _default_outdir(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    source_level = rms(audio)
    for name, band_ts in split_bands(audio, transition_hz=args.transition).items():
        # bands more than 60 dB below the clip are effectively silent;
        # boosting them would just amplify quantization dust
        if rms(band_ts) >= 1e-3 * source_level:
            band_ts = normalize(band_ts, args.rms)
        dataio.write_wav(outdir / f"{name}.wav", band_ts)
    print(f"wrote 5 band files to {outdir}")
    return 0


def _mfdfa_config_from_args(args) -> RunConfig:
    q_grid = None
    if args.q_min is not None or args.q_max is not None or args.q_step is not None:
        lo = args.q_min if args.q_min is not None else -5.0
        hi = args.q_max if args.q_max is not None else 5.0
        step = args.q_step if args.q_step is not None else 0.25
        n = int(round((hi - lo) / step)) + 1
        q_grid = list(np.linspace(lo, hi, n))
    return RunConfig(
        detrend_order=args.order,
        scales=_parse_int_list(args.scales) if args.scales else None,
        q_grid=q_grid,
        bidirectional=args.bidirectional,
        seed=args.seed,
    )


def cmd_mfdfa(args) -> int:
    ts = dataio.read_series_csv(args.input, sample_rate_hz=args.fs)
    cfg = _mfdfa_config_from_args(args)
    cfg.input_path = str(args.input)
    result, fit = analyze_series(ts, cfg.mfdfa_config())
    payload = {
        "config": cfg.to_json_dict(),
        "inputs": {"path": str(args.input), "sha256": dataio.sha256_file(args.input)},
        "mfdfa": result.to_json_dict(),
        "spectrum": fit.to_json_dict(),
    }
    out = Path(args.output)
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("q,s,fq,log_fq\n")
            for q, s, fq, log_fq in result.to_csv_rows():
                fh.write(f"{q:.6g},{s},{fq:.6g},{log_fq:.6g}\n")
    try:
        summary = f"h(2) = {result.h_at(2.0):.4f}  "
    except ValueError:  # custom q grid without 2
        summary = ""
    print(f"{summary}W = {fit.width:.4f}  -> {out}")
    return 0


def cmd_analyze(args) -> int:
    fs = args.fs if args.fs is not None else dataio.read_fs_sidecar(args.input)
    if fs is None:
        print("error: sampling rate not given (--fs) and no sidecar JSON found", file=sys.stderr)
        return 1
    channels = dataio.read_eeg_csv(args.input)
    if args.markers:
        timeline = timeline_from_markers(dataio.read_markers(args.markers))
    else:
        timeline = build_timeline(args.clips)
    cfg = RunConfig(
        detrend_order=args.order,
        bidirectional=args.bidirectional,
        rhythm_method=args.rhythm_method,
        use_envelope=not args.no_envelope,
        emd_drop=_parse_int_list(args.emd_drop) if args.emd_drop else [],
        seed=args.seed,
        input_path=str(args.input),
    )
    if args.electrodes:
        cfg.electrodes = [e.strip() for e in args.electrodes.split(",") if e.strip()]
    outdir = _default_outdir(args.outdir)
    cfg.outdir = str(outdir)
    workers = _default_workers(args.workers)
    report = analyze_recording(
        channels, fs, timeline, cfg, subject_id=args.subject, workers=workers
    )
    report.inputs = {"path": str(args.input), "sha256": dataio.sha256_file(args.input)}
    if args.markers:
        report.inputs["markers_path"] = str(args.markers)
        report.inputs["markers_sha256"] = dataio.sha256_file(args.markers)
    written = emit_report(report, outdir)
    print(f"wrote {len(written)} files to {outdir}")
    return 0


def cmd_synth(args) -> int:
    if args.kind == "cascade":
        ts = synth.binomial_cascade(args.k, args.a)
    elif args.kind == "fgn":
        ts = synth.fgn(args.n, args.hurst, args.seed)
    elif args.kind == "white":
        ts = synth.white_noise(args.n, args.seed)
    elif args.kind == "tone":
        ts = synth.tone(args.freq, args.fs, args.duration, args.amplitude)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.kind)
    dataio.write_series_csv(args.output, ts)
    print(f"wrote {len(ts)} samples to {args.output}")
    return 0


def cmd_listening(args) -> int:
    sheets = dataio.read_response_sheets(args.input)
    table = aggregate_responses(sheets)
    Path(args.output).write_text(table.to_csv())
    print(f"aggregated {table.n_sheets} sheets -> {args.output}")
    return 0


def cmd_report(args) -> int:
    payload = json.loads(Path(args.input).read_text())
    report = report_from_json_dict(payload)
    written = emit_report(report, _default_outdir(args.outdir))
    print(f"re-emitted {len(written)} files")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfsig",
        description="Multifractal analysis of EEG rhythms and band-split audio stimuli.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split-bands", help="split audio into the five stimulus bands")
    p.add_argument("input", help="input WAV (16/24-bit PCM)")
    p.add_argument("--outdir", default=None, help="output directory (default: $MFSIG_OUTDIR or .)")
    p.add_argument("--rms", type=float, default=0.1, help="per-band target RMS (default 0.1)")
    p.add_argument(
        "--transition", type=float, default=0.0,
        help="raised-cosine edge width in Hz (0 = exact brick-wall)",
    )
    p.set_defaults(func=cmd_split_bands)

    p = sub.add_parser("mfdfa", help="multifractal analysis of one series")
    p.add_argument("input", help="single-column CSV with header")
    p.add_argument("-o", "--output", default="result.json")
    p.add_argument("--csv", default=None, help="also write the (q, s) fluctuation table")
    p.add_argument("--fs", type=float, default=1.0, help="sample rate of the series (Hz)")
    p.add_argument("--order", type=int, default=1, help="detrending polynomial order")
    p.add_argument("--scales", default=None, help="comma-separated scale list (default: auto)")
    p.add_argument("--q-min", type=float, default=None)
    p.add_argument("--q-max", type=float, default=None)
    p.add_argument("--q-step", type=float, default=None)
    p.add_argument("--bidirectional", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_mfdfa)

    p = sub.add_parser("analyze", help="full EEG pipeline for one recording")
    p.add_argument("input", help="EEG CSV: header sample,F3,F4,...")
    p.add_argument("--fs", type=float, default=None, help="sample rate (Hz); else sidecar JSON")
    p.add_argument("--clips", type=int, default=4, help="clips in the nominal timeline")
    p.add_argument("--markers", default=None, help="JSON marker file overriding the timeline")
    p.add_argument("--outdir", default=None)
    p.add_argument("--subject", default="S01")
    p.add_argument("--workers", type=int, default=None, help="parallel jobs (default: $MFSIG_WORKERS or 1)")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--bidirectional", action="store_true")
    p.add_argument("--rhythm-method", choices=("fft", "dwt"), default="fft")
    p.add_argument("--no-envelope", action="store_true", help="analyze band signals, not envelopes")
    p.add_argument("--emd-drop", default=None, help="comma-separated IMF indices to remove first")
    p.add_argument("--electrodes", default=None, help="comma-separated subset to analyze")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="generate a benchmark series as CSV")
    p.add_argument("kind", choices=("cascade", "fgn", "white", "tone"))
    p.add_argument("-o", "--output", default="series.csv")
    p.add_argument("--k", type=int, default=16, help="cascade: series length is 2^k")
    p.add_argument("--a", type=float, default=0.75, help="cascade multiplier in (0.5, 1)")
    p.add_argument("--n", type=int, default=65536, help="fgn/white: series length")
    p.add_argument("--hurst", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--freq", type=float, default=440.0, help="tone frequency (Hz)")
    p.add_argument("--fs", type=float, default=44100.0)
    p.add_argument("--duration", type=float, default=1.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("listening", help="aggregate response sheets into the non-recognition table")
    p.add_argument("input", help="CSV: subject,clip,part1..part5 with 0/1 cells")
    p.add_argument("-o", "--output", default="table.csv")
    p.set_defaults(func=cmd_listening)

    p = sub.add_parser("report", help="re-emit report files from a report.json")
    p.add_argument("input", help="report.json from a previous run")
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AnalysisError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
