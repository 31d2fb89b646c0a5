"""End-to-end EEG analysis: segmentation, rhythm extraction, MFDFA,
spectrum fitting, and report assembly.

The unit of work is one (electrode, condition) window; jobs are pure and
independent, so they can run across processes. Results are merged by a
deterministic key sort, which makes the emitted report identical for any
worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bands
from .emd import emd_denoise
from .errors import DataFormatError, RecordingTooShortError
from .mfdfa import MfdfaConfig, MfdfaResult, run_mfdfa
from .protocol import DEFAULT_ANALYZED, ProtocolTimeline
from .report import AnalysisReport, WidthRecord, record_sort_key
from .series import TimeSeries
from .spectrum import SpectrumFit, fit_spectrum, singularity_spectrum


DEFAULT_RHYTHM_BANDS = {name: (r.band.low_hz, r.band.high_hz) for name, r in bands.RHYTHMS.items()}


@dataclass
class RunConfig:
    """Resolved settings for one analysis run; JSON-serializable."""

    detrend_order: int = 1
    scales: list | None = None  # None = auto per window length
    q_grid: list | None = None  # None = default -5..5 step 0.25
    bidirectional: bool = False
    rhythms: dict = field(default_factory=lambda: dict(DEFAULT_RHYTHM_BANDS))
    rhythm_method: str = "fft"
    use_envelope: bool = True
    emd_drop: list = field(default_factory=list)
    baseline: str = "initial_rest"
    electrodes: list = field(default_factory=lambda: list(DEFAULT_ANALYZED))
    seed: int = 0
    input_path: str = ""
    outdir: str = ""

    def mfdfa_config(self) -> MfdfaConfig:
        return MfdfaConfig(
            detrend_order=self.detrend_order,
            scales=None if self.scales is None else np.asarray(self.scales),
            q_grid=None if self.q_grid is None else np.asarray(self.q_grid),
            bidirectional=self.bidirectional,
        )

    def to_json_dict(self) -> dict:
        return {
            "detrend_order": self.detrend_order,
            "scales": self.scales,
            "q_grid": self.q_grid,
            "bidirectional": self.bidirectional,
            "rhythms": {k: list(v) for k, v in self.rhythms.items()},
            "rhythm_method": self.rhythm_method,
            "use_envelope": self.use_envelope,
            "emd_drop": self.emd_drop,
            "baseline": self.baseline,
            "electrodes": self.electrodes,
            "seed": self.seed,
            "input_path": self.input_path,
            "outdir": self.outdir,
        }


def analyze_series(ts: TimeSeries, config: MfdfaConfig | None = None) -> tuple[MfdfaResult, SpectrumFit]:
    """MFDFA plus spectrum fit for a single series."""
    result = run_mfdfa(ts, config)
    fit = fit_spectrum(singularity_spectrum(result.hurst))
    return result, fit


def _fit_flags(result: MfdfaResult, fit: SpectrumFit) -> str:
    flags = []
    if not fit.concave:
        flags.append("nonconcave")
    if fit.monofractal_degenerate:
        flags.append("monofractal_degenerate")
    if not result.hurst.monotone:
        flags.append("h_nonmonotone")
    if result.negative_q_blowup:
        flags.append("negative_q_blowup")
    return ";".join(flags)


def _h2_diagnostics(result: MfdfaResult) -> tuple[float, float]:
    idx = np.flatnonzero(np.isclose(result.q_grid, 2.0, atol=1e-12))
    if idx.size == 0:
        return float("nan"), float("nan")
    return float(result.hurst.h[idx[0]]), float(result.hurst.r2[idx[0]])


def _run_job(job: tuple) -> list[dict]:
    """Analyze one (electrode, condition) window across all rhythms."""
    subject, electrode, label, samples, fs, cfg_dict = job
    cfg = RunConfig(**cfg_dict)
    window = TimeSeries(samples, fs)
    if cfg.emd_drop:
        window = emd_denoise(window, drop_imfs=list(cfg.emd_drop))
    records = []
    for rhythm_name in sorted(cfg.rhythms):
        low, high = cfg.rhythms[rhythm_name]
        spec = bands.RhythmSpec(rhythm_name, bands.BandSpec(low, high, rhythm_name))
        signal = bands.extract_rhythm(window, spec, method=cfg.rhythm_method)
        if cfg.use_envelope:
            signal = bands.envelope(signal)
        result, fit = analyze_series(signal, cfg.mfdfa_config())
        _, h2_r2 = _h2_diagnostics(result)
        records.append(
            {
                "subject": subject,
                "electrode": electrode,
                "rhythm": rhythm_name,
                "condition": label,
                "w": fit.width,
                "fit_a": fit.a,
                "fit_b": fit.b,
                "alpha0": fit.alpha0,
                "h2_r2": h2_r2,
                "flags": _fit_flags(result, fit),
            }
        )
    return records


def analyze_recording(
    channels: dict[str, np.ndarray],
    fs: float,
    timeline: ProtocolTimeline,
    config: RunConfig,
    subject_id: str = "S01",
    workers: int = 1,
) -> AnalysisReport:
    """Per-electrode, per-condition widths for one recording.

    The baseline window (initial rest) and every stimulus window are
    analyzed; deltas against the baseline are computed at emission time.
    """
    missing = [e for e in config.electrodes if e not in channels]
    if missing:
        raise DataFormatError(f"recording is missing electrode column(s): {', '.join(missing)}")

    conditions = [timeline.baseline()] + timeline.stimulus_conditions()
    cfg_dict = config.to_json_dict()
    jobs = []
    for electrode in config.electrodes:
        ts = TimeSeries(channels[electrode], fs)
        for cond in conditions:
            lo = int(round(cond.start_s * fs))
            hi = int(round(cond.end_s * fs))
            if hi > len(ts):
                raise RecordingTooShortError(
                    f"recording ends before condition {cond.label!r}"
                )
            jobs.append((subject_id, electrode, cond.label, ts.samples[lo:hi], fs, cfg_dict))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs, chunksize=4))
    else:
        results = [_run_job(job) for job in jobs]

    report = AnalysisReport(registry=tuple(config.electrodes), config=cfg_dict)
    records = [WidthRecord(
        subject_id=d["subject"], electrode=d["electrode"], rhythm=d["rhythm"],
        condition=d["condition"], w=d["w"], fit_a=d["fit_a"], fit_b=d["fit_b"],
        alpha0=d["alpha0"], h2_r2=d["h2_r2"], flags=d["flags"],
    ) for per_job in results for d in per_job]
    for rec in sorted(records, key=record_sort_key):
        report.add(rec)
    return report
