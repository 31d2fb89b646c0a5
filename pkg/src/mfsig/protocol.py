"""Experiment protocol: stimulus timeline, recording segmentation,
electrode registry, and listening-test aggregation.

Each clip is presented as the original followed by five band-filtered
parts in a fixed jumbled order; the timeline places a 60 s rest at the
start, 5 s silent gaps between stimuli, and a 30 s rest after each clip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadPartError,
    DataFormatError,
    NoSheetsError,
    RecordingTooShortError,
)
from .series import TimeSeries

# Part order on the response template: part 1 plays band 3, and so on.
PART_TO_BAND = {1: 3, 2: 2, 3: 5, 4: 4, 5: 1}
BAND_TO_PART = {band: part for part, band in PART_TO_BAND.items()}

N_PARTS = 5
N_CLIPS_SHEET = 4

INITIAL_REST_S = 60.0
STIMULUS_S = 20.0
GAP_S = 5.0
CLIP_REST_S = 30.0

ALL_ELECTRODES = (
    "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8",
    "T3", "C3", "Cz", "C4", "T4",
    "T5", "P3", "Pz", "P4", "T6",
    "O1", "O2",
)
DEFAULT_ANALYZED = ("F3", "F4", "F7", "F8", "T3", "T4", "T5", "T6", "O1", "O2")


@dataclass(frozen=True)
class ElectrodeRegistry:
    """The full 10-20 montage and the subset selected for analysis."""

    all: tuple = ALL_ELECTRODES
    analyzed: tuple = DEFAULT_ANALYZED

    def __post_init__(self):
        missing = [e for e in self.analyzed if e not in self.all]
        if missing:
            raise ValueError(f"analyzed electrodes not in montage: {missing}")


@dataclass(frozen=True)
class Condition:
    """One experimental condition: a rest period or a stimulus window."""

    kind: str  # "rest" | "original" | "band"
    start_s: float
    end_s: float
    clip: int | None = None
    band: int | None = None

    def __post_init__(self):
        if self.kind not in ("rest", "original", "band"):
            raise ValueError(f"unknown condition kind {self.kind!r}")
        if self.end_s <= self.start_s:
            raise ValueError("condition must have positive duration")

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s

    @property
    def label(self) -> str:
        if self.kind == "rest":
            return "rest"
        if self.kind == "original":
            return f"clip{self.clip}_original"
        return f"clip{self.clip}_band{self.band}"

    @property
    def is_stimulus(self) -> bool:
        return self.kind != "rest"


@dataclass(frozen=True)
class ProtocolTimeline:
    """Ordered, non-overlapping conditions covering one recording."""

    conditions: tuple
    n_clips: int

    def __post_init__(self):
        prev_end = 0.0
        for cond in self.conditions:
            if cond.start_s < prev_end - 1e-9:
                raise ValueError(f"conditions overlap at {cond.start_s}s")
            prev_end = cond.end_s

    @property
    def total_duration_s(self) -> float:
        return self.conditions[-1].end_s if self.conditions else 0.0

    def stimulus_conditions(self) -> list:
        return [c for c in self.conditions if c.is_stimulus]

    def baseline(self) -> Condition:
        """The initial long rest used as the no-music reference."""
        for cond in self.conditions:
            if cond.kind == "rest":
                return cond
        raise ValueError("timeline has no rest condition")


def part_to_band(part: int) -> int:
    """Template position (1..5) to stimulus band id."""
    if part not in PART_TO_BAND:
        raise BadPartError(f"part must be 1..5, got {part}")
    return PART_TO_BAND[part]


def build_timeline(n_clips: int) -> ProtocolTimeline:
    """Full session timeline for n_clips clips.

    60 s rest, then per clip: original and the five band parts (20 s
    each) separated by 5 s gaps, closed by a 30 s rest. Total duration is
    60 + 175 * n_clips seconds.
    """
    if n_clips < 1:
        raise ValueError("need at least one clip")
    t = 0.0
    conditions = [Condition("rest", 0.0, INITIAL_REST_S)]
    t = INITIAL_REST_S
    for clip in range(1, n_clips + 1):
        stimuli = [("original", None)] + [("band", PART_TO_BAND[p]) for p in range(1, 6)]
        for i, (kind, band) in enumerate(stimuli):
            if i > 0:
                conditions.append(Condition("rest", t, t + GAP_S))
                t += GAP_S
            conditions.append(Condition(kind, t, t + STIMULUS_S, clip=clip, band=band))
            t += STIMULUS_S
        conditions.append(Condition("rest", t, t + CLIP_REST_S))
        t += CLIP_REST_S
    return ProtocolTimeline(conditions=tuple(conditions), n_clips=n_clips)


def timeline_from_markers(markers: list[dict], n_clips: int | None = None) -> ProtocolTimeline:
    """Timeline from explicit marker entries, overriding the nominal one.

    Each marker is {"label": ..., "start_s": ..., "end_s": ...} with
    labels "rest", "clip<N>_original", or "clip<N>_band<B>".
    """
    conditions = []
    clips = set()
    for i, mk in enumerate(markers):
        try:
            label = mk["label"]
            start, end = float(mk["start_s"]), float(mk["end_s"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"marker {i}: {exc}") from exc
        if label == "rest":
            conditions.append(Condition("rest", start, end))
            continue
        try:
            clip_part, _, stim = label.partition("_")
            clip = int(clip_part.removeprefix("clip"))
            if stim == "original":
                cond = Condition("original", start, end, clip=clip)
            elif stim.startswith("band"):
                cond = Condition("band", start, end, clip=clip, band=int(stim.removeprefix("band")))
            else:
                raise ValueError(f"unknown stimulus {stim!r}")
        except ValueError as exc:
            raise DataFormatError(f"marker {i}: bad label {label!r}") from exc
        clips.add(clip)
        conditions.append(cond)
    conditions.sort(key=lambda c: c.start_s)
    return ProtocolTimeline(
        conditions=tuple(conditions),
        n_clips=n_clips if n_clips is not None else (max(clips) if clips else 0),
    )


def segment_recording(eeg: TimeSeries, timeline: ProtocolTimeline) -> list:
    """Cut the recording into per-condition windows.

    Windows are [round(start * fs), round(end * fs)); the recording must
    cover the whole timeline.
    """
    fs = eeg.sample_rate_hz
    out = []
    for cond in timeline.conditions:
        lo = int(round(cond.start_s * fs))
        hi = int(round(cond.end_s * fs))
        if hi > len(eeg):
            raise RecordingTooShortError(
                f"recording ends before condition {cond.label!r} "
                f"({cond.start_s:g}-{cond.end_s:g} s needs {hi} samples, have {len(eeg)})"
            )
        out.append((cond, eeg.with_samples(eeg.samples[lo:hi])))
    return out


@dataclass(frozen=True)
class ResponseSheet:
    """One listener's non-recognition marks, 4 clips x 5 parts."""

    subject_id: str
    marks: np.ndarray  # bool, shape (4, 5); True = could not recognize

    def __post_init__(self):
        arr = np.asarray(self.marks, dtype=bool)
        if arr.shape != (N_CLIPS_SHEET, N_PARTS):
            raise ValueError(f"response sheet must be 4x5, got {arr.shape}")
        object.__setattr__(self, "marks", arr)


@dataclass(frozen=True)
class RecognitionTable:
    """Non-recognition percentages per (clip, band), integers 0..100."""

    percentages: np.ndarray  # int, shape (4, 5); column j is band j+1
    n_sheets: int

    def value(self, clip: int, band: int) -> int:
        return int(self.percentages[clip - 1, band - 1])

    def to_csv(self) -> str:
        lines = ["clip," + ",".join(f"band{b}" for b in range(1, 6))]
        for clip in range(1, N_CLIPS_SHEET + 1):
            row = ",".join(str(self.value(clip, b)) for b in range(1, 6))
            lines.append(f"{clip},{row}")
        return "\n".join(lines) + "\n"


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5).astype(int)


def aggregate_responses(sheets: list) -> RecognitionTable:
    """Percentage of sheets marking each (clip, band), via the part map."""
    if not sheets:
        raise NoSheetsError("no response sheets to aggregate")
    counts = np.zeros((N_CLIPS_SHEET, N_PARTS), dtype=int)
    for sheet in sheets:
        counts += sheet.marks
    by_band = np.zeros_like(counts)
    for part, band in PART_TO_BAND.items():
        by_band[:, band - 1] = counts[:, part - 1]
    pct = _round_half_up(100.0 * by_band / len(sheets))
    return RecognitionTable(percentages=pct, n_sheets=len(sheets))
