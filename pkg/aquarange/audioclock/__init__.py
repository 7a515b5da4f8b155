"""Submodule modelling the speaker and microphone stream clocks."""

from aquarange.audioclock.stream_clock import StreamClock, speaker_time, mic_time
from aquarange.audioclock.speaker_stream import SpeakerStream
from aquarange.audioclock.calibration import (
    CalibrationState,
    ClockCalibrator,
    schedule_reply,
    reply_error,
)

__all__ = [
    "StreamClock",
    "speaker_time",
    "mic_time",
    "SpeakerStream",
    "CalibrationState",
    "ClockCalibrator",
    "schedule_reply",
    "reply_error",
]
