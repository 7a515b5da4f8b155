"""Submodule providing the default constants of the ranging stack."""

from typing import Tuple

SAMPLE_RATE_HZ = 44100
BAND_LOW_HZ = 1000.0
BAND_HIGH_HZ = 5000.0

SHORT_FFT_SIZE = 1536
SHORT_CP_LEN = 206
LONG_FFT_SIZE = 2340
LONG_CP_LEN = 300

PN_SIGNS: Tuple[int, ...] = (-1, 1, 1, 1, 1, 1, -1, 1)
NUMBER_OF_SYMBOLS = len(PN_SIGNS)
ZC_ROOT = 7
EDGE_TAPER = 0.2

ID_TONE_BASE_HZ = 1500.0
ID_TONE_SPACING_HZ = 35.0
NUMBER_OF_IDS = 16
ID_TONE_TABLE: Tuple[float, ...] = tuple(
    ID_TONE_BASE_HZ + ID_TONE_SPACING_HZ * i for i in range(NUMBER_OF_IDS)
)
ID_TONE_SECONDS = 0.1
ID_SNR_FLOOR_DB = 3.0

AUTOCORR_THRESHOLD = 0.35
BUFFER_SECONDS = 0.5

CHANNEL_LENGTH = 1260
NOISE_FLOOR_TAPS = 100
LAMBDA_MARGIN = 0.2
MIC_SEPARATION_M = 0.15

DEFAULT_SOUND_SPEED = 1500.0
REPLY_INTERVAL_S = 1.0
EXCHANGE_PERIOD_S = 2.0
REPLY_TIMEOUT_FACTOR = 3.0
CALIBRATION_RETRY_S = 2.0
SPEAKER_LATENCY_S = 0.01

MAX_CLOCK_SKEW = 1e-3
THREADS_ENV_VAR = "AQUARANGE_THREADS"
