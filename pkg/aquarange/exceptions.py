"""Exceptions raised by aquarange."""


class AquarangeError(Exception):
    """Base class of every error raised by the package."""


class ParameterError(AquarangeError, ValueError):
    """An operation received an invalid parameter."""


class ScenarioError(ParameterError):
    """A scenario file or command line flag is malformed."""


class InconsistentExchangeError(AquarangeError):
    """The measured intervals yield a negative time of flight."""


class MissedReplySlotError(AquarangeError):
    """The reply had to be written at an index already played out."""


class SpeakerUnderrunError(AquarangeError):
    """A write landed behind the speaker write head."""


class TDMAViolationError(AquarangeError, AssertionError):
    """Two devices were on air at the same instant."""
