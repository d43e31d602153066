"""Exceptions raised by the noiselet_spc package."""


class NoiseletSpcError(Exception):
    """Base class for every error raised by this package."""


class SizeError(NoiseletSpcError, ValueError):
    """A size or shape is not a power of two or does not match."""


class DenseLimitError(NoiseletSpcError, MemoryError):
    """A dense matrix was requested beyond the configured size limit."""


class IndexRangeError(NoiseletSpcError, IndexError):
    """A 1-based row index lies outside 1..n."""


class OverflowRiskError(NoiseletSpcError, OverflowError):
    """An integer transform could overflow its bit width."""


class PlanError(NoiseletSpcError, ValueError):
    """A sampling plan is malformed or inconsistent with its inputs."""


class PatternError(NoiseletSpcError, ValueError):
    """A pattern is not binary or has the wrong length."""


class BundleOverflowError(OverflowRiskError):
    """More payload planes were requested than the integer width permits."""


class StreamFormatError(NoiseletSpcError, IOError):
    """A bundle stream or record file is malformed."""


class MeasurementError(NoiseletSpcError, ValueError):
    """A measurement record does not fit the plan or image it is used with."""


class ReconError(NoiseletSpcError, ValueError):
    """Reconstruction inputs are inconsistent."""


class ImageFormatError(NoiseletSpcError, ValueError):
    """An image cannot be used as a scene (geometry or pixel format)."""
