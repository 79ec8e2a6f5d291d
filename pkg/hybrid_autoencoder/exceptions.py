"""
Exception hierarchy for the hybrid autoencoder package.
"""


class HybridAutoencoderError(Exception):
    """Base class for all errors raised by the package"""


class InvalidInputError(HybridAutoencoderError, ValueError):
    """An argument, shape or configuration value was rejected"""


class TrainingAbortedError(HybridAutoencoderError):
    """Training stopped because the model reached an unusable state"""


class DeviceModelError(HybridAutoencoderError):
    """A device description is inconsistent or incomplete"""


class CheckpointError(HybridAutoencoderError):
    """A checkpoint file is missing or cannot be parsed"""
