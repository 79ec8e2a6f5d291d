"""
Communication system: encoder, AWGN channel, decoders, training and evaluation.
"""

from .encoder import ConstellationTable, encode, encode_batch, qam16_table, random_table
from .channel import AWGNChannel, ChannelConfig, Stream, channel_apply, snr_to_sigma
from .optimizer import AdamState, adam_step
from .baseline import ClassicalDecoder
from .evaluation import (
    decode,
    decoder_confidence,
    export_constellation,
    model_ser,
    qam_reference_ser,
    ser,
    sweep_snr,
)
from .trainer import (
    BaselineModel,
    MetricsHistory,
    QuantumModel,
    TrainResult,
    baseline_train,
    embedding_gradient_check,
    train,
)
from .checkpoint import load_checkpoint, load_model, save_checkpoint

__all__ = [
    'ConstellationTable',
    'encode',
    'encode_batch',
    'qam16_table',
    'random_table',
    'AWGNChannel',
    'ChannelConfig',
    'Stream',
    'channel_apply',
    'snr_to_sigma',
    'AdamState',
    'adam_step',
    'ClassicalDecoder',
    'decode',
    'decoder_confidence',
    'export_constellation',
    'model_ser',
    'qam_reference_ser',
    'ser',
    'sweep_snr',
    'BaselineModel',
    'MetricsHistory',
    'QuantumModel',
    'TrainResult',
    'baseline_train',
    'embedding_gradient_check',
    'train',
    'load_checkpoint',
    'load_model',
    'save_checkpoint',
]
