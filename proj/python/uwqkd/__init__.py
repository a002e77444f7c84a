"""Underwater BB84 link model: optics, channel, QBER, key rates and sweeps."""

from ._uwqkd import (
    Config,
    ConfigError,
    DomainError,
    InfeasibleError,
    Link,
    ProtocolParams,
    SystemParams,
    TableGapError,
    binary_entropy,
    bs_reflect_matrix,
    bs_transmit_matrix,
    figure_csv,
    format_number,
    key_rate,
    load_config,
    max_distance,
    parse_config,
    polarizer_matrix,
    preset,
    qber,
    sifted_rate,
    sweep_csv,
    train_contrast,
    waveplate_matrix,
    worst_case_contrast,
)

__all__ = [name for name in dir() if not name.startswith("_")]
