"""Key-value config files for network geometry and run parameters.

Schema (one `key = value` pair per line, '#' starts a comment):

    L = 2                     cells
    K = 2                     users per cell
    M = 3                     transmit antennas (homogeneous)
    N = 2                     receive antennas (homogeneous)
    tx_antennas_per_user = 2, 2, 2, 2    heterogeneous alternative to M
    rx_antennas_per_cell = 2, 2          heterogeneous alternative to N
    beta = 1                  streams per user
    snr_db = 40, 50, 60, 70, 80
    distribution = rayleigh
    seed = 7                  default RNG seed for runs
    trials = 100              default Monte Carlo trial count
"""

from __future__ import annotations

from pathlib import Path

from .exceptions import ConfigurationError
from .network import NetworkConfig

_NETWORK_KEYS = {
    "L",
    "K",
    "M",
    "N",
    "tx_antennas_per_user",
    "rx_antennas_per_cell",
    "beta",
    "snr_db",
    "distribution",
}
_RUN_KEYS = {"seed", "trials"}


def parse_key_values(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigurationError(f"line {lineno}: empty key or value in {raw!r}")
        if key in values:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def _int_list(value: str) -> tuple[int, ...]:
    return tuple(int(tok.strip()) for tok in value.split(",") if tok.strip())


def _float_list(value: str) -> tuple[float, ...]:
    return tuple(float(tok.strip()) for tok in value.split(",") if tok.strip())


def load_config(path: str | Path) -> tuple[NetworkConfig, dict]:
    """Parse a config file into a NetworkConfig plus run parameters
    (seed, trials) with defaults filled in."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    values = parse_key_values(text)
    unknown = set(values) - _NETWORK_KEYS - _RUN_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    try:
        kwargs: dict = {
            "L": int(values["L"]),
            "K": int(values["K"]),
        }
        if "M" in values:
            kwargs["M"] = int(values["M"])
        if "N" in values:
            kwargs["N"] = int(values["N"])
        if "tx_antennas_per_user" in values:
            kwargs["tx_antennas_per_user"] = _int_list(values["tx_antennas_per_user"])
        if "rx_antennas_per_cell" in values:
            kwargs["rx_antennas_per_cell"] = _int_list(values["rx_antennas_per_cell"])
        if "beta" in values:
            kwargs["beta"] = int(values["beta"])
        if "snr_db" in values:
            kwargs["snr_db"] = _float_list(values["snr_db"])
        if "distribution" in values:
            kwargs["distribution"] = values["distribution"]
    except (KeyError, ValueError) as exc:
        raise ConfigurationError(f"bad config file {path}: {exc}") from exc
    cfg = NetworkConfig(**kwargs)
    run = {
        "seed": int(values.get("seed", 0)),
        "trials": int(values.get("trials", 100)),
    }
    return cfg, run
