"""macdof: degrees-of-freedom analysis toolkit for multicell multiuser MIMO.

Exact outer-bound evaluation, constructive linear interference-nulling
schemes with numerical certificates, null-space multiplicity analysis,
downlink multiuser-diversity scheduling, and a seeded Monte Carlo harness.
"""

from .exceptions import (
    ConfigurationError,
    ContractViolationError,
    FactorizationError,
    MacdofError,
    VerificationError,
)
from .network import ChannelSet, NetworkConfig, realize_downlink, realize_uplink

__version__ = "0.1.0"

__all__ = [
    "ChannelSet",
    "ConfigurationError",
    "ContractViolationError",
    "FactorizationError",
    "MacdofError",
    "NetworkConfig",
    "VerificationError",
    "realize_downlink",
    "realize_uplink",
    "__version__",
]
