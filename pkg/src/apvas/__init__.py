"""Aggregate-signature path validation for BGPsec-style route attestations.

Layered bottom up:

* ``bn254``: pairing-friendly curve arithmetic (fields, groups, optimal
  ate pairing).
* ``group``: byte encodings, hash-to-group, a pairing wrapper with a
  symmetric-looking interface over the two source groups.
* ``bimodal``: the aggregate signature scheme (sequential chains plus
  general claim merging).
* ``wire``: update message and signature block codecs.
* ``baseline``: the per-hop ECDSA scheme used for comparison.
* ``router``: per-router RIB, signing and validation logic, memory model.
* ``netsim``: deterministic topology simulation and the memory experiment.
* ``cli``: the ``apvas`` command line tool.
"""

from .errors import (
    ApvasError,
    ConfigurationError,
    DecodeError,
    DuplicateEntryError,
    EncodeError,
)

__version__ = "0.1.0"

__all__ = [
    "ApvasError",
    "ConfigurationError",
    "DecodeError",
    "DuplicateEntryError",
    "EncodeError",
    "__version__",
]
