"""Per-hop ECDSA suite used as the comparison point.

Curve P-384 with SHA-384, deterministic nonces.  Signatures travel as raw
r||s, 96 bytes; the DER form the library produces is converted at the
boundary.  A router is identified in signature blocks by its SKI, the
first 20 bytes of SHA-256 over the uncompressed public point.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.asymmetric.utils import (
    decode_dss_signature,
    encode_dss_signature,
)

SIG_LEN = 96
_HALF = SIG_LEN // 2

# group order of P-384
_ORDER = int(
    "ffffffffffffffffffffffffffffffffffffffffffffffff"
    "c7634d81f4372ddf581a0db248b0a77aecec196accc52973", 16)

_SIGALG = ec.ECDSA(hashes.SHA384(), deterministic_signing=True)


@dataclass(frozen=True)
class BaselineKeyPair:
    private_key: ec.EllipticCurvePrivateKey
    pk: bytes  # X9.62 uncompressed point, 97 bytes
    ski: bytes  # 20 bytes


def key_ski(pk: bytes) -> bytes:
    return hashlib.sha256(pk).digest()[:20]


def baseline_key_gen(rng) -> BaselineKeyPair:
    """Derive a keypair from ``rng`` so topologies rebuild identically."""
    scalar = rng.randrange(1, _ORDER)
    priv = ec.derive_private_key(scalar, ec.SECP384R1())
    pk = priv.public_key().public_bytes(
        serialization.Encoding.X962,
        serialization.PublicFormat.UncompressedPoint)
    return BaselineKeyPair(private_key=priv, pk=pk, ski=key_ski(pk))


def baseline_sign(keypair: BaselineKeyPair, message: bytes) -> bytes:
    der = keypair.private_key.sign(message, _SIGALG)
    r, s = decode_dss_signature(der)
    return r.to_bytes(_HALF, "big") + s.to_bytes(_HALF, "big")


def baseline_verify(pk: bytes, message: bytes, sig: bytes) -> bool:
    if len(sig) != SIG_LEN:
        return False
    r = int.from_bytes(sig[:_HALF], "big")
    s = int.from_bytes(sig[_HALF:], "big")
    if not (1 <= r < _ORDER and 1 <= s < _ORDER):
        return False
    try:
        pub = ec.EllipticCurvePublicKey.from_encoded_point(ec.SECP384R1(), pk)
        pub.verify(encode_dss_signature(r, s), message, _SIGALG)
        return True
    except (InvalidSignature, ValueError):
        return False
