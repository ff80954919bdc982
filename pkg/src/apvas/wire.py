"""Update message codecs for the three suites.

One update message carries an NLRI, a secure path (most recent AS first),
and at most one signature block.  Three variants exist on the wire:

* plain: no signature block at all,
* conventional (suite id 0x01): one {SKI, length, signature} entry per
  path segment,
* aggregate (suite id 0xA1): a single 64-byte sigma plus one 20-byte SKI
  per path segment.

Layouts are specified bit-exactly in formats.md at the repo root.  All
integers are big-endian.  ``build_signed_octets`` produces the byte string
a signer at a given path position commits to; it contains no signature
bytes, so two messages differing only in signature content sign
identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .errors import DecodeError, EncodeError

SUITE_CONVENTIONAL = 0x01
SUITE_APVAS = 0xA1

SKI_LEN = 20
SIGMA_LEN = 64
SEGMENT_LEN = 6


@dataclass(frozen=True)
class Nlri:
    prefix_len: int
    prefix: bytes

    def as_text(self) -> str:
        padded = self.prefix.ljust(4, b"\x00")
        return ".".join(str(b) for b in padded) + f"/{self.prefix_len}"


def nlri_from_text(text: str) -> Nlri:
    """Parse dotted-quad/len notation, e.g. "198.18.4.0/24"."""
    addr, _, plen = text.partition("/")
    prefix_len = int(plen)
    octets = bytes(int(x) for x in addr.split("."))
    if len(octets) != 4 or not 0 <= prefix_len <= 32:
        raise ValueError(f"bad prefix: {text!r}")
    nbytes = (prefix_len + 7) // 8
    if any(octets[nbytes:]):
        raise ValueError(f"host bits set beyond /{prefix_len}: {text!r}")
    return Nlri(prefix_len=prefix_len, prefix=octets[:nbytes])


@dataclass(frozen=True)
class SecurePathSegment:
    pcount: int
    flags: int
    as_number: int


@dataclass(frozen=True)
class SignatureBlockConventional:
    """Per-segment entries, most recent signer first (same order as the path)."""

    entries: Tuple[Tuple[bytes, bytes], ...]  # (ski, sig)


@dataclass(frozen=True)
class SignatureBlockApvas:
    sigma: bytes
    skis: Tuple[bytes, ...]  # most recent signer first


SigBlock = Union[SignatureBlockConventional, SignatureBlockApvas]


@dataclass(frozen=True)
class UpdateMessage:
    nlri: Nlri
    secure_path: Tuple[SecurePathSegment, ...]
    sig_block: Optional[SigBlock] = None


def _check_nlri(nlri: Nlri) -> None:
    if not 0 <= nlri.prefix_len <= 32:
        raise EncodeError("nlri.prefix_len", f"{nlri.prefix_len} not in 0..32")
    nbytes = (nlri.prefix_len + 7) // 8
    if len(nlri.prefix) != nbytes:
        raise EncodeError(
            "nlri.prefix",
            f"expected {nbytes} bytes for /{nlri.prefix_len}, got {len(nlri.prefix)}")
    spare = nlri.prefix_len % 8
    if spare and nlri.prefix[-1] & (0xFF >> spare):
        raise EncodeError("nlri.prefix", "bits set beyond prefix_len")


def _check_segment(i: int, seg: SecurePathSegment) -> None:
    if not 1 <= seg.pcount <= 255:
        raise EncodeError(f"secure_path[{i}].pcount",
                          f"{seg.pcount} not in 1..255")
    if not 0 <= seg.flags <= 255:
        raise EncodeError(f"secure_path[{i}].flags",
                          f"{seg.flags} not in 0..255")
    if not 0 <= seg.as_number <= 0xFFFFFFFF:
        raise EncodeError(f"secure_path[{i}].as_number",
                          f"{seg.as_number} not a 4-byte unsigned")


def _encode_segment(seg: SecurePathSegment) -> bytes:
    return bytes((seg.pcount, seg.flags)) + seg.as_number.to_bytes(4, "big")


def encode_update(msg: UpdateMessage) -> bytes:
    _check_nlri(msg.nlri)
    if len(msg.secure_path) > 255:
        raise EncodeError("secure_path", "more than 255 segments")
    if msg.sig_block is not None and not msg.secure_path:
        raise EncodeError("secure_path",
                          "signature block requires at least one segment")
    for i, seg in enumerate(msg.secure_path):
        _check_segment(i, seg)

    out = [bytes((msg.nlri.prefix_len,)), msg.nlri.prefix,
           bytes((len(msg.secure_path),))]
    out.extend(_encode_segment(s) for s in msg.secure_path)

    blk = msg.sig_block
    if isinstance(blk, SignatureBlockConventional):
        if len(blk.entries) != len(msg.secure_path):
            raise EncodeError("sig_block.entries",
                              f"{len(blk.entries)} entries for "
                              f"{len(msg.secure_path)} segments")
        out.append(bytes((SUITE_CONVENTIONAL,)))
        for i, (ski, sig) in enumerate(blk.entries):
            if len(ski) != SKI_LEN:
                raise EncodeError(f"sig_block.entries[{i}].ski",
                                  f"expected {SKI_LEN} bytes, got {len(ski)}")
            if len(sig) > 0xFFFF:
                raise EncodeError(f"sig_block.entries[{i}].sig",
                                  "longer than 65535 bytes")
            out.append(ski)
            out.append(len(sig).to_bytes(2, "big"))
            out.append(sig)
    elif isinstance(blk, SignatureBlockApvas):
        if len(blk.sigma) != SIGMA_LEN:
            raise EncodeError("sig_block.sigma",
                              f"expected {SIGMA_LEN} bytes, got {len(blk.sigma)}")
        if len(blk.skis) != len(msg.secure_path):
            raise EncodeError("sig_block.skis",
                              f"{len(blk.skis)} SKIs for "
                              f"{len(msg.secure_path)} segments")
        out.append(bytes((SUITE_APVAS,)))
        out.append(SIGMA_LEN.to_bytes(2, "big"))
        out.append(blk.sigma)
        for i, ski in enumerate(blk.skis):
            if len(ski) != SKI_LEN:
                raise EncodeError(f"sig_block.skis[{i}]",
                                  f"expected {SKI_LEN} bytes, got {len(ski)}")
            out.append(ski)
    elif blk is not None:
        raise EncodeError("sig_block", f"unknown block type {type(blk).__name__}")
    return b"".join(out)


def _parse(data: bytes, trace: Optional[List[Tuple[int, int, str, str]]]):
    pos = 0

    def take(n: int, what: str) -> bytes:
        nonlocal pos
        if pos + n > len(data):
            raise DecodeError(len(data), f"truncated: {what}")
        chunk = data[pos:pos + n]
        pos += n
        return chunk

    def note(off: int, length: int, name: str, value: str) -> None:
        if trace is not None:
            trace.append((off, length, name, value))

    off = pos
    prefix_len = take(1, "nlri prefix length")[0]
    if prefix_len > 32:
        raise DecodeError(off, f"nlri prefix length {prefix_len} > 32")
    note(off, 1, "nlri.prefix_len", str(prefix_len))
    nbytes = (prefix_len + 7) // 8
    off = pos
    prefix = bytes(take(nbytes, "nlri prefix"))
    spare = prefix_len % 8
    if spare and prefix and prefix[-1] & (0xFF >> spare):
        raise DecodeError(off, "nlri bits set beyond prefix_len")
    nlri = Nlri(prefix_len=prefix_len, prefix=prefix)
    note(off, nbytes, "nlri.prefix", nlri.as_text())

    off = pos
    seg_count = take(1, "segment count")[0]
    note(off, 1, "secure_path.count", str(seg_count))
    segments = []
    for i in range(seg_count):
        off = pos
        raw = take(SEGMENT_LEN, f"secure_path[{i}]")
        seg = SecurePathSegment(pcount=raw[0], flags=raw[1],
                                as_number=int.from_bytes(raw[2:6], "big"))
        if seg.pcount == 0:
            raise DecodeError(off, f"secure_path[{i}] has pcount 0")
        segments.append(seg)
        note(off, SEGMENT_LEN, f"secure_path[{i}]",
             f"as={seg.as_number} pcount={seg.pcount} flags=0x{seg.flags:02x}")

    if pos == len(data):
        return UpdateMessage(nlri=nlri, secure_path=tuple(segments),
                             sig_block=None), pos

    off = pos
    suite = take(1, "algorithm suite id")[0]
    note(off, 1, "sig_block.suite", f"0x{suite:02x}")
    if seg_count == 0:
        raise DecodeError(off, "signature block with empty secure path")

    if suite == SUITE_CONVENTIONAL:
        entries = []
        for i in range(seg_count):
            off = pos
            ski = bytes(take(SKI_LEN, f"sig entry {i} ski"))
            sig_len = int.from_bytes(take(2, f"sig entry {i} length"), "big")
            sig = bytes(take(sig_len, f"sig entry {i} signature"))
            entries.append((ski, sig))
            note(off, SKI_LEN + 2 + sig_len, f"sig_block.entries[{i}]",
                 f"ski={ski.hex()} sig_len={sig_len}")
        block: SigBlock = SignatureBlockConventional(entries=tuple(entries))
    elif suite == SUITE_APVAS:
        off = pos
        sig_len = int.from_bytes(take(2, "aggregate length"), "big")
        if sig_len != SIGMA_LEN:
            raise DecodeError(off, f"aggregate length {sig_len} != {SIGMA_LEN}")
        note(off, 2, "sig_block.sig_len", str(sig_len))
        off = pos
        sigma = bytes(take(SIGMA_LEN, "aggregate signature"))
        note(off, SIGMA_LEN, "sig_block.sigma", sigma.hex())
        skis = []
        for i in range(seg_count):
            off = pos
            ski = bytes(take(SKI_LEN, f"ski segment {i}"))
            skis.append(ski)
            note(off, SKI_LEN, f"sig_block.skis[{i}]", ski.hex())
        block = SignatureBlockApvas(sigma=sigma, skis=tuple(skis))
    else:
        raise DecodeError(off, f"unknown algorithm suite 0x{suite:02x}")

    if pos != len(data):
        raise DecodeError(pos, f"{len(data) - pos} trailing bytes")
    return UpdateMessage(nlri=nlri, secure_path=tuple(segments),
                         sig_block=block), pos


def decode_update(data: bytes) -> UpdateMessage:
    msg, _ = _parse(data, None)
    return msg


def trace_update(data: bytes):
    """Decode and also return (offset, length, field, value) rows for display."""
    trace: List[Tuple[int, int, str, str]] = []
    msg, _ = _parse(data, trace)
    return msg, trace


def suite_of(msg: UpdateMessage) -> Optional[int]:
    if isinstance(msg.sig_block, SignatureBlockConventional):
        return SUITE_CONVENTIONAL
    if isinstance(msg.sig_block, SignatureBlockApvas):
        return SUITE_APVAS
    return None


def build_signed_octets(target_as: int, msg: UpdateMessage,
                        signer_position: int,
                        suite_id: Optional[int] = None) -> bytes:
    """Byte string committed to by the signer at ``signer_position``.

    Position 1 is the route origin; position L (the path length) is the
    most recent signer.  The string is target_as, then the segments from
    the origin through the signer (in message order), then the suite id,
    then the NLRI.  Signature bytes never enter, so the result depends
    only on the path, the addressee and the suite.

    ``suite_id`` defaults to the suite of ``msg.sig_block``; pass it
    explicitly when building octets for a message whose block is not
    attached yet.
    """
    length = len(msg.secure_path)
    if not 1 <= signer_position <= length:
        raise IndexError(
            f"signer_position {signer_position} out of range 1..{length}")
    if not 0 <= target_as <= 0xFFFFFFFF:
        raise EncodeError("target_as", f"{target_as} not a 4-byte unsigned")
    if suite_id is None:
        suite_id = suite_of(msg)
        if suite_id is None:
            raise EncodeError("suite_id",
                              "plain message carries no suite; pass suite_id")
    _check_nlri(msg.nlri)

    parts = [target_as.to_bytes(4, "big")]
    for seg in msg.secure_path[length - signer_position:]:
        parts.append(_encode_segment(seg))
    parts.append(bytes((suite_id,)))
    parts.append(bytes((msg.nlri.prefix_len,)))
    parts.append(msg.nlri.prefix)
    return b"".join(parts)
