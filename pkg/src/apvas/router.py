"""Per-AS route processing: originate, receive/verify, re-sign, account.

A router runs one of three suites.  ``plain`` forwards unsigned updates,
``conventional`` adds one per-hop ECDSA signature per segment, ``apvas``
carries a single aggregate sigma for the whole path.  The receive flow is
verify, best-path, forward to the remaining neighbors (each copy signed
toward its specific neighbor), then fold the received claim into the
router's single stored aggregate.  Folding happens last on purpose: once
a claim is merged into the store, its individual sigma is gone, so all
re-advertisement happens at receive time.

Memory accounting is a deterministic byte model, not an allocator
measurement.  Three calibration constants control it (see MemoryModel);
they are configuration, not protocol.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

from . import baseline as bl
from . import bimodal as bm
from .errors import DecodeError
from .group import PublicParams, decode_source1
from .wire import (
    Nlri,
    SecurePathSegment,
    SignatureBlockApvas,
    SignatureBlockConventional,
    UpdateMessage,
    SUITE_APVAS,
    SUITE_CONVENTIONAL,
    build_signed_octets,
)

log = logging.getLogger("apvas.router")

SUITES = ("plain", "conventional", "apvas")


def apvas_ski(pk: bm.GroupElem) -> bytes:
    """20-byte key identifier: truncated SHA-256 of the encoded pk."""
    return hashlib.sha256(pk.encode()).digest()[:20]


@dataclass(frozen=True)
class MemoryModel:
    """Byte-accounting calibration.

    attr_fixed_cost: per-path route attribute overhead beyond the path
    and signature bytes (header, next hop, bookkeeping).
    routing_entry_cost: per-destination routing table entry.
    apvas_path_state_cost: extra per-path state an aggregate-suite router
    keeps so that later hops can be validated against the running
    aggregate (cached commitment inputs).  Only charged under apvas.
    """

    attr_fixed_cost: int = 50
    routing_entry_cost: int = 230
    apvas_path_state_cost: int = 130


class Registry:
    """Public key lookup by SKI, shared read-only by all routers."""

    def __init__(self):
        self.apvas_pk: Dict[bytes, bm.GroupElem] = {}
        self.baseline_pk: Dict[bytes, bytes] = {}

    def register_apvas(self, pk: bm.GroupElem) -> bytes:
        ski = apvas_ski(pk)
        self.apvas_pk[ski] = pk
        return ski

    def register_baseline(self, pk: bytes) -> bytes:
        ski = bl.key_ski(pk)
        self.baseline_pk[ski] = pk
        return ski


@dataclass(frozen=True)
class RouterConfig:
    as_number: int
    suite: str
    neighbors: Tuple[int, ...]
    keypair: Union[bm.KeyPair, bl.BaselineKeyPair, None]
    ski: bytes


@dataclass(frozen=True)
class RibEntry:
    nlri: Nlri
    secure_path: Tuple[SecurePathSegment, ...]
    ski_list: Tuple[bytes, ...]
    origin_as: int
    verified: bool

    @property
    def path_len(self) -> int:
        return len(self.secure_path)


@dataclass(frozen=True)
class RibSnapshot:
    as_number: int
    suite: str
    entries: Tuple[RibEntry, ...]
    stored_claim: Optional[bm.SignatureClaim]
    stored_signatures_bytes: int
    routing_table_bytes: int
    route_attr_bytes: int
    sig_block_bytes: int

    @property
    def path_count(self) -> int:
        return len(self.entries)

    @property
    def avg_len(self) -> float:
        if not self.entries:
            return 0.0
        return sum(e.path_len for e in self.entries) / len(self.entries)

    def to_record(self) -> dict:
        return {
            "as_number": self.as_number,
            "suite": self.suite,
            "path_count": self.path_count,
            "avg_len": self.avg_len,
            "routing_table_bytes": self.routing_table_bytes,
            "route_attr_bytes": self.route_attr_bytes,
            "sig_block_bytes": self.sig_block_bytes,
            "stored_signatures_bytes": self.stored_signatures_bytes,
        }


@dataclass(frozen=True)
class ReceiveResult:
    accepted: bool
    forwarded: Tuple[Tuple[int, UpdateMessage], ...] = ()
    reason: str = "ok"


class Router:
    def __init__(self, config: RouterConfig,
                 params: Optional[PublicParams] = None,
                 registry: Optional[Registry] = None,
                 memory: MemoryModel = MemoryModel()):
        if config.suite not in SUITES:
            raise ValueError(f"unknown suite {config.suite!r}")
        if config.suite != "plain" and registry is None:
            raise ValueError("secure suites need a key registry")
        if config.suite == "apvas" and params is None:
            raise ValueError("apvas suite needs public parameters")
        self.config = config
        self.params = params
        self.registry = registry
        self.memory = memory
        self.rib: Dict[Tuple[int, bytes], RibEntry] = {}
        self.stored_claim = bm.empty_claim()

    # -- signing helpers ---------------------------------------------------

    def _own_segment(self) -> SecurePathSegment:
        return SecurePathSegment(pcount=1, flags=0,
                                 as_number=self.config.as_number)

    # -- operations --------------------------------------------------------

    def originate(self, nlri: Nlri, target_as: int) -> UpdateMessage:
        path = (self._own_segment(),)
        if self.config.suite == "plain":
            return UpdateMessage(nlri=nlri, secure_path=path, sig_block=None)
        bare = UpdateMessage(nlri=nlri, secure_path=path, sig_block=None)
        if self.config.suite == "apvas":
            octets = build_signed_octets(target_as, bare, 1,
                                         suite_id=SUITE_APVAS)
            claim = bm.seq_agg_sign(self.params, self.config.keypair,
                                    octets, bm.empty_claim())
            block = SignatureBlockApvas(sigma=claim.sigma.encode(),
                                        skis=(self.config.ski,))
            return UpdateMessage(nlri=nlri, secure_path=path,
                                 sig_block=block)
        octets = build_signed_octets(target_as, bare, 1,
                                     suite_id=SUITE_CONVENTIONAL)
        sig = bl.baseline_sign(self.config.keypair, octets)
        block = SignatureBlockConventional(entries=((self.config.ski, sig),))
        return UpdateMessage(nlri=nlri, secure_path=path, sig_block=block)

    def reconstruct_claim(self, msg: UpdateMessage) -> Optional[bm.SignatureClaim]:
        """Rebuild the claim an update message attests, origin first.

        Returns None when a SKI is unknown; raises DecodeError when the
        sigma bytes are not a valid group element.
        """
        block = msg.sig_block
        if not isinstance(block, SignatureBlockApvas):
            return None
        length = len(msg.secure_path)
        entries = []
        for j in range(1, length + 1):
            wire_idx = length - j
            pk = self.registry.apvas_pk.get(block.skis[wire_idx])
            if pk is None:
                return None
            if j < length:
                target = msg.secure_path[wire_idx - 1].as_number
            else:
                target = self.config.as_number
            octets = build_signed_octets(target, msg, j)
            entries.append(bm.ChainEntry(pk=pk, message=octets))
        sigma = decode_source1(block.sigma)
        return bm.SignatureClaim(sigma=sigma, chains=(bm.Chain(entries),))

    def _verify_conventional(self, msg: UpdateMessage) -> bool:
        block = msg.sig_block
        if not isinstance(block, SignatureBlockConventional):
            return False
        length = len(msg.secure_path)
        for j in range(1, length + 1):
            wire_idx = length - j
            ski, sig = block.entries[wire_idx]
            pk = self.registry.baseline_pk.get(ski)
            if pk is None:
                return False
            if j < length:
                target = msg.secure_path[wire_idx - 1].as_number
            else:
                target = self.config.as_number
            octets = build_signed_octets(target, msg, j)
            if not bl.baseline_verify(pk, octets, sig):
                return False
        return True

    def receive(self, msg: UpdateMessage, from_as: int) -> ReceiveResult:
        if from_as not in self.config.neighbors:
            raise ValueError(f"AS{from_as} is not a neighbor of "
                             f"AS{self.config.as_number}")
        if not msg.secure_path:
            return ReceiveResult(accepted=False, reason="empty-path")
        path_ases = [s.as_number for s in msg.secure_path]
        if self.config.as_number in path_ases:
            return ReceiveResult(accepted=False, reason="loop")

        claim = None
        if self.config.suite == "plain":
            if msg.sig_block is not None:
                return ReceiveResult(accepted=False, reason="suite-mismatch")
        elif self.config.suite == "conventional":
            if not self._verify_conventional(msg):
                return ReceiveResult(accepted=False, reason="verify-failed")
        else:
            try:
                claim = self.reconstruct_claim(msg)
            except DecodeError:
                return ReceiveResult(accepted=False, reason="verify-failed")
            if claim is None or not bm.verify(self.params, claim):
                return ReceiveResult(accepted=False, reason="verify-failed")

        key = (msg.nlri.prefix_len, msg.nlri.prefix)
        existing = self.rib.get(key)
        if existing is not None:
            new_len = len(msg.secure_path)
            old_len = len(existing.secure_path)
            old_sender = existing.secure_path[0].as_number
            if not (new_len < old_len
                    or (new_len == old_len and from_as < old_sender)):
                return ReceiveResult(accepted=False, reason="best-path")

        forwarded = []
        for neighbor in sorted(self.config.neighbors):
            if neighbor == from_as or neighbor in path_ases:
                continue
            new_path = (self._own_segment(),) + msg.secure_path
            if self.config.suite == "plain":
                out = UpdateMessage(nlri=msg.nlri, secure_path=new_path,
                                    sig_block=None)
            elif self.config.suite == "conventional":
                bare = UpdateMessage(nlri=msg.nlri, secure_path=new_path,
                                     sig_block=None)
                octets = build_signed_octets(neighbor, bare, len(new_path),
                                             suite_id=SUITE_CONVENTIONAL)
                sig = bl.baseline_sign(self.config.keypair, octets)
                block = SignatureBlockConventional(
                    entries=((self.config.ski, sig),) + msg.sig_block.entries)
                out = UpdateMessage(nlri=msg.nlri, secure_path=new_path,
                                    sig_block=block)
            else:
                new_claim = bm.seq_agg_sign(
                    self.params, self.config.keypair,
                    build_signed_octets(neighbor,
                                        UpdateMessage(msg.nlri, new_path),
                                        len(new_path), suite_id=SUITE_APVAS),
                    claim, chain_index=0)
                block = SignatureBlockApvas(
                    sigma=new_claim.sigma.encode(),
                    skis=(self.config.ski,) + msg.sig_block.skis)
                out = UpdateMessage(nlri=msg.nlri, secure_path=new_path,
                                    sig_block=block)
            forwarded.append((neighbor, out))

        ski_list = ()
        if isinstance(msg.sig_block, SignatureBlockApvas):
            ski_list = msg.sig_block.skis
        elif isinstance(msg.sig_block, SignatureBlockConventional):
            ski_list = tuple(ski for ski, _ in msg.sig_block.entries)
        entry = RibEntry(nlri=msg.nlri, secure_path=msg.secure_path,
                         ski_list=ski_list,
                         origin_as=msg.secure_path[-1].as_number,
                         verified=self.config.suite != "plain")

        if self.config.suite == "apvas":
            try:
                self.stored_claim = bm.agg_sign(self.params,
                                                self.stored_claim, claim)
            except bm.DuplicateEntryError:
                log.warning(
                    "AS%d: claim for %s collides with the stored aggregate; "
                    "entry dropped", self.config.as_number,
                    msg.nlri.as_text())
                return ReceiveResult(accepted=True,
                                     forwarded=tuple(forwarded),
                                     reason="conflict-dropped")
        self.rib[key] = entry
        return ReceiveResult(accepted=True, forwarded=tuple(forwarded))

    def snapshot_memory(self) -> RibSnapshot:
        entries = tuple(self.rib[k] for k in sorted(self.rib))
        lens = [e.path_len for e in entries]
        mm = self.memory
        if self.config.suite == "apvas":
            stored_sig = 64 + 20 * sum(lens) if entries else 0
            sig_block = sum(67 + 20 * n for n in lens)
            extra = mm.apvas_path_state_cost * len(entries)
        elif self.config.suite == "conventional":
            stored_sig = 118 * sum(lens)
            sig_block = sum(1 + 118 * n for n in lens)
            extra = 0
        else:
            stored_sig = 0
            sig_block = 0
            extra = 0
        route_attr = stored_sig + extra + sum(
            6 * n + mm.attr_fixed_cost for n in lens)
        return RibSnapshot(
            as_number=self.config.as_number,
            suite=self.config.suite,
            entries=entries,
            stored_claim=(self.stored_claim
                          if self.config.suite == "apvas" else None),
            stored_signatures_bytes=stored_sig,
            routing_table_bytes=len(entries) * mm.routing_entry_cost,
            route_attr_bytes=route_attr,
            sig_block_bytes=sig_block,
        )
