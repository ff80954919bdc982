"""Aggregate signatures with two combining modes.

A claim holds one source-group aggregate ``sigma`` plus the list of signer
chains it covers.  Two operations grow a claim:

* ``seq_agg_sign`` appends one signer to a chain (or starts a new chain).
  The message a signer commits to is bound to everything already in that
  chain through a running target-group product, so within a chain the order
  of signers is part of what gets signed.
* ``agg_sign`` merges two claims by adding their sigmas and concatenating
  their chain lists.  Chains from different claims stay independent.

Verification recomputes each chain's running product from scratch and
checks ``e(sigma, P) == prod_k e(h_k, pk_k)`` over every entry of every
chain.  A claim is rejected outright when any (pk, message) pair appears
twice anywhere in it, or when any pk is the identity element.

Chain commitments
-----------------

Entry k of a chain signs a transcript assembled from:

* the running head ``t_k = prod_{j<k} e(h_j, pk_j)`` (target identity for
  the first entry), encoded to bytes,
* the entry's own pk and length-prefixed message,
* every (pk, message) pair of the chain up to and including the entry,
  in order.

The transcript hashes to a commitment point ``c_k``; the point actually
signed is ``h_k = H(encode(c_k))``, one more hash-to-group step, so the
signed point never coincides with a value an adversary can steer directly.
Chains cache their head products; the cache is derivable from the entries
and is rebuilt transparently for deserialized claims.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .bn254 import F12_ONE, f12_mul
from .errors import DecodeError, DuplicateEntryError, EncodeError
from .group import (
    GroupElem,
    PublicParams,
    TargetElem,
    decode_source1,
    decode_source2,
    group_add,
    hash_to_group,
    pairing,
    scalar_mul,
    scalar_random,
)

SIGMA_LEN = 64
PK_LEN = 64
_MAX_U16 = 0xFFFF
_MAX_U32 = 0xFFFFFFFF


@dataclass(frozen=True)
class KeyPair:
    sk: int
    pk: GroupElem


@dataclass(frozen=True)
class ChainEntry:
    """One signer's contribution to a chain: its pk and the message it signed."""

    pk: GroupElem
    message: bytes

    def ident(self) -> Tuple[bytes, bytes]:
        return (self.pk.encode(), self.message)


class Chain:
    """Ordered tuple of entries plus a cached running head product.

    ``heads(params)[k]`` is the target-group product over the first k
    entries; index 0 is the target identity.  The cache is lazy and purely
    derivable, so chains reconstructed from bytes start without one and
    fill it in on first use.
    """

    __slots__ = ("entries", "_heads")

    def __init__(self, entries: Sequence[ChainEntry], _heads=None):
        self.entries: Tuple[ChainEntry, ...] = tuple(entries)
        self._heads = _heads

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"Chain({len(self.entries)} entries)"

    def heads(self, params: PublicParams) -> Tuple[tuple, ...]:
        if self._heads is None or len(self._heads) < len(self.entries) + 1:
            hs = list(self._heads) if self._heads else [F12_ONE]
            for k in range(len(hs) - 1, len(self.entries)):
                entry = self.entries[k]
                h = entry_point(params, hs[k], entry, self.entries[: k + 1])
                step = pairing(params, h, entry.pk)
                hs.append(f12_mul(hs[k], step.f))
            self._heads = tuple(hs)
        return self._heads


@dataclass(frozen=True)
class SignatureClaim:
    sigma: GroupElem
    chains: Tuple[Chain, ...]

    def entry_idents(self) -> Iterator[Tuple[bytes, bytes]]:
        for chain in self.chains:
            for entry in chain.entries:
                yield entry.ident()

    def entry_count(self) -> int:
        return sum(len(c) for c in self.chains)


def empty_claim() -> SignatureClaim:
    return SignatureClaim(sigma=GroupElem(p1=None, p2=None), chains=())


def user_key_gen(params: PublicParams, rng) -> KeyPair:
    sk = 0
    while sk == 0:
        sk = scalar_random(rng)
    return KeyPair(sk=sk, pk=scalar_mul(sk, params.generator))


def _transcript(head_bytes: bytes, entry: ChainEntry,
                prefix: Sequence[ChainEntry]) -> bytes:
    parts = [head_bytes, entry.pk.encode(),
             len(entry.message).to_bytes(4, "big"), entry.message]
    for e in prefix:
        parts.append(e.pk.encode())
        parts.append(len(e.message).to_bytes(4, "big"))
        parts.append(e.message)
    return b"".join(parts)


def _commitment_from_head(params: PublicParams, head_gt: tuple,
                          entry: ChainEntry,
                          prefix: Sequence[ChainEntry]) -> GroupElem:
    head_bytes = TargetElem(head_gt).encode()
    return hash_to_group(params, _transcript(head_bytes, entry, prefix))


def chain_commitment(params: PublicParams, sigma_prev: GroupElem,
                     entry: ChainEntry,
                     prefix: Sequence[ChainEntry]) -> GroupElem:
    """Commitment point for ``entry`` given the aggregate built so far.

    ``prefix`` is the chain up to and including ``entry`` itself.  The head
    is derived by pairing ``sigma_prev`` with the generator, which equals
    the running product of ``e(h_j, pk_j)`` when ``sigma_prev`` aggregates
    exactly the prior entries of this chain.
    """
    head = pairing(params, sigma_prev, params.generator)
    return hash_to_group(params, _transcript(head.encode(), entry, prefix))


def entry_point(params: PublicParams, head_gt: tuple, entry: ChainEntry,
                prefix: Sequence[ChainEntry]) -> GroupElem:
    """The source-group point entry k actually signs: H(encode(c_k))."""
    c = _commitment_from_head(params, head_gt, entry, prefix)
    return hash_to_group(params, c.encode())


def seq_agg_sign(params: PublicParams, keypair: KeyPair, message: bytes,
                 claim: SignatureClaim,
                 chain_index: Optional[int] = None) -> SignatureClaim:
    """Append one signature to ``claim``.

    ``chain_index=None`` starts a fresh chain; otherwise the entry extends
    the chain at that index.  Raises DuplicateEntryError when the (pk,
    message) pair already appears anywhere in the claim, and IndexError for
    a chain_index outside the claim's chain list.
    """
    if keypair.pk.is_identity:
        raise ValueError("refusing to sign with an identity public key")
    entry = ChainEntry(pk=keypair.pk, message=message)
    if entry.ident() in set(claim.entry_idents()):
        raise DuplicateEntryError(
            "(pk, message) pair already present in the claim")

    if chain_index is None:
        prior = Chain(())
        chains = claim.chains
        slot = len(chains)
    else:
        if not 0 <= chain_index < len(claim.chains):
            raise IndexError(
                f"chain_index {chain_index} out of range "
                f"(claim has {len(claim.chains)} chains)")
        prior = claim.chains[chain_index]
        chains = claim.chains
        slot = chain_index

    heads = prior.heads(params)
    prefix = prior.entries + (entry,)
    h = entry_point(params, heads[-1], entry, prefix)
    step = pairing(params, h, keypair.pk)
    new_chain = Chain(prefix, _heads=heads + (f12_mul(heads[-1], step.f),))

    sigma = group_add(claim.sigma, scalar_mul(keypair.sk, h))
    new_chains = chains[:slot] + (new_chain,) + chains[slot + 1:]
    return SignatureClaim(sigma=sigma, chains=new_chains)


def agg_sign(params: PublicParams, claim_a: SignatureClaim,
             claim_b: SignatureClaim) -> SignatureClaim:
    """Merge two claims into one. Their entry sets must be disjoint."""
    seen = set(claim_a.entry_idents())
    for ident in claim_b.entry_idents():
        if ident in seen:
            raise DuplicateEntryError(
                "(pk, message) pair appears in both claims")
    return SignatureClaim(
        sigma=group_add(claim_a.sigma, claim_b.sigma),
        chains=claim_a.chains + claim_b.chains)


def verify(params: PublicParams, claim: SignatureClaim) -> bool:
    """Check a claim. Returns False on any defect, never raises."""
    if not claim.chains:
        return False
    seen = set()
    for chain in claim.chains:
        if not chain.entries:
            return False
        for entry in chain.entries:
            if entry.pk.is_identity:
                return False
            ident = entry.ident()
            if ident in seen:
                return False
            seen.add(ident)

    rhs = F12_ONE
    for chain in claim.chains:
        rhs = f12_mul(rhs, chain.heads(params)[-1])
    lhs = pairing(params, claim.sigma, params.generator)
    return lhs.f == rhs


def serialize_claim(claim: SignatureClaim) -> bytes:
    if len(claim.chains) > _MAX_U16:
        raise EncodeError("chains", "more than 65535 chains")
    out = [claim.sigma.encode(), len(claim.chains).to_bytes(2, "big")]
    for chain in claim.chains:
        if len(chain.entries) > _MAX_U16:
            raise EncodeError("entries", "more than 65535 entries in a chain")
        out.append(len(chain.entries).to_bytes(2, "big"))
        for entry in chain.entries:
            if len(entry.message) > _MAX_U32:
                raise EncodeError("message", "message longer than 2^32-1")
            out.append(entry.pk.encode())
            out.append(len(entry.message).to_bytes(4, "big"))
            out.append(entry.message)
    return b"".join(out)


def deserialize_claim(params: PublicParams, data: bytes) -> SignatureClaim:
    pos = 0

    def need(n: int, what: str) -> bytes:
        nonlocal pos
        if pos + n > len(data):
            raise DecodeError(len(data), f"truncated claim: {what}")
        chunk = data[pos:pos + n]
        pos += n
        return chunk

    sigma_bytes = need(SIGMA_LEN, "sigma")
    try:
        sigma = decode_source1(sigma_bytes)
    except DecodeError as e:
        raise DecodeError(e.offset, f"sigma: {e.message}") from None

    chain_count = int.from_bytes(need(2, "chain count"), "big")
    chains = []
    for ci in range(chain_count):
        entry_count = int.from_bytes(need(2, f"entry count of chain {ci}"),
                                     "big")
        if entry_count == 0:
            raise DecodeError(pos - 2, f"chain {ci} has zero entries")
        entries = []
        for ei in range(entry_count):
            pk_off = pos
            pk_bytes = need(PK_LEN, f"pk of entry {ei} in chain {ci}")
            try:
                pk = decode_source2(pk_bytes)
            except DecodeError as e:
                raise DecodeError(pk_off + e.offset,
                                  f"pk: {e.message}") from None
            mlen = int.from_bytes(
                need(4, f"message length of entry {ei} in chain {ci}"), "big")
            message = need(mlen, f"message of entry {ei} in chain {ci}")
            entries.append(ChainEntry(pk=pk, message=bytes(message)))
        chains.append(Chain(entries))

    if pos != len(data):
        raise DecodeError(pos, "trailing bytes after claim")
    return SignatureClaim(sigma=sigma, chains=tuple(chains))
