"""Property-based checks on claim construction, verification, and codec.

Keypairs are expensive, so every example draws from a fixed pool of six;
entry distinctness comes from the drawn messages.
"""

import random

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from apvas import bimodal as bm
from apvas.errors import DecodeError, DuplicateEntryError
from apvas.group import group_add, hash_to_group, scalar_mul, setup

params = setup("bn254")
KEYS = [bm.user_key_gen(params, random.Random(200 + i)) for i in range(6)]

# one signing step: which key, what message, extend-or-start-new
ops = st.tuples(st.integers(min_value=0, max_value=5),
                st.binary(min_size=0, max_size=24),
                st.booleans())


def run_script(script):
    """Fold signing ops into a claim, skipping exact duplicates."""
    claim = bm.empty_claim()
    for key_idx, message, extend in script:
        idx = len(claim.chains) - 1 if (extend and claim.chains) else None
        try:
            claim = bm.seq_agg_sign(params, KEYS[key_idx], message, claim,
                                    chain_index=idx)
        except DuplicateEntryError:
            pass
    return claim


class TestAcceptedClaims:
    @given(script=st.lists(ops, min_size=1, max_size=6))
    @settings(max_examples=25, deadline=None,
              suppress_health_check=[HealthCheck.too_slow])
    def test_every_signing_sequence_verifies(self, script):
        claim = run_script(script)
        assume(claim.entry_count() > 0)
        assert bm.verify(params, claim)

    @given(script=st.lists(ops, min_size=2, max_size=5), merge_at=st.data())
    @settings(max_examples=10, deadline=None,
              suppress_health_check=[HealthCheck.too_slow])
    def test_split_and_merge_verifies(self, script, merge_at):
        cut = merge_at.draw(st.integers(min_value=1,
                                        max_value=len(script) - 1))
        a = run_script(script[:cut])
        b = run_script(script[cut:])
        try:
            merged = bm.agg_sign(params, a, b)
        except DuplicateEntryError:
            shared = set(a.entry_idents()) & set(b.entry_idents())
            assert shared
            return
        assert bm.verify(params, merged)


class TestAlterations:
    @given(script=st.lists(ops, min_size=2, max_size=4), choice=st.data())
    @settings(max_examples=15, deadline=None,
              suppress_health_check=[HealthCheck.too_slow])
    def test_any_single_alteration_falsifies(self, script, choice):
        claim = run_script(script)
        assume(claim.entry_count() >= 2)
        kind = choice.draw(st.sampled_from(
            ["sigma", "message", "pk", "swap"]))

        if kind == "sigma":
            mutated = bm.SignatureClaim(
                sigma=group_add(claim.sigma,
                                scalar_mul(1, hash_to_group(params, b"off"))),
                chains=claim.chains)
        elif kind == "swap":
            fat = [i for i, c in enumerate(claim.chains) if len(c) >= 2]
            if not fat:
                assume(False)
            ci = choice.draw(st.sampled_from(fat))
            chain = claim.chains[ci]
            k = choice.draw(st.integers(min_value=0,
                                        max_value=len(chain) - 2))
            ents = list(chain.entries)
            assume(ents[k] != ents[k + 1])
            ents[k], ents[k + 1] = ents[k + 1], ents[k]
            chains = (claim.chains[:ci] + (bm.Chain(ents),)
                      + claim.chains[ci + 1:])
            mutated = bm.SignatureClaim(sigma=claim.sigma, chains=chains)
        else:
            ci = choice.draw(st.integers(min_value=0,
                                         max_value=len(claim.chains) - 1))
            chain = claim.chains[ci]
            ei = choice.draw(st.integers(min_value=0,
                                         max_value=len(chain) - 1))
            entry = chain.entries[ei]
            if kind == "message":
                replacement = bm.ChainEntry(entry.pk,
                                            entry.message + b"\x00")
            else:
                pool = [k.pk for k in KEYS if k.pk != entry.pk]
                replacement = bm.ChainEntry(choice.draw(st.sampled_from(pool)),
                                            entry.message)
            ents = list(chain.entries)
            ents[ei] = replacement
            chains = (claim.chains[:ci] + (bm.Chain(ents),)
                      + claim.chains[ci + 1:])
            mutated = bm.SignatureClaim(sigma=claim.sigma, chains=chains)

        assert not bm.verify(params, mutated)


# codec-only structural strategies: sigma drawn from first-group points,
# chains assembled directly without any signing
pool_pks = st.sampled_from([k.pk for k in KEYS])
entries = st.builds(bm.ChainEntry, pk=pool_pks,
                    message=st.binary(min_size=0, max_size=32))
chains = st.lists(entries, min_size=1, max_size=4).map(bm.Chain)
sigmas = st.integers(min_value=0, max_value=2 ** 64).map(
    lambda s: scalar_mul(s, hash_to_group(params, b"codec-base")))
structural_claims = st.builds(
    bm.SignatureClaim, sigma=sigmas,
    chains=st.lists(chains, min_size=0, max_size=4).map(tuple))


class TestCodec:
    @given(claim=structural_claims)
    @settings(max_examples=50, deadline=None,
              suppress_health_check=[HealthCheck.too_slow])
    def test_round_trip_is_identity(self, claim):
        data = bm.serialize_claim(claim)
        back = bm.deserialize_claim(params, data)
        assert back.sigma == claim.sigma
        assert back.chains == claim.chains
        assert bm.serialize_claim(back) == data

    @given(data=st.binary(max_size=300))
    @settings(max_examples=50, deadline=None,
              suppress_health_check=[HealthCheck.too_slow])
    def test_decoder_is_total(self, data):
        try:
            claim = bm.deserialize_claim(params, data)
        except DecodeError:
            return
        assert bm.serialize_claim(claim) == data
