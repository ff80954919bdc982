"""Group wrapper: encodings, hash-to-group, the symmetric pairing surface.

The hashing pipeline is pinned two ways: the low-level expander against
the published RFC 9380 SHA-256 expander vectors, and the full
message-to-point map against frozen vectors in apvas/golden/.
"""

import random
from pathlib import Path

import pytest

from apvas import bn254 as bn
from apvas.errors import DecodeError
from apvas.group import (
    GroupElem,
    TargetElem,
    _expand_message_xmd,
    decode_source1,
    decode_source2,
    decode_target,
    group_add,
    hash_to_group,
    pairing,
    scalar_from_bytes,
    scalar_mul,
    scalar_random,
    scalar_to_bytes,
    setup,
    target_identity,
)

GOLDEN = Path(__file__).resolve().parent.parent / "src" / "apvas" / "golden"

params = setup("bn254")
rng = random.Random(0x6E0)


class TestExpander:
    # RFC 9380, SHA-256 expander, DST "QUUX-V01-CS02-with-expander-SHA256-128"
    DST = b"QUUX-V01-CS02-with-expander-SHA256-128"

    def test_empty_message_vector(self):
        out = _expand_message_xmd(b"", self.DST, 0x20)
        assert out.hex() == ("68a985b87eb6b46952128911f2a4412b"
                             "bc302a9d759667f87f7a21d803f07235")

    def test_abc_vector(self):
        out = _expand_message_xmd(b"abc", self.DST, 0x20)
        assert out.hex() == ("d8ccab23b5985ccea865c6c97b6e5b83"
                             "50e794e603b4b97902f53a8a0d605615")


class TestHashToGroup:
    def test_frozen_vectors(self):
        text = (GOLDEN / "hash_to_group.txt").read_text()
        rows = [line.split() for line in text.splitlines() if line]
        assert len(rows) >= 8
        for msg_hex, point_hex in rows:
            msg = b"" if msg_hex == "-" else bytes.fromhex(msg_hex)
            assert hash_to_group(params, msg).encode().hex() == point_hex

    def test_deterministic_and_distinct(self):
        a1 = hash_to_group(params, b"one")
        a2 = hash_to_group(params, b"one")
        b1 = hash_to_group(params, b"two")
        assert a1 == a2
        assert a1 != b1

    def test_output_on_curve_with_order_r(self):
        for i in range(5):
            h = hash_to_group(params, bytes([i]) * 7)
            assert bn.g1_on_curve(h.p1)
            jac = bn.g1_mul(bn.g1_from_affine(h.p1), bn.CURVE_ORDER)
            assert bn.g1_to_affine(jac) is None

    def test_never_identity_in_practice(self):
        for i in range(20):
            assert not hash_to_group(params, i.to_bytes(2, "big")).is_identity


class TestEncodings:
    def test_source1_round_trip(self):
        h = hash_to_group(params, b"roundtrip")
        data = h.encode()
        assert len(data) == 64
        assert decode_source1(data) == h

    def test_source2_round_trip_both_parities(self):
        for s in (3, 4, 5, 6, 9, 12):
            pk = scalar_mul(s, params.generator)
            data = pk.encode()
            assert len(data) == 64
            back = decode_source2(data)
            assert back.encode() == data

    def test_identity_encodings(self):
        ident = GroupElem(p1=None, p2=None)
        assert ident.encode() == bytes(64)
        assert decode_source1(bytes(64)).is_identity
        assert decode_source2(bytes(64)).is_identity

    def test_target_round_trip(self):
        t = pairing(params, hash_to_group(params, b"t"), params.generator)
        data = t.encode()
        assert len(data) == 384
        assert decode_target(data) == t

    def test_target_identity_encoding(self):
        data = target_identity().encode()
        assert decode_target(data).is_identity
        # one in the lowest coefficient, zero everywhere else
        assert data[:32] == (1).to_bytes(32, "big")
        assert not any(data[32:])

    def test_source1_rejects_off_curve(self):
        bad = bytearray(hash_to_group(params, b"x").encode())
        bad[63] ^= 0x01
        with pytest.raises(DecodeError):
            decode_source1(bytes(bad))

    def test_source2_rejects_wrong_length(self):
        with pytest.raises(DecodeError):
            decode_source2(bytes(63))

    def test_source1_rejects_coordinate_out_of_range(self):
        data = (bn.P).to_bytes(32, "big") + bytes(32)
        with pytest.raises(DecodeError):
            decode_source1(data)

    def test_scalar_round_trip(self):
        for _ in range(5):
            s = scalar_random(rng)
            assert scalar_from_bytes(scalar_to_bytes(s)) == s


class TestSymmetricSurface:
    def test_pairing_is_order_insensitive(self):
        a = scalar_mul(2, params.generator)
        b = scalar_mul(3, params.generator)
        assert pairing(params, a, b) == pairing(params, b, a)
        base = pairing(params, params.generator, params.generator)
        assert pairing(params, a, b) == base.mul(base).mul(base).mul(
            base).mul(base).mul(base)

    def test_pairing_with_identity_is_identity(self):
        ident = GroupElem(p1=None, p2=None)
        assert pairing(params, ident, params.generator).is_identity
        assert pairing(params, params.generator, ident).is_identity

    def test_sigma_style_g1_only_pairs_with_dual_generator(self):
        sigma = scalar_mul(7, hash_to_group(params, b"h"))
        assert sigma.p2 is None or sigma.p1 is not None
        t = pairing(params, sigma, params.generator)
        assert not t.is_identity

    def test_group_add_linearity(self):
        g = params.generator
        assert group_add(scalar_mul(5, g), scalar_mul(9, g)) == scalar_mul(14, g)

    def test_equality_across_representations(self):
        # a decoded pk keeps only its twist-side point but must still
        # compare equal to the dual-representation original
        pk = scalar_mul(11, params.generator)
        decoded = decode_source2(pk.encode())
        assert decoded == pk
        assert hash(decoded) == hash(pk)

    def test_setup_rejects_unknown_curve(self):
        from apvas.errors import ConfigurationError
        with pytest.raises(ConfigurationError):
            setup("p256")

    def test_params_fields(self):
        assert params.prime_order == bn.CURVE_ORDER
        assert isinstance(TargetElem(bn.F12_ONE).encode(), bytes)
        assert params.to_bytes()
