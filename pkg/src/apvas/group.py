"""Pairing-group abstraction: elements, scalars, hashing, serialization.

The underlying curve is asymmetric (two source groups), but the signature
algebra upstairs is written for a single group G with generator P. The
bridge is a convention plus a little bookkeeping:

  * signatures and hash-to-group outputs live in the first source group,
  * public keys and the generator live in the second,
  * the generator itself carries *both* representations (same discrete
    log on both sides), so expressions like pairing(2*P, 3*P) stay
    symmetric at this interface.

A GroupElem therefore holds up to two affine points, one per source
group. Operations act componentwise on whatever is present; the pairing
picks whichever orientation (first-group element, second-group element)
its two arguments can supply.

Byte encodings (all big-endian, 64 bytes per element):

  first group    x (32) || y (32), uncompressed
  second group   x_imag (32) || x_real (32), with the parity of y packed
                 into the top bit of byte 0 (x_imag < 2^254, so the two
                 top bits are free)
  identity       64 zero bytes in either group
  target group   384 bytes: the 12 base-field coefficients in ascending
                 tower order, each 32 bytes (identity encodes as 1
                 followed by zeros)
  scalar         32 bytes

The hash-to-group construction is the standard suite recipe:
expand_message_xmd over SHA-256, two base-field elements per message,
a Shallue-van de Woestijne map with Z = 1, and the fixed domain
separation tag "APVAS-H2G-v1".
"""

import functools
import hashlib

from . import bn254 as _c
from .errors import ConfigurationError, DecodeError

H2G_DST = b"APVAS-H2G-v1"

_ABSENT = object()

_ZERO64 = b"\x00" * 64


class GroupElem:
    """An element of the (interface-level) source group G.

    Internally: an affine point in one or both source groups. `None` in a
    slot means the identity; the _ABSENT sentinel means that slot carries
    no representation at all.
    """

    __slots__ = ("p1", "p2")

    def __init__(self, p1=_ABSENT, p2=_ABSENT):
        if p1 is _ABSENT and p2 is _ABSENT:
            raise ValueError("GroupElem needs at least one representation")
        self.p1 = p1
        self.p2 = p2

    @property
    def is_identity(self):
        if self.p1 is not _ABSENT and self.p1 is not None:
            return False
        if self.p2 is not _ABSENT and self.p2 is not None:
            return False
        return True

    def _key(self):
        if self.is_identity:
            return (0, _ZERO64)
        if self.p2 is not _ABSENT:
            return (2, self.encode())
        return (1, self.encode())

    def __eq__(self, other):
        if not isinstance(other, GroupElem):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.is_identity:
            return "GroupElem(identity)"
        return f"GroupElem({self.encode().hex()[:16]}...)"

    def encode(self):
        """Canonical 64-byte encoding (second-group form when available)."""
        if self.is_identity:
            return _ZERO64
        if self.p2 is not _ABSENT:
            x, y = self.p2
            flag = _f2_sgn0(y)
            buf = bytearray(x[0].to_bytes(32, "big") + x[1].to_bytes(32, "big"))
            if flag:
                buf[0] |= 0x80
            return bytes(buf)
        x, y = self.p1
        return x.to_bytes(32, "big") + y.to_bytes(32, "big")


class TargetElem:
    """An element of the target group, compared and hashed by value."""

    __slots__ = ("f",)

    def __init__(self, f):
        self.f = f

    def __eq__(self, other):
        if not isinstance(other, TargetElem):
            return NotImplemented
        return self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __repr__(self):
        return f"TargetElem({self.encode().hex()[:16]}...)"

    @property
    def is_identity(self):
        return self.f == _c.F12_ONE

    def encode(self):
        x, y = self.f
        out = bytearray()
        for f6 in (y, x):
            for f2 in (f6[2], f6[1], f6[0]):  # ascending tau powers
                out += f2[1].to_bytes(32, "big")  # real part first
                out += f2[0].to_bytes(32, "big")
        return bytes(out)

    def mul(self, other):
        return TargetElem(_c.f12_mul(self.f, other.f))


def target_identity():
    return TargetElem(_c.F12_ONE)


class PublicParams:
    """Fixed group parameters: order, generator, group/hash identifiers."""

    __slots__ = ("prime_order", "source_group_id", "target_group_id",
                 "generator", "hash_fn_id")

    def __init__(self):
        self.prime_order = _c.CURVE_ORDER
        self.source_group_id = "bn254-source-pair"
        self.target_group_id = "bn254-gt"
        self.hash_fn_id = "xmd:sha-256+svdw:" + H2G_DST.decode()
        self.generator = GroupElem(p1=_c.G1_GEN, p2=_c.G2_GEN)

    def to_bytes(self):
        parts = [
            self.source_group_id.encode(),
            self.target_group_id.encode(),
            self.hash_fn_id.encode(),
            self.prime_order.to_bytes(32, "big"),
            self.generator.p1[0].to_bytes(32, "big"),
            self.generator.p1[1].to_bytes(32, "big"),
            self.generator.encode(),
        ]
        return b"|".join(parts)


_SUPPORTED_CURVES = ("bn254", "bn254-like")


def setup(curve_choice):
    if curve_choice not in _SUPPORTED_CURVES:
        raise ConfigurationError(f"unsupported curve id: {curve_choice!r}")
    return PublicParams()


# ----------------------------------------------------------- algebra

def group_add(a, b):
    p1 = _ABSENT
    p2 = _ABSENT
    if a.p1 is not _ABSENT and b.p1 is not _ABSENT:
        p1 = _c.g1_to_affine(_c.g1_add(_c.g1_from_affine(a.p1),
                                       _c.g1_from_affine(b.p1)))
    if a.p2 is not _ABSENT and b.p2 is not _ABSENT:
        p2 = _c.g2_to_affine(_c.g2_add(_c.g2_from_affine(a.p2),
                                       _c.g2_from_affine(b.p2)))
    if p1 is _ABSENT and p2 is _ABSENT:
        raise ValueError("cannot add elements with disjoint representations")
    return GroupElem(p1=p1, p2=p2)


def scalar_mul(s, g):
    s %= _c.CURVE_ORDER
    p1 = _ABSENT
    p2 = _ABSENT
    if g.p1 is not _ABSENT:
        p1 = _c.g1_to_affine(_c.g1_mul(_c.g1_from_affine(g.p1), s))
    if g.p2 is not _ABSENT:
        p2 = _c.g2_to_affine(_c.g2_mul(_c.g2_from_affine(g.p2), s))
    return GroupElem(p1=p1, p2=p2)


def scalar_random(rng):
    """Uniform scalar in [0, order) from a caller-owned seedable RNG."""
    while True:
        k = rng.getrandbits(254)
        if k < _c.CURVE_ORDER:
            return k


@functools.lru_cache(maxsize=64)
def _g2_coeffs(q_affine):
    return _c.g2_precompute(q_affine)


@functools.lru_cache(maxsize=8192)
def _pairing_cached(p_affine, q_affine):
    return _c.final_exponentiation(_c.miller(_g2_coeffs(q_affine), p_affine))


def pairing(params, a, b):
    """Bilinear map at the symmetric interface: picks the orientation
    (first-group point, second-group point) the arguments can supply."""
    if a.is_identity or b.is_identity:
        return target_identity()
    if a.p1 is not _ABSENT and b.p2 is not _ABSENT:
        return TargetElem(_pairing_cached(a.p1, b.p2))
    if b.p1 is not _ABSENT and a.p2 is not _ABSENT:
        return TargetElem(_pairing_cached(b.p1, a.p2))
    raise ValueError("pairing needs one first-group and one second-group element")


# ------------------------------------------------------ hash-to-group

def _expand_message_xmd(msg, dst, length):
    if len(dst) > 255:
        raise ValueError("DST too long")
    ell = (length + 31) // 32
    if ell > 255 or length > 65535:
        raise ValueError("requested too many bytes")
    dst_prime = dst + bytes([len(dst)])
    msg_prime = b"\x00" * 64 + msg + length.to_bytes(2, "big") + b"\x00" + dst_prime
    b0 = hashlib.sha256(msg_prime).digest()
    bi = hashlib.sha256(b0 + b"\x01" + dst_prime).digest()
    out = bi
    for i in range(2, ell + 1):
        bi = hashlib.sha256(bytes(x ^ y for x, y in zip(b0, bi))
                            + bytes([i]) + dst_prime).digest()
        out += bi
    return out[:length]


def _hash_to_field(msg, count):
    # L = 48: ceil((254 + 128) / 8) for a uniform-enough reduction
    raw = _expand_message_xmd(msg, H2G_DST, count * 48)
    return [int.from_bytes(raw[i * 48:(i + 1) * 48], "big") % _c.P
            for i in range(count)]


# Shallue-van de Woestijne constants for y^2 = x^3 + 3 with Z = 1:
# g(Z) = 4 is nonzero, -g(Z)*3 is square, g(Z) is square => Z is valid.
_SVDW_Z = 1
_SVDW_C1 = 4
_SVDW_C2 = -pow(2, -1, _c.P) % _c.P  # -Z/2
_SVDW_C3 = _c.fp_sqrt(-12 % _c.P)
if _SVDW_C3 is None or _SVDW_C3 & 1:
    _SVDW_C3 = _c.P - _SVDW_C3  # sgn0(c3) must be 0
_SVDW_C4 = -16 * pow(3, -1, _c.P) % _c.P  # -4*g(Z) / (3*Z^2)


def _map_to_curve_svdw(u):
    p = _c.P
    tv1 = u * u % p * _SVDW_C1 % p
    tv2 = (1 + tv1) % p
    tv1 = (1 - tv1) % p
    tv3 = _c.fp_inv0(tv1 * tv2 % p)
    tv4 = u * tv1 % p * tv3 % p * _SVDW_C3 % p
    x1 = (_SVDW_C2 - tv4) % p
    gx1 = (x1 * x1 % p * x1 + 3) % p
    x2 = (_SVDW_C2 + tv4) % p
    gx2 = (x2 * x2 % p * x2 + 3) % p
    x3 = (tv2 * tv2 % p * tv3 % p) ** 2 % p * _SVDW_C4 % p
    x3 = (x3 + _SVDW_Z) % p
    if _c.fp_is_square(gx1):
        x, gx = x1, gx1
    elif _c.fp_is_square(gx2):
        x, gx = x2, gx2
    else:
        x, gx = x3, (x3 * x3 % p * x3 + 3) % p
    y = _c.fp_sqrt(gx)
    if (u & 1) != (y & 1):
        y = p - y
    return (x, y)


def hash_to_group(params, msg):
    """Deterministic hash of arbitrary bytes to a first-group element."""
    u0, u1 = _hash_to_field(msg, 2)
    q0 = _map_to_curve_svdw(u0)
    q1 = _map_to_curve_svdw(u1)
    pt = _c.g1_to_affine(_c.g1_add(_c.g1_from_affine(q0), _c.g1_from_affine(q1)))
    return GroupElem(p1=pt)


# -------------------------------------------------------- encode/decode

def _f2_sgn0(y):
    yi, yr = y
    return (yr & 1) if yr != 0 else (yi & 1)


def decode_source1(data):
    """64 uncompressed bytes -> first-group element."""
    if len(data) != 64:
        raise DecodeError(0, f"first-group element needs 64 bytes, got {len(data)}")
    if data == _ZERO64:
        return GroupElem(p1=None)
    x = int.from_bytes(data[:32], "big")
    y = int.from_bytes(data[32:], "big")
    if x >= _c.P:
        raise DecodeError(0, "x coordinate out of field range")
    if y >= _c.P:
        raise DecodeError(32, "y coordinate out of field range")
    if not _c.g1_on_curve((x, y)):
        raise DecodeError(0, "point not on curve")
    return GroupElem(p1=(x, y))


def decode_source2(data):
    """64 compressed bytes -> second-group element (subgroup-checked)."""
    if len(data) != 64:
        raise DecodeError(0, f"second-group element needs 64 bytes, got {len(data)}")
    if data == _ZERO64:
        return GroupElem(p2=None)
    flag = data[0] >> 7
    xi = int.from_bytes(bytes([data[0] & 0x7F]) + data[1:32], "big")
    xr = int.from_bytes(data[32:], "big")
    if xi >= _c.P:
        raise DecodeError(0, "x imaginary coefficient out of field range")
    if xr >= _c.P:
        raise DecodeError(32, "x real coefficient out of field range")
    x = (xi, xr)
    rhs = _c.f2_add(_c.f2_mul(_c.f2_sqr(x), x), _c.TWIST_B)
    y = _c.f2_sqrt(rhs)
    if y is None:
        raise DecodeError(0, "x is not on the twist")
    if _f2_sgn0(y) != flag:
        y = _c.f2_neg(y)
    if not _c.g2_in_subgroup((x, y)):
        raise DecodeError(0, "point not in the prime-order subgroup")
    return GroupElem(p2=(x, y))


def decode_target(data):
    if len(data) != 384:
        raise DecodeError(0, f"target element needs 384 bytes, got {len(data)}")
    vals = []
    for i in range(12):
        v = int.from_bytes(data[i * 32:(i + 1) * 32], "big")
        if v >= _c.P:
            raise DecodeError(i * 32, "coefficient out of field range")
        vals.append(v)
    f2s = [(vals[i + 1], vals[i]) for i in range(0, 12, 2)]
    y = (f2s[2], f2s[1], f2s[0])
    x = (f2s[5], f2s[4], f2s[3])
    return TargetElem((x, y))


def scalar_to_bytes(s):
    return (s % _c.CURVE_ORDER).to_bytes(32, "big")


def scalar_from_bytes(data):
    if len(data) != 32:
        raise DecodeError(0, f"scalar needs 32 bytes, got {len(data)}")
    s = int.from_bytes(data, "big")
    if s >= _c.CURVE_ORDER:
        raise DecodeError(0, "scalar out of range")
    return s
