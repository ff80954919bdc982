"""Dump the three update message encodings side by side.

Builds the same 3-hop announcement as an unsigned update, with per-hop
ECDSA signatures, and with one aggregate signature, then prints the
byte layout of each and a signature-block size table by path length.
"""

import random

from apvas import wire

rng = random.Random(2024)

nlri = wire.nlri_from_text("198.18.4.0/24")
path = tuple(wire.SecurePathSegment(pcount=1, flags=0, as_number=asn)
             for asn in (65003, 65002, 65001))

plain = wire.UpdateMessage(nlri=nlri, secure_path=path)
conventional = wire.UpdateMessage(
    nlri=nlri, secure_path=path,
    sig_block=wire.SignatureBlockConventional(
        entries=tuple((rng.randbytes(20), rng.randbytes(96)) for _ in path)))
apvas = wire.UpdateMessage(
    nlri=nlri, secure_path=path,
    sig_block=wire.SignatureBlockApvas(
        sigma=rng.randbytes(64),
        skis=tuple(rng.randbytes(20) for _ in path)))

for label, msg in [("plain", plain), ("conventional", conventional),
                   ("apvas", apvas)]:
    data = wire.encode_update(msg)
    print(f"== {label}: {len(data)} bytes ==")
    _, rows = wire.trace_update(data)
    for off, length, name, value in rows:
        shown = value if len(value) <= 40 else value[:37] + "..."
        print(f"  [{off:3d}+{length:3d}] {name:<24} {shown}")
    print()

print("signature-block bytes by path length")
print(f"{'len':>4} {'conventional':>13} {'apvas':>7} {'saving':>7}")
for length in (1, 2, 3, 5, 10, 20):
    conv = 1 + 118 * length
    agg = 67 + 20 * length
    print(f"{length:>4} {conv:>13} {agg:>7} {1 - agg / conv:>7.1%}")
print("\nthe aggregate block is already smaller at length 1 and the gap "
      "widens with every hop")
