"""Push one announcement down a 4-router line and watch each hop.

Every router validates the incoming update, stores the route, folds the
aggregate signature into its local claim, and re-signs toward the next
neighbor.  At the end we corrupt a message in flight and see it bounce.
"""

import random

from apvas import bimodal as bm
from apvas import router as rt
from apvas import wire
from apvas.group import setup


def build_line(params, registry, as_numbers):
    routers = {}
    for i, asn in enumerate(as_numbers):
        neighbors = tuple(n for n in (as_numbers[i - 1] if i else None,
                                      as_numbers[i + 1] if i + 1 < len(as_numbers) else None)
                          if n is not None)
        kp = bm.user_key_gen(params, random.Random(9000 + asn))
        ski = registry.register_apvas(kp.pk)
        cfg = rt.RouterConfig(as_number=asn, suite="apvas",
                              neighbors=neighbors, keypair=kp, ski=ski)
        routers[asn] = rt.Router(cfg, params=params, registry=registry)
    return routers


def main():
    params = setup("bn254")
    registry = rt.Registry()
    line = (65001, 65002, 65003, 65004)
    routers = build_line(params, registry, line)

    nlri = wire.nlri_from_text("198.18.0.0/24")
    msg = routers[65001].originate(nlri, target_as=65002)
    sender = 65001
    print(f"AS65001 originates {nlri.as_text()} "
          f"({len(wire.encode_update(msg))} bytes on the wire)")

    while True:
        receiver = line[line.index(sender) + 1]
        result = routers[receiver].receive(msg, from_as=sender)
        path = [s.as_number for s in msg.secure_path]
        print(f"AS{receiver} <- AS{sender}: path {path} accepted={result.accepted}"
              f" reason={result.reason} forwards={len(result.forwarded)}")
        if not result.forwarded:
            break
        sender = receiver
        _, msg = result.forwarded[0]

    last = routers[line[-1]]
    snap = last.snapshot_memory()
    print(f"\nAS{line[-1]} table: {snap.path_count} route(s), "
          f"avg path len {snap.avg_len:.1f}, "
          f"stored signature state {snap.stored_signatures_bytes} bytes")
    for entry in snap.entries:
        print(f"  {entry.nlri.as_text()} via "
              f"{[s.as_number for s in entry.secure_path]} "
              f"verified={entry.verified}")
    claim = last.stored_claim
    print(f"stored claim: {claim.entry_count()} entries in "
          f"{len(claim.chains)} chain(s), verifies: "
          f"{bm.verify(params, claim)}")

    print("\n-- now corrupt a signature in flight --")
    fresh = routers[65001].originate(wire.nlri_from_text("198.18.9.0/24"),
                                     target_as=65002)
    block = fresh.sig_block
    bad_sigma = bytes([block.sigma[0] ^ 0x01]) + block.sigma[1:]
    forged = wire.UpdateMessage(
        nlri=fresh.nlri, secure_path=fresh.secure_path,
        sig_block=wire.SignatureBlockApvas(sigma=bad_sigma, skis=block.skis))
    result = routers[65002].receive(forged, from_as=65001)
    print(f"AS65002 <- AS65001 (corrupted): accepted={result.accepted} "
          f"reason={result.reason}")


if __name__ == "__main__":
    main()
