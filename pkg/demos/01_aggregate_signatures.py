"""Walk through the aggregate signature scheme by hand.

Three signers extend one chain, a fourth starts a second chain, and the
two partial claims merge into a single signature that stays 64 bytes no
matter how many entries it covers.
"""

import random

from apvas import bimodal as bm
from apvas.group import setup


def show(label, claim):
    data = bm.serialize_claim(claim)
    print(f"{label}: {claim.entry_count()} entries in {len(claim.chains)} "
          f"chain(s), sigma={data[:8].hex()}.., serialized {len(data)} bytes")


def main():
    params = setup("bn254")
    keys = {}
    for i, name in enumerate(["alice", "bob", "carol", "dave"]):
        keys[name] = bm.user_key_gen(params, random.Random(11 + i))
        print(f"{name}: pk {keys[name].pk.encode()[:8].hex()}..")

    print("\n-- chain one: alice -> bob -> carol --")
    left = bm.empty_claim()
    left = bm.seq_agg_sign(params, keys["alice"], b"route 10.0.0.0/8", left)
    show("after alice", left)
    left = bm.seq_agg_sign(params, keys["bob"], b"route 10.0.0.0/8 via AS65001",
                           left, chain_index=0)
    show("after bob", left)
    left = bm.seq_agg_sign(params, keys["carol"],
                           b"route 10.0.0.0/8 via AS65001 AS65002",
                           left, chain_index=0)
    show("after carol", left)

    print("\n-- chain two: dave signs something unrelated --")
    right = bm.seq_agg_sign(params, keys["dave"], b"route 192.0.2.0/24",
                            bm.empty_claim())
    show("dave alone", right)

    print("\n-- merge the two claims --")
    merged = bm.agg_sign(params, left, right)
    show("merged", merged)
    print("verify(merged):", bm.verify(params, merged))

    print("\n-- round trip through bytes --")
    back = bm.deserialize_claim(params, bm.serialize_claim(merged))
    print("verify(decoded):", bm.verify(params, back))

    print("\n-- tamper with one message --")
    chain = merged.chains[0]
    bad_entry = bm.ChainEntry(pk=chain.entries[1].pk,
                              message=chain.entries[1].message + b"!")
    entries = (chain.entries[0], bad_entry) + chain.entries[2:]
    forged = bm.SignatureClaim(sigma=merged.sigma,
                               chains=(bm.Chain(entries),) + merged.chains[1:])
    print("verify(tampered):", bm.verify(params, forged))


if __name__ == "__main__":
    main()
