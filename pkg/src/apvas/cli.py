"""Command line front end.

Subcommands: keygen, sign, aggregate, verify, inspect, simulate, report.
Exit codes: 0 success, 1 a verification answered false, 2 usage or
configuration error, 3 I/O or decode error.  APVAS_SEED in the
environment supplies a default seed wherever --seed is accepted.  Output
never includes timestamps, so identical invocations print identical
bytes.

The frozen crypto vectors under apvas/golden/ are regenerated with
``apvas --regen-golden --yes``; the extra flag is deliberate friction so
the vectors cannot drift silently.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import baseline as bl
from . import bimodal as bm
from . import netsim as ns
from .errors import ApvasError, ConfigurationError, DecodeError, EncodeError
from .group import GroupElem, decode_source2, setup
from .router import Registry, Router, RouterConfig, apvas_ski
from .wire import nlri_from_text, encode_update, trace_update

GOLDEN_DIR = Path(__file__).parent / "golden"

SUITES = ("plain", "conventional", "apvas")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apvas",
        description="Aggregate-signature path validation toolkit")
    parser.add_argument("--regen-golden", action="store_true",
                        help="rewrite the frozen crypto vectors (needs --yes)")
    parser.add_argument("--yes", action="store_true",
                        help="confirm a destructive maintenance action")
    sub = parser.add_subparsers(dest="cmd")

    p = sub.add_parser("keygen", help="generate a signing key")
    p.add_argument("--out", required=True, help="key file to write (JSON)")
    p.add_argument("--seed", type=int, default=None,
                   help="deterministic seed (default: APVAS_SEED or entropy)")

    p = sub.add_parser("sign", help="sign a message into a claim")
    p.add_argument("--key", required=True, help="key file from keygen")
    p.add_argument("--out", required=True, help="claim file to write")
    p.add_argument("--claim", default=None,
                   help="existing claim to extend (default: start fresh)")
    p.add_argument("--chain", type=int, default=None,
                   help="chain index to extend (default: start a new chain)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--message", help="message as UTF-8 text")
    group.add_argument("--message-hex", help="message as hex bytes")

    p = sub.add_parser("aggregate", help="merge claims")
    p.add_argument("--claim", action="append", required=True,
                   help="claim file (give at least twice)")
    p.add_argument("--out", required=True, help="merged claim file")

    p = sub.add_parser("verify", help="verify a claim file")
    p.add_argument("--claim", required=True)

    p = sub.add_parser("inspect", help="dump a message with byte offsets")
    p.add_argument("--msg", required=True, help="encoded update message file")

    p = sub.add_parser("simulate", help="run one suite over a topology")
    p.add_argument("--config", required=True, help="topology TOML file")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("report", help="run all suites and compare")
    p.add_argument("--config", required=True, help="topology TOML file")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _seed_or_env(seed):
    if seed is not None:
        return seed
    env = os.environ.get("APVAS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigurationError(
                f"APVAS_SEED must be an integer, got {env!r}") from None
    return None


def _load_keyfile(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        sk = int(doc["sk"], 16)
        pk = decode_source2(bytes.fromhex(doc["pk"]))
    except (KeyError, ValueError, json.JSONDecodeError) as e:
        raise DecodeError(0, f"bad key file {path}: {e}") from None
    return bm.KeyPair(sk=sk, pk=pk)


def _read_claim(params, path: str) -> bm.SignatureClaim:
    with open(path, "rb") as fh:
        return bm.deserialize_claim(params, fh.read())


def cmd_keygen(args) -> int:
    params = setup("bn254")
    rng = random.Random(_seed_or_env(args.seed))
    kp = bm.user_key_gen(params, rng)
    doc = {
        "scheme": "apvas",
        "sk": f"{kp.sk:064x}",
        "pk": kp.pk.encode().hex(),
        "ski": apvas_ski(kp.pk).hex(),
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(doc["ski"])
    return 0


def cmd_sign(args) -> int:
    params = setup("bn254")
    kp = _load_keyfile(args.key)
    if args.message_hex is not None:
        try:
            message = bytes.fromhex(args.message_hex)
        except ValueError:
            raise ConfigurationError(
                f"--message-hex is not valid hex: {args.message_hex!r}") from None
    else:
        message = args.message.encode("utf-8")
    claim = _read_claim(params, args.claim) if args.claim else bm.empty_claim()
    try:
        new_claim = bm.seq_agg_sign(params, kp, message, claim,
                                    chain_index=args.chain)
    except (bm.DuplicateEntryError, IndexError) as e:
        raise ConfigurationError(str(e)) from None
    with open(args.out, "wb") as fh:
        fh.write(bm.serialize_claim(new_claim))
    print(new_claim.sigma.encode().hex())
    return 0


def cmd_aggregate(args) -> int:
    if len(args.claim) < 2:
        raise ConfigurationError("aggregate needs at least two --claim files")
    params = setup("bn254")
    merged = _read_claim(params, args.claim[0])
    for path in args.claim[1:]:
        try:
            merged = bm.agg_sign(params, merged, _read_claim(params, path))
        except bm.DuplicateEntryError as e:
            raise ConfigurationError(str(e)) from None
    with open(args.out, "wb") as fh:
        fh.write(bm.serialize_claim(merged))
    print(merged.sigma.encode().hex())
    return 0


def cmd_verify(args) -> int:
    params = setup("bn254")
    claim = _read_claim(params, args.claim)
    ok = bm.verify(params, claim)
    print("true" if ok else "false")
    return 0 if ok else 1


def cmd_inspect(args) -> int:
    with open(args.msg, "rb") as fh:
        data = fh.read()
    _, trace = trace_update(data)
    print(f"{'offset':>6} {'len':>5}  field")
    for off, length, name, value in trace:
        print(f"{off:6d} {length:5d}  {name} = {value}")
    print(f"total {len(data)} bytes")
    return 0


def _run_suite(raw, suite, params, out_dir: Path):
    cfg = ns.build_topology(raw, suite, params)
    result = ns.run_experiment(cfg, suite, params)
    csv_path = out_dir / f"results_{suite}.csv"
    ns.write_results_csv(result, str(csv_path))
    fit_doc = {
        "suite": suite,
        "fit": None if result.fit is None else {
            "slope": result.fit[0],
            "intercept": result.fit[1],
            "predicted_at_20": result.predicted_at_20,
            "residuals": list(result.residuals),
        },
        "messages_delivered": result.messages_delivered,
        "rejections": result.rejections,
    }
    fit_path = out_dir / f"fit_{suite}.json"
    with open(fit_path, "w", encoding="utf-8") as fh:
        json.dump(fit_doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return result, csv_path, fit_path


def cmd_simulate(args) -> int:
    raw = ns.load_topology(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = setup("bn254") if args.suite == "apvas" else None
    _, csv_path, fit_path = _run_suite(raw, args.suite, params, out_dir)
    print(f"wrote {csv_path}")
    print(f"wrote {fit_path}")
    return 0


def cmd_report(args) -> int:
    raw = ns.load_topology(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = setup("bn254")
    results = {}
    for suite in SUITES:
        results[suite], csv_path, _ = _run_suite(raw, suite, params, out_dir)
        print(f"wrote {csv_path}")
    report = ns.compare_report(results)
    report_path = out_dir / "report.json"
    ns.write_report(report, str(report_path))
    red = report.data["sig_block_reduction"]
    print(f"sig-block reduction at avg length 3.9: {red['at_3.9'] * 100:.2f}%")
    print(f"sig-block reduction at length 20: {red['at_20'] * 100:.2f}%")
    cross = report.data["route_attr_crossover_len"]
    print(f"route-attr crossover at avg length: {cross}")
    for suite in ("conventional", "apvas"):
        fit = report.data["fits"][suite]
        if fit:
            print(f"{suite} fit: slope={fit['slope']:.6f} "
                  f"intercept={fit['intercept']:.6f} "
                  f"predicted_at_20={fit['predicted_at_20']:.6f}")
    print(f"wrote {report_path}")
    return 0


# -- golden vector maintenance ------------------------------------------------


def _regen_golden() -> int:
    from .group import hash_to_group

    params = setup("bn254")
    GOLDEN_DIR.mkdir(exist_ok=True)

    msgs = [b"", b"abc", b"abcdef0123456789", b"APVAS", b"path validation",
            bytes(32), bytes.fromhex("00ff00ff00ff"), b"BGPsec"]
    lines = []
    for m in msgs:
        h = hash_to_group(params, m)
        lines.append(f"{m.hex() or '-'} {h.encode().hex()}")
    (GOLDEN_DIR / "hash_to_group.txt").write_text("\n".join(lines) + "\n",
                                                  encoding="utf-8")

    lines = []
    keys = {}
    for seed in (1, 2, 3):
        kp = bm.user_key_gen(params, random.Random(seed))
        keys[seed] = kp
        lines.append(f"key {seed} {kp.sk:064x} {kp.pk.encode().hex()}")
    entry = bm.ChainEntry(pk=keys[1].pk, message=b"alpha")
    c = bm.chain_commitment(params, bm.empty_claim().sigma, entry, (entry,))
    lines.append(f"commitment {c.encode().hex()}")
    claim = bm.seq_agg_sign(params, keys[1], b"alpha", bm.empty_claim())
    claim = bm.seq_agg_sign(params, keys[2], b"bravo", claim, chain_index=0)
    claim = bm.seq_agg_sign(params, keys[3], b"charlie", claim)
    lines.append(f"claim {bm.serialize_claim(claim).hex()}")
    (GOLDEN_DIR / "scheme.txt").write_text("\n".join(lines) + "\n",
                                           encoding="utf-8")

    lines = []
    nlri = nlri_from_text("198.18.0.0/24")
    for suite in SUITES:
        registry = Registry()
        routers = {}
        for as_no in (65001, 65002, 65003, 65004):
            rng = ns._key_rng(7, as_no)
            if suite == "apvas":
                kp = bm.user_key_gen(params, rng)
                ski = registry.register_apvas(kp.pk)
            elif suite == "conventional":
                kp = bl.baseline_key_gen(rng)
                ski = registry.register_baseline(kp.pk)
            else:
                kp, ski = None, bytes(20)
            neighbors = tuple(n for n in (as_no - 1, as_no + 1)
                              if 65001 <= n <= 65004)
            cfg = RouterConfig(as_number=as_no, suite=suite,
                               neighbors=neighbors, keypair=kp, ski=ski)
            routers[as_no] = Router(cfg, params=params, registry=registry)
        msg = routers[65001].originate(nlri, 65002)
        lines.append(f"{suite}-len1 {encode_update(msg).hex()}")
        res = routers[65002].receive(msg, 65001)
        msg2 = dict(res.forwarded)[65003]
        lines.append(f"{suite}-len2 {encode_update(msg2).hex()}")
        res = routers[65003].receive(msg2, 65002)
        msg3 = dict(res.forwarded)[65004]
        lines.append(f"{suite}-len3 {encode_update(msg3).hex()}")
    (GOLDEN_DIR / "messages.txt").write_text("\n".join(lines) + "\n",
                                             encoding="utf-8")

    print(f"regenerated golden vectors in {GOLDEN_DIR}")
    return 0


_DISPATCH = {
    "keygen": cmd_keygen,
    "sign": cmd_sign,
    "aggregate": cmd_aggregate,
    "verify": cmd_verify,
    "inspect": cmd_inspect,
    "simulate": cmd_simulate,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.regen_golden:
            if not args.yes:
                print("refusing to rewrite golden vectors without --yes",
                      file=sys.stderr)
                return 2
            return _regen_golden()
        if args.cmd is None:
            parser.print_usage(sys.stderr)
            return 2
        return _DISPATCH[args.cmd](args)
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DecodeError, EncodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ApvasError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
