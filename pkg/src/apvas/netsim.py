"""Deterministic topology simulation and the memory experiment harness.

A topology file (TOML, comments welcome) names the routers, the links and
the advertisement batches:

    key_seed = 7
    routers = [65001, 65002, 65003]
    links = [[65001, 65002], [65002, 65003]]

    [[advertisements]]
    origin_as = 65001
    path_count = 200
    nlri_seed = 1

Keys are derived from key_seed per AS, prefixes from nlri_seed, so a
configuration rebuilds bit-identically.  ``run_experiment`` floods the
advertisements through a single FIFO event queue (messages cross each
link as encoded bytes), snapshots every RIB, and fits route-attribute
bytes against average path length.  ``compare_report`` lines the suites
up: per-router byte tables, reduction ratios, crossover, and a projection
of the per-path model onto Internet-scale path counts.
"""

from __future__ import annotations

import csv
import hashlib
import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import tomli

from . import baseline as bl
from . import bimodal as bm
from .errors import ConfigurationError
from .group import PublicParams, setup
from .router import (
    MemoryModel,
    Registry,
    RibSnapshot,
    Router,
    RouterConfig,
    apvas_ski,
)
from .wire import Nlri, decode_update, encode_update

MAX_PATH_COUNT = 250

# 512 /24 prefixes inside 198.18.0.0/15
_NLRI_SPACE = 512

# Estimated Internet-scale secured path counts by year, used only for the
# full-route projection table in the comparison report.
FULL_ROUTE_COUNTS: Tuple[Tuple[int, int], ...] = (
    (2020, 6332177),
    (2021, 10130562),
    (2022, 14201374),
    (2023, 18111088),
    (2024, 21794419),
    (2025, 25472541),
)

CSV_COLUMNS = ("suite", "as_number", "path_count", "avg_len",
               "routing_table_bytes", "route_attr_bytes", "sig_block_bytes")


@dataclass(frozen=True)
class Advertisement:
    origin_as: int
    path_count: int
    nlri_seed: int


@dataclass(frozen=True)
class RawTopology:
    """Suite-independent content of a topology file."""

    key_seed: int
    as_numbers: Tuple[int, ...]
    links: Tuple[Tuple[int, int], ...]
    advertisements: Tuple[Advertisement, ...]


@dataclass(frozen=True)
class TopologyConfig:
    routers: Tuple[RouterConfig, ...]
    links: Tuple[Tuple[int, int], ...]
    advertisements: Tuple[Advertisement, ...]
    key_seed: int

    @property
    def suite(self) -> str:
        return self.routers[0].suite if self.routers else "plain"


@dataclass(frozen=True)
class ExperimentResult:
    suite: str
    per_router: Dict[int, RibSnapshot]
    per_length_series: Tuple[Tuple[float, int], ...]
    fit: Optional[Tuple[float, float]]
    predicted_at_20: Optional[float]
    residuals: Tuple[float, ...]
    messages_delivered: int
    rejections: Dict[str, int]


@dataclass(frozen=True)
class ReportDocument:
    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2) + "\n"


# -- configuration loading --------------------------------------------------


def _require(table: dict, key: str, kind, where: str):
    if key not in table:
        raise ConfigurationError(f"{where}: missing key {key!r}")
    value = table[key]
    if kind is int and isinstance(value, bool):
        raise ConfigurationError(f"{where}: {key} must be an integer")
    if not isinstance(value, kind):
        raise ConfigurationError(
            f"{where}: {key} must be {kind.__name__}, got {type(value).__name__}")
    return value


def load_topology_text(text: str) -> RawTopology:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as e:
        raise ConfigurationError(f"topology file is not valid TOML: {e}") from None

    allowed = {"key_seed", "routers", "links", "advertisements"}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigurationError(
            f"unknown topology keys: {', '.join(sorted(unknown))}")

    key_seed = _require(doc, "key_seed", int, "topology")
    routers = _require(doc, "routers", list, "topology")
    links = _require(doc, "links", list, "topology")
    ads_raw = doc.get("advertisements", [])
    if not isinstance(ads_raw, list):
        raise ConfigurationError("topology: advertisements must be an array of tables")

    as_numbers: List[int] = []
    for i, as_no in enumerate(routers):
        if isinstance(as_no, bool) or not isinstance(as_no, int):
            raise ConfigurationError(f"routers[{i}]: AS number must be an integer")
        if not 0 <= as_no <= 0xFFFFFFFF:
            raise ConfigurationError(f"routers[{i}]: {as_no} not a 4-byte unsigned")
        if as_no in as_numbers:
            raise ConfigurationError(f"routers[{i}]: duplicate AS {as_no}")
        as_numbers.append(as_no)
    if not as_numbers:
        raise ConfigurationError("topology: routers list is empty")

    link_pairs: List[Tuple[int, int]] = []
    for i, pair in enumerate(links):
        if (not isinstance(pair, list) or len(pair) != 2
                or any(isinstance(x, bool) or not isinstance(x, int) for x in pair)):
            raise ConfigurationError(f"links[{i}]: expected [as_a, as_b]")
        a, b = pair
        if a == b:
            raise ConfigurationError(f"links[{i}]: self-link on AS {a}")
        for x in (a, b):
            if x not in as_numbers:
                raise ConfigurationError(f"links[{i}]: unknown AS {x}")
        link_pairs.append((a, b))

    ads: List[Advertisement] = []
    for i, ad in enumerate(ads_raw):
        if not isinstance(ad, dict):
            raise ConfigurationError(f"advertisements[{i}]: expected a table")
        where = f"advertisements[{i}]"
        origin = _require(ad, "origin_as", int, where)
        count = _require(ad, "path_count", int, where)
        seed = _require(ad, "nlri_seed", int, where)
        extra = set(ad) - {"origin_as", "path_count", "nlri_seed"}
        if extra:
            raise ConfigurationError(
                f"{where}: unknown keys {', '.join(sorted(extra))}")
        if origin not in as_numbers:
            raise ConfigurationError(f"{where}: unknown origin AS {origin}")
        if not 1 <= count <= MAX_PATH_COUNT:
            raise ConfigurationError(
                f"{where}: path_count {count} not in 1..{MAX_PATH_COUNT}")
        ads.append(Advertisement(origin_as=origin, path_count=count,
                                 nlri_seed=seed))

    raw = RawTopology(key_seed=key_seed, as_numbers=tuple(as_numbers),
                      links=tuple(link_pairs), advertisements=tuple(ads))
    _check_connected(raw.as_numbers, _neighbor_map(raw))
    return raw


def load_topology(path: str) -> RawTopology:
    with open(path, "r", encoding="utf-8") as fh:
        return load_topology_text(fh.read())


def _neighbor_map(raw: RawTopology) -> Dict[int, Tuple[int, ...]]:
    nb: Dict[int, set] = {a: set() for a in raw.as_numbers}
    for a, b in raw.links:
        nb[a].add(b)
        nb[b].add(a)
    return {a: tuple(sorted(s)) for a, s in nb.items()}


def _check_connected(as_numbers: Sequence[int],
                     neighbors: Dict[int, Tuple[int, ...]]) -> None:
    if not as_numbers:
        return
    seen = {as_numbers[0]}
    frontier = deque(seen)
    while frontier:
        cur = frontier.popleft()
        for nb in neighbors[cur]:
            if nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    missing = sorted(set(as_numbers) - seen)
    if missing:
        raise ConfigurationError(
            f"topology is not connected; unreachable: {missing}")


def _key_rng(key_seed: int, as_no: int) -> random.Random:
    digest = hashlib.sha256(f"key/{key_seed}/{as_no}".encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def build_topology(raw: RawTopology, suite: str,
                   params: Optional[PublicParams] = None) -> TopologyConfig:
    if suite not in ("plain", "conventional", "apvas"):
        raise ConfigurationError(f"unknown suite {suite!r}")
    if suite == "apvas" and params is None:
        params = setup("bn254")
    neighbors = _neighbor_map(raw)
    configs = []
    for as_no in raw.as_numbers:
        rng = _key_rng(raw.key_seed, as_no)
        if suite == "apvas":
            kp = bm.user_key_gen(params, rng)
            ski = apvas_ski(kp.pk)
        elif suite == "conventional":
            kp = bl.baseline_key_gen(rng)
            ski = kp.ski
        else:
            kp, ski = None, bytes(20)
        configs.append(RouterConfig(as_number=as_no, suite=suite,
                                    neighbors=neighbors[as_no],
                                    keypair=kp, ski=ski))
    return TopologyConfig(routers=tuple(configs), links=raw.links,
                          advertisements=raw.advertisements,
                          key_seed=raw.key_seed)


def generate_nlris(ad: Advertisement) -> Tuple[Nlri, ...]:
    """Deterministic, collision-free /24s inside 198.18.0.0/15."""
    digest = hashlib.sha256(f"nlri/{ad.nlri_seed}".encode()).digest()
    rng = random.Random(int.from_bytes(digest, "big"))
    picks = rng.sample(range(_NLRI_SPACE), ad.path_count)
    return tuple(
        Nlri(prefix_len=24, prefix=bytes((198, 18 + idx // 256, idx % 256)))
        for idx in picks)


# -- the experiment ----------------------------------------------------------


def run_experiment(cfg: TopologyConfig, suite: str,
                   params: Optional[PublicParams] = None,
                   memory: MemoryModel = MemoryModel()) -> ExperimentResult:
    if not cfg.routers:
        raise ConfigurationError("topology has no routers")
    if cfg.suite != suite:
        raise ConfigurationError(
            f"topology was built for suite {cfg.suite!r}, not {suite!r}")
    for ad in cfg.advertisements:
        if ad.path_count > MAX_PATH_COUNT:
            raise ConfigurationError(
                f"path_count {ad.path_count} exceeds {MAX_PATH_COUNT}")
    neighbors = {rc.as_number: rc.neighbors for rc in cfg.routers}
    _check_connected([rc.as_number for rc in cfg.routers], neighbors)

    if suite == "apvas" and params is None:
        params = setup("bn254")
    registry = Registry()
    for rc in cfg.routers:
        if suite == "apvas":
            registry.register_apvas(rc.keypair.pk)
        elif suite == "conventional":
            registry.register_baseline(rc.keypair.pk)
    routers = {rc.as_number: Router(rc, params=params, registry=registry,
                                    memory=memory)
               for rc in cfg.routers}

    queue: deque = deque()
    for ad in cfg.advertisements:
        origin = routers[ad.origin_as]
        for nlri in generate_nlris(ad):
            for nb in sorted(origin.config.neighbors):
                msg = origin.originate(nlri, nb)
                queue.append((ad.origin_as, nb, encode_update(msg)))

    delivered = 0
    rejections: Dict[str, int] = {}
    while queue:
        from_as, to_as, raw = queue.popleft()
        msg = decode_update(raw)
        res = routers[to_as].receive(msg, from_as)
        delivered += 1
        if not res.accepted:
            rejections[res.reason] = rejections.get(res.reason, 0) + 1
        for nb, out in res.forwarded:
            queue.append((to_as, nb, encode_update(out)))

    per_router = {as_no: routers[as_no].snapshot_memory()
                  for as_no in sorted(routers)}

    origins = {ad.origin_as for ad in cfg.advertisements}
    series = tuple(
        (per_router[as_no].avg_len, per_router[as_no].route_attr_bytes)
        for as_no in sorted(routers) if as_no not in origins)

    fit = None
    predicted = None
    residuals: Tuple[float, ...] = ()
    if len({x for x, _ in series}) >= 2:
        fit = least_squares_fit(series)
        slope, intercept = fit
        predicted = slope * 20 + intercept
        residuals = tuple(y - (slope * x + intercept) for x, y in series)

    return ExperimentResult(suite=suite, per_router=per_router,
                            per_length_series=series, fit=fit,
                            predicted_at_20=predicted, residuals=residuals,
                            messages_delivered=delivered,
                            rejections=rejections)


def least_squares_fit(series: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Ordinary least squares line through (x, y) points."""
    if len(series) < 2:
        raise ValueError("need at least two points to fit a line")
    xs = [float(x) for x, _ in series]
    ys = [float(y) for _, y in series]
    if len(set(xs)) < 2:
        raise ValueError("need at least two distinct x values")
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    denom = n * sxx - sx * sx
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    return slope, intercept


# -- reporting ----------------------------------------------------------------


def sig_block_wire_bytes(suite: str, length: int) -> int:
    """Wire bytes of one signature block for a path of the given length."""
    if suite == "apvas":
        return 67 + 20 * length
    if suite == "conventional":
        return 1 + 118 * length
    return 0


def reduction_ratio(length: float) -> float:
    """Relative signature-block saving of the aggregate suite at a length."""
    apvas = 67 + 20 * length
    conventional = 1 + 118 * length
    return 1 - apvas / conventional


def _attr_per_path(suite: str, length: float, mm: MemoryModel) -> float:
    base = 6 * length + mm.attr_fixed_cost
    if suite == "apvas":
        return base + 20 * length + mm.apvas_path_state_cost
    if suite == "conventional":
        return base + 118 * length
    return base


def compare_report(results: Dict[str, ExperimentResult],
                   memory: MemoryModel = MemoryModel()) -> ReportDocument:
    if not results:
        raise ConfigurationError("no experiment results to compare")
    shapes = {}
    for suite, res in results.items():
        shapes[suite] = tuple(
            (as_no, res.per_router[as_no].path_count,
             round(res.per_router[as_no].avg_len, 9))
            for as_no in sorted(res.per_router))
    if len(set(shapes.values())) != 1:
        raise ConfigurationError(
            "experiment results come from different configurations")

    tables = {
        suite: [res.per_router[as_no].to_record()
                for as_no in sorted(res.per_router)]
        for suite, res in results.items()
    }

    fits = {}
    for suite, res in results.items():
        if res.fit is None:
            fits[suite] = None
        else:
            fits[suite] = {
                "slope": res.fit[0],
                "intercept": res.fit[1],
                "predicted_at_20": res.predicted_at_20,
                "residuals": list(res.residuals),
            }

    crossover_attr = None
    if "apvas" in results and "conventional" in results:
        apvas_rows = {row[0]: row for row in shapes["apvas"]}
        for as_no, _count, avg_len in shapes["conventional"]:
            if as_no not in apvas_rows or avg_len == 0:
                continue
            a = results["apvas"].per_router[as_no].route_attr_bytes
            c = results["conventional"].per_router[as_no].route_attr_bytes
            if a < c:
                crossover_attr = avg_len
                break

    projection = []
    for year, count in FULL_ROUTE_COUNTS:
        row = {"year": year, "path_count": count}
        for suite in ("plain", "conventional", "apvas"):
            per_path = _attr_per_path(suite, 3.9, memory)
            total = count * (memory.routing_entry_cost + per_path)
            if suite == "apvas":
                total += 64
            row[f"{suite}_bytes"] = int(round(total))
        row["reduction_vs_conventional"] = round(
            1 - row["apvas_bytes"] / row["conventional_bytes"], 6)
        projection.append(row)

    data = {
        "per_router_tables": tables,
        "fits": fits,
        "sig_block_reduction": {
            "at_3.9": reduction_ratio(3.9),
            "at_20": reduction_ratio(20),
        },
        "sig_block_crossover_len": 1,
        "route_attr_crossover_len": crossover_attr,
        "full_route_projection": projection,
        "memory_model": {
            "attr_fixed_cost": memory.attr_fixed_cost,
            "routing_entry_cost": memory.routing_entry_cost,
            "apvas_path_state_cost": memory.apvas_path_state_cost,
        },
    }
    return ReportDocument(data=data)


# -- output files --------------------------------------------------------------


def write_results_csv(result: ExperimentResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for as_no in sorted(result.per_router):
            snap = result.per_router[as_no]
            writer.writerow([
                result.suite,
                as_no,
                snap.path_count,
                f"{snap.avg_len:.6f}",
                snap.routing_table_bytes,
                snap.route_attr_bytes,
                snap.sig_block_bytes,
            ])


def write_report(report: ReportDocument, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
