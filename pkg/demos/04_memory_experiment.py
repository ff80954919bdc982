"""Run the memory experiment on a small line and print the comparison.

Uses a 6-router line with 60 paths per router (enough for clean fits,
quick enough for a demo) and runs all three suites through the flood
simulator, then prints the per-router memory table and the headline
numbers from the comparison report.
"""

from apvas import netsim as ns
from apvas.group import setup

TOPOLOGY = """
key_seed = 7
routers = [65001, 65002, 65003, 65004, 65005, 65006]

links = [
    [65001, 65002],
    [65002, 65003],
    [65003, 65004],
    [65004, 65005],
    [65005, 65006],
]

[[advertisements]]
origin_as = 65001
path_count = 60
nlri_seed = 200
"""


def main():
    raw = ns.load_topology_text(TOPOLOGY)
    params = setup("bn254")
    results = {}
    for suite in ("plain", "conventional", "apvas"):
        cfg = ns.build_topology(raw, suite, params)
        print(f"running {suite}..")
        results[suite] = ns.run_experiment(cfg, suite, params)

    print("\nroute-attribute bytes by router")
    print(f"{'as':>7} {'avg_len':>8} {'plain':>8} {'conventional':>13} {'apvas':>8}")
    for as_no in sorted(results["plain"].per_router):
        rows = {s: results[s].per_router[as_no] for s in results}
        if rows["plain"].path_count == 0:
            continue
        print(f"{as_no:>7} {rows['plain'].avg_len:>8.1f} "
              f"{rows['plain'].route_attr_bytes:>8} "
              f"{rows['conventional'].route_attr_bytes:>13} "
              f"{rows['apvas'].route_attr_bytes:>8}")

    report = ns.compare_report(results).data
    for suite in ("conventional", "apvas"):
        fit = report["fits"][suite]
        print(f"\n{suite}: attr bytes ~= {fit['slope']:.0f} * len + "
              f"{fit['intercept']:.0f} (predicted at len 20: "
              f"{fit['predicted_at_20']:.0f})")

    red = report["sig_block_reduction"]
    print(f"\nsig-block saving at avg length 3.9: {red['at_3.9']:.1%}")
    print(f"sig-block saving at length 20:      {red['at_20']:.1%}")
    print(f"route-attr crossover at avg length: "
          f"{report['route_attr_crossover_len']}")

    print("\nprojection onto full-table sizes (avg length 3.9)")
    for row in report["full_route_projection"]:
        print(f"  {row['year']}: {row['path_count']:>10} paths, "
              f"conventional {row['conventional_bytes'] / 1e9:6.2f} GB, "
              f"apvas {row['apvas_bytes'] / 1e9:6.2f} GB "
              f"(saves {row['reduction_vs_conventional']:.1%})")


if __name__ == "__main__":
    main()
