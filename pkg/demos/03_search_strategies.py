"""Steps each search strategy needs to discover a share of the network.

XS hops to the neighbor that reveals the most unseen nodes, DS to the
highest-degree neighbor, RW to a random one, and BFS floods copies of the
query. Every trial uses the same random source for all four strategies.

Run:  python demos/03_search_strategies.py [--trials 30]
"""
import argparse

from netexpand import generate_ba, generate_er
from netexpand.harness.experiments import search_table_for_graph


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    graphs = {
        "ER (mean degree 6)": generate_er(args.n, 6 / (args.n - 1), seed=args.seed),
        "BA (m=3)": generate_ba(args.n, 3, seed=args.seed),
    }
    for name, g in graphs.items():
        print(name)
        cells = search_table_for_graph(g, name, trials=args.trials, seed=args.seed)
        for target in (0.20, 0.35, 0.50):
            row = {c.strategy: c.mean_steps for c in cells if c.target == target}
            print(f"  {target:.0%}: " + "  ".join(f"{s} {row[s]:7.1f}" for s in ("XS", "DS", "RW", "BFS")))


if __name__ == "__main__":
    main()
