"""How close does local XS search get to the global greedy sample?

The greedy sampler sees the whole graph; XS only sees the neighbors of
the node holding the query. On a hub-rich graph the two curves stay close,
on a long thin lattice-like graph XS falls well behind.

Run:  python demos/04_greedy_vs_xs.py
"""
from netexpand import Graph, generate_ba
from netexpand.harness.experiments import greedy_vs_xs


def grid(rows, cols):
    edges = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
    edges += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
    return Graph.from_edges(rows * cols, edges, name="grid")


def main():
    for name, g in [("BA(5000, 3)", generate_ba(5000, 3, seed=1)), ("grid 20x250", grid(20, 250))]:
        cmp_ = greedy_vs_xs(g, name, steps=1000, trials=10, seed=1)
        print(name)
        for step in (10, 100, 500, 1000):
            print(f"  step {step:4}: greedy {cmp_.greedy[step - 1]:.3f}  XS {cmp_.xs_mean[step - 1]:.3f}")


if __name__ == "__main__":
    main()
