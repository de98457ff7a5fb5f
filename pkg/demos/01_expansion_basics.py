"""Expansion and expansion quality on toy graphs.

A sample's expansion is how many outside nodes it touches per member. The
quality variant divides by the number of outside nodes, so a value of 1
means the sample dominates the graph. The greedy sampler adds, one at a
time, the node that reaches the most nodes not yet seen.

Run:  python demos/01_expansion_basics.py
"""
from netexpand import brute_force_max_expansion, expansion, expansion_quality, greedy_apx
from netexpand.graph import path_graph, star_graph


def main():
    star = star_graph(9)
    path = path_graph(5)

    print("star with 9 leaves, center 0")
    print("  expansion({0})       =", expansion(star, {0}))
    print("  quality({0})         =", expansion_quality(star, {0}))
    print("  quality({4}) (leaf)  =", expansion_quality(star, {4}))

    print("\npath 0-1-2-3-4")
    print("  expansion({2})       =", expansion(path, {2}))
    print("  quality({0})         =", expansion_quality(path, {0}))

    # greedy against the exhaustive optimum on the path
    for k in (1, 2):
        run = greedy_apx(path, k)
        best, value = brute_force_max_expansion(path, k)
        print(f"  k={k}: greedy picks {run.order} (expansion {run.expansion(k)}), "
              f"optimum {sorted(best)} (expansion {value})")


if __name__ == "__main__":
    main()
