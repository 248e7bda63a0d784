#!/usr/bin/env python3
"""Independent ground-truth derivation for the gadget tables and family counts.

Everything here is an oracle computation used to freeze expected values into
the Rust tests. Not part of the deliverable.
"""
import itertools
import networkx as nx

G1_EDGES = [
    (1, 7), (1, 11), (1, 12), (2, 8), (2, 12), (2, 15), (3, 9), (3, 12),
    (3, 16), (4, 10), (4, 14), (4, 15), (5, 11), (5, 13), (5, 15), (6, 13),
    (6, 14), (7, 13), (8, 14), (8, 16), (9, 15), (10, 16), (11, 14), (13, 16),
]
G2_EDGES = [
    (1, 7), (1, 11), (1, 12), (2, 8), (2, 12), (2, 16), (3, 9), (3, 12),
    (3, 15), (4, 10), (4, 14), (4, 16), (5, 6), (5, 7), (5, 13), (5, 16),
    (6, 14), (8, 14), (8, 15), (9, 16), (10, 15), (11, 13), (11, 14), (13, 15),
]

def graph(edges, n=16):
    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(edges)
    return g

def square(g):
    s = nx.Graph()
    s.add_nodes_from(g.nodes())
    for u in g.nodes():
        for v in g.nodes():
            if u < v and nx.has_path(g, u, v) and nx.shortest_path_length(g, u, v) <= 2:
                s.add_edge(u, v)
    return s

g1 = graph(G1_EDGES)
g2 = graph(G2_EDGES)
print("g1: n=%d m=%d girth=%s mindeg=%d" % (
    g1.number_of_nodes(), g1.number_of_edges(), nx.girth(g1), min(d for _, d in g1.degree())))
print("g2: n=%d m=%d girth=%s mindeg=%d" % (
    g2.number_of_nodes(), g2.number_of_edges(), nx.girth(g2), min(d for _, d in g2.degree())))
print("g1 iso g2:", nx.is_isomorphic(g1, g2))

sq1, sq2 = square(g1), square(g2)
print("squares equal:", set(map(tuple, map(sorted, sq1.edges()))) == set(map(tuple, map(sorted, sq2.edges()))))
print("square: m=%d" % sq1.number_of_edges())
print("square girth:", nx.girth(sq1))
print("square deg of 1:", sq1.degree(1), sorted(sq1.neighbors(1)))
print("N_sq(12) - N_g1(12):", sorted(set(sq1.neighbors(12)) - set(g1.neighbors(12))))
print("d_g1(1,5):", nx.shortest_path_length(g1, 1, 5))

# closed neighbourhoods quoted by the lemma
for g, name in [(g1, "g1"), (g2, "g2")]:
    print(name, "N[5] =", sorted(set(g.neighbors(5)) | {5}), "N[13] =", sorted(set(g.neighbors(13)) | {13}))

# attachment points: identical neighbourhoods
for a in range(1, 17):
    if sorted(g1.neighbors(a)) == sorted(g2.neighbors(a)):
        print("identical nbhd at", a, sorted(g1.neighbors(a)))

# maximal cliques of square containing 1
print("max cliques of square at 1 incl {1,7,11,12}:",
      any(set(c) == {1, 7, 11, 12} for c in nx.find_cliques(sq1)))

# ---- chain families -------------------------------------------------------
def chain(pattern, attach):
    """pattern: string of '1'/'2'; attach: tuple of locals in {1,12,14}."""
    g = nx.Graph()
    names = {}  # (block, local) -> node name
    for t, kind in enumerate(pattern):
        for a in range(1, 17):
            if t > 0 and a == attach[t - 1]:
                names[(t, a)] = names[(t - 1, a)]
            else:
                names[(t, a)] = f"b{t}:{a}"
        edges = G1_EDGES if kind == "1" else G2_EDGES
        for u, v in edges:
            g.add_edge(names[(t, u)], names[(t, v)])
    return g

def iso_classes(graphs):
    classes = []
    for g in graphs:
        for rep in classes:
            if nx.is_isomorphic(g, rep):
                break
        else:
            classes.append(g)
    return len(classes)

def family(k, attach):
    pats = ["".join(p) for p in itertools.product("12", repeat=k)]
    gs = [chain(p, attach) for p in pats]
    sqs = [square(g) for g in gs]
    e0 = set(map(tuple, map(sorted, sqs[0].edges())))
    same = all(set(map(tuple, map(sorted, s.edges()))) == e0 for s in sqs)
    return same, iso_classes(gs), gs[0].number_of_nodes()

print("k=2 attach (1,):", family(2, (1,)))
print("k=3 attach (1,1):", family(3, (1, 1)))
print("k=3 attach (1,12):", family(3, (1, 12)))
for attach in itertools.product([1, 12, 14], repeat=3):
    same, classes, n = family(4, attach)
    print("k=4 attach", attach, "same-square:", same, "classes:", classes, "n:", n)
