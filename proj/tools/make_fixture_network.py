#!/usr/bin/env python3
"""Regenerates data/fixture_network.json, the synthetic test map.

A 6 x 4 street grid (1.2 m blocks east-west, 1.0 m north-south) with rounded
corners and a dozen bent streets whose second half is an arc. Rows 1 and 2
and columns 2 and 3 are one-way. The depot sits on the west edge, row 1.
"""
import json
import math
import sys
from pathlib import Path

COLS, ROWS = 6, 4
DX, DY = 1.2, 1.0
V_STRAIGHT, V_ARC = 0.5, 0.25
CORNER_R = 0.4

nodes = {}   # (tag) -> [id, x, y]
edges = []   # (from_id, to_id, length, geometry)


def node(tag, x, y):
    if tag not in nodes:
        nodes[tag] = [len(nodes), round(x, 6), round(y, 6)]
    return nodes[tag][0]


def add(a, b, length, geometry, two_way):
    edges.append((a, b, round(length, 6), geometry))
    if two_way:
        edges.append((b, a, round(length, 6), geometry))


corners = {(0, 0), (COLS - 1, 0), (0, ROWS - 1), (COLS - 1, ROWS - 1)}
for c in range(COLS):
    for r in range(ROWS):
        if (c, r) not in corners:
            node(("x", c, r), c * DX, r * DY)


def corner_stub(c, r, toward):
    """Transition node on the street leaving corner (c, r) toward a neighbour."""
    tc, tr = toward
    x = c * DX + (tc - c) * CORNER_R
    y = r * DY + (tr - r) * CORNER_R
    return node(("k", c, r, tc, tr), x, y)


def endpoint(c, r, toward):
    if (c, r) in corners:
        return corner_stub(c, r, toward)
    return nodes[("x", c, r)][0]


# Bent streets: (c, r) -> (c2, r2) pairs that get a mid node and an arc half.
bent = {
    ((1, 0), (1, 1)), ((4, 0), (4, 1)), ((1, 2), (1, 3)), ((4, 2), (4, 3)),
    ((2, 0), (2, 1)), ((3, 2), (3, 3)), ((0, 1), (0, 2)), ((5, 1), (5, 2)),
    ((1, 0), (2, 0)), ((3, 3), (4, 3)), ((2, 3), (3, 3)), ((3, 0), (4, 0)),
}


def street(a, b, two_way, forward=True):
    (c, r), (c2, r2) = a, b
    u = endpoint(c, r, (c2, r2))
    v = endpoint(c2, r2, (c, r))
    pu = nodes_by_id[u]
    pv = nodes_by_id[v]
    length = math.dist(pu, pv)
    if not forward:
        u, v = v, u
    if (a, b) in bent:
        mx, my = (pu[0] + pv[0]) / 2, (pu[1] + pv[1]) / 2
        m = node(("m",) + a + b, mx, my)
        nodes_by_id[m] = (mx, my)
        add(u, m, length / 2, "straight", two_way)
        add(m, v, length / 2 * 1.1, "arc", two_way)
    else:
        add(u, v, length, "straight", two_way)


nodes_by_id = {}


def refresh():
    for v in nodes.values():
        nodes_by_id[v[0]] = (v[1], v[2])


# Corner stubs exist before streets are laid.
for (c, r) in corners:
    for (tc, tr) in [(c + (1 if c == 0 else -1), r), (c, r + (1 if r == 0 else -1))]:
        corner_stub(c, r, (tc, tr))
refresh()

for (c, r) in sorted(corners):
    h = (c + (1 if c == 0 else -1), r)
    v = (c, r + (1 if r == 0 else -1))
    add(corner_stub(c, r, h), corner_stub(c, r, v), math.pi / 2 * CORNER_R, "arc", True)

for r in range(ROWS):
    for c in range(COLS - 1):
        if r == 1:
            street((c, r), (c + 1, r), two_way=False)                 # eastbound
        elif r == 2:
            street((c, r), (c + 1, r), two_way=False, forward=False)  # westbound
        else:
            street((c, r), (c + 1, r), two_way=True)
for c in range(COLS):
    for r in range(ROWS - 1):
        if c == 2:
            street((c, r), (c, r + 1), two_way=False)                 # northbound
        elif c == 3:
            street((c, r), (c, r + 1), two_way=False, forward=False)  # southbound
        else:
            street((c, r), (c, r + 1), two_way=True)
refresh()

depot = nodes[("x", 0, 1)][0]
doc = {
    "nodes": [
        dict({"id": i, "x": x, "y": y}, **({"depot": True} if i == depot else {}))
        for (i, x, y) in sorted(nodes.values())
    ],
    "edges": [
        {"from": a, "to": b, "length": L, "speed_limit": V_ARC if g == "arc" else V_STRAIGHT,
         "geometry": g}
        for (a, b, L, g) in sorted(edges)
    ],
}

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "data" / "fixture_network.json"
out.write_text(json.dumps(doc, indent=2) + "\n")
print(f"{len(doc['nodes'])} nodes, {len(doc['edges'])} edges, depot {depot} -> {out}")
