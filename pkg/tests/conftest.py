"""Shared fixtures: the fixed 12-graph suite used by acceptance checks.

The suite spans the shapes the deciders distinguish: one-loop graphs with
every balance behaviour, amalgams of two cyclic groups (level and not),
two-edge chains, theta graphs on cyclic vertices (level and skew), and two
amalgams with one rank-two free vertex each.  Keeping the rank-two count at
one vertex per graph keeps the brute-force oracle's candidate stream small
enough for exhaustive cross-checking.
"""

import pytest

from gogz.graphs import parse_graph

SUITE_TEXTS = {
    "bs_2_3": 'vertex 0 rank=1 gens=a\nedge 0 0 0 minus="a^2" plus="a^3"',
    "bs_3_3": 'vertex 0 rank=1 gens=a\nedge 0 0 0 minus="a^3" plus="a^3"',
    "bs_1_2": 'vertex 0 rank=1 gens=a\nedge 0 0 0 minus="a" plus="a^2"',
    "bs_2_m2": 'vertex 0 rank=1 gens=a\nedge 0 0 0 minus="a^2" plus="a^-2"',
    "trefoil": (
        "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\n"
        'edge 0 0 1 minus="a^2" plus="b^3"'
    ),
    "torus_2_2": (
        "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\n"
        'edge 0 0 1 minus="a^2" plus="b^2"'
    ),
    "chain_2332": (
        "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\nvertex 2 rank=1 gens=c\n"
        'edge 0 0 1 minus="a^2" plus="b^3"\nedge 1 1 2 minus="b^2" plus="c^3"'
    ),
    "chain_2233": (
        "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\nvertex 2 rank=1 gens=c\n"
        'edge 0 0 1 minus="a^2" plus="b^2"\nedge 1 1 2 minus="b^3" plus="c^3"'
    ),
    "theta_level": (
        "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\n"
        'edge 0 0 1 minus="a^2" plus="b^2"\nedge 1 0 1 minus="a^3" plus="b^3"'
    ),
    "theta_skew": (
        "vertex 0 rank=1 gens=a\nvertex 1 rank=1 gens=b\n"
        'edge 0 0 1 minus="a^2" plus="b^2"\nedge 1 0 1 minus="a^2" plus="b^3"'
    ),
    "comm_square": (
        "vertex 0 rank=2 gens=a,b\nvertex 1 rank=1 gens=x\n"
        'edge 0 0 1 minus="a b a^-1 b^-1" plus="x^2"'
    ),
    "ab_square": (
        "vertex 0 rank=2 gens=p,q\nvertex 1 rank=1 gens=z\n"
        'edge 0 0 1 minus="p q" plus="z^2"'
    ),
}


@pytest.fixture(scope="session")
def suite_graphs():
    return {name: parse_graph(text) for name, text in SUITE_TEXTS.items()}
