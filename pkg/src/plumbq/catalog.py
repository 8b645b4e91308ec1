"""Named example plumbing graphs used across the tests and scripts."""

from __future__ import annotations

from plumbq.plumbing import PlumbingGraph, kirby_neumann_move, lens_chain

__all__ = [
    "poincare_sphere",
    "brieskorn_2_3_7",
    "brieskorn_2_3_7_alt",
    "lens_m5_11",
    "NAMED_GRAPHS",
]


def poincare_sphere() -> PlumbingGraph:
    """The E8 tree, all framings -2."""
    return PlumbingGraph.build(
        [-2] * 8,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)],
    )


def brieskorn_2_3_7() -> PlumbingGraph:
    """Star presentation of the Brieskorn sphere with fibers 2, 3, 7:
    central -1 vertex with legs -2, -3, -7."""
    return PlumbingGraph.build([-1, -2, -3, -7], [(0, 1), (0, 2), (0, 3)])


def brieskorn_2_3_7_alt() -> PlumbingGraph:
    """Kirby-equivalent five-vertex presentation, obtained by blowing up
    the edge between the center and the -2 leg with a (-1) vertex."""
    return kirby_neumann_move(
        brieskorn_2_3_7(),
        {"kind": "blow_up", "sign": -1, "edge": [0, 1], "new_id": 4},
    )


def lens_m5_11() -> PlumbingGraph:
    """The |det B| = 5 chain (-2, -3), the negative-definite presentation
    whose five homological blocks carry exponents +-1/10.

    This is the orientation the L(-5, 11) block table refers to; the other
    det-5 chain (-2, -2, -2, -2) presents the oppositely-oriented space and
    has different blocks.
    """
    return lens_chain(5, 3)


NAMED_GRAPHS = {
    "poincare": poincare_sphere,
    "sigma237": brieskorn_2_3_7,
    "sigma237-alt": brieskorn_2_3_7_alt,
    "lens-m5-11": lens_m5_11,
}
