"""Fans used across the test modules."""

from semitoric.fan import (
    Fan,
    corner_cut_fans,
    hirzebruch,
    product_p1,
    projective_space,
)

NONPROJECTIVE_3 = Fan(
    3,
    [[1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 1, 1], [1, 2, 1], [1, 1, 2], [-1, -1, -1], [1, 1, 1]],
    [[4, 5, 7], [3, 5, 7], [3, 4, 7], [0, 1, 3], [1, 3, 4], [0, 1, 6],
     [1, 2, 4], [2, 4, 5], [1, 2, 6], [0, 2, 5], [0, 3, 5], [0, 2, 6]],
)

# each has exactly one maximal cone that is not unimodular
SINGULAR = {
    "cone_1_1_1_m1": Fan(2, [(1, 1), (1, -1), (-1, 0)], [(0, 1), (1, 2), (0, 2)]),
    "weighted_112": Fan(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)]),
    "affine_a1": Fan(2, [(1, 0), (1, 2)], [(0, 1)]),
    "weighted_1112": Fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -2)],
                         [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]),
    "pentagon": Fan(2, [(1, 0), (0, 1), (-1, 0), (-1, -2), (0, -1)],
                    [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
}


def toric_suite():
    out = {}
    for n in range(1, 5):
        out[f"P{n}"] = projective_space(n)
        out[f"P1^{n}"] = product_p1(n)
    for a in range(4):
        out[f"F{a}"] = hirzebruch(a)
    return out


def corner_cut():
    return {f"cut{k}": f for k, f in enumerate(corner_cut_fans(20))}


def smooth_complete_corpus():
    out = dict(toric_suite())
    out.update(corner_cut())
    out["nonprojective3"] = NONPROJECTIVE_3
    return out
