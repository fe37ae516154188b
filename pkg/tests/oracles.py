"""Slow brute-force reference implementations shared by test modules."""

from __future__ import annotations

from collections import deque
from math import gcd


def det(a, b):
    return a[0] * b[1] - a[1] * b[0]


def bisection_roots(coeffs, bound, cells=4096, refine=90):
    """Float roots of an ascending-coefficient polynomial by sign-change
    bisection on a uniform grid over [-bound, bound].

    Sound only when every real root is simple and the roots are separated
    by more than one cell width; the caller must arrange that.
    """

    def ev(x):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    roots = []
    prev_x = -float(bound)
    prev_v = ev(prev_x)
    for i in range(1, cells + 1):
        x = -bound + 2.0 * bound * i / cells
        v = ev(x)
        if prev_v == 0.0:
            roots.append(prev_x)
        elif v != 0.0 and (prev_v < 0.0) != (v < 0.0):
            lo, hi, flo = prev_x, x, prev_v
            for _ in range(refine):
                mid = 0.5 * (lo + hi)
                fm = ev(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (flo < 0.0) != (fm < 0.0):
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
        prev_x, prev_v = x, v
    if ev(float(bound)) == 0.0:
        roots.append(float(bound))
    return roots


def shortest_unimodular_chain_length(a, b, bound=12):
    """Fewest insertions between a and b so all consecutive dets are 1.

    Breadth-first search over primitive vectors with entries in
    [-bound, bound] lying in the closed cone spanned by a and b.  Only
    meaningful for positively oriented pairs (det >= 1).  Returns None if
    no chain exists within the bound.
    """
    d = det(a, b)
    if d < 1:
        raise ValueError("chain search requires a positively oriented pair")
    if d == 1:
        return 0
    cone = [
        (x, y)
        for x in range(-bound, bound + 1)
        for y in range(-bound, bound + 1)
        if (x, y) != (0, 0)
        and gcd(abs(x), abs(y)) == 1
        and det(a, (x, y)) >= 0
        and det((x, y), b) >= 0
    ]
    dist = {a: 0}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        if cur == b:
            return dist[cur] - 1
        for nxt in cone:
            if nxt not in dist and det(cur, nxt) == 1:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    return None
