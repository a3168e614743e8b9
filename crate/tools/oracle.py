"""Independent oracle for the frozen values in crates/core/tests/data/oracle.json.

Shares no code with the Rust crate: the quotient lattice N/Zv is built by extended-gcd row
reduction of v, indices are integer Bareiss determinants, and the action data are enumerated
directly from the weight vectors.

    python3 tools/oracle.py > crates/core/tests/data/oracle.json
"""

import json
import sys
from collections import Counter
from functools import reduce
from itertools import combinations, product
from math import gcd


def unimodular_reducing(v):
    """U in GL(m, Z) with U v = (g, 0, ..., 0)^T, g = gcd(v) > 0."""
    m = len(v)
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    w = list(v)
    for j in range(1, m):
        # Combine rows 0 and j so that w[j] becomes 0.
        a, b = w[0], w[j]
        if b == 0:
            continue
        # Extended Euclid: s a + t b = g.
        old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
        while r != 0:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        g = old_r
        row0 = [old_s * x + old_t * y for x, y in zip(u[0], u[j])]
        rowj = [(-b // g) * x + (a // g) * y for x, y in zip(u[0], u[j])]
        u[0], u[j] = row0, rowj
        w[0], w[j] = g, 0
    if w[0] < 0:
        u[0] = [-x for x in u[0]]
    return u


def det(mat):
    m = [row[:] for row in mat]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return 0
        if p != k:
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def quotient_data(qn, z, qp):
    v = [-q for q in qn] + [0] * z + list(qp)
    m = len(v)
    u = unimodular_reducing(v)
    proj = u[1:]
    images = [[proj[r][j] for r in range(m - 1)] for j in range(m)]
    prim = []
    for im in images:
        c = reduce(gcd, im)
        prim.append([x // c for x in im])
    neg = range(len(qn))
    pos = range(len(qn) + z, m)
    index = {}
    image_det = {}
    for i in list(neg) + list(pos):
        cols = [j for j in range(m) if j != i]
        index[i] = abs(det([[prim[j][r] for j in cols] for r in range(m - 1)]))
        image_det[i] = abs(det([[images[j][r] for j in cols] for r in range(m - 1)]))
    return v, neg, pos, index, image_det


def grid():
    total = agree_fail = law_fail = det_fail = reduced = 0
    examples = []
    for d1 in range(2, 7):
        for z in range(0, 6):
            for p in range(1, 6):
                if d1 + z + p > 7:
                    continue
                for qn in product(range(1, 5), repeat=d1):
                    for qp in product(range(1, 5), repeat=p):
                        if reduce(gcd, qn + qp) != 1:
                            continue
                        total += 1
                        if list(qn) == sorted(qn) and list(qp) == sorted(qp):
                            reduced += 1
                        v, neg, pos, index, image_det = quotient_data(qn, z, qp)
                        atiyah = all(abs(x) <= 1 for x in v)
                        smooth = all(index[i] == 1 for i in index)
                        if atiyah != smooth:
                            agree_fail += 1
                        if any(index[i] != abs(v[i]) for i in index):
                            law_fail += 1
                            if len(examples) < 3:
                                examples.append({"q_neg": qn, "zeros": z, "q_pos": qp,
                                                 "indices": [index[i] for i in sorted(index)]})
                        if any(image_det[i] != abs(v[i]) for i in index):
                            det_fail += 1
    return {
        "setups": total,
        "block_sorted_setups": reduced,
        "flip_characterization_disagreements": agree_fail,
        "multiplicity_law_failures": law_fail,
        "image_determinant_failures": det_fail,
        "multiplicity_law_examples": examples,
    }


def pairing(n):
    partner = {}
    for i in range(n):
        partner[i], partner[n + 1 + i] = n + 1 + i, i
    return partner


def og(n):
    w = [1] * n + [0] + [-1] * n
    partner = pairing(n)
    square = n
    pts = [(i, j) for i, j in combinations(range(2 * n + 1), 2)
           if square not in (i, j) and partner[i] != j]
    levels = Counter(w[i] + w[j] for i, j in pts)
    sizes = set()
    inner = set()
    for i, j in pts:
        rest = [c for c in range(2 * n + 1) if c not in (i, j, partner[i], partner[j])]
        t = [w[c] - w[i] for c in rest] + [w[c] - w[j] for c in rest] + [-(w[i] + w[j])]
        sizes.add(len(t))
        if w[i] + w[j] == 0:
            inner.add(tuple(sorted(x for x in t if x != 0)))
    return {"n": n, "fixed_points": len(pts), "levels": {str(k): levels[k] for k in sorted(levels)},
            "tangent_sizes": sorted(sizes), "inner_nonzero_weights": [list(x) for x in sorted(inner)]}


def plucker(weights, p):
    return Counter(sum(c) for c in combinations(weights, p))


def blowup_grid():
    specs = 0
    for n in range(2, 7):
        for d in range(0, n - 1):
            m = n - d
            for q in product(range(1, 5), repeat=m):
                if list(q) != sorted(q) or reduce(gcd, q) != 1:
                    continue
                specs += 1
    return specs


def main():
    out = {
        "grid": grid(),
        "og": [og(n) for n in range(3, 7)],
        "plucker_1110m1m1m1_p2": {str(k): v for k, v in sorted(plucker([1, 1, 1, 0, -1, -1, -1], 2).items())},
        "blowup_coprime_sorted_specs_n_le_6": blowup_grid(),
    }
    json.dump(out, sys.stdout, indent=1, sort_keys=True)
    print()


if __name__ == "__main__":
    main()
