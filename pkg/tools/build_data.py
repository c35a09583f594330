"""Generate and validate the bundled lattice data files.

Run from the repository root:

    python3 tools/build_data.py [--skip-slow]

Produces JSON files under src/orbifoldlab/data/.  Every lattice and
automorphism is validated before being written; the script fails loudly
on any mismatch.  --skip-slow omits the rank-24 rootlessness enumeration
(about a minute), which does not affect the written files.
"""

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from orbifoldlab.data import save_lattice  # noqa: E402
from orbifoldlab.fqs import are_isomorphic  # noqa: E402
from orbifoldlab.lattice import IntegerLattice, format_cycle_shape  # noqa: E402
from orbifoldlab.niemeier import (  # noqa: E402
    automorphism_from_ambient,
    block_d,
    case1_ambient,
    case2_ambient,
    case3_ambient,
    case4_ambient,
    case5_ambient,
    glue_lattice,
    niemeier_a2_12,
    niemeier_a4_6,
    niemeier_a9_2_d6,
    niemeier_e6_4,
)
from orbifoldlab.nt import hnf_row, mat_inv, mat_mul, transpose  # noqa: E402

OUT = ROOT / "src" / "orbifoldlab" / "data"
INF = 23


# ---------------------------------------------------------------------------
# binary Golay code and the Leech lattice

GOLAY_POLY = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]


def golay_generators():
    gens = []
    for s in range(12):
        w = [0] * 23
        for i, c in enumerate(GOLAY_POLY):
            w[(i + s) % 23] ^= c
        w.append(sum(w) % 2)
        gens.append(tuple(w))
    return gens


def golay_code():
    code = {tuple([0] * 24)}
    for w in golay_generators():
        code |= {tuple(a ^ b for a, b in zip(c, w)) for c in code}
    assert len(code) == 4096
    assert min(sum(w) for w in code if any(w)) == 8
    return code


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def greedy_reduce_rows(basis):
    """Shorten ambient row vectors by integer combinations until stable."""
    basis = [list(r) for r in basis]
    changed = True
    while changed:
        changed = False
        basis.sort(key=lambda r: dot(r, r))
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                k = round(Fraction(dot(basis[i], basis[j]),
                                   dot(basis[j], basis[j])))
                if k:
                    cand = [a - k * b for a, b in zip(basis[i], basis[j])]
                    if dot(cand, cand) < dot(basis[i], basis[i]):
                        basis[i] = cand
                        changed = True
    return basis


def greedy_reduce_gram(gram):
    """Unimodular change of basis shortening the Gram diagonal."""
    n = len(gram)
    g = [list(r) for r in gram]
    t = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def apply(i, j, k):
        # b_i <- b_i - k b_j
        for c in range(n):
            t[i][c] -= k * t[j][c]
        for c in range(n):
            g[i][c] -= k * g[j][c]
        for r in range(n):
            g[r][i] -= k * g[r][j]

    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j or g[j][j] == 0:
                    continue
                k = round(Fraction(g[i][j], g[j][j]))
                if k and g[i][i] - 2 * k * g[i][j] + k * k * g[j][j] < g[i][i]:
                    apply(i, j, k)
                    changed = True
    order = sorted(range(n), key=lambda i: g[i][i])
    g = [[g[i][j] for j in order] for i in order]
    return g


def leech_basis():
    """Reduced basis (rows, 1/sqrt(8) units) spanning the Leech lattice."""
    gens = [[-3] + [1] * 23]
    for w in golay_generators():
        gens.append([2 * c for c in w])
    for i in range(23):
        row = [0] * 24
        row[i] = 4
        row[i + 1] = 4
        gens.append(row)
    h, _ = hnf_row(gens)
    basis = [row for row in h if any(row)]
    assert len(basis) == 24
    return greedy_reduce_rows(basis)


def leech_membership(v, code):
    """Congruence test: same parity, halved word in the code, sum 0 mod 4."""
    h = [-3] + [1] * 23
    if v[0] % 2 != 0:
        v = [a - b for a, b in zip(v, h)]
    if any(x % 2 for x in v):
        return False
    y = [x // 2 for x in v]
    if tuple(x % 2 for x in y) not in code:
        return False
    return sum(y) % 4 == 0


# ---------------------------------------------------------------------------
# M24 on {0..22, infinity}: words found for each of the ten cycle types.
# alpha t+1, beta 2t, gamma -1/t, delta t^3/9 (residues) / 9 t^3.

M23_WORDS = {
    1: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18,
        19, 20, 21, 22, 23],
    2: [0, 1, 2, 4, 3, 16, 6, 7, 9, 8, 12, 20, 10, 17, 22, 18, 5, 13, 15,
        19, 11, 21, 14, 23],
    3: [19, 0, 6, 3, 4, 15, 7, 2, 12, 10, 17, 11, 13, 8, 5, 14, 18, 9, 22,
        1, 20, 21, 16, 23],
    5: [0, 12, 4, 2, 9, 14, 16, 11, 3, 8, 20, 5, 13, 6, 19, 10, 1, 15, 18,
        7, 22, 21, 17, 23],
    6: [1, 19, 7, 4, 3, 22, 2, 6, 17, 13, 8, 20, 9, 10, 18, 16, 14, 12, 5,
        0, 11, 21, 15, 23],
    7: [17, 22, 15, 19, 8, 14, 12, 7, 20, 9, 1, 10, 21, 2, 3, 5, 6, 11, 18,
        13, 16, 4, 23, 0],
    11: [2, 5, 20, 10, 18, 17, 4, 12, 6, 8, 0, 7, 14, 11, 16, 19, 3, 22,
         15, 1, 13, 21, 9, 23],
    14: [19, 11, 9, 8, 2, 4, 22, 21, 18, 15, 20, 6, 1, 17, 12, 13, 0, 5,
         10, 3, 14, 7, 16, 23],
    15: [9, 12, 11, 16, 10, 14, 22, 13, 7, 23, 21, 1, 19, 18, 4, 2, 8, 17,
         0, 3, 6, 5, 20, 15],
    23: [0, 23, 21, 10, 14, 16, 8, 18, 12, 19, 4, 15, 1, 20, 6, 17, 2, 9,
         3, 13, 5, 7, 11, 22],
}


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def sigma(n, k=1):
    return sum(d ** k for d in divisors(n))


def expected_shape(m):
    e = 24 // sigma(m)
    return {t: e for t in divisors(m)}


def permutation_preserves_code(p, code):
    for w in golay_generators():
        img = [0] * 24
        for i, c in enumerate(w):
            img[p[i]] = c
        if tuple(img) not in code:
            return False
    return True


def cycle_type(p):
    seen = [False] * 24
    sizes = []
    for i in range(24):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            sizes.append(n)
    return tuple(sorted(sizes))


def automorphism_on_basis(basis, p):
    """Automorphism matrix (column convention) of a coordinate permutation."""
    bt = transpose(basis)
    bt_inv = mat_inv([[Fraction(x) for x in row] for row in bt])
    pm = [[0] * 24 for _ in range(24)]
    for i in range(24):
        pm[p[i]][i] = 1
    u = mat_mul(bt_inv, mat_mul(pm, bt))
    out = []
    for row in u:
        ints = []
        for x in row:
            assert Fraction(x).denominator == 1, "permutation leaves the lattice"
            ints.append(int(x))
        out.append(ints)
    return out


def build_leech_cases(skip_slow):
    code = golay_code()
    basis = leech_basis()
    for row in basis:
        assert leech_membership(row, code), "basis row fails the congruences"
    gram = [[dot(u, v) // 8 for v in basis] for u in basis]
    leech = IntegerLattice(gram, name="Leech")
    assert leech.det() == 1 and leech.is_even()
    if not skip_slow:
        t0 = time.time()
        assert leech.minimum() == 4, "Leech must be rootless"
        print(f"  rootlessness check: {time.time() - t0:.1f}s")

    automorphisms = {}
    fixed_lattices = {}
    for m, p in sorted(M23_WORDS.items()):
        t0 = time.time()
        assert sorted(p) == list(range(24))
        assert permutation_preserves_code(p, code), f"word {m} leaves the code"
        want = []
        for t, e in expected_shape(m).items():
            want.extend([t] * e)
        assert cycle_type(p) == tuple(sorted(want)), f"word {m} cycle type"
        u = automorphism_on_basis(basis, p)
        assert leech.is_automorphism(u)
        assert leech.cycle_shape(u) == expected_shape(m), f"case {m} shape"
        automorphisms[f"m{m}"] = u
        if m == 1:
            fixed_lattices[1] = leech
            print(f"  word m=1 checked: {time.time() - t0:.1f}s")
            continue
        fixed = leech.fixed_and_coinvariant(u).fixed
        reduced = greedy_reduce_gram([list(r) for r in fixed.gram])
        fixed_lattices[m] = IntegerLattice(reduced, name=f"Leech fixed m={m}")
        print(f"  word m={m} checked, fixed part extracted: "
              f"{time.time() - t0:.1f}s")
    return leech, automorphisms, fixed_lattices


def validate_fixed_lattice(m, lat, skip_slow):
    rank = lat.rank
    assert rank == sum(expected_shape(m).values()), f"m={m} rank {rank}"
    assert lat.is_even(), f"m={m} parity"
    want_det = m ** (rank // 2)
    assert lat.det() == want_det, f"m={m} det {lat.det()} != {want_det}"
    if m == 1:
        return
    # dual isomorphic to the lattice rescaled by 1/m: compare m G^{-1} to G
    ginv = mat_inv([[Fraction(x) for x in row] for row in lat.gram])
    scaled = []
    for row in ginv:
        out = []
        for x in row:
            v = m * x
            assert v.denominator == 1, f"m={m}: m G^-1 not integral"
            out.append(int(v))
        scaled.append(out)
    dual = IntegerLattice(greedy_reduce_gram(scaled))
    assert dual.is_even() and dual.det() == want_det
    assert are_isomorphic(lat.discriminant_group(), dual.discriminant_group())
    prec = 3 if rank >= 12 else 5
    theta = lat.theta_series(prec)
    assert theta.agrees_with(dual.theta_series(prec)), f"m={m} theta mismatch"
    assert theta.coefficient(1) == 0, f"m={m} has roots"


# ---------------------------------------------------------------------------


def build_small_lattices():
    out = {}
    out["a1"] = IntegerLattice([[2]], name="A1")
    out["a2"] = IntegerLattice([[2, -1], [-1, 2]], name="A2")
    out["a4"] = IntegerLattice(
        [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]],
        name="A4")
    out["d8"] = IntegerLattice(
        [list(r) for r in block_d(8).block_gram()], name="D8")
    e8 = glue_lattice([block_d(8)], [(1,)], "E8")
    assert e8.lattice.det() == 1
    out["e8"] = e8.lattice
    out["ii1_1"] = IntegerLattice([[0, 1], [1, 0]], name="II_1,1")
    out["a4dual5"] = IntegerLattice(
        [[4, 3, 2, 1], [3, 6, 4, 2], [2, 4, 6, 3], [1, 2, 3, 4]],
        name="A4'(5)")
    return out


def build_niemeier_files():
    files = {}
    g2 = niemeier_a4_6()
    u2 = automorphism_from_ambient(g2, case2_ambient())
    u5 = automorphism_from_ambient(g2, case5_ambient())
    assert g2.lattice.cycle_shape(u2) == {1: -1, 5: 5}
    assert g2.lattice.cycle_shape(u5) == {1: 1, 2: -1, 5: -5, 10: 5}
    files["nA4_6"] = (g2.lattice, {"case2": u2, "case5": u5})

    g1 = niemeier_a9_2_d6()
    u1 = automorphism_from_ambient(g1, case1_ambient())
    assert g1.lattice.cycle_shape(u1) == {1: 2, 2: -9, 4: 10}
    files["nA9_2D6"] = (g1.lattice, {"case1": u1})

    g3 = niemeier_a2_12()
    u3 = automorphism_from_ambient(g3, case3_ambient())
    assert g3.lattice.cycle_shape(u3) == {1: 1, 2: -2, 3: -3, 6: 6}
    files["nA2_12"] = (g3.lattice, {"case3": u3})

    g4 = niemeier_e6_4()
    u4 = automorphism_from_ambient(g4, case4_ambient())
    assert g4.lattice.cycle_shape(u4) == {1: 3, 2: -3, 3: -9, 6: 9}
    files["nE6_4"] = (g4.lattice, {"case4": u4})
    return files


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--skip-slow", action="store_true",
                    help="skip the rank-24 rootlessness enumeration")
    args = ap.parse_args()
    OUT.mkdir(parents=True, exist_ok=True)

    print("small lattices")
    for key, lat in build_small_lattices().items():
        save_lattice(OUT / f"{key}.json", lat.name or key, lat)
        print(f"  {key}: rank {lat.rank}, det {lat.det()}")

    print("glued rank-24 lattices")
    for key, (lat, auts) in build_niemeier_files().items():
        save_lattice(OUT / f"{key}.json", lat.name or key, lat, auts)
        shapes = {a: format_cycle_shape(lat.cycle_shape(u))
                  for a, u in auts.items()}
        print(f"  {key}: det {lat.det()}, {shapes}")

    print("Leech lattice and fixed sublattices")
    leech, auts, fixed = build_leech_cases(args.skip_slow)
    save_lattice(OUT / "leech.json", "Leech", leech, auts)
    for m, lat in sorted(fixed.items()):
        t0 = time.time()
        validate_fixed_lattice(m, lat, args.skip_slow)
        if m > 1:
            save_lattice(OUT / f"leech_fix_{m}.json", lat.name, lat)
        shape = " ".join(f"{t}^{e}" for t, e in sorted(expected_shape(m).items()))
        print(f"  m={m}: rank {lat.rank}, det {lat.det()}, shape {shape} "
              f"({time.time() - t0:.1f}s)")
    print("done")


if __name__ == "__main__":
    main()
