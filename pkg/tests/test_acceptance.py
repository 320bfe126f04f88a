"""Acceptance criteria 1-11, each at its stated tolerance.

Run with pytest (one summary line per criterion at the end) or directly:
python tests/test_acceptance.py
"""

import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import criterion, summary_lines  # noqa: E402
from oracles import catalan_number  # noqa: E402
from orthogeo.decompose import o_n_lower, o_n_upper, oracle_minmax, short_decomposition  # noqa: E402
from orthogeo.kernel import DiskPoint  # noqa: E402
from orthogeo.moduli import marked_lengths, reconstruct, sample, spectrum  # noqa: E402
from orthogeo.polygon import (  # noqa: E402
    IdealPolygon,
    Triangulation,
    all_orthogeodesics,
    basmajian_sum,
    inradius_formula,
    max_inradius,
    orthogeodesic,
    random_interior_point,
    random_triangulation,
    regular,
    triangulation_chord_sets,
)
from orthogeo.render import render_svg  # noqa: E402

SNAKE6 = Triangulation(6, ((0, 2), (2, 4), (0, 4)))


def random_pairs(count, nmin, nmax, seed):
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = int(rng.integers(nmin, nmax + 1))
        P = sample(n, seed * 100000 + k).polygon
        yield P, random_interior_point(P, rng)


def test_criterion_01_basmajian_identity():
    with criterion(1, "sum of arcsin(1/cosh x_k) equals pi") as r:
        worst = max(abs(basmajian_sum(P, p) - math.pi) for P, p in random_pairs(1000, 3, 30, 1))
        r["detail"] = f"1000 pairs, max |sum - pi| = {worst:.2e} (tol 1e-10)"
        assert worst < 1e-10


def test_criterion_02_inradius_bound():
    with criterion(2, "inradius bound arccosh(1/sin(pi/n))") as r:
        excess = max(max_inradius(P, p) - inradius_formula(P.n) for P, p in random_pairs(1000, 3, 30, 2))
        r["detail"] = f"1000 pairs, max excess = {excess:.3f} (tol 1e-9)"
        assert excess <= 1e-9
    with criterion(2, "inradius bound arccosh(1/sin(pi/n))") as r:
        gaps = [abs(max_inradius(regular(n), DiskPoint(0.0, 0.0)) - inradius_formula(n)) for n in range(3, 13)]
        r["detail"] = f"regular n=3..12 centre equality, max gap {max(gaps):.1e}"
        assert max(gaps) < 1e-9


def test_criterion_03_short_decomposition():
    with criterion(3, "short decomposition, n-3 disjoint members of length <= 2 r_n") as r:
        rng = np.random.default_rng(3)
        start = time.perf_counter()
        worst = -math.inf
        bad = 0
        for k in range(1000):
            n = int(rng.integers(4, 31))
            P = sample(n, 300000 + k).polygon
            D = short_decomposition(P)
            if len(D.members) != n - 3 or not D.geometrically_disjoint():
                bad += 1
            worst = max(worst, D.max_length - o_n_upper(n))
        elapsed = time.perf_counter() - start
        r["detail"] = f"1000 polygons, {bad} structural failures, max(len - 2r_n) = {worst:.3f}, {elapsed:.1f}s"
        assert bad == 0
        assert worst <= 1e-9
        assert elapsed < 60.0


def test_criterion_04_oracle_sandwich():
    with criterion(4, "oracle sandwich on regular n-gons and the hexagon value") as r:
        rows = []
        for n in range(4, 13):
            mm = oracle_minmax(regular(n)).minmax
            rows.append(o_n_lower(n) - 1e-9 <= mm <= o_n_upper(n) + 1e-9)
        r["detail"] = f"sandwich holds for {sum(rows)}/9 of n=4..12"
        assert all(rows)


def test_criterion_04_regular_hexagon_value():
    with criterion(4, "oracle sandwich on regular n-gons and the hexagon value") as r:
        res = oracle_minmax(regular(6))
        target = 2 * math.asinh(1.5)
        r["detail"] = (
            f"hexagon minmax = {res.minmax:.10f} over {res.triangulations_searched} triangulations, "
            f"stated {target:.10f}, snake optimal: {res.triangulation == SNAKE6}"
        )
        assert res.triangulations_searched == catalan_number(4)
        assert res.triangulation == SNAKE6
        assert abs(res.minmax - target) < 1e-9


def test_criterion_05_quadrilaterals():
    with criterion(5, "ideal quadrilaterals: sinh(x/2) sinh(y/2) = 1") as r:
        bound = 2 * math.asinh(1.0)
        worst, worst_min, worst_ratio = 0.0, -math.inf, 0.0
        for k in range(100):
            P = sample(4, 500000 + k).polygon
            x, y = orthogeodesic(P, 0, 2).length, orthogeodesic(P, 1, 3).length
            worst = max(worst, abs(math.sinh(x / 2) * math.sinh(y / 2) - 1))
            worst_min = max(worst_min, min(x, y) - bound)
            # the shortfall below the bound is controlled by how far x is from y
            if abs(x - y) > 1e-6:
                worst_ratio = max(worst_ratio, (bound - min(x, y)) / abs(x - y))
        # along a family with x -> y the minimum tends to the bound
        gaps = []
        for t in (0.5, 0.1, 0.01, 1e-4, 0.0):
            Q = IdealPolygon((0.0, math.pi / 2 + t, math.pi, 3 * math.pi / 2))
            x, y = orthogeodesic(Q, 0, 2).length, orthogeodesic(Q, 1, 3).length
            gaps.append(bound - min(x, y))
        r["detail"] = (
            f"100 random, max residual {worst:.1e}, max(min - 2asinh1) = {worst_min:.3f}, "
            f"symmetric limit gaps {gaps[-2]:.1e}, {gaps[-1]:.1e}"
        )
        assert worst < 1e-10
        assert worst_min <= 1e-10
        assert 0.0 < worst_ratio <= 0.5 + 1e-9
        assert all(a > b for a, b in zip(gaps, gaps[1:])) and abs(gaps[-1]) < 1e-10


def test_criterion_06_regular_length_formula():
    with criterion(6, "regular n-gon lengths against 2 arcsinh(sin(n1 pi/n) sinh r_n)") as r:
        worst, where, total = 0.0, None, 0
        for n in range(4, 51):
            sinh_r = math.sinh(inradius_formula(n))
            for o in all_orthogeodesics(regular(n)):
                n1 = o.split[0]
                formula = 2 * math.asinh(math.sin(n1 * math.pi / n) * sinh_r)
                total += 1
                if abs(o.length - formula) > worst:
                    worst, where = abs(o.length - formula), (n, n1)
        r["detail"] = f"{total} lengths, max deviation {worst:.3e} at (n, n1) = {where} (tol 1e-10)"
        assert worst < 1e-10


def test_criterion_07_chord_splitting_a_third():
    with criterion(7, "every triangulation has a chord splitting at least n/3") as r:
        counted = 0
        worst = math.inf
        for n in range(4, 13):
            for chords in triangulation_chord_sets(n):
                counted += 1
                w = max(min(b - a, n - (b - a)) for a, b in chords)
                worst = min(worst, w / n)
        expected = sum(catalan_number(n - 2) for n in range(4, 13))
        r["detail"] = f"{counted} triangulations for n=4..12, min width/n = {worst:.4f}"
        assert counted == expected
        assert worst >= 1 / 3


def test_criterion_08_lower_constants_against_upper():
    with criterion(8, "lower bound with constant 3/2 exceeds the upper bound at n=6; sqrt(3)/2 does not") as r:
        cot = 1 / math.tan(math.pi / 6)
        halves = 2 * math.asinh(1.5 * cot)
        derived = 2 * math.asinh(math.sqrt(3) / 2 * cot)
        upper = o_n_upper(6)
        r["detail"] = f"3/2: {halves:.4f} vs upper {upper:.4f}; sqrt(3)/2: {derived:.4f}"
        assert halves > upper
        assert derived <= upper
        assert abs(upper - 2.6339) < 5e-5


def test_criterion_09_asymptotics():
    with criterion(9, "bounds against 2 log n") as r:
        n = 10**4
        gap = abs(o_n_upper(n) - 2 * math.log(2 * n / math.pi))
        ns = [10, 100, 1000, 10000]
        up = [o_n_upper(k) / (2 * math.log(k)) for k in ns]
        lo = [o_n_lower(k) / (2 * math.log(k)) for k in ns]
        r["detail"] = f"gap at 1e4 = {gap:.1e}; upper ratios {[round(x, 4) for x in up]}; lower {[round(x, 4) for x in lo]}"
        assert gap < 1e-4
        assert all(a < b for a, b in zip(up, up[1:]))
        assert all(a < b for a, b in zip(lo, lo[1:]))


def test_criterion_10_reconstruction():
    with criterion(10, "reconstruction from marked lengths") as r:
        rng = np.random.default_rng(10)
        worst_res, worst_spec = 0.0, 0.0
        for k in range(100):
            n = 4 + k % 6
            P = sample(n, 1000000 + k).polygon
            T = random_triangulation(n, rng)
            M = marked_lengths(P, T)
            Q = reconstruct(M)
            res = max(abs(a - b) for a, b in zip(marked_lengths(Q, T).lengths, M.lengths))
            worst_res = max(worst_res, res)
            worst_spec = max(worst_spec, max(abs(a - b) for a, b in zip(spectrum(P), spectrum(Q))))
        r["detail"] = f"100 pairs, max residual {worst_res:.1e}, max spectrum error {worst_spec:.1e}"
        assert worst_res < 1e-10
        assert worst_spec < 1e-8


def test_criterion_11_rendering():
    from test_render import elements, max_arc_error

    with criterion(11, "SVG rendering of the regular hexagon") as r:
        P = regular(6)
        svg = render_svg(P)
        counts = {c: len(elements(svg, c)) for c in ("side", "ortho", "inscribed", "cut")}
        err = max_arc_error(P, svg)
        r["detail"] = f"counts {counts}, max arc error {err:.1e}"
        assert counts["side"] == 6 and counts["ortho"] == 3 and counts["inscribed"] == 1
        assert counts["cut"] > 0
        assert err < 1e-3


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    print("\n".join(summary_lines()))
    sys.exit(1 if failed else 0)
