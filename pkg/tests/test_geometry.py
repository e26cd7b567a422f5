import random
from fractions import Fraction

import pytest

from rbsc.errors import DuplicatePoints, EqualPoints, SameLine
from rbsc.geometry import (
    LineEquation,
    PlanePoint,
    canonical_line,
    collinear,
    intersect,
    maximal_collinear_family,
)

P = PlanePoint.of


def test_collinear_examples():
    assert collinear(P(0, 0), P(1, 1), P(2, 2))
    assert not collinear(P(0, 0), P(1, 0), P(0, 1))
    assert collinear(P(0, 0), P(1, 1), P(1, 1))  # duplicate point degenerates


def test_canonical_line_examples():
    assert canonical_line(P(0, 0), P(2, 2)) == LineEquation(1, -1, 0)
    assert canonical_line(P(0, 1), P(5, 1)) == LineEquation(0, 1, -1)
    line = canonical_line(P(Fraction(1, 2), 0), P(Fraction(1, 2), 3))
    assert line == LineEquation(2, 0, -1)
    assert line.contains(P(Fraction(1, 2), 0)) and line.contains(P(Fraction(1, 2), 3))


def test_canonical_line_rejects_equal_points():
    with pytest.raises(EqualPoints):
        canonical_line(P(3, 4), P(3, 4))


def test_line_equation_enforces_canonical_form():
    with pytest.raises(ValueError):
        LineEquation(0, 0, 1)
    with pytest.raises(ValueError):
        LineEquation(2, 2, 0)
    with pytest.raises(ValueError):
        LineEquation(-1, 1, 0)


def test_maximal_family_square():
    fam = maximal_collinear_family([P(0, 0), P(0, 1), P(1, 0), P(1, 1)])
    assert len(fam) == 6
    assert all(len(m) == 2 for m in fam.values())


def test_maximal_family_with_triple():
    fam = maximal_collinear_family([P(0, 0), P(1, 1), P(2, 2), P(0, 1)])
    sizes = sorted(len(m) for m in fam.values())
    assert len(fam) == 4 and sizes == [2, 2, 2, 3]
    triple = next(m for m in fam.values() if len(m) == 3)
    assert triple == frozenset({0, 1, 2})


def test_maximal_family_parabola():
    pts = [P(t, t * t) for t in range(1, 6)]
    fam = maximal_collinear_family(pts)
    assert len(fam) == 10
    assert all(len(m) == 2 for m in fam.values())
    # independent confirmation that no parabola triple is collinear
    for i in range(5):
        for j in range(i + 1, 5):
            for k in range(j + 1, 5):
                assert not collinear(pts[i], pts[j], pts[k])


def test_maximal_family_rejects_duplicates():
    with pytest.raises(DuplicatePoints):
        maximal_collinear_family([P(0, 0), P(1, 1), P(0, 0)])


def test_intersect_examples():
    assert intersect(LineEquation(1, -1, 0), LineEquation(0, 1, -1)) == P(1, 1)
    assert intersect(LineEquation(0, 1, 0), LineEquation(0, 1, -1)) is None
    assert intersect(LineEquation(1, -2, 0), LineEquation(3, 1, -7)) == P(2, 1)
    with pytest.raises(SameLine):
        intersect(LineEquation(1, -1, 0), LineEquation(1, -1, 0))


def _random_point(rng):
    return PlanePoint(
        Fraction(rng.randint(-8, 8), rng.randint(1, 4)),
        Fraction(rng.randint(-8, 8), rng.randint(1, 4)),
    )


def test_randomized_properties():
    rng = random.Random(20240)
    for _ in range(3000):
        p, q, r = (_random_point(rng) for _ in range(3))
        if p == q:
            continue
        line = canonical_line(p, q)
        assert line == canonical_line(q, p)
        assert line.contains(p) and line.contains(q)
        assert collinear(p, q, r) == line.contains(r)
    for _ in range(300):
        pts = []
        while len(pts) < rng.randint(2, 7):
            cand = _random_point(rng)
            if cand not in pts:
                pts.append(cand)
        fam = maximal_collinear_family(pts)
        n = len(pts)
        assert len(fam) <= n * (n - 1) // 2
        for line, members in fam.items():
            assert len(members) >= 2
            for i, pt in enumerate(pts):
                assert line.contains(pt) == (i in members)


def test_intersection_satisfies_both_equations():
    rng = random.Random(7)
    for _ in range(2000):
        pts = [_random_point(rng) for _ in range(4)]
        if pts[0] == pts[1] or pts[2] == pts[3]:
            continue
        l1 = canonical_line(pts[0], pts[1])
        l2 = canonical_line(pts[2], pts[3])
        if l1 == l2:
            continue
        cross = intersect(l1, l2)
        if cross is not None:
            assert l1.contains(cross) and l2.contains(cross)
        else:
            assert l1.a * l2.b == l2.a * l1.b  # parallel
