"""Instance factories.

The hardness constructions double as generators: each one turns a source
problem (set cover, multicolored clique) into a covering instance whose
YES/NO answer provably matches the source, so the equivalences become
executable cross-checks instead of proofs.  Geometric outputs are audited
with exact arithmetic rather than trusted.  gen_random drives the
property-test corpora and is deterministic in its seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, gcd

from .errors import (
    FilterUnsatisfiable,
    GeometryAuditError,
    NotRegular,
    ParseError,
    PlacementExhausted,
)
from .geometry import LineEquation, PlanePoint, canonical_line, intersect, maximal_collinear_family
from .model import ABSTRACT, BLUE, GEOMETRIC, RED, Element, Instance


# ---------------------------------------------------------------------------
# source problems


@dataclass(frozen=True)
class SetCoverInstance:
    """Universe {1..n}, a family of subsets, and a cover budget."""

    universe_size: int
    sets: tuple[frozenset[int], ...]
    budget: int

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        for s in self.sets:
            if any(not 1 <= e <= self.universe_size for e in s):
                raise ValueError("set element outside the universe")
        if self.universe_size < 1 or len(self.sets) < 1:
            raise ValueError("need at least one element and one set")
        if self.budget < 0:
            raise ValueError("negative budget")


def setcover_decide(sc: SetCoverInstance) -> bool:
    """Plain enumeration over <= budget sets; the independent source oracle."""
    universe = frozenset(range(1, sc.universe_size + 1))
    covered_all = frozenset().union(*sc.sets)
    if not universe <= covered_all:
        return False
    for size in range(min(sc.budget, len(sc.sets)) + 1):
        for combo in combinations(sc.sets, size):
            if frozenset().union(*combo) >= universe:
                return True
    return False


@dataclass(frozen=True)
class MulticoloredGraph:
    """Vertex classes (each an independent set) and cross-class edges."""

    classes: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(
            self, "classes", tuple(tuple(sorted(c)) for c in self.classes)
        )
        object.__setattr__(
            self, "edges", frozenset((min(u, v), max(u, v)) for u, v in self.edges)
        )
        owner: dict[int, int] = {}
        for ci, cls in enumerate(self.classes):
            if not cls:
                raise ValueError("empty vertex class")
            for v in cls:
                if v in owner:
                    raise ValueError(f"vertex {v} in two classes")
                owner[v] = ci
        for u, v in self.edges:
            if u not in owner or v not in owner:
                raise ValueError(f"edge ({u},{v}) uses an unknown vertex")
            if u == v or owner[u] == owner[v]:
                raise ValueError(f"edge ({u},{v}) inside one class")
        object.__setattr__(self, "_owner", owner)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def vertices(self) -> list[int]:
        return sorted(v for cls in self.classes for v in cls)

    def class_of(self, v: int) -> int:
        return self._owner[v]

    def neighbors(self, v: int) -> list[int]:
        return sorted(
            (b if a == v else a) for a, b in self.edges if v in (a, b)
        )

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def regular_degree(self) -> int | None:
        degs = {self.degree(v) for v in self.vertices}
        return degs.pop() if len(degs) == 1 else None


def has_multicolored_clique(g: MulticoloredGraph) -> bool:
    """One vertex per class, pairwise adjacent; exhaustive check."""
    for pick in product(*g.classes):
        if all(
            (min(a, b), max(a, b)) in g.edges for a, b in combinations(pick, 2)
        ):
            return True
    return False


# ---------------------------------------------------------------------------
# source-problem file formats


def parse_setcover(text: str) -> SetCoverInstance:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    if not rows or rows[0][1] != ["setcover", "1"]:
        raise ParseError(rows[0][0] if rows else 1, "expected 'setcover 1' header")
    n = k = None
    sets: list[tuple[int, frozenset[int]]] = []
    for lineno, toks in rows[1:]:
        if toks[0] == "n" and len(toks) == 2:
            n = int(toks[1])
        elif toks[0] == "k" and len(toks) == 2:
            k = int(toks[1])
        elif toks[0] == "set" and len(toks) >= 3 and toks[2] == ":":
            sets.append((int(toks[1]), frozenset(int(t) for t in toks[3:])))
        else:
            raise ParseError(lineno, f"bad set cover line {' '.join(toks)!r}")
    if n is None or k is None:
        raise ParseError(1, "missing n or k")
    sets.sort()
    return SetCoverInstance(n, tuple(s for _, s in sets), k)


def serialize_setcover(sc: SetCoverInstance) -> str:
    lines = ["setcover 1", f"n {sc.universe_size}", f"k {sc.budget}"]
    for i, s in enumerate(sc.sets):
        lines.append(f"set {i} : " + " ".join(str(e) for e in sorted(s)))
    return "\n".join(lines) + "\n"


def parse_mcgraph(text: str) -> MulticoloredGraph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    if not rows or rows[0][1] != ["mcgraph", "1"]:
        raise ParseError(rows[0][0] if rows else 1, "expected 'mcgraph 1' header")
    k = None
    members: dict[int, list[int]] = {}
    edges = []
    for lineno, toks in rows[1:]:
        if toks[0] == "classes" and len(toks) == 2:
            k = int(toks[1])
            members = {i: [] for i in range(1, k + 1)}
        elif toks[0] == "vertex" and len(toks) == 3:
            vid, cls = int(toks[1]), int(toks[2])
            if k is None or cls not in members:
                raise ParseError(lineno, f"vertex class {cls} out of range")
            members[cls].append(vid)
        elif toks[0] == "edge" and len(toks) == 3:
            edges.append((int(toks[1]), int(toks[2])))
        else:
            raise ParseError(lineno, f"bad graph line {' '.join(toks)!r}")
    if k is None:
        raise ParseError(1, "missing 'classes' line")
    return MulticoloredGraph(
        tuple(tuple(members[i]) for i in range(1, k + 1)), frozenset(edges)
    )


def serialize_mcgraph(g: MulticoloredGraph) -> str:
    lines = ["mcgraph 1", f"classes {g.num_classes}"]
    for ci, cls in enumerate(g.classes, start=1):
        for v in cls:
            lines.append(f"vertex {v} {ci}")
    for u, v in sorted(g.edges):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# set cover reductions (parabola placement keeps every triple non-collinear)


def _parabola(t: int) -> PlanePoint:
    return PlanePoint(Fraction(t), Fraction(t * t))


def gen_setcover_lines(sc: SetCoverInstance) -> Instance:
    """Cover instance with one two-point line per (element, set) incidence.

    Blue points sit at (t, t^2) for elements, red points continue along the
    parabola for sets; budgets are (universe size, cover budget).
    """
    n, m = sc.universe_size, len(sc.sets)
    elements = [Element(u - 1, BLUE, _parabola(u)) for u in range(1, n + 1)]
    elements += [Element(n + j - 1, RED, _parabola(n + j)) for j in range(1, m + 1)]
    family = []
    sid = 0
    for j in range(1, m + 1):
        for u in sorted(sc.sets[j - 1]):
            family.append((sid, frozenset((u - 1, n + j - 1))))
            sid += 1
    return Instance(tuple(elements), tuple(family), n, sc.budget, GEOMETRIC)


def _interior_schedule():
    for den in range(2, 17):
        for num in range(1, den):
            if gcd(num, den) == 1:
                yield Fraction(num, den)


def gen_setcover_uniqred_lines(sc: SetCoverInstance) -> Instance:
    """As gen_setcover_lines, plus one extra red point private to each line.

    The extra point is placed at a deterministic interior parameter of its
    line segment, retried until it avoids every other point and line; the
    line budget becomes unbounded and the red budget k + n.
    """
    base = gen_setcover_lines(sc)
    points = {el.eid: el.point for el in base.elements}
    equations = {}
    for sid, mem in base.family:
        a, b = sorted(mem)
        equations[sid] = canonical_line(points[a], points[b])
    elements = list(base.elements)
    taken = {el.point for el in base.elements}
    family = []
    next_eid = len(elements)
    for sid, mem in base.family:
        blue = min(mem)  # blue ids precede red ids in the base construction
        red = max(mem)
        p, q = points[blue], points[red]
        placed = None
        for t in _interior_schedule():
            cand = PlanePoint(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
            if cand in taken:
                continue
            if any(o != sid and eq.contains(cand) for o, eq in equations.items()):
                continue
            placed = cand
            break
        if placed is None:
            raise PlacementExhausted(f"no interior point found for line {sid}")
        taken.add(placed)
        elements.append(Element(next_eid, RED, placed))
        family.append((sid, mem | {next_eid}))
        next_eid += 1
    return Instance(
        tuple(elements), tuple(family), None, sc.budget + sc.universe_size, GEOMETRIC
    )


# ---------------------------------------------------------------------------
# multicolored clique reductions


def gen_mcc_lines(g: MulticoloredGraph, d: int) -> Instance:
    """Geometric clique reduction: two bundles of lines through axis points.

    Class i gets blue anchors (0, i) and (i, 0).  Each vertex owns a
    near-horizontal and a near-vertical line; red points mark every
    vertex self-intersection and both crossings per edge.  The audit
    recomputes all incidences exactly and refuses degenerate output.
    """
    k = g.num_classes
    if d < 0:
        raise NotRegular("degree must be nonnegative")
    for v in g.vertices:
        if g.degree(v) != d:
            raise NotRegular(f"vertex {v} has degree {g.degree(v)}, expected {d}")
    blue_h = {i: PlanePoint(Fraction(0), Fraction(i)) for i in range(1, k + 1)}
    blue_v = {i: PlanePoint(Fraction(i), Fraction(0)) for i in range(1, k + 1)}
    horiz: dict[int, LineEquation] = {}
    vert: dict[int, LineEquation] = {}
    for ci, cls in enumerate(g.classes, start=1):
        for idx, u in enumerate(cls):
            offset = ci - 1 + Fraction(idx + 1, 2 * (len(cls) + 1))
            horiz[u] = canonical_line(blue_h[ci], PlanePoint(Fraction(k), offset))
            vert[u] = canonical_line(blue_v[ci], PlanePoint(offset, Fraction(k)))

    elements: list[Element] = []
    eid = 0
    blue_eid: dict[tuple[str, int], int] = {}
    for i in range(1, k + 1):
        blue_eid[("h", i)] = eid
        elements.append(Element(eid, BLUE, blue_h[i]))
        eid += 1
    for i in range(1, k + 1):
        blue_eid[("v", i)] = eid
        elements.append(Element(eid, BLUE, blue_v[i]))
        eid += 1

    red_defs: list[tuple[PlanePoint, int, int]] = []  # (point, on horiz of, on vert of)
    for u in g.vertices:
        pt = intersect(horiz[u], vert[u])
        red_defs.append((pt, u, u))
    for u, v in sorted(g.edges):
        red_defs.append((intersect(horiz[u], vert[v]), u, v))
        red_defs.append((intersect(horiz[v], vert[u]), v, u))

    on_horiz: dict[int, set[int]] = {u: set() for u in g.vertices}
    on_vert: dict[int, set[int]] = {u: set() for u in g.vertices}
    coords = {el.point: el.eid for el in elements}
    for pt, hu, vu in red_defs:
        if pt is None:
            raise GeometryAuditError("defining lines are parallel")
        if pt in coords:
            raise GeometryAuditError(f"red point collision at {pt}")
        coords[pt] = eid
        elements.append(Element(eid, RED, pt))
        on_horiz[hu].add(eid)
        on_vert[vu].add(eid)
        eid += 1

    family = []
    line_eqs = []
    sid = 0
    for ci, cls in enumerate(g.classes, start=1):
        for u in cls:
            family.append((sid, frozenset({blue_eid[("h", ci)]} | on_horiz[u])))
            line_eqs.append(horiz[u])
            sid += 1
    for ci, cls in enumerate(g.classes, start=1):
        for u in cls:
            family.append((sid, frozenset({blue_eid[("v", ci)]} | on_vert[u])))
            line_eqs.append(vert[u])
            sid += 1

    # audit: recompute every incidence and compare against the construction
    for (s, mem), eq in zip(family, line_eqs):
        actual = {el.eid for el in elements if eq.contains(el.point)}
        if actual != mem:
            raise GeometryAuditError(
                f"line {s} contains elements {sorted(actual)} but expected {sorted(mem)}"
            )
        reds = sum(1 for e in mem if elements[e].color == RED)
        if reds != d + 1:
            raise GeometryAuditError(f"line {s} carries {reds} red points, expected {d + 1}")

    budget_red = max(0, 2 * (d + 1) * k - k * k)
    return Instance(tuple(elements), tuple(family), 2 * k, budget_red, GEOMETRIC)


def gen_mcc_setsystem(g: MulticoloredGraph) -> Instance:
    """Abstract clique reduction: one blue per class pair, one red per vertex,
    one 3-element set per edge; budgets (pairs, classes)."""
    k = g.num_classes
    pair_eid: dict[tuple[int, int], int] = {}
    elements = []
    eid = 0
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            pair_eid[(i, j)] = eid
            elements.append(Element(eid, BLUE))
            eid += 1
    red_eid: dict[int, int] = {}
    for v in g.vertices:
        red_eid[v] = eid
        elements.append(Element(eid, RED))
        eid += 1
    family = []
    rows = []
    for u, v in g.edges:
        i, j = g.class_of(u) + 1, g.class_of(v) + 1
        if i > j:
            i, j, u, v = j, i, v, u
        rows.append((i, j, u, v))
    for sid, (i, j, u, v) in enumerate(sorted(rows)):
        family.append((sid, frozenset((pair_eid[(i, j)], red_eid[u], red_eid[v]))))
    return Instance(tuple(elements), tuple(family), comb(k, 2), k, ABSTRACT)


# ---------------------------------------------------------------------------
# random instances


@dataclass(frozen=True)
class RandomProfile:
    """Shape bounds and structural filters for gen_random."""

    mode: str = GEOMETRIC
    min_points: int = 4
    max_points: int = 10
    min_sets: int = 1
    max_sets: int = 12
    coord_range: int = 6
    max_budget_lines: int = 4
    max_budget_red: int = 5
    unbounded_lines: bool = False
    structure: str = "any"  # any | one-blue | two-blue | max-one-red | two-red
    linear: bool = True  # abstract mode: keep pairwise intersections <= 1
    blue_chance: tuple[int, int] = (1, 2)  # color an element blue with chance num/den
    attempts: int = 300


def _structure_ok(profile: RandomProfile, blues: int, reds: int) -> bool:
    s = profile.structure
    if s == "any":
        return True
    if s == "one-blue":
        return blues == 1
    if s == "two-blue":
        return blues == 0 or blues >= 2
    if s == "max-one-red":
        return reds <= 1
    if s == "two-red":
        return reds == 0 or reds >= 2
    raise ValueError(f"unknown structure filter {s!r}")


def _random_budgets(rng: random.Random, profile: RandomProfile) -> tuple[int | None, int]:
    lines = None if profile.unbounded_lines else rng.randint(0, profile.max_budget_lines)
    return lines, rng.randint(0, profile.max_budget_red)


def _random_color(rng: random.Random, profile: RandomProfile) -> str:
    num, den = profile.blue_chance
    return BLUE if rng.randrange(den) < num else RED


def _random_coordinate(rng: random.Random, profile: RandomProfile) -> Fraction:
    # mostly a small integer grid (rich in collinear triples), sometimes halves
    if rng.randrange(4) == 0:
        return Fraction(rng.randint(0, 2 * profile.coord_range), 2)
    return Fraction(rng.randint(0, profile.coord_range))


def _random_geometric(rng: random.Random, profile: RandomProfile) -> Instance | None:
    n = rng.randint(profile.min_points, profile.max_points)
    pts: list[tuple[Fraction, Fraction]] = []
    seen = set()
    for _ in range(40 * n):
        p = (_random_coordinate(rng, profile), _random_coordinate(rng, profile))
        if p not in seen:
            seen.add(p)
            pts.append(p)
        if len(pts) == n:
            break
    if len(pts) < n:
        return None
    colors = [_random_color(rng, profile) for _ in pts]
    plane = [PlanePoint(x, y) for x, y in pts]
    lines = maximal_collinear_family(plane)
    candidates = []
    for eq in sorted(lines):
        members = lines[eq]
        blues = sum(1 for i in members if colors[i] == BLUE)
        if _structure_ok(profile, blues, len(members) - blues):
            candidates.append(members)
    if len(candidates) < profile.min_sets:
        return None
    count = rng.randint(profile.min_sets, min(profile.max_sets, len(candidates)))
    picked = sorted(rng.sample(range(len(candidates)), count))
    used = sorted(set().union(*(candidates[i] for i in picked)))
    new_id = {old: new for new, old in enumerate(used)}
    elements = tuple(Element(new_id[i], colors[i], plane[i]) for i in used)
    family = tuple(
        (sid, frozenset(new_id[i] for i in candidates[idx]))
        for sid, idx in enumerate(picked)
    )
    budget_lines, budget_red = _random_budgets(rng, profile)
    return Instance(elements, family, budget_lines, budget_red, GEOMETRIC)


def _random_abstract(rng: random.Random, profile: RandomProfile) -> Instance | None:
    n = rng.randint(profile.min_points, profile.max_points)
    colors = [_random_color(rng, profile) for _ in range(n)]
    target = rng.randint(profile.min_sets, profile.max_sets)
    family: list[frozenset[int]] = []
    for _ in range(60 * target):
        if len(family) == target:
            break
        size = rng.randint(1, min(4, n))
        mem = frozenset(rng.sample(range(n), size))
        blues = sum(1 for e in mem if colors[e] == BLUE)
        if not _structure_ok(profile, blues, len(mem) - blues):
            continue
        if mem in family:
            continue
        if profile.linear and any(len(mem & other) >= 2 for other in family):
            continue
        family.append(mem)
    if len(family) < profile.min_sets:
        return None
    elements = tuple(Element(i, colors[i]) for i in range(n))
    sets = tuple((sid, mem) for sid, mem in enumerate(sorted(family, key=sorted)))
    budget_lines, budget_red = _random_budgets(rng, profile)
    return Instance(elements, sets, budget_lines, budget_red, ABSTRACT)


def gen_random(seed: int, profile: RandomProfile = RandomProfile()) -> Instance:
    """Deterministic-in-seed random instance satisfying the profile filters."""
    rng = random.Random(seed)
    build = _random_geometric if profile.mode == GEOMETRIC else _random_abstract
    for _ in range(profile.attempts):
        inst = build(rng, profile)
        if inst is not None:
            return inst
    raise FilterUnsatisfiable(f"profile filters unsatisfied after {profile.attempts} attempts")
