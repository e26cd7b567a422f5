"""Instance and solution model, structural validation, and file I/O.

Instances are immutable after construction; the transformation helpers at the
bottom (element deletion, set removal, budget changes, cleanup) always return
fresh instances and are the only mutation surface the kernelization rules use.
Deleting elements from a geometric instance switches it to abstract mode: only
the linear-set-system structure is guaranteed afterwards, so coordinates are
dropped rather than kept half-valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import ParseError, SemanticError, UnknownSetId
from .geometry import PlanePoint, canonical_line

BLUE = "B"
RED = "R"
GEOMETRIC = "geometric"
ABSTRACT = "abstract"


@dataclass(frozen=True)
class Element:
    eid: int
    color: str
    point: PlanePoint | None = None
    weight: int = 1

    def __post_init__(self):
        if self.color not in (BLUE, RED):
            raise ValueError(f"bad color {self.color!r} on element {self.eid}")
        if self.weight < 1:
            raise ValueError(f"non-positive weight on element {self.eid}")
        if self.color == BLUE and self.weight != 1:
            raise ValueError(f"weight on blue element {self.eid}")


@dataclass(frozen=True)
class Instance:
    """A universe of colored elements, a set family, and the two budgets.

    budget_lines is None when the number of chosen sets is unbounded.
    Elements and family are stored sorted by id, so equal instances compare
    equal structurally and serialization is canonical.
    """

    elements: tuple[Element, ...]
    family: tuple[tuple[int, frozenset[int]], ...]
    budget_lines: int | None
    budget_red: int
    mode: str = GEOMETRIC

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(self.elements, key=lambda e: e.eid)))
        object.__setattr__(
            self, "family", tuple(sorted(((s, frozenset(m)) for s, m in self.family)))
        )
        if self.mode not in (GEOMETRIC, ABSTRACT):
            raise ValueError(f"bad mode {self.mode!r}")
        if self.budget_lines is not None and self.budget_lines < 0:
            raise ValueError("negative budget_lines")
        if self.budget_red < 0:
            raise ValueError("negative budget_red")
        by_eid = {}
        for el in self.elements:
            if el.eid < 0:
                raise ValueError(f"negative element id {el.eid}")
            if el.eid in by_eid:
                raise ValueError(f"duplicate element id {el.eid}")
            by_eid[el.eid] = el
        members = {}
        for sid, mem in self.family:
            if sid < 0:
                raise ValueError(f"negative set id {sid}")
            if sid in members:
                raise ValueError(f"duplicate set id {sid}")
            members[sid] = mem
        object.__setattr__(self, "_by_eid", by_eid)
        object.__setattr__(self, "_members", members)

    # -- derived views (counts are never stored, always recomputed) --

    def element(self, eid: int) -> Element:
        return self._by_eid[eid]

    def has_element(self, eid: int) -> bool:
        return eid in self._by_eid

    def members(self, sid: int) -> frozenset[int]:
        return self._members[sid]

    @property
    def set_ids(self) -> list[int]:
        return [sid for sid, _ in self.family]

    @property
    def blue_ids(self) -> frozenset[int]:
        return frozenset(e.eid for e in self.elements if e.color == BLUE)

    @property
    def red_ids(self) -> frozenset[int]:
        return frozenset(e.eid for e in self.elements if e.color == RED)

    @property
    def num_blue(self) -> int:
        return sum(1 for e in self.elements if e.color == BLUE)

    @property
    def num_red(self) -> int:
        return sum(1 for e in self.elements if e.color == RED)

    @property
    def num_sets(self) -> int:
        return len(self.family)

    def blue_members(self, sid: int) -> frozenset[int]:
        return frozenset(e for e in self._members[sid] if self.color_of(e) == BLUE)

    def red_members(self, sid: int) -> frozenset[int]:
        return frozenset(e for e in self._members[sid] if self.color_of(e) == RED)

    def color_of(self, eid: int) -> str:
        return self._by_eid[eid].color

    def red_weight(self, eid: int) -> int:
        return self._by_eid[eid].weight

    def is_weighted(self) -> bool:
        return any(e.weight != 1 for e in self.elements)


@dataclass(frozen=True)
class Solution:
    chosen: frozenset[int]
    blue_covered: int
    red_covered: int
    feasible: bool
    forced: frozenset[int] = frozenset()


@dataclass(frozen=True)
class TraceEntry:
    """One answer-preserving transformation, mechanical enough to replay."""

    rule: str
    removed_sets: tuple[int, ...] = ()
    forced_sets: tuple[int, ...] = ()
    removed_elements: tuple[int, ...] = ()
    delta_lines: int = 0
    delta_red: int = 0
    reweights: tuple[tuple[int, int], ...] = ()
    note: str = ""


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    linear_system: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(instance: Instance) -> ValidationReport:
    """Report dangling ids, coordinate problems, non-collinear or non-maximal
    sets, and whether the family is a linear set system."""
    rep = ValidationReport()
    for sid, mem in instance.family:
        for eid in sorted(mem):
            if not instance.has_element(eid):
                rep.violations.append(f"set {sid} references missing element {eid}")
    if instance.mode == GEOMETRIC:
        coords = {}
        for el in instance.elements:
            if el.point is None:
                rep.violations.append(f"element {el.eid} has no coordinates")
            elif el.point in coords:
                rep.violations.append(
                    f"elements {coords[el.point]} and {el.eid} share coordinates {el.point}"
                )
            else:
                coords[el.point] = el.eid
        for sid, mem in instance.family:
            pts = [
                (eid, instance.element(eid).point)
                for eid in sorted(mem)
                if instance.has_element(eid) and instance.element(eid).point is not None
            ]
            if len(pts) < 2:
                continue
            try:
                line = canonical_line(pts[0][1], pts[1][1])
            except Exception:
                continue  # coincident points already reported
            if any(not line.contains(p) for _, p in pts):
                rep.violations.append(f"set {sid} is not collinear")
                continue
            inside = {eid for eid, _ in pts}
            for el in instance.elements:
                if el.eid not in inside and el.point is not None and line.contains(el.point):
                    rep.violations.append(
                        f"set {sid} is not maximal: element {el.eid} lies on its line"
                    )
    else:
        for el in instance.elements:
            if el.point is not None:
                rep.violations.append(f"element {el.eid} carries coordinates in abstract mode")
    fam = instance.family
    for i in range(len(fam)):
        for j in range(i + 1, len(fam)):
            common = fam[i][1] & fam[j][1]
            if len(common) >= 2:
                rep.linear_system = False
                rep.warnings.append(
                    f"not a linear set system: sets {fam[i][0]} and {fam[j][0]} "
                    f"share {len(common)} elements"
                )
    return rep


def is_linear_system(instance: Instance) -> bool:
    fam = instance.family
    for i in range(len(fam)):
        for j in range(i + 1, len(fam)):
            if len(fam[i][1] & fam[j][1]) >= 2:
                return False
    return True


def verify(instance: Instance, chosen) -> Solution:
    """Recompute coverage statistics of a chosen subfamily from scratch.

    Red elements are counted (weight-summed) once each no matter how many
    chosen sets cover them.
    """
    chosen = frozenset(chosen)
    known = set(instance.set_ids)
    for sid in chosen:
        if sid not in known:
            raise UnknownSetId(f"set {sid} is not in the family")
    covered: set[int] = set()
    for sid in chosen:
        covered |= instance.members(sid)
    blue_covered = 0
    red_covered = 0
    for eid in covered:
        if not instance.has_element(eid):
            continue
        el = instance.element(eid)
        if el.color == BLUE:
            blue_covered += 1
        else:
            red_covered += el.weight
    feasible = (
        blue_covered == instance.num_blue
        and red_covered <= instance.budget_red
        and (instance.budget_lines is None or len(chosen) <= instance.budget_lines)
    )
    return Solution(chosen, blue_covered, red_covered, feasible)


# ---------------------------------------------------------------------------
# instance file format


def _fmt_rational(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def serialize_instance(instance: Instance) -> str:
    lines = ["rbsc 1", f"mode {instance.mode}"]
    lines.append(
        "budget_lines inf" if instance.budget_lines is None else f"budget_lines {instance.budget_lines}"
    )
    lines.append(f"budget_red {instance.budget_red}")
    for el in instance.elements:
        parts = [f"point {el.eid} {el.color}"]
        if instance.mode == GEOMETRIC and el.point is not None:
            parts.append(f"{_fmt_rational(el.point.x)} {_fmt_rational(el.point.y)}")
        if el.color == RED and el.weight != 1:
            parts.append(f"w={el.weight}")
        lines.append(" ".join(parts))
    for sid, mem in instance.family:
        body = " ".join(str(e) for e in sorted(mem))
        lines.append(f"set {sid} : {body}".rstrip())
    return "\n".join(lines) + "\n"


def _parse_rational(token: str, lineno: int) -> Fraction:
    num, sep, den = token.partition("/")
    if not sep:
        raise SemanticError(lineno, f"bad rational {token!r}: expected n/d")
    try:
        n, d = int(num), int(den)
    except ValueError:
        raise SemanticError(lineno, f"bad rational {token!r}") from None
    if d <= 0:
        raise SemanticError(lineno, f"bad rational {token!r}: denominator must be positive")
    return Fraction(n, d)


def _parse_nonneg(token: str, lineno: int, what: str) -> int:
    if not token.isdigit():
        raise ParseError(lineno, f"expected nonnegative integer for {what}, got {token!r}")
    return int(token)


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format; inverse of serialize_instance."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    if not rows:
        raise ParseError(1, "empty instance file")
    it = iter(rows)

    def expect(keyword: str):
        try:
            lineno, toks = next(it)
        except StopIteration:
            raise ParseError(len(text.splitlines()) + 1, f"missing {keyword!r} line") from None
        if toks[0] != keyword:
            raise ParseError(lineno, f"expected {keyword!r}, got {toks[0]!r}")
        return lineno, toks

    lineno, toks = expect("rbsc")
    if toks[1:] != ["1"]:
        raise ParseError(lineno, "unsupported format version")
    lineno, toks = expect("mode")
    if len(toks) != 2 or toks[1] not in (GEOMETRIC, ABSTRACT):
        raise ParseError(lineno, "mode must be 'geometric' or 'abstract'")
    mode = toks[1]
    lineno, toks = expect("budget_lines")
    if len(toks) != 2:
        raise ParseError(lineno, "budget_lines takes one value")
    budget_lines = None if toks[1] == "inf" else _parse_nonneg(toks[1], lineno, "budget_lines")
    lineno, toks = expect("budget_red")
    if len(toks) != 2:
        raise ParseError(lineno, "budget_red takes one value")
    budget_red = _parse_nonneg(toks[1], lineno, "budget_red")

    elements: list[Element] = []
    eids: set[int] = set()
    family: list[tuple[int, frozenset[int]]] = []
    sids: set[int] = set()
    for lineno, toks in it:
        if toks[0] == "point":
            if len(toks) < 3:
                raise ParseError(lineno, "point needs an id and a color")
            eid = _parse_nonneg(toks[1], lineno, "point id")
            color = toks[2]
            if color not in (BLUE, RED):
                raise ParseError(lineno, f"bad color {color!r}")
            rest = toks[3:]
            weight = 1
            if rest and rest[-1].startswith("w="):
                wtok = rest.pop()[2:]
                if not wtok.isdigit() or int(wtok) < 1:
                    raise SemanticError(lineno, f"bad weight {wtok!r}")
                if color == BLUE:
                    raise SemanticError(lineno, "weight on a blue point")
                weight = int(wtok)
            point = None
            if mode == GEOMETRIC:
                if len(rest) != 2:
                    raise SemanticError(lineno, "geometric point needs two coordinates")
                point = PlanePoint(
                    _parse_rational(rest[0], lineno), _parse_rational(rest[1], lineno)
                )
            elif rest:
                raise SemanticError(lineno, "coordinates forbidden in abstract mode")
            if eid in eids:
                raise SemanticError(lineno, f"duplicate point id {eid}")
            eids.add(eid)
            elements.append(Element(eid, color, point, weight))
        elif toks[0] == "set":
            if len(toks) < 3 or toks[2] != ":":
                raise ParseError(lineno, "set line must look like 'set <id> : <pid> ...'")
            sid = _parse_nonneg(toks[1], lineno, "set id")
            if sid in sids:
                raise SemanticError(lineno, f"duplicate set id {sid}")
            sids.add(sid)
            mem = []
            for tok in toks[3:]:
                pid = _parse_nonneg(tok, lineno, "member id")
                if pid not in eids:
                    raise SemanticError(lineno, f"set {sid} references unknown point {pid}")
                if pid in mem:
                    raise SemanticError(lineno, f"set {sid} repeats member {pid}")
                mem.append(pid)
            family.append((sid, frozenset(mem)))
        else:
            raise ParseError(lineno, f"unknown directive {toks[0]!r}")
    return Instance(tuple(elements), tuple(family), budget_lines, budget_red, mode)


# ---------------------------------------------------------------------------
# solution file format


@dataclass(frozen=True)
class SolutionFile:
    decision: bool
    chosen: frozenset[int] = frozenset()
    red_covered: int = 0
    blue_covered: int = 0


def serialize_solution(solution: Solution | None) -> str:
    if solution is None:
        return "solution no\n"
    lines = ["solution yes"]
    lines += [f"set {sid}" for sid in sorted(solution.chosen)]
    lines.append(f"red {solution.red_covered}")
    lines.append(f"blue {solution.blue_covered}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> SolutionFile:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    if not rows:
        raise ParseError(1, "empty solution file")
    lineno, head = rows[0]
    if head[0] != "solution" or len(head) != 2 or head[1] not in ("yes", "no"):
        raise ParseError(lineno, "first line must be 'solution yes' or 'solution no'")
    if head[1] == "no":
        if len(rows) > 1:
            raise ParseError(rows[1][0], "content after 'solution no'")
        return SolutionFile(False)
    chosen = set()
    red = blue = 0
    for lineno, toks in rows[1:]:
        if toks[0] == "set" and len(toks) == 2:
            chosen.add(_parse_nonneg(toks[1], lineno, "set id"))
        elif toks[0] in ("red", "blue") and len(toks) == 2:
            value = _parse_nonneg(toks[1], lineno, toks[0])
            if toks[0] == "red":
                red = value
            else:
                blue = value
        else:
            raise ParseError(lineno, f"bad solution line {' '.join(toks)!r}")
    return SolutionFile(True, frozenset(chosen), red, blue)


# ---------------------------------------------------------------------------
# transformation helpers used by kernelization


def remove_sets(instance: Instance, sids) -> Instance:
    drop = set(sids)
    return replace(instance, family=tuple((s, m) for s, m in instance.family if s not in drop))


def delete_elements(instance: Instance, eids) -> Instance:
    """Remove elements from the universe and every set.

    Sets may stop being maximal collinear families of the shrunken universe,
    so the result is demoted to abstract mode (coordinates dropped).
    """
    drop = set(eids)
    if not drop:
        return instance
    elements = tuple(
        Element(e.eid, e.color, None, e.weight) for e in instance.elements if e.eid not in drop
    )
    family = tuple((s, m - drop) for s, m in instance.family)
    return replace(instance, elements=elements, family=family, mode=ABSTRACT)


_KEEP = object()


def with_budgets(instance: Instance, budget_lines=_KEEP, budget_red=_KEEP) -> Instance:
    kwargs = {}
    if budget_lines is not _KEEP:
        kwargs["budget_lines"] = budget_lines
    if budget_red is not _KEEP:
        kwargs["budget_red"] = budget_red
    return replace(instance, **kwargs)


def set_weight(instance: Instance, eid: int, weight: int) -> Instance:
    elements = tuple(
        Element(e.eid, e.color, e.point, weight if e.eid == eid else e.weight)
        for e in instance.elements
    )
    return replace(instance, elements=elements)


def cleanup(instance: Instance) -> tuple[Instance, list[TraceEntry]]:
    """Drop empty sets and deduplicate identical sets (smallest id survives)."""
    removed = []
    seen: dict[frozenset[int], int] = {}
    keep = []
    for sid, mem in instance.family:  # family is sorted, so first owner has smallest id
        if not mem:
            removed.append(sid)
        elif mem in seen:
            removed.append(sid)
        else:
            seen[mem] = sid
            keep.append((sid, mem))
    if not removed:
        return instance, []
    entry = TraceEntry("cleanup", removed_sets=tuple(removed), note="empty or duplicate sets")
    return replace(instance, family=tuple(keep)), [entry]


def apply_trace_entry(instance: Instance, entry: TraceEntry) -> tuple[Instance, frozenset[int]]:
    """Mechanically apply one trace entry; returns (instance, newly forced sets)."""
    inst = instance
    gone = set(entry.removed_sets) | set(entry.forced_sets)
    if gone:
        inst = remove_sets(inst, gone)
    if entry.removed_elements:
        inst = delete_elements(inst, entry.removed_elements)
    if entry.delta_lines:
        inst = with_budgets(inst, budget_lines=inst.budget_lines + entry.delta_lines)
    if entry.delta_red:
        inst = with_budgets(inst, budget_red=inst.budget_red + entry.delta_red)
    for eid, weight in entry.reweights:
        inst = set_weight(inst, eid, weight)
    return inst, frozenset(entry.forced_sets)


def replay_trace(instance: Instance, trace) -> tuple[Instance, frozenset[int]]:
    """Replay a kernelization trace on the original instance."""
    forced: frozenset[int] = frozenset()
    inst = instance
    for entry in trace:
        if entry.rule == "no_certificate":
            break
        inst, newly = apply_trace_entry(inst, entry)
        forced |= newly
    return inst, forced


def format_trace(trace) -> str:
    """Human-readable log, one rule application per line."""
    out = []
    for e in trace:
        bits = [e.rule]
        if e.forced_sets:
            bits.append("forced sets " + ",".join(map(str, e.forced_sets)))
        if e.removed_sets:
            bits.append("removed sets " + ",".join(map(str, e.removed_sets)))
        if e.removed_elements:
            bits.append("removed elements " + ",".join(map(str, e.removed_elements)))
        if e.delta_lines:
            bits.append(f"budget_lines {e.delta_lines:+}")
        if e.delta_red:
            bits.append(f"budget_red {e.delta_red:+}")
        if e.reweights:
            bits.append("weights " + ",".join(f"{eid}->{w}" for eid, w in e.reweights))
        if e.note:
            bits.append(f"({e.note})")
        out.append("; ".join(bits))
    return "\n".join(out) + ("\n" if out else "")
