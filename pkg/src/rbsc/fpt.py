"""Fixed-parameter search for instances with finite line and red budgets.

The solver pivots on instances where every set covers exactly one blue
element.  A candidate solution there decomposes into connected components of
its intersection graph; each component is describable by a numerical skeleton
(a "good tuple"): how the blue elements are partitioned into components, in
which order each component acquires them, and how the red budget splits
across components.  Enumerating skeletons and searching each component
independently gives the decision:

  * step 1 of a component branches over every set covering its first blue;
  * step j > 1 branches only over sets covering the j-th blue that also
    touch a red element already accumulated, which is exactly the
    prefix-connectivity a component of a minimal family must have;
  * a branch dies as soon as the accumulated reds exceed the component's
    share of the red budget.

General instances are reduced to the one-blue case: after kernelization at
most budget_lines^2 blue elements survive, so at most budget_lines^4 sets
carry two or more blues; the solver guesses the solution's subfamily of such
sets, pays for it, deletes what it covers, and runs the one-blue search on
the rest.

Searches are deterministic: subsets ascend by size then lexicographically,
skeletons stream in a fixed canonical order, and ties everywhere break
toward smaller ids.  Component searches for the same ordered block are
memoized by their minimal red demand, which decides every budget split
without repeating the depth-first search; the first skeleton accepted and
the family returned are identical to what the plain stream would produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import comb

from . import kernel, model
from .errors import DegreeExceeded, PreconditionViolated
from .model import BLUE, RED, Instance, Solution


@dataclass
class SolveStats:
    """Work counters: subfamily branches explored and good tuples consumed."""

    branches: int = 0
    tuples: int = 0


@dataclass(frozen=True)
class GoodTuple:
    """Numerical skeleton of a candidate solution's component structure."""

    blue_count: int
    red_total: int
    part_count: int
    blocks: tuple[tuple[int, ...], ...]
    orderings: tuple[tuple[int, ...], ...]
    red_budgets: tuple[int, ...]

    def __post_init__(self):
        s = self.part_count
        if not 1 <= s <= self.blue_count:
            raise ValueError("part count out of range")
        if not (len(self.blocks) == len(self.orderings) == len(self.red_budgets) == s):
            raise ValueError("component lists disagree with part count")
        seen: set[int] = set()
        for block, ordering in zip(self.blocks, self.orderings):
            if not block:
                raise ValueError("empty block")
            if set(ordering) != set(block) or len(ordering) != len(block):
                raise ValueError("ordering is not a permutation of its block")
            if seen & set(block):
                raise ValueError("blocks overlap")
            seen |= set(block)
        if len(seen) != self.blue_count:
            raise ValueError("blocks do not cover the blue elements")
        if any(k < 0 for k in self.red_budgets) or sum(self.red_budgets) != self.red_total:
            raise ValueError("red budgets must be nonnegative and sum to the total")
        mins = [min(block) for block in self.blocks]
        if mins != sorted(mins):
            raise ValueError("blocks are not in canonical order")


def _partitions_into(elems: tuple[int, ...], s: int):
    """Partitions of elems into exactly s blocks, canonical enumeration order."""
    n = len(elems)
    blocks: list[list[int]] = []

    def rec(i):
        if i == n:
            if len(blocks) == s:
                yield tuple(tuple(b) for b in blocks)
            return
        x = elems[i]
        rem_after = n - i - 1
        for blk in blocks:
            if len(blocks) + rem_after >= s:
                blk.append(x)
                yield from rec(i + 1)
                blk.pop()
        if len(blocks) < s:
            blocks.append([x])
            yield from rec(i + 1)
            blocks.pop()

    yield from rec(0)


def _compositions(total: int, parts: int):
    """Nonnegative integer tuples of given length summing to total, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _skeletons(blues: tuple[int, ...], budget_lines: int):
    b = len(blues)
    if b == 0 or b > budget_lines:
        return
    for s in range(1, min(budget_lines, b) + 1):
        for partition in _partitions_into(blues, s):
            for orderings in product(*[permutations(block) for block in partition]):
                yield s, partition, orderings


def enumerate_good_tuples(blue_ids, budget_lines: int, budget_red: int):
    """Stream every good tuple exactly once, in deterministic order.

    Order: ascending part count, then partition, then per-block orderings,
    then ascending covered-red total, then budget compositions.
    """
    blues = tuple(sorted(blue_ids))
    for s, partition, orderings in _skeletons(blues, budget_lines):
        for p in range(budget_red + 1):
            for comp in _compositions(p, s):
                yield GoodTuple(len(blues), p, s, partition, orderings, comp)


# ---------------------------------------------------------------------------
# the one-blue-per-set component search


class _OneBlueContext:
    """Index of a family in which every set covers exactly one blue element."""

    __slots__ = ("blues", "sets", "by_blue", "by_blue_red")

    def __init__(self, blues, sets):
        self.blues = tuple(sorted(blues))
        self.sets: dict[int, tuple[int, frozenset[int]]] = {}
        self.by_blue: dict[int, list[int]] = {}
        self.by_blue_red: dict[tuple[int, int], list[int]] = {}
        for sid, blue, reds in sorted(sets):
            self.sets[sid] = (blue, reds)
            self.by_blue.setdefault(blue, []).append(sid)
            for r in reds:
                self.by_blue_red.setdefault((blue, r), []).append(sid)


def _context_from_instance(instance: Instance) -> _OneBlueContext:
    sets = []
    for sid, mem in instance.family:
        blues = [e for e in mem if instance.color_of(e) == BLUE]
        if len(blues) != 1:
            raise PreconditionViolated(
                f"set {sid} has {len(blues)} blue elements; exactly one is required"
            )
        reds = frozenset(e for e in mem if instance.color_of(e) == RED)
        sets.append((sid, blues[0], reds))
    return _OneBlueContext(instance.blue_ids, sets)


def _block_candidates(ctx: _OneBlueContext, blue: int, acc: set[int], first: bool):
    if first:
        return ctx.by_blue.get(blue, ())
    cands: set[int] = set()
    for r in acc:
        cands.update(ctx.by_blue_red.get((blue, r), ()))
    return sorted(cands)


def _search_block(ctx: _OneBlueContext, ordering, budget: int) -> list[int] | None:
    """First family (in candidate order) realizing one component, or None."""
    t = len(ordering)
    chosen: list[int] = []
    acc: set[int] = set()

    def rec(j: int) -> bool:
        if j == t:
            return True
        for sid in _block_candidates(ctx, ordering[j], acc, j == 0):
            fresh = ctx.sets[sid][1] - acc
            if len(acc) + len(fresh) > budget:
                continue
            acc.update(fresh)
            chosen.append(sid)
            if rec(j + 1):
                return True
            chosen.pop()
            acc.difference_update(fresh)
        return False

    return list(chosen) if rec(0) else None


def _min_red_for_block(ctx: _OneBlueContext, ordering, cap: int) -> int:
    """Minimal red count any realization of the block can achieve (cap+1 if none <= cap)."""
    t = len(ordering)
    best = cap + 1
    acc: set[int] = set()

    def rec(j: int):
        nonlocal best
        if len(acc) >= best:
            return
        if j == t:
            best = len(acc)
            return
        for sid in _block_candidates(ctx, ordering[j], acc, j == 0):
            fresh = ctx.sets[sid][1] - acc
            if len(acc) + len(fresh) >= best:
                continue
            acc.update(fresh)
            rec(j + 1)
            acc.difference_update(fresh)

    rec(0)
    return best


def _assemble_blocks(ctx: _OneBlueContext, tup: GoodTuple, budget_red: int):
    families: list[int] = []
    for ordering, budget in zip(tup.orderings, tup.red_budgets):
        fam = _search_block(ctx, ordering, budget)
        if fam is None:
            return None
        families.extend(fam)
    union = tuple(sorted(set(families)))
    covered_blue = {ctx.sets[sid][0] for sid in union}
    covered_red: set[int] = set()
    for sid in union:
        covered_red |= ctx.sets[sid][1]
    if covered_blue != set(ctx.blues) or len(covered_red) > budget_red:
        return None
    return union


def check_conforming(instance: Instance, tup: GoodTuple) -> tuple[int, ...] | None:
    """Search for a family realizing the skeleton; None when none exists.

    The returned union is re-verified to cover every blue element while
    touching at most budget_red distinct red elements.
    """
    ctx = _context_from_instance(instance)
    return _assemble_blocks(ctx, tup, instance.budget_red)


def _tuples_consumed_by_success(demands: tuple[int, ...]) -> int:
    """Stream position (1-based) of the first conforming tuple in its skeleton."""
    total, s = sum(demands), len(demands)
    consumed = comb(total - 1 + s, s) if total >= 1 else 0
    for rank, c in enumerate(_compositions(total, s)):
        if c == demands:
            return consumed + rank + 1
    raise AssertionError("composition not found in its own enumeration")


def _solve_one_blue_core(
    ctx: _OneBlueContext, budget_lines: int, budget_red: int, stats: SolveStats | None
) -> tuple[int, ...] | None:
    b = len(ctx.blues)
    if b == 0:
        return ()
    if b > budget_lines:
        return None
    demand_cache: dict[tuple[int, ...], int] = {}

    def demand(ordering) -> int:
        got = demand_cache.get(ordering)
        if got is None:
            got = _min_red_for_block(ctx, ordering, budget_red)
            demand_cache[ordering] = got
        return got

    for s, partition, orderings in _skeletons(ctx.blues, budget_lines):
        demands = tuple(demand(o) for o in orderings)
        total = sum(demands)
        if total > budget_red:
            if stats:
                stats.tuples += comb(budget_red + s, s)
            continue
        if stats:
            stats.tuples += _tuples_consumed_by_success(demands)
        tup = GoodTuple(b, total, s, partition, orderings, demands)
        fam = _assemble_blocks(ctx, tup, budget_red)
        if fam is None:
            raise AssertionError("minimal demands admitted no family")
        return fam
    return None


def _require_unweighted(instance: Instance):
    if instance.is_weighted():
        raise PreconditionViolated("red weights must all be 1 for this solver")


def _require_finite_budget(instance: Instance):
    if instance.budget_lines is None:
        raise PreconditionViolated("a finite line budget is required")


def _finish(instance: Instance, chosen, forced: frozenset[int]) -> Solution:
    sol = model.verify(instance, chosen)
    if not sol.feasible:
        raise AssertionError("assembled family failed verification")
    return Solution(sol.chosen, sol.blue_covered, sol.red_covered, True, forced)


def solve_one_blue_special(instance: Instance, *, stats: SolveStats | None = None) -> Solution | None:
    """Decide an instance in which every set covers exactly one blue element.

    More blue elements than the line budget is an immediate NO; otherwise
    good tuples stream through the component search until one conforms.
    """
    _require_unweighted(instance)
    _require_finite_budget(instance)
    ctx = _context_from_instance(instance)
    fam = _solve_one_blue_core(ctx, instance.budget_lines, instance.budget_red, stats)
    if fam is None:
        return None
    return _finish(instance, fam, frozenset())


def solve_kl_kr(instance: Instance, *, stats: SolveStats | None = None) -> Solution | None:
    """Decide a finite-budget linear-system instance.

    Kernelize, guess the solution's subfamily of sets with two or more blue
    elements (ascending size, then lexicographic), charge its cost, delete
    everything it covers along with every set sharing a blue with it, and run
    the one-blue search on the remainder.
    """
    _require_unweighted(instance)
    _require_finite_budget(instance)
    result = kernel.kernelize_kl_kr(instance)
    if result.is_no:
        return None
    reduced = result.instance
    k_l, k_r = reduced.budget_lines, reduced.budget_red
    multi: list[tuple[int, frozenset[int], frozenset[int]]] = []
    single: list[tuple[int, int, frozenset[int]]] = []
    for sid, mem in reduced.family:
        blues = frozenset(e for e in mem if reduced.color_of(e) == BLUE)
        reds = frozenset(e for e in mem if reduced.color_of(e) == RED)
        if len(blues) >= 2:
            multi.append((sid, blues, reds))
        else:
            single.append((sid, next(iter(blues)), reds))
    all_blues = reduced.blue_ids
    for size in range(min(k_l, len(multi)) + 1):
        for picked in combinations(multi, size):
            covered_blue: set[int] = set()
            covered_red: set[int] = set()
            for _, bl, rd in picked:
                covered_blue |= bl
                covered_red |= rd
            if len(covered_red) > k_r:
                continue
            if stats:
                stats.branches += 1
            rem_lines = k_l - size
            rem_red = k_r - len(covered_red)
            rem_blues = all_blues - covered_blue
            if len(rem_blues) > rem_lines:
                continue
            branch_sets = [
                (sid, blue, reds - covered_red)
                for sid, blue, reds in single
                if blue not in covered_blue
            ]
            ctx = _OneBlueContext(rem_blues, branch_sets)
            fam = _solve_one_blue_core(ctx, rem_lines, rem_red, stats)
            if fam is not None:
                chosen = result.forced | {sid for sid, _, _ in picked} | set(fam)
                return _finish(instance, chosen, result.forced)
    return None


def solve_bounded_red(
    instance: Instance, d: int, *, stats: SolveStats | None = None
) -> Solution | None:
    """Decide when every set carries at most d red elements.

    A solution touches at most d * budget_lines reds, so the red budget can
    be capped there before delegating.
    """
    _require_unweighted(instance)
    _require_finite_budget(instance)
    if d < 0:
        raise ValueError("d must be nonnegative")
    for sid, mem in instance.family:
        reds = sum(1 for e in mem if instance.color_of(e) == RED)
        if reds > d:
            raise DegreeExceeded(f"set {sid} has {reds} red elements, more than d={d}")
    capped = min(instance.budget_red, d * instance.budget_lines)
    sol = solve_kl_kr(model.with_budgets(instance, budget_red=capped), stats=stats)
    if sol is None:
        return None
    return _finish(instance, sol.chosen, sol.forced)


def solve_two_blue_special(
    instance: Instance, *, stats: SolveStats | None = None
) -> Solution | None:
    """Decide when every set has either no blue elements or at least two.

    Kernelization leaves at most budget_lines^4 sets, few enough to try every
    subfamily within the line budget directly.
    """
    _require_unweighted(instance)
    _require_finite_budget(instance)
    for sid, mem in instance.family:
        blues = sum(1 for e in mem if instance.color_of(e) == BLUE)
        if blues == 1:
            raise PreconditionViolated(
                f"set {sid} has exactly one blue element; zero or >= 2 required"
            )
    result = kernel.kernelize_kl_kr(instance)
    if result.is_no:
        return None
    reduced = result.instance
    k_l, k_r = reduced.budget_lines, reduced.budget_red
    blues = sorted(reduced.blue_ids)
    blue_bit = {eid: 1 << i for i, eid in enumerate(blues)}
    full = (1 << len(blues)) - 1
    table = []
    for sid, mem in reduced.family:
        bm = 0
        reds = set()
        for e in mem:
            if reduced.color_of(e) == BLUE:
                bm |= blue_bit[e]
            else:
                reds.add(e)
        table.append((sid, bm, frozenset(reds)))
    for size in range(min(k_l, len(table)) + 1):
        for picked in combinations(table, size):
            bm = 0
            reds: set[int] = set()
            for _, b, r in picked:
                bm |= b
                reds |= r
            if bm == full and len(reds) <= k_r:
                chosen = result.forced | {sid for sid, _, _ in picked}
                return _finish(instance, chosen, result.forced)
    return None


def solve_rbsc_kr_two_red(
    instance: Instance, *, stats: SolveStats | None = None
) -> Solution | None:
    """Decide unbounded-budget instances whose sets have zero or >= 2 reds.

    Red-free sets are always taken and useless sets dropped; each surviving
    set then holds at least two of the at most budget_red coverable reds, so
    some solution uses at most C(budget_red, 2) sets and the finite-budget
    solver applies.
    """
    _require_unweighted(instance)
    if instance.budget_lines is not None:
        raise PreconditionViolated("an unbounded line budget is required")
    for sid, mem in instance.family:
        reds = sum(1 for e in mem if instance.color_of(e) == RED)
        if reds == 1:
            raise PreconditionViolated(
                f"set {sid} has exactly one red element; zero or >= 2 required"
            )
    inst = instance
    forced: set[int] = set()
    while True:
        changed = False
        for rule in (
            kernel.rule_delete_red_only,
            kernel.rule_delete_heavy_red,
            kernel.rule_take_blue_only,
        ):
            out = rule(inst)
            forced |= out.forced
            if out.changed:
                inst = out.instance
                changed = True
        if not changed:
            break
    bounded = model.with_budgets(inst, budget_lines=comb(inst.budget_red, 2))
    sub = solve_kl_kr(bounded, stats=stats)
    if sub is None:
        return None
    return _finish(instance, frozenset(forced) | sub.chosen, frozenset(forced) | sub.forced)


def intersection_graph(instance: Instance, set_ids=None) -> dict[int, frozenset[int]]:
    """Adjacency over sets; an edge joins two sets with a common element."""
    ids = sorted(instance.set_ids if set_ids is None else set_ids)
    adj: dict[int, set[int]] = {sid: set() for sid in ids}
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if instance.members(a) & instance.members(b):
                adj[a].add(b)
                adj[b].add(a)
    return {sid: frozenset(n) for sid, n in adj.items()}
