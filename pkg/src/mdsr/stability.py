"""Blocking-set search and brute-force stable-matching enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator, Optional

from .core import Group, Instance, Matching, normalize_matching, tupleset
from .errors import TooLarge, ValidationError


@dataclass(frozen=True)
class BlockingReport:
    """A blocking group plus, per member, why it participates.

    evidence holds (agent, current tuple-set or None if unmatched,
    preferred tuple-set) triples.
    """

    group: Group
    evidence: tuple[tuple[int, Optional[tuple], tuple], ...]


def _partner_map(instance: Instance, m: Matching) -> dict:
    partners = {}
    for g in m:
        for a in g:
            partners[a] = tupleset(x for x in g if x != a)
    return partners


def is_blocking(instance: Instance, m: Matching, group: Group, partners=None):
    """A BlockingReport if the group blocks m, else None."""
    if partners is None:
        partners = _partner_map(instance, m)
    evidence = []
    for a in group:
        rest = tupleset(x for x in group if x != a)
        if not instance.acceptable(a, rest):
            return None
        current = partners.get(a)
        if current is None:
            evidence.append((a, None, rest))
        elif rest != current and instance.prefers(a, rest, current):
            evidence.append((a, current, rest))
        else:
            return None
    return BlockingReport(tuple(group), tuple(evidence))


def find_blocking(
    instance: Instance, m: Matching, guard: int = 10**8
) -> Optional[BlockingReport]:
    """The lexicographically least blocking group, or None if m is stable."""
    problems = _structural(instance, m)
    if problems:
        raise ValidationError("; ".join(problems))
    partners = _partner_map(instance, m)
    n, d = instance.n, instance.d
    if instance.is_complete:
        if comb(n, d) > guard:
            raise TooLarge("too many candidate groups to scan")
        candidates: Iterator[Group] = combinations(range(n), d)
    else:
        candidates = iter(_acceptable_groups(instance))
    for group in candidates:
        report = is_blocking(instance, m, group, partners)
        if report is not None:
            return report
    return None


def is_stable(instance: Instance, m: Matching) -> bool:
    return find_blocking(instance, m) is None


def _structural(instance: Instance, m: Matching) -> list[str]:
    from .core import matching_violations

    return matching_violations(instance, m)


def _acceptable_groups(instance: Instance) -> list[Group]:
    """All groups acceptable to every member, in lexicographic order."""
    groups = set()
    for a in range(instance.n):
        for t in instance.acceptable_sets(a):
            groups.add(tupleset(t + (a,)))
    return sorted(
        g
        for g in groups
        if all(
            instance.acceptable(a, tupleset(x for x in g if x != a)) for a in g
        )
    )


def _complete_matchings(n: int, d: int) -> Iterator[Matching]:
    """All matchings with exactly n // d groups (agents sorted within and
    between groups; the first free agent anchors each new group)."""

    def rec(free: tuple[int, ...], acc: list) -> Iterator[Matching]:
        if len(free) < d:
            yield tuple(acc)
            return
        head, rest = free[0], free[1:]
        for others in combinations(rest, d - 1):
            group = (head,) + others
            remaining = tuple(x for x in rest if x not in others)
            acc.append(group)
            yield from rec(remaining, acc)
            acc.pop()

    yield from rec(tuple(range(n)), [])


def _incomplete_matchings(instance: Instance) -> Iterator[Matching]:
    groups = _acceptable_groups(instance)
    by_min = {}
    for g in groups:
        by_min.setdefault(g[0], []).append(g)

    n = instance.n

    def rec(a: int, used: set, acc: list) -> Iterator[Matching]:
        if a == n:
            yield normalize_matching(acc)
            return
        if a in used:
            yield from rec(a + 1, used, acc)
            return
        yield from rec(a + 1, used, acc)  # leave a unmatched
        for g in by_min.get(a, ()):
            if used.isdisjoint(g):
                used.update(g)
                acc.append(g)
                yield from rec(a + 1, used, acc)
                acc.pop()
                used.difference_update(g)

    yield from rec(0, set(), [])


def enumerate_stable(instance: Instance, max_n: int = 12) -> list[Matching]:
    """All stable matchings, sorted; exponential, guarded by max_n.

    With complete preferences any matching leaving d or more agents
    unmatched is blocked by them, so only maximal matchings are scanned.
    """
    if instance.n > max_n:
        raise TooLarge(f"n={instance.n} exceeds the enumeration guard {max_n}")
    if instance.is_complete:
        candidates: Iterator[Matching] = _complete_matchings(instance.n, instance.d)
    else:
        candidates = _incomplete_matchings(instance)
    stable = []
    for m in candidates:
        if find_blocking(instance, m) is None:
            stable.append(m)
    return sorted(set(stable))


def brute_force_solve(instance: Instance, max_n: int = 12) -> Optional[Matching]:
    """Lexicographically least stable matching, or None."""
    result = enumerate_stable(instance, max_n)
    return result[0] if result else None
