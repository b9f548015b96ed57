"""Domain types: instances, preference sources, matchings, and the
preference oracle that compares tuple-sets without materializing lists."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    SelfInclusion,
    SizeMismatch,
    TooLarge,
    UnacceptableSet,
    ValidationError,
)
from .poset import LpoOrder, Poset, lpo_order, maximum_bipartite_matching

# A tuple-set is a sorted tuple of distinct agent indices of size d-1;
# a group is a sorted tuple of size d; a matching is a sorted tuple of groups.
TupleSet = tuple[int, ...]
Group = tuple[int, ...]
Matching = tuple[Group, ...]

EXPLICIT_LIST_LIMIT = 10**6

CANONICAL = "canonical"


def tupleset(agents: Iterable[int]) -> TupleSet:
    t = tuple(sorted(agents))
    if len(set(t)) != len(t):
        raise ValidationError(f"duplicate agents in tuple-set {t}")
    return t


def normalize_matching(groups: Iterable[Iterable[int]]) -> Matching:
    return tuple(sorted(tuple(sorted(g)) for g in groups))


@dataclass(frozen=True)
class Explicit:
    """Per-agent strict lists of tuple-sets; incomplete lists define X_a."""

    lists: tuple[tuple[TupleSet, ...], ...]


@dataclass(frozen=True)
class MasterListSets:
    """One global strict ranking of every (d-1)-subset of the agents."""

    order: tuple[TupleSet, ...]


@dataclass(frozen=True)
class MasterPoset:
    """A poset of agents; each agent's list is a completion respecting
    dominance.  completion=None selects the canonical position-vector order."""

    poset: Poset
    completion: Optional[tuple[tuple[TupleSet, ...], ...]] = None


PreferenceSource = Explicit | MasterListSets | MasterPoset


def dominates(poset: Poset, t: TupleSet, tp: TupleSet) -> bool:
    """True iff some bijection maps every member of t onto a weakly worse
    member of tp, and t != tp.  Decided by bipartite matching; greedy
    pairing is wrong for genuine posets."""
    if len(t) != len(tp):
        raise SizeMismatch(f"{t} vs {tp}")
    if t == tp:
        return False
    k = len(t)
    adj = []
    for a in t:
        row = [j for j, b in enumerate(tp) if a == b or poset.greater(a, b)]
        if not row:
            return False
        adj.append(row)
    return maximum_bipartite_matching(adj, k) == k


def canonical_rank(poset: Poset, lpo: LpoOrder, t: TupleSet) -> tuple[int, ...]:
    """Sorted vector of lpo positions; lexicographically smaller = preferred."""
    return tuple(sorted(lpo.position[a] for a in t))


class Instance:
    """An agent set with dimension d and a preference source.

    acceptability is None for complete preferences, else one frozenset of
    acceptable tuple-sets per agent.
    """

    def __init__(self, d, names, source, acceptability=None):
        self.d = d
        self.names = list(names)
        self.source = source
        self.acceptability = acceptability
        self._index = {name: i for i, name in enumerate(self.names)}
        self._lpo: Optional[LpoOrder] = None
        self._rank_maps: dict[int, dict] = {}
        self._master_rank: Optional[dict] = None
        self._validate()

    # -- construction -----------------------------------------------------

    @classmethod
    def explicit(
        cls,
        d: int,
        names: Sequence[str],
        lists: Mapping[str, Sequence[Iterable[str]]],
    ) -> "Instance":
        """Build from per-agent lists of (d-1)-sets of agent names.

        Lists covering every (d-1)-subset give complete preferences;
        shorter lists define the agent's acceptable sets."""
        index = {name: i for i, name in enumerate(names)}
        n = len(names)
        per_agent = []
        for name in names:
            entries = [tupleset(index[x] for x in entry) for entry in lists.get(name, ())]
            per_agent.append(tuple(entries))
        complete = all(len(lst) == comb(n - 1, d - 1) for lst in per_agent)
        acceptability = None if complete else tuple(frozenset(lst) for lst in per_agent)
        return cls(d, names, Explicit(tuple(per_agent)), acceptability)

    @classmethod
    def master_list(cls, d: int, names: Sequence[str], master: Sequence[Iterable[str]]) -> "Instance":
        index = {name: i for i, name in enumerate(names)}
        order = tuple(tupleset(index[x] for x in entry) for entry in master)
        return cls(d, names, MasterListSets(order))

    @classmethod
    def master_poset(
        cls,
        d: int,
        names: Sequence[str],
        poset: Poset,
        completion: Optional[Mapping[str, Sequence[Iterable[str]]]] = None,
        acceptability: Optional[Mapping[str, Sequence[Iterable[str]]]] = None,
    ) -> "Instance":
        index = {name: i for i, name in enumerate(names)}
        comp = None
        if completion is not None:
            comp = tuple(
                tuple(tupleset(index[x] for x in entry) for entry in completion.get(name, ()))
                for name in names
            )
        acc = None
        if acceptability is not None:
            acc = tuple(
                frozenset(tupleset(index[x] for x in entry) for entry in acceptability.get(name, ()))
                for name in names
            )
        return cls(d, names, MasterPoset(poset, comp), acc)

    # -- basic accessors --------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def agents(self, *names: str) -> TupleSet:
        return tupleset(self._index[x] for x in names)

    def group_names(self, group: Iterable[int]) -> list[str]:
        return [self.names[a] for a in sorted(group)]

    @property
    def is_complete(self) -> bool:
        return self.acceptability is None

    def acceptable(self, a: int, t: TupleSet) -> bool:
        if self.acceptability is None:
            return a not in t
        return t in self.acceptability[a]

    def acceptable_sets(self, a: int) -> frozenset:
        if self.acceptability is None:
            raise ValidationError("complete instance has no explicit X_a")
        return self.acceptability[a]

    def lpo(self) -> LpoOrder:
        if not isinstance(self.source, MasterPoset):
            raise ValidationError("lpo order is only defined for poset sources")
        if self._lpo is None:
            self._lpo = lpo_order(self.source.poset)
        return self._lpo

    # -- validation -------------------------------------------------------

    def _validate(self) -> None:
        n, d = self.n, self.d
        if d < 2:
            raise ValidationError("group size d must be at least 2")
        if d > n:
            raise ValidationError(f"d={d} exceeds agent count n={n}")
        if len(self._index) != n:
            raise ValidationError("agent names must be unique")
        src = self.source
        if isinstance(src, Explicit):
            self._validate_explicit(src)
        elif isinstance(src, MasterListSets):
            self._validate_master_list(src)
        elif isinstance(src, MasterPoset):
            self._validate_master_poset(src)
        else:
            raise ValidationError(f"unknown source {src!r}")
        if self.acceptability is not None:
            for a, sets in enumerate(self.acceptability):
                for t in sets:
                    if a in t:
                        raise SelfInclusion(f"agent {self.names[a]} in own acceptable set")
                    if len(t) != d - 1:
                        raise ValidationError(f"acceptable set {t} has wrong size")
            if isinstance(src, MasterPoset) and src.completion is None:
                if not src.poset.is_total():
                    raise ValidationError(
                        "acceptability with a canonical poset source requires "
                        "a strict order"
                    )

    def _validate_explicit(self, src: Explicit) -> None:
        n, d = self.n, self.d
        if len(src.lists) != n:
            raise ValidationError("one preference list per agent required")
        for a, lst in enumerate(src.lists):
            if len(lst) > EXPLICIT_LIST_LIMIT:
                raise TooLarge("explicit list exceeds the materialization limit")
            seen = set()
            for t in lst:
                if len(t) != d - 1:
                    raise ValidationError(f"entry {t} has size {len(t)}, want {d - 1}")
                if a in t:
                    raise SelfInclusion(f"agent {self.names[a]} lists itself")
                if t in seen:
                    raise ValidationError(f"duplicate entry {t} for {self.names[a]}")
                seen.add(t)

    def _validate_master_list(self, src: MasterListSets) -> None:
        n, d = self.n, self.d
        expected = comb(n, d - 1)
        if len(src.order) != expected:
            raise ValidationError(
                f"master list has {len(src.order)} entries, want {expected}"
            )
        if len(set(src.order)) != len(src.order):
            raise ValidationError("master list contains duplicates")
        for t in src.order:
            if len(t) != d - 1 or any(not 0 <= a < n for a in t):
                raise ValidationError(f"bad master list entry {t}")

    def _validate_master_poset(self, src: MasterPoset) -> None:
        if src.poset.n != self.n:
            raise ValidationError("poset size differs from agent count")
        if src.completion is not None:
            inst = Instance(
                self.d, self.names, Explicit(src.completion), self.acceptability
            )
            if not is_derived_from_poset(inst, src.poset):
                raise ValidationError("completion is not derived from the poset")

    # -- the preference oracle --------------------------------------------

    def _explicit_rank(self, a: int, lists) -> dict:
        rank = self._rank_maps.get(a)
        if rank is None:
            rank = {t: i for i, t in enumerate(lists[a])}
            self._rank_maps[a] = rank
        return rank

    def rank_key(self, a: int, t: TupleSet):
        """A sortable key; smaller = preferred by agent a."""
        src = self.source
        if isinstance(src, Explicit):
            rank = self._explicit_rank(a, src.lists)
            try:
                return rank[t]
            except KeyError:
                raise UnacceptableSet(f"{t} not in list of {self.names[a]}") from None
        if isinstance(src, MasterListSets):
            if self._master_rank is None:
                self._master_rank = {t: i for i, t in enumerate(src.order)}
            return self._master_rank[t]
        if src.completion is not None:
            rank = self._explicit_rank(a, src.completion)
            try:
                return rank[t]
            except KeyError:
                raise UnacceptableSet(f"{t} not in list of {self.names[a]}") from None
        return canonical_rank(src.poset, self.lpo(), t)

    def prefers(self, a: int, t: TupleSet, tp: TupleSet) -> bool:
        """True iff agent a strictly prefers t to tp."""
        if t == tp:
            raise ValidationError("prefers requires two different tuple-sets")
        if a in t or a in tp:
            raise SelfInclusion(f"agent {self.names[a]} occurs in a compared set")
        if self.acceptability is not None:
            if t not in self.acceptability[a]:
                raise UnacceptableSet(f"{t} unacceptable to {self.names[a]}")
            if tp not in self.acceptability[a]:
                raise UnacceptableSet(f"{tp} unacceptable to {self.names[a]}")
        return self.rank_key(a, t) < self.rank_key(a, tp)

    def first_choice(self, a: int, excluded: Iterable[int] = ()) -> TupleSet:
        """The best tuple-set for a avoiding the excluded agents, computed
        without enumerating lists for canonical poset sources."""
        from .errors import InsufficientAgents

        excluded = set(excluded)
        excluded.add(a)
        src = self.source
        if isinstance(src, MasterPoset) and src.completion is None and self.acceptability is None:
            pos = self.lpo().position
            remaining = [v for v in range(self.n) if v not in excluded]
            if len(remaining) < self.d - 1:
                raise InsufficientAgents(
                    f"only {len(remaining)} agents available for {self.names[a]}"
                )
            best = sorted(remaining, key=lambda v: pos[v])[: self.d - 1]
            return tupleset(best)
        for t in self._iter_list(a):
            if not excluded.intersection(t):
                return t
        raise InsufficientAgents(f"no admissible tuple-set for {self.names[a]}")

    def _iter_list(self, a: int):
        """Agent a's list in preference order (materializes for canonical
        poset sources only when acceptability restricts it)."""
        src = self.source
        if isinstance(src, Explicit):
            yield from src.lists[a]
        elif isinstance(src, MasterListSets):
            for t in src.order:
                if a not in t:
                    yield t
        elif src.completion is not None:
            yield from src.completion[a]
        else:
            sets = self.acceptability[a] if self.acceptability is not None else None
            if sets is None:
                raise ValidationError("canonical complete lists are not materialized")
            yield from sorted(sets, key=lambda t: self.rank_key(a, t))


# -- derivation checks ----------------------------------------------------


def _agent_lists(instance: Instance):
    src = instance.source
    if isinstance(src, Explicit):
        return src.lists
    if isinstance(src, MasterPoset) and src.completion is not None:
        return src.completion
    return None


def is_derived_from_master_list(
    instance: Instance,
    master: Optional[Sequence[TupleSet]] = None,
    agents: Optional[Iterable[int]] = None,
) -> bool:
    """True iff each agent's list equals the master list with the sets
    containing the agent deleted."""
    if master is None:
        if isinstance(instance.source, MasterListSets):
            return True
        raise ValidationError("a candidate master list is required")
    lists = _agent_lists(instance)
    if lists is None:
        raise ValidationError("explicit per-agent lists are required")
    master = [tuple(t) for t in master]
    check = range(instance.n) if agents is None else agents
    for a in check:
        expected = tuple(t for t in master if a not in t)
        if lists[a] != expected:
            return False
    return True


def is_derived_from_poset(instance: Instance, poset: Poset) -> bool:
    """True iff no agent ranks a dominated tuple-set above its dominator."""
    lists = _agent_lists(instance)
    if lists is None:
        # Oracle sources are derived by construction.
        return True
    for lst in lists:
        for i, t in enumerate(lst):
            for tp in lst[i + 1 :]:
                if dominates(poset, tp, t):
                    return False
    return True


# -- matchings ------------------------------------------------------------


def matching_violations(instance: Instance, m: Matching) -> list[str]:
    problems = []
    seen = set()
    for g in m:
        if len(g) != instance.d or len(set(g)) != instance.d:
            problems.append(f"group {g} is not a {instance.d}-set")
            continue
        if any(not 0 <= a < instance.n for a in g):
            problems.append(f"group {g} references unknown agents")
            continue
        overlap = seen.intersection(g)
        if overlap:
            problems.append(f"agents {sorted(overlap)} appear in multiple groups")
        seen.update(g)
        if instance.acceptability is not None:
            for a in g:
                rest = tupleset(x for x in g if x != a)
                if rest not in instance.acceptability[a]:
                    problems.append(
                        f"group {g} unacceptable to {instance.names[a]}"
                    )
    return problems


def validate_matching(instance: Instance, m: Matching) -> bool:
    return not matching_violations(instance, m)


def materialize_explicit(instance: Instance, limit: int = 10**5) -> Instance:
    """An equivalent instance with explicit per-agent lists."""
    from itertools import combinations

    n, d = instance.n, instance.d
    if comb(n - 1, d - 1) > limit:
        raise TooLarge("instance too large to materialize explicit lists")
    lists = {}
    for a in range(n):
        if instance.acceptability is not None:
            sets = list(instance.acceptability[a])
        else:
            sets = [
                t
                for t in combinations(range(n), d - 1)
                if a not in t
            ]
        sets.sort(key=lambda t: instance.rank_key(a, t))
        lists[instance.names[a]] = [instance.group_names(t) for t in sets]
    return Instance.explicit(d, instance.names, lists)
