"""Strict partial orders over agents and the parameters computed from them.

Agents are dense 0-based integer indices.  A poset is stored either as a
ranking (total orders, cheap even for millions of agents) or as transitively
closed successor sets (general posets built from comparison pairs).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CycleDetected, DuplicateContradiction, ValidationError


class Poset:
    """A strict partial order over agents 0..n-1, transitively closed."""

    __slots__ = ("n", "source_pairs", "_rank", "_gt", "_lt")

    def __init__(self, n, rank=None, gt=None, lt=None, source_pairs=()):
        self.n = n
        self.source_pairs = tuple(source_pairs)
        self._rank = rank
        self._gt = gt
        self._lt = lt

    @classmethod
    def from_ranking(cls, ranking: Sequence[int]) -> "Poset":
        """Total order given as a ranking: ranking[0] is the best agent."""
        n = len(ranking)
        if sorted(ranking) != list(range(n)):
            raise ValidationError("ranking must be a permutation of 0..n-1")
        rank = [0] * n
        for pos, v in enumerate(ranking):
            rank[v] = pos
        return cls(n, rank=rank)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], n: int) -> "Poset":
        return validate_poset(pairs, n)

    @property
    def is_ranking(self) -> bool:
        return self._rank is not None

    def greater(self, u: int, v: int) -> bool:
        """True iff u > v (u strictly better than v)."""
        if u == v:
            return False
        if self._rank is not None:
            return self._rank[u] < self._rank[v]
        return v in self._gt[u]

    def geq(self, u: int, v: int) -> bool:
        return u == v or self.greater(u, v)

    def incomparable(self, u: int, v: int) -> bool:
        return u != v and not self.greater(u, v) and not self.greater(v, u)

    def kappa_of(self, v: int) -> int:
        """Number of agents incomparable with v."""
        if self._rank is not None:
            return 0
        return self.n - 1 - len(self._gt[v]) - len(self._lt[v])

    def kappa(self) -> int:
        """Maximum over agents of the incomparable-agent count."""
        if self.n <= 1 or self._rank is not None:
            return 0
        return max(self.kappa_of(v) for v in range(self.n))

    def is_total(self) -> bool:
        return self.kappa() == 0

    def width(self) -> int:
        """Size of a maximum antichain (= minimum chain cover)."""
        if self.n == 0:
            return 0
        if self._rank is not None:
            return 1
        adj = [sorted(self._gt[u]) for u in range(self.n)]
        matched = maximum_bipartite_matching(adj, self.n)
        return self.n - matched

    def successors(self, v: int):
        """All agents strictly below v."""
        if self._rank is not None:
            r = self._rank
            return [u for u in range(self.n) if r[u] > r[v]]
        return sorted(self._gt[v])


def validate_poset(pairs: Iterable[tuple[int, int]], n: int) -> Poset:
    """Build the transitive closure of the given strict pairs.

    Rejects directly contradictory pairs and any cycle the closure implies.
    """
    direct = [set() for _ in range(n)]
    seen = set()
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"pair ({u}, {v}) out of range for n={n}")
        if u == v:
            raise CycleDetected(f"reflexive pair ({u}, {u})")
        if (v, u) in seen:
            raise DuplicateContradiction(f"both ({u},{v}) and ({v},{u}) supplied")
        seen.add((u, v))
        direct[u].add(v)

    gt = [set() for _ in range(n)]
    for start in range(n):
        stack = list(direct[start])
        reach = gt[start]
        while stack:
            v = stack.pop()
            if v in reach:
                continue
            reach.add(v)
            stack.extend(direct[v])
        if start in reach:
            raise CycleDetected(f"pairs imply a cycle through agent {start}")

    lt = [set() for _ in range(n)]
    for u in range(n):
        for v in gt[u]:
            lt[v].add(u)
    return Poset(n, gt=gt, lt=lt, source_pairs=sorted(seen))


@dataclass(frozen=True)
class LpoOrder:
    """An agent order where no later agent beats an earlier one, and agents
    more than 2*kappa positions apart are strictly ordered."""

    order: tuple[int, ...]
    position: tuple[int, ...]
    kappa: int

    def __len__(self) -> int:
        return len(self.order)


def lpo_order(poset: Poset) -> LpoOrder:
    """Greedy extraction of an order satisfying the two locality conditions.

    At each step the smallest-index agent not strictly below any remaining
    agent is extracted; such an agent always exists in a poset.
    """
    n = poset.n
    if poset.is_ranking:
        order = sorted(range(n), key=lambda v: poset._rank[v])
        pos = [0] * n
        for p, v in enumerate(order):
            pos[v] = p
        return LpoOrder(tuple(order), tuple(pos), 0)

    indeg = [len(poset._lt[v]) for v in range(n)]
    import heapq

    ready = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in poset._gt[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) != n:
        raise ValidationError("poset relation is not acyclic")  # unreachable
    pos = [0] * n
    for p, v in enumerate(order):
        pos[v] = p
    return LpoOrder(tuple(order), tuple(pos), poset.kappa())


def verify_lpo(order: Sequence[int], poset: Poset) -> bool:
    """Exhaustively check both locality conditions in O(n^2)."""
    n = poset.n
    if sorted(order) != list(range(n)):
        return False
    kappa = poset.kappa()
    for i in range(n):
        for j in range(i + 1, n):
            if poset.greater(order[j], order[i]):
                return False
            if j > i + 2 * kappa and not poset.greater(order[i], order[j]):
                return False
    return True


def maximum_bipartite_matching(adj: Sequence[Sequence[int]], n_right: int) -> int:
    """Size of a maximum matching, augmenting-path (Kuhn's) algorithm.

    adj[u] lists the right-side vertices available to left vertex u.
    """
    match_right = [-1] * n_right

    def try_augment(u: int, visited: list[bool]) -> bool:
        for v in adj[u]:
            if not visited[v]:
                visited[v] = True
                if match_right[v] == -1 or try_augment(match_right[v], visited):
                    match_right[v] = u
                    return True
        return False

    size = 0
    for u in range(len(adj)):
        if try_augment(u, [False] * n_right):
            size += 1
    return size
