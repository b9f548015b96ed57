"""Shared fixtures and random generators for the test suite."""

import itertools
import random

from mdsr import Instance, Poset
from mdsr.core import dominates, tupleset

# Six-agent instance where d, e, f share a master list but a, b, c deviate;
# {{a,b,c},{d,e,f}} is blocked by {a,b,d} while {{a,b,d},{c,e,f}} is stable.
INTRO_LISTS = {
    "a": ["bd", "bc", "be", "bf", "cd", "ce", "cf", "de", "df", "ef"],
    "b": ["ad", "ac", "ae", "af", "cd", "ce", "cf", "de", "df", "ef"],
    "c": ["ab", "ad", "ae", "bd", "af", "be", "bf", "de", "df", "ef"],
    "d": ["ab", "ac", "ae", "af", "bc", "be", "bf", "ce", "cf", "ef"],
    "e": ["ab", "ac", "ad", "af", "bc", "bd", "bf", "cd", "cf", "df"],
    "f": ["ab", "ac", "ad", "ae", "bc", "bd", "be", "cd", "ce", "de"],
}

# The master list d, e, and f follow (a, b, c do not).
INTRO_MASTER = [
    "ab", "ac", "ad", "ae", "af", "bc", "bd", "be", "bf",
    "cd", "ce", "cf", "de", "df", "ef",
]


def intro_instance() -> Instance:
    lists = {a: [list(p) for p in lst] for a, lst in INTRO_LISTS.items()}
    return Instance.explicit(3, list("abcdef"), lists)


# Five-agent instance at deletion distance 1 from a strict order: deleting
# a5 leaves lists derived from a1 > a2 > a3 > a4, and no other single
# deletion (or none) works.
DELETION_LISTS = {
    "a1": ["23", "24", "25", "34", "35", "45"],
    "a2": ["13", "14", "15", "34", "35", "45"],
    "a3": ["12", "14", "25", "24", "15", "45"],
    "a4": ["15", "12", "25", "13", "35", "23"],
    "a5": ["23", "34", "12", "24", "13", "14"],
}


def deletion_example_instance() -> Instance:
    names = [f"a{i}" for i in range(1, 6)]
    lists = {
        a: [[f"a{x}" for x in p] for p in lst]
        for a, lst in DELETION_LISTS.items()
    }
    return Instance.explicit(3, names, lists)


# A poset-derived six-agent instance (explicit completion, kappa = 3) with
# no stable matching, found by seeded random search against brute force.
NOSTABLE_PAIRS = [(0, 1), (0, 4), (1, 4), (3, 2), (4, 2), (5, 2), (5, 3)]
NOSTABLE_MASTER = [
    (0, 1), (3, 5), (0, 4), (0, 5), (1, 4), (1, 5), (0, 3), (0, 2),
    (4, 5), (2, 5), (1, 3), (3, 4), (1, 2), (2, 3), (2, 4),
]


def nostable_poset_instance() -> Instance:
    names = [f"a{i}" for i in range(6)]
    poset = Poset.from_pairs(NOSTABLE_PAIRS, 6)
    completion = {
        names[a]: [[names[x] for x in t] for t in NOSTABLE_MASTER if a not in t]
        for a in range(6)
    }
    return Instance.master_poset(3, names, poset, completion)


def chain_instance(n: int, d: int) -> Instance:
    return Instance.master_poset(
        d, [f"a{i}" for i in range(n)], Poset.from_ranking(list(range(n)))
    )


def random_poset(rng: random.Random, n: int, p: float = 0.5) -> Poset:
    """Random DAG closed transitively: edges follow a random permutation."""
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [
        (perm[i], perm[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Poset.from_pairs(pairs, n)


def random_derived_master(poset: Poset, n: int, d: int, rng: random.Random):
    """A random linear extension of set dominance: a master order of all
    (d-1)-sets every completion of which respects the poset."""
    sets = [tupleset(c) for c in itertools.combinations(range(n), d - 1)]
    above = {t: set() for t in sets}
    for t, u in itertools.permutations(sets, 2):
        if dominates(poset, t, u):
            above[u].add(t)
    order = []
    remaining = set(sets)
    while remaining:
        ready = sorted(t for t in remaining if not (above[t] & remaining))
        t = rng.choice(ready)
        order.append(t)
        remaining.discard(t)
    return order


def random_completion_instance(
    rng: random.Random, n: int, d: int, poset: Poset
) -> Instance:
    names = [f"a{i}" for i in range(n)]
    master = random_derived_master(poset, n, d, rng)
    completion = {
        names[a]: [[names[x] for x in t] for t in master if a not in t]
        for a in range(n)
    }
    return Instance.master_poset(d, names, poset, completion)


def group_spans_ok(instance: Instance, matching, bound: int) -> bool:
    """Every consecutive-position gap within each group is at most bound."""
    pos = instance.lpo().position
    for g in matching:
        ps = sorted(pos[a] for a in g)
        if any(b - a > bound for a, b in zip(ps, ps[1:])):
            return False
    return True


def brute_force_width(poset: Poset) -> int:
    """Maximum antichain by subset enumeration; exponential."""
    best = 0
    for r in range(1, poset.n + 1):
        for sub in itertools.combinations(range(poset.n), r):
            if all(
                poset.incomparable(u, v)
                for u, v in itertools.combinations(sub, 2)
            ):
                best = max(best, r)
    return best
