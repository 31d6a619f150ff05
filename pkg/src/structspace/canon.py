"""Canonical orderings and the pair-id encoding used by product constructions.

Every search in the package walks candidates in the orders defined here, so
results are reproducible regardless of set iteration order.
"""

from __future__ import annotations

from itertools import chain, combinations


def set_key(s):
    """Sort key for a set of point ids: its sorted member tuple."""
    return tuple(sorted(s))


def sort_sets(family):
    """Family of sets in canonical (lexicographic member-tuple) order."""
    return sorted(family, key=set_key)


def fmt_set(s):
    return "{" + ",".join(sorted(s)) + "}"


def subsets_decreasing(items):
    """All subsets of `items`, largest first, then lexicographic."""
    items = sorted(items)
    for size in range(len(items), -1, -1):
        yield from combinations(items, size)


def powerset(items):
    items = sorted(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


# -- pair ids ----------------------------------------------------------------
#
# Points, operation names, and property kinds of a product carry both factor
# ids in one string: "(left|right)". Splitting respects nesting, so iterated
# products stay parseable.

def make_pair(left: str, right: str) -> str:
    return f"({left}|{right})"


def split_pair(pair_id: str):
    """Inverse of make_pair; None when the id is not a pair encoding."""
    if len(pair_id) < 3 or pair_id[0] != "(" or pair_id[-1] != ")":
        return None
    depth = 0
    body = pair_id[1:-1]
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                return None
        elif ch == "|" and depth == 0:
            return body[:i], body[i + 1:]
    return None
