"""Irreducibility levels, the standard optimal labeling, and reduction trees.

A class F is l-irreducible when every K-ary domain-labeled tree of depth
between 1 and l has a leaf v with sfat2(F|a(v)) = sfat2(F).  The equivalent
recursive form is used for computation: F is l-irreducible iff l = 0, or F is
empty, or for every point x some label k has sfat2(F|(x,k)) = sfat2(F) with
F|(x,k) being (l-1)-irreducible.
"""

from __future__ import annotations

import math

from .classes import DiscreteClass, DomainError
from .dimensions import sfat2
from .trees import KTree, TreeError, augmented_root, full_node, validate_kary

INFINITE = math.inf

_IRRED_CACHE: dict = {}
_SOA_CACHE: dict = {}
_SOA_TOTAL_CACHE: dict = {}


def clear_caches() -> None:
    _IRRED_CACHE.clear()
    _SOA_CACHE.clear()
    _SOA_TOTAL_CACHE.clear()


def is_l_irreducible(F: DiscreteClass, l: int) -> bool:
    if l < 0:
        raise DomainError(f"irreducibility level {l} must be nonnegative")
    if l == 0 or F.is_empty:
        return True
    d = sfat2(F)
    if d == 0:
        # No tree can preserve a positive dimension that is not there; every
        # restriction of a nonempty sfat2=0 class along its own values stays
        # nonempty, so some leaf always keeps sfat2 = 0.
        return True
    key = (F.key(), l)
    cached = _IRRED_CACHE.get(key)
    if cached is not None:
        return cached
    result = True
    for i in range(F.domain.size):
        found = False
        for k in range(1, F.K + 1):
            sub = F.restrict([(i, k)])
            if not sub.is_empty and sfat2(sub) == d and is_l_irreducible(sub, l - 1):
                found = True
                break
        if not found:
            result = False
            break
    _IRRED_CACHE[key] = result
    return result


def irreducibility_level(F: DiscreteClass, cap: "int | None" = None):
    """Largest l with F l-irreducible, or INFINITE.

    Classes with sfat2 <= 0 are l-irreducible for every l.  With the default
    cap (the number of hypotheses) the returned level is exact: when sfat2 >= 1
    each extra level forces the property through a strictly smaller subclass of
    equal dimension, so the level is below |F|.  An explicit smaller cap
    truncates: the result is then min(level, cap).
    """
    d = sfat2(F)
    if d <= 0:
        return INFINITE
    if cap is None:
        cap = len(F.hyps)
    if cap < 0:
        raise DomainError(f"cap {cap} must be nonnegative")
    level = 0
    while level < cap and is_l_irreducible(F, level + 1):
        level += 1
    return level


def soa(G: DiscreteClass) -> tuple:
    """Standard optimal labeling of a nonempty 1-irreducible class.

    At each point, the label whose restriction preserves sfat2; of two adjacent
    candidates the one with the higher irreducibility level wins, then the
    smaller label.
    """
    if G.is_empty:
        raise DomainError("soa requires a nonempty class")
    cached = _SOA_CACHE.get(G.key())
    if cached is not None:
        return cached
    if not is_l_irreducible(G, 1):
        raise DomainError("soa requires a 1-irreducible class")
    d = sfat2(G)
    out = []
    for i in range(G.domain.size):
        maximizers = [k for k in range(1, G.K + 1)
                      if not (sub := G.restrict([(i, k)])).is_empty and sfat2(sub) == d]
        if len(maximizers) == 1:
            out.append(maximizers[0])
        else:
            k1, k2 = maximizers[0], maximizers[1]
            lv1 = irreducibility_level(G.restrict([(i, k1)]))
            lv2 = irreducibility_level(G.restrict([(i, k2)]))
            out.append(k2 if lv2 > lv1 else k1)
    result = tuple(out)
    _SOA_CACHE[G.key()] = result
    return result


def soa_partial(G: DiscreteClass) -> tuple:
    """Per-point labeling defined on every nonempty class, with None at points
    where no label preserves sfat2.

    Where defined it follows the same rule as soa (preserving label, ties by
    irreducibility level then smaller label); on 1-irreducible classes it is
    total and equals soa.  A None entry means the labeling is undefined there,
    which consumers treat as infinitely far from any target label.
    """
    if G.is_empty:
        raise DomainError("labeling requires a nonempty class")
    cached = _SOA_TOTAL_CACHE.get(G.key())
    if cached is not None:
        return cached
    d = sfat2(G)
    out = []
    for i in range(G.domain.size):
        maximizers = [k for k in range(1, G.K + 1)
                      if not (sub := G.restrict([(i, k)])).is_empty and sfat2(sub) == d]
        if not maximizers:
            out.append(None)
        elif len(maximizers) == 1:
            out.append(maximizers[0])
        else:
            best = max(maximizers,
                       key=lambda k: (irreducibility_level(G.restrict([(i, k)])), -k))
            out.append(best)
    result = tuple(out)
    _SOA_TOTAL_CACHE[G.key()] = result
    return result


def reduction_witness_tree(F: DiscreteClass, l: int) -> "KTree | None":
    """K-ary tree of depth <= l whose every leaf strictly reduces sfat2.

    Returns None iff F is l-irreducible (no such tree exists).
    """
    if l < 1:
        raise DomainError(f"witness tree needs level >= 1, got {l}")
    if F.is_empty or is_l_irreducible(F, l):
        return None
    d = sfat2(F)
    for i in range(F.domain.size):
        children = {k: F.restrict([(i, k)]) for k in range(1, F.K + 1)}
        if any(not c.is_empty and sfat2(c) == d and is_l_irreducible(c, l - 1)
               for c in children.values()):
            continue
        tree = full_node(i, F.K)
        for k, c in children.items():
            if not c.is_empty and sfat2(c) == d:
                sub = reduction_witness_tree(c, l - 1)
                assert sub is not None
                tree.attach(sub, (k,))
        return tree
    raise AssertionError("non-irreducible class must have a failing point")


def validate_witness_tree(F: DiscreteClass, tree: KTree, l: int) -> None:
    """Check the witness-tree contract; raises TreeError on violation."""
    validate_kary(tree, F.K)
    if tree.is_leaf:
        raise TreeError("witness tree must have depth >= 1")
    if tree.depth() > l:
        raise TreeError(f"witness tree depth {tree.depth()} exceeds {l}")
    d = sfat2(F)
    for path, _ in tree.leaves():
        sub = F.restrict(tree.ancestor_set(path))
        if sfat2(sub) >= d:
            raise TreeError(f"leaf {path} does not reduce sfat2")


def build_reducing_tree(H: DiscreteClass, x_index: int, y: int, ell_seq,
                        require_reduction: bool = True) -> KTree:
    """Augmented tree rooted by (x,y) whose leaves are empty or suitably
    irreducible with dimension-matched levels from ell_seq.

    ell_seq[t] is the required irreducibility level for leaves v with
    sfat2(H|a(v)) = sfat2(H) - t; it needs sfat2(H)+1 entries.  Leaves failing
    their level get a witness tree attached, strictly reducing sfat2 below
    them, until every leaf complies.
    """
    if H.is_empty:
        raise DomainError("reducing tree requires a nonempty class")
    d = sfat2(H)
    ell_seq = list(ell_seq)
    if len(ell_seq) < d + 1:
        raise DomainError(f"level sequence needs {d + 1} entries, got {len(ell_seq)}")
    if any(l < 1 for l in ell_seq):
        raise DomainError("level sequence entries must be >= 1")
    rooted = H.restrict([(x_index, y)])
    if require_reduction and not sfat2(rooted) < d:
        raise DomainError("rooted pair does not reduce sfat2")
    tree = augmented_root(x_index, y)
    changed = True
    while changed:
        changed = False
        for path, _ in list(tree.leaves()):
            G = H.restrict(tree.ancestor_set(path))
            if G.is_empty:
                continue
            t = d - sfat2(G)
            sub = reduction_witness_tree(G, ell_seq[t])
            if sub is None:
                continue
            tree.attach(sub, path)
            changed = True
    return tree


def validate_reducing_tree(H: DiscreteClass, tree: KTree, ell_seq,
                           require_root_reduction: bool = True) -> None:
    """Check the reducing-tree contract; raises TreeError on violation.

    Conditions per leaf v with t = sfat2(H) - sfat2(H|a(v)):
      - H|a(v) is empty, or ell_seq[t]-irreducible with
        height(v) <= ell_seq[0] + ... + ell_seq[t-1];
      - for each 1 <= u < t some ancestor v' has sfat2(H|a(v')) <= sfat2(H)-u
        and height(v') <= ell_seq[0] + ... + ell_seq[u-1].
    """
    if H.is_empty:
        raise TreeError("reducing tree requires a nonempty class")
    d = sfat2(H)
    validate_kary(tree, H.K, augmented=True)
    if require_root_reduction:
        (label,) = tree.children
        if not sfat2(H.restrict([(tree.point_index, label)])) < d:
            raise TreeError("rooted pair does not reduce sfat2")
    prefix = [0]
    for l in ell_seq:
        prefix.append(prefix[-1] + l)
    for path, _ in tree.leaves():
        sub = H.restrict(tree.ancestor_set(path))
        if sub.is_empty:
            continue
        t = d - sfat2(sub)
        if t >= len(ell_seq):
            raise TreeError(f"level sequence too short for dimension gap {t}")
        if not is_l_irreducible(sub, ell_seq[t]):
            raise TreeError(f"leaf {path} not {ell_seq[t]}-irreducible at dimension gap {t}")
        if len(path) > prefix[t]:
            raise TreeError(f"leaf {path} exceeds height bound {prefix[t]}")
        for u in range(1, t):
            if not any(
                sfat2(H.restrict(tree.ancestor_set(path[:j]))) <= d - u
                for j in range(min(len(path), prefix[u]) + 1)
            ):
                raise TreeError(f"leaf {path} misses the depth-{u} ancestor condition")
