"""Representative filtering of irreducible subclasses and the stability filter.

filter_step assigns every sufficiently irreducible finite restriction subclass
a representative whose per-point labeling is sup-close to its own, keeping the
set of distinct representatives per dimension small.  soa_filter uses those
representatives plus reducing trees to turn a hypothesis that is merely close
to the labeling of a stable subclass into a small set of classes guaranteed to
contain one that depends only on that subclass.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .classes import (DiscreteClass, DomainError, canonical_restriction,
                      enumerate_restriction_subclasses, sup_distance)
from .dimensions import sfat2
from .irreducibility import build_reducing_tree, is_l_irreducible, soa, soa_partial


def _point_gap(label: "int | None", target: int) -> float:
    """Distance from a possibly-undefined labeling entry to a target label."""
    return float("inf") if label is None else abs(label - target)


@dataclass(frozen=True)
class LadderSchedule:
    """Level ladder ell(r,t) = ell_bar*(r+2)^t with the filter parameters."""

    ell_bar: int
    r_max: int
    tau_max: int
    chi: int

    def __post_init__(self):
        if self.ell_bar < 1:
            raise DomainError("ell_bar must be >= 1")
        if self.chi < 1:
            raise DomainError("chi must be >= 1")

    def ell(self, r: int, t: int) -> int:
        return self.ell_bar * (r + 2) ** t

    def key(self) -> tuple:
        return (self.ell_bar, self.r_max, self.tau_max, self.chi)


@dataclass
class FilteredSets:
    levels: dict          # sfat2 value b -> tuple of classes, insertion order
    rep: dict             # class hyps -> representative class

    def representative(self, H: DiscreteClass) -> DiscreteClass:
        return self.rep[H.hyps]


@dataclass
class RepSet:
    members: tuple        # classes, canonical order


_SUBCLASS_CACHE: dict = {}
_FILTER_CACHE: dict = {}
_SOAFILTER_CACHE: dict = {}


def clear_caches() -> None:
    _SUBCLASS_CACHE.clear()
    _FILTER_CACHE.clear()
    _SOAFILTER_CACHE.clear()


def _subclasses(F: DiscreteClass) -> list:
    got = _SUBCLASS_CACHE.get(F.key())
    if got is None:
        got = enumerate_restriction_subclasses(F)
        _SUBCLASS_CACHE[F.key()] = got
    return got


def irreducible_subclasses(F: DiscreteClass, l: int, b: int) -> list:
    """Finite restriction subclasses of F with sfat2 = b that are
    l-irreducible, in canonical order."""
    return [H for H in _subclasses(F) if sfat2(H) == b and is_l_irreducible(H, l)]


def _agreement_restriction(F: DiscreteClass, L: DiscreteClass, H: DiscreteClass,
                           max_size: int, b: int):
    """Smallest set of (point, label) pairs on which soa(L) and soa(H) agree
    with that common label, whose restriction of F has sfat2 = b; None if no
    set of size <= max_size works."""
    soa_l, soa_h = soa(L), soa(H)
    agree = [(i, soa_h[i]) for i in range(F.domain.size) if soa_h[i] == soa_l[i]]
    for size in range(0, min(max_size, len(agree)) + 1):
        for combo in itertools.combinations(agree, size):
            if sfat2(F.restrict(combo)) == b:
                return combo
    return None


def filter_step(F: DiscreteClass, schedule, r_max: int) -> FilteredSets:
    cache_key = (F.key(), getattr(schedule, "key", lambda: id(schedule))(), r_max)
    cached = _FILTER_CACHE.get(cache_key)
    if cached is not None:
        return cached
    d = sfat2(F)
    if d < 0:
        raise DomainError("filter_step requires a nonempty class")
    levels = {b: [] for b in range(d + 1)}
    rep: dict = {}
    for t in range(d + 1):
        b = d - t
        members = {r: irreducible_subclasses(F, schedule.ell(r, t), b)
                   for r in range(r_max + 1)}
        members[r_max + 1] = []
        for r in range(r_max, -1, -1):
            upper = {H.hyps for H in members[r + 1]}
            for H in members[r]:
                if H.hyps in upper or H.hyps in rep:
                    continue
                found = None
                for L in sorted(levels[b], key=lambda G: (-len(G.hyps), G.hyps)):
                    if _agreement_restriction(F, L, H, schedule.ell(r, t) - 1, b) is not None:
                        found = L
                        break
                if found is not None:
                    rep[H.hyps] = found
                else:
                    levels[b].append(H)
                    rep[H.hyps] = H
    out = FilteredSets({b: tuple(v) for b, v in levels.items()}, rep)
    _FILTER_CACHE[cache_key] = out
    return out


def soa_filter(F: DiscreteClass, g_hat: tuple, schedule, trace=None) -> RepSet:
    """trace, if given, is a list that receives (j, s, a) for every restriction
    set queued at stage s of pass j; tracing bypasses the result cache."""
    d = sfat2(F)
    if d < 0:
        raise DomainError("soa_filter requires a nonempty class")
    if schedule.r_max % (d + 1) != 0 or schedule.tau_max % (d + 1) != 0:
        raise DomainError("r_max and tau_max must be multiples of d+1")
    cache_key = (F.key(), schedule.key(), tuple(g_hat))
    cached = _SOAFILTER_CACHE.get(cache_key)
    if cached is not None and trace is None:
        return cached
    r0 = schedule.r_max // (d + 1)
    tau0 = schedule.tau_max // (d + 1)
    filtered = filter_step(F, schedule, schedule.r_max)
    result: dict = {}
    for j in range(d + 1):
        r = schedule.r_max - j * r0 - 1
        tau = j * tau0 + 2 + schedule.chi
        queue = [canonical_restriction(())]
        for s in range(d + 1):
            if trace is not None:
                trace.extend((j, s, a) for a in queue)
            next_queue: dict = {}
            for a in queue:
                H = F.restrict(a)
                if H.is_empty:
                    continue
                soa_h = soa_partial(H)
                t = d - sfat2(H)
                gaps = [_point_gap(soa_h[i], g_hat[i]) for i in range(F.domain.size)]
                if max(gaps) <= tau:
                    ell_rt = schedule.ell(r, t)
                    for L in sorted(filtered.levels[d - t],
                                    key=lambda G: (-len(G.hyps), G.hyps)):
                        if not is_l_irreducible(L, ell_rt):
                            continue
                        sl = soa(L)
                        if all(sl[i] == y for i, y in a):
                            result[L.hyps] = L
                            break
                    continue
                x_a = next(i for i in range(F.domain.size) if gaps[i] >= tau + 1)
                k = g_hat[x_a]
                ell_seq = [schedule.ell(r, t + tt) for tt in range(d - t + 1)]
                for y in range(max(1, k - tau + 1), min(F.K, k + tau - 1) + 1):
                    tree = build_reducing_tree(H, x_a, y, ell_seq,
                                               require_reduction=False)
                    for path, _ in tree.leaves():
                        av = tree.ancestor_set(path)
                        if all(abs(g_hat[i] - yy) <= tau - 1 for i, yy in av):
                            new_a = canonical_restriction(a + av)
                            if not F.restrict(new_a).is_empty:
                                next_queue[new_a] = None
            queue = list(next_queue)
    members = [L for L in result.values()
               if sup_distance(soa(L), g_hat) <= schedule.tau_max]
    out = RepSet(tuple(sorted(members, key=lambda G: (-len(G.hyps), G.hyps))))
    _SOAFILTER_CACHE[cache_key] = out
    return out
