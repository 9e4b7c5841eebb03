"""Finite domains, hypothesis classes, restrictions, discretization, and error functionals.

Hypotheses are stored as value vectors aligned with the domain's point order.
Classes are kept in a canonical form (sorted, deduplicated vectors) so that
extensional equality is plain equality and canonical keys can drive memoization
in the dimension and irreducibility machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DomainError(ValueError):
    """Raised when a value, point, or label is outside its declared range."""


@dataclass(frozen=True)
class Domain:
    """Ordered finite input space; the point order is the determinism anchor."""

    points: tuple

    def __post_init__(self):
        if len(self.points) == 0:
            raise DomainError("domain must be nonempty")
        if len(set(self.points)) != len(self.points):
            raise DomainError("domain points must be unique")

    @property
    def size(self) -> int:
        return len(self.points)

    def index(self, point) -> int:
        try:
            return self.points.index(point)
        except ValueError:
            raise DomainError(f"unknown point {point!r}") from None


def _canonical(hypotheses: Iterable[Sequence]) -> tuple:
    return tuple(sorted(set(tuple(h) for h in hypotheses)))


@dataclass(frozen=True)
class RealClass:
    """Hypotheses mapping the domain into [-1, 1]."""

    domain: Domain
    hyps: tuple = field(default=())

    def __post_init__(self):
        canon = _canonical(self.hyps)
        for h in canon:
            if len(h) != self.domain.size:
                raise DomainError("hypothesis arity mismatch with domain")
            for v in h:
                if not (-1.0 <= v <= 1.0):
                    raise DomainError(f"real hypothesis value {v} outside [-1,1]")
        object.__setattr__(self, "hyps", canon)

    def __len__(self) -> int:
        return len(self.hyps)


@dataclass(frozen=True)
class DiscreteClass:
    """Hypotheses mapping the domain into {1..K}; may be empty (sfat2 = -1)."""

    domain: Domain
    K: int
    hyps: tuple = field(default=())

    def __post_init__(self):
        if self.K < 1:
            raise DomainError("label count K must be positive")
        canon = _canonical(self.hyps)
        for h in canon:
            if len(h) != self.domain.size:
                raise DomainError("hypothesis arity mismatch with domain")
            for v in h:
                if not (isinstance(v, int) and 1 <= v <= self.K):
                    raise DomainError(f"label {v} outside 1..{self.K}")
        object.__setattr__(self, "hyps", canon)

    def __len__(self) -> int:
        return len(self.hyps)

    @property
    def is_empty(self) -> bool:
        return not self.hyps

    def key(self) -> tuple:
        """Canonical memoization key (extensional identity)."""
        return (self.domain.points, self.K, self.hyps)

    def with_hyps(self, hyps: Iterable[Sequence]) -> "DiscreteClass":
        return DiscreteClass(self.domain, self.K, tuple(hyps))

    def restrict(self, constraints) -> "DiscreteClass":
        """Subclass agreeing with every (point_index, label) constraint.

        Conflicting constraints are legal and yield the empty class.
        """
        cons = canonical_restriction(constraints)
        for i, k in cons:
            if not (0 <= i < self.domain.size):
                raise DomainError(f"point index {i} outside domain")
            if not (1 <= k <= self.K):
                raise DomainError(f"label {k} outside 1..{self.K}")
        hyps = [h for h in self.hyps if all(h[i] == k for i, k in cons)]
        return DiscreteClass(self.domain, self.K, tuple(hyps))


def canonical_restriction(constraints) -> tuple:
    """Canonical form of a restriction set: sorted (point_index, label) pairs."""
    return tuple(sorted(set((int(i), int(k)) for i, k in constraints)))


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Weighted finite set of (point_index, label) atoms; weights sum to 1."""

    atoms: tuple  # of (point_index, label, weight)

    def __post_init__(self):
        total = sum(w for _, _, w in self.atoms)
        if self.atoms and abs(total - 1.0) > 1e-12:
            raise DomainError(f"weights sum to {total}, expected 1")
        for _, _, w in self.atoms:
            if w < 0:
                raise DomainError("negative weight")

    @staticmethod
    def from_samples(samples: Sequence) -> "EmpiricalDistribution":
        """Uniform weights over a list of (point_index, label) samples."""
        n = len(samples)
        if n == 0:
            raise DomainError("empty dataset has no empirical distribution")
        return EmpiricalDistribution(tuple((i, y, 1.0 / n) for i, y in samples))


def label_count(eta: float) -> int:
    if not (0.0 < eta < 1.0):
        raise DomainError(f"discretization scale {eta} outside (0,1)")
    return math.ceil(2.0 / eta)


def discretize_value(y: float, eta: float) -> int:
    """Round y in [-1,1] into one of K = ceil(2/eta) integer buckets."""
    K = label_count(eta)
    if not (-1.0 <= y <= 1.0):
        raise DomainError(f"value {y} outside [-1,1]")
    if y == 1.0:
        return K
    return 1 + math.floor((y + 1.0) / 2.0 * K)


def discretize_class(H: RealClass, eta: float) -> DiscreteClass:
    K = label_count(eta)
    hyps = tuple(tuple(discretize_value(v, eta) for v in h) for h in H.hyps)
    return DiscreteClass(H.domain, K, hyps)


def discretize_dataset(samples: Sequence, eta: float) -> list:
    """Per-sample label discretization; order preserved, errors carry the index."""
    out = []
    for idx, (i, y) in enumerate(samples):
        try:
            out.append((i, discretize_value(y, eta)))
        except DomainError as e:
            raise DomainError(f"sample {idx}: {e}") from None
    return out


def abs_error(f: Sequence, P: EmpiricalDistribution) -> float:
    """err_P(f) = sum of weight * |f(x) - y| over the atoms of P."""
    total = 0.0
    for i, y, w in P.atoms:
        if not (0 <= i < len(f)):
            raise DomainError(f"atom point index {i} outside hypothesis arity")
        total += w * abs(f[i] - y)
    return total


def min_error(F: DiscreteClass, P: EmpiricalDistribution) -> float:
    if F.is_empty:
        raise DomainError("empty class has no minimum error")
    return min(abs_error(f, P) for f in F.hyps)


def enumerate_restriction_subclasses(F: DiscreteClass) -> list:
    """All extensionally distinct nonempty classes F|_S for finite S.

    Closure of {F} under single-point restrictions; canonical order is
    descending size, then lexicographic hypothesis lists.
    """
    seen = {}
    if not F.is_empty:
        seen[F.hyps] = F
        frontier = [F]
        while frontier:
            G = frontier.pop()
            for i in range(F.domain.size):
                labels = {h[i] for h in G.hyps}
                if len(labels) == 1:
                    continue
                for k in sorted(labels):
                    sub = G.restrict([(i, k)])
                    if sub.hyps not in seen:
                        seen[sub.hyps] = sub
                        frontier.append(sub)
    return sorted(seen.values(), key=lambda G: (-len(G.hyps), G.hyps))


def undisc_hypothesis(g: Sequence, K: int) -> tuple:
    """Map a discrete hypothesis back into [-1,1] via k -> -1 + 2(k-1)/K."""
    for v in g:
        if not (1 <= v <= K):
            raise DomainError(f"label {v} outside 1..{K}")
    return tuple(-1.0 + (2.0 / K) * (v - 1) for v in g)


def sup_distance(g1: Sequence, g2: Sequence) -> int:
    """L-infinity distance between two label vectors."""
    return max(abs(a - b) for a, b in zip(g1, g2))
