"""Shared instance builders for the test suite."""

import random

from privreg import DiscreteClass, Domain, RealClass


def make_domain(n: int) -> Domain:
    return Domain(tuple(f"x{i}" for i in range(1, n + 1)))


X1 = make_domain(1)
X2 = make_domain(2)
X3 = make_domain(3)


def dclass(hyps, K=4, nx=2) -> DiscreteClass:
    return DiscreteClass(make_domain(nx), K, tuple(tuple(h) for h in hyps))


# Product class {1,3}^2: sfat2 = 2, not 1-irreducible.
F_TOY = dclass([(1, 1), (1, 3), (3, 1), (3, 3)])

# Desk-scale end-to-end instance; discretizes at eta=0.5 to
# {(1,3),(2,1),(3,4),(4,1)}, whose four values at x1 are all distinct.
H_DESK = RealClass(X2, ((-0.75, 0.25), (-0.25, -0.75), (0.25, 0.75),
                        (0.75, -0.75)))
F_DESK = dclass([(1, 3), (2, 1), (3, 4), (4, 1)])


def random_class(rng: random.Random, nx=2, K=4, min_h=1, max_h=8) -> DiscreteClass:
    n = rng.randint(min_h, max_h)
    hyps = {tuple(rng.randint(1, K) for _ in range(nx)) for _ in range(n)}
    return DiscreteClass(make_domain(nx), K, tuple(hyps))


def class_stream(seed: int, nx=2, K=4, min_h=1, max_h=8):
    """Endless deterministic stream of random nonempty classes."""
    rng = random.Random(seed)
    while True:
        yield random_class(rng, nx=nx, K=K, min_h=min_h, max_h=max_h)
