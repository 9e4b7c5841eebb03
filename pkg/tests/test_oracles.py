import itertools

import pytest

from privreg import (DiscreteClass, Domain, OracleRefusal, is_l_irreducible,
                     irreducible_bruteforce, oracle_agreement_grid, sfat2,
                     sfat2_bruteforce, soa, strong_stability_target,
                     weak_stability_target)
from privreg.classes import DomainError, EmpiricalDistribution, sup_distance
from privreg.filtering import LadderSchedule, soa_filter

from helpers import F_TOY, class_stream, dclass, make_domain


def test_guards_refuse_large_instances():
    big_domain = DiscreteClass(make_domain(4), 4, ((1, 1, 1, 1),))
    with pytest.raises(OracleRefusal):
        sfat2_bruteforce(big_domain)
    big_k = dclass([(1, 1)], K=5)
    with pytest.raises(OracleRefusal):
        sfat2_bruteforce(big_k)
    with pytest.raises(OracleRefusal):
        sfat2_bruteforce(F_TOY, depth_cap=4)
    with pytest.raises(OracleRefusal):
        irreducible_bruteforce(F_TOY, 3)


def test_sfat2_bruteforce_examples():
    assert sfat2_bruteforce(dclass([], nx=2)) == -1
    assert sfat2_bruteforce(dclass(list(itertools.product((1, 2), repeat=2)))) == 0
    assert sfat2_bruteforce(F_TOY) == 2


def test_irreducible_bruteforce_examples():
    low = dclass(list(itertools.product((1, 2), repeat=2)))
    assert irreducible_bruteforce(low, 2)
    assert not irreducible_bruteforce(F_TOY, 1)
    assert irreducible_bruteforce(dclass([], nx=2), 2)
    with pytest.raises(DomainError):
        irreducible_bruteforce(F_TOY, -1)


def test_agreement_on_random_sample():
    report = oracle_agreement_grid(itertools.islice(class_stream(71), 40))
    assert report["checked"] == 40
    assert report["disagreements"] == []


def test_weak_target_singleton():
    F = dclass([(2, 3)])
    P = EmpiricalDistribution.from_samples([(0, 2), (1, 3)])
    tgt = weak_stability_target(F, P, alpha=1.0, t=1, ell_prime=2,
                                alpha_delta=1.5)
    assert tgt.nonempty
    assert () in tgt.m_set
    assert tgt.sigma_star == (2, 3)


def test_weak_target_empty_when_alpha_low():
    F = dclass([(2, 3)])
    P = EmpiricalDistribution.from_samples([(0, 4), (1, 1)])
    tgt = weak_stability_target(F, P, alpha=0.5, t=1, ell_prime=2)
    assert not tgt.nonempty
    assert tgt.s_star is None


def test_strong_target_f_toy():
    G = dclass([(1, 1)])
    tgt = strong_stability_target(F_TOY, G, chi=5, ell_bar=1)
    # mu monotonicity: non-decreasing in tau, non-increasing in r.
    rs = sorted({r for r, _ in tgt.mu})
    taus = sorted({t for _, t in tgt.mu})
    for r in rs:
        vals = [tgt.mu[(r, t)] for t in taus]
        assert vals == sorted(vals)
    for t in taus:
        vals = [tgt.mu[(r, t)] for r in rs]
        assert vals == sorted(vals, reverse=True)
    step = 2 + 2 * 5
    assert tgt.mu[(tgt.r_star, tgt.tau_star)] == \
        tgt.mu[(tgt.r_star - 1, tgt.tau_star + step)]
    assert is_l_irreducible(tgt.l_star, 1)
    assert sfat2(tgt.h_star) == tgt.mu[(tgt.r_star, tgt.tau_star)]
    d = sfat2(F_TOY)
    sched = LadderSchedule(1, d + 1, 12 * (d + 1), 5)
    rep = soa_filter(F_TOY, soa(G), sched)
    assert tgt.l_star.hyps in {L.hyps for L in rep.members}


def test_strong_target_preconditions():
    with pytest.raises(DomainError):
        strong_stability_target(F_TOY, dclass([], nx=2), 5, 1)
    with pytest.raises(DomainError):
        # F_TOY itself is not even 1-irreducible.
        strong_stability_target(F_TOY, F_TOY, 5, 1)
