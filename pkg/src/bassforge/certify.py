"""Replay of certificates by kind."""

from __future__ import annotations

from .verdict import Certificate


def _registry():
    from . import criteria, twists, words

    return {
        "hyperbolic-centralizer": lambda c: words.replay_hyperbolic(c),
        "hyperbolic-normalizer": lambda c: words.replay_hyperbolic(c),
        "lem-twist0": lambda c: twists.replay_lem_twist0(c),
        "central-rank": lambda c: twists.replay_central_rank(c),
        "abelian-rank": lambda c: twists.replay_abelian_rank(c),
        "lemma-ti": lambda c: twists.replay_infinite_order_twist(c),
        "extension": lambda c: twists.replay_extension(c, replay),
        "splitting-twists": lambda c: criteria.replay_splitting_twists(c, replay),
        "nonabelian-free-factor": lambda c: criteria.replay_freep(c, replay),
        "abelian-factor-index": lambda c: criteria.replay_freep(c, replay),
        "free-product-twists": lambda c: criteria.replay_freep(c, replay),
        "toral-clause": lambda c: criteria.replay_toral_clause(c, replay),
        "twists-infinite": lambda c: criteria.replay_cor_outu(c, replay),
        "parabolic-automorphisms": lambda c: criteria.replay_cor_outu(c, replay),
    }


def kinds():
    return sorted(_registry())


def replay(cert: Certificate) -> bool:
    """Re-verify ``cert`` from its recorded data; unknown kinds fail."""
    fn = _registry().get(cert.kind)
    if fn is None:
        return False
    return bool(fn(cert))


def replay_verdict(verdict) -> bool:
    """True unless an Infinite verdict lacks a certificate that replays."""
    if not verdict.is_infinite:
        return True
    return verdict.certificate is not None and replay(verdict.certificate)
