"""Verdicts and certificates shared by every decision procedure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

FINITE = "Finite"
INFINITE = "Infinite"
UNKNOWN = "Unknown"


@dataclass
class Certificate:
    """Evidence for a verdict.

    ``kind`` names the argument (``"hyperbolic-centralizer"``, ``"lem-twist0"``,
    ...); ``data`` holds live objects needed by :func:`bassforge.certify.replay`
    and ``summary`` a JSON-ready description.
    """

    kind: str
    data: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def to_json(self):
        return {"kind": self.kind, **self.summary}


@dataclass
class Verdict:
    verdict: str
    order: Optional[int] = None
    rank: Optional[int] = None
    certificate: Optional[Certificate] = None
    reason: Optional[str] = None
    assumptions: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def is_finite(self):
        return self.verdict == FINITE

    @property
    def is_infinite(self):
        return self.verdict == INFINITE

    @property
    def is_unknown(self):
        return self.verdict == UNKNOWN

    def to_json(self):
        out = {"verdict": self.verdict, "assumptions": list(self.assumptions)}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.order is not None:
            out["order"] = self.order
        if self.rank is not None:
            out["rank"] = self.rank
        if self.reason:
            out["reason"] = self.reason
        extra = {k: v for k, v in self.data.items() if isinstance(v, (str, int, bool, list, dict))}
        if extra:
            out["details"] = extra
        return out


def finite(order=None, **kw):
    return Verdict(FINITE, order=order, **kw)


def infinite(certificate, **kw):
    if certificate is None:
        raise ValueError("an Infinite verdict needs a certificate")
    return Verdict(INFINITE, certificate=certificate, **kw)


def unknown(reason, **kw):
    return Verdict(UNKNOWN, reason=reason, **kw)
