"""The two symplectic criteria as decision procedures.

Outputs are either a symplectic type, a quadratic-residue constraint on the
exponent prime p, or a hard contradiction.  Everything is symbolic in p:
valuations enter as exact integers or as integer representatives of residues
mod p, and "is a square mod p" becomes a Legendre-symbol constraint on the
squarefree kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .ntkernel import squarefree_part


class CriterionError(Exception):
    """A criterion was invoked outside its hypotheses."""


class SymplecticType(Enum):
    SYMPLECTIC = "symplectic"
    ANTI_SYMPLECTIC = "anti-symplectic"
    UNKNOWN = "unknown"


@dataclass(frozen=True, order=True)
class QRConstraint:
    """The condition (n/p) = sign for the exponent prime p; n squarefree."""

    n: int
    sign: int

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("constraint kernel must be nonzero")
        if squarefree_part(self.n) != self.n:
            raise ValueError(f"constraint kernel {self.n} is not squarefree")
        if self.sign not in (1, -1):
            raise ValueError(f"constraint sign must be +-1, got {self.sign}")

    def negated(self) -> "QRConstraint":
        return QRConstraint(self.n, -self.sign)

    def __str__(self) -> str:
        return f"({self.n})={'+1' if self.sign == 1 else '-1'}"


class VerdictKind(Enum):
    CONSTRAINT = "constraint"
    ALWAYS_CONSISTENT = "always-consistent"
    CONTRADICTION = "contradiction"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    constraint: QRConstraint | None = None

    def __str__(self) -> str:
        if self.kind is VerdictKind.CONSTRAINT:
            return f"requires {self.constraint}"
        return self.kind.value


ALWAYS_CONSISTENT = Verdict(VerdictKind.ALWAYS_CONSISTENT)
CONTRADICTION = Verdict(VerdictKind.CONTRADICTION)


def criterion_at_two(
    v2_frey: int,
    v2_candidate: int,
    legendre_2_p: int,
    *,
    frey_sl2f3: bool = True,
    candidate_sl2f3: bool = True,
) -> SymplecticType:
    """Symplectic type of an isomorphism of p-torsion, decided at 2.

    Applies to two curves over Q_2 with potentially good reduction whose
    p-torsion is trivialized over the same SL2(F3)-extension of Q_2^un.  The
    two discriminant exponents must be exact integers, not residues mod p:
    only their difference mod 3 matters, which a mod-p residue cannot supply.
    """
    if not (frey_sl2f3 and candidate_sl2f3):
        raise CriterionError("criterion at 2 needs the SL2(F3) inertia property on both curves")
    if legendre_2_p not in (1, -1):
        raise CriterionError(f"legendre_2_p must be +-1, got {legendre_2_p}")
    if legendre_2_p == 1:
        return SymplecticType.SYMPLECTIC
    if (v2_frey - v2_candidate) % 3 == 0:
        return SymplecticType.SYMPLECTIC
    return SymplecticType.ANTI_SYMPLECTIC


def criterion_multiplicative(
    v: int, v_candidate: int, sym_type: SymplecticType
) -> Verdict | None:
    """Consistency of a symplectic type with valuations at a shared
    multiplicative prime.

    v and v_candidate are integer representatives of the two discriminant
    exponents mod p (both nonzero mod p).  The type forces their ratio to be
    a square (symplectic) or a non-square (anti-symplectic) mod p; the
    verdict encodes that as a constraint on the squarefree kernel of the
    product.  Returns None for an unknown type: no per-prime verdict exists,
    use pairwise_consistency instead.
    """
    if v == 0 or v_candidate == 0:
        raise CriterionError("criterion needs valuations nonzero mod p")
    if sym_type is SymplecticType.UNKNOWN:
        return None
    s = squarefree_part(v * v_candidate)
    if sym_type is SymplecticType.SYMPLECTIC:
        return ALWAYS_CONSISTENT if s == 1 else Verdict(VerdictKind.CONSTRAINT, QRConstraint(s, 1))
    if s == 1:
        return CONTRADICTION
    return Verdict(VerdictKind.CONSTRAINT, QRConstraint(s, -1))


def pairwise_consistency(
    profile: list[tuple[int, int]], candidate: list[tuple[int, int]]
) -> list[QRConstraint]:
    """Constraints forced by an isomorphism when the symplectic type is unknown.

    Both curves must be multiplicative at every listed prime.  Whatever the
    type is, it is the same at every prime, so for each pair of primes the
    product of the valuation ratios must be a square mod p.  Redundant
    constraints are kept; minimization is the solver's job.
    """
    prof = dict(profile)
    cand = dict(candidate)
    if len(prof) != len(list(profile)) or len(cand) != len(list(candidate)):
        raise CriterionError("duplicate primes in a valuation list")
    shared = sorted(set(prof) & set(cand))
    if len(shared) < 2:
        raise CriterionError("pairwise consistency needs at least two shared primes")
    for ell in shared:
        if prof[ell] == 0 or cand[ell] == 0:
            raise CriterionError(f"valuation at {ell} is zero mod p")
    out = []
    for i, l1 in enumerate(shared):
        for l2 in shared[i + 1 :]:
            s = squarefree_part(prof[l1] * prof[l2] * cand[l1] * cand[l2])
            out.append(QRConstraint(s, 1))
    return out
