"""Legendre-symbol constraint solving.

Boolean combinations of conditions (n/p) = +-1 are converted into congruence
classes of the prime p with exact Dirichlet densities.  Includes the small
text DSL for constraint expressions, e.g. ``(-2)=-1 & ((2)=+1 | !(3)=-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .ntkernel import factor_small, is_prime, jacobi, squarefree_part
from .symplectic import QRConstraint


class ParseError(Exception):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class InsufficientModulusError(Exception):
    """The modulus does not determine the requested symbol."""


# ---------------------------------------------------------------------------
# expression trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignExpr:
    def __and__(self, other: "SignExpr") -> "SignExpr":
        return And((self, other))

    def __or__(self, other: "SignExpr") -> "SignExpr":
        return Or((self, other))

    def __invert__(self) -> "SignExpr":
        return Not(self)


@dataclass(frozen=True)
class Atom(SignExpr):
    constraint: QRConstraint


@dataclass(frozen=True)
class Not(SignExpr):
    operand: SignExpr


@dataclass(frozen=True)
class And(SignExpr):
    operands: tuple[SignExpr, ...]


@dataclass(frozen=True)
class Or(SignExpr):
    operands: tuple[SignExpr, ...]


TRUE = Atom(QRConstraint(1, 1))
FALSE = Atom(QRConstraint(1, -1))


def atom(n: int, sign: int) -> Atom:
    """Atom (n/p) = sign with n reduced to its squarefree part."""
    return Atom(QRConstraint(squarefree_part(n), sign))


def all_of(exprs) -> SignExpr:
    exprs = tuple(exprs)
    if not exprs:
        return TRUE
    return exprs[0] if len(exprs) == 1 else And(exprs)


def any_of(exprs) -> SignExpr:
    exprs = tuple(exprs)
    if not exprs:
        return FALSE
    return exprs[0] if len(exprs) == 1 else Or(exprs)


def atoms_of(expr: SignExpr):
    if isinstance(expr, Atom):
        yield expr.constraint
    elif isinstance(expr, Not):
        yield from atoms_of(expr.operand)
    elif isinstance(expr, (And, Or)):
        for sub in expr.operands:
            yield from atoms_of(sub)
    else:
        raise TypeError(f"not a SignExpr node: {expr!r}")


def pretty(expr: SignExpr) -> str:
    """Canonical text form; parse(pretty(e)) evaluates identically to e."""

    def go(e: SignExpr, parent_prec: int) -> str:
        if isinstance(e, Atom):
            return str(e.constraint)
        if isinstance(e, Not):
            return "!" + go(e.operand, 3)
        if isinstance(e, And):
            body = " & ".join(go(sub, 2) for sub in e.operands)
            return f"({body})" if parent_prec > 1 else body
        body = " | ".join(go(sub, 1) for sub in e.operands)
        return f"({body})" if parent_prec > 0 else body

    return go(expr, 0)


# ---------------------------------------------------------------------------
# parser:  expr := term ('|' term)*;  term := factor ('&' factor)*
#          factor := '!' factor | '(' ... either grouped expr or atom
#          atom  := '(' integer ')' '=' ('+1' | '-1')
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected '{ch}'")
        self.pos += 1

    def parse_expr(self) -> SignExpr:
        terms = [self.parse_term()]
        while self.peek() == "|":
            self.pos += 1
            terms.append(self.parse_term())
        return terms[0] if len(terms) == 1 else Or(tuple(terms))

    def parse_term(self) -> SignExpr:
        factors = [self.parse_factor()]
        while self.peek() == "&":
            self.pos += 1
            factors.append(self.parse_factor())
        return factors[0] if len(factors) == 1 else And(tuple(factors))

    def parse_factor(self) -> SignExpr:
        ch = self.peek()
        if ch == "!":
            self.pos += 1
            return Not(self.parse_factor())
        if ch != "(":
            self.error("expected '(' or '!'")
        # '(' opens either an atom "(n)=s" or a grouped expression
        save = self.pos
        self.pos += 1
        n = self._try_integer()
        if n is not None:
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos] == ")":
                self.pos += 1
                if self.peek() == "=":
                    self.pos += 1
                    sign = self._parse_sign()
                    if n == 0:
                        self.pos = save
                        self.error("constraint kernel must be nonzero")
                    return atom(n, sign)
        # not an atom: grouped expression
        self.pos = save + 1
        inner = self.parse_expr()
        self.expect(")")
        return inner

    def _try_integer(self) -> int | None:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            return None
        return int(self.text[start : self.pos])

    def _parse_sign(self) -> int:
        self.skip_ws()
        for token, value in (("+1", 1), ("-1", -1), ("1", 1)):
            if self.text.startswith(token, self.pos):
                self.pos += len(token)
                return value
        self.error("expected '+1' or '-1'")

    def parse_complete(self) -> SignExpr:
        expr = self.parse_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error(f"unexpected '{self.text[self.pos]}'")
        return expr


def parse(text: str) -> SignExpr:
    return _Parser(text).parse_complete()


# ---------------------------------------------------------------------------
# congruence classes
# ---------------------------------------------------------------------------


def euler_phi(m: int) -> int:
    out = m
    for p in factor_small(m).factors:
        out -= out // p
    return out


@dataclass(frozen=True)
class CongruenceClassSet:
    """Residues mod M (coprime to M) containing the primes in question."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self):
        for r in self.residues:
            if not (0 < r < self.modulus or (self.modulus == 1 and r == 0)):
                raise ValueError(f"residue {r} out of range for modulus {self.modulus}")
            if gcd(r, self.modulus) != 1:
                raise ValueError(f"residue {r} not coprime to {self.modulus}")

    def sorted_residues(self) -> list[int]:
        return sorted(self.residues)

    def __str__(self) -> str:
        parts = decompose(self)
        if not parts:
            return "no classes (empty set)"
        if parts == [(1, 1)]:
            return "all p"
        return " or ".join(f"p ≡ {r} (mod {m})" for r, m in parts)


def symbol_sign(q_or_unit: int, r: int, modulus: int) -> int:
    """Constant value of the Legendre symbol (q/p) on the class p ≡ r (mod modulus).

    The unit -1 is read off r mod 4, the prime 2 off r mod 8, and an odd
    prime q via quadratic reciprocity from r mod 4 and r mod q.  The modulus
    must be divisible by 8 and by every odd prime used.
    """
    if modulus % 8 != 0:
        raise InsufficientModulusError(f"modulus {modulus} must be divisible by 8")
    if gcd(r, modulus) != 1:
        raise ValueError(f"residue {r} not coprime to modulus {modulus}")
    if q_or_unit == -1:
        return 1 if r % 4 == 1 else -1
    if q_or_unit == 2:
        return 1 if r % 8 in (1, 7) else -1
    q = q_or_unit
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise ValueError(f"symbol base must be -1, 2 or an odd prime, got {q}")
    if modulus % q != 0:
        raise InsufficientModulusError(f"modulus {modulus} must be divisible by {q}")
    sign = jacobi(r % q, q)
    if q % 4 == 3 and r % 4 == 3:
        sign = -sign
    return sign


def constraint_sign(constraint: QRConstraint, r: int, modulus: int) -> bool:
    """Whether (n/p) = sign holds on the class p ≡ r (mod modulus)."""
    n = constraint.n
    value = 1
    if n < 0:
        value *= symbol_sign(-1, r, modulus)
        n = -n
    for q in factor_small(n).factors:  # n squarefree: every exponent is 1
        value *= symbol_sign(q, r, modulus)
    return value == constraint.sign


def evaluate(expr: SignExpr, r: int, modulus: int) -> bool:
    if isinstance(expr, Atom):
        return constraint_sign(expr.constraint, r, modulus)
    if isinstance(expr, Not):
        return not evaluate(expr.operand, r, modulus)
    if isinstance(expr, And):
        return all(evaluate(sub, r, modulus) for sub in expr.operands)
    if isinstance(expr, Or):
        return any(evaluate(sub, r, modulus) for sub in expr.operands)
    raise TypeError(f"not a SignExpr node: {expr!r}")


def required_modulus(expr: SignExpr) -> int:
    odd_primes = set()
    for constraint in atoms_of(expr):
        for q in factor_small(abs(constraint.n)).factors:
            if q != 2:
                odd_primes.add(q)
    m = 8
    for q in sorted(odd_primes):
        m *= q
    return m


def canonicalize(classes: CongruenceClassSet) -> CongruenceClassSet:
    """Smallest modulus expressing the same set of primes."""
    m = classes.modulus
    divisors = sorted(d for d in range(1, m + 1) if m % d == 0)
    coprime = [r for r in range(m) if gcd(r, m) == 1] or [0]
    for d in divisors:
        groups: dict[int, set[bool]] = {}
        for r in coprime:
            groups.setdefault(r % d, set()).add(r in classes.residues)
        if all(len(v) == 1 for v in groups.values()):
            residues = frozenset(rd for rd, v in groups.items() if True in v)
            if d == 1:
                return CongruenceClassSet(1, residues)
            return CongruenceClassSet(d, residues)
    return classes


def to_classes(expr: SignExpr) -> CongruenceClassSet:
    """All classes p ≡ r (mod M) on which the expression holds."""
    m = required_modulus(expr)
    residues = frozenset(
        r for r in range(1, m) if gcd(r, m) == 1 and evaluate(expr, r, m)
    )
    return canonicalize(CongruenceClassSet(m, residues))


def density(classes: CongruenceClassSet) -> Fraction:
    """Dirichlet density of the primes in the class set."""
    if classes.modulus == 1:
        return Fraction(1) if classes.residues else Fraction(0)
    return Fraction(len(classes.residues), euler_phi(classes.modulus))


def lift(classes: CongruenceClassSet, modulus: int) -> CongruenceClassSet:
    """The same prime set as residues modulo a multiple of the modulus."""
    if modulus % max(classes.modulus, 1) != 0:
        raise ValueError(f"{modulus} is not a multiple of {classes.modulus}")
    if classes.modulus <= 1:
        residues = frozenset(r for r in range(modulus) if gcd(r, modulus) == 1) if classes.residues else frozenset()
        if modulus == 1:
            return classes
        return CongruenceClassSet(modulus, residues)
    residues = frozenset(
        r
        for r in range(modulus)
        if gcd(r, modulus) == 1 and r % classes.modulus in classes.residues
    )
    return CongruenceClassSet(modulus, residues)


def union(a: CongruenceClassSet, b: CongruenceClassSet) -> CongruenceClassSet:
    m = (a.modulus * b.modulus) // gcd(max(a.modulus, 1), max(b.modulus, 1))
    la, lb = lift(a, m), lift(b, m)
    return canonicalize(CongruenceClassSet(m, la.residues | lb.residues))


def decompose(classes: CongruenceClassSet) -> list[tuple[int, int]]:
    """Greedy cover by single classes of the smallest possible moduli.

    Returns (residue, modulus) pairs; e.g. {5,13,23} mod 24 comes out as
    [(5, 8), (23, 24)].
    """
    m = classes.modulus
    if m <= 1:
        return [(1, 1)] if classes.residues else []
    remaining = set(classes.residues)
    out = []
    for d in sorted(d for d in range(1, m + 1) if m % d == 0):
        for rd in range(d):
            if gcd(rd, d) != 1 and d > 1:
                continue
            fiber = {r for r in range(m) if gcd(r, m) == 1 and r % d == rd}
            if fiber and fiber <= remaining:
                out.append((rd, d))
                remaining -= fiber
        if not remaining:
            break
    return sorted(out, key=lambda rm: (rm[1], rm[0]))


# ---------------------------------------------------------------------------
# constraint-set simplification over F_2
# ---------------------------------------------------------------------------


class Contradiction:
    """Sentinel result: the constraint set is unsatisfiable."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Contradiction"


CONTRADICTION = Contradiction()


def _support(n: int) -> frozenset[int]:
    # squarefree n as a set of "places": -1 for the sign, primes for the rest
    places = set()
    if n < 0:
        places.add(-1)
        n = -n
    places.update(factor_small(n).factors)
    return frozenset(places)


def simplify(constraints: list[QRConstraint]) -> list[QRConstraint] | Contradiction:
    """Minimal equivalent constraint set, or the contradiction sentinel.

    Constraints are F_2-linear in the prime-and-sign support of their
    kernels, so multiplicatively implied members are exactly the linearly
    dependent ones.  Kept constraints are chosen smallest-kernel-first.
    """
    ordered = sorted(constraints, key=lambda c: (abs(c.n), c.n < 0, -c.sign))
    pivots: dict[int, tuple[frozenset[int], int]] = {}
    kept: list[QRConstraint] = []
    for c in ordered:
        vec = _support(c.n)
        sign = 1
        while vec:
            piv = min(vec)
            if piv not in pivots:
                break
            bvec, bsign = pivots[piv]
            vec = vec ^ bvec
            sign *= bsign
        if not vec:
            # c's kernel is a product of kept kernels (times a square), whose
            # symbols multiply to `sign`
            if sign != c.sign:
                return CONTRADICTION
            continue
        pivots[min(vec)] = (vec, c.sign * sign)
        kept.append(c)
    return kept
