import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermatsym.ntkernel import jacobi, primes_in
from fermatsym.qrsolver import (
    CONTRADICTION,
    FALSE,
    TRUE,
    And,
    Atom,
    CongruenceClassSet,
    InsufficientModulusError,
    Not,
    Or,
    ParseError,
    atom,
    canonicalize,
    decompose,
    density,
    lift,
    parse,
    pretty,
    simplify,
    symbol_sign,
    to_classes,
    union,
)
from fermatsym.symplectic import QRConstraint


class TestSymbolSign:
    def test_two_mod_8(self):
        # Euler criterion at p = 5, 13, 29: 2 is a non-residue
        assert symbol_sign(2, 5, 8) == -1
        for p in (5, 13, 29):
            assert jacobi(2, p) == -1

    def test_minus_one_mod_4(self):
        assert symbol_sign(-1, 1, 8) == 1
        assert symbol_sign(-1, 3, 8) == -1

    def test_three_at_19_mod_24(self):
        assert symbol_sign(3, 19, 24) == -1
        assert jacobi(3, 19) == -1  # brute-force-backed oracle value

    def test_insufficient_modulus(self):
        with pytest.raises(InsufficientModulusError):
            symbol_sign(2, 3, 12)  # not divisible by 8
        with pytest.raises(InsufficientModulusError):
            symbol_sign(5, 1, 24)  # 5 does not divide 24

    def test_rejects_bad_base(self):
        with pytest.raises(ValueError):
            symbol_sign(9, 1, 72)
        with pytest.raises(ValueError):
            symbol_sign(-2, 1, 8)

    def test_matches_jacobi_for_all_primes_below_1000(self):
        # exhaustive oracle check for n in {-1, +-2, +-3, +-6} with M = 24
        atoms = {-1: [(-1,)], 2: [(2,)], -2: [(-1,), (2,)], 3: [(3,)],
                 -3: [(-1,), (3,)], 6: [(2,), (3,)], -6: [(-1,), (2,), (3,)]}
        for p in primes_in(5, 1000):
            r = p % 24
            for n, parts in atoms.items():
                predicted = 1
                for (base,) in parts:
                    predicted *= symbol_sign(base, r, 24)
                assert predicted == jacobi(n, p), (n, p)


class TestParse:
    def test_conjunction(self):
        expr = parse("(-2)=-1 & (2)=-1")
        assert expr == And((atom(-2, -1), atom(2, -1)))

    def test_squarefree_reduction(self):
        assert parse("((8)=+1)") == atom(2, 1)
        assert parse("(8)=+1") == atom(2, 1)

    def test_sign_folded_into_kernel(self):
        assert parse("(-8)=+1") == Atom(QRConstraint(-2, 1))

    def test_error_position(self):
        with pytest.raises(ParseError) as exc:
            parse("(2)=")
        assert exc.value.column == 5

    def test_error_on_zero_kernel(self):
        with pytest.raises(ParseError):
            parse("(0)=+1")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse("(2)=+1 extra")

    def test_precedence_and_grouping(self):
        expr = parse("(2)=+1 | (3)=+1 & (5)=+1")
        assert isinstance(expr, Or)
        grouped = parse("((2)=+1 | (3)=+1) & (5)=+1")
        assert isinstance(grouped, And)

    def test_negation(self):
        assert parse("!(2)=+1") == Not(atom(2, 1))

    def test_whitespace_insensitive(self):
        assert parse(" ( -2 ) = -1 &(2)=-1 ") == parse("(-2)=-1&(2)=-1")


def random_expr(rng, depth=3):
    kernels = [-6, -3, -2, -1, 2, 3, 5, 6, 10]
    if depth == 0 or rng.random() < 0.35:
        return atom(rng.choice(kernels), rng.choice([1, -1]))
    kind = rng.choice(["and", "or", "not"])
    if kind == "not":
        return Not(random_expr(rng, depth - 1))
    parts = tuple(random_expr(rng, depth - 1) for _ in range(rng.randint(2, 3)))
    return And(parts) if kind == "and" else Or(parts)


class TestPretty:
    def test_round_trip_on_randomized_expressions(self):
        rng = random.Random(20240501)
        for _ in range(100):
            expr = random_expr(rng)
            assert to_classes(parse(pretty(expr))) == to_classes(expr)

    def test_examples(self):
        assert pretty(parse("(-2)=-1 & (2)=-1")) == "(-2)=-1 & (2)=-1"
        assert pretty(parse("!((2)=+1 | (3)=-1)")) == "!((2)=+1 | (3)=-1)"


class TestToClasses:
    def test_five_mod_eight(self):
        classes = to_classes(parse("(-2)=-1 & (2)=-1"))
        assert classes == CongruenceClassSet(8, frozenset({5}))

    def test_twenty_three_mod_twenty_four(self):
        classes = to_classes(parse("(-2)=-1 & (2)=+1 & (3)=+1"))
        assert classes == CongruenceClassSet(24, frozenset({23}))

    def test_constant_true_covers_everything(self):
        classes = to_classes(TRUE)
        assert density(classes) == 1
        assert lift(classes, 8).residues == frozenset({1, 3, 5, 7})

    def test_constant_false_empty(self):
        classes = to_classes(FALSE)
        assert density(classes) == 0
        assert classes.residues == frozenset()

    def test_union_is_lifted_union(self):
        e1 = parse("(2)=-1 & (-1)=+1")
        e2 = parse("(3)=-1")
        both = to_classes(Or((e1, e2)))
        assert both == union(to_classes(e1), to_classes(e2))

    def test_density_subadditive_with_equality_when_disjoint(self):
        e1 = parse("(2)=+1")
        e2 = parse("(2)=-1 & (3)=+1")
        d_union = density(to_classes(Or((e1, e2))))
        assert d_union == density(to_classes(e1)) + density(to_classes(e2))
        overlapping = parse("(2)=+1 | (-1)=+1")
        assert density(to_classes(overlapping)) <= Fraction(1, 2) + Fraction(1, 2)


class TestDensity:
    def test_one_quarter(self):
        assert density(CongruenceClassSet(8, frozenset({5}))) == Fraction(1, 4)

    def test_three_eighths_set(self):
        assert density(CongruenceClassSet(24, frozenset({5, 13, 23}))) == Fraction(3, 8)

    def test_empty(self):
        assert density(CongruenceClassSet(24, frozenset())) == 0

    def test_single_odd_prime_atom_has_density_one_half(self):
        for q in (3, 5, 7, 11):
            assert density(to_classes(atom(q, 1))) == Fraction(1, 2)


class TestCanonicalize:
    def test_spec_example(self):
        canonical = canonicalize(CongruenceClassSet(24, frozenset({5, 13})))
        assert canonical == CongruenceClassSet(8, frozenset({5}))

    def test_not_collapsible(self):
        classes = CongruenceClassSet(24, frozenset({5, 13, 23}))
        assert canonicalize(classes) == classes

    def test_decompose_minimal_moduli(self):
        assert decompose(CongruenceClassSet(24, frozenset({5, 13, 23}))) == [(5, 8), (23, 24)]
        assert decompose(CongruenceClassSet(24, frozenset({5, 13, 19}))) == [(5, 8), (19, 24)]

    def test_str_format(self):
        classes = CongruenceClassSet(24, frozenset({5, 13, 23}))
        assert str(classes) == "p ≡ 5 (mod 8) or p ≡ 23 (mod 24)"


class TestSimplify:
    def test_drops_multiplicatively_implied(self):
        out = simplify([QRConstraint(-6, 1), QRConstraint(-1, 1), QRConstraint(6, 1)])
        assert out == [QRConstraint(-1, 1), QRConstraint(6, 1)]

    def test_direct_contradiction(self):
        assert simplify([QRConstraint(2, 1), QRConstraint(2, -1)]) is CONTRADICTION

    def test_empty(self):
        assert simplify([]) == []

    def test_product_contradiction(self):
        out = simplify([QRConstraint(2, 1), QRConstraint(3, 1), QRConstraint(6, -1)])
        assert out is CONTRADICTION

    def test_kernel_one_constraints(self):
        assert simplify([QRConstraint(1, 1)]) == []
        assert simplify([QRConstraint(1, -1)]) is CONTRADICTION

    def test_consistent_set_kept_in_canonical_order(self):
        out = simplify([QRConstraint(15, 1), QRConstraint(3, -1)])
        assert out == [QRConstraint(3, -1), QRConstraint(15, 1)]


@st.composite
def sign_exprs(draw, max_depth=3):
    if max_depth == 0:
        n = draw(st.sampled_from([-6, -3, -2, -1, 2, 3, 5, 6]))
        return atom(n, draw(st.sampled_from([1, -1])))
    kind = draw(st.sampled_from(["atom", "atom", "not", "and", "or"]))
    if kind == "atom":
        n = draw(st.sampled_from([-6, -3, -2, -1, 2, 3, 5, 6]))
        return atom(n, draw(st.sampled_from([1, -1])))
    if kind == "not":
        return Not(draw(sign_exprs(max_depth=max_depth - 1)))
    parts = draw(st.lists(sign_exprs(max_depth=max_depth - 1), min_size=2, max_size=3))
    return And(tuple(parts)) if kind == "and" else Or(tuple(parts))


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(sign_exprs())
    def test_parse_pretty_round_trip(self, expr):
        assert to_classes(parse(pretty(expr))) == to_classes(expr)

    @settings(max_examples=60, deadline=None)
    @given(sign_exprs())
    def test_negation_complements_density(self, expr):
        assert density(to_classes(expr)) + density(to_classes(Not(expr))) == 1

    @settings(max_examples=40, deadline=None)
    @given(sign_exprs(), sign_exprs())
    def test_de_morgan(self, e1, e2):
        lhs = to_classes(Not(And((e1, e2))))
        rhs = to_classes(Or((Not(e1), Not(e2))))
        assert lhs == rhs

    @settings(max_examples=40, deadline=None)
    @given(sign_exprs())
    def test_evaluation_matches_actual_primes(self, expr):
        # the class evaluation must agree with honest Jacobi symbols at
        # genuine primes in each class
        from fermatsym.qrsolver import required_modulus

        m = required_modulus(expr)
        classes = to_classes(expr)
        for p in primes_in(m + 1, m + 400):
            direct = _eval_at_prime(expr, p)
            in_classes = (
                p % classes.modulus in classes.residues if classes.modulus > 1 else bool(classes.residues)
            )
            assert direct == in_classes, (p, pretty(expr))


def _eval_at_prime(expr, p):
    if isinstance(expr, Atom):
        return jacobi(expr.constraint.n, p) == expr.constraint.sign
    if isinstance(expr, Not):
        return not _eval_at_prime(expr.operand, p)
    if isinstance(expr, And):
        return all(_eval_at_prime(e, p) for e in expr.operands)
    return any(_eval_at_prime(e, p) for e in expr.operands)
