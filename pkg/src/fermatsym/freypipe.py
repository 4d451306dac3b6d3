"""End-to-end elimination engine.

For a coefficient triple (a, b, c) this assembles the per-parity Frey
scenarios (lowered level, discriminant-valuation profile, candidate curves),
runs the symplectic criteria against each candidate, and intersects the
resulting elimination conditions into congruence classes of the exponent
prime with an exact density.

Scenario data for the two built-in equations is embedded; other equations
need a scenario file, since discriminant profiles come from a per-equation
local analysis this engine does not redo.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import qrsolver
from .curvedb import CurveDatabase, CurveRecord
from .qrsolver import FALSE, Atom, SignExpr, all_of, any_of
from .symplectic import (
    CriterionError,
    QRConstraint,
    SymplecticType,
    VerdictKind,
    criterion_at_two,
    criterion_multiplicative,
    pairwise_consistency,
)


class UnknownEquationError(Exception):
    pass


class ScenarioFormatError(ValueError):
    pass


class IncompatibleCandidateError(Exception):
    pass


@dataclass(frozen=True)
class ValuationEntry:
    """v_ell of the Frey discriminant: a residue mod p, exact when known."""

    residue: int
    exact: int | None = None

    def __post_init__(self):
        if self.exact is not None and self.exact != self.residue:
            raise ValueError("exact valuation must equal its own residue representative")


@dataclass(frozen=True)
class ExponentFloor:
    strict: bool  # True: p > bound; False: p >= bound
    bound: int

    def __str__(self) -> str:
        return f"p > {self.bound}" if self.strict else f"p ≥ {self.bound}"


@dataclass(frozen=True)
class FreyScenario:
    coefficients: tuple[int, int, int]
    parity_case: str  # "y_odd" | "y_even"
    profile: dict[int, ValuationEntry]
    lowered_level: int
    candidates: tuple[str, ...]
    exponent_floor: ExponentFloor


@dataclass(frozen=True)
class ConstraintStep:
    """One criterion application inside a sub-case."""

    primes: tuple[int, ...]
    kernel: QRConstraint | None  # as derived (None for a hard contradiction)
    reduced: QRConstraint | None  # folded modulo the branch assumption
    status: str  # "pending" | "vacuous" | "violated" | "contradiction" | "kept" | "implied"


@dataclass(frozen=True)
class SubCase:
    legendre_2_p: int | None  # branch on (2/p); None for the pairwise route
    symplectic: SymplecticType
    steps: tuple[ConstraintStep, ...]
    eliminated: bool  # branch yields an unconditional contradiction

    def decisive_kernels(self) -> list[QRConstraint]:
        """The constraints the sub-case turns on, the way a proof would cite them.

        For an eliminated branch these are the violated constraints as
        derived; otherwise the pending reduced constraints.
        """
        if self.eliminated:
            return [s.kernel for s in self.steps if s.status in ("violated", "contradiction") and s.kernel is not None]
        return [s.reduced for s in self.steps if s.status == "pending"]


@dataclass(frozen=True)
class CaseReport:
    candidate: str
    route: str  # "inertia_at_two" | "pairwise"
    subcases: tuple[SubCase, ...]
    elimination: SignExpr


@dataclass(frozen=True)
class ScenarioReport:
    scenario: FreyScenario
    cases: tuple[CaseReport, ...]


@dataclass(frozen=True)
class EquationReport:
    equation: tuple[int, int, int]
    scenarios: tuple[ScenarioReport, ...]
    classes: qrsolver.CongruenceClassSet
    density: Fraction
    exponent_floor: ExponentFloor

    def congruence_text(self) -> str:
        return str(self.classes)


# ---------------------------------------------------------------------------
# embedded scenarios
# ---------------------------------------------------------------------------


def _entry(residue: int, exact: bool = False) -> ValuationEntry:
    return ValuationEntry(residue, residue if exact else None)


_EMBEDDED_SCENARIOS: dict[tuple[int, int, int], list[dict]] = {
    (3, 8, 21): [
        {
            "parity": "y_odd",
            "level": 168,
            "profile": {2: _entry(10, exact=True), 3: _entry(-2), 7: _entry(2)},
            "floor": ExponentFloor(strict=True, bound=7),
        },
        {
            "parity": "y_even",
            "level": 42,
            "profile": {2: _entry(-2), 3: _entry(-2), 7: _entry(2)},
            "floor": ExponentFloor(strict=True, bound=7),
        },
    ],
    (3, 4, 5): [
        {
            "parity": "y_odd",
            "level": 120,
            "profile": {2: _entry(8, exact=True), 3: _entry(2), 5: _entry(2)},
            "floor": ExponentFloor(strict=False, bound=5),
        },
        {
            "parity": "y_even",
            "level": 30,
            "profile": {2: _entry(-4), 3: _entry(2), 5: _entry(2)},
            "floor": ExponentFloor(strict=False, bound=5),
        },
    ],
}


def scenarios(
    a: int,
    b: int,
    c: int,
    db: CurveDatabase | None = None,
    scenario_path: str | None = None,
) -> list[FreyScenario]:
    """Per-parity Frey scenarios for an equation a x^p + b y^p + c z^p = 0."""
    db = db or CurveDatabase()
    key = (a, b, c)
    if scenario_path is not None:
        table = load_scenarios(scenario_path)
        if key in table:
            return _build(key, table[key], db)
    if key in _EMBEDDED_SCENARIOS:
        return _build(key, _EMBEDDED_SCENARIOS[key], db)
    raise UnknownEquationError(
        f"no embedded scenario data for equation {a},{b},{c}; "
        "supply a scenario file (--scenarios) describing its parity cases"
    )


def _build(key, raw_list, db: CurveDatabase) -> list[FreyScenario]:
    out = []
    for raw in raw_list:
        candidates = raw.get("candidates")
        if candidates is None:
            candidates = tuple(rec.label for rec in db.candidates_for_level(raw["level"]))
        out.append(
            FreyScenario(
                coefficients=key,
                parity_case=raw["parity"],
                profile=dict(raw["profile"]),
                lowered_level=raw["level"],
                candidates=tuple(candidates),
                exponent_floor=raw["floor"],
            )
        )
    return out


# ---------------------------------------------------------------------------
# scenario files:  a,b,c | parity | level | l:v,... (v! = exact) | labels | floor
# ---------------------------------------------------------------------------


def parse_scenario_line(line: str) -> tuple[tuple[int, int, int], dict]:
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 6:
        raise ScenarioFormatError(f"expected 6 '|'-separated fields, got {len(parts)}")
    eq_s, parity, level_s, profile_s, cand_s, floor_s = parts
    try:
        eq = tuple(int(x) for x in eq_s.split(","))
    except ValueError:
        raise ScenarioFormatError(f"bad equation triple {eq_s!r}") from None
    if len(eq) != 3:
        raise ScenarioFormatError("equation needs exactly 3 coefficients")
    if parity not in ("y_odd", "y_even"):
        raise ScenarioFormatError(f"parity must be y_odd or y_even, got {parity!r}")
    try:
        level = int(level_s)
    except ValueError:
        raise ScenarioFormatError(f"bad level {level_s!r}") from None
    profile = {}
    for item in profile_s.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            ell_s, v_s = item.split(":")
            exact = v_s.endswith("!")
            v = int(v_s[:-1] if exact else v_s)
            profile[int(ell_s)] = ValuationEntry(v, v if exact else None)
        except ValueError:
            raise ScenarioFormatError(f"bad profile entry {item!r}") from None
    candidates = tuple(x.strip() for x in cand_s.split(",") if x.strip())
    if not candidates:
        raise ScenarioFormatError("scenario needs at least one candidate label")
    floor_s = floor_s.replace(" ", "")
    if floor_s.startswith("p>="):
        floor = ExponentFloor(strict=False, bound=int(floor_s[3:]))
    elif floor_s.startswith("p>"):
        floor = ExponentFloor(strict=True, bound=int(floor_s[2:]))
    else:
        raise ScenarioFormatError(f"bad exponent floor {floor_s!r} (use p>N or p>=N)")
    return eq, {
        "parity": parity,
        "level": level,
        "profile": profile,
        "candidates": candidates,
        "floor": floor,
    }


def load_scenarios(path: str) -> dict[tuple[int, int, int], list[dict]]:
    table: dict[tuple[int, int, int], list[dict]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                eq, scenario = parse_scenario_line(line)
            except ScenarioFormatError as e:
                raise ScenarioFormatError(f"{path}:{lineno}: {e}") from None
            table.setdefault(eq, []).append(scenario)
    return table


# ---------------------------------------------------------------------------
# criteria application
# ---------------------------------------------------------------------------


def _reduce_modulo_branch(constraint: QRConstraint, legendre_2_p: int) -> QRConstraint:
    """Fold the factor 2 out of a constraint kernel once (2/p) is pinned."""
    n, sign = constraint.n, constraint.sign
    if n % 2 == 0:
        n //= 2
        sign *= legendre_2_p
    return QRConstraint(n, sign)


def _inertia_route(scenario: FreyScenario, record: CurveRecord) -> CaseReport:
    v2 = scenario.profile.get(2)
    if v2 is None or v2.exact is None:
        raise CriterionError(
            f"candidate {record.label} takes the inertia-at-2 route, which needs an "
            f"exact 2-adic valuation in the {scenario.parity_case} profile"
        )
    shared_odd = sorted(
        ell
        for ell in scenario.profile
        if ell != 2 and record.is_multiplicative_at(ell)
    )
    subcases = []
    branch_exprs = []
    for eps in (-1, 1):
        sym = criterion_at_two(
            v2.exact,
            record.disc_valuations[2],
            eps,
            frey_sl2f3=True,
            candidate_sl2f3=record.inertia_sl2f3_at_2,
        )
        steps = []
        eliminated = False
        pending: list[QRConstraint] = []
        for ell in shared_odd:
            verdict = criterion_multiplicative(
                scenario.profile[ell].residue, record.disc_valuations[ell], sym
            )
            assert verdict is not None  # sym is never UNKNOWN here
            if verdict.kind is VerdictKind.CONTRADICTION:
                steps.append(ConstraintStep((ell,), None, None, "contradiction"))
                eliminated = True
            elif verdict.kind is VerdictKind.ALWAYS_CONSISTENT:
                steps.append(ConstraintStep((ell,), QRConstraint(1, 1), None, "vacuous"))
            else:
                kernel = verdict.constraint
                reduced = _reduce_modulo_branch(kernel, eps)
                if reduced.n == 1:
                    if reduced.sign == 1:
                        steps.append(ConstraintStep((ell,), kernel, reduced, "vacuous"))
                    else:
                        steps.append(ConstraintStep((ell,), kernel, reduced, "violated"))
                        eliminated = True
                else:
                    steps.append(ConstraintStep((ell,), kernel, reduced, "pending"))
                    if reduced not in pending:
                        pending.append(reduced)
        subcases.append(SubCase(eps, sym, tuple(steps), eliminated))
        branch_atom = Atom(QRConstraint(2, eps))
        if eliminated:
            branch_exprs.append(branch_atom)
        elif pending:
            violations = any_of(Atom(c.negated()) for c in pending)
            branch_exprs.append(branch_atom & violations)
    elimination = any_of(branch_exprs) if branch_exprs else FALSE
    return CaseReport(record.label, "inertia_at_two", tuple(subcases), elimination)


def _pairwise_route(scenario: FreyScenario, record: CurveRecord) -> CaseReport:
    shared = sorted(ell for ell in scenario.profile if ell in record.disc_valuations)
    for ell in shared:
        if not record.is_multiplicative_at(ell):
            raise CriterionError(
                f"candidate {record.label} is not multiplicative at {ell}; "
                "the pairwise route needs multiplicative reduction at every shared prime"
            )
    raw = pairwise_consistency(
        [(ell, scenario.profile[ell].residue) for ell in shared],
        [(ell, record.disc_valuations[ell]) for ell in shared],
    )
    pairs = [(l1, l2) for i, l1 in enumerate(shared) for l2 in shared[i + 1 :]]
    simplified = qrsolver.simplify(raw)
    steps = []
    if simplified is qrsolver.CONTRADICTION:
        for (l1, l2), kernel in zip(pairs, raw):
            steps.append(ConstraintStep((l1, l2), kernel, None, "contradiction"))
        subcase = SubCase(None, SymplecticType.UNKNOWN, tuple(steps), True)
        return CaseReport(record.label, "pairwise", (subcase,), qrsolver.TRUE)
    kept = list(simplified)
    for (l1, l2), kernel in zip(pairs, raw):
        if kernel.n == 1:
            steps.append(ConstraintStep((l1, l2), kernel, None, "vacuous"))
        elif kernel in kept:
            steps.append(ConstraintStep((l1, l2), kernel, kernel, "kept"))
            kept.remove(kernel)
        else:
            steps.append(ConstraintStep((l1, l2), kernel, None, "implied"))
    minimal = [c for c in simplified if c.n != 1]
    elimination = any_of(Atom(c.negated()) for c in minimal) if minimal else FALSE
    subcase = SubCase(None, SymplecticType.UNKNOWN, tuple(steps), False)
    return CaseReport(record.label, "pairwise", (subcase,), elimination)


def run_case(scenario: FreyScenario, record: CurveRecord) -> CaseReport:
    """Elimination condition for one (scenario, candidate-curve) pair."""
    if not set(record.disc_valuations) <= set(scenario.profile):
        raise IncompatibleCandidateError(
            f"candidate {record.label} has bad primes {record.bad_primes()} outside "
            f"the scenario profile primes {sorted(scenario.profile)}"
        )
    if record.inertia_sl2f3_at_2:
        return _inertia_route(scenario, record)
    return _pairwise_route(scenario, record)


def run_equation(
    a: int,
    b: int,
    c: int,
    db: CurveDatabase | None = None,
    scenario_path: str | None = None,
) -> EquationReport:
    """Contradiction classes for a x^p + b y^p + c z^p = 0, with density."""
    db = db or CurveDatabase()
    scen_list = scenarios(a, b, c, db, scenario_path)
    reports = []
    all_conditions = []
    for scen in scen_list:
        cases = tuple(run_case(scen, db.get(label)) for label in scen.candidates)
        reports.append(ScenarioReport(scen, cases))
        all_conditions.extend(case.elimination for case in cases)
    total = all_of(all_conditions)
    classes = qrsolver.to_classes(total)
    dens = qrsolver.density(classes)
    floor = scen_list[0].exponent_floor
    return EquationReport((a, b, c), tuple(reports), classes, dens, floor)
