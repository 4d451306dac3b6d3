"""Candidate-curve database.

Six curves are embedded: the newform representatives at levels 30, 42, 120
and 168 that the elimination pipeline compares Frey curves against.  Their
Weierstrass models are verifiable data: ``verify`` recomputes the minimal
discriminant and reduction types from the model and diffs them against the
stored claims.  The inertia flags at 2 are axioms and are not recomputed.

Records for other equations can be supplied through an override file; see
``load_overrides`` for the line format.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ecmodel import (
    ReductionKind,
    ReductionType,
    WeierstrassModel,
    invariants,
    minimal_model,
    reduction_type,
)
from .ntkernel import factor_small


class UnknownLabelError(KeyError):
    pass


class UnknownLevelError(KeyError):
    pass


class OverrideFormatError(ValueError):
    pass


@dataclass(frozen=True)
class CurveRecord:
    label: str
    conductor: int
    disc_sign: int
    disc_valuations: dict[int, int]
    reduction_at: dict[int, ReductionType]
    inertia_sl2f3_at_2: bool
    model: WeierstrassModel | None = None

    def bad_primes(self) -> list[int]:
        return sorted(self.disc_valuations)

    def is_multiplicative_at(self, ell: int) -> bool:
        red = self.reduction_at.get(ell)
        return red is not None and red.kind is ReductionKind.MULTIPLICATIVE


@dataclass(frozen=True)
class VerificationReport:
    label: str
    status: str  # "verified" | "mismatch" | "unverifiable"
    mismatches: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.status == "verified"


_MULT = ReductionType(ReductionKind.MULTIPLICATIVE, potentially_good=False)
_ADD_PG = ReductionType(ReductionKind.ADDITIVE, potentially_good=True)


def _record(label, conductor, sign, vals, red, sl2f3, ainvs):
    return CurveRecord(
        label=label,
        conductor=conductor,
        disc_sign=sign,
        disc_valuations=vals,
        reduction_at=red,
        inertia_sl2f3_at_2=sl2f3,
        model=WeierstrassModel(*ainvs) if ainvs else None,
    )


_EMBEDDED: dict[str, CurveRecord] = {
    r.label: r
    for r in [
        _record(
            "42a1", 42, -1, {2: 8, 3: 2, 7: 1},
            {2: _MULT, 3: _MULT, 7: _MULT}, False, (1, 1, 1, -4, 5),
        ),
        _record(
            "30a1", 30, -1, {2: 4, 3: 3, 5: 1},
            {2: _MULT, 3: _MULT, 5: _MULT}, False, (1, 0, 1, 1, 2),
        ),
        _record(
            "168a1", 168, 1, {2: 4, 3: 1, 7: 1},
            {2: _ADD_PG, 3: _MULT, 7: _MULT}, True, (0, 1, 0, -7, -10),
        ),
        _record(
            "168b1", 168, -1, {2: 4, 3: 3, 7: 4},
            {2: _ADD_PG, 3: _MULT, 7: _MULT}, True, (0, -1, 0, -7, 52),
        ),
        _record(
            "120a1", 120, 1, {2: 4, 3: 2, 5: 1},
            {2: _ADD_PG, 3: _MULT, 5: _MULT}, True, (0, 1, 0, -15, 18),
        ),
        _record(
            "120b1", 120, -1, {2: 8, 3: 1, 5: 1},
            {2: _ADD_PG, 3: _MULT, 5: _MULT}, True, (0, 1, 0, 4, 0),
        ),
    ]
}

_EMBEDDED_LEVELS: dict[int, tuple[str, ...]] = {
    30: ("30a1",),
    42: ("42a1",),
    120: ("120a1", "120b1"),
    168: ("168a1", "168b1"),
}


class CurveDatabase:
    """Embedded records plus optional user overrides; immutable after load."""

    def __init__(self, overrides: dict[str, CurveRecord] | None = None):
        self._records = dict(_EMBEDDED)
        self._levels = {n: list(labels) for n, labels in _EMBEDDED_LEVELS.items()}
        for label, rec in (overrides or {}).items():
            self._records[label] = rec
            bucket = self._levels.setdefault(rec.conductor, [])
            if label not in bucket:
                bucket.append(label)

    def get(self, label: str) -> CurveRecord:
        try:
            return self._records[label]
        except KeyError:
            raise UnknownLabelError(f"unknown curve label {label!r}") from None

    def candidates_for_level(self, level: int) -> list[CurveRecord]:
        try:
            labels = self._levels[level]
        except KeyError:
            raise UnknownLevelError(f"no candidate curves for level {level}") from None
        return [self._records[x] for x in labels]

    def labels(self) -> list[str]:
        return sorted(self._records)


def get(label: str, db: CurveDatabase | None = None) -> CurveRecord:
    return (db or CurveDatabase()).get(label)


def candidates_for_level(level: int, db: CurveDatabase | None = None) -> list[CurveRecord]:
    return (db or CurveDatabase()).candidates_for_level(level)


def verify(record: CurveRecord) -> VerificationReport:
    """Recompute discriminant data from the model and diff against the record."""
    if record.model is None:
        return VerificationReport(record.label, "unverifiable")
    mismatches = []
    minimal, vals = minimal_model(record.model)
    delta = invariants(minimal).delta
    sign = 1 if delta > 0 else -1
    if sign != record.disc_sign:
        mismatches.append(f"disc sign: model gives {sign}, record claims {record.disc_sign}")
    if vals != record.disc_valuations:
        mismatches.append(
            f"disc valuations: model gives {vals}, record claims {record.disc_valuations}"
        )
    cond_primes = set(factor_small(record.conductor).factors)
    if set(record.disc_valuations) != cond_primes:
        mismatches.append(
            f"valuation primes {sorted(record.disc_valuations)} differ from "
            f"conductor primes {sorted(cond_primes)}"
        )
    for ell, claimed in sorted(record.reduction_at.items()):
        actual = reduction_type(minimal, ell)
        if actual != claimed:
            mismatches.append(
                f"reduction at {ell}: model gives {actual.kind.value}"
                f" (potentially_good={actual.potentially_good}), record claims"
                f" {claimed.kind.value} (potentially_good={claimed.potentially_good})"
            )
    if record.inertia_sl2f3_at_2:
        red2 = record.reduction_at.get(2)
        if red2 is None or red2.kind is not ReductionKind.ADDITIVE or not red2.potentially_good:
            mismatches.append(
                "inertia flag at 2 requires additive, potentially good reduction at 2"
            )
    if mismatches:
        return VerificationReport(record.label, "mismatch", tuple(mismatches))
    return VerificationReport(record.label, "verified")


# ---------------------------------------------------------------------------
# override file
# ---------------------------------------------------------------------------

_RED_CODES = {
    "good": ReductionType(ReductionKind.GOOD, potentially_good=True),
    "mult": _MULT,
    "add": ReductionType(ReductionKind.ADDITIVE, potentially_good=False),
    "addpg": _ADD_PG,
}


def parse_override_line(line: str) -> CurveRecord:
    """One record per line:

        label | conductor | sign | l:v,l:v,... | red2 | sl2f3 | [a1,a2,a3,a4,a6]

    red2 is one of good/mult/add/addpg; reduction at odd primes with positive
    valuation defaults to multiplicative.  sl2f3 is true/false.  The model is
    optional: use ``-`` to omit it.
    """
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 7:
        raise OverrideFormatError(f"expected 7 '|'-separated fields, got {len(parts)}")
    label, cond_s, sign_s, vals_s, red2_s, sl2f3_s, model_s = parts
    try:
        conductor = int(cond_s)
        sign = int(sign_s)
    except ValueError as e:
        raise OverrideFormatError(f"bad integer field: {e}") from None
    if sign not in (1, -1):
        raise OverrideFormatError(f"sign must be 1 or -1, got {sign}")
    vals = {}
    for item in vals_s.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            ell_s, v_s = item.split(":")
            vals[int(ell_s)] = int(v_s)
        except ValueError:
            raise OverrideFormatError(f"bad valuation entry {item!r}") from None
    if red2_s not in _RED_CODES:
        raise OverrideFormatError(f"red2 must be one of {sorted(_RED_CODES)}, got {red2_s!r}")
    if sl2f3_s.lower() not in ("true", "false", "0", "1"):
        raise OverrideFormatError(f"sl2f3 must be true/false, got {sl2f3_s!r}")
    sl2f3 = sl2f3_s.lower() in ("true", "1")
    model = None
    if model_s != "-":
        if not (model_s.startswith("[") and model_s.endswith("]")):
            raise OverrideFormatError(f"model must be [a1,a2,a3,a4,a6] or '-', got {model_s!r}")
        try:
            ainvs = [int(x) for x in model_s[1:-1].split(",")]
        except ValueError:
            raise OverrideFormatError(f"bad model coefficients {model_s!r}") from None
        if len(ainvs) != 5:
            raise OverrideFormatError("model needs exactly 5 coefficients")
        model = WeierstrassModel(*ainvs)
    reduction = {}
    for ell, v in vals.items():
        if ell == 2:
            reduction[2] = _RED_CODES[red2_s]
        elif v > 0:
            reduction[ell] = _MULT
    if sl2f3 and (2 not in vals or red2_s != "addpg"):
        raise OverrideFormatError(
            "sl2f3 requires a valuation at 2 and red2 = addpg "
            "(additive, potentially good reduction)"
        )
    return CurveRecord(
        label=label,
        conductor=conductor,
        disc_sign=sign,
        disc_valuations=vals,
        reduction_at=reduction,
        inertia_sl2f3_at_2=sl2f3,
        model=model,
    )


def load_overrides(path: str) -> dict[str, CurveRecord]:
    records = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                rec = parse_override_line(line)
            except OverrideFormatError as e:
                raise OverrideFormatError(f"{path}:{lineno}: {e}") from None
            records[rec.label] = rec
    return records
