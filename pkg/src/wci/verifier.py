"""Catalog-driven property suites and the census.

Each suite runs named checks on every applicable catalog ring.  A check is
a predicate on concrete elements; scanning it over a ring either passes or
produces the first failing arguments, which together with the ring spec
form a witness that :func:`reproduce` can re-run on its own.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import index as ix
from .constructors import SymbolicTriangularRing, build, build_symbolic_t3, trunc_poly
from .errors import InputError, RingAxiomError, RingError
from .ring import (
    RingTable,
    center,
    idempotents,
    is_abelian,
    is_local,
    jacobson_radical,
    nilpotents,
    noncentral_idempotent,
    quasi_regular,
    quotient,
    subring_generated,
    unit_mask,
    units,
    verify_ring_axioms,
)

DEFAULT_SEED = 20240611
SUITES = (
    "lemma-basic",
    "subring-monotonicity",
    "jset-bijection",
    "classification",
    "trunc-poly-growth",
    "theorem3-witness",
)
SUBRING_ORDER_LIMIT = 16
TRUNC_DEGREES = (2, 3)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: dict


def load_catalog(path: str | Path | None = None) -> list[CatalogEntry]:
    """Read a catalog JSON file (the bundled default when ``path`` is None)."""
    if path is None:
        text = resources.files("wci.data").joinpath("catalog.json").read_text()
        source = "bundled catalog"
    else:
        source = str(path)
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"cannot read catalog {source}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, list):
        raise InputError(f"{source}: a catalog is a JSON list of {{name, spec}} objects")
    entries = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "name" not in item or "spec" not in item:
            raise InputError(f"{source}[{i}]: expected an object with 'name' and 'spec'")
        entries.append(CatalogEntry(str(item["name"]), item["spec"]))
    return entries


def default_catalog() -> list[CatalogEntry]:
    return load_catalog()


# --- reports ---------------------------------------------------------------------


@dataclass
class Outcome:
    suite: str
    ring: str
    check: str
    outcome: str  # "pass" | "fail" | "na"
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "ring": self.ring,
            "check": self.check,
            "outcome": self.outcome,
            "witness": self.witness,
        }


@dataclass
class VerificationReport:
    suite: str
    results: list[Outcome] = field(default_factory=list)
    seed: int = DEFAULT_SEED
    elapsed_ms: int = 0

    @property
    def totals(self) -> dict[str, int]:
        counts = {"pass": 0, "fail": 0, "na": 0}
        for r in self.results:
            counts[r.outcome] += 1
        return counts

    @property
    def passed(self) -> bool:
        return all(r.outcome != "fail" for r in self.results)

    def failures(self) -> list[Outcome]:
        return [r for r in self.results if r.outcome == "fail"]

    def for_ring(self, name: str) -> list[Outcome]:
        return [r for r in self.results if r.ring == name]

    def to_dict(self, *, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "results": [r.to_dict() for r in self.results],
            "seed": self.seed,
            "totals": self.totals,
        }
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


# --- element-level checks ----------------------------------------------------------
# Each returns True when the property holds for the given arguments.


def _chi_set(ring, a) -> set:
    return set(ix.chi(ring, a).members)


def _check_axioms(ring: RingTable) -> bool:
    return not verify_ring_axioms(ring)


def _check_chi_definition(ring: RingTable, a: int) -> bool:
    unit_set = set(units(ring))
    direct = {
        e for e in idempotents(ring)
        if ring.sub(a, e) in unit_set or ring.add(a, e) in unit_set
    }
    return direct == _chi_set(ring, a)


def _check_central_nilpotent(ring: RingTable, n: int) -> bool:
    return len(ix.chi(ring, n)) == 1


def _check_central_idempotent(ring: RingTable, e: int) -> bool:
    return len(ix.chi(ring, e)) >= 1


def _check_radical_shift(ring: RingTable, a: int, w: int) -> bool:
    return _chi_set(ring, a) == _chi_set(ring, ring.add(a, w))


def _check_complement(ring: RingTable, a: int, e: int) -> bool:
    if e not in _chi_set(ring, a):
        return True
    f = ring.sub(ring.one, e)
    return f in _chi_set(ring, ring.sub(ring.one, a)) or f in _chi_set(ring, ring.add(ring.one, a))


def _check_complement_converse(ring: RingTable, a: int, e: int) -> bool:
    f = ring.sub(ring.one, e)
    if f in _chi_set(ring, ring.sub(ring.one, a)) or f in _chi_set(ring, ring.add(ring.one, a)):
        return e in _chi_set(ring, a)
    return True


def _inverse(ring: RingTable, u: int) -> int:
    us = np.asarray(units(ring), dtype=np.int64)
    hit = us[(ring.mul(u, us) == ring.one) & (ring.mul(us, u) == ring.one)]
    return int(hit[0])


def _check_conjugation(ring: RingTable, a: int, u: int) -> bool:
    v = _inverse(ring, u)
    moved = {ring.mul(ring.mul(u, e), v) for e in _chi_set(ring, a)}
    return moved == _chi_set(ring, ring.mul(ring.mul(u, a), v))


def _check_unit_idempotent_bound(ring: RingTable) -> bool:
    return ix.weak_clean_index(ring) <= min(len(units(ring)), len(idempotents(ring)))


def _check_local_index(ring: RingTable) -> bool:
    win = ix.weak_clean_index(ring)
    residue = quotient(ring, jacobson_radical(ring)).order
    return win <= 2 and (win == 2) == (residue != 2)


def _half(ring: RingTable) -> int:
    two = ring.add(ring.one, ring.one)
    return _inverse(ring, two)


def _check_half_chi(ring: RingTable) -> bool:
    return _chi_set(ring, _half(ring)) == set(idempotents(ring))


def _check_clean_inside_weak(ring: RingTable, a: int) -> bool:
    return set(ix.chi_clean(ring, a).members) <= _chi_set(ring, a)


def _check_index_order(ring: RingTable) -> bool:
    return 1 <= ix.clean_index(ring) <= ix.weak_clean_index(ring)


def _check_unit_shift(ring: RingTable) -> bool:
    shifted = {ring.add(ring.one, q) for q in quasi_regular(ring)}
    return shifted == set(units(ring))


def _check_jset_image(ring: RingTable, a: int) -> bool:
    return tuple(ix.chi(ring, a).members) == tuple(ix.jset_image(ring, ring.sub(a, ring.one)))


def _check_jset_cardinality(ring: RingTable, a: int) -> bool:
    return len(ix.chi(ring, a)) == len(ix.j_sets(ring, ring.sub(a, ring.one)).union)


def _subring(ring: RingTable, seed: list[int]) -> RingTable:
    return subring_generated(ring, seed).as_ring()


def _check_subring_monotonicity(ring: RingTable, seed: list[int]) -> bool:
    return ix.win_via_jsets(_subring(ring, seed)) <= ix.weak_clean_index(ring)


def _check_subring_jset_index(ring: RingTable, seed: list[int]) -> bool:
    sub = _subring(ring, seed)
    return sub.one is None or ix.win_via_jsets(sub) == ix.weak_clean_index(sub)


def _classification(ring: RingTable) -> tuple[bool, dict]:
    win, argmax = ix.index_argmax(ring)
    preds = {1: ix.predicate_win1(ring), 2: ix.predicate_win2(ring), 3: ix.predicate_win3(ring)}
    matched = [k for k, p in preds.items() if p.holds]
    expected = [win] if win in preds else []
    single_clause = all(len(p.matched_clauses) <= 1 for p in preds.values())
    info = {
        "win": win,
        "argmax": argmax,
        "predicates_true": matched,
        "clauses": {str(k): list(p.matched_clauses) for k, p in preds.items() if p.holds},
        "evidence": {str(k): p.witness for k, p in preds.items() if p.holds},
    }
    return matched == expected and single_clause, info


def _check_classification(ring: RingTable) -> bool:
    return _classification(ring)[0]


def _check_trunc_growth(ring: RingTable, k: int) -> bool:
    return check_trunc_poly_growth(ring, k)["outcome"] == "pass"


def _check_truncation_index(ring: RingTable, k: int) -> bool:
    return ix.weak_clean_index(trunc_poly(ring, k)) == ix.weak_clean_index(ring)


def _check_constant_idempotents(ring: RingTable, k: int) -> bool:
    """Idempotents of R[x]/(x^k) are exactly the constant idempotents of R."""
    t = trunc_poly(ring, k)
    got = sorted(tuple(t.decode(e)) for e in idempotents(t))
    want = sorted((e,) + (0,) * (k - 1) for e in idempotents(ring))
    return got == want


CHECKS: dict[str, Callable[..., bool]] = {
    "axioms": _check_axioms,
    "chi-definition": _check_chi_definition,
    "central-nilpotent-chi": _check_central_nilpotent,
    "central-idempotent-chi": _check_central_idempotent,
    "radical-shift": _check_radical_shift,
    "complement": _check_complement,
    "complement-converse": _check_complement_converse,
    "conjugation": _check_conjugation,
    "unit-idempotent-bound": _check_unit_idempotent_bound,
    "local-index-two": _check_local_index,
    "half-chi": _check_half_chi,
    "clean-inside-weak": _check_clean_inside_weak,
    "index-order": _check_index_order,
    "unit-shift": _check_unit_shift,
    "jset-image": _check_jset_image,
    "jset-cardinality": _check_jset_cardinality,
    "subring-monotonicity": _check_subring_monotonicity,
    "subring-jset-index": _check_subring_jset_index,
    "classification": _check_classification,
    "trunc-growth": _check_trunc_growth,
    "truncation-index": _check_truncation_index,
    "constant-idempotents": _check_constant_idempotents,
}


def reproduce(witness: dict) -> bool:
    """Re-run a failure witness standalone; True when the failure recurs."""
    check = CHECKS[witness["check"]]
    try:
        ring = build(witness["spec"])
    except RingAxiomError:
        return witness["check"] == "axioms"
    return not check(ring, **witness.get("args", {}))


# --- suite machinery -----------------------------------------------------------------------


class _Runner:
    def __init__(self, suite: str, entry: CatalogEntry, ring, out: list[Outcome]):
        self.suite, self.entry, self.ring, self.out = suite, entry, ring, out

    def na(self, check: str, reason: str) -> None:
        self.out.append(Outcome(self.suite, self.entry.name, check, "na", {"reason": reason}))

    def scan(self, check: str, arg_sets, info: dict | None = None) -> bool:
        """Run ``check`` on every argument set; record the first failure."""
        fn = CHECKS[check]
        count = 0
        for args in arg_sets:
            count += 1
            if not fn(self.ring, **args):
                self.out.append(Outcome(self.suite, self.entry.name, check, "fail", {
                    "check": check, "spec": self.entry.spec, "args": _plain(args), **(info or {}),
                }))
                return False
        self.out.append(Outcome(self.suite, self.entry.name, check, "pass",
                                {"cases": count, **(info or {})}))
        return True


def _plain(value):
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    return value


def _build_entry(suite: str, entry: CatalogEntry, out: list[Outcome], size_cap: int | None):
    try:
        return build(entry.spec, size_cap=size_cap)
    except RingAxiomError as exc:
        out.append(Outcome(suite, entry.name, "axioms", "fail", {
            "check": "axioms", "spec": entry.spec, "args": {},
            "error": str(exc), "violations": [v.to_dict() for v in exc.violations],
        }))
    except RingError as exc:
        out.append(Outcome(suite, entry.name, "build", "fail", {"spec": entry.spec, "error": str(exc)}))
    return None


def _elements(ring: RingTable):
    return [{"a": int(a)} for a in range(ring.order)]


def _basic_suite(run: _Runner) -> None:
    r = run.ring
    if not run.scan("axioms", [{}]):
        return
    run.scan("chi-definition", _elements(r))
    central = set(center(r))
    run.scan("central-nilpotent-chi", [{"n": n} for n in nilpotents(r) if n in central])
    run.scan("central-idempotent-chi", [{"e": e} for e in idempotents(r) if e in central])
    rad = jacobson_radical(r)
    run.scan("radical-shift", [{"a": a, "w": w} for a in range(r.order) for w in rad])
    pairs = [{"a": a, "e": e} for a in range(r.order) for e in idempotents(r)]
    run.scan("complement", pairs)
    two = r.add(r.one, r.one)
    if two in set(rad):
        run.scan("complement-converse", pairs)
    else:
        run.na("complement-converse", "2 is not in the Jacobson radical")
    run.scan("conjugation", [{"a": a, "u": u} for u in units(r) for a in range(r.order)])
    run.scan("unit-idempotent-bound", [{}])
    if is_local(r):
        run.scan("local-index-two", [{}])
    else:
        run.na("local-index-two", "ring is not local")
    if not ix.is_clean(r):
        run.na("half-chi", "ring is not clean")
    elif not unit_mask(r)[two]:
        run.na("half-chi", "2 is not a unit")
    else:
        run.scan("half-chi", [{}])
    run.scan("clean-inside-weak", _elements(r))
    run.scan("index-order", [{}])


def _subring_monotonicity(run: _Runner) -> None:
    r = run.ring
    if r.order > SUBRING_ORDER_LIMIT:
        run.na("subring-monotonicity", f"order {r.order} above {SUBRING_ORDER_LIMIT}")
        return
    seen, seeds = set(), []
    candidates = [[a] for a in range(r.order)] + [list(p) for p in combinations(range(r.order), 2)]
    for seed in candidates:
        members = tuple(subring_generated(r, seed).members)
        if members not in seen:
            seen.add(members)
            seeds.append({"seed": seed})
    info = {"distinct_subrings": len(seeds)}
    run.scan("subring-monotonicity", seeds, info)
    run.scan("subring-jset-index", seeds, info)


def _jset_bijection(run: _Runner) -> None:
    r = run.ring
    run.scan("unit-shift", [{}])
    run.scan("jset-image", _elements(r))
    run.scan("jset-cardinality", _elements(r))


def _classification_suite(run: _Runner) -> None:
    ok, info = _classification(run.ring)
    if ok:
        run.out.append(Outcome(run.suite, run.entry.name, "classification", "pass", _plain(info)))
    else:
        run.out.append(Outcome(run.suite, run.entry.name, "classification", "fail", _plain({
            "check": "classification", "spec": run.entry.spec, "args": {}, **info,
        })))


def _trunc_suite(run: _Runner) -> None:
    r = run.ring
    for k in TRUNC_DEGREES:
        if is_abelian(r):
            run.scan("truncation-index", [{"k": k}], {"k": k})
            run.scan("constant-idempotents", [{"k": k}], {"k": k})
            run.na("trunc-growth", f"k={k}: ring is abelian")
        else:
            report = check_trunc_poly_growth(r, k)
            run.scan("trunc-growth", [{"k": k}], _plain({
                key: report[key] for key in ("k", "chi_size", "idempotent", "r")
            }))


def _symbolic_suite(run: _Runner, *, samples: int, window: int, seed: int) -> None:
    report = check_theorem3_witness(samples=samples, window=window, seed=seed, ring=run.ring)
    witness = {k: v for k, v in report.items() if k != "outcome"}
    if report["outcome"] != "pass":
        witness.update({"spec": run.entry.spec})
    run.out.append(Outcome(run.suite, run.entry.name, "theorem3-witness", report["outcome"], witness))


def run_suite(
    name: str,
    catalog: list[CatalogEntry] | None = None,
    *,
    seed: int = DEFAULT_SEED,
    samples: int = 1000,
    window: int = 50,
    size_cap: int | None = None,
) -> VerificationReport:
    """Run one suite (or ``"all"``) over ``catalog`` (default catalog if None)."""
    if name != "all" and name not in SUITES:
        raise InputError(f"unknown suite {name!r}; expected one of {', '.join(SUITES + ('all',))}")
    catalog = default_catalog() if catalog is None else catalog
    started = time.perf_counter()
    report = VerificationReport(name, seed=seed)
    for suite in SUITES if name == "all" else (name,):
        for entry in catalog:
            ring = _build_entry(suite, entry, report.results, size_cap)
            if ring is None:
                continue
            run = _Runner(suite, entry, ring, report.results)
            if isinstance(ring, SymbolicTriangularRing):
                if suite == "theorem3-witness":
                    _symbolic_suite(run, samples=samples, window=window, seed=seed)
                else:
                    run.na(suite, "infinite ring: exhaustive scans do not apply")
                continue
            if suite == "theorem3-witness":
                run.na(suite, "finite ring: the witness ring is infinite")
            elif ring.one is None:
                run.na(suite, "ring has no identity")
            elif suite == "lemma-basic":
                _basic_suite(run)
            elif suite == "subring-monotonicity":
                _subring_monotonicity(run)
            elif suite == "jset-bijection":
                _jset_bijection(run)
            elif suite == "classification":
                _classification_suite(run)
            elif suite == "trunc-poly-growth":
                _trunc_suite(run)
    report.elapsed_ms = int((time.perf_counter() - started) * 1000)
    return report


# --- polynomial growth and the infinite witness ----------------------------------------------


def check_trunc_poly_growth(ring: RingTable, k: int, *, size_cap: int | None = None) -> dict:
    """Distinct weak clean expressions of one element in R[x]/(x^k).

    With n = er(1-e) != 0 and a = (1 + n) - e, each i in 1..k-1 gives
    a = [1 + n(1 + x^i)] - [e + n x^i], so chi(a) contains e and the k-1
    idempotents e + n x^i.
    """
    if k < 2:
        raise InputError("growth check needs k >= 2")
    ring.require_unital("growth check")
    found = noncentral_idempotent(ring)
    if found is None:
        return {"outcome": "na", "reason": "ring is abelian", "k": k}
    xs = ring.elements()
    pair = None
    for e in idempotents(ring):
        f = ring.sub(ring.one, e)
        hits = np.flatnonzero(ring.mul(ring.mul(e, xs), f) != 0)
        if hits.size:
            pair = (int(e), int(hits[0]))
            break
    e, r = pair
    one = ring.one
    n = ring.mul(ring.mul(e, r), ring.sub(one, e))
    t = trunc_poly(ring, k, cap=size_cap)
    a = t.encode(tuple(ring.label(c) for c in (ring.sub(ring.add(one, n), e),) + (0,) * (k - 1)))
    u_mask = unit_mask(t)

    def poly(*coeffs):
        return t.encode(tuple(ring.label(c) for c in coeffs))

    expressions, claimed = [], {poly(e, *([0] * (k - 1)))}
    ok = bool(u_mask[poly(ring.add(one, n), *([0] * (k - 1)))])
    for i in range(1, k):
        coeff_u = [ring.add(one, n)] + [n if j == i else 0 for j in range(1, k)]
        coeff_e = [e] + [n if j == i else 0 for j in range(1, k)]
        unit, idem = poly(*coeff_u), poly(*coeff_e)
        valid = bool(u_mask[unit]) and t.mul(idem, idem) == idem and t.sub(unit, idem) == a
        ok = ok and valid
        claimed.add(idem)
        expressions.append({"i": i, "unit": _plain(t.label(unit)), "idempotent": _plain(t.label(idem)), "valid": valid})
    members = set(ix.chi(t, a).members)
    ok = ok and claimed <= members and len(members) >= k
    return {
        "outcome": "pass" if ok else "fail",
        "k": k,
        "idempotent": _plain(ring.label(e)),
        "r": _plain(ring.label(r)),
        "a": _plain(t.label(a)),
        "expressions": expressions,
        "chi_size": len(members),
    }


def check_theorem3_witness(
    samples: int = 1000,
    window: int = 50,
    seed: int = DEFAULT_SEED,
    ring: SymbolicTriangularRing | None = None,
) -> dict:
    """On [[Z, Z_3], [0, Z]]: |chi(0, 0, 1)| = 3 and |chi| <= 3 on seeded samples."""
    ring = build_symbolic_t3() if ring is None else ring
    alpha0 = (0, 0, 1)
    members0 = list(ix.chi(ring, alpha0).members)
    rng = random.Random(seed)
    fixed = [ring.one, (5, 1, -7)]
    drawn = [
        (rng.randint(-window, window), rng.randrange(ring.module_order), rng.randint(-window, window))
        for _ in range(samples)
    ]
    worst, violations = 0, []
    for alpha in fixed + drawn:
        size = len(ix.chi(ring, alpha))
        worst = max(worst, size)
        if size > 3:
            violations.append({"alpha": list(alpha), "chi_size": size})
    predicate = ix.predicate_win3(ring)
    ok = len(members0) == 3 and not violations and predicate.holds
    return {
        "outcome": "pass" if ok else "fail",
        "alpha0": list(alpha0),
        "alpha0_chi": [list(m) for m in members0],
        "alpha0_size": len(members0),
        "samples": samples,
        "window": window,
        "seed": seed,
        "max_chi_size": worst,
        "violations": violations[:10],
        "predicate": predicate.to_dict(),
    }


# --- census -------------------------------------------------------------------------------


def search_max_win(catalog: list[CatalogEntry] | None = None, *, jobs: int = 1, size_cap: int | None = None) -> dict:
    """Weak clean index, argmax and matching clause for every finite entry."""
    catalog = default_catalog() if catalog is None else catalog
    rows, seen = [], set()
    for entry in catalog:
        if entry.name in seen:
            continue
        seen.add(entry.name)
        ring = build(entry.spec, size_cap=size_cap)
        if isinstance(ring, SymbolicTriangularRing) or ring.one is None:
            continue
        win, argmax = ix.index_argmax(ring, jobs=jobs)
        clean, _ = ix.index_argmax(ring, clean=True, jobs=jobs)
        clause = None
        for pred in (ix.predicate_win1, ix.predicate_win2, ix.predicate_win3):
            result = pred(ring)
            if result.holds:
                clause = result.matched_clause
                break
        rows.append({
            "ring": entry.name,
            "order": ring.order,
            "win": win,
            "in": clean,
            "argmax": argmax,
            "argmax_label": _plain(ring.label(argmax)),
            "clause": clause,
        })
    rows.sort(key=lambda row: (row["order"], row["ring"]))
    win3 = [row["ring"] for row in rows if row["win"] == 3]
    mismatched = [
        row["ring"] for row in rows
        if (row["win"] in (1, 2, 3)) != (row["clause"] is not None)
    ]
    if win3:
        observation = f"finite entries with index 3: {', '.join(win3)}"
    else:
        observation = f"no finite entry among {len(rows)} attains weak clean index 3"
    return {
        "rows": rows,
        "max_win": max((row["win"] for row in rows), default=None),
        "win3_finite": win3,
        "unclassified": mismatched,
        "observation": observation,
    }
