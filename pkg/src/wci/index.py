"""Chi sets, weak clean and clean indices, J-sets and the structural classifiers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .constructors import SymbolicTriangularRing, TriangularCodec
from .errors import InputError, UnsupportedOperationError
from .ring import (
    ElementSet,
    RingTable,
    SubringView,
    center,
    corner_ring,
    idempotents,
    is_abelian,
    noncentral_idempotent,
    peirce_components,
    quasi_regular,
    unit_mask,
)

MINUS, PLUS, BOTH = "a-e", "a+e", "both"


@dataclass(frozen=True)
class ChiReport:
    """chi(a) with, for each member e, which of a-e / a+e is a unit."""

    element: Any
    members: tuple
    witnesses: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        def plain(x):
            return list(x) if isinstance(x, tuple) else x

        return {
            "element": plain(self.element),
            "members": [plain(m) for m in self.members],
            "size": len(self.members),
            "witnesses": [{"idempotent": plain(m), "unit": w} for m, w in zip(self.members, self.witnesses)],
        }


def _witness(minus: bool, plus: bool) -> str:
    return BOTH if minus and plus else (MINUS if minus else PLUS)


def _element(ring, a):
    if isinstance(ring, SymbolicTriangularRing):
        return ring.element(a)
    a = int(a)
    if not 0 <= a < ring.order:
        raise InputError(f"element {a} outside 0..{ring.order - 1}")
    return a


def chi(ring, a, *, clean: bool = False) -> ChiReport:
    """Idempotents e with a-e a unit or (unless ``clean``) a+e a unit."""
    a = _element(ring, a)
    if isinstance(ring, SymbolicTriangularRing):
        found = []
        for e in ring.idempotents():
            minus = ring.is_unit(ring.sub(a, e))
            plus = not clean and ring.is_unit(ring.add(a, e))
            if minus or plus:
                found.append((e, _witness(minus, plus)))
    else:
        ring.require_unital("chi")
        u = unit_mask(ring)
        es = np.asarray(idempotents(ring), dtype=np.int64)
        minus = u[ring.sub(a, es)]
        plus = np.zeros_like(minus) if clean else u[ring.add(a, es)]
        found = [(int(e), _witness(m, p)) for e, m, p in zip(es, minus, plus) if m or p]
    return ChiReport(a, tuple(e for e, _ in found), tuple(w for _, w in found))


def chi_clean(ring, a) -> ChiReport:
    """Clean variant: only a-e counts."""
    return chi(ring, a, clean=True)


def _finite_unital(ring, what: str) -> RingTable:
    if isinstance(ring, SymbolicTriangularRing):
        raise UnsupportedOperationError(f"{what} needs a finite ring; {ring.name} is infinite")
    ring.require_unital(what)
    return ring


def chi_sizes(ring: RingTable, *, clean: bool = False, jobs: int = 1) -> np.ndarray:
    """|chi(a)| (or |chi_clean(a)|) for every element, as an array.

    With ``jobs > 1`` the elements are split into contiguous chunks scanned
    concurrently; chunks write disjoint slices, so the result does not
    depend on scheduling.
    """
    ring = _finite_unital(ring, "chi sizes")
    key = ("chi_sizes", clean)
    if key in ring._cache:
        return ring._cache[key]
    u = unit_mask(ring)
    es = np.asarray(idempotents(ring), dtype=np.int64)
    out = np.zeros(ring.order, dtype=np.int64)

    def scan(lo: int, hi: int) -> None:
        xs = np.arange(lo, hi, dtype=np.int64)
        counts = np.zeros(hi - lo, dtype=np.int64)
        for e in es:
            hit = u[ring.sub(xs, e)]
            if not clean:
                hit = hit | u[ring.add(xs, e)]
            counts += hit
        out[lo:hi] = counts

    jobs = max(1, int(jobs))
    bounds = np.linspace(0, ring.order, min(jobs, ring.order) + 1, dtype=np.int64)
    if jobs == 1:
        scan(0, ring.order)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(lambda i: scan(int(bounds[i]), int(bounds[i + 1])), range(len(bounds) - 1)))
    ring._cache[key] = out
    return out


def index_argmax(ring: RingTable, *, clean: bool = False, jobs: int = 1) -> tuple[int, int]:
    """(max |chi(a)|, smallest a attaining it)."""
    sizes = chi_sizes(ring, clean=clean, jobs=jobs)
    best = int(sizes.max())
    return best, int(np.flatnonzero(sizes == best)[0])


def weak_clean_index(ring: RingTable, *, jobs: int = 1) -> int:
    return index_argmax(ring, jobs=jobs)[0]


def clean_index(ring: RingTable, *, jobs: int = 1) -> int:
    return index_argmax(ring, clean=True, jobs=jobs)[0]


def is_weakly_clean(ring: RingTable) -> bool:
    return bool((chi_sizes(ring) > 0).all())


def is_clean(ring: RingTable) -> bool:
    return bool((chi_sizes(ring, clean=True) > 0).all())


def is_uniquely_clean(ring: RingTable) -> bool:
    """Every element has exactly one decomposition a = u + e."""
    return bool((chi_sizes(ring, clean=True) == 1).all())


def unit_sum_witness(ring: RingTable, target: int) -> tuple[int, int] | None:
    """Units (u, v) with u + v = target, smallest pair first."""
    us = np.flatnonzero(unit_mask(ring))
    sums = ring.add(us[:, None], us[None, :])
    hits = np.argwhere(np.asarray(sums) == target)
    if hits.size == 0:
        return None
    i, j = hits[0]
    return int(us[i]), int(us[j])


def is_elemental(ring: RingTable) -> tuple[bool, tuple[int, int] | None]:
    """Only 0 and 1 are idempotent and 1 = u + v for units u, v.

    The zero ring is excluded: there 0 = 1 and the definition would be
    met vacuously, which contradicts the index-two characterisation.
    """
    ring = _finite_unital(ring, "elemental test")
    if ring.order == 1 or tuple(idempotents(ring)) != tuple(sorted((0, ring.one))):
        return False, None
    pair = unit_sum_witness(ring, ring.one)
    return pair is not None, pair


# --- J-sets --------------------------------------------------------------------


@dataclass(frozen=True)
class JSets:
    """J1(a) = {q in Q : (a-q)^2 = a-q}, J2(a) = {q in Q : (q-a)^2 = q-a}."""

    element: int
    j1: tuple[int, ...]
    j2: tuple[int, ...]

    @property
    def union(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.j1) | set(self.j2)))


def _carrier(ring) -> RingTable:
    return ring.as_ring() if isinstance(ring, SubringView) else ring


def j_sets(ring, a: int) -> JSets:
    """Exact J-sets of ``a``; works without an identity."""
    ring = _carrier(ring)
    a = _element(ring, a)
    q = np.asarray(quasi_regular(ring), dtype=np.int64)
    d1 = ring.sub(a, q)
    d2 = ring.sub(q, a)
    j1 = q[ring.mul(d1, d1) == d1]
    j2 = q[ring.mul(d2, d2) == d2]
    return JSets(a, tuple(int(x) for x in j1), tuple(int(x) for x in j2))


def jset_image(ring, b: int) -> ElementSet:
    """Idempotents {b - q : q in J1(b)} together with {q - b : q in J2(b)}.

    For a ring with identity this is chi(b + 1).  Counting these images,
    rather than the q's themselves, is what transports chi: a q in J1(b)
    and a different q' in J2(b) can give the same idempotent.
    """
    ring = _carrier(ring)
    js = j_sets(ring, b)
    out = [ring.sub(b, q) for q in js.j1] + [ring.sub(q, b) for q in js.j2]
    return ElementSet(ring, out)


def win_via_jsets(ring) -> int:
    """max over b of |jset_image(b)|, computed inside the (possibly non-unital) carrier."""
    ring = _carrier(ring)
    return ring.memo("win_via_jsets", lambda: max(len(jset_image(ring, b)) for b in range(ring.order)))


def max_jset_size(ring) -> int:
    """max over b of |J1(b) u J2(b)| counted as sets of quasi-regular elements."""
    ring = _carrier(ring)
    return max(len(j_sets(ring, b).union) for b in range(ring.order))


# --- structural classifiers -----------------------------------------------------


@dataclass
class ClassificationResult:
    """Outcome of a structural predicate.

    ``matched_clauses`` lists every clause that held; ``witness`` carries
    the data (idempotents, unit pairs, Peirce sizes) to re-check it, or the
    counterexample when nothing matched.
    """

    claimed_win: int | None
    matched_clauses: tuple[str, ...] = ()
    witness: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return bool(self.matched_clauses)

    @property
    def matched_clause(self) -> str | None:
        return self.matched_clauses[0] if self.matched_clauses else None

    def to_dict(self) -> dict:
        return {
            "claimed_win": self.claimed_win,
            "holds": self.holds,
            "matched_clause": self.matched_clause,
            "matched_clauses": list(self.matched_clauses),
            "witness": self.witness,
        }


def predicate_win1(ring: RingTable) -> ClassificationResult:
    """Abelian, and no nonzero idempotent is a sum of two units."""
    ring = _finite_unital(ring, "index-one predicate")
    bad = noncentral_idempotent(ring)
    if bad is not None:
        return ClassificationResult(None, (), {"noncentral_idempotent": bad[0], "noncommuting_with": bad[1]})
    for e in idempotents(ring):
        if e == 0:
            continue
        pair = unit_sum_witness(ring, e)
        if pair is not None:
            return ClassificationResult(None, (), {"idempotent": e, "unit_sum": list(pair)})
    return ClassificationResult(1, ("abelian-no-unit-sum",), {})


def integers_index_one() -> ClassificationResult:
    """The index-one criterion for Z, from U(Z) = {1, -1} and idem(Z) = {0, 1}.

    Z is commutative, so abelian; the sums of two units are {-2, 0, 2},
    which never hit the only nonzero idempotent 1.
    """
    unit_group = (-1, 1)
    sums = sorted({u + v for u in unit_group for v in unit_group})
    ok = 1 not in sums
    return ClassificationResult(
        1 if ok else None,
        ("abelian-no-unit-sum",) if ok else (),
        {"units": list(unit_group), "idempotents": [0, 1], "unit_sums": sums},
    )


def _triangular_splittings(ring: RingTable, module_size: int):
    """Idempotents giving [[eRe, M], [0, (1-e)R(1-e)]] with |M| = module_size
    and both corners of index one; both orientations are tried."""
    found = []
    for e in idempotents(ring):
        sizes = peirce_components(ring, e).sizes()
        _, ef, fe, _ = sizes
        if sorted((ef, fe)) != [1, module_size]:
            continue
        f = ring.sub(ring.one, e)
        if predicate_win1(corner_ring(ring, e)).holds and predicate_win1(corner_ring(ring, f)).holds:
            zero_side = "(1-e)Re" if fe == 1 else "eR(1-e)"
            found.append({"idempotent": int(e), "peirce_sizes": list(sizes), "zero_component": zero_side})
    # standard form (module in the top-right corner) first
    found.sort(key=lambda w: w["zero_component"] != "(1-e)Re")
    return found


def predicate_win2(ring: RingTable) -> ClassificationResult:
    """Elemental; or elemental x index-one; or triangular with a module of order 2."""
    ring = _finite_unital(ring, "index-two predicate")
    clauses, witness = [], {}
    elemental, pair = is_elemental(ring)
    if elemental:
        clauses.append("elemental")
        witness["elemental"] = {"unit_sum": list(pair)}
    central = set(center(ring))
    for c in idempotents(ring):
        if c in (0, ring.one) or c not in central:
            continue
        ok, pair = is_elemental(corner_ring(ring, c))
        if ok and predicate_win1(corner_ring(ring, ring.sub(ring.one, c))).holds:
            clauses.append("elemental-times-index-one")
            witness["elemental-times-index-one"] = {"central_idempotent": int(c)}
            break
    split = _triangular_splittings(ring, 2)
    if split:
        clauses.append("triangular-module-order-2")
        witness["triangular-module-order-2"] = split[0]
    return ClassificationResult(2 if clauses else None, tuple(clauses), witness)


def predicate_win3(ring) -> ClassificationResult:
    """Triangular [[A, M], [0, B]] with |M| = 3 and index-one diagonal corners."""
    if isinstance(ring, SymbolicTriangularRing):
        z = integers_index_one()
        if ring.module_order == 3 and z.holds:
            return ClassificationResult(
                3,
                ("triangular-module-order-3",),
                {"triangular-module-order-3": {
                    "idempotent": [1, 0, 0],
                    "module_order": ring.module_order,
                    "zero_component": "(1-e)Re",
                    "corner_certificate": z.witness,
                }},
            )
        return ClassificationResult(None, (), {"module_order": ring.module_order})
    ring = _finite_unital(ring, "index-three predicate")
    split = _triangular_splittings(ring, 3)
    if split:
        return ClassificationResult(3, ("triangular-module-order-3",), {"triangular-module-order-3": split[0]})
    return ClassificationResult(None, (), {})


# --- the counting bound on triangular rings ---------------------------------------


@dataclass(frozen=True)
class TriangularBound:
    element: Any
    size: int
    bound: int
    module_order: int

    @property
    def holds(self) -> bool:
        return self.size <= self.bound


def _chi_integers(a: int) -> list[int]:
    return [e for e in (0, 1) if a - e in (1, -1) or a + e in (1, -1)]


def chi_bound_triangular(ring, alpha) -> TriangularBound:
    """Exact |chi(alpha)| next to the count of candidate idempotents.

    Any idempotent (e, w, f) in chi(alpha) has e in chi_A(a), f in chi_B(b)
    and w = ew + wf, so |chi(alpha)| is at most the sum over such (e, f) of
    the number of admissible w.
    """
    if isinstance(ring, SymbolicTriangularRing):
        a, w, b = ring.element(alpha)
        m = ring.module_order
        bound = sum(
            sum(1 for v in range(m) if (e * v + v * f - v) % m == 0)
            for e in _chi_integers(a)
            for f in _chi_integers(b)
        )
        return TriangularBound((a, w, b), len(chi(ring, (a, w, b))), bound, m)
    if not isinstance(ring, RingTable) or not isinstance(ring.codec, TriangularCodec):
        raise UnsupportedOperationError("chi_bound_triangular needs a ring built by triangular()")
    codec = ring.codec
    idx = ring.encode(alpha) if isinstance(alpha, (tuple, list)) else _element(ring, alpha)
    a, _, b = codec.decode(idx)
    A, B, mod = codec.a_ring, codec.b_ring, codec.module
    ws = np.arange(mod.order)
    bound = 0
    for e in chi(A, a).members:
        for f in chi(B, b).members:
            bound += int(np.sum(mod.add[mod.left[e, ws], mod.right[ws, f]] == ws))
    return TriangularBound(ring.label(idx), len(chi(ring, idx)), bound, mod.order)
