"""Finite rings as indexed tables, and their structural subsets.

Elements of a ring of order ``n`` are the integers ``0..n-1``; index 0 is
always the additive identity.  A :class:`RingTable` either stores explicit
Cayley tables or computes them on demand from a vectorised arithmetic
backend (compound rings built in :mod:`wci.constructors`).  Every operation
accepts numpy integer arrays and broadcasts, which is what keeps the
exhaustive scans in this module fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .errors import InputError, PreconditionError, RingError, UnsupportedOperationError

# Largest order for which full Cayley tables are materialised.
TABLE_LIMIT = 4096
# Entries per broadcast block in the O(n^2) and O(n^3) scans.
_BLOCK = 1 << 21


def _out(value):
    arr = np.asarray(value)
    return int(arr) if arr.ndim == 0 else arr


class RingTable:
    """A finite ring on the indices ``0..order-1``.

    ``one`` is the index of the identity, or ``None`` for a ring without
    one (only generated subrings end up that way).
    """

    zero = 0

    def __init__(
        self,
        order: int,
        add: Callable,
        mul: Callable,
        neg: Callable,
        one: int | None = None,
        *,
        name: str | None = None,
        codec=None,
    ):
        if order < 1:
            raise InputError("ring order must be positive")
        self.order = int(order)
        self._add = add
        self._mul = mul
        self._neg = neg
        self.one = None if one is None else int(one)
        self.name = name or f"ring of order {order}"
        self.codec = codec
        self._tables: tuple[np.ndarray, np.ndarray] | None = None
        self._cache: dict = {}

    @classmethod
    def from_tables(cls, add, mul, one: int | None = None, *, name: str | None = None) -> "RingTable":
        try:
            add_t = np.asarray(add, dtype=np.int64)
            mul_t = np.asarray(mul, dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise InputError(f"tables must be integer matrices: {exc}") from None
        if add_t.ndim != 2 or add_t.shape[0] != add_t.shape[1] or add_t.shape[0] == 0:
            raise InputError(f"add table must be square and non-empty, got shape {add_t.shape}")
        n = add_t.shape[0]
        if mul_t.shape != (n, n):
            raise InputError(f"mul table must have shape {(n, n)}, got {mul_t.shape}")
        for label, t in (("add", add_t), ("mul", mul_t)):
            if t.min() < 0 or t.max() >= n:
                raise InputError(f"{label} table has entries outside 0..{n - 1}")
        if one is not None and not 0 <= one < n:
            raise InputError(f"identity index {one} outside 0..{n - 1}")
        # Rows without a zero get -1; verify_ring_axioms reports them.
        has_zero = add_t == 0
        neg_t = np.where(has_zero.any(axis=1), has_zero.argmax(axis=1), -1)
        ring = cls(
            n,
            lambda x, y: add_t[x, y],
            lambda x, y: mul_t[x, y],
            lambda x: neg_t[x],
            one,
            name=name,
        )
        ring._tables = (add_t, mul_t)
        return ring

    @property
    def unital(self) -> bool:
        return self.one is not None

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def add(self, x, y):
        return _out(self._add(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)))

    def mul(self, x, y):
        return _out(self._mul(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)))

    def neg(self, x):
        return _out(self._neg(np.asarray(x, dtype=np.int64)))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def require_unital(self, what: str = "this operation") -> int:
        if self.one is None:
            raise UnsupportedOperationError(f"{what} needs a ring with identity; {self.name} has none")
        return self.one

    def _materialise(self) -> tuple[np.ndarray, np.ndarray]:
        if self._tables is None:
            if self.order > TABLE_LIMIT:
                raise UnsupportedOperationError(
                    f"{self.name} has order {self.order}; full tables are limited to {TABLE_LIMIT}"
                )
            xs = self.elements()
            self._tables = (
                np.asarray(self.add(xs[:, None], xs[None, :]), dtype=np.int64),
                np.asarray(self.mul(xs[:, None], xs[None, :]), dtype=np.int64),
            )
        return self._tables

    @property
    def add_table(self) -> np.ndarray:
        return self._materialise()[0]

    @property
    def mul_table(self) -> np.ndarray:
        return self._materialise()[1]

    def decode(self, x: int):
        """Component coordinates of ``x`` (the index itself for plain tables)."""
        return self.codec.decode(int(x)) if self.codec is not None else int(x)

    def encode(self, value) -> int:
        if self.codec is None:
            value = int(value)
            if not 0 <= value < self.order:
                raise InputError(f"element {value} outside 0..{self.order - 1}")
            return value
        return self.codec.encode(value)

    def label(self, x: int):
        """Human-readable nested form of ``x``."""
        return self.codec.label(int(x)) if self.codec is not None else int(x)

    def memo(self, key, compute):
        # Rings are immutable, so derived data can be cached on the instance.
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def __repr__(self) -> str:
        return f"RingTable({self.name!r}, order={self.order})"


class ElementSet(tuple):
    """Sorted, duplicate-free tuple of element indices of ``ring``."""

    ring: RingTable

    def __new__(cls, ring: RingTable, members: Iterable[int]):
        vals = members if isinstance(members, np.ndarray) else list(members)
        vals = np.unique(np.asarray(vals, dtype=np.int64).ravel())
        obj = super().__new__(cls, (int(v) for v in vals))
        obj.ring = ring
        return obj

    @classmethod
    def from_mask(cls, ring: RingTable, mask: np.ndarray) -> "ElementSet":
        return cls(ring, np.flatnonzero(mask))

    def mask(self) -> np.ndarray:
        out = np.zeros(self.ring.order, dtype=bool)
        out[list(self)] = True
        return out

    def __getnewargs__(self):
        return (self.ring, tuple(self))


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witness: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness)}


def _row_blocks(n: int, width: int):
    step = max(1, _BLOCK // max(1, width))
    for start in range(0, n, step):
        yield start, np.arange(start, min(n, start + step), dtype=np.int64)


def _first_violation(n: int, arity: int, lhs, rhs) -> tuple[int, ...] | None:
    xs = np.arange(n, dtype=np.int64)
    for _, x in _row_blocks(n, n ** (arity - 1)):
        if arity == 1:
            args = (x,)
        elif arity == 2:
            args = (x[:, None], xs[None, :])
        else:
            args = (x[:, None, None], xs[None, :, None], xs[None, None, :])
        bad = np.broadcast_to(lhs(*args) != rhs(*args), (len(x),) + (n,) * (arity - 1))
        if bad.any():
            hit = np.argwhere(bad)[0]
            return (int(x[hit[0]]),) + tuple(int(h) for h in hit[1:])
    return None


def verify_ring_axioms(ring: RingTable) -> list[AxiomViolation]:
    """Exhaustively check the ring axioms; return one violation per failed axiom.

    The empty list means ``ring`` is an associative ring (with identity when
    ``ring.one`` is set).  Cost is O(n^3), so this is meant for tables of a
    few hundred elements at most.
    """
    n = ring.order
    A, M = ring.add_table, ring.mul_table
    if A.shape != (n, n) or M.shape != (n, n):
        raise InputError(f"tables must be {n}x{n}")
    if min(A.min(), M.min()) < 0 or max(A.max(), M.max()) >= n:
        raise InputError(f"table entries must lie in 0..{n - 1}")

    def neg_of(x):
        hits = A[x] == 0
        return np.where(hits.any(axis=-1), hits.argmax(axis=-1), -1)

    checks = [
        ("additive-identity", 1, lambda x: (A[0, x] == x) & (A[x, 0] == x), lambda x: True),
        ("additive-inverse", 1, lambda x: neg_of(x) >= 0, lambda x: True),
        ("additive-commutativity", 2, lambda x, y: A[x, y], lambda x, y: A[y, x]),
        ("additive-associativity", 3, lambda x, y, z: A[A[x, y], z], lambda x, y, z: A[x, A[y, z]]),
        ("multiplicative-associativity", 3, lambda x, y, z: M[M[x, y], z], lambda x, y, z: M[x, M[y, z]]),
        ("left-distributivity", 3, lambda x, y, z: M[x, A[y, z]], lambda x, y, z: A[M[x, y], M[x, z]]),
        ("right-distributivity", 3, lambda x, y, z: M[A[x, y], z], lambda x, y, z: A[M[x, z], M[y, z]]),
    ]
    if ring.one is not None:
        e = ring.one
        checks.append(("multiplicative-identity", 1, lambda x: (M[e, x] == x) & (M[x, e] == x), lambda x: True))
    if A[0, 0] != 0:
        # Index 0 must be the additive identity before anything else makes sense.
        return [AxiomViolation("additive-identity", (0,))]

    report = []
    for axiom, arity, lhs, rhs in checks:
        witness = _first_violation(n, arity, lhs, rhs)
        if witness is not None:
            report.append(AxiomViolation(axiom, witness))
    return report


# --- structural subsets ----------------------------------------------------


def _stable_powers(op, xs: np.ndarray) -> np.ndarray:
    """For each x return the idempotent power x^t with x^t = x^(2t).

    Floyd cycle detection run on all elements at once: the tortoise holds
    x^t and the hare x^(2t); in a finite semigroup they meet at the first
    t that is a multiple of the period and at least the index.
    """
    tort = xs.copy()
    hare = op(xs, xs)
    live = np.flatnonzero(tort != hare)
    while live.size:
        x = xs[live]
        tort[live] = op(tort[live], x)
        hare[live] = op(op(hare[live], x), x)
        live = live[tort[live] != hare[live]]
    return tort


def unit_mask(ring: RingTable) -> np.ndarray:
    one = ring.require_unital("units")

    def compute():
        # In a finite ring x is invertible iff some power of x equals 1.
        return _stable_powers(ring.mul, ring.elements()) == one

    return ring.memo("unit_mask", compute)


def units(ring: RingTable) -> ElementSet:
    return ElementSet.from_mask(ring, unit_mask(ring))


def idempotents(ring: RingTable) -> ElementSet:
    def compute():
        xs = ring.elements()
        return ElementSet.from_mask(ring, ring.mul(xs, xs) == xs)

    return ring.memo("idempotents", compute)


def nilpotents(ring: RingTable) -> ElementSet:
    return ring.memo(
        "nilpotents",
        lambda: ElementSet.from_mask(ring, _stable_powers(ring.mul, ring.elements()) == 0),
    )


def _commutes_with_all(ring: RingTable, candidates: np.ndarray) -> np.ndarray:
    xs = ring.elements()
    out = np.ones(len(candidates), dtype=bool)
    for start, rows in _row_blocks(len(candidates), ring.order):
        c = candidates[rows][:, None]
        out[rows] = np.all(ring.mul(c, xs[None, :]) == ring.mul(xs[None, :], c), axis=1)
    return out


def center(ring: RingTable) -> ElementSet:
    return ring.memo(
        "center", lambda: ElementSet.from_mask(ring, _commutes_with_all(ring, ring.elements()))
    )


def noncentral_idempotent(ring: RingTable) -> tuple[int, int] | None:
    """An idempotent ``e`` and element ``r`` with ``er != re``, if any."""
    xs = ring.elements()
    for e in idempotents(ring):
        bad = np.flatnonzero(ring.mul(e, xs) != ring.mul(xs, e))
        if bad.size:
            return e, int(bad[0])
    return None


def is_abelian(ring: RingTable) -> bool:
    """Every idempotent is central."""
    return ring.memo("abelian", lambda: noncentral_idempotent(ring) is None)


def quasi_regular(ring) -> ElementSet:
    """Elements ``q`` with some ``p`` such that q+p+qp = 0 = p+q+pq.

    These are the invertible elements of the circle monoid (identity 0),
    found with the same power-cycle test used for units; no identity
    element is needed. A SubringView is scanned inside its own carrier and
    the result is given in ambient indices.
    """
    if isinstance(ring, SubringView):
        sub = ring.as_ring()
        return ElementSet(ring.ambient, [sub.ambient_indices[q] for q in quasi_regular(sub)])

    def circle(x, y):
        return ring.add(ring.add(x, y), ring.mul(x, y))

    return ring.memo(
        "quasi_regular",
        lambda: ElementSet.from_mask(ring, _stable_powers(circle, ring.elements()) == 0),
    )


def _ideal_violation(ring: RingTable, members: ElementSet) -> str | None:
    inside = members.mask()
    m = np.asarray(members, dtype=np.int64)
    xs = ring.elements()
    if not inside[0]:
        return "does not contain 0"
    if not inside[ring.sub(m[:, None], m[None, :])].all():
        return "not closed under subtraction"
    if not inside[ring.mul(xs[:, None], m[None, :])].all():
        return "not closed under left multiplication"
    if not inside[ring.mul(m[:, None], xs[None, :])].all():
        return "not closed under right multiplication"
    return None


def jacobson_radical(ring: RingTable) -> ElementSet:
    """{a : 1 - ra and 1 - ar are units for every r}."""
    one = ring.require_unital("the Jacobson radical")

    def compute():
        u = unit_mask(ring)
        xs = ring.elements()
        keep = np.zeros(ring.order, dtype=bool)
        for _, a in _row_blocks(ring.order, ring.order):
            left = u[ring.sub(one, ring.mul(xs[None, :], a[:, None]))].all(axis=1)
            right = u[ring.sub(one, ring.mul(a[:, None], xs[None, :]))].all(axis=1)
            keep[a] = left & right
        rad = ElementSet.from_mask(ring, keep)
        problem = _ideal_violation(ring, rad)
        if problem:
            raise RingError(f"radical of {ring.name} {problem}; tables are not a ring")
        return rad

    return ring.memo("jacobson", compute)


def is_local(ring: RingTable) -> bool:
    """Non-units coincide with the Jacobson radical."""
    return bool(np.array_equal(~unit_mask(ring), jacobson_radical(ring).mask()))


def restrict(ring: RingTable, members: Iterable[int], one: int | None = None, name: str | None = None) -> RingTable:
    """Table-backed ring on a closed subset, re-indexed in ascending order."""
    m = np.array(sorted({int(x) for x in members}), dtype=np.int64)
    local = np.full(ring.order, -1, dtype=np.int64)
    local[m] = np.arange(len(m))
    add_t = local[ring.add(m[:, None], m[None, :])]
    mul_t = local[ring.mul(m[:, None], m[None, :])]
    if (add_t < 0).any() or (mul_t < 0).any():
        raise PreconditionError("subset is not closed under the ring operations")
    local_one = None if one is None else int(local[one])
    out = RingTable.from_tables(add_t, mul_t, local_one, name=name)
    out.ambient_indices = tuple(int(x) for x in m)
    return out


def quotient(ring: RingTable, ideal: Iterable[int]) -> RingTable:
    """R/I with cosets indexed by their smallest member, in ascending order."""
    members = ideal if isinstance(ideal, ElementSet) else ElementSet(ring, ideal)
    problem = _ideal_violation(ring, members)
    if problem:
        raise PreconditionError(f"{list(members)} is not a two-sided ideal of {ring.name}: {problem}")
    xs = ring.elements()
    m = np.asarray(members, dtype=np.int64)
    rep = ring.add(xs[:, None], m[None, :]).min(axis=1)
    reps = np.unique(rep)
    coset = np.full(ring.order, -1, dtype=np.int64)
    coset[reps] = np.arange(len(reps))
    coset = coset[rep]
    add_t = coset[ring.add(reps[:, None], reps[None, :])]
    mul_t = coset[ring.mul(reps[:, None], reps[None, :])]
    one = None if ring.one is None else int(coset[ring.one])
    return RingTable.from_tables(add_t, mul_t, one, name=f"{ring.name}/I")


def _require_idempotent(ring: RingTable, e: int) -> int:
    e = int(e)
    if not 0 <= e < ring.order or ring.mul(e, e) != e:
        raise PreconditionError(f"{e} is not an idempotent of {ring.name}")
    return e


def corner_ring(ring: RingTable, e: int) -> RingTable:
    """eRe with identity e."""
    e = _require_idempotent(ring, e)
    members = np.unique(ring.mul(ring.mul(e, ring.elements()), e))
    return restrict(ring, members, one=e, name=f"corner of {ring.name} at {ring.label(e)}")


class PeirceComponents(NamedTuple):
    ee: ElementSet
    ef: ElementSet
    fe: ElementSet
    ff: ElementSet

    def sizes(self) -> tuple[int, int, int, int]:
        return tuple(len(c) for c in self)


def peirce_components(ring: RingTable, e: int) -> PeirceComponents:
    """eRe, eR(1-e), (1-e)Re, (1-e)R(1-e) as element sets."""
    e = _require_idempotent(ring, e)
    f = ring.sub(ring.require_unital("Peirce decomposition"), e)
    xs = ring.elements()
    parts = PeirceComponents(
        *(
            ElementSet(ring, np.unique(ring.mul(ring.mul(p, xs), q)))
            for p, q in ((e, e), (e, f), (f, e), (f, f))
        )
    )
    size = int(np.prod(parts.sizes()))
    if size != ring.order:
        raise RingError(f"Peirce components of {ring.name} have total size {size}, expected {ring.order}")
    return parts


@dataclass(frozen=True)
class SubringView:
    ambient: RingTable
    members: ElementSet
    closed: bool = True

    def identity(self) -> int | None:
        """The element acting as identity on the subring, if one exists."""
        m = np.asarray(self.members, dtype=np.int64)
        r = self.ambient
        for f in m:
            if np.all(r.mul(f, m) == m) and np.all(r.mul(m, f) == m):
                return int(f)
        return None

    def as_ring(self, name: str | None = None) -> RingTable:
        return self.ambient.memo(
            ("subring", tuple(self.members), name),
            lambda: restrict(
                self.ambient,
                self.members,
                one=self.identity(),
                name=name or f"subring {list(self.members)} of {self.ambient.name}",
            ),
        )

    def __len__(self) -> int:
        return len(self.members)


def subring_generated(ring: RingTable, seed: Iterable[int]) -> SubringView:
    """Smallest subset containing ``seed`` closed under +, - and *."""
    seed = np.asarray(list(seed), dtype=np.int64)
    if len(seed) == 0:
        raise InputError("seed must be non-empty")
    current = np.unique(np.append(seed, 0))
    if current.min() < 0 or current.max() >= ring.order:
        raise InputError(f"seed elements must lie in 0..{ring.order - 1}")
    while True:
        a, b = current[:, None], current[None, :]
        grown = np.unique(np.concatenate([current, np.ravel(ring.sub(a, b)), np.ravel(ring.mul(a, b))]))
        if len(grown) == len(current):
            return SubringView(ring, ElementSet(ring, current))
        current = grown
