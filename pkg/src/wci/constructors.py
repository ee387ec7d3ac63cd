"""Ring constructors and the JSON ``RingSpec`` builder.

Compound rings index their elements lexicographically over component
indices (first component most significant), so the zero of every
component lands on index 0 and element numbering is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import InputError, PreconditionError, RingAxiomError, RingError, ResourceError
from .ring import AxiomViolation, RingTable, subring_generated, verify_ring_axioms

DEFAULT_SIZE_CAP = 65536


def _check_cap(order: int, cap: int | None, what: str) -> None:
    limit = DEFAULT_SIZE_CAP if cap is None else cap
    if order > limit:
        raise ResourceError(f"{what} would have order {order}, above the size cap {limit}")


def _split(x, radices: Sequence[int]) -> list:
    coords = []
    for r in reversed(radices):
        coords.append(x % r)
        x = x // r
    return coords[::-1]


def _join(coords, radices: Sequence[int]):
    idx = 0
    for c, r in zip(coords, radices):
        idx = idx * r + c
    return idx


class _Codec:
    """Maps indices of a compound ring to component coordinates and back."""

    def __init__(self, radices: Sequence[int]):
        self.radices = tuple(radices)

    def coords(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in _split(int(x), self.radices))

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.radices):
            raise InputError(f"expected {len(self.radices)} coordinates, got {len(coords)}")
        for c, r in zip(coords, self.radices):
            if not 0 <= c < r:
                raise InputError(f"coordinate {c} outside 0..{r - 1}")
        return int(_join(coords, self.radices))


class ProductCodec(_Codec):
    def __init__(self, factors: Sequence[RingTable]):
        super().__init__([f.order for f in factors])
        self.factors = tuple(factors)

    def decode(self, x):
        return self.coords(x)

    def label(self, x):
        return tuple(f.label(c) for f, c in zip(self.factors, self.coords(x)))

    def encode(self, value):
        return self.index([f.encode(v) for f, v in zip(self.factors, value)])


class MatrixCodec(_Codec):
    def __init__(self, base: RingTable, k: int):
        super().__init__([base.order] * (k * k))
        self.base, self.k = base, k

    def decode(self, x):
        c = self.coords(x)
        return tuple(c[i * self.k:(i + 1) * self.k] for i in range(self.k))

    def label(self, x):
        return tuple(tuple(self.base.label(c) for c in row) for row in self.decode(x))

    def encode(self, value):
        rows = list(value)
        if len(rows) != self.k or any(len(r) != self.k for r in rows):
            raise InputError(f"expected a {self.k}x{self.k} matrix")
        return self.index([self.base.encode(v) for row in rows for v in row])


class TriangularCodec(_Codec):
    def __init__(self, a_ring: RingTable, module: "FiniteBimodule", b_ring: RingTable):
        super().__init__([a_ring.order, module.order, b_ring.order])
        self.a_ring, self.module, self.b_ring = a_ring, module, b_ring

    def decode(self, x):
        return self.coords(x)

    def label(self, x):
        a, w, b = self.coords(x)
        return (self.a_ring.label(a), w, self.b_ring.label(b))

    def encode(self, value):
        a, w, b = value
        return self.index([self.a_ring.encode(a), int(w), self.b_ring.encode(b)])


class TruncPolyCodec(_Codec):
    def __init__(self, base: RingTable, k: int):
        super().__init__([base.order] * k)
        self.base, self.k = base, k

    def decode(self, x):
        return self.coords(x)

    def label(self, x):
        return tuple(self.base.label(c) for c in self.coords(x))

    def encode(self, value):
        return self.index([self.base.encode(v) for v in value])


# --- elementary constructors ------------------------------------------------


def zn(n: int, *, cap: int | None = None) -> RingTable:
    """Integers modulo ``n``; ``zn(1)`` is the zero ring."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InputError(f"zn needs a positive integer modulus, got {n!r}")
    n = int(n)
    _check_cap(n, cap, f"Z_{n}")
    return RingTable(
        n,
        lambda x, y: (x + y) % n,
        lambda x, y: (x * y) % n,
        lambda x: (-x) % n,
        1 % n,
        name=f"Z_{n}",
    )


def _require_unital(ring: RingTable, role: str) -> int:
    if ring.one is None:
        raise PreconditionError(f"{role} {ring.name} must have an identity")
    return ring.one


def direct_product(*factors: RingTable, cap: int | None = None) -> RingTable:
    if len(factors) < 1:
        raise InputError("direct_product needs at least one factor")
    for f in factors:
        _require_unital(f, "factor")
    codec = ProductCodec(factors)
    order = int(np.prod([f.order for f in factors], dtype=object))
    name = " x ".join(f.name for f in factors)
    _check_cap(order, cap, name)
    radices = codec.radices

    def lift(op):
        def combined(x, y):
            xs, ys = _split(x, radices), _split(y, radices)
            return _join([getattr(f, op)(a, b) for f, a, b in zip(factors, xs, ys)], radices)

        return combined

    def neg(x):
        return _join([f.neg(a) for f, a in zip(factors, _split(x, radices))], radices)

    one = _join([f.one for f in factors], radices)
    return RingTable(order, lift("add"), lift("mul"), neg, int(one), name=name, codec=codec)


def matrix_ring(base: RingTable, k: int, *, cap: int | None = None) -> RingTable:
    """Full k x k matrices over ``base``, entries in row-major lex order."""
    if k < 1:
        raise InputError(f"matrix size must be at least 1, got {k}")
    one_b = _require_unital(base, "matrix base ring")
    order = base.order ** (k * k)
    name = f"M_{k}({base.name})"
    _check_cap(order, cap, name)
    codec = MatrixCodec(base, k)
    radices = codec.radices

    def add(x, y):
        return _join([base.add(a, b) for a, b in zip(_split(x, radices), _split(y, radices))], radices)

    def neg(x):
        return _join([base.neg(a) for a in _split(x, radices)], radices)

    def mul(x, y):
        xa, ya = _split(x, radices), _split(y, radices)
        out = []
        for i in range(k):
            for j in range(k):
                acc = base.mul(xa[i * k], ya[j])
                for t in range(1, k):
                    acc = base.add(acc, base.mul(xa[i * k + t], ya[t * k + j]))
                out.append(acc)
        return _join(out, radices)

    one = _join([one_b if i == j else 0 for i in range(k) for j in range(k)], radices)
    return RingTable(order, add, mul, neg, int(one), name=name, codec=codec)


def trunc_poly(base: RingTable, k: int, *, cap: int | None = None) -> RingTable:
    """R[x]/(x^k); elements are coefficient tuples (c_0, ..., c_{k-1})."""
    if k < 1:
        raise InputError(f"degree bound must be at least 1, got {k}")
    one_b = _require_unital(base, "polynomial base ring")
    order = base.order ** k
    name = f"{base.name}[x]/(x^{k})"
    _check_cap(order, cap, name)
    codec = TruncPolyCodec(base, k)
    radices = codec.radices

    def add(x, y):
        return _join([base.add(a, b) for a, b in zip(_split(x, radices), _split(y, radices))], radices)

    def neg(x):
        return _join([base.neg(a) for a in _split(x, radices)], radices)

    def mul(x, y):
        xa, ya = _split(x, radices), _split(y, radices)
        out = []
        for d in range(k):
            acc = base.mul(xa[0], ya[d])
            for i in range(1, d + 1):
                acc = base.add(acc, base.mul(xa[i], ya[d - i]))
            out.append(acc)
        return _join(out, radices)

    one = _join([one_b] + [0] * (k - 1), radices)
    return RingTable(order, add, mul, neg, int(one), name=name, codec=codec)


# --- bimodules and triangular rings ------------------------------------------


@dataclass
class FiniteBimodule:
    """An (A, B)-bimodule on {0..order-1} given by explicit tables.

    ``left[a][w]`` is a.w for a in A; ``right[w][b]`` is w.b for b in B.
    """

    order: int
    add: np.ndarray
    left: np.ndarray
    right: np.ndarray
    a_ring: RingTable
    b_ring: RingTable
    name: str = "M"

    def __post_init__(self):
        m = self.order
        try:
            self.add = np.asarray(self.add, dtype=np.int64)
            self.left = np.asarray(self.left, dtype=np.int64)
            self.right = np.asarray(self.right, dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bimodule tables must be integer matrices: {exc}") from None
        shapes = {
            "add": (self.add.shape, (m, m)),
            "left": (self.left.shape, (self.a_ring.order, m)),
            "right": (self.right.shape, (m, self.b_ring.order)),
        }
        for label, (got, want) in shapes.items():
            if got != want:
                raise InputError(f"bimodule {label} table must have shape {want}, got {got}")
            table = getattr(self, label)
            if table.min() < 0 or table.max() >= m:
                raise InputError(f"bimodule {label} table has entries outside 0..{m - 1}")

    def act_left(self, a, w):
        return self.left[a, w]

    def act_right(self, w, b):
        return self.right[w, b]

    def verify(self) -> list[AxiomViolation]:
        """Check group, action and compatibility axioms exhaustively."""
        A, B = self.a_ring, self.b_ring
        P, L, R = self.add, self.left, self.right
        m = self.order
        ws = np.arange(m)
        a_s, b_s = A.elements(), B.elements()
        report: list[AxiomViolation] = []

        def first(label, bad, axes):
            if np.any(bad):
                hit = np.argwhere(bad)[0]
                report.append(AxiomViolation(label, tuple(int(axes[i][h]) for i, h in enumerate(hit))))

        first("module-zero", (P[0, ws] != ws) | (P[ws, 0] != ws), [ws])
        first("module-inverse", ~(P == 0).any(axis=1), [ws])
        first("module-commutativity", P != P.T, [ws, ws])
        first(
            "module-associativity",
            P[P[ws[:, None, None], ws[None, :, None]], ws[None, None, :]]
            != P[ws[:, None, None], P[ws[None, :, None], ws[None, None, :]]],
            [ws, ws, ws],
        )
        if A.one is not None:
            first("left-unital", L[A.one, ws] != ws, [ws])
        if B.one is not None:
            first("right-unital", R[ws, B.one] != ws, [ws])
        a1, a2 = a_s[:, None, None], a_s[None, :, None]
        w1 = ws[None, None, :]
        first("left-additive-in-ring", L[A.add(a1, a2), w1] != P[L[a1, w1], L[a2, w1]], [a_s, a_s, ws])
        first("left-associative", L[A.mul(a1, a2), w1] != L[a1, L[a2, w1]], [a_s, a_s, ws])
        wa, wb = ws[None, :, None], ws[None, None, :]
        a0 = a_s[:, None, None]
        first("left-additive-in-module", L[a0, P[wa, wb]] != P[L[a0, wa], L[a0, wb]], [a_s, ws, ws])
        b1, b2 = b_s[None, :, None], b_s[None, None, :]
        w0 = ws[:, None, None]
        first("right-additive-in-ring", R[w0, B.add(b1, b2)] != P[R[w0, b1], R[w0, b2]], [ws, b_s, b_s])
        first("right-associative", R[w0, B.mul(b1, b2)] != R[R[w0, b1], b2], [ws, b_s, b_s])
        wc, wd, b0 = ws[:, None, None], ws[None, :, None], b_s[None, None, :]
        first("right-additive-in-module", R[P[wc, wd], b0] != P[R[wc, b0], R[wd, b0]], [ws, ws, b_s])
        first(
            "bimodule-compatibility",
            R[L[a_s[:, None, None], ws[None, :, None]], b_s[None, None, :]]
            != L[a_s[:, None, None], R[ws[None, :, None], b_s[None, None, :]]],
            [a_s, ws, b_s],
        )
        return report


def cyclic_bimodule(a_ring: RingTable, b_ring: RingTable, m: int) -> FiniteBimodule:
    """Z_m as an (A, B)-bimodule where A and B are Z_n rings acting by multiplication mod m.

    Only valid when m divides the characteristic of both rings; ``verify``
    will say so otherwise.
    """
    ws = np.arange(m)
    return FiniteBimodule(
        order=m,
        add=(ws[:, None] + ws[None, :]) % m,
        left=(a_ring.elements()[:, None] * ws[None, :]) % m,
        right=(ws[:, None] * b_ring.elements()[None, :]) % m,
        a_ring=a_ring,
        b_ring=b_ring,
        name=f"Z_{m}",
    )


def triangular(a_ring: RingTable, b_ring: RingTable, module: FiniteBimodule, *, cap: int | None = None) -> RingTable:
    """Formal upper triangular ring [[A, M], [0, B]]; elements (a, w, b)."""
    _require_unital(a_ring, "diagonal ring")
    _require_unital(b_ring, "diagonal ring")
    if module.a_ring.order != a_ring.order or module.b_ring.order != b_ring.order:
        raise PreconditionError("bimodule action tables do not match the diagonal rings")
    problems = module.verify()
    if problems:
        raise PreconditionError(f"bimodule axiom violated: {problems[0].axiom} at {problems[0].witness}")
    order = a_ring.order * module.order * b_ring.order
    name = f"T({a_ring.name}, {b_ring.name}, {module.name})"
    _check_cap(order, cap, name)
    codec = TriangularCodec(a_ring, module, b_ring)
    radices = codec.radices
    P = module.add
    negw = (P == 0).argmax(axis=1)

    def add(x, y):
        (a, w, b), (c, v, d) = _split(x, radices), _split(y, radices)
        return _join([a_ring.add(a, c), P[w, v], b_ring.add(b, d)], radices)

    def neg(x):
        a, w, b = _split(x, radices)
        return _join([a_ring.neg(a), negw[w], b_ring.neg(b)], radices)

    def mul(x, y):
        (a, w, b), (c, v, d) = _split(x, radices), _split(y, radices)
        corner = P[module.left[a, v], module.right[w, d]]
        return _join([a_ring.mul(a, c), corner, b_ring.mul(b, d)], radices)

    one = _join([a_ring.one, 0, b_ring.one], radices)
    return RingTable(order, add, mul, neg, int(one), name=name, codec=codec)


# --- the infinite witness ring ----------------------------------------------


@dataclass(frozen=True)
class SymbolicTriangularRing:
    """[[Z, Z_m], [0, Z]] with Z acting on Z_m by multiplication.

    Elements are triples ``(a, w, b)`` with unbounded integers ``a, b``
    and ``w`` in 0..m-1.  Only finitely many idempotents exist and the unit
    test is decidable, which is all that chi needs.
    """

    modulus: int = 3
    name: str = field(default="T(Z, Z, Z_3)")

    @property
    def one(self) -> tuple[int, int, int]:
        return (1, 0, 1)

    @property
    def zero(self) -> tuple[int, int, int]:
        return (0, 0, 0)

    @property
    def module_order(self) -> int:
        return self.modulus

    def element(self, value) -> tuple[int, int, int]:
        try:
            a, w, b = value
        except (TypeError, ValueError):
            raise InputError(f"symbolic elements are triples (a, w, b), got {value!r}") from None
        return (int(a), int(w) % self.modulus, int(b))

    def add(self, x, y):
        return self.element((x[0] + y[0], x[1] + y[1], x[2] + y[2]))

    def neg(self, x):
        return self.element((-x[0], -x[1], -x[2]))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        a, w, b = x
        c, v, d = y
        return self.element((a * c, a * v + w * d, b * d))

    def is_unit(self, x) -> bool:
        return x[0] in (1, -1) and x[2] in (1, -1)

    def inverse(self, x):
        if not self.is_unit(x):
            raise PreconditionError(f"{x} is not a unit")
        a, w, b = x
        # a and b are +-1, so they are their own inverses.
        return self.element((a, -a * w * b, b))

    def idempotents(self) -> list[tuple[int, int, int]]:
        """Diagonal entries must be 0 or 1; then w = ew + wf fixes w.

        (0, w, 0) and (1, w, 1) force w = 0; (1, w, 0) and (0, w, 1)
        allow every w.
        """
        m = self.modulus
        found = [(0, 0, 0), (1, 0, 1)]
        found += [(1, w, 0) for w in range(m)] + [(0, w, 1) for w in range(m)]
        return sorted(found)

    def __repr__(self) -> str:
        return f"SymbolicTriangularRing({self.name!r})"


def build_symbolic_t3() -> SymbolicTriangularRing:
    return SymbolicTriangularRing(3)


# --- RingSpec ------------------------------------------------------------------

_KINDS = ("zn", "product", "matrix", "triangular", "trunc_poly", "table", "subring", "symbolic_t3")


def _field(spec: dict, key: str, path: str):
    if key not in spec:
        raise InputError(f"{path}: missing field {key!r}")
    return spec[key]


def _int_field(spec: dict, key: str, path: str) -> int:
    value = _field(spec, key, path)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{path}.{key}: expected an integer, got {value!r}")
    return value


def build(spec: Any, *, size_cap: int | None = None, path: str = "$"):
    """Construct a ring from a RingSpec (parsed JSON)."""
    try:
        return _build(spec, size_cap, path)
    except RingError as exc:
        if not getattr(exc, "located", False):
            if not str(exc).startswith("$"):
                exc.args = (f"{path}: {exc}",)
            exc.located = True
        raise


def _finite(spec, size_cap, path) -> RingTable:
    ring = build(spec, size_cap=size_cap, path=path)
    if not isinstance(ring, RingTable):
        raise InputError(f"{path}: a finite ring is required here")
    return ring


def _build(spec, size_cap, path):
    if not isinstance(spec, dict):
        raise InputError(f"{path}: a ring spec must be a JSON object")
    kind = spec.get("kind")
    if kind not in _KINDS:
        raise InputError(f"{path}.kind: unknown ring kind {kind!r}; expected one of {', '.join(_KINDS)}")

    if kind == "zn":
        return zn(_int_field(spec, "n", path), cap=size_cap)
    if kind == "product":
        factors = _field(spec, "factors", path)
        if not isinstance(factors, list) or not factors:
            raise InputError(f"{path}.factors: expected a non-empty list")
        rings = [_finite(f, size_cap, f"{path}.factors[{i}]") for i, f in enumerate(factors)]
        return direct_product(*rings, cap=size_cap)
    if kind == "matrix":
        base = _finite(_field(spec, "base", path), size_cap, f"{path}.base")
        return matrix_ring(base, _int_field(spec, "k", path), cap=size_cap)
    if kind == "trunc_poly":
        base = _finite(_field(spec, "base", path), size_cap, f"{path}.base")
        return trunc_poly(base, _int_field(spec, "k", path), cap=size_cap)
    if kind == "triangular":
        a = _finite(_field(spec, "a", path), size_cap, f"{path}.a")
        b = _finite(_field(spec, "b", path), size_cap, f"{path}.b")
        m = _field(spec, "m", path)
        if not isinstance(m, dict):
            raise InputError(f"{path}.m: expected a bimodule object")
        module = FiniteBimodule(
            order=_int_field(m, "order", f"{path}.m"),
            add=_field(m, "add", f"{path}.m"),
            left=_field(m, "left", f"{path}.m"),
            right=_field(m, "right", f"{path}.m"),
            a_ring=a,
            b_ring=b,
            name=f"M{m['order']}",
        )
        return triangular(a, b, module, cap=size_cap)
    if kind == "table":
        order = _int_field(spec, "order", path)
        one = spec.get("one")
        if one is not None and (isinstance(one, bool) or not isinstance(one, int)):
            raise InputError(f"{path}.one: expected an integer or null")
        _check_cap(order, size_cap, "table ring")
        ring = RingTable.from_tables(_field(spec, "add", path), _field(spec, "mul", path), one,
                                     name=spec.get("name", f"table ring of order {order}"))
        if ring.order != order:
            raise InputError(f"{path}: order is {order} but the tables have size {ring.order}")
        violations = verify_ring_axioms(ring)
        if violations:
            raise RingAxiomError(violations)
        return ring
    if kind == "subring":
        base = _finite(_field(spec, "base", path), size_cap, f"{path}.base")
        seed = _field(spec, "seed", path)
        if not isinstance(seed, list) or not seed or not all(isinstance(s, int) for s in seed):
            raise InputError(f"{path}.seed: expected a non-empty list of element indices")
        view = subring_generated(base, seed)
        return view.as_ring(name=f"<{', '.join(map(str, seed))}> in {base.name}")
    return build_symbolic_t3()
