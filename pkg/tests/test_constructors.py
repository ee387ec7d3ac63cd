import json

import numpy as np
import pytest

import oracle
from wci.constructors import (
    FiniteBimodule,
    SymbolicTriangularRing,
    build,
    build_symbolic_t3,
    cyclic_bimodule,
    direct_product,
    matrix_ring,
    triangular,
    trunc_poly,
    zn,
)
from wci.errors import InputError, PreconditionError, ResourceError, RingAxiomError
from wci.index import weak_clean_index
from wci.ring import RingTable, idempotents, units, verify_ring_axioms
from wci.verifier import default_catalog

Z2 = {"kind": "zn", "n": 2}
Z3 = {"kind": "zn", "n": 3}


def assert_matches_model(ring, model, to_label):
    """Element-by-element isomorphism check against an independent model."""
    idx = {x: ring.encode(to_label(x)) for x in model.elements}
    assert sorted(idx.values()) == list(range(ring.order))
    for x in model.elements:
        for y in model.elements:
            assert ring.add(idx[x], idx[y]) == idx[model.add(x, y)]
            assert ring.mul(idx[x], idx[y]) == idx[model.mul(x, y)]
    assert ring.one == idx[model.one]


def test_zn_matches_model():
    for n in range(1, 13):
        assert_matches_model(zn(n), oracle.zmod(n), lambda x: x)


def test_zn_examples():
    assert zn(2).order == 2
    assert list(units(zn(6))) == [1, 5] and list(idempotents(zn(6))) == [0, 1, 3, 4]
    z1 = zn(1)
    assert z1.order == 1 and z1.one == 0
    with pytest.raises(InputError):
        zn(0)


def test_product_matches_model():
    assert_matches_model(direct_product(zn(2), zn(3)), oracle.pair(oracle.zmod(2), oracle.zmod(3)), lambda x: x)
    assert_matches_model(direct_product(zn(4), zn(3)), oracle.pair(oracle.zmod(4), oracle.zmod(3)), lambda x: x)


def test_product_examples():
    p = direct_product(zn(2), zn(3))
    assert p.order == 6 and len(units(p)) == 2
    assert len(idempotents(direct_product(zn(2), zn(2)))) == 4
    r = direct_product(zn(5), zn(1))
    assert r.order == 5 and weak_clean_index(r) == weak_clean_index(zn(5))


def test_matrix_matches_model():
    for n in (2, 3):
        assert_matches_model(matrix_ring(zn(n), 2), oracle.mat2(n), lambda x: ((x[0], x[1]), (x[2], x[3])))


def test_matrix_examples():
    m1 = matrix_ring(zn(2), 1)
    assert m1.order == 2 and list(units(m1)) == [1]
    assert len(units(matrix_ring(zn(2), 2))) == 6
    m3 = matrix_ring(zn(3), 2)
    assert m3.order == 81 and len(units(m3)) == 48
    assert len(units(m3)) == len(oracle.units(oracle.mat2(3)))


def test_triangular_matches_model():
    for n in (2, 3):
        r = triangular(zn(n), zn(n), cyclic_bimodule(zn(n), zn(n), n))
        assert_matches_model(r, oracle.upper2(n), lambda x: x)


def test_triangular_examples():
    u2 = triangular(zn(2), zn(2), cyclic_bimodule(zn(2), zn(2), 2))
    assert u2.order == 8
    idem = sorted(u2.label(e) for e in idempotents(u2))
    assert idem == [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0)]
    trivial = triangular(zn(2), zn(3), cyclic_bimodule(zn(2), zn(3), 1))
    prod = direct_product(zn(2), zn(3))
    assert trivial.order == prod.order
    assert len(units(trivial)) == len(units(prod))
    assert len(idempotents(trivial)) == len(idempotents(prod))
    assert weak_clean_index(trivial) == weak_clean_index(prod)


def test_triangular_rejects_bad_bimodule():
    # Z_3 cannot carry a unital Z_2 action
    with pytest.raises(PreconditionError) as info:
        triangular(zn(2), zn(2), cyclic_bimodule(zn(2), zn(2), 3))
    assert "bimodule axiom violated" in str(info.value)
    assert " at (" in str(info.value)


def test_bimodule_verify_detects_incompatibility():
    m = FiniteBimodule(
        order=2,
        add=[[0, 1], [1, 0]],
        left=[[0, 0], [0, 0]],
        right=[[0, 0], [0, 1]],
        a_ring=zn(2),
        b_ring=zn(2),
    )
    axioms = {v.axiom for v in m.verify()}
    assert axioms


def test_trunc_poly_matches_model():
    assert_matches_model(trunc_poly(zn(2), 3), oracle.truncated(2, 3), lambda x: x)
    assert_matches_model(trunc_poly(zn(3), 2), oracle.truncated(3, 2), lambda x: x)


def test_trunc_poly_examples():
    assert trunc_poly(zn(5), 1).order == 5
    t = trunc_poly(zn(2), 2)
    assert t.order == 4
    assert sorted(t.label(u) for u in units(t)) == [(1, 0), (1, 1)]
    u2 = triangular(zn(2), zn(2), cyclic_bimodule(zn(2), zn(2), 2))
    tt = trunc_poly(u2, 2)
    e = u2.encode((1, 0, 0))
    r = u2.encode((0, 1, 1))
    f = u2.sub(u2.one, e)
    n = u2.mul(u2.mul(e, r), f)
    assert n != 0
    candidate = tt.encode((u2.label(e), u2.label(n)))
    assert candidate in set(idempotents(tt))


def test_size_cap():
    with pytest.raises(ResourceError):
        matrix_ring(zn(2), 5)
    with pytest.raises(ResourceError):
        trunc_poly(zn(3), 4, cap=80)
    assert trunc_poly(zn(3), 4, cap=81).order == 81


def test_constructor_outputs_are_rings():
    for ring in (direct_product(zn(2), zn(3)), matrix_ring(zn(2), 2), trunc_poly(zn(4), 2),
                 triangular(zn(4), zn(2), cyclic_bimodule(zn(4), zn(2), 2))):
        assert verify_ring_axioms(ring) == []


def test_build_examples():
    p = build({"kind": "product", "factors": [Z2, Z3]})
    assert p.order == 6 and weak_clean_index(p) == weak_clean_index(zn(6))
    assert build({"kind": "trunc_poly", "base": Z2, "k": 3}).order == 8
    sub = build({"kind": "subring", "base": {"kind": "zn", "n": 6}, "seed": [2]})
    assert sub.order == 3 and sub.one is not None
    assert isinstance(build({"kind": "symbolic_t3"}), SymbolicTriangularRing)


def test_build_table_with_bad_tables():
    z4 = zn(4)
    mul = z4.mul_table.tolist()
    mul[2][2] = 1
    spec = {"kind": "table", "order": 4, "one": 1, "add": z4.add_table.tolist(), "mul": mul}
    with pytest.raises(RingAxiomError) as info:
        build(spec)
    assert info.value.violations
    assert "distributivity" in str(info.value) or "associativity" in str(info.value)


def test_build_error_paths():
    with pytest.raises(InputError) as info:
        build({"kind": "product", "factors": [Z2, {"kind": "zn", "n": 0}]})
    assert "factors[1]" in str(info.value)
    with pytest.raises(InputError):
        build({"kind": "nope"})
    with pytest.raises(InputError):
        build({"kind": "zn"})
    with pytest.raises(InputError):
        build({"kind": "zn", "n": "6"})
    with pytest.raises(ResourceError):
        build({"kind": "matrix", "base": Z3, "k": 3}, size_cap=1000)


def test_catalog_specs_build_and_roundtrip():
    for entry in default_catalog():
        ring = build(json.loads(json.dumps(entry.spec)))
        if isinstance(ring, RingTable):
            assert verify_ring_axioms(ring) == []


def test_symbolic_ring():
    t = build_symbolic_t3()
    assert t.one == (1, 0, 1)
    idem = t.idempotents()
    assert len(idem) == 8
    for e in idem:
        assert t.mul(e, e) == e
    assert t.is_unit((1, 0, 1)) and t.is_unit((-1, 2, 1)) and t.is_unit((1, 1, -1))
    assert not t.is_unit((2, 0, 3))
    assert not t.is_unit((0, 0, 1))
    for a in (-1, 1):
        for w in range(3):
            for b in (-1, 1):
                u = (a, w, b)
                v = t.inverse(u)
                assert t.mul(u, v) == t.one and t.mul(v, u) == t.one


def test_symbolic_idempotents_by_scan():
    """The enumeration agrees with a scan over a window of integer entries."""
    t = build_symbolic_t3()
    found = {(a, w, b) for a in range(-3, 4) for w in range(3) for b in range(-3, 4)
             if t.mul((a, w, b), (a, w, b)) == (a, w, b)}
    assert found == set(t.idempotents())


def test_symbolic_arithmetic():
    t = SymbolicTriangularRing()
    x, y = (2, 1, -3), (5, 2, 4)
    assert t.mul(x, y) == (10, (2 * 2 + 1 * 4) % 3, -12)
    assert t.add(x, y) == (7, 0, 1)
    assert t.sub(x, x) == t.zero


def test_labels_roundtrip():
    r = build({"kind": "trunc_poly", "base": {"kind": "product", "factors": [Z2, Z3]}, "k": 2})
    for x in range(r.order):
        assert r.encode(r.label(x)) == x
    assert np.all(r.elements() == np.arange(r.order))
