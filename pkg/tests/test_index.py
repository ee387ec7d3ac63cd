import pytest

import oracle
from wci import index as ix
from wci.constructors import build, build_symbolic_t3, cyclic_bimodule, matrix_ring, triangular, trunc_poly, zn
from wci.errors import UnsupportedOperationError
from wci.ring import RingTable, idempotents, subring_generated
from wci.verifier import default_catalog


def u2(n=2):
    return triangular(zn(n), zn(n), cyclic_bimodule(zn(n), zn(n), n))


FINITE = [r for r in (build(e.spec) for e in default_catalog()) if isinstance(r, RingTable)]


def test_chi_examples():
    rep = ix.chi(zn(6), 4)
    assert rep.members == (1, 3)
    # 4+1 = 5 is a unit; 4-3 = 1 and also 4+3 = 1
    assert rep.witnesses == (ix.PLUS, ix.BOTH)
    rep = ix.chi(zn(4), 2)
    assert rep.members == (1,) and rep.witnesses == (ix.BOTH,)
    assert ix.chi(zn(1), 0).members == (0,)


def test_chi_report_json():
    d = ix.chi(zn(6), 4).to_dict()
    assert d == {
        "element": 4,
        "members": [1, 3],
        "size": 2,
        "witnesses": [{"idempotent": 1, "unit": "a+e"}, {"idempotent": 3, "unit": "both"}],
    }


def test_chi_clean_examples():
    assert ix.chi_clean(zn(3), 1).members == (0,)
    assert ix.chi(zn(3), 1).members == (0, 1)
    assert ix.chi_clean(zn(6), 4).members == (3,)
    assert ix.chi_clean(zn(1), 0).members == (0,)


def test_index_examples():
    assert [ix.weak_clean_index(zn(n)) for n in (2, 3, 4, 6)] == [1, 2, 1, 2]
    assert ix.weak_clean_index(u2()) == 2
    assert ix.weak_clean_index(zn(1)) == 1
    with pytest.raises(UnsupportedOperationError):
        ix.weak_clean_index(build_symbolic_t3())


def test_argmax_tie_break_is_smallest_index():
    win, arg = ix.index_argmax(zn(6))
    assert (win, arg) == (2, 1)
    sizes = ix.chi_sizes(zn(6))
    assert arg == min(a for a in range(6) if sizes[a] == win)


def test_cleanness_examples():
    assert ix.is_clean(zn(4)) and ix.is_uniquely_clean(zn(4))
    assert ix.is_clean(zn(6)) and not ix.is_uniquely_clean(zn(6))
    assert ix.is_uniquely_clean(zn(1))
    assert all(ix.is_weakly_clean(r) for r in FINITE if r.unital)


def test_elemental_examples():
    assert ix.is_elemental(zn(3)) == (True, (2, 2))
    assert ix.is_elemental(zn(2)) == (False, None)
    assert ix.is_elemental(zn(6)) == (False, None)


def test_jsets_examples():
    js = ix.j_sets(zn(3), 0)
    assert 0 in js.union
    assert set(js.j1) | set(js.j2) <= {0, 1}
    assert ix.j_sets(zn(1), 0).union == (0,)


def test_jset_image_matches_chi_on_z6():
    z6 = zn(6)
    for a in range(6):
        assert ix.jset_image(z6, z6.sub(a, 1)) == ix.chi(z6, a).members


def test_literal_jset_count_counterexample():
    """|J(a-1)| counts quasi-regular elements, and two of them can give the same e."""
    z4 = zn(4)
    assert len(ix.chi(z4, 2)) == 1
    js = ix.j_sets(z4, 1)
    assert js.union == (0, 2)
    o = oracle.zmod(4)
    assert sorted(oracle.jset_union(o, 1)) == [0, 2]


def test_win_via_jsets_examples():
    z6 = zn(6)
    assert ix.win_via_jsets(subring_generated(z6, [2])) == 2
    assert ix.win_via_jsets(subring_generated(z6, [3])) == 1
    for r in FINITE:
        if r.unital:
            assert ix.win_via_jsets(r) == ix.weak_clean_index(r)


def test_predicate_examples():
    assert ix.predicate_win1(zn(4)).holds
    p = ix.predicate_win1(zn(3))
    assert not p.holds and p.witness == {"idempotent": 1, "unit_sum": [2, 2]}
    assert ix.predicate_win1(zn(2)).holds
    assert ix.predicate_win2(zn(3)).matched_clause == "elemental"
    p = ix.predicate_win2(zn(6))
    assert p.matched_clause == "elemental-times-index-one"
    assert p.witness["elemental-times-index-one"]["central_idempotent"] == 4
    r = u2()
    p = ix.predicate_win2(r)
    assert p.matched_clause == "triangular-module-order-2"
    w = p.witness["triangular-module-order-2"]
    assert r.label(w["idempotent"]) == (1, 0, 0) and w["peirce_sizes"] == [2, 2, 1, 2]


def test_predicate_win3():
    for r in FINITE:
        if r.unital:
            assert not ix.predicate_win3(r).holds
    p = ix.predicate_win3(build_symbolic_t3())
    assert p.holds and p.witness["triangular-module-order-3"]["idempotent"] == [1, 0, 0]
    assert not ix.predicate_win3(u2()).holds
    z = ix.integers_index_one()
    assert z.holds and 1 not in z.witness["unit_sums"]


def test_chi_bound_triangular():
    t = build_symbolic_t3()
    b = ix.chi_bound_triangular(t, (0, 0, 1))
    assert (b.size, b.bound) == (3, 3) and b.holds
    assert set(ix.chi(t, (0, 0, 1)).members) == {(1, w, 0) for w in range(3)}
    r = u2()
    b = ix.chi_bound_triangular(r, r.encode((0, 0, 1)))
    assert b.size == 2 and b.holds
    assert ix.chi_bound_triangular(r, r.one).size >= 1
    assert ix.chi_bound_triangular(t, t.one).size >= 1


def test_symbolic_chi_witnesses():
    t = build_symbolic_t3()
    rep = ix.chi(t, (0, 0, 1))
    for e, w in zip(rep.members, rep.witnesses):
        minus = t.is_unit(t.sub((0, 0, 1), e))
        plus = t.is_unit(t.add((0, 0, 1), e))
        assert w == ix._witness(minus, plus)


@pytest.mark.parametrize("ring", [r for r in FINITE if r.unital], ids=lambda r: r.name)
def test_index_matches_oracle(ring):
    o = oracle.from_package(ring)
    sizes = ix.chi_sizes(ring)
    clean_sizes = ix.chi_sizes(ring, clean=True)
    for a in range(ring.order):
        assert list(ix.chi(ring, a).members) == oracle.chi(o, a)
        assert sizes[a] == len(oracle.chi(o, a))
        assert clean_sizes[a] == len(oracle.chi(o, a, clean=True))
    assert ix.clean_index(ring) <= ix.weak_clean_index(ring)


@pytest.mark.parametrize("ring", [r for r in FINITE if r.unital], ids=lambda r: r.name)
def test_classification_agrees(ring):
    win = ix.weak_clean_index(ring)
    preds = {1: ix.predicate_win1, 2: ix.predicate_win2, 3: ix.predicate_win3}
    for k, pred in preds.items():
        assert pred(ring).holds == (win == k), (ring.name, k)


MODELS = {
    "Z_15": (oracle.zmod(15), 4),
    "M_2(Z_2)": (oracle.mat2(2), 5),
    "U_2(Z_3)": (oracle.upper2(3), 8),
    "U_2(Z_2)": (oracle.upper2(2), 2),
    "Z_2[x]/(x^3)": (oracle.truncated(2, 3), 1),
    "Z_3[x]/(x^2)": (oracle.truncated(3, 2), 2),
}


@pytest.mark.parametrize("name", sorted(MODELS))
def test_index_on_independent_models(name):
    model, expected = MODELS[name]
    ring = {
        "Z_15": lambda: zn(15),
        "M_2(Z_2)": lambda: matrix_ring(zn(2), 2),
        "U_2(Z_3)": lambda: u2(3),
        "U_2(Z_2)": lambda: u2(2),
        "Z_2[x]/(x^3)": lambda: trunc_poly(zn(2), 3),
        "Z_3[x]/(x^2)": lambda: trunc_poly(zn(3), 2),
    }[name]()
    assert oracle.win(model) == expected
    assert ix.weak_clean_index(ring) == expected
    assert ix.clean_index(ring) == oracle.win(model, clean=True)


def test_parallel_chi_sizes_identical():
    for jobs in (2, 3, 8):
        a = ix.chi_sizes(matrix_ring(zn(2), 2), jobs=1)
        b = ix.chi_sizes(matrix_ring(zn(2), 2), jobs=jobs)
        assert a.tolist() == b.tolist()
        assert ix.index_argmax(matrix_ring(zn(3), 2), jobs=jobs) == ix.index_argmax(matrix_ring(zn(3), 2))


def test_idempotent_members_subset():
    r = matrix_ring(zn(2), 2)
    idem = set(idempotents(r))
    for a in range(r.order):
        assert set(ix.chi(r, a).members) <= idem
