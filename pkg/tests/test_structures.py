"""Container invariants, validators, pools, and the file format."""

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from borderfloer import algebra
from borderfloer.algebra import I0, I1, R1, R2, R3, R12, R23, R123
from borderfloer.structures import (
    BorderedStructure, Generator, OperationTerm, SideSpec,
    StructureError, StructureFormatError,
    associated_graded, dumps_structure, exhaustive_pool, is_bounded,
    loads_structure, relabel_side, support_closure_pool,
    validate_a_infinity, validate_generic, validate_type_d,
)
from borderfloer.fixtures import fixtures

D = SideSpec("rho", "D")
A = SideSpec("rho", "A")


def one_d(gens, raw):
    """Single-D-side structure from (src, dst, chord-or-idempotent) rows."""
    return BorderedStructure([D], gens, [
        OperationTerm(s, t, {"rho": v}, {}) for s, t, v in raw])


def test_empty_structure_is_valid():
    S = BorderedStructure([], [], [])
    assert validate_generic(S).ok
    assert validate_type_d(S).ok


def test_f2_term_canonicity():
    g = [Generator("x", {"rho": I0}), Generator("y", {"rho": I0})]
    t = OperationTerm("x", "y", {"rho": R12}, {})
    assert len(BorderedStructure([D], g, [t, t]).terms) == 0
    assert len(BorderedStructure([D], g, [t, t, t]).terms) == 1


def test_duplicate_generator_name_rejected():
    with pytest.raises(StructureError):
        BorderedStructure([], [Generator("x", {}), Generator("x", {})], [])


def test_duplicate_side_label_rejected():
    with pytest.raises(StructureError):
        BorderedStructure([D, SideSpec("rho", "A")], [], [])


def test_bad_side_kind_rejected():
    with pytest.raises(StructureError):
        SideSpec("rho", "Q")


def test_term_payloads_must_match_sides():
    g = [Generator("x", {"rho": I0})]
    with pytest.raises(StructureError):
        # input on an A side that does not exist
        BorderedStructure([D], g, [OperationTerm("x", "x", {"rho": I0},
                                                 {"sigma": (R2,)})])
    with pytest.raises(StructureError):
        # missing the D output
        BorderedStructure([D], g, [OperationTerm("x", "x", {}, {})])


def test_nilpotent_self_loop_is_valid_type_d():
    S = one_d([Generator("x", {"rho": I0})], [("x", "x", R12)])
    assert validate_type_d(S).ok


def test_d_squared_failure_detected():
    # d(x) = r1 y, d(y) = r2 x composes to a surviving r12 at x
    S = one_d([Generator("x", {"rho": I0}), Generator("y", {"rho": I1})],
              [("x", "y", R1), ("y", "x", R2)])
    rep = validate_type_d(S)
    assert not rep.ok
    assert any("d-squared" in e for e in rep.errors)


def test_validate_generic_catches_filtration_rise():
    g = [Generator("x", {"rho": I0}, 0), Generator("y", {"rho": I0}, 1)]
    S = one_d(g, [("x", "y", R12)])
    rep = validate_generic(S)
    assert not rep.ok
    assert any("filtration" in e for e in rep.errors)


def test_validate_generic_catches_idempotent_mismatch():
    # r12 needs i0 on both ends
    S = one_d([Generator("x", {"rho": I0}), Generator("y", {"rho": I1})],
              [("x", "y", R12)])
    assert not validate_generic(S).ok


def test_dangling_generator_reference():
    S = BorderedStructure([D], [Generator("x", {"rho": I0})],
                          [OperationTerm("x", "ghost", {"rho": R12}, {})])
    rep = validate_generic(S)
    assert any("dangling" in e for e in rep.errors)


def test_a_infinity_idempotent_contradiction():
    # m2(x, r1) = x forces x to carry both i0 and i1 on the same side
    S = BorderedStructure([A], [Generator("x", {"rho": I0})],
                          [OperationTerm("x", "x", {}, {"rho": (R1,)})])
    assert not validate_generic(S).ok


def test_a_infinity_collapse_term_balance():
    # m2(p, r1) = q and m2(q, r2) = s need the collapse m2(p, r12) = s.
    # The probe vector (r1, r2) enters the pool only through a stored term
    # (the pool never fabricates junctions with nonzero products).
    gens = [Generator("p", {"rho": I0}), Generator("q", {"rho": I1}),
            Generator("s", {"rho": I0}),
            Generator("u", {"rho": I0}), Generator("v", {"rho": I0})]
    bad = BorderedStructure([A], gens, [
        OperationTerm("p", "q", {}, {"rho": (R1,)}),
        OperationTerm("q", "s", {}, {"rho": (R2,)}),
        OperationTerm("u", "v", {}, {"rho": (R1, R2)}),
    ])
    assert not validate_a_infinity(bad).ok
    good = BorderedStructure([A], gens, list(bad.terms) + [
        OperationTerm("p", "s", {}, {"rho": (R12,)}),
    ])
    assert validate_a_infinity(good).ok


# independent d-squared oracle: sum masks per (source, target) and square
# the matrix with full algebra multiplication instead of per-term products
def naive_d_squared_ok(S):
    mat = {}
    for t in S.terms:
        v = dict(t.outs)["rho"]
        mat[(t.src, t.dst)] = mat.get((t.src, t.dst), 0) ^ algebra.el(v)
    names = list(S.generators)
    for x in names:
        for z in names:
            acc = 0
            for y in names:
                acc ^= algebra.mul(mat.get((x, y), 0), mat.get((y, z), 0))
            if acc:
                return False
    return True


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_type_d_check_matches_naive_expansion(data):
    n = data.draw(st.integers(1, 6))
    idems = data.draw(st.lists(st.sampled_from([I0, I1]), min_size=n, max_size=n))
    gens = [Generator(f"g{i}", {"rho": idems[i]}) for i in range(n)]
    raw = []
    for i in range(n):
        for j in range(n):
            if not data.draw(st.booleans()):
                continue
            # any chord compatible with the endpoint idempotents
            opts = [c for c in algebra.CHORDS
                    if algebra.chord_idempotents(c) == (idems[i], idems[j])]
            if idems[i] == idems[j]:
                opts.append(idems[i])
            if not opts:
                continue
            raw.append((f"g{i}", f"g{j}", data.draw(st.sampled_from(opts))))
    S = one_d(gens, raw)
    assert validate_type_d(S).ok == naive_d_squared_ok(S)


def test_is_bounded():
    x = Generator("x", {"rho": I0})
    y = Generator("y", {"rho": I0})
    assert not is_bounded(one_d([x], [("x", "x", R12)]))
    assert is_bounded(one_d([x, y], [("x", "y", R12)]))
    # two-step cycle
    a = Generator("a", {"rho": I0})
    b = Generator("b", {"rho": I1})
    assert not is_bounded(one_d([a, b], [("a", "b", R1), ("b", "a", R2)]))
    # A-only structures are bounded by definition
    assert is_bounded(fixtures().identity_aa)


def test_relabel_side():
    S = one_d([Generator("x", {"rho": I0}), Generator("y", {"rho": I0})],
              [("x", "y", R12)])
    T = relabel_side(S, "rho", "sigma")
    assert T.d_labels() == ("sigma",)
    assert relabel_side(T, "sigma", "rho") == S
    with pytest.raises(StructureError):
        relabel_side(S, "nope", "x")
    dd = fixtures().cfdd_y_b3
    with pytest.raises(StructureError):
        relabel_side(dd, "rho", "sigma")  # collision


def test_associated_graded_drops_level_mixing_terms():
    gens = [Generator("p", {}, 1), Generator("q", {}, 0), Generator("r", {}, 1)]
    S = BorderedStructure([], gens, [OperationTerm("p", "q", {}, {}),
                                     OperationTerm("p", "r", {}, {})])
    G = associated_graded(S)
    assert len(G.terms) == 1
    assert next(iter(G.terms)).dst == "r"


def test_support_closure_pool_contents():
    gens = [Generator("p", {"rho": I1}), Generator("q", {"rho": I0})]
    S = BorderedStructure([A], gens,
                          [OperationTerm("p", "q", {}, {"rho": (R3, R2)})])
    pool = [d["rho"] for d in support_closure_pool(S)]
    assert () in pool
    assert (R3,) in pool and (R2,) in pool and (R3, R2) in pool
    # extension with a zero junction product is kept
    assert (R3, R2, R1) in pool
    # r2.r3 is a nonzero product, so this junction never arises in pairing
    assert (R3, R2, R3, R2) not in pool
    assert (R2, R3) not in pool
    # everything in the pool is composable
    from borderfloer.algebra import seq_is_composable
    assert all(seq_is_composable(s) for s in pool)


def test_exhaustive_pool_bounds_and_composability():
    from borderfloer.algebra import seq_is_composable
    S = BorderedStructure([A], [Generator("p", {"rho": I0})], [])
    pool = [d["rho"] for d in exhaustive_pool(S, 3)]
    assert all(len(s) <= 3 for s in pool)
    assert all(seq_is_composable(s) for s in pool)
    assert (R1, R2, R3) in pool
    assert len(pool) == len(set(pool))
    # two-sided: the length budget is shared
    S2 = BorderedStructure([A, SideSpec("sigma", "A")],
                           [Generator("p", {"rho": I0, "sigma": I0})], [])
    for vec in exhaustive_pool(S2, 3):
        assert len(vec["rho"]) + len(vec["sigma"]) <= 3


def test_round_trip_fixture_and_small():
    fx = fixtures()
    for S in (fx.identity_aa, fx.cfdd_y_b3, fx.cfaa_y_b3_reference):
        assert loads_structure(dumps_structure(S)) == S


def test_round_trip_random_complexes(random_complex_factory):
    rng = random.Random(11)
    for _ in range(10):
        S = random_complex_factory(rng, max_gens=15)
        assert loads_structure(dumps_structure(S)) == S


def test_format_errors():
    base = {"sides": [{"label": "rho", "kind": "D"}],
            "generators": [{"name": "x", "idem": {"rho": "i0"}}],
            "terms": []}

    def bad(**patch):
        d = {**base, **patch}
        with pytest.raises(StructureFormatError):
            loads_structure(json.dumps(d))

    bad(sides=[{"label": "rho"}])
    bad(sides=[{"label": "rho", "kind": "Q"}])
    bad(generators=[{"name": "x", "idem": {"rho": "r1"}}])  # not an idempotent
    bad(generators=[{"name": "x", "idem": {"rho": "i0"}},
                    {"name": "x", "idem": {"rho": "i0"}}])
    bad(generators=[{"name": "x", "idem": {"rho": "i0"},
                     "alexander": "high"}])
    bad(terms=[{"src": "x", "dst": "ghost", "out": {"rho": "r12"}}])
    bad(terms=[{"src": "x", "dst": "x", "out": {"sigma": "r12"}}])  # unknown side
    bad(terms=[{"src": "x", "dst": "x", "out": {"rho": "0"}}])  # zero output
    bad(terms=[{"src": "x", "dst": "x", "out": {"rho": "r12"},
                "in": {"rho": ["r1"]}}])  # input on a D side
    with pytest.raises(StructureFormatError):
        loads_structure("[1, 2]")
    with pytest.raises(StructureFormatError):
        loads_structure("not json")


def test_sum_output_splits_into_atomic_terms():
    d = {"sides": [{"label": "rho", "kind": "D"}],
         "generators": [{"name": "x", "idem": {"rho": "i0"}},
                        {"name": "y", "idem": {"rho": "i0"}}],
         "terms": [{"src": "x", "dst": "y", "out": {"rho": "1+r12"}}]}
    S = loads_structure(json.dumps(d))
    assert len(S.terms) == 2
    outs = {dict(t.outs)["rho"] for t in S.terms}
    assert outs == {I0, R12}
