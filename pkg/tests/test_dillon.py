import json
from math import gcd

import pytest

from bentforge.charsum import kloosterman
from bentforge.dillon import (
    B1Params,
    B2Params,
    DillonFunction,
    P1Params,
    P2Params,
    TraceSum,
    agreement,
    b2_trace_prediction,
    criterion_b1_klm,
    criterion_general,
    family_criteria,
    function_from_json,
    is_bent,
)
from bentforge.gf import FieldError, build_field


def test_b2_exponents():
    ctx = build_field(2, 6)
    f = B2Params(ctx, 3, 1, 5).to_dillon()
    assert sorted(f.exponents()) == [28, 49]


def test_b1_exponents_with_b_term():
    ctx = build_field(2, 4)
    f = B1Params(ctx, 5, 5, (1,) + (int(ctx.from_log(5)),) * 4, b=int(ctx.alpha)).to_dillon()
    expected = {15 % 15} | {3 * (5 + i) % 15 for i in range(1, 5)} | {3}
    assert {e % 15 for e in f.exponents()} == expected


def test_p1_exponents():
    ctx = build_field(3, 6)
    a = int(ctx.xi)
    b = int(ctx.subfield(2, nonzero=True)[1])
    assert sorted(P1Params(ctx, 4, a, b).to_dillon().exponents()) == [104, 182]


def test_table_matches_scalar_evaluation():
    ctx = build_field(3, 4)
    f = DillonFunction.make(ctx, [(1, 5), (3, 7)], b=2, d=2)
    table = f.table()
    assert table[0] == 0
    for x in range(1, ctx.q, 7):
        val = ctx.tr[ctx.mul(5, ctx.pow(x, 8))] + ctx.tr[ctx.mul(7, ctx.pow(x, 24))]
        val += ctx.trace(ctx.mul(2, ctx.pow(x, 40)), 1, 1)
        assert table[x] == val % 3


def test_make_merges_and_drops_zero_terms():
    ctx = build_field(2, 4)
    f = DillonFunction.make(ctx, [(1, 3), (6, 3), (2, 0)])
    assert f.a == ()
    with pytest.raises(FieldError):
        DillonFunction.make(ctx, [(1, 1)], d=3)
    outside = next(x for x in range(ctx.q) if not ctx.in_subfield(x, 2))
    with pytest.raises(FieldError):
        DillonFunction.make(build_field(2, 6), [(1, 1)], b=outside, d=3)


def test_json_round_trip():
    ctx = build_field(3, 4)
    f = DillonFunction.make(ctx, [(1, 5), (3, 7)], b=2, d=2)
    g = function_from_json(json.loads(json.dumps(f.to_json())))
    assert g == f
    t = TraceSum(ctx, ((144 % 80, 5, 4),))
    assert function_from_json(t.to_json()) == t
    with pytest.raises(FieldError):
        DillonFunction.from_json({**f.to_json(), "b": [7, 0, 0, 0]})


def test_witness_and_zero_function():
    ctx = build_field(2, 6)
    bent, regular, spec = is_bent(B2Params(ctx, 3, 1, int(ctx.alpha)).to_dillon())
    assert bent and regular
    assert spec.parseval() == ctx.q**2
    zero = DillonFunction.make(ctx, [])
    assert is_bent(zero)[:2] == (False, False)
    assert criterion_general(zero).verdict is False


@pytest.mark.parametrize(
    "cls,args,msg",
    [
        (B1Params, (build_field(3, 4), 2, 1, (1, 1)), "p = 2"),
        (B1Params, (build_field(2, 6), 4, 1, (1,) * 4), "d |"),
        (B1Params, (build_field(2, 6), 3, 3, (1, 1, 1)), "gcd"),
        (B2Params, (build_field(2, 6), 3, 1, 0), "a != 0"),
        (P1Params, (build_field(3, 4), 4, 1, 1), r"3 \(mod 4\)"),
        (P1Params, (build_field(3, 6), 4, 1, 0), r"F_\(p\^2\)"),
        (P2Params, (build_field(3, 4), 2, 5, 1, 0), "gcd"),
    ],
)
def test_parameter_validation(cls, args, msg):
    with pytest.raises(ValueError, match=msg):
        cls(*args)


def test_b1_kloosterman_branch_inapplicable_on_diagonal():
    ctx = build_field(2, 6)
    a = int(ctx.subfield(3, nonzero=True)[2])
    rep = criterion_b1_klm(B1Params(ctx, 9, 1, (a,) * 9))
    assert rep.verdict is None and "a_0 != a_1" in rep.note


def _truth(ctx, params):
    bent, regular, _ = is_bent(params.to_dillon())
    return bent if ctx.p == 2 else regular


def test_b1_criteria_agree_with_truth_all_d():
    ctx = build_field(2, 6)
    sub = [int(x) for x in ctx.subfield(3, nonzero=True)]
    for d, l in [(3, 1), (9, 9), (9, 1), (9, 2), (3, 2)]:
        bs = (0, int(ctx.subfield(2 if d == 3 else 6, nonzero=True)[1]))
        for a0 in sub:
            for a1 in [0] + sub[:4]:
                for b in bs:
                    params = B1Params(ctx, d, l, (a0,) + (a1,) * (d - 1), b)
                    reps = family_criteria(params)
                    assert agreement(reps, _truth(ctx, params)), [r.to_json() for r in reps]


def test_b2_criteria_agree_with_truth_all_s():
    ctx = build_field(2, 6)
    for r in (1, 3, 9):
        for s in range(1, 9):
            for a in range(1, ctx.q, 3):
                params = B2Params(ctx, r, s, a)
                assert agreement(family_criteria(params), _truth(ctx, params))


def test_p2_criteria_agree_with_truth():
    ctx = build_field(3, 4)
    for r in (1, 2, 5):
        for s in (1, 3):
            for b in range(3):
                for a in range(1, ctx.q, 2):
                    params = P2Params(ctx, r, s, a, b)
                    reps = family_criteria(params)
                    assert agreement(reps, _truth(ctx, params)), [x.to_json() for x in reps]


def test_b2_trace_dichotomy():
    ctx = build_field(2, 6)
    for s in (s for s in range(1, 9) if gcd(s, 9) == 1):
        for a in range(1, ctx.q):
            params = B2Params(ctx, 3, s, a)
            if not is_bent(params.to_dillon())[0]:
                continue
            pred = b2_trace_prediction(params)
            assert pred["K"] in (0, 4)
            assert (pred["K"] == 0) == (not any(pred["traces"]))


def test_p1_counts_and_numeric_report():
    ctx = build_field(3, 6)
    xi = int(ctx.xi)
    count = 0
    for abar in ctx.subfield(3, nonzero=True):
        for b in ctx.subfield(2, nonzero=True):
            params = P1Params(ctx, 4, ctx.mul(int(abar), xi), int(b))
            reps = family_criteria(params)
            truth = _truth(ctx, params)
            assert agreement(reps, truth)
            count += truth
            numeric = reps[2]
            if numeric.verdict is not None:
                assert not numeric.exact and numeric.tol == 1e-6
    assert count == 48


def test_report_json_is_serialisable():
    ctx = build_field(3, 4)
    for rep in family_criteria(P2Params(ctx, 1, 1, 3, 1)):
        json.dumps(rep.to_json())


def test_kloosterman_side_value_of_b1():
    ctx = build_field(2, 6)
    sub = [int(x) for x in ctx.subfield(3, nonzero=True)]
    rep = criterion_b1_klm(B1Params(ctx, 9, 1, (sub[0],) + (sub[1],) * 8))
    assert rep.extra["K0"] == int(kloosterman(ctx, sub[0], 3))
