"""Symbolic cost algebra, the recurrence classifier, and the numeric
cross-check that keeps the two honest."""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from iosim.recurrence import (
    CostExpr,
    CostExprError,
    ParseError,
    PreconditionError,
    RecurrenceSpec,
    classify,
    dominates,
    log_beta_alpha,
    loglog_slope,
    n_over_B,
    numeric_unroll,
    parse_cost_expr,
    parse_recurrence,
    solve_one_layer,
)

from corpus_recurrences import CORPUS, axis_grids


def mono(coeff=1, **kw):
    return CostExpr.monomial(coeff=coeff, **kw)


# -- CostExpr algebra --------------------------------------------------------

def test_like_terms_merge():
    e = mono(p=2, r=-1) + mono(p=2, r=-1)
    assert e == mono(coeff=2, p=2, r=-1)


def test_zero_coefficients_drop():
    e = CostExpr({(F(1), F(0), F(0), 0, F(0), 0): F(0)})
    assert e.is_zero()
    assert str(e) == "0"


def test_negative_coefficient_rejected():
    with pytest.raises(CostExprError):
        CostExpr.monomial(coeff=-1, p=1)
    with pytest.raises(CostExprError):
        mono(p=1) * -2


def test_product_adds_exponents():
    got = mono(p=2, q=-1) * mono(coeff=3, p=F(1, 2), r=-1)
    assert got == mono(coeff=3, p=F(5, 2), q=-1, r=-1)


def test_mixed_log_scales_cannot_multiply():
    with pytest.raises(CostExprError):
        mono(s=1, lt=1) * mono(s=1, lt=F(1, 2))
    # same scale is fine and powers add
    assert mono(s=1, lt=1) * mono(s=2, lt=1) == mono(s=3, lt=1)


def test_eval_concrete_values():
    assert n_over_B().eval(1024, 64, 16) == 64.0
    e = mono(p=2, q=-1, r=-1)
    assert e.eval(2**10, 2**6, 2**2) == float(2**12)
    # logMB(n) = log2(n)/log2(M/B)
    got = mono(u=1).eval(2**12, 2**8, 2**4)
    assert got == pytest.approx(3.0)


def test_eval_log_clamps_at_base():
    # at n = M the log(n/M) factor clamps to 1 instead of hitting zero
    e = mono(p=1, r=-1, s=1, lt=1)
    assert e.eval(256, 256, 16) == pytest.approx(16.0)
    assert e.eval(1024, 256, 16) == pytest.approx(64 * 2.0)


def test_eval_requires_positive_arguments():
    with pytest.raises(CostExprError):
        n_over_B().eval(0, 64, 8)


# -- printing and parsing ----------------------------------------------------

def test_parse_pinned_recurrence():
    spec = parse_recurrence("T(n)=8T(n/2)+n^2/B; base(sqrtM)=M/B")
    assert spec.alpha == 8
    assert spec.beta == 2
    assert spec.f == mono(p=2, r=-1)
    assert spec.base_scale == "sqrtM"
    assert spec.base_cost == mono(q=1, r=-1)


def test_parse_tolerates_spaces_and_fraction_beta():
    spec = parse_recurrence("T(n) = 2 T(n/3/2) + n/B ; base(M) = M/B")
    assert spec.beta == F(3, 2)


def test_parse_cost_expr_forms():
    assert parse_cost_expr("n^2/M/B + n/B") == \
        mono(p=2, q=-1, r=-1) + mono(p=1, r=-1)
    assert parse_cost_expr("3*n^(3/2)") == mono(coeff=3, p=F(3, 2))
    assert parse_cost_expr("n/B*log(n/M)") == mono(p=1, r=-1, s=1, lt=1)
    assert parse_cost_expr("logMB(n)^2*n") == mono(p=1, u=2)
    assert parse_cost_expr("log(n/sqrtM)") == mono(s=1, lt=F(1, 2))
    assert parse_cost_expr("log(n/M^(1/4))^2") == mono(s=2, lt=F(1, 4))


def test_parse_error_positions():
    with pytest.raises(ParseError) as ei:
        parse_cost_expr("n^2/B + q")
    assert ei.value.pos == 8
    with pytest.raises(ParseError) as ei:
        parse_recurrence("T(n)=0T(n/2)+n/B; base(M)=M/B")
    assert ei.value.pos == 5
    with pytest.raises(ParseError):
        parse_recurrence("T(n)=2T(n/1)+n/B; base(M)=M/B")
    with pytest.raises(ParseError):
        parse_recurrence("T(n)=2T(n/2)+n/B")
    with pytest.raises(ParseError):
        parse_recurrence("T(n)=2T(n/2)+n/B; base(Q)=1")
    with pytest.raises(ParseError):
        parse_cost_expr("n^2/B extra")
    with pytest.raises(ParseError):
        parse_cost_expr("n^2/log(n)")


_exp = st.fractions(min_value=-4, max_value=4, max_denominator=4)
_coeff = st.fractions(min_value=F(1, 4), max_value=9, max_denominator=4)


@st.composite
def cost_exprs(draw):
    out = CostExpr.zero()
    for _ in range(draw(st.integers(1, 4))):
        s = draw(st.integers(0, 2))
        lt = draw(st.sampled_from([F(0), F(1, 2), F(1), F(2)])) if s else F(0)
        out = out + CostExpr.monomial(
            coeff=draw(_coeff), p=draw(_exp), q=draw(_exp), r=draw(_exp),
            s=s, lt=lt, u=draw(st.integers(0, 2)))
    return out


@settings(max_examples=200, deadline=None)
@given(cost_exprs())
def test_printer_parser_roundtrip(expr):
    assert parse_cost_expr(str(expr)) == expr


# -- dominance over the regime polytope ---------------------------------------

def test_dominates_pinned_examples():
    cubic = mono(p=3, q=F(-1, 2), r=-1)     # n^3/(sqrtM*B)
    quad = mono(p=2, r=-1)                  # n^2/B
    assert dominates(cubic, quad) == "yes"
    assert dominates(quad, cubic) == "no"
    assert dominates(quad, quad) == "incomparable"
    scan = n_over_B()
    two_level = mono(p=2, q=-1, r=-1)       # n^2/(MB)
    assert dominates(scan, two_level) == "incomparable"
    assert dominates(two_level, scan) == "incomparable"


def test_dominates_log_tie_break():
    assert dominates(mono(p=1, s=1), mono(p=1)) == "yes"
    assert dominates(mono(p=1), mono(p=1, u=1)) == "no"
    # log(n/M) < log(n) on the tie tuple
    assert dominates(mono(p=1, s=1, lt=1), mono(p=1, s=1)) == "no"


def test_dominates_rejects_multi_term():
    with pytest.raises(ValueError):
        dominates(mono(p=1) + mono(p=2), mono(p=1))


_small_exp = st.sampled_from([F(-2), F(-1), F(-1, 2), F(0), F(1, 2), F(1), F(2)])


@st.composite
def monomial_keys(draw):
    s = draw(st.integers(0, 2))
    return CostExpr.monomial(
        p=draw(_small_exp), q=draw(_small_exp), r=draw(_small_exp),
        s=s, lt=draw(st.sampled_from([F(0), F(1, 2), F(1)])) if s else F(0),
        u=draw(st.integers(0, 2)))


@settings(max_examples=100, deadline=None)
@given(monomial_keys(), monomial_keys(), monomial_keys())
def test_dominates_partial_order(a, b, c):
    ab, ba = dominates(a, b), dominates(b, a)
    assert (ab == "yes") == (ba == "no")
    assert (ab == "incomparable") == (ba == "incomparable")
    if ab == "yes" and dominates(b, c) == "yes":
        assert dominates(a, c) == "yes"


# -- classifier: pinned examples ----------------------------------------------

MB = mono(q=1, r=-1)


def test_case1_pinned():
    spec = RecurrenceSpec(4, F(2), n_over_B(), "M", MB)
    res = classify(spec)
    assert res.case == 1
    assert res.is_tight
    assert res.bound == mono(p=2, q=-1, r=-1) + n_over_B()


def test_case3_pinned():
    spec = RecurrenceSpec(2, F(2), n_over_B(), "M", MB)
    res = classify(spec)
    assert res.case == 3
    assert res.is_tight
    assert res.bound == mono(p=1, r=-1, s=1, lt=1) + n_over_B()


def test_case4_pinned_matrix_multiply():
    spec = parse_recurrence("T(n)=8T(n/2)+n^2/B; base(sqrtM)=M/B")
    res = classify(spec)
    assert res.case == 4
    assert res.subcase == ">1"
    assert res.tightness == "big-O"
    want = mono(coeff=2, p=3, q=F(-1, 2), r=-1) + mono(p=2, r=-1) \
        + n_over_B()
    assert res.bound == want
    assert res.leaf_term == mono(p=3, q=F(-1, 2), r=-1)


def test_case2_pinned():
    spec = RecurrenceSpec(2, F(2), mono(p=2, r=-1), "M", MB)
    res = classify(spec)
    assert res.case == 2
    assert res.bound == mono(p=2, r=-1) + n_over_B()


def test_case4_equal_ratio_subcase():
    spec = parse_recurrence("T(n)=2T(n/2)+n/M/B; base(M)=M/B")
    res = classify(spec)
    assert res.case == 4 and res.subcase == "=1"
    want = mono(coeff=2, p=1, r=-1) + mono(p=1, q=-1, r=-1, s=1, lt=1) \
        + mono(p=1, q=-1, r=-1)
    assert res.bound == want


def test_classifier_requires_monotone_f():
    with pytest.raises(PreconditionError):
        classify(RecurrenceSpec(2, F(2), mono(p=-1, r=-1), "M", MB))


def test_spec_validation():
    with pytest.raises(PreconditionError):
        RecurrenceSpec(0, F(2), n_over_B(), "M", MB)
    with pytest.raises(PreconditionError):
        RecurrenceSpec(2, F(1), n_over_B(), "M", MB)
    with pytest.raises(PreconditionError):
        RecurrenceSpec(2, F(2), n_over_B(), "half", MB)
    with pytest.raises(PreconditionError):
        RecurrenceSpec(2, F(2), CostExpr.zero(), "M", MB)


def test_log_beta_alpha_exactness():
    assert log_beta_alpha(4, F(8)) == (F(2, 3), True)
    assert log_beta_alpha(9, F(3)) == (F(2), True)
    assert log_beta_alpha(1, F(5)) == (F(0), True)
    val, exact = log_beta_alpha(7, F(2))
    assert not exact
    assert abs(float(val) - math.log2(7)) < 1e-9


# -- one-level decompositions --------------------------------------------------

def test_solve_one_layer_examples():
    g2 = mono(p=2, q=-2)
    assert solve_one_layer(g2, MB, n_over_B()) == \
        mono(p=2, q=-1, r=-1) + n_over_B()
    g3 = mono(p=3, q=-3)
    assert solve_one_layer(g3, MB, n_over_B()) == \
        mono(p=3, q=-2, r=-1) + n_over_B()
    one = mono()
    assert solve_one_layer(one, MB, n_over_B()) == MB + n_over_B()


def test_solve_one_layer_needs_linear_overhead():
    with pytest.raises(PreconditionError):
        solve_one_layer(mono(p=2, q=-2), MB, MB)


# -- numeric unrolling ----------------------------------------------------------

def test_unroll_scan_recurrence_at_base():
    spec = parse_recurrence("T(n)=4T(n/2)+n/B; base(M)=M/B")
    assert numeric_unroll(spec, 256, 256, 16) == pytest.approx(16.0)
    assert numeric_unroll(spec, 512, 256, 16) == pytest.approx(96.0)


def test_unroll_matrix_multiply_ratio():
    spec = parse_recurrence("T(n)=8T(n/2)+n^2/B; base(sqrtM)=M/B")
    M, B = 4096, 8
    n = 4 * int(math.isqrt(M))
    ratio = numeric_unroll(spec, 2 * n, M, B) / numeric_unroll(spec, n, M, B)
    assert abs(ratio - 8) <= 0.8


def test_loglog_slope_recovers_power():
    xs = [2**k for k in range(4, 10)]
    assert loglog_slope(xs, [7 * x**2 for x in xs]) == pytest.approx(2.0)


# -- corpus: classification, tightness, slope agreement -------------------------

@pytest.mark.parametrize("text,case,subcase", CORPUS)
def test_corpus_classifies(text, case, subcase):
    res = classify(parse_recurrence(text))
    assert res.case == case
    assert res.subcase == subcase
    assert res.is_tight == (case != 4)


@pytest.mark.parametrize("text,case,subcase",
                         [e for e in CORPUS if e[1] != 4])
def test_corpus_tight_cases_sandwich(text, case, subcase):
    spec = parse_recurrence(text)
    bound = classify(spec).bound
    M, B = 2**10, 2**4
    # sample at n = M * beta^k so every level divides out exactly; off-grid
    # n inflates the leaf count by up to a factor alpha, which is recursion
    # quantization rather than looseness of the bound
    ratios = []
    for k in range(6, 12):
        n = M * spec.beta**k
        assert n.denominator == 1
        n = int(n)
        ratios.append(numeric_unroll(spec, n, M, B) / bound.eval(n, M, B))
    assert min(ratios) > 1 / 8 and max(ratios) < 8
    assert max(ratios) / min(ratios) < 4


@pytest.mark.parametrize("text,case,subcase", CORPUS)
def test_corpus_slopes_match_bound(text, case, subcase):
    spec = parse_recurrence(text)
    bound = classify(spec).bound
    for axis, fixed, xs in axis_grids(spec.base_scale):
        num, sym = [], []
        for x in xs:
            args = dict(fixed)
            args[axis] = x
            num.append(numeric_unroll(spec, args["n"], args["M"], args["B"]))
            sym.append(bound.eval(args["n"], args["M"], args["B"]))
        got = loglog_slope(xs, num)
        want = loglog_slope(xs, sym)
        assert abs(got - want) <= 0.1, (axis, got, want)
