"""The knot-family layer: exact polynomial builders, root solving,
representation construction, and the certification identities."""

import random

import pytest
from mpmath import mp, mpf, mpc

from talex import (DegenerateContext, Scalar, build_context, select_root,
                   solve_s_roots)
from talex.pretzel import (BivarPoly, alpha_polynomial, beta_polynomial,
                           build_holonomy_rep, degeneracy_flags, eval_r1,
                           eta1_polynomial, eta2_polynomial, h_polynomial,
                           holonomy_matrices, presentation_three_gen,
                           presentation_two_gen, r0_polynomial, r1_polynomial,
                           r1_scale, rep_relation_check)
from talex.scalars import eps
from conftest import STD_M, cached_contexts, cached_roots

import oracles


def rand_ms(rng, prec=256):
    m = Scalar(mpc(rng.uniform(0.5, 1.5), rng.uniform(-0.8, 0.8)), prec)
    s = Scalar(mpc(rng.uniform(-1.5, 1.5), rng.uniform(-1.2, 1.2)), prec)
    return m, s


# -- BivarPoly basics -------------------------------------------------------


def test_bivar_arithmetic_exact():
    p = BivarPoly({(0, 0): 1, (1, 2): -3})
    q = BivarPoly({(2, 1): 2})
    assert (p + q - q) == p
    assert (p * q).terms == {(2, 1): 2, (3, 3): -6}
    assert (p * 0).is_zero()
    assert p.shift(s_exp=1, m_exp=1).terms == {(1, 1): 1, (2, 3): -3}


def test_bivar_eval_matches_horner():
    rng = random.Random(5)
    p = BivarPoly({(0, 0): 3, (2, 1): -1, (5, 4): 7})
    for _ in range(5):
        m, s = rand_ms(rng)
        with mp.workprec(300):
            direct = 3 - s.val ** 2 * m.val + 7 * s.val ** 5 * m.val ** 4
            assert abs(p.eval(m, s).val - direct) < eps(200) * p.eval_mag(m, s)


def test_divide_s_linear():
    # (s - 1)(s^2 m + 2) expanded, then divided back
    p = BivarPoly({(3, 1): 1, (2, 1): -1, (1, 0): 2, (0, 0): -2})
    q, rem = p.divide_s_linear(1)
    assert rem == {}
    assert q.terms == {(2, 1): 1, (0, 0): 2}
    _, rem2 = p.divide_s_linear(2)
    assert rem2 != {}


# -- exact structural identities of the defining polynomial -----------------


@pytest.mark.parametrize("n", range(1, 9))
def test_r0_m_palindromic_exact(n):
    r0 = r0_polynomial(n)
    assert r0.m_reversed(8) == r0
    assert r0.m_degree() <= 8
    assert all(b % 2 == 0 for (_, b) in r0.terms)


@pytest.mark.parametrize("n", range(1, 9))
def test_r0_s_pm1_roots_exact(n):
    r0 = r0_polynomial(n)
    for root in (1, -1):
        _, rem = r0.divide_s_linear(root)
        assert rem == {}, f"s={root} is not an exact root at n={n}"


def test_r0_rejects_bad_n():
    with pytest.raises(ValueError):
        r0_polynomial(0)


def test_r0_double_transcription():
    rng = random.Random(42)
    for n in range(1, 6):
        r0 = r0_polynomial(n)
        for _ in range(20):
            m, s = rand_ms(rng)
            with mp.workprec(320):
                ref = oracles.r0_value(n, m.val, s.val)
                scale = r0.eval_mag(m, s)
                assert abs(r0.eval(m, s).val - ref) < eps(200) * (1 + scale)


def test_alpha_beta_double_transcription():
    rng = random.Random(43)
    for n in (1, 2, 3):
        for _ in range(10):
            m, s = rand_ms(rng)
            with mp.workprec(320):
                da = abs(alpha_polynomial(n).eval(m, s).val
                         - oracles.alpha_value(n, m.val, s.val))
                db = abs(beta_polynomial(n).eval(m, s).val
                         - oracles.beta_value(n, m.val, s.val))
                assert da < eps(200) * (1 + alpha_polynomial(n).eval_mag(m, s))
                assert db < eps(200) * (1 + beta_polynomial(n).eval_mag(m, s))


def test_derived_constants_double_transcription():
    rng = random.Random(44)
    n = 2
    for _ in range(10):
        m, s = rand_ms(rng)
        with mp.workprec(320):
            pairs = (
                (h_polynomial(n), oracles.h_value),
                (eta1_polynomial(n), oracles.eta1_value),
                (eta2_polynomial(n), oracles.eta2_value),
                (r1_polynomial(n), oracles.r1_value),
            )
            for poly, oracle in pairs:
                d = abs(poly.eval(m, s).val - oracle(n, m.val, s.val))
                assert d < eps(200) * (1 + poly.eval_mag(m, s))


def test_alpha_vanishes_at_s_one():
    for n in (1, 2, 4):
        for m_pair in STD_M:
            m = Scalar.from_strings(*m_pair)
            v = alpha_polynomial(n).eval(m, Scalar(1))
            assert abs(v) < eps(200) * alpha_polynomial(n).eval_mag(m, Scalar(1))


def test_beta_odd_in_m():
    for n in (1, 2, 5):
        assert all(b % 2 == 1 for (_, b) in beta_polynomial(n).terms)


def test_h_vanishes_at_s_one():
    m = Scalar.from_strings("1.2", "0.4")
    assert abs(h_polynomial(3).eval(m, Scalar(1))) < eps(200) * 10


# -- roots ------------------------------------------------------------------


@pytest.mark.parametrize("n", (1, 2, 3))
def test_solve_roots_residuals_and_flags(n):
    m, roots = cached_roots(n, STD_M[0])
    r0 = r0_polynomial(n)
    deg = r0.s_degree()
    val = r0.s_valuation()
    assert len(roots) == deg
    assert sum(1 for r in roots if "s_zero" in r.flags) == val
    assert any("s_one" in r.flags for r in roots)
    assert any("s_minus_one" in r.flags for r in roots)
    bound = mpf(2) ** -128
    for rec in roots:
        if "s_zero" in rec.flags:
            continue
        res = abs(r0.eval(m, rec.s)) / r0.eval_mag(m, rec.s)
        assert res < bound


def test_solve_roots_rejects_zero_m():
    with pytest.raises(ValueError):
        solve_s_roots(2, Scalar(0))


def test_select_root_policy():
    _, roots = cached_roots(2, STD_M[0])
    idx = select_root(roots)
    assert not roots[idx].flags
    best = max((abs(r.s.im) for r in roots if not r.flags))
    assert abs(abs(roots[idx].s.im) - best) < mpf("1e-50")
    flagged = next(i for i, r in enumerate(roots) if r.flags)
    with pytest.raises(DegenerateContext):
        select_root(roots, flagged)
    with pytest.raises(IndexError):
        select_root(roots, len(roots))


def test_degeneracy_flags():
    m = Scalar.from_strings("1.2", "0.4")
    assert "s_one" in degeneracy_flags(2, m, Scalar(1))
    assert "s_minus_one" in degeneracy_flags(2, m, Scalar(-1))
    assert "s_zero" in degeneracy_flags(2, m, Scalar(0))
    assert "m_zero" in degeneracy_flags(2, Scalar(mpf("1e-15")), Scalar(2))


def test_build_context_strict():
    m = Scalar.from_strings("1.2", "0.4")
    with pytest.raises(DegenerateContext):
        build_context(2, m, Scalar(1), strict=True)
    ctx = build_context(2, m, Scalar(1), strict=False)
    assert not ctx.nondegenerate


# -- certification identities at roots --------------------------------------


@pytest.mark.parametrize("n", (1, 2, 3, 4))
def test_r1_vanishes_at_roots(n):
    for m_pair in STD_M:
        for ctx in cached_contexts(n, m_pair):
            assert abs(eval_r1(ctx)) < mpf("1e-40") * r1_scale(ctx)


def test_r1_generically_nonzero_off_roots():
    rng = random.Random(77)
    n = 2
    for _ in range(5):
        m, s = rand_ms(rng)
        ctx = build_context(n, m, s, strict=False)
        assert abs(eval_r1(ctx)) > mpf("1e-12") * r1_scale(ctx)


@pytest.mark.parametrize("n", (1, 2, 3))
def test_relation_residuals_both_presentations(n):
    for m_pair in STD_M:
        for ctx in cached_contexts(n, m_pair):
            report = rep_relation_check(ctx)
            assert report.max_residual < mpf("1e-60")


def test_holonomy_matrix_structure():
    ctx = cached_contexts(3, STD_M[1])[0]
    A, B, X = holonomy_matrices(ctx)
    m, S = ctx.m, ctx.S
    assert abs(A.a11 - m) == 0 and abs(A.a21) == 0
    assert abs(A.a22 - 1 / m) < eps(200)
    assert abs(X.a11 - S) == 0 and abs(X.a12) == 0
    for M in (A, B, X):
        assert abs(M.det() - 1) < mpf("1e-60")
    tr = A.a11 + A.a22
    assert abs(tr - (m + 1 / m)) < eps(200)


def test_holonomy_rejects_degenerate():
    m = Scalar.from_strings("1.2", "0.4")
    ctx = build_context(2, m, Scalar(1), strict=False)
    with pytest.raises(DegenerateContext):
        build_holonomy_rep(ctx, "two")


def test_presentations_shapes():
    p2 = presentation_two_gen(3)
    assert p2.num_generators == 2
    assert p2.abelian_exponents == (1, 7)
    p3 = presentation_three_gen(3)
    assert p3.num_generators == 3
    assert p3.abelian_exponents == (1, 1, 6)
    # n=1 collapses the power side of the 2-generator relator to the
    # empty word
    assert presentation_two_gen(1).relators[0].lhs == ()
    with pytest.raises(ValueError):
        presentation_two_gen(0)


def test_smallest_member_degenerate_group_still_works():
    """Regression guard for n = 1, where several printed exponents collide:
    the (s^(2n) - s^2) factor is identically zero, so the m^8/m^0 groups of
    the defining polynomial drop out entirely, and exponent pairs like
    s^(2n) vs s^2 land on the same monomial.  Building those sums as dict
    literals once silently kept only one of the colliding coefficients,
    which destroyed every identity at n = 1 while leaving n >= 2 intact.
    The roots of the correctly collapsed polynomial do carry
    representations, like every other member of the family."""
    r0 = r0_polynomial(1)
    assert r0.m_degree() == 6  # the m^8 group is identically zero here
    assert r0.s_degree() == 13
    for m_pair in STD_M:
        ctxs = cached_contexts(1, m_pair)
        assert ctxs
        report = rep_relation_check(ctxs[0])
        assert report.max_residual < mpf("1e-60")
