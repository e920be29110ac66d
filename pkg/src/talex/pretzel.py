"""Everything specific to the (-2,3,2n+1)-pretzel family K_n.

The defining polynomial r0(m, s), the auxiliary quantities alpha, beta, H,
eta_1, eta_2 and the certifying combination r1 are all kept as *exact*
integer bivariate polynomials in (s, m), assembled term-by-term from their
printed groupings.  Numerical evaluation happens only at the very end, so
the same objects serve for exact structural checks (m-palindromicity,
(s -+ 1) divisibility) and for high-precision evaluation.
"""

from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .errors import DegenerateContext, NonConvergence
from .fox import Presentation, Relator, Representation, gen, word_invert, word_multiply, word_power
from .laurent import Mat2
from .scalars import DEFAULT_PREC, Scalar

DEGENERACY_TOL = mpf("1e-10")


class BivarPoly:
    """Integer polynomial in (s, m), stored sparsely as (s_exp, m_exp) -> int."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: int(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def monomial(cls, coeff=1, s_exp=0, m_exp=0):
        return cls({(s_exp, m_exp): coeff})

    @classmethod
    def s_poly(cls, coeffs, m_exp=0):
        """Polynomial in s from a {s_exp: int} dict, times m^m_exp."""
        return cls({(e, m_exp): c for e, c in coeffs.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BivarPoly(out)

    def __neg__(self):
        return BivarPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BivarPoly({k: v * other for k, v in self.terms.items()})
        out = {}
        for (s1, m1), v1 in self.terms.items():
            for (s2, m2), v2 in other.terms.items():
                k = (s1 + s2, m1 + m2)
                out[k] = out.get(k, 0) + v1 * v2
        return BivarPoly(out)

    __rmul__ = __mul__

    def shift(self, s_exp=0, m_exp=0):
        return BivarPoly({(a + s_exp, b + m_exp): v for (a, b), v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def s_degree(self):
        return max((a for a, _ in self.terms), default=None)

    def s_valuation(self):
        return min((a for a, _ in self.terms), default=None)

    def m_degree(self):
        return max((b for _, b in self.terms), default=None)

    def eval(self, m, s):
        """Numerical value at Scalar arguments, via cached integer powers."""
        m, s = Scalar(m), Scalar(s)
        prec = max(m.prec, s.prec)
        with mp.workprec(prec):
            spow, mpow = {0: mpmath.mpc(1)}, {0: mpmath.mpc(1)}
            total = mpmath.mpc(0)
            for (a, b), v in self.terms.items():
                if a not in spow:
                    spow[a] = s.val ** a
                if b not in mpow:
                    mpow[b] = m.val ** b
                total += v * spow[a] * mpow[b]
            return Scalar(total, prec)

    def eval_mag(self, m, s):
        """Sum of term magnitudes at |m|, |s| -- the natural scale against
        which residuals and near-zero tests are measured."""
        m, s = Scalar(m), Scalar(s)
        prec = max(m.prec, s.prec)
        with mp.workprec(prec):
            am, as_ = abs(m.val), abs(s.val)
            spow, mpow = {0: mpf(1)}, {0: mpf(1)}
            total = mpf(0)
            for (a, b), v in self.terms.items():
                if a not in spow:
                    spow[a] = as_ ** a
                if b not in mpow:
                    mpow[b] = am ** b
                total += abs(v) * spow[a] * mpow[b]
            return total

    def specialize_m(self, m):
        """Coefficients of the univariate polynomial in s at a fixed m, as
        {s_exp: Scalar}."""
        m = Scalar(m)
        with mp.workprec(m.prec):
            mpow = {0: mpmath.mpc(1)}
            out = {}
            for (a, b), v in self.terms.items():
                if b not in mpow:
                    mpow[b] = m.val ** b
                out[a] = out.get(a, mpmath.mpc(0)) + v * mpow[b]
        return {a: Scalar(c, m.prec) for a, c in out.items()}

    def m_reversed(self, total_m_degree):
        """m^d * p(1/m, s): the coefficient-reversal in m."""
        return BivarPoly({(a, total_m_degree - b): v for (a, b), v in self.terms.items()})

    def divide_s_linear(self, root):
        """Exact synthetic division by (s - root) for an integer root.

        Returns (quotient, remainder) where the remainder is a polynomial in
        m alone, represented as a {m_exp: int} dict.
        """
        cols = {}
        for (a, b), v in self.terms.items():
            cols.setdefault(a, {})[b] = v
        if not cols:
            return BivarPoly(), {}
        deg = max(cols)
        carry = {}
        quot = {}
        for a in range(deg, -1, -1):
            cur = dict(cols.get(a, {}))
            for b, v in carry.items():
                cur[b] = cur.get(b, 0) + root * v
            cur = {b: v for b, v in cur.items() if v != 0}
            if a > 0:
                for b, v in cur.items():
                    quot[(a - 1, b)] = v
                carry = cur
            else:
                rem = cur
        return BivarPoly(quot), rem

    def __repr__(self):
        return f"BivarPoly({len(self.terms)} terms, s-deg {self.s_degree()}, m-deg {self.m_degree()})"


# ---------------------------------------------------------------------------
# the printed polynomials


def _sp(coeffs):
    return BivarPoly.s_poly(coeffs)


@lru_cache(maxsize=None)
def r0_groups(n):
    """The three distinct m-degree groups of the defining equation: the
    m^8 = m^0 group, the m^6 = m^2 group, and the m^4 group."""
    # n-dependent exponents are added as separate polynomials: in a dict
    # literal a collision like {2 * n: 1, 2: -1} at n = 1 would silently
    # keep only the last entry instead of summing the coefficients
    g8 = (_sp({1: 1, 0: -1}) * _sp({2: 1, 1: 2, 0: 1})
          * (_sp({2 * n: 1}) - _sp({2: 1}))).shift(s_exp=2 * n + 2)
    g6 = (_sp({6 * n + 3: 1})
          + _sp({6: 2, 5: 1, 4: -4, 3: 1, 2: 1, 1: -1, 0: -1}).shift(s_exp=4 * n + 1)
          - _sp({6: 1, 5: 1, 4: -1, 3: -1, 2: 4, 1: -1, 0: -2}).shift(s_exp=2 * n + 2)
          + _sp({6: 1}))
    g4 = (_sp({2: 1, 0: 1}).shift(s_exp=6 * n + 2)
          + _sp({6: 1, 5: 2, 4: -3, 3: -2, 2: 6, 1: -4, 0: -2}).shift(s_exp=4 * n + 3)
          - _sp({6: 2, 5: 4, 4: -6, 3: 2, 2: 3, 1: -2, 0: -1}).shift(s_exp=2 * n)
          + _sp({2: 1, 0: 1}).shift(s_exp=5))
    return g8, g6, g4


@lru_cache(maxsize=None)
def r0_polynomial(n):
    """The defining polynomial whose roots s parameterize the representations."""
    if n < 1:
        raise ValueError("the family is implemented for n >= 1")
    g8, g6, g4 = r0_groups(n)
    return (g8.shift(m_exp=8) - g6.shift(m_exp=6) + g4.shift(m_exp=4)
            - g6.shift(m_exp=2) + g8)


@lru_cache(maxsize=None)
def alpha_polynomial(n):
    inner = (-(_sp({1: 1, 0: -1}) * _sp({2 * n + 1: 1, 0: 1})).shift(s_exp=2, m_exp=6)
             + (_sp({4: 1, 2: -2, 1: 3, 0: -1}).shift(s_exp=2 * n + 2)
                + _sp({4: 1, 3: -3, 2: 2, 0: -1})).shift(m_exp=4)
             - (_sp({3: 2, 2: -1, 0: 1}).shift(s_exp=2 * n)
                - _sp({3: 1, 1: -1, 0: 2}).shift(s_exp=1)).shift(s_exp=1, m_exp=2)
             + (_sp({2 * n: 1}) - _sp({2: 1})).shift(s_exp=2))
    return (_sp({2: 1, 0: -1}) * inner).shift(s_exp=2 * n)


@lru_cache(maxsize=None)
def beta_polynomial(n):
    t7 = (_sp({2: 1, 0: -1}) * _sp({3: 1, 0: 1})).shift(s_exp=2 * n + 2, m_exp=7)
    t5 = (_sp({3: 1, 2: -1, 0: 1}).shift(s_exp=4 * n)
          + (_sp({1: 1, 0: -1}) * _sp({3: 1, 1: 1, 0: 1})
             * _sp({3: 1, 2: 1, 0: 1})).shift(s_exp=2 * n - 2)
          - _sp({3: 1, 1: -1, 0: 1})).shift(s_exp=3, m_exp=5)
    t3 = (_sp({3: 1, 0: 1}) * _sp({2 * n: 1, 0: -1})
          * (_sp({2 * n: 1}) + _sp({2: 1}))).shift(s_exp=2, m_exp=3)
    t1 = ((_sp({2 * n: 1}) - _sp({2: 1}))
          * _sp({2 * n: 1, 1: 1})).shift(s_exp=3, m_exp=1)
    return t7 - t5 + t3 - t1


@lru_cache(maxsize=None)
def h_polynomial(n):
    return BivarPoly({(0, 0): 1, (1, 2): -1, (2 * n + 1, 2): 1, (2 * n + 2, 0): -1})


@lru_cache(maxsize=None)
def eta1_polynomial(n):
    a_fac = BivarPoly({(0, 1): 1, (2 * n + 1, 1): -1})
    b_fac = BivarPoly({(2 * n, 0): 1, (2 * n, 2): 1})
    return a_fac * alpha_polynomial(n) + b_fac * beta_polynomial(n)


@lru_cache(maxsize=None)
def eta2_polynomial(n):
    a_fac = BivarPoly({(1, 1): -1, (2 * n + 1, 1): 1})
    b_fac = BivarPoly({(2 * n, 0): -1, (2 * n + 1, 0): -1})
    return a_fac * alpha_polynomial(n) + b_fac * beta_polynomial(n)


@lru_cache(maxsize=None)
def r1_polynomial(n):
    """The combination whose vanishing modulo r0 certifies the representation."""
    alpha, beta = alpha_polynomial(n), beta_polynomial(n)
    t_aa = BivarPoly({(2 * n + 3, 3): 1, (1, 3): -1, (2 * n + 2, 1): -1, (2, 1): 1})
    t_ab = (BivarPoly({(0, 2): 1, (0, 0): -1}) * BivarPoly({(0, 2): 1, (0, 0): 1})
            * _sp({2 * n + 2: 1, 2 * n + 1: 1}))
    t_bb = BivarPoly({(4 * n + 1, 3): 1, (2 * n + 1, 3): -1,
                      (4 * n + 2, 1): -1, (2 * n, 1): 1})
    return -(alpha * alpha * t_aa) + alpha * beta * t_ab + beta * beta * t_bb


# ---------------------------------------------------------------------------
# parameter points


@dataclass(frozen=True)
class PretzelContext:
    """One fully instantiated parameter point: n, the meridian eigenvalue m,
    a root s of r0(m, .), and every derived quantity of the closed forms."""

    n: int
    m: Scalar
    s: Scalar
    alpha: Scalar
    beta: Scalar
    H: Scalar
    eta1: Scalar
    eta2: Scalar
    S: Scalar
    prec: int
    flags: frozenset
    residual: object = None

    @property
    def nondegenerate(self):
        return not self.flags


def degeneracy_flags(n, m, s):
    """Near-zero flags for every quantity the representation formulas divide
    by, each measured relative to its natural scale."""
    m, s = Scalar(m), Scalar(s)
    flags = set()
    am, as_ = abs(m), abs(s)
    if am < DEGENERACY_TOL:
        flags.add("m_zero")
    if as_ < DEGENERACY_TOL:
        flags.add("s_zero")
    if abs(s - 1) < DEGENERACY_TOL * max(mpf(1), as_):
        flags.add("s_one")
    if abs(s + 1) < DEGENERACY_TOL * max(mpf(1), as_):
        flags.add("s_minus_one")
    if abs(s ** (2 * n + 1) + 1) < DEGENERACY_TOL * (1 + as_ ** (2 * n + 1)):
        flags.add("s_power_minus_one")
    for name, poly in (("alpha_zero", alpha_polynomial(n)),
                       ("beta_zero", beta_polynomial(n)),
                       ("H_zero", h_polynomial(n))):
        scale = poly.eval_mag(m, s)
        if scale == 0 or abs(poly.eval(m, s)) < DEGENERACY_TOL * scale:
            flags.add(name)
    return frozenset(flags)


def build_context(n, m, s, prec=None, strict=False, residual=None):
    m, s = Scalar(m), Scalar(s)
    prec = prec or max(m.prec, s.prec)
    m, s = Scalar(m, prec), Scalar(s, prec)
    flags = degeneracy_flags(n, m, s)
    if strict and flags:
        raise DegenerateContext(f"degenerate parameter point: {sorted(flags)}")
    ctx = PretzelContext(
        n=n, m=m, s=s,
        alpha=alpha_polynomial(n).eval(m, s),
        beta=beta_polynomial(n).eval(m, s),
        H=h_polynomial(n).eval(m, s),
        eta1=eta1_polynomial(n).eval(m, s),
        eta2=eta2_polynomial(n).eval(m, s),
        S=s ** n,
        prec=prec,
        flags=flags,
        residual=residual,
    )
    return ctx


def alpha_beta(n, m, s):
    """Direct evaluation of the printed alpha and beta expressions."""
    m, s = Scalar(m), Scalar(s)
    return alpha_polynomial(n).eval(m, s), beta_polynomial(n).eval(m, s)


def eval_r1(ctx):
    return r1_polynomial(ctx.n).eval(ctx.m, ctx.s)


def r1_scale(ctx):
    return r1_polynomial(ctx.n).eval_mag(ctx.m, ctx.s)


# ---------------------------------------------------------------------------
# root solving


@dataclass(frozen=True)
class RootRecord:
    s: Scalar
    residual: object
    flags: frozenset


def solve_s_roots(n, m, prec=DEFAULT_PREC, maxsteps=500):
    """All complex roots of s -> r0(m, s), each with its relative residual
    and degeneracy flags.  The s = 0 roots come from the exact s-valuation;
    the rest from a simultaneous (Durand-Kerner style) iteration at working
    precision well above the target.  Degenerate roots (s ~ +-1 are always
    present) are flagged, never dropped.
    """
    m = Scalar(m, prec)
    if abs(m) == 0:
        raise ValueError("the meridian eigenvalue m must be nonzero")
    r0 = r0_polynomial(n)
    coeffs = r0.specialize_m(m)
    val = min(coeffs)
    deg = max(coeffs)
    records = [RootRecord(Scalar(0, prec), mpf(0), degeneracy_flags(n, m, Scalar(0, prec)))
               for _ in range(val)]
    lead_to_low = [coeffs.get(e, Scalar(0, prec)).val for e in range(deg, val - 1, -1)]
    steps, extra = maxsteps, prec
    roots = None
    for _ in range(3):
        try:
            with mp.workprec(prec):
                roots = mp.polyroots(lead_to_low, maxsteps=steps, extraprec=extra)
            break
        except mp.NoConvergence:
            steps *= 2
            extra += prec
    if roots is None:
        raise NonConvergence(
            f"root iteration for (n={n}, m={m.val}) did not converge; "
            "retry at higher precision")
    bound = mpf(2) ** (-(prec // 2))
    for r in roots:
        s = Scalar(r, prec)
        res = abs(r0.eval(m, s)) / r0.eval_mag(m, s)
        if res > bound:
            raise NonConvergence(
                f"root {r} has relative residual {res} above {bound}")
        records.append(RootRecord(s, res, degeneracy_flags(n, m, s)))
    records.sort(key=lambda rec: (rec.s.re, rec.s.im))
    return records


def select_root(records, root_index=None):
    """Default policy: the nondegenerate root with the largest |Im s|.  This
    is a convenience, not a geometric claim; every nondegenerate root
    satisfies the implemented identities."""
    if root_index is not None:
        if not 0 <= root_index < len(records):
            raise IndexError(f"root index {root_index} out of range")
        rec = records[root_index]
        if rec.flags:
            raise DegenerateContext(
                f"root {root_index} is degenerate: {sorted(rec.flags)}")
        return root_index
    best = None
    for i, rec in enumerate(records):
        if rec.flags:
            continue
        if best is None or abs(rec.s.im) > abs(records[best].s.im):
            best = i
    if best is None:
        raise DegenerateContext("no nondegenerate root found")
    return best


def context_from_root(n, m, rec, prec=DEFAULT_PREC, strict=True):
    return build_context(n, Scalar(m, prec), Scalar(rec.s, prec), prec=prec,
                         strict=strict, residual=rec.residual)


# ---------------------------------------------------------------------------
# presentations


def presentation_two_gen(n):
    """<a, c | (acac^-1)^(n-1) = c (acac^-1)^-1 (ac)^-1 c>."""
    if n < 1:
        raise ValueError("the family is implemented for n >= 1")
    a, c = gen(0), gen(1)
    w = word_multiply(a, c, a, word_invert(c))
    lhs = word_power(w, n - 1)
    rhs = word_multiply(c, word_invert(w), word_invert(word_multiply(a, c)), c)
    return Presentation(("a", "c"), (Relator(lhs, rhs),), (1, 2 * n + 1))


def presentation_three_gen(n):
    """<a, b, x | w^-1 x = x b w^-1 (a x b)^-1 x b,  x = w^n>  with
    w = a x b a (x b)^-1, from the surgery description."""
    if n < 1:
        raise ValueError("the family is implemented for n >= 1")
    a, b, x = gen(0), gen(1), gen(2)
    xb = word_multiply(x, b)
    w = word_multiply(a, x, b, a, word_invert(xb))
    rel1 = Relator(
        word_multiply(word_invert(w), x),
        word_multiply(xb, word_invert(w), word_invert(word_multiply(a, xb)), xb),
    )
    rel2 = Relator(x, word_power(w, n))
    return Presentation(("a", "b", "x"), (rel1, rel2), (1, 1, 2 * n))


# ---------------------------------------------------------------------------
# the representation


def holonomy_matrices(ctx):
    """The printed images rho(a), rho(b), rho(x)."""
    if not ctx.nondegenerate:
        raise DegenerateContext(
            f"cannot build a representation at flags {sorted(ctx.flags)}")
    n, m, s = ctx.n, ctx.m, ctx.s
    alpha, beta = ctx.alpha, ctx.beta
    sp1 = s ** (2 * n + 1) + 1
    A = Mat2(m, -(m * m - s) * sp1 / (m * (s + 1)), Scalar(0, ctx.prec), 1 / m)
    u = s * alpha - m * beta
    v = m * s * alpha - beta
    B = Mat2(beta, -u * v / (m * beta), beta, (m * v + s * alpha) / m).scaled(
        1 / (s * alpha))
    X = Mat2(ctx.S, Scalar(0, ctx.prec), (ctx.S - 1 / ctx.S) / sp1, 1 / ctx.S)
    return A, B, X


def build_holonomy_rep(ctx, presentation="two"):
    """Representation images for either presentation; for the 2-generator
    one the image of c is rho(x) rho(b)."""
    A, B, X = holonomy_matrices(ctx)
    if presentation == "two":
        return Representation((A, X * B), prec=ctx.prec)
    if presentation == "three":
        return Representation((A, B, X), prec=ctx.prec)
    raise ValueError(f"unknown presentation {presentation!r}")


@dataclass(frozen=True)
class RelationReport:
    """Infinity-norm residuals rho(lhs) - rho(rhs) per relator."""

    two: tuple
    three: tuple

    @property
    def max_residual(self):
        return max(self.two + self.three)


def rep_relation_check(ctx):
    out = {}
    for name in ("two", "three"):
        pres = presentation_two_gen(ctx.n) if name == "two" else presentation_three_gen(ctx.n)
        rep = build_holonomy_rep(ctx, name)
        out[name] = tuple(rep.relation_residual(rel) for rel in pres.relators)
    return RelationReport(two=out["two"], three=out["three"])
