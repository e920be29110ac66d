"""Sparse Laurent polynomials and 2x2 matrices over them.

A ``LaurentPoly`` maps integer exponents of t to ``Scalar`` coefficients.
After every arithmetic operation coefficients with magnitude below
2^-(prec-8) relative to the polynomial's sup-norm are swept to structural
zero, so supports stay finite and degree queries stay meaningful.

``Mat2`` is a 2x2 matrix whose entries are either all Scalars
(representation matrices) or all LaurentPolys (Phi-images); the two flavors
share one class since the algebra is entrywise-generic.
"""

from dataclasses import dataclass, field

from mpmath import mp, mpf, mpc

from .errors import InexactDivision
from .scalars import DEFAULT_PREC, Scalar

SWEEP_GUARD_BITS = 8


class LaurentPoly:
    __slots__ = ("terms", "prec")

    def __init__(self, terms=None, prec=DEFAULT_PREC, sweep=True):
        raw = {}
        if terms:
            for e, c in terms.items():
                c = c if isinstance(c, Scalar) else Scalar(c, prec)
                prec = max(prec, c.prec)
                raw[int(e)] = c
        self.prec = prec
        self.terms = raw
        if sweep:
            self._sweep()

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, prec=DEFAULT_PREC):
        return cls({}, prec)

    @classmethod
    def one(cls, prec=DEFAULT_PREC):
        return cls({0: Scalar(1, prec)}, prec)

    @classmethod
    def term(cls, coeff, exp, prec=DEFAULT_PREC):
        return cls({exp: coeff}, prec)

    # -- structure --------------------------------------------------------

    def _sweep(self):
        if not self.terms:
            return
        norm = self.infnorm()
        if norm == 0:
            self.terms = {}
            return
        cut = mpf(2) ** (-(self.prec - SWEEP_GUARD_BITS)) * norm
        self.terms = {e: c for e, c in self.terms.items() if abs(c) > cut}

    def coeff(self, e):
        return self.terms.get(e, Scalar(0, self.prec))

    @property
    def min_exp(self):
        return min(self.terms) if self.terms else None

    @property
    def max_exp(self):
        return max(self.terms) if self.terms else None

    def support(self):
        return sorted(self.terms)

    def is_zero(self):
        return not self.terms

    def infnorm(self):
        return max((abs(c) for c in self.terms.values()), default=mpf(0))

    def shifted(self, k):
        return LaurentPoly({e + k: c for e, c in self.terms.items()}, self.prec, sweep=False)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, float, complex, Scalar, mpf, mpc)):
            return LaurentPoly({0: Scalar(other, self.prec)}, self.prec, sweep=False)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return LaurentPoly(out, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()}, self.prec, sweep=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        with mp.workprec(prec):
            acc = {}
            for e1, c1 in self.terms.items():
                v1 = c1.val
                for e2, c2 in other.terms.items():
                    e = e1 + e2
                    acc[e] = acc.get(e, 0) + v1 * c2.val
        return LaurentPoly({e: Scalar(v, prec) for e, v in acc.items()}, prec)

    __rmul__ = __mul__

    def eval_at(self, t):
        """Value of the polynomial at a scalar t (t must be nonzero if
        negative exponents are present)."""
        t = t if isinstance(t, Scalar) else Scalar(t, self.prec)
        total = Scalar(0, max(self.prec, t.prec))
        for e, c in self.terms.items():
            total = total + c * t ** e
        return total

    def __repr__(self):
        parts = [f"({c.val})*t^{e}" for e, c in sorted(self.terms.items())]
        return "LaurentPoly(" + " + ".join(parts or ["0"]) + ")"


def divide_with_remainder(num, den, rel_tol=None):
    """Laurent long division from the top exponent down.

    Returns (quotient, relative_remainder_norm).  The quotient support is
    contained in [num.min-den.min, num.max-den.max]; anything left after the
    sweep is the remainder, reported relative to ||num||_inf.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    prec = max(num.prec, den.prec)
    if rel_tol is None:
        rel_tol = mpf(2) ** (-(prec // 2))
    num_norm = num.infnorm()
    if num_norm == 0:
        return LaurentPoly.zero(prec), mpf(0)
    dmax = den.max_exp
    qmin = num.min_exp - den.min_exp
    cut = mpf(2) ** (-(prec - SWEEP_GUARD_BITS)) * num_norm
    with mp.workprec(prec):
        dlead = den.terms[dmax].val
        dtail = [(e, c.val) for e, c in den.terms.items() if e != dmax]
        rem = {e: c.val for e, c in num.terms.items()}
        quot = {}
        while rem:
            e = max(rem)
            if e - dmax < qmin:
                break
            co = rem.pop(e) / dlead
            quot[e - dmax] = quot.get(e - dmax, 0) + co
            for ee, vv in dtail:
                k = e - dmax + ee
                w = rem.get(k, 0) - co * vv
                if abs(w) > cut:
                    rem[k] = w
                elif k in rem:
                    del rem[k]
        rem_norm = max((abs(v) for v in rem.values()), default=mpf(0))
    q = LaurentPoly({e: Scalar(v, prec) for e, v in quot.items()}, prec)
    return q, rem_norm / num_norm


def laurent_divide_exact(num, den, rel_tol=None):
    """Exact quotient num/den; raises InexactDivision if a remainder above
    rel_tol * ||num||_inf is left."""
    prec = max(num.prec, den.prec)
    if rel_tol is None:
        rel_tol = mpf(2) ** (-(prec // 2))
    q, rel_rem = divide_with_remainder(num, den, rel_tol)
    if rel_rem > rel_tol:
        raise InexactDivision(
            f"relative remainder {rel_rem} exceeds tolerance {rel_tol}"
        )
    return q


class Mat2:
    """2x2 matrix with Scalar or LaurentPoly entries."""

    __slots__ = ("a11", "a12", "a21", "a22")

    def __init__(self, a11, a12, a21, a22):
        self.a11, self.a12, self.a21, self.a22 = a11, a12, a21, a22

    @classmethod
    def identity(cls, prec=DEFAULT_PREC):
        one, zero = Scalar(1, prec), Scalar(0, prec)
        return cls(one, zero, zero, one)

    @classmethod
    def identity_poly(cls, prec=DEFAULT_PREC):
        return cls(LaurentPoly.one(prec), LaurentPoly.zero(prec),
                   LaurentPoly.zero(prec), LaurentPoly.one(prec))

    def entries(self):
        return (self.a11, self.a12, self.a21, self.a22)

    def __add__(self, other):
        return Mat2(self.a11 + other.a11, self.a12 + other.a12,
                    self.a21 + other.a21, self.a22 + other.a22)

    def __sub__(self, other):
        return Mat2(self.a11 - other.a11, self.a12 - other.a12,
                    self.a21 - other.a21, self.a22 - other.a22)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a11 * other.a11 + self.a12 * other.a21,
                self.a11 * other.a12 + self.a12 * other.a22,
                self.a21 * other.a11 + self.a22 * other.a21,
                self.a21 * other.a12 + self.a22 * other.a22,
            )
        return self.scaled(other)

    def scaled(self, c):
        return Mat2(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def inverse(self):
        """Inverse of a Scalar-flavored matrix (adjugate over determinant)."""
        d = self.det()
        return Mat2(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)

    def power(self, k):
        if k < 0:
            return self.inverse().power(-k)
        prec = self.a11.prec if isinstance(self.a11, Scalar) else DEFAULT_PREC
        out = Mat2.identity(prec)
        for _ in range(k):
            out = out * self
        return out

    def to_laurent(self, t_exp, prec=None):
        """Embed a Scalar matrix as a one-term LaurentPoly matrix M * t^k."""
        prec = prec or max(e.prec for e in self.entries())
        return Mat2(*(LaurentPoly.term(e, t_exp, prec) for e in self.entries()))

    def infnorm(self):
        vals = []
        for e in self.entries():
            vals.append(e.infnorm() if isinstance(e, LaurentPoly) else abs(e))
        return max(vals)


def mat2_determinant(M):
    """Determinant in the entry algebra (works for both flavors)."""
    return M.det()


def poly_mat_det(rows):
    """Cofactor-expansion determinant of a small square LaurentPoly matrix."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * poly_mat_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


@dataclass
class DeltaResult:
    """A normalized twisted Alexander polynomial plus its provenance.

    ``sign`` and ``shift`` record the unit +-t^k that was divided out:
    raw = sign * t^(-shift) * poly.
    """

    poly: LaurentPoly
    sign: int
    shift: int
    method: str
    context: object = field(default=None, repr=False)

    def degree(self):
        return self.poly.max_exp

    def coeff(self, e):
        return self.poly.coeff(e)


def normalize_delta(poly, method, context=None):
    """Fix Wada's unit ambiguity: shift the minimum exponent to 0 and negate
    if the constant term is closer to -1 than to +1.  Only the unit +-t^k is
    removed; the constant term is never rescaled, so monicity remains a
    genuine check downstream."""
    if poly.is_zero():
        return DeltaResult(poly, 1, 0, method, context)
    shift = -poly.min_exp
    p = poly.shifted(shift)
    c0 = p.coeff(0)
    sign = 1
    if abs(c0 + 1) < abs(c0 - 1):
        p = -p
        sign = -1
    return DeltaResult(p, sign, shift, method, context)
