"""Free-group words, Fox derivatives, and the generic Wada pipeline.

Words are tuples of (generator_index, +-1) letters, kept freely reduced.
Fox derivatives follow the standard rule d(g g')/dx_j = dg/dx_j + g dg'/dx_j
with d(x_j)/dx_j = 1 and, as a consequence, d(x_j^-1)/dx_j = -x_j^-1.

The Wada twisted Alexander polynomial of a deficiency-one presentation with
an SL2 representation is det(A_rho_k) / det(Phi(x_k - 1)), where A_rho_k is
the block matrix of Phi-images of relator derivatives with the k-th
generator's column removed.
"""

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf

from .errors import AmbiguousAbelianization, SingularDenominator
from .laurent import (LaurentPoly, Mat2, laurent_divide_exact, normalize_delta,
                      poly_mat_det)
from .scalars import DEFAULT_PREC, Scalar

# ---------------------------------------------------------------------------
# words


def reduce_word(letters):
    """Freely reduce a letter sequence (stack cancellation)."""
    out = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError("letters must carry exponent +1 or -1")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word_multiply(*words):
    out = ()
    for w in words:
        out = reduce_word(out + tuple(w))
    return out


def word_invert(w):
    return tuple((g, -e) for g, e in reversed(w))


def word_power(w, k):
    if k < 0:
        return word_power(word_invert(w), -k)
    return word_multiply(*([w] * k)) if k else ()


def gen(i, e=1):
    return ((i, e),)


def abelian_exponent(w, exps):
    return sum(exps[g] * e for g, e in w)


# ---------------------------------------------------------------------------
# group ring


class GroupRingElement:
    """Finite integer combination of reduced words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def from_word(cls, w, coeff=1):
        return cls({tuple(w): coeff})

    @classmethod
    def zero(cls):
        return cls()

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(out)

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        out = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                w = word_multiply(u, v)
                out[w] = out.get(w, 0) + cu * cv
        return GroupRingElement(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return f"GroupRingElement({self.terms})"


def fox_derivative(w, j):
    """Fox derivative d(w)/dx_j as a single left-to-right prefix scan."""
    terms = {}
    prefix = ()
    for g, e in w:
        if e == 1:
            if g == j:
                terms[prefix] = terms.get(prefix, 0) + 1
            prefix = word_multiply(prefix, ((g, 1),))
        else:
            prefix = word_multiply(prefix, ((g, -1),))
            if g == j:
                terms[prefix] = terms.get(prefix, 0) - 1
    return GroupRingElement(terms)


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Relator:
    """A relator in equation form lhs = rhs (rhs empty for a plain word)."""

    lhs: tuple
    rhs: tuple = ()

    def as_single_word(self):
        return word_multiply(self.lhs, word_invert(self.rhs))

    def exponent_row(self, num_generators):
        row = [0] * num_generators
        for g, e in self.lhs:
            row[g] += e
        for g, e in self.rhs:
            row[g] -= e
        return row


def fox_derivative_of_relator(rel, j):
    """d(lhs)/dx_j - d(rhs)/dx_j; valid under Phi because Phi(lhs)=Phi(rhs)
    whenever the relator holds in the represented group."""
    return fox_derivative(rel.lhs, j) - fox_derivative(rel.rhs, j)


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple
    abelian_exponents: tuple

    def __post_init__(self):
        n = len(self.generators)
        if len(self.relators) != n - 1:
            raise ValueError("knot-group presentations must have deficiency one")
        for rel in self.relators:
            if abelian_exponent(rel.as_single_word(), self.abelian_exponents) != 0:
                raise ValueError(f"relator {rel} does not abelianize to zero")

    @property
    def num_generators(self):
        return len(self.generators)


def infer_abelianization(pres, meridian_index):
    """Solve for the exponent vector killed by every abelianized relator,
    normalized so the designated meridian maps to t^1."""
    rows = [rel.exponent_row(pres.num_generators) for rel in pres.relators]
    kernel = _integer_kernel(rows, pres.num_generators)
    if len(kernel) != 1:
        raise AmbiguousAbelianization(
            f"abelianized relator matrix has kernel rank {len(kernel)}, expected 1"
        )
    vec = kernel[0]
    if vec[meridian_index] == 0:
        raise AmbiguousAbelianization("meridian generator dies in the abelianization")
    scale = Fraction(1, 1) / vec[meridian_index]
    out = [v * scale for v in vec]
    if any(v.denominator != 1 for v in out):
        raise AmbiguousAbelianization("abelianization is not integral on the meridian")
    return tuple(int(v) for v in out)


def _integer_kernel(rows, ncols):
    """Kernel basis of an integer matrix, over the rationals."""
    mat = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# representations and Phi


class Representation:
    """One Scalar-flavored Mat2 per generator."""

    def __init__(self, images, prec=DEFAULT_PREC):
        self.images = tuple(images)
        self.prec = prec
        self._inverses = tuple(M.inverse() for M in self.images)

    def image_of_word(self, w):
        M = Mat2.identity(self.prec)
        for g, e in w:
            M = M * (self.images[g] if e == 1 else self._inverses[g])
        return M

    def relation_residual(self, rel):
        """Infinity-norm of rho(lhs) - rho(rhs)."""
        return (self.image_of_word(rel.lhs) - self.image_of_word(rel.rhs)).infnorm()


def phi_map(elem, rep, exps, prec=None):
    """The ring map Phi: each word w goes to rho(w) * t^alpha(w), extended
    additively over integer combinations.  Returns a LaurentPoly matrix."""
    prec = prec or rep.prec
    total = Mat2(LaurentPoly.zero(prec), LaurentPoly.zero(prec),
                 LaurentPoly.zero(prec), LaurentPoly.zero(prec))
    for w, c in elem.terms.items():
        block = rep.image_of_word(w).scaled(Scalar(c, prec)).to_laurent(
            abelian_exponent(w, exps), prec)
        total = total + block
    return total


def wada_denominator(pres, rep, k, prec=None):
    """det Phi(x_k - 1) as a LaurentPoly."""
    prec = prec or rep.prec
    block = rep.images[k].to_laurent(pres.abelian_exponents[k], prec)
    return (block - Mat2.identity_poly(prec)).det()


def wada_numerator(pres, rep, remove_k, prec=None):
    """det of the 2(n-1) x 2(n-1) matrix of Phi-images of relator
    derivatives with the remove_k column of blocks deleted."""
    prec = prec or rep.prec
    cols = [j for j in range(pres.num_generators) if j != remove_k]
    rows = []
    for rel in pres.relators:
        blocks = [phi_map(fox_derivative_of_relator(rel, j), rep,
                          pres.abelian_exponents, prec) for j in cols]
        top, bottom = [], []
        for b in blocks:
            top += [b.a11, b.a12]
            bottom += [b.a21, b.a22]
        rows.append(top)
        rows.append(bottom)
    return poly_mat_det(rows)


def wada_polynomial(pres, rep, remove_k, rel_tol=None, prec=None, context=None):
    """The full generic pipeline: numerator determinant, exact division by
    det Phi(x_k - 1), and unit normalization."""
    prec = prec or rep.prec
    den = wada_denominator(pres, rep, remove_k, prec)
    if den.infnorm() <= mpf(2) ** (-(prec // 2)):
        raise SingularDenominator(
            f"det Phi(x_{remove_k} - 1) is numerically zero; remove another column"
        )
    num = wada_numerator(pres, rep, remove_k, prec)
    quot = laurent_divide_exact(num, den, rel_tol)
    return normalize_delta(quot, "fox", context)
