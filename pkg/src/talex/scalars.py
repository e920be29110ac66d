"""Precision-tagged complex scalars on top of mpmath.

Every quantity in the pipeline (the meridian eigenvalue m, the shape
parameter s, the derived constants and all polynomial coefficients) is a
``Scalar``: an mpmath complex number together with the binary precision it
was computed at.  Arithmetic between scalars of different precision promotes
to the larger one.
"""

from mpmath import mp, mpf, mpc

DEFAULT_PREC = 256
MIN_PREC = 64


class Scalar:
    """An immutable complex value with an attached working precision."""

    __slots__ = ("val", "prec")

    def __init__(self, value=0, prec=DEFAULT_PREC):
        if isinstance(value, Scalar):
            prec = max(prec, value.prec)
            value = value.val
        if prec < MIN_PREC:
            raise ValueError(f"precision_bits must be >= {MIN_PREC}, got {prec}")
        with mp.workprec(prec):
            object.__setattr__(self, "val", mpc(value))
        object.__setattr__(self, "prec", prec)

    @classmethod
    def from_strings(cls, re_str, im_str="0", prec=DEFAULT_PREC):
        with mp.workprec(prec):
            return cls(mpc(mpf(re_str), mpf(im_str)), prec)

    @property
    def re(self):
        return self.val.real

    @property
    def im(self):
        return self.val.imag

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, float, complex, mpf, mpc)):
            return Scalar(other, self.prec)
        return NotImplemented

    def _bin(self, other, op, reflected=False):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        x, y = (other.val, self.val) if reflected else (self.val, other.val)
        with mp.workprec(prec):
            if op == "+":
                r = x + y
            elif op == "-":
                r = x - y
            elif op == "*":
                r = x * y
            else:
                r = x / y
            return Scalar(r, prec)

    def __add__(self, other):
        return self._bin(other, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._bin(other, "-")

    def __rsub__(self, other):
        return self._bin(other, "-", reflected=True)

    def __mul__(self, other):
        return self._bin(other, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._bin(other, "/")

    def __rtruediv__(self, other):
        return self._bin(other, "/", reflected=True)

    def __neg__(self):
        # mpmath rounds even unary minus to the ambient precision, so this
        # must run under workprec like every other operation
        with mp.workprec(self.prec):
            return Scalar(-self.val, self.prec)

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        with mp.workprec(self.prec):
            return Scalar(self.val ** k, self.prec)

    def __abs__(self):
        with mp.workprec(self.prec):
            return abs(self.val)

    def conjugate(self):
        with mp.workprec(self.prec):
            return Scalar(self.val.conjugate(), self.prec)

    def __repr__(self):
        return f"Scalar({self.val}, prec={self.prec})"

    def __complex__(self):
        return complex(self.val)


def as_scalar(value, prec=DEFAULT_PREC):
    return value if isinstance(value, Scalar) else Scalar(value, prec)


def eps(prec):
    """Unit roundoff at the given binary precision."""
    return mpf(2) ** (-prec)
