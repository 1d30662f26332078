"""Exact Gaussian-rational scalars and the exterior algebra on n generators.

Monomials are strictly increasing index tuples over ``1..n``; the
lexicographic order produced by :func:`enumerate_basis` is the monomial order
every matrix in the package commits to.
"""

from fractions import Fraction
from itertools import combinations


def _frac(x):
    if type(x) is Fraction:
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class Scalar:
    """Gaussian rational ``re + im*i`` with arbitrary-precision parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            re, im = re.re, re.im + _frac(im)
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, Scalar) else cls(x)

    @property
    def is_real(self):
        return self.im == 0

    def conj(self):
        return Scalar(self.re, -self.im)

    def norm(self):
        """``|s|^2`` as a Fraction."""
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re + other, self.im)
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re - other, self.im)
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if b == 0 and d == 0:
            return Scalar(a * c)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar.coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("Scalar division by zero")
        num = self * other.conj()
        return Scalar(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (ONE / self) ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def enumerate_basis(n, k):
    """All strictly increasing ``k``-tuples in ``1..n``, lexicographically."""
    if k < 0 or k > n:
        return []
    return list(combinations(range(1, n + 1), k))


def check_multi_index(idx, n=None):
    idx = tuple(idx)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"multi-index {idx} is not strictly increasing")
    if idx and (idx[0] < 1 or (n is not None and idx[-1] > n)):
        raise ValueError(f"multi-index {idx} out of range")
    return idx


def merge_sign(a, b):
    """Sign of the permutation sorting ``a + b``; 0 when they overlap."""
    inv = 0
    j = 0
    nb = len(b)
    for x in a:
        while j < nb and b[j] < x:
            j += 1
        if j < nb and b[j] == x:
            return 0
        inv += j
    return -1 if inv & 1 else 1


def merge(a, b):
    return tuple(sorted(a + b))


def interior(i, idx):
    """``iota_{e_i}`` on the monomial ``e^idx``: ``(sign, idx without i)`` or None."""
    try:
        t = idx.index(i)
    except ValueError:
        return None
    return (-1 if t & 1 else 1), idx[:t] + idx[t + 1:]


class Form:
    """Homogeneous exterior form: a finite map from monomials to Scalars."""

    __slots__ = ("degree", "_terms")

    def __init__(self, degree, terms=None):
        clean = {}
        for idx, c in (terms or {}).items():
            idx = check_multi_index(idx)
            if len(idx) != degree:
                raise ValueError(f"monomial {idx} does not have degree {degree}")
            c = Scalar.coerce(c)
            if c:
                clean[idx] = clean.get(idx, ZERO) + c
                if not clean[idx]:
                    del clean[idx]
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Form is immutable")

    @classmethod
    def _raw(cls, degree, terms):
        f = object.__new__(cls)
        object.__setattr__(f, "degree", degree)
        object.__setattr__(f, "_terms", terms)
        return f

    @classmethod
    def monomial(cls, idx, coeff=1):
        idx = tuple(idx)
        return cls(len(idx), {idx: coeff})

    @classmethod
    def zero(cls, degree):
        return cls._raw(degree, {})

    @classmethod
    def one(cls):
        return cls._raw(0, {(): ONE})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, idx):
        return self._terms.get(tuple(idx), ZERO)

    def is_zero(self):
        return not self._terms

    def is_real(self):
        return all(c.is_real for c in self._terms.values())

    def max_index(self):
        return max((idx[-1] for idx in self._terms if idx), default=0)

    def _check_same_degree(self, other):
        if self.degree != other.degree and self._terms and other._terms:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._check_same_degree(other)
        out = dict(self._terms)
        for idx, c in other._terms.items():
            v = out.get(idx, ZERO) + c
            if v:
                out[idx] = v
            else:
                out.pop(idx, None)
        deg = self.degree if self._terms else other.degree
        return Form._raw(deg, out)

    def __neg__(self):
        return Form._raw(self.degree, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        s = Scalar.coerce(s)
        if not s:
            return Form.zero(self.degree)
        return Form._raw(self.degree, {k: v * s for k, v in self._terms.items()})

    __rmul__ = __mul__

    def conj(self):
        return Form._raw(self.degree, {k: v.conj() for k, v in self._terms.items()})

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if not self._terms and not other._terms:
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.degree, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"Form({self.degree}, 0)"
        parts = []
        for idx, c in self.items():
            name = "e" + ("".join(map(str, idx)) if max(idx, default=0) < 10
                          else "_" + "_".join(map(str, idx))) if idx else "1"
            parts.append(f"({c})*{name}")
        return " + ".join(parts)


def wedge(a, b):
    """Exterior product; the sign comes from sorting the concatenated indices."""
    out = {}
    for i, ca in a._terms.items():
        for j, cb in b._terms.items():
            s = merge_sign(i, j)
            if not s:
                continue
            k = merge(i, j)
            v = out.get(k, ZERO) + (ca * cb if s > 0 else -(ca * cb))
            if v:
                out[k] = v
            else:
                del out[k]
    return Form._raw(a.degree + b.degree, out)


def wedge_all(forms, start=None):
    out = Form.one() if start is None else start
    for f in forms:
        out = wedge(out, f)
    return out


def contract_bivector(pi, a):
    """Contract ``a`` with the bivector whose ``(i, j)`` coefficient is ``pi[i, j]``.

    Each term ``pi^{ij} e_i ^ e_j`` acts as ``iota_{e_j} iota_{e_i}``.
    """
    if a.degree < 2:
        return Form.zero(max(a.degree - 2, 0))
    out = {}
    for (i, j), p in pi._terms.items():
        for idx, c in a._terms.items():
            r1 = interior(i, idx)
            if r1 is None:
                continue
            r2 = interior(j, r1[1])
            if r2 is None:
                continue
            v = p * c
            if r1[0] * r2[0] < 0:
                v = -v
            k = r2[1]
            v = out.get(k, ZERO) + v
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return Form._raw(a.degree - 2, out)


def form_from_vector(basis, vec):
    """Form with coefficients ``vec`` against the monomial list ``basis``."""
    deg = len(basis[0]) if basis else 0
    return Form._raw(deg, {idx: Scalar.coerce(c) for idx, c in zip(basis, vec) if c})


def form_to_vector(form, basis):
    pos = {idx: t for t, idx in enumerate(basis)}
    vec = [ZERO] * len(basis)
    for idx, c in form._terms.items():
        if idx not in pos:
            raise ValueError(f"monomial {idx} not in the target basis")
        vec[pos[idx]] = c
    return vec
