"""Exact linear algebra over the Gaussian rationals.

Matrices are stored as tuples of Scalar rows.  All elimination is done on
integerized copies with fraction-free (Bareiss-style) Gauss-Jordan steps; a
real fast path runs on plain ints when no entry has an imaginary part.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import ContractViolation
from .exterior import ONE, ZERO, Scalar


@dataclass(frozen=True)
class Basis:
    """Ordered basis descriptor; operators compose only along equal descriptors."""

    name: str
    labels: tuple

    def __len__(self):
        return len(self.labels)

    def index(self, label):
        return self.labels.index(label)


def _is_real_rows(rows):
    return all(x.im == 0 for r in rows for x in r)


def _row_ints_real(row):
    den = 1
    for x in row:
        d = x.re.denominator
        if d != 1:
            den = lcm(den, d)
    return [x.re.numerator * (den // x.re.denominator) for x in row]


def _row_ints_gauss(row):
    den = 1
    for x in row:
        for part in (x.re, x.im):
            d = part.denominator
            if d != 1:
                den = lcm(den, d)
    re = [x.re.numerator * (den // x.re.denominator) for x in row]
    im = [x.im.numerator * (den // x.im.denominator) for x in row]
    return re, im


def _exact_div(a, b):
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("fraction-free elimination lost exactness")
    return q


def _gj_real(m, ncols):
    nrows = len(m)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        piv = pr[c]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    m[i] = [_exact_div(x * piv, prev) for x in row]
                continue
            m[i] = [_exact_div(piv * x - f * y, prev) for x, y in zip(row, pr)]
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _gdiv(ar, ai, br, bi):
    n = br * br + bi * bi
    return _exact_div(ar * br + ai * bi, n), _exact_div(ai * br - ar * bi, n)


def _gj_gauss(m, ncols):
    # rows are (re_list, im_list) pairs of Gaussian-integer parts
    nrows = len(m)
    prev_r, prev_i = 1, 0
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p][0][c] == 0 and m[p][1][c] == 0:
            p += 1
        if p == nrows:
            continue
        m[r], m[p] = m[p], m[r]
        pre, pim = m[r]
        vr, vi = pre[c], pim[c]
        for i in range(nrows):
            if i == r:
                continue
            xre, xim = m[i]
            fr, fi = xre[c], xim[c]
            if fr == 0 and fi == 0:
                if (vr, vi) != (prev_r, prev_i):
                    nre, nim = [], []
                    for a, b in zip(xre, xim):
                        q = _gdiv(vr * a - vi * b, vr * b + vi * a, prev_r, prev_i)
                        nre.append(q[0])
                        nim.append(q[1])
                    m[i] = (nre, nim)
                continue
            nre, nim = [], []
            for a, b, ya, yb in zip(xre, xim, pre, pim):
                tr = (vr * a - vi * b) - (fr * ya - fi * yb)
                ti = (vr * b + vi * a) - (fr * yb + fi * ya)
                if prev_i == 0 and prev_r == 1:
                    nre.append(tr)
                    nim.append(ti)
                else:
                    q = _gdiv(tr, ti, prev_r, prev_i)
                    nre.append(q[0])
                    nim.append(q[1])
            m[i] = (nre, nim)
        prev_r, prev_i = vr, vi
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref_rows(rows, ncols):
    """Reduced row echelon form of a list of Scalar rows: ``(rows, pivots)``."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return [], []
    if _is_real_rows(rows):
        m, piv = _gj_real([_row_ints_real(r) for r in rows], ncols)
        out = []
        for row, c in zip(m, piv):
            d = row[c]
            out.append([Scalar(Fraction(x, d)) if x else ZERO for x in row])
        return out, piv
    m, piv = _gj_gauss([_row_ints_gauss(r) for r in rows], ncols)
    out = []
    for (re, im), c in zip(m, piv):
        d = Scalar(re[c], im[c])
        inv = ONE / d
        out.append([Scalar(a, b) * inv if (a or b) else ZERO for a, b in zip(re, im)])
    return out, piv


def _matrix_ints(rows):
    """Common-denominator integer form ``(re, im or None, den)`` of a matrix."""
    den = 1
    real = True
    for r in rows:
        for x in r:
            if x.re.denominator != 1:
                den = lcm(den, x.re.denominator)
            if x.im:
                real = False
                if x.im.denominator != 1:
                    den = lcm(den, x.im.denominator)
    re = [[x.re.numerator * (den // x.re.denominator) for x in r] for r in rows]
    if real:
        return re, None, den
    im = [[x.im.numerator * (den // x.im.denominator) for x in r] for r in rows]
    return re, im, den


def _int_matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matmul_rows(a, b, inner):
    """Product of Scalar matrices ``a`` (m x inner) and ``b`` (inner x p)."""
    m = len(a)
    p = len(b[0]) if b else 0
    if m == 0:
        return []
    if inner == 0 or p == 0:
        return [[ZERO] * p for _ in range(m)]
    ar, ai, ad = _matrix_ints(a)
    br, bi, bd = _matrix_ints(b)
    den = ad * bd
    rr = _int_matmul(ar, br)
    if ai is None and bi is None:
        return [[Scalar(Fraction(x, den)) if x else ZERO for x in row] for row in rr]
    if ai is None:
        ri = _int_matmul(ar, bi)
    elif bi is None:
        ri = _int_matmul(ai, br)
    else:
        rr = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(rr, _int_matmul(ai, bi))]
        ri = [[x + y for x, y in zip(r1, r2)]
              for r1, r2 in zip(_int_matmul(ar, bi), _int_matmul(ai, br))]
    return [[Scalar(Fraction(x, den), Fraction(y, den)) if (x or y) else ZERO
             for x, y in zip(r1, r2)] for r1, r2 in zip(rr, ri)]


def det_rows(rows):
    """Determinant of a square Scalar matrix."""
    n = len(rows)
    if n == 0:
        return ONE
    m = [list(r) for r in rows]
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        pv = m[c][c]
        det = det * pv
        inv = ONE / pv
        for i in range(c + 1, n):
            f = m[i][c]
            if f:
                f = f * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


class LinearOperator:
    """Matrix between two basis descriptors; column ``j`` is the image of domain vector ``j``."""

    __slots__ = ("domain", "codomain", "rows")

    def __init__(self, domain, codomain, rows):
        rows = tuple(tuple(Scalar.coerce(x) for x in r) for r in rows)
        if len(rows) != len(codomain):
            raise ContractViolation(
                f"operator has {len(rows)} rows, codomain {codomain.name} has {len(codomain)}")
        for r in rows:
            if len(r) != len(domain):
                raise ContractViolation(
                    f"operator row of length {len(r)}, domain {domain.name} has {len(domain)}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("LinearOperator is immutable")

    @classmethod
    def _raw(cls, domain, codomain, rows):
        op = object.__new__(cls)
        object.__setattr__(op, "domain", domain)
        object.__setattr__(op, "codomain", codomain)
        object.__setattr__(op, "rows", tuple(tuple(r) for r in rows))
        return op

    @classmethod
    def zero(cls, domain, codomain):
        return cls._raw(domain, codomain, [[ZERO] * len(domain) for _ in codomain.labels])

    @classmethod
    def identity(cls, basis):
        n = len(basis)
        return cls._raw(basis, basis, [[ONE if i == j else ZERO for j in range(n)]
                                       for i in range(n)])

    @classmethod
    def from_columns(cls, domain, codomain, columns):
        cols = [list(c) for c in columns]
        if len(cols) != len(domain):
            raise ContractViolation("column count does not match the domain")
        rows = [[cols[j][i] for j in range(len(domain))] for i in range(len(codomain))]
        return cls(domain, codomain, rows)

    @property
    def shape(self):
        return len(self.codomain), len(self.domain)

    def column(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [list(c) for c in zip(*self.rows)] if self.rows else [[] for _ in self.domain.labels]

    def entry(self, i, j):
        return self.rows[i][j]

    def is_zero(self):
        return not any(x for r in self.rows for x in r)

    def is_real(self):
        return _is_real_rows(self.rows)

    def __eq__(self, other):
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.domain, self.codomain, self.rows))

    def __matmul__(self, other):
        """Composition ``self o other``."""
        if not isinstance(other, LinearOperator):
            return NotImplemented
        if other.codomain != self.domain:
            raise ContractViolation(
                f"cannot compose {self.domain.name}->{self.codomain.name} after "
                f"{other.domain.name}->{other.codomain.name}")
        if not len(self.domain):
            return LinearOperator.zero(other.domain, self.codomain)
        rows = matmul_rows(self.rows, other.rows, len(self.domain))
        return LinearOperator._raw(other.domain, self.codomain, rows)

    def _check_parallel(self, other):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ContractViolation("operators act between different spaces")

    def __add__(self, other):
        self._check_parallel(other)
        return LinearOperator._raw(self.domain, self.codomain,
                                   [[x + y for x, y in zip(r, s)]
                                    for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check_parallel(other)
        return LinearOperator._raw(self.domain, self.codomain,
                                   [[x - y for x, y in zip(r, s)]
                                    for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return LinearOperator._raw(self.domain, self.codomain,
                                   [[-x for x in r] for r in self.rows])

    def scale(self, s):
        s = Scalar.coerce(s)
        return LinearOperator._raw(self.domain, self.codomain,
                                   [[x * s for x in r] for r in self.rows])

    def transpose(self):
        cols = list(zip(*self.rows)) if self.rows else [() for _ in self.domain.labels]
        return LinearOperator._raw(self.codomain, self.domain, cols)

    def conj(self):
        return LinearOperator._raw(self.domain, self.codomain,
                                   [[x.conj() for x in r] for r in self.rows])

    def conj_transpose(self):
        return self.transpose().conj()

    H = property(conj_transpose)

    def apply(self, vec):
        vec = [Scalar.coerce(v) for v in vec]
        if len(vec) != len(self.domain):
            raise ContractViolation("vector length does not match the domain")
        if not vec:
            return [ZERO] * len(self.codomain)
        out = matmul_rows(self.rows, [[v] for v in vec], len(vec))
        return [r[0] for r in out] if out else []

    def rank(self):
        return rank(self)

    def inverse(self):
        n, m = self.shape
        if n != m:
            raise ContractViolation("only square operators can be inverted")
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)]
               for i, r in enumerate(self.rows)]
        red, piv = rref_rows(aug, 2 * n)
        if piv[:n] != list(range(n)):
            raise ArithmeticError("operator is singular")
        return LinearOperator._raw(self.codomain, self.domain, [r[n:] for r in red])

    def __repr__(self):
        return f"LinearOperator({self.domain.name} -> {self.codomain.name}, {self.shape})"


def block(rows_of_ops, domain, codomain):
    """Assemble a block operator; ``rows_of_ops[i][j]`` maps domain block j to codomain block i."""
    rows = []
    for ops in rows_of_ops:
        height = len(ops[0].codomain)
        for t in range(height):
            row = []
            for op in ops:
                row.extend(op.rows[t])
            rows.append(row)
    return LinearOperator(domain, codomain, rows)


class Subspace:
    """Subspace of the span of ``ambient``, stored in reduced echelon form."""

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient, vectors=()):
        n = len(ambient)
        vecs = []
        for v in vectors:
            v = [Scalar.coerce(x) for x in v]
            if len(v) != n:
                raise ContractViolation(f"vector of length {len(v)} in ambient of dim {n}")
            vecs.append(v)
        red, piv = rref_rows(vecs, n)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in red))
        object.__setattr__(self, "pivots", tuple(piv))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def full(cls, ambient):
        n = len(ambient)
        return cls(ambient, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @property
    def dim(self):
        return len(self.rows)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.rows == other.rows

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def _check(self, other):
        if self.ambient != other.ambient:
            raise ContractViolation(
                f"subspaces live in different ambients: {self.ambient.name} vs {other.ambient.name}")

    def reduce(self, vec):
        """Normal form of ``vec`` modulo this subspace (zero on the pivot columns)."""
        v = [Scalar.coerce(x) for x in vec]
        for row, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def contains(self, vec):
        return not any(self.reduce(vec))

    def contains_subspace(self, other):
        self._check(other)
        return all(self.contains(r) for r in other.rows)

    def __repr__(self):
        return f"Subspace(dim {self.dim} in {self.ambient.name}[{len(self.ambient)}])"


def rank(op):
    return len(rref_rows([list(r) for r in op.rows], len(op.domain))[1])


def kernel(op):
    n = len(op.domain)
    red, piv = rref_rows([list(r) for r in op.rows], n)
    pivset = set(piv)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for row, c in zip(red, piv):
            v[c] = -row[f]
        vecs.append(v)
    return Subspace(op.domain, vecs)


def image(op):
    return Subspace(op.codomain, op.columns() if op.rows else [])


def span_sum(u, v):
    u._check(v)
    return Subspace(u.ambient, list(u.rows) + list(v.rows))


def annihilator(u):
    """``{w : sum_i w_i u_i = 0 for all u in U}`` (bilinear, no conjugation)."""
    op = LinearOperator._raw(u.ambient, Basis("rows", tuple(range(u.dim))), u.rows)
    return kernel(op)


def intersect(u, v):
    u._check(v)
    if u.dim == 0 or v.dim == 0:
        return Subspace(u.ambient)
    return annihilator(span_sum(annihilator(u), annihilator(v)))


def quotient_dim(u, v):
    if not u.contains_subspace(v):
        raise ContractViolation("denominator is not contained in the numerator")
    return u.dim - v.dim


def apply_to_subspace(op, u):
    if op.domain != u.ambient:
        raise ContractViolation("operator domain differs from the subspace ambient")
    if u.dim == 0:
        return Subspace(op.codomain)
    cols = matmul_rows(op.rows, [list(c) for c in zip(*u.rows)], len(op.domain))
    return Subspace(op.codomain, list(zip(*cols)) if cols else [])


class Quotient:
    """Presentation of ``num / den`` with a canonical complement basis.

    Complement vectors are the reduced echelon form of the numerator's basis
    taken modulo the denominator; coordinates are read off the complement's
    pivot columns after reducing modulo the denominator.
    """

    def __init__(self, num, den, name=None):
        num._check(den)
        if not num.contains_subspace(den):
            raise ContractViolation("denominator is not contained in the numerator")
        self.num = num
        self.den = den
        comp = Subspace(num.ambient, [den.reduce(r) for r in num.rows])
        self.complement = comp
        self.basis = Basis(name or f"H({num.ambient.name})", tuple(range(comp.dim)))

    @property
    def dim(self):
        return self.complement.dim

    @property
    def ambient(self):
        return self.num.ambient

    def coords(self, vec):
        if not self.num.contains(vec):
            raise ContractViolation("vector is not in the numerator")
        r = self.den.reduce(vec)
        c = [r[p] for p in self.complement.pivots]
        return c

    def lift(self, coords):
        n = len(self.ambient)
        v = [ZERO] * n
        for a, row in zip(coords, self.complement.rows):
            if a:
                v = [x + a * y for x, y in zip(v, row)]
        return v


def induced_map(op, dom, cod):
    """Matrix of the map ``dom.num/dom.den -> cod.num/cod.den`` induced by ``op``.

    Raises ContractViolation unless ``op`` maps numerator into numerator and
    denominator into denominator.
    """
    if op.domain != dom.ambient or op.codomain != cod.ambient:
        raise ContractViolation("operator does not act between the quotient ambients")
    if not cod.num.contains_subspace(apply_to_subspace(op, dom.num)):
        raise ContractViolation("operator does not map numerator into numerator")
    if not cod.den.contains_subspace(apply_to_subspace(op, dom.den)):
        raise ContractViolation("operator does not map denominator into denominator")
    cols = []
    for row in dom.complement.rows:
        cols.append(cod.coords(op.apply(row)))
    return LinearOperator.from_columns(dom.basis, cod.basis, cols)


def kernel_witnesses(qmap, dom):
    """Representatives in the ambient space of a basis of ``ker qmap``."""
    return [dom.lift(v) for v in kernel(qmap).rows]
