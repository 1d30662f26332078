"""Finite-dimensional Hodge theory: inner products, adjoints and Laplacians.

Every cohomology in the package is a quotient ``Z / B`` of finite spaces, so
for any choice of inner products the kernel of the matching Laplacian is a
complement of ``B`` in ``Z`` and has the same dimension.  The checks below
assemble the Laplacians from their defining formulas and compare.
"""

import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction

from . import double_complex as dcx
from . import symplectic as sym
from .errors import TheoremViolation
from .exterior import Form, Scalar, merge_sign, wedge_all
from .linalg import LinearOperator, Subspace, det_rows, kernel


def random_gram(n, rng, spread=3):
    """``G^T G + I`` for a random integer matrix ``G``."""
    G = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
    return tuple(tuple(Fraction(sum(G[t][i] * G[t][j] for t in range(n)) + (i == j))
                       for j in range(n)) for i in range(n))


@lru_cache(maxsize=512)
def _real_minor_gram(base, labels):
    """Minors of a real Gram on monomials, in plain rationals (shared across models)."""
    return tuple(tuple(_fraction_det([[base[i - 1][j - 1] for j in J] for i in I])
                       for J in labels) for I in labels)


def _fraction_det(m):
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        pv = m[c][c]
        det *= pv
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / pv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def _is_multi_index_basis(basis):
    return all(isinstance(lab, tuple) and all(isinstance(x, int) for x in lab)
               for lab in basis.labels)


class InnerProductStructure:
    """Inner products on every space a complex can hand us.

    ``gram`` is a real positive-definite matrix on the degree-1 generators
    ``e^i``; monomials get the induced minors.  With ``frame`` (the change of
    coframe of a complex structure) the labels are read as monomials in the
    ``theta_a`` and the induced Hermitian form is used.  Spaces whose labels
    are not monomials get the identity, or a seeded random Gram when
    ``seed`` is given.

    ``gram(basis)[a][b] = <v_b, v_a>``, so ``<x, y> = y^H G x``.
    """

    def __init__(self, gram=None, frame=None, seed=None):
        self.base = None if gram is None else tuple(tuple(Fraction(x) for x in r) for r in gram)
        self.frame = frame
        self.seed = seed
        self._cache = {}
        self.gen = None
        if self.base is not None:
            n = len(self.base)
            if frame is None:
                self.gen = [[Scalar(x) for x in r] for r in self.base]
            else:
                P = frame.P.rows
                self.gen = [[sum((P[b][l] * P[a][m].conj() * self.base[l][m]
                                  for l in range(n) for m in range(n)), Scalar(0))
                             for b in range(n)] for a in range(n)]

    @classmethod
    def orthonormal(cls, n, frame=None):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), frame)

    @classmethod
    def random(cls, n, seed, frame=None):
        return cls(random_gram(n, random.Random(seed)), frame, seed=seed)

    def gram(self, basis):
        g = self._cache.get(basis)
        if g is not None:
            return g
        if self.gen is not None and self.frame is None and _is_multi_index_basis(basis):
            rows = _real_minor_gram(self.base, basis.labels)
        elif self.gen is not None and _is_multi_index_basis(basis):
            rows = [[det_rows([[self.gen[i - 1][j - 1] for j in J] for i in I]) if I else Scalar(1)
                     for J in basis.labels] for I in basis.labels]
        elif self.seed is not None:
            rows = random_gram(len(basis), random.Random(f"{self.seed}:{basis.name}"))
        else:
            rows = [[int(i == j) for j in range(len(basis))] for i in range(len(basis))]
        g = LinearOperator(basis, basis, rows)
        self._cache[basis] = g
        return g

    def block_gram(self, basis, parts):
        """Block-diagonal Gram for a direct sum; ``parts`` lists the summand bases in order."""
        n = len(basis)
        rows = [[Scalar(0)] * n for _ in range(n)]
        off = 0
        for part in parts:
            g = self.gram(part)
            for i, r in enumerate(g.rows):
                for j, x in enumerate(r):
                    rows[off + i][off + j] = x
            off += len(part)
        g = LinearOperator(basis, basis, rows)
        self._cache[basis] = g
        return g

    def inverse_gram(self, basis):
        key = ("inv", basis)
        if key not in self._cache:
            self._cache[key] = self.gram(basis).inverse()
        return self._cache[key]

    def pairing(self, basis, x, y):
        g = self.gram(basis)
        gx = g.apply(x)
        return sum((a * b.conj() for a, b in zip(gx, y)), Scalar(0))


def adjoint(M, ip):
    """``M^dagger = G_dom^{-1} M^H G_cod``."""
    if not len(M.domain) or not len(M.codomain):
        return LinearOperator.zero(M.codomain, M.domain)
    return ip.inverse_gram(M.domain) @ M.H @ ip.gram(M.codomain)


def _square(X, ip):
    """``X^dagger X``."""
    return adjoint(X, ip) @ X


def _cosquare(X, ip):
    """``X X^dagger``."""
    return X @ adjoint(X, ip)


@dataclass
class LaplacianReport:
    flavor: str
    kernel_dims: dict = field(default_factory=dict)
    cohomology_dims: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.kernel_dims == self.cohomology_dims

    def mismatches(self):
        return {k: (self.kernel_dims.get(k), self.cohomology_dims.get(k))
                for k in set(self.kernel_dims) | set(self.cohomology_dims)
                if self.kernel_dims.get(k) != self.cohomology_dims.get(k)}


def _sum(ops):
    out = ops[0]
    for op in ops[1:]:
        out = out + op
    return out


# -- double complexes ----------------------------------------------------------------

def laplacian_bc_operator(dc, ip, p, q):
    D, Db = dc.del_at, dc.delbar_at
    dd_in = dc.ddbar_at(p - 1, q - 1)
    dd_out = dc.ddbar_at(p, q)
    # dbar* del : B^{p,q} -> B^{p+1,q-1}, and the one landing in (p,q)
    x_out = adjoint(Db(p + 1, q - 1), ip) @ D(p, q)
    x_in = adjoint(Db(p, q), ip) @ D(p - 1, q + 1)
    return _sum([_cosquare(dd_in, ip), _square(dd_out, ip), _cosquare(x_in, ip),
                 _square(x_out, ip), _square(Db(p, q), ip), _square(D(p, q), ip)])


def laplacian_a_operator(dc, ip, p, q):
    D, Db = dc.del_at, dc.delbar_at
    dd_in = dc.ddbar_at(p - 1, q - 1)
    dd_out = dc.ddbar_at(p, q)
    # dbar del* : B^{p,q} -> B^{p-1,q+1}, and the one landing in (p,q)
    y_out = Db(p - 1, q) @ adjoint(D(p - 1, q), ip)
    y_in = Db(p, q - 1) @ adjoint(D(p, q - 1), ip)
    return _sum([_cosquare(D(p - 1, q), ip), _cosquare(Db(p, q - 1), ip), _square(dd_out, ip),
                 _cosquare(dd_in, ip), _square(y_out, ip), _cosquare(y_in, ip)])


def laplacian_dbar_operator(dc, ip, p, q):
    return _square(dc.delbar_at(p, q), ip) + _cosquare(dc.delbar_at(p, q - 1), ip)


def _total_gram(dc, ip, k):
    basis = dc.total_space(k)
    if basis not in ip._cache:
        parts = [dc.space(p, q) for (p, q) in dc.bidegrees if p + q == k]
        ip.block_gram(basis, parts)
    return basis


def laplacian_d_total(dc, ip, k):
    for j in (k - 1, k, k + 1):
        _total_gram(dc, ip, j)
    return _square(dc.total_d(k), ip) + _cosquare(dc.total_d(k - 1), ip)


def _kdim(op):
    return len(op.domain) - op.rank()


def laplacian_bc(dc, ip, p, q):
    return _kdim(laplacian_bc_operator(dc, ip, p, q))


def laplacian_a(dc, ip, p, q):
    return _kdim(laplacian_a_operator(dc, ip, p, q))


def complex_laplacians(dc, ip):
    """Kernel dimensions of Δ_BC, Δ_A, Δ_dbar (per bidegree) and Δ_d (per total degree)."""
    reports = []
    for flavor, op, tab in (("BC", laplacian_bc_operator, dcx.bott_chern),
                            ("A", laplacian_a_operator, dcx.aeppli),
                            ("dolbeault", laplacian_dbar_operator, dcx.dolbeault)):
        t = tab(dc)
        reports.append(LaplacianReport(
            flavor, {pq: _kdim(op(dc, ip, *pq)) for pq in dc.bidegrees}, dict(t.dims)))
    t = dcx.de_rham(dc)
    reports.append(LaplacianReport(
        "dR", {k: _kdim(laplacian_d_total(dc, ip, k)) for k in dc.total_degrees}, dict(t.dims)))
    return reports


# -- symplectic complexes ------------------------------------------------------------

def symplectic_laplacian_operator(sc, ip, flavor, k):
    d, dl, ddl = sc.d, sc.dl, sc.ddl
    if flavor == "dR":
        return _square(d(k), ip) + _cosquare(d(k - 1), ip)
    if flavor == "dLambda":
        return _square(dl(k), ip) + _cosquare(dl(k + 1), ip)
    if flavor == "d_plus_dLambda":
        # d* dL dL* d = (dL* d)*(dL* d) and dL* d d* dL = (d* dL)*(d* dL)
        x = adjoint(dl(k + 2), ip) @ d(k)
        y = adjoint(d(k - 2), ip) @ dl(k)
        return _sum([_cosquare(ddl(k), ip), _square(ddl(k), ip), _square(x, ip), _square(y, ip),
                     _square(d(k), ip), _square(dl(k), ip)])
    if flavor == "ddLambda":
        # d dL* dL d* = (dL d*)*(dL d*) and dL d* d dL* = (d dL*)*(d dL*)
        u = dl(k - 1) @ adjoint(d(k - 1), ip)
        v = d(k + 1) @ adjoint(dl(k + 1), ip)
        return _sum([_cosquare(ddl(k), ip), _square(ddl(k), ip), _square(u, ip), _square(v, ip),
                     _cosquare(d(k - 1), ip), _cosquare(dl(k + 1), ip)])
    raise ValueError(f"unknown flavor {flavor}")


def harmonic_space(sc, ip, flavor, k):
    key = ("harmonic", id(sc), flavor, k)
    hit = ip._cache.get(key)
    if hit is None or hit[0] is not sc:
        hit = (sc, kernel(symplectic_laplacian_operator(sc, ip, flavor, k)))
        ip._cache[key] = hit
    return hit[1]


def symplectic_laplacians(sc, ip):
    reports = []
    for flavor in sym.SYMPLECTIC_FLAVORS:
        t = sym.table(sc, flavor)
        kd = {k: harmonic_space(sc, ip, flavor, k).dim for k in range(sc.n + 1)}
        reports.append(LaplacianReport(flavor, kd, dict(t.dims)))
    return reports


def check_reports(reports, what):
    bad = [r for r in reports if not r.ok]
    if bad:
        raise TheoremViolation(
            f"{what}: Laplacian kernels differ from cohomology for "
            + ", ".join(f"{r.flavor} {r.mismatches()}" for r in bad))
    return reports


def is_self_adjoint(op, ip):
    return adjoint(op, ip) == op


def default_symplectic_ip(sc, triple=None):
    """Orthonormal generators, or the metric of a compatible triple when given."""
    if triple is not None:
        return InnerProductStructure(triple.coframe_gram())
    return InnerProductStructure.orthonormal(sc.n)


# -- Hodge stars -----------------------------------------------------------------------

def _star_matrix(gram_k, k, n, cod):
    """``a ^ *b = <a, b> e^{1..n}`` for a real Gram on ``k``-forms."""
    full = tuple(range(1, n + 1))
    pos = {lab: t for t, lab in enumerate(cod.labels)}
    dom = gram_k.domain
    rows = [[Scalar(0)] * len(dom) for _ in range(len(cod))]
    for j in range(len(dom)):
        for i, I in enumerate(dom.labels):
            c = gram_k.rows[i][j]
            if not c:
                continue
            comp = tuple(x for x in full if x not in I)
            rows[pos[comp]][j] = c * merge_sign(I, comp)
    return LinearOperator(dom, cod, rows)


def riemannian_star(ip, k):
    """Real Hodge star ``A^k -> A^{n-k}`` of the generator Gram, volume ``e^{1..n}``."""
    from .lie_model import exterior_basis
    n = len(ip.base)
    real = InnerProductStructure(ip.base)
    return _star_matrix(real.gram(exterior_basis(n, k)), k, n, exterior_basis(n, n - k))


def hermitianize(gram, J):
    """``(G + J G J^T) / 2`` on the coframe: the J-invariant average."""
    n = len(gram)
    JG = [[sum(J[i][t] * gram[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    JGJt = [[sum(JG[i][t] * J[j][t] for t in range(n)) for j in range(n)] for i in range(n)]
    return tuple(tuple((Fraction(gram[i][j]) + JGJt[i][j]) / 2 for j in range(n))
                 for i in range(n))


def _theta_to_e(frame, idx):
    n = frame.model.n
    P = frame.P.rows
    return wedge_all([Form(1, {(l + 1,): P[a - 1][l] for l in range(n)}) for a in idx])


def _e_to_theta(frame, form):
    n = frame.model.n
    Q = frame.Q.rows
    E = [Form(1, {(a + 1,): Q[l][a] for a in range(n)}) for l in range(n)]
    out = Form.zero(form.degree)
    for idx, c in form.items():
        out = out + wedge_all([E[l - 1] for l in idx]) * c
    return out


def antilinear_star(dc, ip, p, q):
    """Matrix ``S`` with ``*bar(x) = S conj(x)`` from ``A^{p,q}`` to ``A^{h-p,h-q}``."""
    from .lie_model import exterior_basis
    frame = dc.frame
    n = frame.model.n
    h = n // 2
    k = p + q
    real = InnerProductStructure(ip.base)
    st = _star_matrix(real.gram(exterior_basis(n, k)), k, n, exterior_basis(n, n - k))
    dom = dc.space(p, q)
    cod = dc.space(h - p, h - q)
    pos = {lab: t for t, lab in enumerate(cod.labels)}
    src_labels = exterior_basis(n, k).labels
    cols = []
    for idx in dom.labels:
        f = _theta_to_e(frame, idx).conj()
        vec = [f.coefficient(lab) for lab in src_labels]
        img = st.apply(vec)
        g = Form(n - k, {lab: c for lab, c in zip(st.codomain.labels, img) if c})
        t = _e_to_theta(frame, g)
        col = [Scalar(0)] * len(cod)
        for lab, c in t.items():
            if lab not in pos:
                raise TheoremViolation(
                    f"{dc.name}: antilinear star of theta^{idx} leaves bidegree "
                    f"({h - p},{h - q})", {"bidegree": (p, q)})
            col[pos[lab]] = c
        cols.append(col)
    return LinearOperator.from_columns(dom, cod, cols)


@dataclass
class StarCheck:
    ok: bool
    bidegree: tuple
    square: object  # the scalar c with *bar *bar = c id, or None

    def __bool__(self):
        return self.ok


def antilinear_star_check(dc, ip, p, q):
    """``*bar`` carries Bott-Chern harmonic forms at ``(p,q)`` onto Aeppli harmonic forms.

    ``ip`` must come from a J-Hermitian generator Gram (see :func:`hermitianize`).
    """
    h = dc.frame.model.n // 2
    S = antilinear_star(dc, ip, p, q)
    S_back = antilinear_star(dc, ip, h - p, h - q)
    sq = S_back @ S.conj()
    c = sq.rows[0][0] if sq.rows else None
    if c is not None and sq != LinearOperator.identity(sq.domain).scale(c):
        c = None
    h_bc = kernel(laplacian_bc_operator(dc, ip, p, q))
    h_a = kernel(laplacian_a_operator(dc, ip, h - p, h - q))
    img = Subspace(S.codomain, [S.apply([x.conj() for x in v]) for v in h_bc.rows])
    return StarCheck(img == h_a, (p, q), c)
