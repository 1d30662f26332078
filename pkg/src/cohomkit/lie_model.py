"""Finite Lie-algebra models and the complexes built from them.

A model is given by the differential of each generator ``e^i`` of the dual
Lie algebra as a real 2-form.  From it we build the Chevalley-Eilenberg
differential, the bigraded double complex of an integrable complex
structure, and the symplectic operators of a closed nondegenerate 2-form.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial

from .double_complex import DoubleComplex, Verdict
from .errors import IncompatiblePair, IntegrabilityError, ModelError, TheoremViolation
from .exterior import (ONE, ZERO, Form, I, Scalar, contract_bivector, enumerate_basis,
                       form_from_vector, form_to_vector, merge_sign, wedge, wedge_all)
from .linalg import Basis, LinearOperator, det_rows, kernel


@dataclass(frozen=True)
class LieAlgebraModel:
    n: int
    name: str
    d1: tuple
    flags: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if len(self.d1) != self.n:
            raise ModelError(f"{self.name}: expected {self.n} generator differentials, "
                             f"got {len(self.d1)}")
        for i, f in enumerate(self.d1, 1):
            if not f.is_zero() and f.degree != 2:
                raise ModelError(f"{self.name}: d e^{i} is not a 2-form")
            if f.max_index() > self.n:
                raise ModelError(f"{self.name}: d e^{i} uses an index beyond {self.n}")
            if not f.is_real():
                raise ModelError(f"{self.name}: d e^{i} has a non-real coefficient")

    @classmethod
    def from_triples(cls, name, n, triples, flags=None):
        """``triples[i]`` lists ``(coeff, a, b)`` with ``a < b`` for ``d e^{i+1}``."""
        d1 = []
        for terms in triples:
            f = {}
            for c, a, b in terms:
                if not a < b:
                    raise ModelError(f"{name}: index pair ({a}, {b}) must satisfy a < b")
                f[(a, b)] = f.get((a, b), 0) + Fraction(c)
            d1.append(Form(2, f))
        return cls(n, name, tuple(d1), dict(flags or {}))

    def basis(self, k):
        return exterior_basis(self.n, k)

    def d(self, k):
        return ce_differential(self, k)

    @cached_property
    def betti(self):
        out = []
        for k in range(self.n + 1):
            out.append(len(self.basis(k)) - self.d(k).rank() - self.d(k - 1).rank())
        return tuple(out)

    def is_unimodular(self):
        return self.d(self.n - 1).is_zero()


@lru_cache(maxsize=None)
def exterior_basis(n, k, name="L"):
    return Basis(f"{name}^{k}(R^{n})", tuple(enumerate_basis(n, k)))


def derivation_image(dgen, idx):
    """``d(e^idx)`` for the derivation with ``d e^i = dgen[i-1]``."""
    k = len(idx)
    out = Form.zero(k + 1)
    for t, i in enumerate(idx):
        left = Form.monomial(idx[:t])
        right = Form.monomial(idx[t + 1:])
        term = wedge(wedge(left, dgen[i - 1]), right)
        out = out + (term if t % 2 == 0 else -term)
    return out


def derivation_matrix(dgen, n, k, dom, cod):
    src = enumerate_basis(n, k)
    tgt = list(cod.labels)
    cols = []
    for idx in src:
        img = derivation_image(dgen, idx) if tgt else Form.zero(k + 1)
        cols.append(form_to_vector(img, tgt))
    return LinearOperator.from_columns(dom, cod, cols)


def validate_jacobi(m):
    """d o d = 0 on generators (hence, d^2 being a derivation, in every degree)."""
    for i in range(1, m.n + 1):
        dd = Form.zero(3)
        for idx, c in m.d1[i - 1].items():
            dd = dd + derivation_image(m.d1, idx) * c
        if not dd.is_zero():
            first = dd.items()[0][0]
            return Verdict(False, f"d(d e^{i}) != 0; first nonzero monomial e^{first}", (i, first))
    return Verdict(True)


@lru_cache(maxsize=None)
def ce_differential(m, k):
    """Chevalley-Eilenberg differential ``L^k -> L^{k+1}`` in the lexicographic monomial basis."""
    dom = exterior_basis(m.n, k)
    cod = exterior_basis(m.n, k + 1)
    if not len(dom) or not len(cod):
        return LinearOperator.zero(dom, cod)
    return derivation_matrix(m.d1, m.n, k, dom, cod)


# -- almost-complex structures -------------------------------------------------

def _frac_matrix(rows):
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def _fmul(a, b):
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0])))
                 for i in range(len(a)))


def _ftranspose(a):
    return tuple(zip(*a))


@dataclass(frozen=True)
class AlmostComplexStructure:
    """``J[i][j]`` is the ``e_i`` coefficient of ``J e_j`` on the tangent frame."""

    J: tuple

    def __post_init__(self):
        J = _frac_matrix(self.J)
        object.__setattr__(self, "J", J)
        n = len(J)
        if n % 2 or any(len(r) != n for r in J):
            raise ModelError("J must be a square matrix of even size")
        sq = _fmul(J, J)
        if any(sq[i][j] != (-1 if i == j else 0) for i in range(n) for j in range(n)):
            raise ModelError("J does not square to -1")

    @property
    def n(self):
        return len(self.J)

    @classmethod
    def standard(cls, n):
        """``J e_{2i-1} = e_{2i}``."""
        J = [[0] * n for _ in range(n)]
        for i in range(0, n, 2):
            J[i + 1][i] = 1
            J[i][i + 1] = -1
        return cls(tuple(map(tuple, J)))

    def negated(self):
        return AlmostComplexStructure(tuple(tuple(-x for x in r) for r in self.J))

    def holomorphic_coframe(self):
        """Canonical basis of the (1,0)-forms: the ``+i`` eigenspace of ``J^T`` on the coframe."""
        n = self.n
        Jt = _ftranspose(self.J)
        rows = [[Scalar(Jt[i][j]) - (I if i == j else ZERO) for j in range(n)]
                for i in range(n)]
        b = Basis("coframe", tuple(range(n)))
        ker = kernel(LinearOperator(b, b, rows))
        if ker.dim != n // 2:
            raise ModelError("J has the wrong eigenspace dimensions")
        return [list(r) for r in ker.rows]


# -- double complex of a complex structure -------------------------------------------

@dataclass
class ComplexFrame:
    """Change of coframe between real generators ``e^l`` and ``theta_a``.

    ``theta_a = sum_l P[a][l] e^l``; ``theta_1..theta_h`` span the (1,0)-forms and
    ``theta_{h+a} = conj(theta_a)``.
    """

    model: LieAlgebraModel
    J: AlmostComplexStructure
    P: LinearOperator
    Q: LinearOperator

    @property
    def h(self):
        return self.model.n // 2


def _bidegree(idx, h):
    p = sum(1 for i in idx if i <= h)
    return p, len(idx) - p


def _conj_index(idx, h):
    img = [i + h if i <= h else i - h for i in idx]
    srt = tuple(sorted(img))
    # sign of the permutation sorting img
    inv = sum(1 for a in range(len(img)) for b in range(a + 1, len(img)) if img[a] > img[b])
    return (-1 if inv % 2 else 1), srt


def bigrade(m, J):
    """Split the complexified CE complex into ``(p, q)`` types; raise if ``d`` has other components."""
    n = m.n
    if n % 2 or J.n != n:
        raise ModelError(f"{m.name}: complex structure needs an even dimension matching J")
    h = n // 2
    hol = J.holomorphic_coframe()
    Prows = hol + [[x.conj() for x in r] for r in hol]
    cb = Basis("coframe", tuple(range(n)))
    P = LinearOperator(cb, cb, Prows)
    Q = P.inverse()
    # e^l expressed in the theta coframe
    E = [Form(1, {(a + 1,): Q.rows[l][a] for a in range(n)}) for l in range(n)]
    d_e = []
    for f in m.d1:
        acc = Form.zero(2)
        for (a, b), c in f.items():
            acc = acc + wedge(E[a - 1], E[b - 1]) * c
        d_e.append(acc)
    dtheta = []
    for a in range(n):
        acc = Form.zero(2)
        for l in range(n):
            c = P.rows[a][l]
            if c:
                acc = acc + d_e[l] * c
        dtheta.append(acc)
    for a, f in enumerate(dtheta, 1):
        bad = (0, 2) if a <= h else (2, 0)
        for idx, c in f.items():
            if _bidegree(idx, h) == bad:
                kind = "(1,0)" if a <= h else "(0,1)"
                gen = " + ".join(f"({x})e^{l + 1}" for l, x in enumerate(Prows[a - 1]) if x)
                raise IntegrabilityError(
                    f"{m.name}: non-integrable almost-complex structure; d of the {kind} "
                    f"generator phi^{a} = {gen} has a {bad} component")
    spaces = {}
    labels = {}
    for k in range(n + 1):
        for idx in enumerate_basis(n, k):
            labels.setdefault(_bidegree(idx, h), []).append(idx)
    for (p, q), labs in labels.items():
        spaces[(p, q)] = Basis(f"A^{p},{q}", tuple(labs))
    dels, delbars = {}, {}
    for (p, q), dom in spaces.items():
        k = p + q
        full_cod = exterior_basis(n, k + 1, "T")
        if not len(full_cod):
            continue
        cols = [form_to_vector(derivation_image(dtheta, idx), full_cod.labels)
                for idx in dom.labels]
        pos = {lab: t for t, lab in enumerate(full_cod.labels)}
        for (tp, tq), store in (((p + 1, q), dels), ((p, q + 1), delbars)):
            cod = spaces.get((tp, tq))
            if cod is None:
                continue
            rows = [[col[pos[lab]] for col in cols] for lab in cod.labels]
            store[(p, q)] = LinearOperator(dom, cod, rows)
        for (tp, tq) in ((p + 2, q - 1), (p - 1, q + 2)):
            cod = spaces.get((tp, tq))
            if cod is None:
                continue
            if any(col[pos[lab]] for col in cols for lab in cod.labels):
                raise TheoremViolation(
                    f"{m.name}: d has a ({tp - p},{tq - q}) component although the "
                    "generators are of pure type")
    conj = {}
    for (p, q), dom in spaces.items():
        cod = spaces[(q, p)]
        pos = {lab: t for t, lab in enumerate(cod.labels)}
        rows = [[ZERO] * len(dom) for _ in range(len(cod))]
        for j, idx in enumerate(dom.labels):
            s, img = _conj_index(idx, h)
            rows[pos[img]][j] = Scalar(s)
        conj[(p, q)] = LinearOperator(dom, cod, rows)
    return DoubleComplex(spaces, dels, delbars, conj, name=m.name,
                         frame=ComplexFrame(m, J, P, Q))


# -- symplectic forms ------------------------------------------------------------

def _omega_matrix(omega, n):
    W = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), c in omega.items():
        W[a - 1][b - 1] += c.re
        W[b - 1][a - 1] -= c.re
    return tuple(tuple(r) for r in W)


def _finverse(M):
    n = len(M)
    b = Basis("v", tuple(range(n)))
    inv = LinearOperator(b, b, [[Scalar(x) for x in r] for r in M]).inverse()
    return tuple(tuple(x.re for x in r) for r in inv.rows)


class SymplecticForm:
    """Closed nondegenerate real 2-form on a model.

    ``pi`` is the Poisson bivector with ``pi^{ij} = -(Omega^{-1})_{ij}`` where
    ``Omega_{ij} = omega(e_i, e_j)``; with this sign the contraction
    ``Lambda = iota(pi)`` satisfies ``[Lambda, L] = (n/2 - k) id`` on k-forms.
    """

    def __init__(self, model, omega):
        self.model = model
        n = model.n
        if n % 2:
            raise ModelError(f"{model.name}: symplectic forms need an even dimension")
        if omega.degree != 2 or not omega.is_real() or omega.max_index() > n:
            raise ModelError(f"{model.name}: omega must be a real 2-form on {n} generators")
        self.omega = omega
        self.n = n
        self.n_half = n // 2
        domega = Form.zero(3)
        for idx, c in omega.items():
            domega = domega + derivation_image(model.d1, idx) * c
        if not domega.is_zero():
            raise ModelError(f"{model.name}: omega is not closed (d omega = {domega!r})")
        top = wedge_all([omega] * self.n_half)
        if top.is_zero():
            raise ModelError(f"{model.name}: omega is degenerate (omega^{self.n_half} = 0)")
        # omega^{n/2} / (n/2)! = pf * e^{1..n}
        self.pfaffian = top.coefficient(tuple(range(1, n + 1))).re / factorial(self.n_half)
        self.matrix = _omega_matrix(omega, n)
        Winv = _finverse(self.matrix)
        self.pi = Form(2, {(i + 1, j + 1): -Winv[i][j]
                           for i in range(n) for j in range(i + 1, n) if Winv[i][j]})

    def pi_pair(self, i, j):
        """``omega^{-1}(e^i, e^j) = (Omega^{-1})_{ij} = -pi^{ij}``.

        This is the pairing for which the star satisfies both ``** = id`` and
        ``[d, Lambda] = (-1)^(k+1) *d*``.
        """
        if i == j:
            return Fraction(0)
        if i < j:
            return -self.pi.coefficient((i, j)).re
        return self.pi.coefficient((j, i)).re

    def __repr__(self):
        return f"SymplecticForm({self.model.name}, {self.omega!r})"


# -- symplectic operators --------------------------------------------------------------

def lefschetz_operator(w, k):
    n = w.n
    dom, cod = exterior_basis(n, k), exterior_basis(n, k + 2)
    cols = [form_to_vector(wedge(w.omega, Form.monomial(idx)), cod.labels) if len(cod)
            else [] for idx in dom.labels]
    return LinearOperator.from_columns(dom, cod, cols)


def lambda_operator(w, k):
    n = w.n
    dom, cod = exterior_basis(n, k), exterior_basis(n, k - 2)
    cols = [form_to_vector(contract_bivector(w.pi, Form.monomial(idx)), cod.labels) if len(cod)
            else [] for idx in dom.labels]
    return LinearOperator.from_columns(dom, cod, cols)


def _pairing_minor(w, a, b):
    k = len(a)
    if k == 0:
        return ONE
    return det_rows([[Scalar(w.pi_pair(i, j)) for j in b] for i in a])


def star_operator(w, k):
    """Symplectic star ``L^k -> L^{n-k}``: ``a ^ *b = (omega^{-1})^k(a, b) omega^{n/2}/(n/2)!``."""
    n = w.n
    dom, cod = exterior_basis(n, k), exterior_basis(n, n - k)
    full = tuple(range(1, n + 1))
    pos = {lab: t for t, lab in enumerate(cod.labels)}
    cols = []
    for b in dom.labels:
        col = [ZERO] * len(cod)
        for a in dom.labels:
            pair = _pairing_minor(w, a, b)
            if not pair:
                continue
            comp = tuple(i for i in full if i not in a)
            s = merge_sign(a, comp)
            col[pos[comp]] = pair * w.pfaffian * s
        cols.append(col)
    return LinearOperator.from_columns(dom, cod, cols)


def star_symplectic(w, a):
    """Apply the symplectic star to a homogeneous form."""
    k = a.degree
    op = star_operator(w, k)
    vec = form_to_vector(a, op.domain.labels)
    return form_from_vector(op.codomain.labels, op.apply(vec)) if len(op.codomain) \
        else Form.zero(w.n - k)


def symplectic_operators(m, w):
    """Assemble the symplectic complex; both constructions of d^Lambda must agree."""
    from .symplectic import SymplecticComplex

    if w.model != m:
        raise ModelError("symplectic form belongs to a different model")
    n = m.n
    d = {k: ce_differential(m, k) for k in range(-1, n + 1)}
    L = {k: lefschetz_operator(w, k) for k in range(-2, n + 1)}
    Lam = {k: lambda_operator(w, k) for k in range(0, n + 3)}
    star = {k: star_operator(w, k) for k in range(0, n + 1)}
    for k in range(n + 1):
        comm = Lam[k + 2] @ L[k] - L[k - 2] @ Lam[k]
        expect = LinearOperator.identity(exterior_basis(n, k)).scale(w.n_half - k)
        if comm != expect:
            raise TheoremViolation(
                f"{m.name}: sl2 normalization fails in degree {k}: [Lambda, L] != "
                f"({w.n_half} - {k}) id", {"degree": k})
        ss = star[n - k] @ star[k]
        if ss != LinearOperator.identity(exterior_basis(n, k)):
            raise TheoremViolation(f"{m.name}: symplectic star is not an involution in degree {k}")
    dl = {}
    for k in range(0, n + 1):
        dom, cod = exterior_basis(n, k), exterior_basis(n, k - 1)
        if k == 0:
            commutator = LinearOperator.zero(dom, cod)
        else:
            commutator = d[k - 2] @ Lam[k] - Lam[k + 1] @ d[k] if k >= 2 else -(Lam[k + 1] @ d[k])
        via_star = (star[n - k + 1] @ d[n - k] @ star[k]).scale(-1 if k % 2 == 0 else 1) \
            if k >= 1 else LinearOperator.zero(dom, cod)
        if commutator != via_star:
            raise TheoremViolation(
                f"{m.name}: [d, Lambda] and (-1)^(k+1) *d* disagree in degree {k}",
                {"degree": k})
        dl[k] = commutator
    return SymplecticComplex(m, w, d, dl, L, Lam, star)


# -- compatible triples ----------------------------------------------------------------

@dataclass
class CompatibleTriple:
    omega: SymplecticForm
    J: AlmostComplexStructure
    g: tuple  # g_{ij} = omega(e_i, J e_j) on the tangent frame

    def coframe_gram(self):
        """Inner product matrix on the generators ``e^i`` (inverse of ``g``)."""
        return _finverse(self.g)


def _leading_minors_positive(M):
    n = len(M)
    for k in range(1, n + 1):
        d = det_rows([[Scalar(M[i][j]) for j in range(k)] for i in range(k)])
        if not d.re > 0:
            return False
    return True


def build_compatible_triple(w, J):
    if J.n != w.n:
        raise IncompatiblePair("J and omega act on different dimensions")
    W = w.matrix
    g = _fmul(W, J.J)
    failures = []
    if _fmul(_fmul(_ftranspose(J.J), W), J.J) != W:
        failures.append("omega is not J-invariant")
    if g != _ftranspose(g):
        failures.append("g = omega(., J.) is not symmetric")
    if not _leading_minors_positive(g):
        failures.append("g = omega(., J.) is not positive definite")
    if failures:
        raise IncompatiblePair("incompatible pair: " + "; ".join(failures))
    return CompatibleTriple(w, J, g)


def darboux_complex_structure(w):
    """An omega-compatible J with rational entries, built by symplectic Gram-Schmidt."""
    n = w.n
    W = w.matrix

    def om(u, v):
        return sum(u[i] * W[i][j] * v[j] for i in range(n) for j in range(n))

    pool = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    frame = []
    while pool:
        u = pool.pop(0)
        t = next((t for t, v in enumerate(pool) if om(u, v) != 0), None)
        if t is None:
            raise TheoremViolation("omega degenerate during symplectic Gram-Schmidt")
        v = pool.pop(t)
        c = om(u, v)
        v = [x / c for x in v]
        frame.extend([u, v])
        new = []
        for x in pool:
            a, b = om(x, v), om(x, u)
            new.append([xi - a * ui + b * vi for xi, ui, vi in zip(x, u, v)])
        pool = new
    F = tuple(tuple(frame[j][i] for j in range(n)) for i in range(n))  # columns are frame vectors
    J0 = AlmostComplexStructure.standard(n).J
    Jm = _fmul(_fmul(F, J0), _finverse(F))
    return AlmostComplexStructure(Jm)


def compatible_triple(w, J=None):
    """Triple from ``J`` when it is compatible with ``w``, else from a Darboux frame."""
    if J is not None:
        try:
            return build_compatible_triple(w, J)
        except IncompatiblePair:
            pass
    return build_compatible_triple(w, darboux_complex_structure(w))
