"""Independent reference computations used to derive expected values.

Nothing here imports the package's linear algebra or exterior algebra:
ranks come from a textbook elimination over Fraction (real case) or from
sympy over Q(i) (complex case), and the Chevalley-Eilenberg differential is
rebuilt from bracket constants with the Koszul formula.
"""

from fractions import Fraction
from itertools import combinations

import sympy
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix


def textbook_rank(rows):
    """Rank by plain Gaussian elimination with Fraction pivots."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def gi(re, im=0):
    return QQ_I.from_sympy(sympy.Rational(Fraction(re).numerator, Fraction(re).denominator)
                           + sympy.I * sympy.Rational(Fraction(im).numerator,
                                                      Fraction(im).denominator))


def complex_rank(rows, ncols):
    if not rows or not ncols:
        return 0
    return DomainMatrix([list(r) for r in rows], (len(rows), ncols), QQ_I).rank()


# -- real Chevalley-Eilenberg via the Koszul formula ---------------------------------

def brackets_from_model(m):
    """``[e_i, e_j] = sum_k c[i,j][k] e_k`` under ``d e^k(X, Y) = -e^k([X, Y])``."""
    c = {}
    for k, f in enumerate(m.d1, 1):
        for (i, j), coef in f.items():
            c.setdefault((i, j), {})
            c[(i, j)][k] = c[(i, j)].get(k, 0) - coef.re
    return c


def _bracket(c, i, j):
    if i == j:
        return {}
    if i < j:
        return dict(c.get((i, j), {}))
    return {k: -v for k, v in c.get((j, i), {}).items()}


def _perm_sign(seq):
    s = 1
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                s = -s
    return s


def _eval_monomial(I, args):
    """``e^I`` on basis vectors ``e_{args}``."""
    if sorted(args) != list(I):
        return 0
    return _perm_sign(args)


def koszul_d(n, c, k):
    """Matrix of d: Λ^k -> Λ^{k+1} (rows = targets) from the Koszul formula."""
    src = list(combinations(range(1, n + 1), k))
    tgt = list(combinations(range(1, n + 1), k + 1))
    mat = [[Fraction(0)] * len(src) for _ in tgt]
    for r, J in enumerate(tgt):
        for a in range(k + 1):
            for b in range(a + 1, k + 1):
                rest = [J[t] for t in range(k + 1) if t not in (a, b)]
                for l, v in _bracket(c, J[a], J[b]).items():
                    args = [l] + rest
                    for s, I in enumerate(src):
                        val = _eval_monomial(I, args)
                        if val:
                            mat[r][s] += (-1) ** (a + b) * v * val
    return mat, src, tgt


def koszul_betti(m):
    n = m.n
    c = brackets_from_model(m)
    ranks = [textbook_rank(koszul_d(n, c, k)[0]) if k < n else 0 for k in range(n + 1)]
    dims = [len(list(combinations(range(n), k))) for k in range(n + 1)]
    return tuple(dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(n + 1))


# -- symplectic cohomologies through an independently built Lambda -------------------

def _mat_mul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def _contract(vec_i, I):
    """``iota_{e_i} e^I`` as (sign, J) or None."""
    if vec_i not in I:
        return None
    p = I.index(vec_i)
    return (-1) ** p, I[:p] + I[p + 1:]


def _omega_inverse(omega, n):
    W = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), cf in omega.items():
        W[i - 1][j - 1] = cf.re
        W[j - 1][i - 1] = -cf.re
    inv = sympy.Matrix(W).inv()
    return [[Fraction(str(inv[i, j])) for j in range(n)] for i in range(n)]


def lambda_matrix(n, P, k):
    """``sum_{i<j} P_ij iota_j iota_i`` from Λ^k to Λ^{k-2}; any fixed convention works
    because every quantity compared below is insensitive to rescaling Lambda."""
    src = list(combinations(range(1, n + 1), k))
    tgt = list(combinations(range(1, n + 1), k - 2)) if k >= 2 else []
    pos = {J: t for t, J in enumerate(tgt)}
    mat = [[Fraction(0)] * len(src) for _ in tgt]
    for s, I in enumerate(src):
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if not P[i - 1][j - 1]:
                    continue
                a = _contract(i, I)
                if a is None:
                    continue
                b = _contract(j, a[1])
                if b is None:
                    continue
                mat[pos[b[1]]][s] += P[i - 1][j - 1] * a[0] * b[0]
    return mat


def symplectic_oracle(m, omega):
    """``(betti, h_{d+dL}, hlc)`` from Koszul d, a contraction Lambda and textbook ranks."""
    n = m.n
    c = brackets_from_model(m)
    dims = [len(list(combinations(range(n), k))) for k in range(n + 1)]
    d = {k: koszul_d(n, c, k)[0] for k in range(n)}
    d[n] = []

    P = _omega_inverse(omega, n)
    lam = {k: lambda_matrix(n, P, k) for k in range(n + 1)}

    def zero(r, s):
        return [[Fraction(0)] * s for _ in range(r)]

    def d_op(k):  # Λ^k -> Λ^{k+1}
        return d[k] if k < n else zero(0, dims[n])

    def dl(k):  # Λ^k -> Λ^{k-1}, dL = d Lambda - Lambda d
        if k == 0:
            return zero(0, 1)
        left = _mat_mul(d_op(k - 2), lam[k]) if k >= 2 else zero(dims[k - 1], dims[k])
        right = _mat_mul(lam[k + 1], d_op(k)) if k + 1 <= n else zero(dims[k - 1], dims[k])
        return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(left, right)]

    betti = koszul_betti(m)
    h = []
    for k in range(n + 1):
        stacked = [list(r) for r in d_op(k)] + [list(r) for r in dl(k)]
        z = dims[k] - textbook_rank(stacked)
        b = textbook_rank(_mat_mul(d_op(k - 1), dl(k))) if k >= 1 else 0
        h.append(z - b)
    # HLC: [L^j] : H^{n/2-j} -> H^{n/2+j} of full rank
    half = n // 2
    W = {}
    for (i, j), cf in omega.items():
        W[(i, j)] = cf.re
    hlc = True
    for j in range(half + 1):
        src_k, tgt_k = half - j, half + j
        src = list(combinations(range(1, n + 1), src_k))
        tgt = list(combinations(range(1, n + 1), tgt_k))
        pos = {J: t for t, J in enumerate(tgt)}
        Lj = [[Fraction(0)] * len(src) for _ in tgt]
        for s, I in enumerate(src):
            cur = {I: Fraction(1)}
            for _ in range(j):
                nxt = {}
                for J, v in cur.items():
                    for (a, b), w in W.items():
                        if a in J or b in J:
                            continue
                        K = tuple(sorted(J + (a, b)))
                        sign = _perm_sign(J + (a, b))
                        nxt[K] = nxt.get(K, 0) + v * w * sign
                cur = nxt
            for K, v in cur.items():
                Lj[pos[K]][s] += v
        # closed forms of degree src_k
        dz = d_op(src_k)
        zbasis = sympy.Matrix(dz).nullspace() if dz else [sympy.eye(dims[src_k])[:, t]
                                                          for t in range(dims[src_k])]
        zrows = [[Fraction(str(x)) for x in vct] for vct in zbasis]
        images = [[sum(Lj[r][t] * z[t] for t in range(len(z))) for r in range(len(tgt))]
                  for z in zrows]
        exact = [list(col) for col in zip(*d_op(tgt_k - 1))] if tgt_k >= 1 else []
        rb = textbook_rank(exact) if exact else 0
        rank = textbook_rank(images + exact) - rb if (images or exact) else 0
        if rank != betti[src_k]:
            hlc = False
    return betti, tuple(h), hlc


# -- complex double complexes from holomorphic structure equations -------------------

class ComplexOracle:
    """Exterior algebra on ``phi^1..phi^h`` and their conjugates (indices ``h+1..2h``).

    ``dphi[a]`` maps wedge pairs ``(i, j)``, i < j over 1..2h, to Gaussian
    rationals given as (re, im) pairs.
    """

    def __init__(self, h, dphi):
        self.h = h
        self.n = 2 * h
        self.dgen = {}
        for a in range(1, h + 1):
            terms = {pair: gi(*v) for pair, v in dphi.get(a, {}).items()}
            self.dgen[a] = terms
            conj = {}
            for (i, j), v in terms.items():
                ci, cj = self._cidx(i), self._cidx(j)
                key, sgn = ((ci, cj), 1) if ci < cj else ((cj, ci), -1)
                conj[key] = conj.get(key, QQ_I.zero) + QQ_I.convert(sgn) * type(v)(v.x, -v.y)
            self.dgen[a + h] = conj

    def _cidx(self, i):
        return i + self.h if i <= self.h else i - self.h

    def bideg(self, I):
        p = sum(1 for i in I if i <= self.h)
        return p, len(I) - p

    def basis(self, p, q):
        hol = range(1, self.h + 1)
        anti = range(self.h + 1, self.n + 1)
        return [tuple(sorted(a + b)) for a in combinations(hol, p) for b in combinations(anti, q)]

    def d_monomial(self, I):
        out = {}
        for t, g in enumerate(I):
            for (i, j), v in self.dgen[g].items():
                new = I[:t] + (i, j) + I[t + 1:]
                if len(set(new)) != len(new):
                    continue
                sign = (-1) ** t * _perm_sign(new)
                K = tuple(sorted(new))
                out[K] = out.get(K, QQ_I.zero) + QQ_I.convert(sign) * v
        return out

    def op(self, p, q, which):
        """Matrix of del (which='del') or delbar from (p, q)."""
        src = self.basis(p, q)
        tp, tq = (p + 1, q) if which == "del" else (p, q + 1)
        tgt = self.basis(tp, tq)
        pos = {K: t for t, K in enumerate(tgt)}
        mat = [[QQ_I.zero] * len(src) for _ in tgt]
        for s, I in enumerate(src):
            for K, v in self.d_monomial(I).items():
                if self.bideg(K) == (tp, tq):
                    mat[pos[K]][s] += v
        return mat, len(src), len(tgt)

    def _rank(self, mat, ncols):
        return complex_rank(mat, ncols)

    def _compose(self, a, b):
        # a after b
        if not a or not b or not b[0]:
            return []
        return [[sum((a[i][t] * b[t][j] for t in range(len(b))), QQ_I.zero)
                 for j in range(len(b[0]))] for i in range(len(a))]

    def _dim(self, p, q):
        if p < 0 or q < 0 or p > self.h or q > self.h:
            return 0
        return len(self.basis(p, q))

    def _safe(self, p, q, which):
        if p < 0 or q < 0 or p > self.h or q > self.h:
            return [], 0, 0
        return self.op(p, q, which)

    def ddbar(self, p, q):
        """del delbar from (p, q) to (p+1, q+1)."""
        db, n0, _ = self._safe(p, q, "delbar")
        de, _, _ = self._safe(p, q + 1, "del")
        return self._compose(de, db), n0

    def tables(self):
        bc, a, dol = {}, {}, {}
        h = self.h
        for p in range(h + 1):
            for q in range(h + 1):
                dim = self._dim(p, q)
                de, _, _ = self._safe(p, q, "del")
                db, _, _ = self._safe(p, q, "delbar")
                z = dim - self._rank(de + db, dim)
                m_in, n_in = self.ddbar(p - 1, q - 1)
                bc[(p, q)] = z - (self._rank(m_in, n_in) if n_in else 0)
                m_out, _ = self.ddbar(p, q)
                ker = dim - (self._rank(m_out, dim) if m_out else 0)
                de_in, n1, _ = self._safe(p - 1, q, "del")
                db_in, n2, _ = self._safe(p, q - 1, "delbar")
                rows = [[QQ_I.zero] * 0 for _ in range(dim)]
                for t in range(dim):
                    if n1:
                        rows[t] += de_in[t]
                    if n2:
                        rows[t] += db_in[t]
                img = self._rank(rows, n1 + n2) if n1 + n2 else 0
                a[(p, q)] = ker - img
                dol_in = self._rank(db_in, n2) if n2 else 0
                dol[(p, q)] = dim - (self._rank(db, dim) if db else 0) - dol_in
        return bc, a, dol


def betti_from_complex(oracle):
    """de Rham numbers of the total complex, for cross-checks."""
    n = oracle.n
    out = []
    ranks = {}
    for k in range(n + 1):
        src = [I for p in range(k + 1) for I in oracle.basis(p, k - p)
               if p <= oracle.h and k - p <= oracle.h]
        tgt = [I for p in range(k + 2) for I in oracle.basis(p, k + 1 - p)
               if p <= oracle.h and k + 1 - p <= oracle.h] if k < n else []
        pos = {K: t for t, K in enumerate(tgt)}
        mat = [[QQ_I.zero] * len(src) for _ in tgt]
        for s, I in enumerate(src):
            for K, v in oracle.d_monomial(I).items():
                mat[pos[K]][s] += v
        ranks[k] = complex_rank(mat, len(src)) if tgt else 0
        out.append(len(src))
    return tuple(out[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(n + 1))


def permutation_sign(seq):
    return _perm_sign(seq)

