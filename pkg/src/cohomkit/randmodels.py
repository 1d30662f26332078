"""Seeded random models for the self-test.

Nilpotent structure equations are grown one generator at a time: ``d e^i``
is a random closed 2-form in ``e^1..e^{i-1}``, so ``d^2 = 0`` holds by
construction.  Complex models do the same with ``(1,0)``-generators whose
differentials have no ``(0,2)`` part.
"""

import random
from math import lcm

from .exterior import Form, enumerate_basis, form_from_vector
from .lie_model import (AlmostComplexStructure, LieAlgebraModel, SymplecticForm,
                        ce_differential, derivation_matrix, exterior_basis)
from .errors import ModelError
from .linalg import Basis, LinearOperator, kernel
from .modelfile import ModelFile


def _integer_rows(sub):
    """Kernel basis rows rescaled to integers."""
    out = []
    for r in sub.rows:
        den = lcm(*(x.re.denominator for x in r)) if r else 1
        out.append([int(x.re * den) for x in r])
    return out


def _combo(rng, rows, spread=2):
    if not rows:
        return []
    while True:
        cs = [rng.randint(-spread, spread) for _ in rows]
        if any(cs):
            break
    return [sum(c * r[t] for c, r in zip(cs, rows)) for t in range(len(rows[0]))]


def _closed_two_forms(d1, n, m):
    """Closed 2-forms in ``e^1..e^m`` for the partial derivation ``d1`` (on ``n`` generators)."""
    labels = tuple(enumerate_basis(m, 2))
    dom = Basis(f"L^2(R^{m})", labels)
    cod = exterior_basis(n, 3)
    op = derivation_matrix(d1, n, 2, exterior_basis(n, 2), cod)
    pos = {lab: t for t, lab in enumerate(exterior_basis(n, 2).labels)}
    rows = [[r[pos[lab]] for lab in labels] for r in op.rows]
    return labels, kernel(LinearOperator(dom, cod, rows))


def random_nilpotent(n, rng, density=0.7, name=None):
    d1 = [Form.zero(2) for _ in range(n)]
    for i in range(3, n + 1):
        if rng.random() > density:
            continue
        labels, z = _closed_two_forms(d1, n, i - 1)
        vec = _combo(rng, _integer_rows(z))
        d1[i - 1] = form_from_vector(labels, vec)
    name = name or f"rand-nil-{n}"
    return LieAlgebraModel(n, name, tuple(d1), {"nilpotent": True, "completely_solvable": True,
                                                "provenance": "random nilpotent"})


def random_symplectic_form(m, rng, tries=30):
    """A random closed nondegenerate 2-form, or None when none turned up."""
    if m.n % 2:
        return None
    z = kernel(ce_differential(m, 2))
    rows = _integer_rows(z)
    labels = exterior_basis(m.n, 2).labels
    for _ in range(tries):
        omega = form_from_vector(labels, _combo(rng, rows))
        try:
            SymplecticForm(m, omega)
        except ModelError:
            continue
        return omega
    return None


def random_symplectic_model(n, rng, name, tries=20):
    for _ in range(tries):
        m = random_nilpotent(n, rng, name=name)
        omega = random_symplectic_form(m, rng)
        if omega is not None:
            return ModelFile(m, None, omega, dict(m.flags), "random")
    raise RuntimeError(f"no symplectic nilpotent model found in {tries} tries")


def random_complex_model(n, rng, density=0.8, name=None):
    """Nilpotent model with integrable standard J (``phi^a = e^{2a-1} + i e^{2a}``)."""
    h = n // 2
    J = AlmostComplexStructure.standard(n)
    d1 = [Form.zero(2) for _ in range(n)]
    for a in range(2, h + 1):
        if rng.random() > density:
            continue
        m = 2 * (a - 1)
        labels, z = _closed_two_forms(d1, n, m)
        if not z.dim:
            continue
        # closed real forms alpha, beta with alpha + i beta free of (0,2) part
        zr = _integer_rows(z)
        cand = [form_from_vector(labels, r) for r in zr]
        # (0,2) part of a real 2-form in the theta frame: coefficient on conj(theta) pairs
        hol = J.holomorphic_coframe()
        P = hol + [[x.conj() for x in r] for r in hol]
        cb = Basis("coframe", tuple(range(n)))
        Q = LinearOperator(cb, cb, P).inverse().rows
        E = [Form(1, {(t + 1,): Q[l][t] for t in range(n)}) for l in range(n)]
        bad = [(h + s, h + t) for s in range(1, h + 1) for t in range(s + 1, h + 1)]

        def part02(f):
            acc = Form.zero(2)
            for (i, j), c in f.items():
                acc = acc + (E[i - 1] ^ E[j - 1]) * c
            return [acc.coefficient(b) for b in bad]

        cols = [part02(f) for f in cand]
        k = len(cand)
        # unknowns (x, y): alpha = sum x_t cand_t, beta = sum y_t cand_t
        rows = []
        for r in range(len(bad)):
            re_row = [cols[t][r].re for t in range(k)] + [-cols[t][r].im for t in range(k)]
            im_row = [cols[t][r].im for t in range(k)] + [cols[t][r].re for t in range(k)]
            rows.extend([re_row, im_row])
        dom = Basis("xy", tuple(range(2 * k)))
        if rows:
            sol = kernel(LinearOperator(dom, Basis("c", tuple(range(len(rows)))), rows))
        else:
            sol = kernel(LinearOperator.zero(dom, Basis("c", ())))
        if not sol.dim:
            continue
        xy = _combo(rng, _integer_rows(sol))
        alpha = Form.zero(2)
        beta = Form.zero(2)
        for t in range(k):
            alpha = alpha + cand[t] * xy[t]
            beta = beta + cand[t] * xy[k + t]
        d1[2 * a - 2] = alpha
        d1[2 * a - 1] = beta
    name = name or f"rand-cplx-{n}"
    m = LieAlgebraModel(n, name, tuple(d1), {"nilpotent": True, "completely_solvable": True,
                                             "provenance": "random nilpotent complex"})
    return ModelFile(m, J, None, dict(m.flags), "random")


def suite(seed=0, n_symplectic=50, n_complex=8):
    """Seeded random models: symplectic ones in dims 4 and 6, complex ones in dims 4 and 6."""
    rng = random.Random(seed)
    out = []
    for t in range(n_symplectic):
        n = 4 if t % 2 == 0 else 6
        out.append(random_symplectic_model(n, rng, f"rand-sympl-{seed}-{t}"))
    for t in range(n_complex):
        n = 4 if t % 2 == 0 else 6
        out.append(random_complex_model(n, rng, name=f"rand-cplx-{seed}-{t}"))
    return out
