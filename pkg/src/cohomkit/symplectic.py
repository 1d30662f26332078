"""Symplectic cohomologies of a model: d^Lambda, d + d^Lambda, d d^Lambda.

Also hard-Lefschetz checks on de Rham classes, the non-HLC degrees
``hk_{d+dLambda} - b_k``, the strip double complex that turns the symplectic
groups into Bott-Chern/Aeppli groups, and the associated inequality ledgers.
"""

from dataclasses import dataclass, field

from .double_complex import DoubleComplex, aeppli_quotient, bc_quotient
from .errors import ContractViolation, TheoremViolation, UsageError
from .linalg import (Basis, LinearOperator, Quotient, apply_to_subspace, image,
                     induced_map, intersect, kernel, kernel_witnesses, span_sum)
from .ledger import Ledger
from .lie_model import exterior_basis

SYMPLECTIC_FLAVORS = ("dR", "dLambda", "d_plus_dLambda", "ddLambda")


@dataclass
class SymplecticTable:
    flavor: str
    dims: dict = field(default_factory=dict)

    def __getitem__(self, k):
        return self.dims.get(k, 0)

    def as_list(self):
        return [self.dims.get(k, 0) for k in range(max(self.dims, default=-1) + 1)]


class SymplecticComplex:
    """Forms ``A^0..A^n`` of a model with ``d``, ``d^Lambda``, ``L``, ``Lambda`` and the star."""

    def __init__(self, model, omega, d, dl, L, Lam, star):
        self.model = model
        self.omega = omega
        self.n = model.n
        self.n_half = model.n // 2
        self._d = d
        self._dl = dl
        self._L = L
        self._Lam = Lam
        self._star = star
        self._cache = {}
        self._check_relations()

    @property
    def name(self):
        return self.model.name

    def space(self, k):
        return exterior_basis(self.n, k)

    def d(self, k):
        op = self._d.get(k)
        return op if op is not None else LinearOperator.zero(self.space(k), self.space(k + 1))

    def dl(self, k):
        op = self._dl.get(k)
        return op if op is not None else LinearOperator.zero(self.space(k), self.space(k - 1))

    def L(self, k):
        op = self._L.get(k)
        return op if op is not None else LinearOperator.zero(self.space(k), self.space(k + 2))

    def Lam(self, k):
        op = self._Lam.get(k)
        return op if op is not None else LinearOperator.zero(self.space(k), self.space(k - 2))

    def star(self, k):
        return self._star[k]

    def ddl(self, k):
        """``d o d^Lambda`` on ``A^k``."""
        key = ("ddl", k)
        if key not in self._cache:
            self._cache[key] = self.d(k - 1) @ self.dl(k)
        return self._cache[key]

    def lefschetz_power(self, j, k):
        """``L^j: A^k -> A^{k+2j}``."""
        op = LinearOperator.identity(self.space(k))
        for t in range(j):
            op = self.L(k + 2 * t) @ op
        return op

    def _check_relations(self):
        for k in range(self.n + 1):
            if not (self.d(k + 1) @ self.d(k)).is_zero():
                raise TheoremViolation(f"{self.name}: d o d != 0 in degree {k}")
            if not (self.dl(k - 1) @ self.dl(k)).is_zero():
                raise TheoremViolation(f"{self.name}: d^Lambda squared != 0 in degree {k}",
                                       {"degree": k})
            anti = self.d(k - 1) @ self.dl(k) + self.dl(k + 1) @ self.d(k)
            if not anti.is_zero():
                raise TheoremViolation(
                    f"{self.name}: d d^Lambda + d^Lambda d != 0 in degree {k}", {"degree": k})

    def __repr__(self):
        return f"SymplecticComplex({self.name!r}, dim {self.n})"


# -- quotient presentations -----------------------------------------------------

def _cached(sc, key, build):
    if key not in sc._cache:
        sc._cache[key] = build()
    return sc._cache[key]


def _q(num, den, what):
    try:
        return Quotient(num, den, name=what)
    except ContractViolation as exc:
        raise TheoremViolation(f"{what}: denominator not contained in numerator") from exc


def de_rham_quotient(sc, k):
    return _cached(sc, ("qdR", k), lambda: _q(kernel(sc.d(k)), image(sc.d(k - 1)), f"H_dR^{k}"))


def d_lambda_quotient(sc, k):
    return _cached(sc, ("qdl", k),
                   lambda: _q(kernel(sc.dl(k)), image(sc.dl(k + 1)), f"H_dLambda^{k}"))


def sympl_bc_quotient(sc, k):
    """``(ker d ∩ ker d^Lambda) / im d d^Lambda`` on ``A^k``.

    On a homogeneous form ``(d + d^Lambda) x = 0`` splits into ``dx = 0`` and
    ``d^Lambda x = 0`` since the two pieces live in degrees ``k+1`` and ``k-1``.
    """
    def build():
        num = intersect(kernel(sc.d(k)), kernel(sc.dl(k)))
        return _q(num, image(sc.ddl(k)), f"H_d+dLambda^{k}")
    return _cached(sc, ("qbc", k), build)


def sympl_aeppli_quotient(sc, k):
    def build():
        den = span_sum(image(sc.d(k - 1)), image(sc.dl(k + 1)))
        return _q(kernel(sc.ddl(k)), den, f"H_ddLambda^{k}")
    return _cached(sc, ("qa", k), build)


def _table(sc, flavor, fn):
    return SymplecticTable(flavor, {k: fn(sc, k).dim for k in range(sc.n + 1)})


def de_rham(sc):
    return _table(sc, "dR", de_rham_quotient)


def d_lambda_cohomology(sc):
    return _table(sc, "dLambda", d_lambda_quotient)


def sympl_bott_chern(sc):
    return _table(sc, "d_plus_dLambda", sympl_bc_quotient)


def sympl_aeppli(sc):
    return _table(sc, "ddLambda", sympl_aeppli_quotient)


def table(sc, flavor):
    return {"dR": de_rham, "dLambda": d_lambda_cohomology, "d_plus_dLambda": sympl_bott_chern,
            "ddLambda": sympl_aeppli}[flavor](sc)


# -- hard Lefschetz -----------------------------------------------------------------

@dataclass
class LefschetzMap:
    k: int
    matrix: LinearOperator
    domain: Quotient
    codomain: Quotient

    @property
    def rank(self):
        return self.matrix.rank()

    @property
    def bijective(self):
        r = self.rank
        return r == self.domain.dim == self.codomain.dim

    def kernel_witnesses(self):
        return kernel_witnesses(self.matrix, self.domain)


@dataclass
class HLCVerdict:
    ok: bool
    maps: list

    def __bool__(self):
        return self.ok

    def ranks(self):
        return {m.k: (m.domain.dim, m.rank, m.codomain.dim) for m in self.maps}


def lefschetz_map(sc, k):
    """``L^k: H^{n-k}_dR -> H^{n+k}_dR`` as an induced matrix (``n`` = half dimension)."""
    src = sc.n_half - k
    dom = de_rham_quotient(sc, src)
    cod = de_rham_quotient(sc, src + 2 * k)
    op = sc.lefschetz_power(k, src)
    try:
        mat = induced_map(op, dom, cod)
    except ContractViolation as exc:
        raise TheoremViolation(f"{sc.name}: L^{k} does not descend to de Rham classes") from exc
    return LefschetzMap(k, mat, dom, cod)


def hlc_check(sc):
    maps = [lefschetz_map(sc, k) for k in range(sc.n_half + 1)]
    return HLCVerdict(all(m.bijective for m in maps), maps)


def bc_to_de_rham(sc, k):
    """Identity-induced ``H^k_{d+dLambda} -> H^k_dR`` as ``(rank, injective, surjective)``."""
    dom = sympl_bc_quotient(sc, k)
    cod = de_rham_quotient(sc, k)
    try:
        mat = induced_map(LinearOperator.identity(sc.space(k)), dom, cod)
    except ContractViolation as exc:
        raise TheoremViolation(f"{sc.name}: H_d+dLambda -> H_dR not well defined") from exc
    r = mat.rank()
    return r, r == dom.dim, r == cod.dim


# -- non-HLC degrees ------------------------------------------------------------------

def delta_tilde(sc, k):
    return sympl_bc_quotient(sc, k).dim - de_rham_quotient(sc, k).dim


def delta_sympl(sc, k):
    return (sympl_bc_quotient(sc, k).dim + sympl_aeppli_quotient(sc, k).dim
            - 2 * de_rham_quotient(sc, k).dim)


def delta_tilde_all(sc):
    """All ``Δ̃^k`` after checking the identities tying them together."""
    n = sc.n
    vals = [delta_tilde(sc, k) for k in range(n + 1)]
    for k in range(n + 1):
        if delta_sympl(sc, k) != 2 * vals[k]:
            raise TheoremViolation(f"{sc.name}: Δ^{k} != 2 Δ̃^{k}", {"degree": k})
        if vals[k] < 0:
            raise TheoremViolation(f"{sc.name}: Δ̃^{k} = {vals[k]} < 0", {"degree": k})
    if vals[0] != 0:
        raise TheoremViolation(f"{sc.name}: Δ̃^0 = {vals[0]} != 0")
    if n >= 1 and vals[1] != 0:
        raise TheoremViolation(f"{sc.name}: Δ̃^1 = {vals[1]} != 0")
    if sc.model.is_unimodular():
        for k in range(n + 1):
            if vals[k] != vals[n - k]:
                raise TheoremViolation(f"{sc.name}: Δ̃^{k} != Δ̃^{n - k}", {"degree": k})
    return tuple(vals)


def closed_one_forms_are_dl_closed(sc):
    """``d^Lambda`` kills every closed 1-form (``d^Lambda a = -Lambda d a``)."""
    z = kernel(sc.d(1))
    return apply_to_subspace(sc.dl(1), z).dim == 0


# -- Tseng-Yau equalities --------------------------------------------------------------

def verify_tseng_yau_square(sc, ip=None):
    """``h^k_{d+dL} = h^{2n-k}_{d+dL} = h^k_{ddL} = h^{2n-k}_{ddL}`` plus map-level checks.

    The symplectic star must induce isomorphisms ``H^k_{d+dL} -> H^{n-k}_{d+dL}``;
    with an inner product from a compatible triple, the Riemannian star must
    carry harmonic ``d+dL`` forms onto harmonic ``ddL`` forms and
    ``L^{n-k}`` must carry harmonic ``d+dL`` forms of degree ``k`` onto those
    of the mirrored degree.
    """
    led = Ledger()
    n = sc.n
    bc = sympl_bott_chern(sc)
    a = sympl_aeppli(sc)
    unimodular = sc.model.is_unimodular()
    for k in range(n + 1):
        vals = (bc[k], a[k]) + ((bc[n - k], a[n - k]) if unimodular else ())
        led.add(f"tseng-yau k={k}", len(set(vals)) == 1, f"values {vals}")
    for k in range(n + 1):
        dom, cod = sympl_bc_quotient(sc, k), sympl_bc_quotient(sc, n - k)
        try:
            mat = induced_map(sc.star(k), dom, cod)
            ok = mat.rank() == dom.dim == cod.dim
        except ContractViolation:
            ok = False
        led.add(f"star iso H^{k}_d+dL", ok)
    if ip is not None:
        from . import hodge
        for k in range(n + 1):
            h_bc = hodge.harmonic_space(sc, ip, "d_plus_dLambda", k)
            h_a = hodge.harmonic_space(sc, ip, "ddLambda", n - k)
            img = apply_to_subspace(hodge.riemannian_star(ip, k), h_bc)
            led.add(f"hodge star harmonic k={k}", img == h_a)
        for k in range(sc.n_half + 1):
            src = sc.n_half - k
            h_src = hodge.harmonic_space(sc, ip, "d_plus_dLambda", src)
            h_tgt = hodge.harmonic_space(sc, ip, "d_plus_dLambda", src + 2 * k)
            img = apply_to_subspace(sc.lefschetz_power(k, src), h_src)
            led.add(f"L^{k} harmonic k={src}", img == h_tgt and img.dim == h_src.dim)
    return led


# -- strip complex ----------------------------------------------------------------------

@dataclass
class StripComplexSpec:
    q_window: tuple
    complex: DoubleComplex
    sc: SymplecticComplex

    def interior_rows(self):
        lo, hi = self.q_window
        return range(lo + 1, hi)

    def _probe(self, q0):
        if q0 not in self.interior_rows():
            raise UsageError(f"probe row {q0} is not interior to the window {self.q_window}")

    def bc_row(self, q0):
        self._probe(q0)
        return [bc_quotient(self.complex, q0 + j, q0).dim for j in range(self.sc.n + 1)]

    def aeppli_row(self, q0):
        self._probe(q0)
        return [aeppli_quotient(self.complex, q0 + j, q0).dim for j in range(self.sc.n + 1)]


def strip_complex(sc, q_window=(-1, 1)):
    """``B^{p,q} = A^{p-q} ⊗ β^q`` with ``del = d`` and ``delbar = d^Lambda ⊗ β``."""
    lo, hi = q_window
    if hi - lo < 2:
        raise UsageError("the q-window needs at least three rows")
    spaces, dels, delbars = {}, {}, {}
    for q in range(lo, hi + 1):
        for j in range(sc.n + 1):
            spaces[(q + j, q)] = Basis(f"B^{q + j},{q}", sc.space(j).labels)
    for (p, q), dom in spaces.items():
        j = p - q
        if (p + 1, q) in spaces:
            dels[(p, q)] = LinearOperator._raw(dom, spaces[(p + 1, q)], sc.d(j).rows)
        if (p, q + 1) in spaces:
            delbars[(p, q)] = LinearOperator._raw(dom, spaces[(p, q + 1)], sc.dl(j).rows)
    dc = DoubleComplex(spaces, dels, delbars, None, name=f"strip({sc.name})")
    return StripComplexSpec((lo, hi), dc, sc)


# -- inequality ledgers ---------------------------------------------------------------

def verify_bounds_thm62(sc):
    led = Ledger()
    n = sc.n
    b = de_rham(sc)
    bc = sympl_bott_chern(sc)
    a = sympl_aeppli(sc)
    total_b = sum(b[k] for k in range(n + 1))
    bound = 2 * (n + 1) * total_b
    for parity in (0, 1):
        s_bc = sum(bc[k] for k in range(n + 1) if k % 2 == parity)
        s_a = sum(a[k] for k in range(n + 1) if k % 2 == parity)
        led.add(f"d+dL parity {parity}", s_bc <= bound, f"{s_bc} <= {bound}")
        led.add(f"ddL parity {parity}", s_a <= bound, f"{s_a} <= {bound}")
    for k in range(1, sc.n_half + 1):
        led.add(f"b_{k} <= h^{k}_d+dL", b[k] <= bc[k], f"{b[k]} <= {bc[k]}")
    return led


def verify_dim4_bounds(sc):
    led = Ledger()
    if sc.n != 4:
        return led
    b1, b2 = de_rham_quotient(sc, 1).dim, de_rham_quotient(sc, 2).dim
    h2 = sympl_bc_quotient(sc, 2).dim
    top = 10 * b2 + 20 * b1 + 18
    led.add("b2 <= h2_d+dL", b2 <= h2, f"{b2} <= {h2}")
    led.add("h2_d+dL <= 10 b2 + 20 b1 + 18", h2 <= top, f"{h2} <= {top}")
    dt = h2 - b2
    led.add("0 <= Δ̃2 <= 9 b2 + 20 b1 + 18", 0 <= dt <= 9 * b2 + 20 * b1 + 18,
            f"0 <= {dt} <= {9 * b2 + 20 * b1 + 18}")
    return led
