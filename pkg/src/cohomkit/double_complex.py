"""Bounded double complexes and their five cohomologies.

Every flavor is a quotient of subspaces computed by rank/kernel/image
arithmetic; no spectral sequences.  Bidegrees outside the support are zero
spaces.
"""

from dataclasses import dataclass, field

from .errors import ContractViolation, TheoremViolation, UsageError
from .linalg import (Basis, LinearOperator, Quotient, Subspace, image, induced_map as
                     _induced, intersect, kernel, kernel_witnesses, span_sum)

FLAVORS = ("dR", "dolbeault", "conj_dolbeault", "BC", "A")

# identity-induced maps of the cohomology diagram
EDGES = frozenset({
    ("BC", "conj_dolbeault"), ("BC", "dolbeault"), ("BC", "dR"),
    ("conj_dolbeault", "A"), ("dolbeault", "A"), ("dR", "A"), ("BC", "A"),
})


@dataclass
class CohomologyTable:
    flavor: str
    dims: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.dims.get(key, 0)

    def total(self, k):
        """Sum over bidegrees of total degree ``k`` (or the entry itself for dR)."""
        if self.flavor == "dR":
            return self[k]
        return sum(v for (p, q), v in self.dims.items() if p + q == k)

    def as_dict(self):
        if self.flavor == "dR":
            return {str(k): v for k, v in sorted(self.dims.items())}
        return {f"{p},{q}": v for (p, q), v in sorted(self.dims.items())}


class DoubleComplex:
    """Finite bigraded space with anticommuting differentials ``del`` (+1,0) and ``delbar`` (0,+1).

    ``conjugation`` optionally maps ``(p, q)`` to the matrix ``S`` of an
    antilinear map ``B^{p,q} -> B^{q,p}``, ``x -> S conj(x)``.
    """

    def __init__(self, spaces, dels=None, delbars=None, conjugation=None, name="",
                 frame=None):
        self.name = name
        self.spaces = {pq: b for pq, b in spaces.items() if len(b)}
        self._all_spaces = dict(spaces)
        self.frame = frame
        self._del = {}
        self._delbar = {}
        for store, ops, step in ((self._del, dels or {}, (1, 0)),
                                 (self._delbar, delbars or {}, (0, 1))):
            for (p, q), op in ops.items():
                tgt = (p + step[0], q + step[1])
                if op.domain != self.space(p, q) or op.codomain != self.space(*tgt):
                    raise ContractViolation(f"differential at {(p, q)} has the wrong shape")
                store[(p, q)] = op
        self.conjugation = None
        if conjugation is not None:
            self.conjugation = {}
            for (p, q), op in conjugation.items():
                if op.domain != self.space(p, q) or op.codomain != self.space(q, p):
                    raise ContractViolation(f"conjugation at {(p, q)} has the wrong shape")
                self.conjugation[(p, q)] = op
        self._cache = {}

    # -- spaces and operators ------------------------------------------------

    def space(self, p, q):
        b = self._all_spaces.get((p, q))
        if b is None:
            b = Basis(f"B^{p},{q}", ())
            self._all_spaces[(p, q)] = b
        return b

    def dim(self, p, q):
        return len(self.space(p, q))

    @property
    def bidegrees(self):
        return sorted(self.spaces)

    @property
    def total_degrees(self):
        ks = {p + q for p, q in self.spaces}
        return range(min(ks), max(ks) + 1) if ks else range(0)

    def window(self):
        ps = [p for p, _ in self.spaces] or [0]
        qs = [q for _, q in self.spaces] or [0]
        return (min(ps), max(ps)), (min(qs), max(qs))

    def del_at(self, p, q):
        op = self._del.get((p, q))
        return op if op is not None else LinearOperator.zero(self.space(p, q), self.space(p + 1, q))

    def delbar_at(self, p, q):
        op = self._delbar.get((p, q))
        return op if op is not None else LinearOperator.zero(self.space(p, q), self.space(p, q + 1))

    def ddbar_at(self, p, q):
        """``del o delbar`` from ``(p, q)`` to ``(p+1, q+1)``."""
        key = ("ddbar", p, q)
        if key not in self._cache:
            self._cache[key] = self.del_at(p, q + 1) @ self.delbar_at(p, q)
        return self._cache[key]

    def conj_at(self, p, q):
        if self.conjugation is None:
            return None
        op = self.conjugation.get((p, q))
        if op is None:
            return LinearOperator.zero(self.space(p, q), self.space(q, p))
        return op

    # -- totalization --------------------------------------------------------

    def total_space(self, k):
        key = ("C", k)
        if key not in self._cache:
            labels = []
            for (p, q) in self.bidegrees:
                if p + q == k:
                    labels.extend((p, q, lab) for lab in self.space(p, q).labels)
            self._cache[key] = Basis(f"C^{k}", tuple(labels))
        return self._cache[key]

    def _offsets(self, k):
        off = {}
        t = 0
        for (p, q) in self.bidegrees:
            if p + q == k:
                off[(p, q)] = t
                t += self.dim(p, q)
        return off

    def inclusion(self, p, q):
        """``B^{p,q} -> C^{p+q}``."""
        k = p + q
        tot = self.total_space(k)
        off = self._offsets(k).get((p, q), 0)
        n = self.dim(p, q)
        rows = [[1 if i == off + j else 0 for j in range(n)] for i in range(len(tot))]
        return LinearOperator(self.space(p, q), tot, rows)

    def projection(self, p, q):
        """``C^{p+q} -> B^{p,q}``."""
        return self.inclusion(p, q).transpose()

    def total_d(self, k):
        key = ("d", k)
        if key in self._cache:
            return self._cache[key]
        src = self.total_space(k)
        tgt = self.total_space(k + 1)
        off_s = self._offsets(k)
        off_t = self._offsets(k + 1)
        rows = [[0] * len(src) for _ in range(len(tgt))]
        for (p, q), s0 in off_s.items():
            for op, (tp, tq) in ((self.del_at(p, q), (p + 1, q)),
                                 (self.delbar_at(p, q), (p, q + 1))):
                if (tp, tq) not in off_t:
                    continue
                t0 = off_t[(tp, tq)]
                for i, r in enumerate(op.rows):
                    for j, x in enumerate(r):
                        if x:
                            rows[t0 + i][s0 + j] = x
        op = LinearOperator(src, tgt, rows)
        self._cache[key] = op
        return op

    def __repr__(self):
        return f"DoubleComplex({self.name!r}, {len(self.spaces)} bidegrees)"


def _quotient(num, den, what):
    try:
        return Quotient(num, den, name=what)
    except ContractViolation as exc:
        raise TheoremViolation(f"{what}: denominator not contained in numerator") from exc


# -- validation ---------------------------------------------------------------

@dataclass
class Verdict:
    ok: bool
    message: str = ""
    location: object = None

    def __bool__(self):
        return self.ok


def validate(dc):
    """Check del^2 = 0, delbar^2 = 0, anticommutation, and conjugation compatibility."""
    for (p, q) in dc.bidegrees:
        if not (dc.del_at(p + 1, q) @ dc.del_at(p, q)).is_zero():
            return Verdict(False, "del o del != 0", (p, q))
        if not (dc.delbar_at(p, q + 1) @ dc.delbar_at(p, q)).is_zero():
            return Verdict(False, "delbar o delbar != 0", (p, q))
        anti = dc.del_at(p, q + 1) @ dc.delbar_at(p, q) + dc.delbar_at(p + 1, q) @ dc.del_at(p, q)
        if not anti.is_zero():
            return Verdict(False, "del delbar + delbar del != 0", (p, q))
    if dc.conjugation is not None:
        for (p, q) in dc.bidegrees:
            s = dc.conj_at(p, q)
            back = dc.conj_at(q, p)
            if back @ s.conj() != LinearOperator.identity(dc.space(p, q)):
                return Verdict(False, "conjugation is not an involution", (p, q))
            lhs = dc.conj_at(p + 1, q) @ dc.del_at(p, q).conj()
            rhs = dc.delbar_at(q, p) @ s
            if lhs != rhs:
                return Verdict(False, "conjugation does not carry del to delbar", (p, q))
    return Verdict(True)


# -- quotient presentations ------------------------------------------------------

def bc_quotient(dc, p, q):
    key = ("qBC", p, q)
    if key not in dc._cache:
        num = intersect(kernel(dc.del_at(p, q)), kernel(dc.delbar_at(p, q)))
        den = image(dc.ddbar_at(p - 1, q - 1))
        dc._cache[key] = _quotient(num, den, f"H_BC^{p},{q}")
    return dc._cache[key]


def aeppli_quotient(dc, p, q):
    key = ("qA", p, q)
    if key not in dc._cache:
        num = kernel(dc.ddbar_at(p, q))
        den = span_sum(image(dc.del_at(p - 1, q)), image(dc.delbar_at(p, q - 1)))
        dc._cache[key] = _quotient(num, den, f"H_A^{p},{q}")
    return dc._cache[key]


def dolbeault_quotient(dc, p, q):
    key = ("qdbar", p, q)
    if key not in dc._cache:
        dc._cache[key] = _quotient(kernel(dc.delbar_at(p, q)), image(dc.delbar_at(p, q - 1)),
                                   f"H_dbar^{p},{q}")
    return dc._cache[key]


def conj_dolbeault_quotient(dc, p, q):
    key = ("qdel", p, q)
    if key not in dc._cache:
        dc._cache[key] = _quotient(kernel(dc.del_at(p, q)), image(dc.del_at(p - 1, q)),
                                   f"H_del^{p},{q}")
    return dc._cache[key]


def de_rham_quotient(dc, k):
    key = ("qdR", k)
    if key not in dc._cache:
        dc._cache[key] = _quotient(kernel(dc.total_d(k)), image(dc.total_d(k - 1)), f"H_dR^{k}")
    return dc._cache[key]


def _bigraded_table(dc, flavor, fn):
    return CohomologyTable(flavor, {(p, q): fn(dc, p, q).dim for (p, q) in dc.bidegrees})


def dolbeault(dc):
    return _bigraded_table(dc, "dolbeault", dolbeault_quotient)


def conj_dolbeault(dc):
    return _bigraded_table(dc, "conj_dolbeault", conj_dolbeault_quotient)


def bott_chern(dc):
    return _bigraded_table(dc, "BC", bc_quotient)


def aeppli(dc):
    return _bigraded_table(dc, "A", aeppli_quotient)


def de_rham(dc):
    return CohomologyTable("dR", {k: de_rham_quotient(dc, k).dim for k in dc.total_degrees})


def table(dc, flavor):
    return {"dR": de_rham, "dolbeault": dolbeault, "conj_dolbeault": conj_dolbeault,
            "BC": bott_chern, "A": aeppli}[flavor](dc)


# -- identity-induced maps ----------------------------------------------------------

def _presentation(dc, flavor, p, q):
    if flavor == "dR":
        return de_rham_quotient(dc, p + q)
    return {"BC": bc_quotient, "A": aeppli_quotient, "dolbeault": dolbeault_quotient,
            "conj_dolbeault": conj_dolbeault_quotient}[flavor](dc, p, q)


@dataclass
class InducedMap:
    source: str
    target: str
    bidegree: tuple
    matrix: LinearOperator
    domain: Quotient
    codomain: Quotient

    @property
    def rank(self):
        return self.matrix.rank()

    @property
    def injective(self):
        return self.rank == self.domain.dim

    @property
    def surjective(self):
        return self.rank == self.codomain.dim

    def kernel_witnesses(self):
        return kernel_witnesses(self.matrix, self.domain)


def induced_map(dc, source, target, bidegree):
    """Map ``H_source -> H_target`` at ``bidegree`` induced by the identity on forms."""
    if (source, target) not in EDGES:
        raise UsageError(f"{source} -> {target} is not a map of the cohomology diagram")
    p, q = bidegree
    dom = _presentation(dc, source, p, q)
    cod = _presentation(dc, target, p, q)
    if source == "dR":
        op = dc.projection(p, q)
    elif target == "dR":
        op = dc.inclusion(p, q)
    else:
        op = LinearOperator.identity(dc.space(p, q))
    try:
        mat = _induced(op, dom, cod)
    except ContractViolation as exc:
        raise TheoremViolation(f"{source} -> {target} at {bidegree} is not well defined") from exc
    return InducedMap(source, target, (p, q), mat, dom, cod)


def subspace_of(dc, p, q, vectors):
    return Subspace(dc.space(p, q), vectors)
