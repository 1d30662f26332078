"""Numerical invariants of double complexes and the checks built on them.

``Δ^k = sum_{p+q=k} (h_BC + h_A) - 2 b_k`` is computed from the tables of
:mod:`double_complex`; the deldelbar-lemma is decided three independent
ways and the answers must agree.
"""

from dataclasses import dataclass, field

from . import double_complex as dcx
from .errors import TheoremViolation
from .ledger import Ledger


def _tables(dc):
    return dcx.bott_chern(dc), dcx.aeppli(dc), dcx.de_rham(dc)


def delta_k(dc, k):
    bc, a, b = _tables(dc)
    val = bc.total(k) + a.total(k) - 2 * b[k]
    if val < 0:
        raise TheoremViolation(
            f"{dc.name}: Δ^{k} = {val} < 0",
            {"k": k, "BC": bc.as_dict(), "A": a.as_dict(), "dR": b.as_dict()})
    return val


def delta_all(dc):
    return {k: delta_k(dc, k) for k in dc.total_degrees}


@dataclass
class LemmaVerdict:
    injective: bool
    delta: bool
    bc_minus_a: object  # bool, or None without a conjugation
    witness: object = None  # (bidegree, vector) in the kernel of BC -> A

    @property
    def holds(self):
        return self.delta


def bc_to_aeppli_maps(dc):
    return {pq: dcx.induced_map(dc, "BC", "A", pq) for pq in dc.bidegrees}


def ddbar_lemma(dc):
    maps = bc_to_aeppli_maps(dc)
    witness = None
    injective = True
    for pq, m in maps.items():
        if not m.injective:
            injective = False
            if witness is None:
                witness = (pq, m.kernel_witnesses()[0])
    deltas = delta_all(dc)
    via_delta = all(v == 0 for v in deltas.values())
    crit3 = None
    if dc.conjugation is not None:
        bc, a, _ = _tables(dc)
        crit3 = all(bc.total(k) == a.total(k) for k in dc.total_degrees)
    if injective != via_delta or (crit3 is not None and crit3 != via_delta):
        raise TheoremViolation(
            f"{dc.name}: deldelbar-lemma criteria disagree "
            f"(injectivity {injective}, Δ {via_delta}, BC-A {crit3})",
            {"deltas": deltas})
    return LemmaVerdict(injective, via_delta, crit3, witness)


def verify_dualities(dc, n):
    """``h_BC^{p,q} = h_BC^{q,p} = h_A^{n-q,n-p} = h_A^{n-p,n-q}`` and related symmetries."""
    led = Ledger()
    bc, a, _ = _tables(dc)
    dbar = dcx.dolbeault(dc)
    d = dcx.conj_dolbeault(dc)
    for p in range(n + 1):
        for q in range(n + 1):
            vals = (bc[(p, q)], bc[(q, p)], a[(n - q, n - p)], a[(n - p, n - q)])
            led.add(f"BC/A duality ({p},{q})", len(set(vals)) == 1, f"values {vals}")
            led.add(f"conjugate Dolbeault ({p},{q})", d[(p, q)] == dbar[(q, p)],
                    f"{d[(p, q)]} vs {dbar[(q, p)]}")
    symmetric = all(bc.total(k) == bc.total(2 * n - k) for k in range(2 * n + 1))
    crit3 = all(bc.total(k) == a.total(k) for k in range(2 * n + 1))
    led.add("BC-number symmetry iff BC-A criterion", symmetric == crit3,
            f"symmetry {symmetric}, criterion {crit3}")
    return led, symmetric


def verify_frolicher(dc):
    led = Ledger()
    dbar = dcx.dolbeault(dc)
    b = dcx.de_rham(dc)
    for k in dc.total_degrees:
        led.add(f"Frolicher k={k}", dbar.total(k) >= b[k], f"{dbar.total(k)} >= {b[k]}")
    return led


def verify_bounds_thm21(dc, n):
    led = Ledger()
    bc, a, _ = _tables(dc)
    dbar = dcx.dolbeault(dc)
    for k in range(2 * n + 1):
        f = min(k + 1, 2 * n - k + 1)
        up = dbar.total(k) + dbar.total(k + 1)
        down = dbar.total(k) + dbar.total(k - 1)
        sa, sb = a.total(k), bc.total(k)
        led.add(f"Aeppli bound k={k}", sa <= f * up <= (n + 1) * up,
                f"{sa} <= {f}*{up} <= {n + 1}*{up}")
        led.add(f"Bott-Chern bound k={k}", sb <= f * down <= (n + 1) * down,
                f"{sb} <= {f}*{down} <= {n + 1}*{down}")
    return led


@dataclass
class InvariantReport:
    name: str
    deltas: dict
    lemma: LemmaVerdict
    ledger: Ledger = field(default_factory=Ledger)
    bc_symmetric: object = None
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.ledger.ok


def analyze_complex(dc, n=None, surface=False, unimodular=True):
    """Full report for a bounded double complex.

    ``n`` is the complex dimension when ``dc`` comes from a model; dualities
    need a unimodular model and are skipped otherwise.
    """
    lemma = ddbar_lemma(dc)
    deltas = delta_all(dc)
    led = Ledger()
    led.extend(verify_frolicher(dc))
    rep = InvariantReport(dc.name, deltas, lemma, led)
    if n is not None:
        led.extend(verify_bounds_thm21(dc, n))
        if unimodular and dc.conjugation is not None:
            dual, sym = verify_dualities(dc, n)
            led.extend(dual)
            rep.bc_symmetric = sym
        elif not unimodular:
            rep.notes.append("dualities skipped: model is not unimodular")
        if n == 2:
            rep.notes.append(f"Δ^1 = {deltas.get(1, 0)}, Δ^2 = {deltas.get(2, 0)}")
            if surface:
                led.add("surface Δ^2 in {0, 2}", deltas.get(2, 0) in (0, 2),
                        f"Δ^2 = {deltas.get(2, 0)}")
    return rep
