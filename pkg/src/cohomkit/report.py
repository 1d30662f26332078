"""Run every applicable check on a model file and collect a deterministic report."""

import json

from . import double_complex as dcx
from . import hodge
from . import symplectic as sym
from .errors import TheoremViolation, UsageError
from .invariants import analyze_complex
from .ledger import Ledger
from .lie_model import bigrade, compatible_triple, symplectic_operators
from .linalg import kernel


def _s(x):
    return str(x)


def _vec(v):
    return [_s(x) for x in v]


def _bigraded(table):
    return {f"{p},{q}": v for (p, q), v in sorted(table.dims.items())}


def _graded(table, n):
    return [table[k] for k in range(n + 1)]


class Report:
    def __init__(self, mf):
        self.model = mf
        self.data = {"model": mf.name, "dimension": mf.model.n,
                     "flags": {k: mf.flags[k] for k in sorted(mf.flags)}}
        self.ledger = Ledger()
        self.verdicts = []

    @property
    def ok(self):
        return self.ledger.ok

    def failures(self):
        return self.ledger.failures()

    def to_json(self):
        out = dict(self.data)
        out["verdicts"] = list(self.verdicts)
        out["ledger"] = [{"check": e.name, "ok": e.ok, "detail": e.detail} for e in self.ledger]
        out["ok"] = self.ok
        return json.dumps(out, indent=2, ensure_ascii=False, sort_keys=False) + "\n"

    def to_text(self):
        lines = [f"model {self.model.name} (dimension {self.model.model.n})"]
        cx = self.data.get("complex")
        if cx:
            h = self.model.model.n // 2
            for key, title in (("dolbeault", "Dolbeault h^{p,q}"), ("bott_chern", "Bott-Chern h^{p,q}"),
                               ("aeppli", "Aeppli h^{p,q}")):
                lines.append(f"{title}:")
                lines.extend(render_diamond(cx[key], h))
            lines.append("Betti: " + " ".join(map(str, cx["betti"])))
            lines.append("Δ^k: " + " ".join(str(cx["delta"][str(k)]) for k in range(2 * h + 1)))
        sp = self.data.get("symplectic")
        if sp:
            lines.append("symplectic (k = 0..%d):" % self.model.model.n)
            for key in ("dR", "dLambda", "d_plus_dLambda", "ddLambda"):
                lines.append(f"  h^k_{key:<15}" + " ".join(f"{v:>3}" for v in sp["tables"][key]))
            lines.append("  Δ̃^k             " + " ".join(f"{v:>3}" for v in sp["delta_tilde"]))
        failed = self.failures()
        lines.append(f"checks: {len(self.ledger) - len(failed)}/{len(self.ledger)} passed")
        for e in failed:
            lines.append(f"  FAILED {e.name}: {e.detail}")
        lines.extend(self.verdicts)
        return "\n".join(lines) + "\n"


def render_diamond(dims, h):
    """``h^{p,q}`` on rows of constant ``p+q``, top degree first."""
    rows = []
    width = 4
    for k in range(2 * h, -1, -1):
        entries = [dims.get(f"{p},{k - p}", 0) for p in range(min(k, h), max(0, k - h) - 1, -1)]
        pad = " " * (width // 2 * (h + 1 - len(entries)))
        rows.append("  " + pad + "".join(f"{v:^{width}}" for v in entries))
    return rows


def _bool(b):
    return "true" if b else "false"


def _fmt_tuple(vals):
    return "(" + ",".join(str(v) for v in vals) + ")"


def analyze_complex_part(rep, mf, seed):
    m = mf.model
    h = m.n // 2
    dc = bigrade(m, mf.J)
    v = dcx.validate(dc)
    if not v:
        raise TheoremViolation(f"{m.name}: bigraded complex fails validation: {v.message} at "
                               f"{v.location}")
    unimodular = m.is_unimodular()
    inv = analyze_complex(dc, h, surface=bool(mf.flags.get("surface")), unimodular=unimodular)
    rep.ledger.extend(inv.ledger)
    tables = {"dolbeault": dcx.dolbeault(dc), "conj_dolbeault": dcx.conj_dolbeault(dc),
              "bott_chern": dcx.bott_chern(dc), "aeppli": dcx.aeppli(dc)}
    b = dcx.de_rham(dc)
    chi_b = sum((-1) ** k * b[k] for k in range(m.n + 1))
    chi_s = sum((-1) ** (p + q) * dc.dim(p, q) for (p, q) in dc.bidegrees)
    rep.ledger.add("Euler characteristic", chi_b == chi_s, f"{chi_b} vs {chi_s}")
    rep.ledger.add("Betti numbers match the real complex", tuple(b[k] for k in range(m.n + 1))
                   == m.betti, "")
    lem = inv.lemma
    cx = {key: _bigraded(t) for key, t in tables.items()}
    cx["betti"] = [b[k] for k in range(m.n + 1)]
    cx["delta"] = {str(k): v for k, v in sorted(inv.deltas.items())}
    cx["ddbar_lemma"] = {"injectivity": lem.injective, "delta": lem.delta,
                         "bc_minus_a": lem.bc_minus_a}
    if lem.witness is not None:
        pq, vec = lem.witness
        cx["bc_to_a_kernel_witness"] = {"bidegree": list(pq), "vector": _vec(vec),
                                        "basis": [list(x) for x in dc.space(*pq).labels]}
    cx["notes"] = list(inv.notes)
    cx["unimodular"] = unimodular
    # Hodge theory
    ips = [("orthonormal", hodge.InnerProductStructure(
               hodge.hermitianize(_identity(m.n), mf.J.J), dc.frame))]
    for s in (seed, seed + 1):
        ips.append((f"random seed {s}", hodge.InnerProductStructure.random(m.n, s, dc.frame)))
    for label, ip in ips:
        for r in hodge.complex_laplacians(dc, ip):
            rep.ledger.add(f"ker Δ_{r.flavor} = h_{r.flavor} ({label})", r.ok,
                           str(r.mismatches()) if not r.ok else "")
    ip0 = ips[0][1]
    selfadj = all(hodge.is_self_adjoint(hodge.laplacian_bc_operator(dc, ip0, *pq), ip0)
                  and hodge.is_self_adjoint(hodge.laplacian_a_operator(dc, ip0, *pq), ip0)
                  for pq in dc.bidegrees)
    rep.ledger.add("Δ_BC and Δ_A self-adjoint", selfadj)
    herm = hodge.InnerProductStructure(
        hodge.hermitianize(hodge.random_gram(m.n, __import__("random").Random(seed + 7)),
                           mf.J.J), dc.frame)
    signs = {}
    for pq in dc.bidegrees:
        chk = hodge.antilinear_star_check(dc, herm, *pq)
        rep.ledger.add(f"antilinear star BC->A harmonic {pq}", chk.ok)
        if chk.square is not None:
            signs[f"{pq[0]},{pq[1]}"] = 1 if chk.square.re > 0 else -1
    cx["antilinear_star_square_sign"] = signs
    rep.data["complex"] = cx
    rep.verdicts.append(f"∂∂̄-lemma: {_bool(lem.delta)}, Δ = "
                        + _fmt_tuple(inv.deltas[k] for k in range(m.n + 1)))
    return dc, inv


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def analyze_symplectic_part(rep, mf, seed, window=1):
    m = mf.model
    n = m.n
    w = mf.symplectic_form()
    sc = symplectic_operators(m, w)
    tabs = {f: sym.table(sc, f) for f in sym.SYMPLECTIC_FLAVORS}
    dt = sym.delta_tilde_all(sc)
    hlc = sym.hlc_check(sc)
    inj_surj = [sym.bc_to_de_rham(sc, k) for k in range(n + 1)]
    all_inj = all(x[1] for x in inj_surj)
    all_surj = all(x[2] for x in inj_surj)
    zero_dt = all(v == 0 for v in dt)
    rep.ledger.add("HLC iff Δ̃ = 0 iff injective iff surjective",
                   hlc.ok == zero_dt == all_inj == all_surj,
                   f"HLC {hlc.ok}, Δ̃=0 {zero_dt}, inj {all_inj}, surj {all_surj}")
    rep.ledger.add("Δ̃^1 = 0", n < 1 or dt[1] == 0, f"Δ̃^1 = {dt[1] if n >= 1 else 0}")
    rep.ledger.add("closed 1-forms are d^Lambda-closed", sym.closed_one_forms_are_dl_closed(sc))
    b = tabs["dR"]
    rep.ledger.add("h_dLambda^k = b_(n-k)",
                   all(tabs["dLambda"][k] == b[n - k] for k in range(n + 1)))
    rep.ledger.add("h_d+dLambda = h_ddLambda",
                   all(tabs["d_plus_dLambda"][k] == tabs["ddLambda"][k] for k in range(n + 1)))
    triple = compatible_triple(w, mf.J)
    ip_c = hodge.InnerProductStructure(triple.coframe_gram())
    rep.ledger.extend(sym.verify_tseng_yau_square(sc, ip_c))
    rep.ledger.extend(sym.verify_bounds_thm62(sc))
    rep.ledger.extend(sym.verify_dim4_bounds(sc))
    for label, ip in [("compatible metric", ip_c)] + [
            (f"random seed {s}", hodge.InnerProductStructure.random(n, s)) for s in (seed, seed + 1)]:
        for r in hodge.symplectic_laplacians(sc, ip):
            rep.ledger.add(f"ker Δ_{r.flavor} = h_{r.flavor} ({label})", r.ok,
                           str(r.mismatches()) if not r.ok else "")
    preds = None
    if n == 4:
        b2_h = kernel(hodge.symplectic_laplacian_operator(sc, ip_c, "dR", 2)).dim
        h2_h = hodge.harmonic_space(sc, ip_c, "d_plus_dLambda", 2).dim
        preds = {"hlc_maps": hlc.ok, "delta_tilde_2_zero": dt[2] == 0,
                 "b2_equals_h2_harmonic": b2_h == h2_h}
        rep.ledger.add("dim 4: HLC iff Δ̃^2 = 0 iff b2 = h2",
                       len(set(preds.values())) == 1, str(preds))
    if window < 1:
        raise UsageError("--window must be at least 1")
    strip = sym.strip_complex(sc, (-window, window))
    v = dcx.validate(strip.complex)
    rep.ledger.add("strip complex is a double complex", v.ok, v.message)
    bc_list = _graded(tabs["d_plus_dLambda"], n)
    a_list = _graded(tabs["ddLambda"], n)
    for q0 in strip.interior_rows():
        rep.ledger.add(f"strip BC row q={q0}", strip.bc_row(q0) == bc_list,
                       f"{strip.bc_row(q0)} vs {bc_list}")
        rep.ledger.add(f"strip A row q={q0}", strip.aeppli_row(q0) == a_list,
                       f"{strip.aeppli_row(q0)} vs {a_list}")
    sp = {"omega": _s(w.omega), "compatible_J": [[_s(x) for x in r] for r in triple.J.J],
          "tables": {f: _graded(t, n) for f, t in tabs.items()},
          "delta_tilde": list(dt),
          "hlc": {"ok": hlc.ok,
                  "maps": [{"k": mp.k, "source_dim": mp.domain.dim, "rank": mp.rank,
                            "target_dim": mp.codomain.dim,
                            "kernel_witnesses": [_vec(x) for x in mp.kernel_witnesses()]}
                           for mp in hlc.maps]},
          "bc_to_dR": [{"k": k, "rank": r, "injective": i, "surjective": s}
                       for k, (r, i, s) in enumerate(inj_surj)]}
    if preds is not None:
        sp["dim4_predicates"] = preds
    rep.data["symplectic"] = sp
    rep.verdicts.append(f"HLC: {_bool(hlc.ok)}, Δ̃ = {_fmt_tuple(dt)}")
    if n >= 2:
        rep.verdicts.append(f"Δ̃² = {dt[2]}, HLC: {_bool(hlc.ok)}")
    return sc


def analyze(mf, want_complex=None, want_symplectic=None, window=1, seed=0):
    """Report for ``mf``; ``None`` means "whenever the structure is present"."""
    if want_complex and mf.J is None:
        raise UsageError(f"{mf.name}: --complex needs a J block in the model file")
    if want_symplectic and mf.omega is None:
        raise UsageError(f"{mf.name}: --symplectic needs an omega block in the model file")
    if want_complex is None and want_symplectic is None:
        want_complex = mf.J is not None and mf.model.n % 2 == 0
        want_symplectic = mf.omega is not None
    rep = Report(mf)
    rep.data["betti"] = list(mf.model.betti)
    rep.data["unimodular"] = mf.model.is_unimodular()
    if want_complex:
        analyze_complex_part(rep, mf, seed)
    if want_symplectic:
        analyze_symplectic_part(rep, mf, seed, window)
    return rep
