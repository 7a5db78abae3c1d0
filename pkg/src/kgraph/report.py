"""Assembly of the full analysis document and its human-readable rendering."""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

from kgraph import __version__, dynamics, ideals, ktheory, measures
from kgraph.ksystem import KSystem, possible_vertices, to_dict, validate

SCHEMA = 1


def dumps(doc: Any) -> str:
    """Canonical JSON text used for every emitted document."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _finite(x: float) -> float | None:
    return x if math.isfinite(x) else None


def system_digest(sys: KSystem) -> str:
    text = json.dumps(to_dict(sys), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def build_report(
    sys: KSystem,
    bounds: dynamics.Bounds = dynamics.Bounds(),
    cocycle: measures.Cocycle | None = None,
) -> dict[str, Any]:
    """Run every analysis on a valid system; the result is plain JSON data."""
    check = validate(sys, "strict")
    xp = possible_vertices(sys)
    doc: dict[str, Any] = {
        "schema": SCHEMA,
        "tool": {"name": "kgraph", "version": __version__},
        "bounds": bounds.to_dict(),
        "system": {
            "digest": system_digest(sys),
            "rank": sys.rank,
            "vertices": len(sys.vertices),
            "possible_vertices": [v for v in sys.vertices if v in xp],
            "edges_per_color": [len(sys.by_color.get(c, [])) for c in range(1, sys.rank + 1)],
            "flags": check.flags,
        },
    }

    try:
        lattice = ideals.hs_lattice(sys)
        doc["ideals"] = lattice.to_dict()
        minimal = ideals.is_minimal(sys, lattice)
    except ideals.LatticeCapExceeded as exc:
        doc["ideals"] = {"error": str(exc)}
        minimal = None

    if xp:
        eff = dynamics.effectivity(sys, bounds.pair_bound, bounds.ext_bound)
        contr = dynamics.locally_contracting(sys, bounds.deg_bound, bounds.set_bound)
        doc["effectivity"] = eff.to_dict()
        doc["contractivity"] = contr.to_dict()
        if minimal is None:
            doc["simplicity"] = {"value": dynamics.UNKNOWN, "bounds": bounds.to_dict(),
                                 "reasons": [{"code": "LATTICE_CAP", "ok": None}]}
        else:
            doc["simplicity"] = dynamics.simplicity(sys, bounds, eff, minimal).to_dict()
        doc["pure_infiniteness"] = dynamics.pure_infiniteness(sys, bounds, eff, contr).to_dict()
        doc["isotropy_warning"] = dynamics.isotropy_warning(sys)
    else:
        degenerate = [{"code": "DEGENERATE_EMPTY", "ok": False, "detail": "no possible vertices"}]
        doc["effectivity"] = None
        doc["contractivity"] = None
        doc["simplicity"] = {"value": dynamics.NO, "reasons": degenerate, "bounds": bounds.to_dict()}
        doc["pure_infiniteness"] = {"value": dynamics.UNKNOWN, "reasons": degenerate,
                                    "bounds": bounds.to_dict()}
        doc["isotropy_warning"] = []

    traces = measures.tracial_states(sys)
    doc["traces"] = traces.to_dict()
    doc["stably_finite"] = measures.stably_finite(sys, traces)
    doc["kms"] = measures.invariant_measures(sys, cocycle).to_dict() if cocycle else None
    try:
        doc["critical_c_estimates"] = [
            {k: (_finite(v) if isinstance(v, float) else v) for k, v in e.to_dict().items()}
            for e in measures.suggest_critical_c(sys)
        ]
    except ValueError as exc:
        doc["critical_c_estimates"] = {"error": str(exc)}

    try:
        doc["k_theory"] = ktheory.k_groups(sys).to_dict()
    except ktheory.KTheoryError as exc:
        doc["k_theory"] = {"error": str(exc)}
    doc["unit_fibre"] = ktheory.unit_fibre_k0(sys).to_dict()
    return doc


def undetermined(doc: dict[str, Any]) -> list[str]:
    """Names of verdicts that came out unknown / undetermined."""
    out = []
    for key in ("simplicity", "pure_infiniteness"):
        if doc.get(key) and doc[key]["value"] == dynamics.UNKNOWN:
            out.append(key)
    eff = doc.get("effectivity")
    if eff and eff["status"] == dynamics.UNDETERMINED:
        out.append("effectivity")
    return out


def _reason_line(verdict: dict[str, Any]) -> str:
    parts = []
    for r in verdict.get("reasons", []):
        s = r["code"]
        if "detail" in r and isinstance(r["detail"], str):
            s += f"={r['detail']}"
        elif "ok" in r and r["ok"] is not None:
            s += "=ok" if r["ok"] else "=fails"
        if "exhausted" in r:
            s += " (exhausted " + ", ".join(f"{k}={v}" for k, v in sorted(r["exhausted"].items())) + ")"
        parts.append(s)
    return "; ".join(parts)


def format_human(doc: dict[str, Any]) -> str:
    lines = []
    s = doc["system"]
    lines.append(f"rank {s['rank']}, {s['vertices']} vertices, "
                 f"{len(s['possible_vertices'])} possible, edges per colour {s['edges_per_color']}")
    bad = undetermined(doc)
    if bad:
        b = doc["bounds"]
        lines.append("!! UNDETERMINED: " + ", ".join(bad) + " -- bounds exhausted: "
                     + ", ".join(f"{k}={v}" for k, v in sorted(b.items())))
    ideals_doc = doc["ideals"]
    if "error" in ideals_doc:
        lines.append(f"ideals: {ideals_doc['error']}")
    else:
        lines.append(f"gauge-invariant ideals: {ideals_doc['count']}")
    if doc["effectivity"]:
        lines.append(f"effectivity: {doc['effectivity']['status']}")
        lines.append(f"locally contracting: {doc['contractivity']['status']}")
    lines.append(f"simple: {doc['simplicity']['value']}  [{_reason_line(doc['simplicity'])}]")
    lines.append(f"purely infinite: {doc['pure_infiniteness']['value']}  "
                 f"[{_reason_line(doc['pure_infiniteness'])}]")
    sf = doc["stably_finite"]
    lines.append(f"stably finite: {sf['value']}")
    tr = doc["traces"]["representative"]
    lines.append("tracial state: " + (_measure_text(tr) if tr else "none"))
    if doc["kms"] is not None:
        rep = doc["kms"]["representative"]
        lines.append(f"KMS measure at c=({', '.join(doc['kms']['c'])}): "
                     + (_measure_text(rep) if rep else "none"))
    kt = doc["k_theory"]
    if "error" in kt:
        lines.append(f"K-theory: {kt['error']}")
    else:
        lines.append(f"K0 = {kt['K0']['text']}, K1 = {kt['K1']['text']}  ({kt['method']})")
    uf = doc["unit_fibre"]
    lines.append(f"unit fibre colimit: Z^{uf['lattice_rank']}, eventual rank {uf['eventual_rank']}")
    if doc["isotropy_warning"]:
        lines.append(f"isotropy warning: {len(doc['isotropy_warning'])} loop(s) without entrance")
    return "\n".join(lines) + "\n"


def _measure_text(rep: dict[str, str]) -> str:
    return ", ".join(f"{v}: {x}" for v, x in rep.items())
