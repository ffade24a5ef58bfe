"""JSON and plain-text rendering of results.

Rationals are always written as ``"num/den"`` strings in lowest terms, never
as floats, and JSON is dumped with sorted keys so identical inputs give
byte-identical output.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .exact import Polynomial, RationalFunction
from .linearized import BellPolynomial, LinearizedRow
from .poincare import ConstantsTrace, Residual, SchroderPair
from .ritt import DetectionReport, RittEquationSigma, RittEquationTau
from .series import TruncatedSeries

SCHEMA_VERSION = "1"


def q(value) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def poly_json(p: Polynomial) -> list[str]:
    return [q(c) for c in p.coeffs]


def ratfun_json(F: RationalFunction, var: str = "x") -> dict:
    return {"num": poly_json(F.num), "den": poly_json(F.den), "text": F.to_str(var)}


def series_json(s: TruncatedSeries) -> dict:
    return {"valuation": s.valuation, "order": s.order, "coeffs": [q(c) for c in s.coeffs]}


def residual_json(r: Residual) -> dict:
    out = {"name": r.name, "order": r.order, "first_nonzero": r.first_nonzero, "zero": r.ok}
    if r.note:
        out["note"] = r.note
    return out


def equation_json(eq: RittEquationTau | RittEquationSigma | None) -> dict | None:
    if eq is None:
        return None
    return {"r": eq.r, "j": eq.j, "A": ratfun_json(eq.A)}


def pair_json(pair: SchroderPair) -> dict:
    m = pair.map
    return {
        "q": q(m.q),
        "abs_q_gt_1": m.expanding,
        "degree_info": list(m.degree_info),
        "is_homography": m.is_homography,
        "order": pair.order,
        "sigma": series_json(pair.sigma),
        "tau": series_json(pair.tau),
        "residuals": [residual_json(r) for r in pair.residuals],
    }


def detection_json(rep: DetectionReport) -> dict:
    b = rep.bounds
    return {
        "outcome": rep.outcome,
        "bounds": {"r_max": b.r_max, "j_max": b.j_max, "deg_max": b.deg_max,
                   "order": b.order, "margin": b.margin},
        "grid_points": rep.grid_points,
        "equation_tau": equation_json(rep.equation_tau),
        "equation_sigma": equation_json(rep.equation_sigma),
        "closed_form_sigma": ratfun_json(rep.closed_form, "t") if rep.closed_form else None,
        "residual_orders_checked": list(rep.residual_orders_checked),
        "residuals": [residual_json(r) for r in rep.residuals],
        "conditional_statement": rep.conditional_statement,
    }


def bell_json(b: BellPolynomial) -> dict:
    return {
        "n": b.n,
        "k": b.k,
        "monomials": [{"exponents": list(e), "coeff": c}
                      for e, c in sorted(b.terms.items(), reverse=True)],
        "text": str(b),
    }


def row_json(row: LinearizedRow) -> dict:
    return {
        "n": row.n,
        "diagonal": ratfun_json(row.diagonal),
        "lower": [ratfun_json(A) for A in row.lower],
    }


def constants_json(trace: ConstantsTrace) -> dict:
    return {
        "q": q(trace.q),
        "factors": [{"n": n, "factor": q(f)} for n, f in trace.factors],
        "all_nonzero": all(f != 0 for _, f in trace.factors),
        "solution": series_json(trace.solution),
        "solution_is_zero": trace.solution.is_zero(),
    }


def envelope(command: str, inputs: dict, outputs: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "inputs": inputs,
            "outputs": outputs}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


# -- plain text --------------------------------------------------------------


def _series_text(label: str, s: dict) -> list[str]:
    lines = [f"{label}: valuation {s['valuation']}, order {s['order']}"]
    for i, c in enumerate(s["coeffs"]):
        lines.append(f"  [{s['valuation'] + i}] {c}")
    return lines


def _ratfun_text(F: dict) -> str:
    return f"{F['text']}   num={F['num']} den={F['den']}"


def render_text(doc: dict) -> str:
    """Human-readable rendering carrying the same exact numbers as the JSON."""
    out = doc["outputs"]
    cmd = doc["command"]
    lines = [f"{cmd} (schema {doc['schema_version']})"]
    for k in sorted(doc["inputs"]):
        lines.append(f"input {k}: {doc['inputs'][k]}")
    if cmd == "solve":
        lines.append(f"q = {out['q']}  |q|>1: {out['abs_q_gt_1']}  homography: {out['is_homography']}")
        if out.get("closed_form_sigma"):
            lines.append("closed form sigma(t) = " + _ratfun_text(out["closed_form_sigma"]))
        lines += _series_text("sigma", out["sigma"])
        lines += _series_text("tau", out["tau"])
        lines += [_residual_text(r) for r in out["residuals"]]
    elif cmd == "detect":
        lines.append(f"outcome: {out['outcome']}")
        b = out["bounds"]
        lines.append("bounds: " + ", ".join(f"{k}={b[k]}" for k in sorted(b)))
        lines.append(f"grid points examined: {out['grid_points']}")
        for side in ("equation_tau", "equation_sigma"):
            eq = out[side]
            if eq:
                lines.append(f"{side}: r={eq['r']} j={eq['j']} A = {_ratfun_text(eq['A'])}")
        if out["closed_form_sigma"]:
            lines.append("closed form sigma(t) = " + _ratfun_text(out["closed_form_sigma"]))
        lines.append(f"residual orders checked: {out['residual_orders_checked']}")
        lines += [_residual_text(r) for r in out["residuals"]]
        lines.append(out["conditional_statement"])
    elif cmd == "verify":
        eq = out["equation"]
        lines.append(f"{out['side']}-side: r={eq['r']} j={eq['j']} A = {_ratfun_text(eq['A'])}")
        lines.append(_residual_text(out["residual"]))
    elif cmd == "bell":
        lines.append(f"B_{{{out['n']},{out['k']}}} = {out['text']}")
        for m in out["monomials"]:
            lines.append(f"  {m['coeff']} * x^{m['exponents']}")
    elif cmd == "linearize":
        lines.append(f"row n={out['n']}")
        lines.append("diagonal: " + _ratfun_text(out["diagonal"]))
        for k, A in enumerate(out["lower"], start=1):
            lines.append(f"A_{{{out['n']},{k}}}: " + _ratfun_text(A))
        for r in out.get("verify", []):
            lines.append(_residual_text(r))
    elif cmd == "constants-check":
        lines.append(f"q = {out['q']}")
        for f in out["factors"]:
            lines.append(f"  n={f['n']} factor q^n-1 = {f['factor']}")
        lines.append(f"all factors nonzero: {out['all_nonzero']}")
        lines.append(f"solution of f(R(x)) = f(x), f(0)=0 is zero to order "
                     f"{out['solution']['order']}: {out['solution_is_zero']}")
    return "\n".join(lines) + "\n"


def _residual_text(r: dict) -> str:
    state = "zero" if r["zero"] else f"NONZERO at x^{r['first_nonzero']}"
    note = f" ({r['note']})" if r.get("note") else ""
    return f"residual {r['name']}: {state} to order {r['order']}{note}"
