"""Machine-readable input and output: the documented JSON wire formats and a
small reader for root-datum documents (JSON always; TOML via tomllib when the
interpreter ships it, plus a minimal fallback for the flat schema used here).
"""

from __future__ import annotations

import json
from fractions import Fraction
from .errors import PreconditionFailed
from .rootdata import (RootDatum, RootTable, simply_connected_datum,
                       validate_matrix)


def frac_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, no whitespace drift."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Root datum documents


def datum_from_document(doc: dict) -> RootDatum:
    matrix = validate_matrix(doc["matrix"], tuple(doc.get("labels", [])) or None)
    if "rank_Y" not in doc:
        return simply_connected_datum(matrix)
    rank = int(doc["rank_Y"])
    coroots = tuple(tuple(int(x) for x in row) for row in doc["coroots"])
    roots = tuple(tuple(int(x) for x in row) for row in doc["roots"])
    return RootDatum(matrix, rank, coroots, roots)


def load_datum(path: str) -> RootDatum:
    text = open(path, "r", encoding="utf-8").read()
    if path.endswith(".json"):
        return datum_from_document(json.loads(text))
    if path.endswith(".toml"):
        return datum_from_document(_read_toml(text))
    raise PreconditionFailed(f"unknown document format: {path}")


def _read_toml(text: str) -> dict:
    try:
        import tomllib
        return tomllib.loads(text)
    except ModuleNotFoundError:
        return _mini_toml(text)


def _mini_toml(text: str) -> dict:
    """Reader for the flat schema ``key = scalar | [[...], ...]`` only."""
    out: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PreconditionFailed(f"cannot parse TOML line: {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key] = json.loads(val)
    return out


# ---------------------------------------------------------------------------
# Emission


def roots_json(table: RootTable) -> list:
    out = []
    for coords in table.positive:
        out.append({"root": list(coords),
                    "mult": table.mult(coords),
                    "real": bool(table.is_real(coords))})
    return out


def element_json(elem) -> list:
    ctx = elem.context
    out = []
    for k in sorted(elem.coeffs):
        mono = ctx.monomials[k]
        out.append({"monomial": {str(b): e for b, e in mono},
                    "coeff": ctx.ring.to_str(elem.coeffs[k])})
    return out


def commutator_json(table) -> list:
    out = []
    items = sorted(table.constants.items())
    for (p, q), c in items:
        gamma = [p * a + q * b for a, b in zip(table.alpha, table.beta)]
        out.append({"p": p, "q": q, "gamma": gamma, "C": c})
    return out


def laurent_matrix_json(mat) -> dict:
    entries = []
    for i in range(mat.m):
        row = []
        for j in range(mat.m):
            cell = [{"deg": d, "coeff": frac_str(c)}
                    for d, c in sorted(mat.entry(i, j).items())]
            row.append(cell)
        entries.append(row)
    out = {"m": mat.m, "entries": entries}
    if mat.window is not None:
        out["window"] = list(mat.window)
    return out


def factored_form_json(form) -> list:
    ctx = form.context
    out = []
    for bidx, lam in form.entries:
        b = ctx.basis[bidx]
        out.append({"root": list(ctx.signed_root(b.root)),
                    "basis_index": bidx,
                    "lambda": ctx.ring.to_str(lam)})
    return out


def halfspaces_json(poly) -> list:
    out = []
    for h in poly.halfspaces:
        if h.level.kind == "inf":
            k = "inf"
        else:
            k = frac_str(h.level.r) + ("+" if h.level.kind == "plus" else "")
        out.append({"alpha": list(h.alpha), "k": k,
                    "open": h.level.kind == "plus"})
    return out
