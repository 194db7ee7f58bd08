"""JSON / text round-tripping for field, ring, element, and matrix data.

Configurations pin the coefficient field by (p, f, modulus) so results are
reproducible across runs; a "kind" key selects one of the two length-two
rings on top of that field.  Elements travel as compact text, matrices as
JSON arrays of those texts.
"""

from __future__ import annotations

import json

from .errors import UsageError
from .fields import FieldElement, FiniteField
from .matrices import Matrix
from .rings import KINDS, LocalRing, RingElement

__all__ = [
    "config_dict",
    "config_json",
    "parse_config",
    "element_to_text",
    "element_from_text",
    "matrix_to_json",
    "matrix_from_json",
    "matrix_to_obj",
    "matrix_from_obj",
]


def config_dict(scalars) -> dict:
    """Describe a FiniteField or LocalRing as a plain JSON-ready dict."""
    if isinstance(scalars, LocalRing):
        F = scalars.field
        return {"p": F.p, "f": F.f, "modulus": list(F.modulus), "kind": scalars.kind}
    if isinstance(scalars, FiniteField):
        return {"p": scalars.p, "f": scalars.f, "modulus": list(scalars.modulus)}
    raise UsageError(f"cannot describe {type(scalars).__name__} as a config")


def config_json(scalars) -> str:
    return json.dumps(config_dict(scalars), sort_keys=True)


def parse_config(data):
    """Rebuild the interned FiniteField or LocalRing named by a config.

    Accepts a dict or a JSON string.  A present non-null "kind" yields a
    LocalRing; otherwise the bare field is returned.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    try:
        p = int(data["p"])
        f = int(data["f"])
    except (KeyError, TypeError, ValueError):
        raise UsageError('config needs integer "p" and "f"') from None
    modulus = data.get("modulus")
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    field = FiniteField.get(p, f, modulus)
    kind = data.get("kind")
    if kind is None:
        return field
    if kind not in KINDS:
        raise UsageError(f"unknown ring kind {kind!r}; expected one of {KINDS}")
    return LocalRing.get(field, kind)


# -- elements ---------------------------------------------------------------
#
# FieldElement: comma-separated coefficient list, constant term first.
# RingElement:  "a0;a1" with each component in the field form.


def _field_text(e: FieldElement) -> str:
    return ",".join(str(c) for c in e.coeffs)


def element_to_text(e) -> str:
    if isinstance(e, RingElement):
        c0, c1 = e.components()
        return _field_text(c0) + ";" + _field_text(c1)
    if isinstance(e, FieldElement):
        return _field_text(e)
    raise UsageError(f"cannot serialize {type(e).__name__}")


def _field_from_text(field: FiniteField, text: str) -> FieldElement:
    try:
        coeffs = [int(c) for c in text.split(",")]
    except ValueError:
        raise UsageError(f"bad coefficient list {text!r}") from None
    return field.elem(coeffs)


def element_from_text(scalars, text: str):
    """Parse element text against a FiniteField or LocalRing."""
    text = text.strip()
    if isinstance(scalars, LocalRing):
        parts = text.split(";")
        if len(parts) == 1:
            # residue shorthand: missing second component means zero
            parts = [parts[0], "0"]
        if len(parts) != 2:
            raise UsageError(f"ring element text needs one ';' separator: {text!r}")
        F = scalars.field
        return scalars.elem(_field_from_text(F, parts[0]), _field_from_text(F, parts[1]))
    if isinstance(scalars, FiniteField):
        if ";" in text:
            raise UsageError(f"field element text cannot contain ';': {text!r}")
        return _field_from_text(scalars, text)
    raise UsageError(f"cannot parse elements of {type(scalars).__name__}")


# -- matrices ---------------------------------------------------------------
#
# Entry texts contain both ',' and ';', so matrices use JSON arrays rather
# than another delimiter layer.


def matrix_to_obj(m: Matrix) -> dict:
    return {
        "n": m.n,
        "entries": [[element_to_text(e) for e in row] for row in m.rows],
    }


def matrix_from_obj(scalars, data) -> Matrix:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise UsageError(f"matrix is not valid JSON: {exc}") from None
    if isinstance(data, dict):
        entries = data.get("entries")
        if entries is None:
            raise UsageError('matrix object needs an "entries" array')
    else:
        entries = data
    if not isinstance(entries, list) or not entries:
        raise UsageError("matrix entries must be a non-empty array of rows")
    n = len(entries)
    rows = []
    for row in entries:
        if not isinstance(row, list) or len(row) != n:
            raise UsageError(f"matrix rows must all have length {n}")
        rows.append([element_from_text(scalars, str(e)) for e in row])
    m = Matrix(scalars, rows)
    if isinstance(data, dict) and "n" in data and int(data["n"]) != n:
        raise UsageError(f'matrix "n" = {data["n"]} does not match {n} rows')
    return m


def matrix_to_json(m: Matrix) -> str:
    return json.dumps(matrix_to_obj(m))


def matrix_from_json(scalars, text: str) -> Matrix:
    return matrix_from_obj(scalars, text)
