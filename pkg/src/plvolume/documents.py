"""Mesh and chain documents (JSON, rationals as "p/q" strings).

Mesh document::

    {
      "format": "plvolume-mesh",
      "version": 1,
      "ambient_dimension": 2,
      "dimension": 2,
      "vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]],
      "cells": [[0, 1, 2], [1, 2, 3]],
      "orientation": [1, -1],
      "cocycles": {"omega1": {"0": "1/2", "1": "1/2"}}
    }

``orientation`` and ``cocycles`` are optional.  Floats are rejected; integers
are accepted wherever a rational is expected.  :func:`write_mesh` produces the
canonical layout, a fixed point of ``write_mesh(parse_mesh(.))``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .equalizer import Certificate, ChainStep, TransferChain, verify_chain
from .exceptions import ParseError, PLVolumeError, ValidationError
from .forms import PCForm, pc_from_cocycle
from .simplicial import BaryPoint, Complex, build_complex, is_coherent, orient
from .transfer import TransferMap

__all__ = [
    "MESH_FORMAT", "CHAIN_FORMAT", "FORMAT_VERSION", "MeshDocument", "ChainDocument",
    "parse_rational", "format_rational", "parse_mesh", "write_mesh", "read_mesh",
    "mesh_to_dict", "chain_to_dict", "write_chain", "parse_chain",
]

MESH_FORMAT = "plvolume-mesh"
CHAIN_FORMAT = "plvolume-chain"
FORMAT_VERSION = 1

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


@dataclass
class MeshDocument:
    complex: Complex
    forms: dict[str, PCForm] = field(default_factory=dict)

    def __getitem__(self, name: str) -> PCForm:
        try:
            return self.forms[name]
        except KeyError:
            raise ValidationError(f"no cocycle named {name!r} in the mesh") from None


@dataclass
class ChainDocument:
    chain: TransferChain
    omega1: PCForm
    omega2: PCForm
    certificate: Certificate


def _where(text: str | None, needle: str) -> tuple[int | None, int | None]:
    if not text:
        return None, None
    idx = text.find(needle)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def parse_rational(value: Any, text: str | None = None) -> Fraction:
    """Exact rational from an int or a "p/q" / "p" string."""
    if isinstance(value, bool):
        raise ParseError(f"expected a rational, got {value!r}", *_where(text, json.dumps(value)))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL.match(value)
        if m:
            num, den = int(m.group(1)), int(m.group(2) or 1)
            if den != 0:
                return Fraction(num, den)
            raise ParseError(f"zero denominator in {value!r}", *_where(text, json.dumps(value)))
    raise ParseError(f"expected a rational \"p/q\" string, got {value!r}", *_where(text, json.dumps(value)))


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _load_json(text: str) -> Any:
    def reject_float(token: str):
        raise ParseError(f"floats are not allowed in documents (found {token}); use \"p/q\" strings",
                         *_where(text, token))

    try:
        return json.loads(text, parse_float=reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _require(obj: Mapping, key: str, kind: type, text: str | None):
    if key not in obj:
        raise ParseError(f"missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise ParseError(f"field {key!r} has the wrong type", *_where(text, f'"{key}"'))
    return val


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer, got {value!r}")
    return value


def _complex_from_dict(obj: Mapping, text: str | None, orient_if_missing: bool, check_intersections: bool) -> Complex:
    fmt = obj.get("format")
    if fmt != MESH_FORMAT:
        raise ParseError(f"expected format {MESH_FORMAT!r}, got {fmt!r}", *_where(text, '"format"'))
    if obj.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported version {obj.get('version')!r}", *_where(text, '"version"'))
    ambient = _int(_require(obj, "ambient_dimension", int, text), "ambient_dimension")
    dim = _int(_require(obj, "dimension", int, text), "dimension")
    raw_vertices = _require(obj, "vertices", list, text)
    raw_cells = _require(obj, "cells", list, text)
    vertices = []
    for row in raw_vertices:
        if not isinstance(row, list):
            raise ParseError("each vertex must be a list of rationals")
        vertices.append(tuple(parse_rational(x, text) for x in row))
    cells = []
    for row in raw_cells:
        if not isinstance(row, list):
            raise ParseError("each cell must be a list of vertex ids")
        cells.append([_int(x, "vertex id") for x in row])
    if any(len(v) != ambient for v in vertices):
        raise ValidationError(f"every vertex needs {ambient} coordinates")
    if any(len(c) != dim + 1 for c in cells):
        raise ValidationError(f"every cell needs {dim + 1} vertices")
    try:
        K = build_complex(vertices, cells, check_intersections=check_intersections)
    except PLVolumeError as exc:
        raise ValidationError(str(exc), exc) from exc
    signs = obj.get("orientation")
    if signs is not None:
        if not isinstance(signs, list) or len(signs) != K.n_cells or any(s not in (1, -1) for s in signs):
            raise ValidationError("orientation must list +1/-1 for every cell")
        K = K.with_orientation(signs)
        if not is_coherent(K):
            raise ValidationError("the given orientation is not coherent")
    elif orient_if_missing:
        try:
            K = orient(K)
        except PLVolumeError as exc:
            raise ValidationError(str(exc), exc) from exc
    return K


def _cocycle_values(K: Complex, raw: Any, name: str, text: str | None) -> dict[int, Fraction]:
    if isinstance(raw, list):
        items = list(enumerate(raw))
    elif isinstance(raw, dict):
        items = []
        for k, x in raw.items():
            if not re.fullmatch(r"\d+", str(k)):
                raise ParseError(f"cocycle {name!r}: cell key {k!r} is not a cell id", *_where(text, f'"{k}"'))
            items.append((int(k), x))
    else:
        raise ParseError(f"cocycle {name!r} must be an object or a list")
    vals = {}
    for cid, x in items:
        if not 0 <= cid < K.n_cells:
            raise ValidationError(f"cocycle {name!r} references missing cell {cid}")
        vals[cid] = parse_rational(x, text)
    missing = sorted(set(range(K.n_cells)) - set(vals))
    if missing:
        raise ValidationError(f"cocycle {name!r} has no value for cells {missing}")
    return vals


def _forms_from(K: Complex, raw: Any, text: str | None) -> dict[str, PCForm]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ParseError("cocycles must be an object mapping names to cocycles")
    forms = {}
    for name, values in raw.items():
        vals = _cocycle_values(K, values, name, text)
        try:
            forms[name] = pc_from_cocycle(K, vals)
        except PLVolumeError as exc:
            raise ValidationError(f"cocycle {name!r}: {exc}", exc) from exc
    return forms


def parse_mesh(text: str, orient_if_missing: bool = True, check_intersections: bool = True) -> MeshDocument:
    """Parse and validate a mesh document.

    Without an ``orientation`` field the complex is oriented here (when
    ``orient_if_missing``); a non-orientable complex then fails validation.
    """
    obj = _load_json(text)
    if not isinstance(obj, dict):
        raise ParseError("a mesh document is a JSON object", 1, 1)
    K = _complex_from_dict(obj, text, orient_if_missing, check_intersections)
    if obj.get("cocycles") and not K.oriented:
        raise ValidationError("cocycles need an oriented complex")
    return MeshDocument(K, _forms_from(K, obj.get("cocycles"), text))


def read_mesh(path, **kw) -> MeshDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_mesh(fh.read(), **kw)


def _cocycle_dict(values) -> dict[str, str]:
    return {str(i): format_rational(x) for i, x in enumerate(values)}


def mesh_to_dict(K: Complex, forms: Mapping[str, PCForm | Any] | None = None) -> dict:
    out: dict[str, Any] = {
        "format": MESH_FORMAT,
        "version": FORMAT_VERSION,
        "ambient_dimension": K.ambient_dim,
        "dimension": K.dim,
        "vertices": [[format_rational(x) for x in v] for v in K.vertices],
        "cells": [list(c.vertex_ids) for c in K.cells],
    }
    if K.oriented:
        out["orientation"] = [c.orientation for c in K.cells]
    if forms:
        out["cocycles"] = {
            name: _cocycle_dict(f.values if isinstance(f, PCForm) else f)
            for name, f in sorted(forms.items())
        }
    return out


def _dump(obj: Any, indent: int = 0) -> str:
    """Canonical layout: objects open one key per line, scalar lists stay inline."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if all(not isinstance(v, (dict, list)) for v in obj.values()):
            return json.dumps(obj, ensure_ascii=False)
        inner = ",\n".join(f'{pad}  {json.dumps(k)}: {_dump(v, indent + 1)}' for k, v in obj.items())
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return json.dumps(obj, ensure_ascii=False)
        inner = ",\n".join(f"{pad}  {_dump(v, indent + 1)}" for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def write_mesh(doc: MeshDocument | Complex, forms: Mapping[str, PCForm] | None = None) -> str:
    if isinstance(doc, MeshDocument):
        K, forms = doc.complex, doc.forms if forms is None else forms
    else:
        K = doc
    return _dump(mesh_to_dict(K, forms)) + "\n"


# -- chains -----------------------------------------------------------------

def _bary_dict(p: BaryPoint) -> dict:
    return {"cell": p.cell_id, "weights": [format_rational(x) for x in p.weights]}


def _bary_from(raw: Any, text: str | None) -> BaryPoint:
    if not isinstance(raw, dict) or "cell" not in raw or "weights" not in raw:
        raise ParseError("a point is {\"cell\": id, \"weights\": [...]}")
    try:
        return BaryPoint(_int(raw["cell"], "cell"), tuple(parse_rational(x, text) for x in raw["weights"]))
    except PLVolumeError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ValidationError(str(exc), exc) from exc


def _certificate_dict(cert: Certificate) -> dict:
    return {
        "passed": cert.passed,
        "exact": cert.exact,
        "iterations": cert.iterations,
        "bound": cert.bound,
        "records": [
            {"source": r.source, "target": r.target, "path": list(r.path), "amount": format_rational(r.amount)}
            for r in cert.records
        ],
        "final_diff": [format_rational(x) for x in cert.final_diff],
        "failures": list(cert.failures),
    }


def chain_to_dict(chain: TransferChain, omega1: PCForm, omega2: PCForm, cert: Certificate) -> dict:
    steps = []
    for st in chain.steps:
        tr = st.transfer
        steps.append({
            "iteration": st.iteration,
            "sigma": tr.sigma,
            "tau": tr.tau,
            "amount": format_rational(tr.amount),
            "theta": list(tr.theta),
            "v": _bary_dict(tr.v),
            "w": _bary_dict(tr.w),
            "u_sigma": _bary_dict(tr.u_sigma),
            "u_tau": _bary_dict(tr.u_tau),
            "before": [format_rational(x) for x in st.before],
            "after": [format_rational(x) for x in st.after],
        })
    return {
        "format": CHAIN_FORMAT,
        "version": FORMAT_VERSION,
        "mesh": mesh_to_dict(chain.complex),
        "omega_to": [format_rational(x) for x in omega1.values],
        "omega_from": [format_rational(x) for x in omega2.values],
        "final": [format_rational(x) for x in chain.final.values],
        "steps": steps,
        "certificate": _certificate_dict(cert),
    }


def write_chain(chain: TransferChain, omega1: PCForm, omega2: PCForm, cert: Certificate) -> str:
    return _dump(chain_to_dict(chain, omega1, omega2, cert)) + "\n"


def _rationals(raw: Any, what: str, text: str | None) -> tuple[Fraction, ...]:
    if not isinstance(raw, list):
        raise ParseError(f"{what} must be a list of rationals")
    return tuple(parse_rational(x, text) for x in raw)


def parse_chain(text: str) -> ChainDocument:
    """Load a chain document and re-verify it from scratch.

    Nothing is re-solved: the stored points rebuild each transfer map, and the
    returned certificate is recomputed, not read back.  Recorded cocycles that
    are not valid forms are kept so the verifier can report the bad step.
    """
    obj = _load_json(text)
    if not isinstance(obj, dict) or obj.get("format") != CHAIN_FORMAT:
        raise ParseError(f"expected format {CHAIN_FORMAT!r}", 1, 1)
    if obj.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported version {obj.get('version')!r}")
    mesh = obj.get("mesh")
    if not isinstance(mesh, dict):
        raise ParseError("missing embedded mesh")
    K = _complex_from_dict(mesh, text, True, False)
    try:
        omega1 = pc_from_cocycle(K, _rationals(obj.get("omega_to"), "omega_to", text))
        omega2 = pc_from_cocycle(K, _rationals(obj.get("omega_from"), "omega_from", text))
    except PLVolumeError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ValidationError(str(exc), exc) from exc
    steps = []
    raw_steps = obj.get("steps")
    if not isinstance(raw_steps, list):
        raise ParseError("steps must be a list")
    for i, raw in enumerate(raw_steps):
        if not isinstance(raw, dict):
            raise ParseError(f"step {i} must be an object")
        try:
            before = _rationals(raw["before"], "before", text)
            after = _rationals(raw["after"], "after", text)
            sigma, tau = _int(raw["sigma"], "sigma"), _int(raw["tau"], "tau")
            if not (0 <= sigma < K.n_cells and 0 <= tau < K.n_cells) or len(before) != K.n_cells:
                raise ValidationError(f"step {i}: cell ids or cocycle length out of range")
            tr = TransferMap(
                K, sigma, tau, parse_rational(raw["amount"], text),
                tuple(_int(x, "theta vertex") for x in raw["theta"]),
                _bary_from(raw["v"], text), _bary_from(raw["w"], text),
                _bary_from(raw["u_sigma"], text), _bary_from(raw["u_tau"], text),
                (before[sigma], before[tau]),
            )
        except KeyError as exc:
            raise ParseError(f"step {i}: missing field {exc.args[0]!r}") from None
        except (ParseError, ValidationError):
            raise
        except PLVolumeError as exc:
            raise ValidationError(f"step {i}: {exc}", exc) from exc
        steps.append(ChainStep(_int(raw.get("iteration"), "iteration"), tr, before, after))
    final_vals = _rationals(obj.get("final", []), "final", text)
    final = PCForm(K, final_vals) if len(final_vals) == K.n_cells else PCForm(K, steps[-1].after if steps else omega2.values)
    chain = TransferChain(K, omega2, final, tuple(steps))
    return ChainDocument(chain, omega1, omega2, verify_chain(chain, omega1, omega2))
