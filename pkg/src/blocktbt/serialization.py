"""JSON spec documents.

Block TBT spec::

    {"dims": [m1, m2, m3], "class": "dstu", "coeffs": [[re, im], ...]}

``coeffs`` lists every entry of every block ``t_s^(r)``, r-major, then
s-major (both ascending from ``-(m-1)``), then row-major inside the block.

3-D Toeplitz spec::

    {"dims": [m1, m2, m3], "class": "toeplitz3d", "taus": [[re, im], ...]}

``taus`` lists ``tau_j^(r,s)`` in ``(r, s, j)`` order, each ascending.
"""

import json
import math

import numpy as np

from .errors import SchemaError
from .structured import CLASSES, TOEPLITZ3D, BlockTbtSpec, DimTriple, Toeplitz3dSpec, lift_3d


def _pairs(values):
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).ravel()]


def spec_to_dict(spec):
    if isinstance(spec, Toeplitz3dSpec):
        return {"dims": list(spec.dims), "class": TOEPLITZ3D, "taus": _pairs(spec.taus)}
    return {"dims": list(spec.dims), "class": spec.class_tag, "coeffs": _pairs(spec.coeffs)}


def dumps_spec(spec):
    return json.dumps(spec_to_dict(spec), indent=None, separators=(",", ":")) + "\n"


def _parse_dims(doc):
    if "dims" not in doc:
        raise SchemaError("/dims", "required field missing")
    dims = doc["dims"]
    if not isinstance(dims, list) or len(dims) != 3:
        raise SchemaError("/dims", "must be an array of three integers")
    for i, v in enumerate(dims):
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"/dims/{i}", f"must be an integer, got {v!r}")
        if v < 2:
            raise SchemaError(f"/dims/{i}", f"must be >= 2, got {v}")
    return DimTriple(*dims)


def _parse_complex_list(doc, key, count):
    values = doc[key]
    if not isinstance(values, list):
        raise SchemaError(f"/{key}", "must be an array of [re, im] pairs")
    if len(values) != count:
        raise SchemaError(f"/{key}", f"expected {count} entries, got {len(values)}")
    out = np.empty(count, dtype=np.complex128)
    for i, pair in enumerate(values):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"/{key}/{i}", "must be a [re, im] pair")
        for j, x in enumerate(pair):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise SchemaError(f"/{key}/{i}/{j}", f"must be a finite number, got {x!r}")
        out[i] = complex(pair[0], pair[1])
    return out


def spec_from_dict(doc):
    """Validate a parsed document and return a :class:`BlockTbtSpec`.

    3-D documents (``taus``) are lifted to their block form.  The class tag
    is not checked against the data here; see :func:`structured.class_residual`.
    """
    if not isinstance(doc, dict):
        raise SchemaError("", "spec document must be a JSON object")
    dims = _parse_dims(doc)
    cls = doc.get("class")
    if cls is None:
        raise SchemaError("/class", "required field missing")
    if cls not in CLASSES:
        raise SchemaError("/class", f"must be one of {list(CLASSES)}, got {cls!r}")
    m1, m2, m3 = dims
    if "taus" in doc:
        if cls != TOEPLITZ3D:
            raise SchemaError("/taus", "only allowed for class 'toeplitz3d'")
        shape = (2 * m1 - 1, 2 * m2 - 1, 2 * m3 - 1)
        taus = _parse_complex_list(doc, "taus", int(np.prod(shape)))
        return lift_3d(Toeplitz3dSpec(dims, taus.reshape(shape)))
    if "coeffs" not in doc:
        raise SchemaError("/coeffs", "required field missing")
    shape = (2 * m1 - 1, 2 * m2 - 1, m3, m3)
    coeffs = _parse_complex_list(doc, "coeffs", int(np.prod(shape)))
    return BlockTbtSpec(dims, coeffs.reshape(shape), cls)


def loads_spec(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from exc
    return spec_from_dict(doc)


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        return loads_spec(fh.read())


def save_spec(spec, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_spec(spec))
