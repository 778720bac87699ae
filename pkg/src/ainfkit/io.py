"""JSON formats: ainf/v1, ainf-map/v1, dualalg/v1, defcomplex/v1, jet/v1, killlog/v1."""

from __future__ import annotations

import json
import os
import tempfile

from .core import AInfFunctor, AInfPair, AInfStructure, Gen, HomotopyData, MorphismHomotopy, StructureError
from .foundation import FieldSpec, GradedSpace
from .jets import JetAutomorphism, JetMatrix, JetPoly


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None, path=""):
        where = f"line {line}, column {col}: " if line is not None else ""
        at = f" (at {path})" if path else ""
        super().__init__(f"{where}{msg}{at}")
        self.line, self.col, self.path = line, col, path


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def write_json(path, obj):
    """Write atomically: temp file in the same directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(dumps(obj))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _need(d, key, path):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"missing key {key!r}", path=path)
    return d[key]


def _schema(d, want):
    got = _need(d, "schema", "$")
    if got != want:
        raise ParseError(f"expected schema {want!r}, found {got!r}", path="$.schema")


def _scalar(field, s, path):
    if not isinstance(s, str):
        raise ParseError("scalars must be strings", path=path)
    try:
        return field.parse_scalar(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad scalar {s!r}: {e}", path=path) from None


# ------------------------------------------------------------------ ainf/v1


def _hom_json(S):
    return {f"{s}|{t}": {str(d): list(sp.basis(d)) for d in sp.degrees}
            for (s, t), sp in S.hom.items()}


def _table_json(S, T, table):
    """Components on words of S landing in T (outputs named by label)."""
    fmt = T.field.format_scalar
    out = []
    for w in sorted(table, key=lambda w: (len(w), w)):
        vec = table[w]
        out.append({"arity": len(w),
                    "inputs": [list(S.gens[i]) for i in w],
                    "output": {T.gens[g].label: fmt(c) for g, c in sorted(vec.items())}})
    return out


def structure_to_json(S: AInfStructure) -> dict:
    return {"schema": "ainf/v1", "field": str(S.field), "objects": list(S.objects),
            "max_arity": S.max_arity, "pair": isinstance(S, AInfPair),
            "hom": _hom_json(S), "products": _table_json(S, S, S.table)}


def _parse_hom(d):
    hom = {}
    for key, spaces in _need(d, "hom", "$").items():
        if key.count("|") != 1:
            raise ParseError(f"hom key {key!r} is not 'src|tgt'", path=f"$.hom.{key}")
        s, t = key.split("|")
        try:
            hom[(s, t)] = GradedSpace({int(k): tuple(v) for k, v in spaces.items()})
        except (ValueError, TypeError, AttributeError) as e:
            raise ParseError(f"bad graded space: {e}", path=f"$.hom.{key}") from None
    return hom


def _parse_table(entries, S, T, shift, path, object_map=None):
    """Index table from JSON components; outputs are resolved inside the target hom space."""
    omap = object_map or {o: o for o in S.objects}
    table = {}
    for k, e in enumerate(entries):
        p = f"{path}[{k}]"
        try:
            w = tuple(S.index[Gen(*x)] for x in _need(e, "inputs", p))
        except (KeyError, TypeError) as err:
            raise ParseError(f"unknown input generator {err}", path=f"{p}.inputs") from None
        if not w or _need(e, "arity", p) != len(w):
            raise ParseError("arity does not match the inputs", path=f"{p}.arity")
        src, tgt = omap[S.src[w[-1]]], omap[S.tgt[w[0]]]
        deg = sum(S.deg[i] for i in w) + shift(len(w))
        vec = {}
        for lab, c in _need(e, "output", p).items():
            g = T.index.get(Gen(src, tgt, deg, lab))
            if g is None:
                raise ParseError(f"output {lab!r} is not in Hom^{deg}({src},{tgt})", path=f"{p}.output")
            c = _scalar(T.field, c, f"{p}.output.{lab}")
            if c:
                vec[g] = vec.get(g, 0) + c
        if vec:
            if w in table:
                raise ParseError("repeated input word", path=p)
            table[w] = vec
    return table


def structure_from_json(d: dict) -> AInfStructure:
    _schema(d, "ainf/v1")
    try:
        field = FieldSpec.parse(_need(d, "field", "$"))
    except ValueError as e:
        raise ParseError(str(e), path="$.field") from None
    objects = _need(d, "objects", "$")
    hom = _parse_hom(d)
    N = d.get("max_arity") or max([e.get("arity", 2) for e in d.get("products", [])] + [2])
    try:
        shell = AInfStructure(objects, hom, max_arity=N, field=field, table={}, validate=False)
        table = _parse_table(_need(d, "products", "$"), shell, shell, lambda n: 2 - n, "$.products")
        S = AInfStructure(objects, hom, max_arity=N, field=field, table=table)
        return AInfPair.from_structure(S) if d.get("pair") else S
    except StructureError as e:
        raise ParseError(str(e)) from None


# ------------------------------------------------------------------ ainf-map/v1

_SHIFT = {"functor": "1-n", "homotopy": "1-n", "morphism-homotopy": "-n"}
_SHIFT_FN = {"1-n": lambda n: 1 - n, "-n": lambda n: -n}


def map_to_json(F) -> dict:
    if isinstance(F, AInfFunctor):
        kind, S, T, table = "functor", F.source, F.target, F.table
        extra = {"object_map": dict(F.object_map), "max_arity": F.max_arity}
    elif isinstance(F, HomotopyData):
        kind, S, T, table, extra = "homotopy", F.base, F.base, F.table, {}
    elif isinstance(F, MorphismHomotopy):
        kind, S, T, table, extra = "morphism-homotopy", F.source, F.target, F.table, {}
    else:
        raise TypeError(f"cannot serialize {type(F).__name__}")
    out = {"schema": "ainf-map/v1", "kind": kind, "shift": _SHIFT[kind],
           "source": structure_to_json(S)}
    if T is not S:
        out["target"] = structure_to_json(T)
    out.update(extra)
    out["components"] = _table_json(S, T, table)
    return out


def map_from_json(d: dict):
    _schema(d, "ainf-map/v1")
    kind = _need(d, "kind", "$")
    shift = _need(d, "shift", "$")
    if _SHIFT.get(kind) != shift:
        raise ParseError(f"kind {kind!r} does not go with shift {shift!r}", path="$.shift")
    S = structure_from_json(_need(d, "source", "$"))
    T = structure_from_json(d["target"]) if "target" in d else S
    omap = d.get("object_map")
    table = _parse_table(_need(d, "components", "$"), S, T, _SHIFT_FN[shift], "$.components", omap)
    try:
        if kind == "functor":
            return AInfFunctor(S, T, table, omap, d.get("max_arity"))
        if kind == "homotopy":
            return HomotopyData(S, table)
        if kind == "morphism-homotopy":
            return MorphismHomotopy(S, T, table)
    except StructureError as e:
        raise ParseError(str(e), path="$.components") from None
    raise ParseError(f"unsupported map kind {kind!r}", path="$.kind")


# ------------------------------------------------------------------ jet/v1


def _mono_str(m):
    return ",".join(map(str, m))


def poly_to_json(p: JetPoly, field: FieldSpec) -> dict:
    return {_mono_str(m): field.format_scalar(c) for m, c in sorted(p.terms.items())}


def poly_from_json(d: dict, nvars: int, K: int, field: FieldSpec, path="$") -> JetPoly:
    terms = {}
    for k, c in d.items():
        try:
            m = tuple(int(x) for x in k.split(",")) if k else ()
        except ValueError:
            raise ParseError(f"bad exponent vector {k!r}", path=path) from None
        if len(m) != nvars:
            raise ParseError(f"exponent vector {k!r} has the wrong length", path=path)
        terms[m] = _scalar(field, c, f"{path}.{k}")
    return JetPoly(nvars, K, terms)


def jet_to_json(obj, field: FieldSpec) -> dict:
    if isinstance(obj, JetPoly):
        return {"schema": "jet/v1", "field": str(field), "kind": "poly", "nvars": obj.nvars, "K": obj.K,
                "poly": poly_to_json(obj, field)}
    if isinstance(obj, JetMatrix):
        return {"schema": "jet/v1", "field": str(field), "kind": "matrix", "nvars": obj.nvars, "K": obj.K,
                "shape": list(obj.shape),
                "entries": [poly_to_json(e, field) for e in obj.entries()]}
    if isinstance(obj, JetAutomorphism):
        return {"schema": "jet/v1", "field": str(field), "kind": "automorphism", "nvars": obj.nvars,
                "K": obj.K, "images": [poly_to_json(e, field) for e in obj.images]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def jet_from_json(d: dict):
    _schema(d, "jet/v1")
    field = FieldSpec.parse(_need(d, "field", "$"))
    n, K, kind = _need(d, "nvars", "$"), _need(d, "K", "$"), _need(d, "kind", "$")
    if kind == "poly":
        return poly_from_json(_need(d, "poly", "$"), n, K, field, "$.poly")
    if kind == "matrix":
        r, c = _need(d, "shape", "$")
        ents = [poly_from_json(e, n, K, field, f"$.entries[{i}]") for i, e in enumerate(_need(d, "entries", "$"))]
        if len(ents) != r * c:
            raise ParseError("entry count does not match the shape", path="$.entries")
        return JetMatrix([ents[i * c:(i + 1) * c] for i in range(r)])
    if kind == "automorphism":
        return JetAutomorphism([poly_from_json(e, n, K, field, f"$.images[{i}]")
                                for i, e in enumerate(_need(d, "images", "$"))])
    raise ParseError(f"unknown jet kind {kind!r}", path="$.kind")
