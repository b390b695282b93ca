"""
JSON schemas: barcodes (the universal interchange format) and module
representations (debug/golden output).
"""

from __future__ import annotations

import json
import math

import numpy as np

from .barcode import Bar, Barcode
from .module_rep import ModuleRep

INF = math.inf


def _num_out(x: float):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    # 17 significant digits round-trip any double exactly
    return float(f"{x:.17g}")


def _num_in(x) -> float:
    if x == "inf":
        return INF
    if x == "-inf":
        return -INF
    if not isinstance(x, (int, float)):
        raise ValueError(f"not a number: {x!r}")
    return float(x)


def barcode_to_dict(b: Barcode) -> dict:
    return {"bars": [{"birth": _num_out(bar.birth),
                      "death": _num_out(bar.death),
                      "degree": bar.degree} for bar in sorted(b.bars)]}


def barcode_from_dict(d: dict) -> Barcode:
    if not isinstance(d, dict) or "bars" not in d or not isinstance(d["bars"], list):
        raise ValueError('barcode JSON must be {"bars": [...]}')
    bars = []
    for i, rec in enumerate(d["bars"]):
        if not isinstance(rec, dict) or "birth" not in rec or "death" not in rec:
            raise ValueError(f"bar {i}: need birth and death")
        degree = rec.get("degree")
        if degree is not None and not isinstance(degree, int):
            raise ValueError(f"bar {i}: degree must be an integer or null")
        bars.append(Bar(_num_in(rec["birth"]), _num_in(rec["death"]), degree))
    return Barcode(bars)


def dump_barcode(b: Barcode, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(barcode_to_dict(b), fh, indent=1)
        fh.write("\n")


def load_barcode(path: str) -> Barcode:
    with open(path) as fh:
        return barcode_from_dict(json.load(fh))


def module_to_dict(v: ModuleRep) -> dict:
    return {"spectrum": [_num_out(a) for a in v.spectrum],
            "dims": list(v.dims),
            "maps": [[int(x) for x in m.reshape(-1)] for m in v.maps],
            "p": v.p}


def module_from_dict(d: dict) -> ModuleRep:
    spectrum = [_num_in(a) for a in d["spectrum"]]
    dims = [int(x) for x in d["dims"]]
    maps = []
    for i, flat in enumerate(d["maps"]):
        shape = (dims[i + 1], dims[i])
        maps.append(np.array(flat, dtype=np.int64).reshape(shape))
    return ModuleRep(spectrum, dims, maps, int(d.get("p", 2)))
