"""JSON encodings for every artifact type, plus DOT export of fans.

Complex scalars are serialized as [re, im] pairs; floats go through Python's
shortest-round-trip repr, so writing and re-reading a file reproduces the
doubles bit for bit and identical inputs give byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from .basis import Fan, Provenance, UnitaryBasis, unitary_basis
from .combinatorics import (
    FiniteGroup,
    HadamardFamily,
    LatinSquare,
    group_from_cayley,
    hadamard_family,
    latin_square,
)
from .ppt import PptCertificate
from .tomography import MubSystem, Povm, make_povm


# ---------------------------------------------------------------------------
# matrices


def matrix_to_json(a) -> dict:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    flat = m.reshape(-1)
    return {"dim": int(m.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(obj) -> np.ndarray:
    d = int(obj["dim"])
    entries = obj["entries"]
    if len(entries) != d * d:
        raise ValueError(f"matrix of dim {d} needs {d * d} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(d, d)


def rect_to_json(a) -> dict:
    """Rectangular complex array encoding (partial Hadamard rows, etc.)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {m.shape}")
    flat = m.reshape(-1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def rect_from_json(obj) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    flat = np.array([complex(re, im) for re, im in obj["entries"]])
    return flat.reshape(rows, cols)


# ---------------------------------------------------------------------------
# combinatorial objects


def latin_to_json(lam: LatinSquare) -> dict:
    return {"size": lam.size, "table": lam.table.tolist()}


def latin_from_json(obj) -> LatinSquare:
    return latin_square(obj["table"])


def group_to_json(group: FiniteGroup) -> dict:
    return {"order": group.order, "cayley": group.cayley.tolist()}


def group_from_json(obj) -> FiniteGroup:
    return group_from_cayley(obj["cayley"])


def hadamard_family_to_json(fam: HadamardFamily) -> dict:
    out: dict = {
        "d": fam.d,
        "matrices": {str(n): matrix_to_json(fam.matrices[n]) for n in range(fam.d)},
    }
    if fam.exact:
        out["root_order"] = int(fam.root_order)
        out["exponents"] = {str(n): fam.exponents[n].tolist() for n in range(fam.d)}
    return out


def hadamard_family_from_json(obj) -> HadamardFamily:
    d = int(obj["d"])
    mats = np.stack([matrix_from_json(obj["matrices"][str(n)]) for n in range(d)])
    root_order = obj.get("root_order")
    exponents = None
    if root_order is not None:
        exponents = np.stack([np.asarray(obj["exponents"][str(n)], dtype=int) for n in range(d)])
    return hadamard_family(mats, root_order=root_order, exponents=exponents)


# ---------------------------------------------------------------------------
# bases and fans


def _provenance_to_json(prov: Provenance) -> dict:
    return {
        "kind": prov.kind,
        "params": prov.params,
        "latin": None if prov.latin is None else latin_to_json(prov.latin),
        "hadamard": None if prov.hadamard is None else hadamard_family_to_json(prov.hadamard),
    }


def _provenance_from_json(obj) -> Provenance:
    return Provenance(
        kind=obj["kind"],
        params=dict(obj.get("params") or {}),
        latin=None if obj.get("latin") is None else latin_from_json(obj["latin"]),
        hadamard=None if obj.get("hadamard") is None else hadamard_family_from_json(obj["hadamard"]),
    )


def basis_to_json(basis: UnitaryBasis) -> dict:
    return {
        "d": basis.d,
        "labels": list(basis.labels),
        "operators": {x: matrix_to_json(basis.operators[x]) for x in basis.labels},
        "provenance": _provenance_to_json(basis.provenance),
    }


def basis_from_json(obj) -> UnitaryBasis:
    labels = [str(x) for x in obj["labels"]]
    ops = {x: matrix_from_json(obj["operators"][x]) for x in labels}
    return unitary_basis(labels, ops, _provenance_from_json(obj["provenance"]))


def fan_to_json(fan: Fan) -> dict:
    return {"universe": list(fan.universe), "masses": [list(m) for m in fan.masses]}


def fan_from_json(obj) -> Fan:
    return Fan(
        universe=tuple(str(x) for x in obj["universe"]),
        masses=tuple(tuple(str(x) for x in m) for m in obj["masses"]),
    )


def fan_to_dot(fan: Fan) -> str:
    """Bipartite membership graph: box nodes M<k> for MASSes, circles for labels."""
    lines = ["graph fan {"]
    for k in range(len(fan.masses)):
        lines.append(f'  M{k} [shape=box];')
    for x in fan.universe:
        lines.append(f'  "{x}" [shape=circle];')
    for k, mass in enumerate(fan.masses):
        for x in mass:
            lines.append(f'  M{k} -- "{x}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# tomography and PPT artifacts


def povm_to_json(povm: Povm) -> dict:
    return {
        "d": povm.d,
        "elements": [matrix_to_json(e) for e in povm.elements],
        "pure_flags": list(povm.pure_flags),
    }


def povm_from_json(obj) -> Povm:
    d = int(obj["d"])
    return make_povm(d, [matrix_from_json(e) for e in obj["elements"]])


def mub_to_json(mub: MubSystem) -> dict:
    return {
        "d": mub.d,
        "bases": [matrix_to_json(b) for b in mub.bases],
        "source": [list(m) for m in mub.source],
    }


def certificate_to_json(cert: PptCertificate) -> dict:
    return {
        "n": cert.n,
        "block_half_dim": cert.block_half_dim,
        "shift_a": cert.shift_a,
        "lambda_min": cert.lambda_min,
        "lambda_min_pt": cert.lambda_min_pt,
        "matrix": matrix_to_json(cert.matrix),
    }


# ---------------------------------------------------------------------------
# file helpers


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_json(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
