"""Bundled lattice data: JSON schema, loading, and validation.

Lattice files carry {"name": str, "gram": [[int]], "automorphisms":
{label: [[int]]}, "glue": optional}.  The environment variable
ORBIFOLDLAB_DATA overrides the bundled directory.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .errors import ValidationError
from .lattice import IntegerLattice, format_cycle_shape


def data_dir() -> Path:
    override = os.environ.get("ORBIFOLDLAB_DATA")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def resolve(name_or_path) -> Path:
    """A path as given if it exists, else a lookup in the data directory."""
    p = Path(name_or_path)
    if p.exists():
        return p
    candidate = data_dir() / p.name
    if candidate.exists():
        return candidate
    if not str(name_or_path).endswith(".json"):
        candidate = data_dir() / (str(name_or_path) + ".json")
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no lattice data for {name_or_path!r}")


class LatticeData:
    """A lattice together with its labelled automorphisms."""

    def __init__(self, name: str, lattice: IntegerLattice, automorphisms):
        self.name = name
        self.lattice = lattice
        self.automorphisms = dict(automorphisms)

    def automorphism(self, label: str):
        if label not in self.automorphisms:
            raise KeyError(
                f"{self.name} has no automorphism {label!r}; "
                f"available: {sorted(self.automorphisms)}"
            )
        return self.automorphisms[label]


def load_lattice(name_or_path) -> LatticeData:
    path = resolve(name_or_path)
    with open(path) as fh:
        raw = json.load(fh)
    return lattice_from_dict(raw)


def lattice_from_dict(raw: dict) -> LatticeData:
    for key in ("name", "gram"):
        if key not in raw:
            raise ValidationError(f"lattice data lacks {key!r}")
    gram = raw["gram"]
    lattice = IntegerLattice(gram, name=raw["name"])
    auts = {}
    for label, rows in raw.get("automorphisms", {}).items():
        u = tuple(tuple(int(x) for x in row) for row in rows)
        auts[label] = u
    return LatticeData(raw["name"], lattice, auts)


def lattice_to_dict(name: str, lattice: IntegerLattice, automorphisms=None,
                    glue=None) -> dict:
    out = {
        "name": name,
        "gram": [list(row) for row in lattice.gram],
        "automorphisms": {
            label: [list(row) for row in u]
            for label, u in (automorphisms or {}).items()
        },
    }
    if glue is not None:
        out["glue"] = glue
    return out


def save_lattice(path, name, lattice, automorphisms=None, glue=None) -> None:
    with open(path, "w") as fh:
        json.dump(lattice_to_dict(name, lattice, automorphisms, glue), fh)
        fh.write("\n")


def validate_lattice_data(data: LatticeData) -> dict:
    """Schema and consistency report for one lattice file.

    Checks evenness, the automorphism property and finite order for each
    labelled matrix, and records determinant and cycle shapes.
    """
    lat = data.lattice
    report = {
        "name": data.name,
        "rank": lat.rank,
        "det": lat.det(),
        "even": lat.is_even(),
        "automorphisms": {},
    }
    for label, u in data.automorphisms.items():
        entry = {"is_automorphism": lat.is_automorphism(u)}
        if entry["is_automorphism"]:
            entry["order"] = lat.automorphism_order(u)
            entry["cycle_shape"] = format_cycle_shape(lat.cycle_shape(u))
        report["automorphisms"][label] = entry
    report["ok"] = report["even"] and all(
        e["is_automorphism"] for e in report["automorphisms"].values()
    )
    return report
