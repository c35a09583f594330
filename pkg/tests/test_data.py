"""Bundled lattice files: schema round trips, loading, validation reports."""

import json

import pytest

from orbifoldlab.data import (
    LatticeData,
    data_dir,
    lattice_from_dict,
    lattice_to_dict,
    load_lattice,
    resolve,
    save_lattice,
    validate_lattice_data,
)
from orbifoldlab.errors import ValidationError
from orbifoldlab.lattice import IntegerLattice, parse_cycle_shape


class TestSchema:
    def test_round_trip(self, tmp_path):
        lat = IntegerLattice([[2, -1], [-1, 2]])
        u = ((-1, -1), (1, 0))
        path = tmp_path / "a2.json"
        save_lattice(path, "A2", lat, {"rot": u})
        data = load_lattice(path)
        assert data.name == "A2"
        assert data.lattice.gram == lat.gram
        assert data.automorphism("rot") == u

    def test_missing_gram_rejected(self):
        with pytest.raises(ValidationError):
            lattice_from_dict({"name": "broken"})

    def test_unknown_automorphism_label(self, tmp_path):
        path = tmp_path / "a1.json"
        save_lattice(path, "A1", IntegerLattice([[2]]))
        with pytest.raises(KeyError, match="no automorphism"):
            load_lattice(path).automorphism("flip")

    def test_resolve_unknown_name(self):
        with pytest.raises(FileNotFoundError):
            resolve("no-such-lattice")

    def test_env_override(self, monkeypatch, tmp_path):
        save_lattice(tmp_path / "probe.json", "probe", IntegerLattice([[4]]))
        monkeypatch.setenv("ORBIFOLDLAB_DATA", str(tmp_path))
        assert data_dir() == tmp_path
        assert load_lattice("probe").lattice.gram == ((4,),)

    def test_glue_block_preserved(self):
        raw = lattice_to_dict("X", IntegerLattice([[2]]), glue={"blocks": ["A1"]})
        assert lattice_from_dict(raw).name == "X"
        assert raw["glue"] == {"blocks": ["A1"]}


EXPECTED_FILES = {
    "a1", "a2", "a4", "a4dual5", "d8", "e8", "ii1_1", "leech",
    "leech_fix_2", "leech_fix_3", "leech_fix_5", "leech_fix_6",
    "leech_fix_7", "leech_fix_11", "leech_fix_14", "leech_fix_15",
    "leech_fix_23", "nA4_6", "nA9_2D6", "nA2_12", "nE6_4",
}


class TestBundled:
    def test_inventory(self):
        names = {p.stem for p in data_dir().glob("*.json")}
        assert names == EXPECTED_FILES

    def test_small_lattices(self):
        assert load_lattice("a1").lattice.gram == ((2,),)
        e8 = load_lattice("e8").lattice
        assert e8.rank == 8 and e8.det() == 1 and e8.is_even()
        assert load_lattice("ii1_1").lattice.det() == -1
        assert load_lattice("a4dual5").lattice.det() == 125

    def test_leech(self):
        data = load_lattice("leech")
        lat = data.lattice
        assert lat.rank == 24 and lat.det() == 1 and lat.is_even()
        assert sorted(data.automorphisms) == [
            "m1", "m11", "m14", "m15", "m2", "m23", "m3", "m5", "m6", "m7"]
        assert lat.cycle_shape(data.automorphism("m2")) == {1: 8, 2: 8}
        assert lat.cycle_shape(data.automorphism("m23")) == {1: 1, 23: 1}

    @pytest.mark.parametrize("m,rank", [
        (2, 16), (3, 12), (5, 8), (6, 8), (7, 6),
        (11, 4), (14, 4), (15, 4), (23, 2),
    ])
    def test_fixed_lattices(self, m, rank):
        lat = load_lattice(f"leech_fix_{m}").lattice
        assert lat.rank == rank
        assert lat.is_even()
        assert lat.det() == m ** (rank // 2)
        orders = lat.discriminant_group().orders
        assert orders == (m,) * (rank // 2)

    def test_rank_four_fixed_lattices_are_rootless(self):
        for m in (11, 14, 15, 23):
            lat = load_lattice(f"leech_fix_{m}").lattice
            assert lat.minimum() >= 4

    def test_glued_lattices_are_unimodular(self):
        for name in ("nA4_6", "nA9_2D6", "nA2_12", "nE6_4"):
            lat = load_lattice(name).lattice
            assert lat.rank == 24 and lat.det() == 1 and lat.is_even()

    def test_case_labels(self):
        assert set(load_lattice("nA4_6").automorphisms) == {"case2", "case5"}
        assert set(load_lattice("nA9_2D6").automorphisms) == {"case1"}
        assert set(load_lattice("nA2_12").automorphisms) == {"case3"}
        assert set(load_lattice("nE6_4").automorphisms) == {"case4"}


class TestValidation:
    def test_report_for_glued_lattice(self):
        report = validate_lattice_data(load_lattice("nA4_6"))
        assert report["ok"]
        assert report["det"] == 1
        case2 = report["automorphisms"]["case2"]
        assert case2["order"] == 5
        assert parse_cycle_shape(case2["cycle_shape"]) == {1: -1, 5: 5}
        case5 = report["automorphisms"]["case5"]
        assert case5["order"] == 10

    def test_report_flags_bad_matrix(self):
        lat = IntegerLattice([[2, 0], [0, 2]])
        data = LatticeData("bad", lat, {"skew": ((1, 1), (0, 1))})
        report = validate_lattice_data(data)
        assert not report["ok"]
        assert not report["automorphisms"]["skew"]["is_automorphism"]

    def test_files_parse_as_json(self):
        for path in data_dir().glob("*.json"):
            with open(path) as fh:
                raw = json.load(fh)
            assert set(raw) <= {"name", "gram", "automorphisms", "glue"}
