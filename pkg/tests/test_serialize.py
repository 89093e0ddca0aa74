import math
import os

import numpy as np
import pytest

from wbpr import (
    AtomicMeasure,
    BoundaryLogModulus,
    CheckResult,
    DiscFactorization,
    OuterModifier,
    StripFunction,
    VerificationReport,
    ZeroMultiset,
)
from wbpr.errors import SpecFormatError
from wbpr.serialize import (
    atomic_write_text,
    disc_from_dict,
    disc_to_dict,
    dump_json,
    load_json,
    load_spec,
    modifier_from_dict,
    modifier_to_dict,
    report_to_dict,
    request_from_dict,
    save_spec,
    spec_from_dict,
    strip_side_from_dict,
    write_csv,
)


def awkward_disc():
    # floats chosen to expose any formatting that is not round-trip exact
    return DiscFactorization(
        phase=0.1,
        zeros=ZeroMultiset(((1.0 / 3.0 + 0.7j / 11.0, 2), (-0.25, 1))),
        singular=AtomicMeasure(((math.pi / 7.0, 1e-17), (-2.0, 0.625))),
        outer=BoundaryLogModulus(np.linspace(-1.0 / 7.0, 1.0 / 9.0, 64)))


class TestSpecRoundTrip:
    def test_disc_dict_round_trip(self):
        f = awkward_disc()
        assert disc_from_dict(disc_to_dict(f)) == f

    def test_disc_file_round_trip(self, tmp_path):
        f = awkward_disc()
        path = str(tmp_path / "spec.json")
        save_spec(path, f)
        assert load_spec(path) == f

    def test_strip_file_round_trip(self, tmp_path):
        f = StripFunction(awkward_disc(), corner_plus=0.375, corner_minus=0.1,
                          scale=2.0, eta=-1.5)
        path = str(tmp_path / "strip.json")
        save_spec(path, f)
        g = load_spec(path)
        assert isinstance(g, StripFunction)
        assert g == f

    def test_dispatch_on_disc_key(self):
        d = disc_to_dict(awkward_disc())
        assert isinstance(spec_from_dict(d), DiscFactorization)
        assert isinstance(spec_from_dict({"disc": d}), StripFunction)

    def test_save_is_canonical(self, tmp_path):
        f = awkward_disc()
        first = str(tmp_path / "a.json")
        second = str(tmp_path / "b.json")
        save_spec(first, f)
        save_spec(second, load_spec(first))
        with open(first, "rb") as fh:
            a = fh.read()
        with open(second, "rb") as fh:
            b = fh.read()
        assert a == b

    def test_strip_defaults_fill_in(self):
        g = spec_from_dict({"disc": disc_to_dict(awkward_disc())})
        assert (g.corner_plus, g.corner_minus, g.scale, g.eta) == (0.0, 0.0, 1.0, 0.0)


class TestFileHygiene:
    def test_mode_is_world_readable(self, tmp_path):
        path = str(tmp_path / "out.json")
        atomic_write_text(path, "{}\n")
        assert os.stat(path).st_mode & 0o777 == 0o644

    def test_no_temporaries_left_behind(self, tmp_path):
        path = str(tmp_path / "out.json")
        atomic_write_text(path, "x\n")
        atomic_write_text(path, "y\n")
        assert os.listdir(tmp_path) == ["out.json"]
        with open(path) as fh:
            assert fh.read() == "y\n"


class TestFormatErrors:
    def test_missing_phase(self):
        d = disc_to_dict(awkward_disc())
        del d["phase"]
        with pytest.raises(SpecFormatError, match="missing the 'phase'"):
            disc_from_dict(d)

    def test_missing_zero_field(self):
        d = disc_to_dict(awkward_disc())
        del d["zeros"][0]["re"]
        with pytest.raises(SpecFormatError, match=r"zeros\[0\]"):
            disc_from_dict(d)

    def test_sample_count_mismatch(self):
        d = disc_to_dict(awkward_disc())
        d["outer"]["M"] = 63
        with pytest.raises(SpecFormatError, match="disagrees with 64 samples"):
            disc_from_dict(d)

    def test_not_an_object(self):
        with pytest.raises(SpecFormatError, match="JSON object"):
            disc_from_dict([1, 2, 3])

    def test_invalid_constructed_spec(self):
        d = disc_to_dict(awkward_disc())
        d["zeros"][0]["re"] = 2.0
        with pytest.raises(SpecFormatError, match="invalid disc spec"):
            disc_from_dict(d)

    def test_broken_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SpecFormatError, match="not valid JSON"):
            load_json(str(path))


class TestRequestParsing:
    def test_empty_request(self):
        req = request_from_dict({})
        assert req.flip is None
        assert req.sigma_plus is None
        assert req.outer is None
        assert (req.phase, req.eta, req.star) == (0.0, 0.0, False)

    def test_bare_indices(self):
        req = request_from_dict({"flip": [0, 2]})
        assert req.flip.kept == ((0, None), (2, None))

    def test_index_count_pairs(self):
        req = request_from_dict({"flip": [[0, 1], 2]})
        assert req.flip.kept == ((0, 1), (2, None))

    def test_empty_flip_list_flips_everything(self):
        req = request_from_dict({"flip": []})
        assert req.flip is not None
        assert req.flip.kept == ()

    def test_bad_pair_length(self):
        with pytest.raises(SpecFormatError, match="index, kept_count"):
            request_from_dict({"flip": [[0, 1, 2]]})

    def test_sigma_and_flags(self):
        req = request_from_dict({
            "sigma_plus": [{"theta": 1.2, "mass": 0.25}],
            "phase": 0.5, "eta": 2.0, "star": True,
        })
        assert req.sigma_plus.sigma_plus.atoms == ((1.2, 0.25),)
        assert (req.phase, req.eta, req.star) == (0.5, 2.0, True)

    def test_outer_modifier_forms(self):
        exp = request_from_dict({"outer": {"kind": "exponential", "eta": 1.5}})
        assert exp.outer.kind == "exponential"
        assert exp.outer.eta == 1.5
        star = request_from_dict({"outer": {"kind": "star_quotient"}})
        assert star.outer.kind == "star_quotient"

    def test_not_an_object(self):
        with pytest.raises(SpecFormatError, match="JSON object"):
            request_from_dict("flip everything")


class TestModifierRoundTrip:
    def test_exponential(self):
        u = OuterModifier.exponential(2.5)
        assert modifier_from_dict(modifier_to_dict(u)) == u

    def test_star_quotient(self):
        u = OuterModifier.star_quotient()
        assert modifier_from_dict(modifier_to_dict(u)) == u

    def test_odd_boundary(self):
        theta = np.linspace(-math.pi, math.pi, 33)[:-1]
        u = OuterModifier.odd_boundary(0.2 * np.sin(theta))
        v = modifier_from_dict(modifier_to_dict(u))
        assert v.kind == "odd_boundary"
        np.testing.assert_array_equal(v.samples, u.samples)

    def test_unknown_kind(self):
        with pytest.raises(SpecFormatError, match="unknown outer modifier"):
            modifier_from_dict({"kind": "squared"})


class TestStripSideParsing:
    def test_side_spellings(self):
        d = {"zeros": [], "boundary_atoms": [
            {"x": 0.0, "side": "+", "mass": 1.0},
            {"x": 1.0, "side": "-1", "mass": 0.5},
            {"x": 2.0, "side": -1, "mass": 0.25},
        ]}
        data = strip_side_from_dict(d)
        assert [a[1] for a in data.boundary_atoms] == [1, -1, -1]

    def test_bad_side(self):
        with pytest.raises(SpecFormatError, match="side must be"):
            strip_side_from_dict(
                {"boundary_atoms": [{"x": 0.0, "side": "up", "mass": 1.0}]})

    def test_corner_pair_length(self):
        with pytest.raises(SpecFormatError, match=r"\[plus, minus\] pair"):
            strip_side_from_dict({"corners": [1.0]})

    def test_defaults(self):
        data = strip_side_from_dict({})
        assert data.zeros == ()
        assert data.boundary_atoms == ()
        assert data.corners == (0.0, 0.0)


class TestReportSerialization:
    def test_report_shape(self):
        rep = VerificationReport(
            checks=[CheckResult("a", True, 1e-12, 1e-9, argmax=0.5),
                    CheckResult("b", False, math.inf, 1e-9, argmax=1 + 2j,
                                note="broke")],
            metadata={"values": np.array([1.0, 2.0]), "n": np.int64(3)})
        d = report_to_dict(rep)
        assert d["passed"] is False
        assert d["checks"][0]["argmax"] == 0.5
        assert "note" not in d["checks"][0]
        assert d["checks"][1]["max_err"] == "inf"
        assert d["checks"][1]["argmax"] == [1.0, 2.0]
        assert d["checks"][1]["note"] == "broke"
        assert d["metadata"] == {"values": [1.0, 2.0], "n": 3}

    def test_nan_spelled_out(self):
        rep = VerificationReport(checks=[CheckResult("a", False, math.nan, 1e-9)])
        assert report_to_dict(rep)["checks"][0]["max_err"] == "nan"

    def test_dump_json_is_sorted_and_terminated(self):
        text = dump_json({"b": 1, "a": 2})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")


class TestCsv:
    def test_columns_become_rows(self, tmp_path):
        path = str(tmp_path / "table.csv")
        write_csv(path, ["t", "value"],
                  [np.array([0.0, 0.5, 1.0]), np.array([0.1, 1.0 / 3.0, -2.0])])
        with open(path) as fh:
            lines = fh.read().splitlines()
        assert lines[0] == "t,value"
        assert len(lines) == 4
        t, v = lines[2].split(",")
        assert float(t) == 0.5
        assert float(v) == 1.0 / 3.0

    def test_floats_round_trip_exactly(self, tmp_path):
        path = str(tmp_path / "table.csv")
        values = np.array([0.1, 1e-300, 7.0 / 13.0])
        write_csv(path, ["v"], [values])
        back = np.loadtxt(path, skiprows=1)
        np.testing.assert_array_equal(back, values)

    def test_trailing_newline(self, tmp_path):
        path = str(tmp_path / "table.csv")
        write_csv(path, ["v"], [np.array([1.0])])
        with open(path) as fh:
            assert fh.read().endswith("\n")
