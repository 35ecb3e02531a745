import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bdtree.cli import main
from bdtree.files import (
    InputError,
    PolygonInstance,
    ResultFile,
    dumps,
    instance_from_dict,
    instance_to_dict,
    loads,
)
from bdtree.geom import pt, to_coord

from conftest import L_VERTS, SQUARE_VERTS


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def poly_file(tmp_path, verts, a=None, v1=None, v2=None, name="inst.json"):
    d = {"kind": "polygon-instance", "polygon": [[str(x), str(y)] for x, y in verts]}
    if a is not None:
        d["a_indices"] = a
    if v1 is not None:
        d["v1"], d["v2"] = v1, v2
    return write(tmp_path / name, d)


def seg_file(tmp_path, segs, name="segs.json"):
    d = {"kind": "segments-instance", "segments": [[[str(c) for c in p], [str(c) for c in q]] for p, q in segs]}
    return write(tmp_path / name, d)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestFiles:
    def test_json_numbers_read_exactly(self):
        d = loads('{"kind": "segments-instance", "segments": [[[0.1, 0], [1, 0.3]]]}')
        inst = instance_from_dict(d)
        assert inst.segments[0][0][0] == to_coord("1/10")

    @given(st.lists(st.tuples(st.fractions(max_denominator=50), st.fractions(max_denominator=50)), min_size=3, max_size=8))
    def test_polygon_roundtrip(self, coords):
        verts = [pt(x, y) for x, y in coords]
        inst = PolygonInstance(verts, list(range(len(verts))), 0, 1, 7)
        text = dumps(instance_to_dict(inst))
        back = instance_from_dict(loads(text))
        assert back == inst and dumps(instance_to_dict(back)) == text

    def test_result_roundtrip(self):
        r = ResultFile("segments-result", [pt("1/3", 2), pt(0, "0.5")], [(0, 1)], [{"x": 1}], [], {"epsilon": "1/8"})
        assert ResultFile.from_dict(loads(dumps(r.to_dict()))) == r

    @pytest.mark.parametrize(
        "bad",
        [
            {"kind": "polygon-instance", "polygon": [[0, 0], [1, 0], [0, 1]], "a_indices": [0, 5]},
            {"kind": "polygon-instance", "polygon": [[0, 0], [1, 0]]},
            {"kind": "polygon-instance", "polygon": [[0, 0], [1, 0], [0, "x"]]},
            {"kind": "polygon-instance", "polygon": [[0, 0], [1, 0], [0, 1]], "segments": []},
            {"kind": "segments-instance", "segments": [[[0, 0]]]},
            {"kind": "something"},
        ],
    )
    def test_rejects(self, bad):
        with pytest.raises(InputError):
            instance_from_dict(bad)


class TestTreeCommand:
    def test_L(self, tmp_path, capsys):
        code, out, _ = run(capsys, "tree", poly_file(tmp_path, L_VERTS))
        assert code == 0
        res = json.loads(out)
        assert len(res["edges"]) == 5 and all(c["passed"] for c in res["report"])

    def test_square_path(self, tmp_path, capsys):
        code, out, _ = run(capsys, "tree", poly_file(tmp_path, SQUARE_VERTS))
        degs = sorted(v["degree"] for v in json.loads(out)["vertices"])
        assert code == 0 and degs == [1, 1, 2, 2]

    def test_two_marks(self, tmp_path, capsys):
        code, out, _ = run(capsys, "tree", poly_file(tmp_path, SQUARE_VERTS, [0, 2], 0, 2))
        assert code == 0 and json.loads(out)["edges"] == [[0, 1]]

    def test_bad_index_exit_2(self, tmp_path, capsys):
        code, _, err = run(capsys, "tree", poly_file(tmp_path, SQUARE_VERTS, [0, 9]))
        assert code == 2 and "a_indices" in err

    def test_clockwise_exit_2(self, tmp_path, capsys):
        code, _, err = run(capsys, "tree", poly_file(tmp_path, SQUARE_VERTS[::-1]))
        assert code == 2 and "counterclockwise" in err

    def test_reflex_mark_exit_2(self, tmp_path, capsys):
        code, _, _ = run(capsys, "tree", poly_file(tmp_path, L_VERTS, list(range(6)), 3, 0))
        assert code == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(capsys, "tree", str(tmp_path / "nope.json"))[0] == 2

    def test_svg(self, tmp_path, capsys):
        svg = tmp_path / "t.svg"
        run(capsys, "tree", poly_file(tmp_path, L_VERTS), "--svg", str(svg), "--json", str(tmp_path / "r.json"))
        assert svg.read_text().startswith("<?xml") and 'version="1.1"' in svg.read_text()


class TestEncompassCommand:
    def test_one_segment(self, tmp_path, capsys):
        code, out, _ = run(capsys, "encompass", seg_file(tmp_path, [((0, 0), (1, 1))]))
        assert code == 0 and json.loads(out)["edges"] == [[0, 1]]

    def test_deterministic(self, tmp_path, capsys):
        run(capsys, "gen-segments", "5", "--seed", "4", "--json", str(tmp_path / "s.json"))
        _, a, _ = run(capsys, "encompass", str(tmp_path / "s.json"))
        _, b, _ = run(capsys, "encompass", str(tmp_path / "s.json"))
        assert a == b and a

    def test_collinear_rejected(self, tmp_path, capsys):
        code, _, err = run(capsys, "encompass", seg_file(tmp_path, [((0, 0), (1, 1)), ((2, 2), (3, 0))]))
        assert code == 2 and "collinear endpoints" in err and "(2, 2)" in err

    def test_retry_cap_exit_1(self, tmp_path, capsys):
        f = seg_file(tmp_path, [((0, 10), (20, 11)), ((10, 8), (11, 5))])
        code, _, err = run(capsys, "encompass", f, "--epsilon", "1000", "--max-retries", "1")
        assert code == 1 and "attempts" in err

    def test_trace_recorded(self, tmp_path, capsys):
        f = seg_file(tmp_path, [((0, 10), (20, 11)), ((10, 8), (11, 5))])
        _, out, _ = run(capsys, "encompass", f, "--epsilon", "1000")
        tr = json.loads(out)["trace"]
        assert tr["retries"] > 0 and tr["extension_order"] == [0, 1]

    def test_nonpositive_margin(self, tmp_path, capsys):
        assert run(capsys, "encompass", seg_file(tmp_path, [((0, 0), (1, 1))]), "--margin", "-1")[0] == 2


class TestVerifyCommand:
    def _poly_pair(self, tmp_path, capsys):
        inst = tmp_path / "p.json"
        res = tmp_path / "r.json"
        run(capsys, "gen-polygon", "20", "--seed", "3", "--json", str(inst))
        run(capsys, "tree", str(inst), "--json", str(res))
        return inst, res

    def test_valid_pair(self, tmp_path, capsys):
        inst, res = self._poly_pair(tmp_path, capsys)
        code, out, _ = run(capsys, "verify", str(res), str(inst))
        assert code == 0 and "FAIL" not in out

    def test_cycle_introduced(self, tmp_path, capsys):
        inst, res = self._poly_pair(tmp_path, capsys)
        d = json.loads(res.read_text())
        used = {tuple(e) for e in d["edges"]}
        n = len(d["points"])
        extra = next([i, j] for i in range(n) for j in range(i + 1, n) if (i, j) not in used)
        d["edges"].append(extra)
        res.write_text(json.dumps(d))
        code, out, _ = run(capsys, "verify", str(res), str(inst))
        assert code == 1 and "cycle" in out

    def test_coordinates_tampered(self, tmp_path, capsys):
        inst = poly_file(tmp_path, L_VERTS, name="L.json")
        res = tmp_path / "r.json"
        run(capsys, "tree", inst, "--json", str(res))
        d = json.loads(res.read_text())
        # move the reflex corner out to (3, 3): edges to it leave the polygon
        k = d["points"].index(["1", "1"])
        d["points"][k] = ["3", "3"]
        res.write_text(json.dumps(d))
        code, out, _ = run(capsys, "verify", str(res), inst)
        assert code == 1 and "FAIL" in out

    def test_segments_pair(self, tmp_path, capsys):
        inst = tmp_path / "s.json"
        res = tmp_path / "r.json"
        run(capsys, "gen-segments", "8", "--seed", "1", "--json", str(inst))
        assert run(capsys, "encompass", str(inst), "--json", str(res))[0] == 0
        assert run(capsys, "verify", str(res), str(inst))[0] == 0

    def test_kind_mismatch(self, tmp_path, capsys):
        inst, res = self._poly_pair(tmp_path, capsys)
        segs = seg_file(tmp_path, [((0, 0), (1, 1))])
        assert run(capsys, "verify", str(res), segs)[0] == 2


class TestGenerateCommands:
    @pytest.mark.parametrize("argv", [["gen-tight", "3"], ["gen-polygon", "12", "--seed", "2"], ["gen-segments", "6", "--seed", "2"]])
    def test_byte_identical(self, capsys, argv):
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b
        instance_from_dict(loads(a))
