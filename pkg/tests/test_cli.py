import json
from pathlib import Path

import pytest

from circlerig import cli
from circlerig.circle_maps import Moebius, MoebiusTransform, Rotation, homeo_to_json
from circlerig.euler import flip_rep, rotation_rep

GOLDEN = Path(__file__).parent / "golden"


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = cli.main([*argv, "--out", str(out)])
    return code, out.read_text()


@pytest.fixture(scope="module")
def rep_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("reps") / "surface2.json"
    assert cli.main(["fuchsian", "build", "--kind", "surface", "--genus", "2", "--out", str(path)]) == 0
    return path


# -- golden reports for the two worked covers

@pytest.mark.parametrize("name,argv", [
    ("verify_cover_334.json", ["verify-cover", "--shipped", "334"]),
    ("verify_cover_2222g_2.json", ["verify-cover", "--shipped", "2222g", "--genus", "2"]),
])
def test_golden_reports(tmp_path, name, argv):
    code, text = run(tmp_path, *argv)
    assert code == 0
    assert text == (GOLDEN / name).read_text()
    report = json.loads(text)
    assert cli.validate_report(report) == []
    genus = next(c for c in report["checks"] if c["name"] == "kernel_genus")["values"]["genus"]
    assert genus == {"cert": "exact", "value": "2", "source": "computed"}


def test_reports_are_deterministic(tmp_path, rep_file):
    a = run(tmp_path, "denjoy", "check", "--a", str(rep_file), "--b", str(rep_file), "--samples", "40")
    b = run(tmp_path, "denjoy", "check", "--a", str(rep_file), "--b", str(rep_file), "--samples", "40")
    assert a == b and a[0] == 0


# -- commands

def test_euler_standard_and_abelian(tmp_path, rep_file):
    code, text = run(tmp_path, "euler", "--rep", str(rep_file))
    rep = json.loads(text)
    assert code == 0 and rep["data"]["maximal"] is True
    eu = next(c for c in rep["checks"] if c["name"] == "euler_relator")["values"]["eu"]
    assert eu["value"] in ("2", "-2")
    ab = tmp_path / "abelian.json"
    ab.write_text(json.dumps(rotation_rep(2, [0.1, 0.3, 0.77, 0.5]).to_json()))
    code, text = run(tmp_path, "euler", "--rep", str(ab))
    eu = next(c for c in json.loads(text)["checks"] if c["name"] == "euler_relator")["values"]["eu"]
    assert code == 0 and eu["value"] == "0"


def test_euler_method_disagreement_exits_nonzero(tmp_path, rep_file, monkeypatch):
    from circlerig import euler
    real = euler.euler_pants

    def off_by_one(*a, **k):
        e = real(*a, **k)
        return euler.EulerNumber(e.value.shift(1), e.isolated + 1, e.method, e.iters)
    monkeypatch.setattr(euler, "euler_pants", off_by_one)
    code, text = run(tmp_path, "euler", "--rep", str(rep_file))
    assert code == cli.EXIT_CHECK and not json.loads(text)["passed"]


def test_rot_examples(tmp_path):
    maps = tmp_path / "maps.json"
    maps.write_text(json.dumps({"r": homeo_to_json(Rotation(1 / 3)),
                                "h": homeo_to_json(Moebius(MoebiusTransform(2, 0, 0, 0.5)))}))
    code, text = run(tmp_path, "rot", "--rep", str(maps))
    rows = {c["name"]: c["values"] for c in json.loads(text)["checks"]}
    assert code == 0
    assert rows["rot h"]["rotation"] == {"cert": "exact", "value": "0", "source": "computed"}
    r = rows["rot r"]["rotation"]
    assert float(r["lo"]) <= 1 / 3 <= float(r["hi"])


def test_rot_cone_point(tmp_path):
    path = tmp_path / "orb.json"
    assert cli.main(["fuchsian", "build", "--kind", "2222g", "--genus", "2", "--out", str(path)]) == 0
    code, text = run(tmp_path, "rot", "--rep", str(path))
    rows = {c["name"]: c["values"] for c in json.loads(text)["checks"]}
    assert code == 0 and rows["rot d"]["finite_order"]["value"] in ("1/4", "3/4")


def test_orbifold_chi(tmp_path):
    code, text = run(tmp_path, "orbifold-chi", "0;3,3,4")
    assert code == 0 and "-1/12" in text


def test_denjoy_flipped_fails(tmp_path, rep_file):
    flipped = tmp_path / "flipped.json"
    flipped.write_text(json.dumps(flip_rep(cli.load_rep(str(rep_file))).to_json()))
    code, text = run(tmp_path, "denjoy", "check", "--a", str(rep_file), "--b", str(flipped), "--samples", "30")
    assert code == cli.EXIT_CHECK


def test_corrupted_hom_fails(tmp_path):
    hom = tmp_path / "hom.json"
    from circlerig.presentations import hom_334
    obj = hom_334().to_json()
    first = next(iter(obj["images"]))
    obj["images"][first] = obj["images"][next(iter(list(obj["images"])[1:]))]
    hom.write_text(json.dumps(obj))
    code, _ = run(tmp_path, "verify-cover", "--signature", "0;3,3,4", "--hom", str(hom))
    assert code == cli.EXIT_CHECK


# -- input handling

def test_malformed_json_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"signature":\n  [1, }')
    code = cli.main(["euler", "--rep", str(bad)])
    assert code == cli.EXIT_INPUT
    assert f"{bad}:2:" in capsys.readouterr().err


def test_missing_file_is_input_error(tmp_path):
    assert cli.main(["euler", "--rep", str(tmp_path / "nope.json"), "--out", str(tmp_path / "r.json")]) == 2


def test_toml_config_and_override(tmp_path, rep_file):
    conf = tmp_path / "run.toml"
    conf.write_text("iters = 2000\nseed = 4\n")
    args = cli.build_parser().parse_args(["euler", "--rep", str(rep_file), "--config", str(conf), "--seed", "9"])
    cfg = cli.make_config(args)
    assert cfg.iters == 2000 and cfg.seed == 9


def test_schema_rejects_bare_numbers(tmp_path):
    code, text = run(tmp_path, "orbifold-chi", "0;2,2,2,4")
    report = json.loads(text)
    assert cli.validate_report(report) == []
    report["checks"][0]["values"] = {"chi": -0.25}
    assert cli.validate_report(report)
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(report))
    assert cli.main(["report", "validate", str(path), "--out", str(tmp_path / "v.json")]) == cli.EXIT_CHECK
