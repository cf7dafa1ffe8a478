import io
import json

import pytest

from artifact.cli import dispatch

EX1 = {"splitting": [0, 0], "points": ["0", "1", "2", "3", "4"],
       "directions": [["1", "0"], ["0", "1"], ["1", "1"], ["1", "3"], ["1", "4"]]}


@pytest.fixture
def files(tmp_path):
    def put(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data) if not isinstance(data, str) else data)
        return str(p)
    return {
        "AF5": put("AF5.json", {"n": 5, "weights": ["1/2"] * 5}),
        "AF6": put("AF6.json", {"n": 6, "weights": ["1/2"] * 6}),
        "EPS6": put("eps6.json", {"n": 6, "weights": ["2/3"] + ["1/3"] * 5}),
        "ex1": put("ex1.json", EX1),
        "line": put("line.json", {"e": 0, "f": ["1"], "g": [], "incidences": [1]}),
        "badline": put("badline.json", {"e": 0, "f": ["1"], "g": [], "incidences": [2]}),
        "broken": put("broken.json", "{not json"),
        "odd": put("odd.json", {"n": 5, "weights": ["1"] + ["0"] * 4}),
    }


def run(*argv):
    out = io.StringIO()
    code = dispatch(list(argv), out)
    text = out.getvalue()
    return code, text


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_admissible_central(files):
    code, out = run_json("admissible", "--weights", files["AF6"])
    assert code == 0
    assert out["rank"] == 5 and out["order"] == 32 and len(out["elements"]) == 32


def test_admissible_epsilon(files):
    code, out = run_json("admissible", "--weights", files["EPS6"])
    assert (code, out["rank"], out["elements"]) == (0, 0, [[]])


def test_stability_example(files):
    code, out = run_json("stability", "--bundle", files["ex1"], "--weights", files["AF5"])
    assert code == 0
    assert (out["verdict"], out["mu"], out["max_line_slope"]) == ("stable", "5/4", "1/2")
    assert out["witness"] == {"e": 0, "f": ["1"], "g": [], "incidences": [1]}


def test_transform_example(files):
    code, out = run_json("transform", "--bundle", files["ex1"], "--subset", "1,2", "--line", files["line"])
    assert code == 0
    assert out["kernel_splitting"] == [-1, -1] and out["r"] == 2
    assert out["bundle"]["splitting"] == [0, 0]
    assert out["bundle"]["directions"] == [["0", "1"], ["1", "0"], ["1", "1/2"], ["1", "2"], ["1", "3"]]
    assert out["transition"] == [[["-1", "1"], []], [[], ["0", "1"]]]
    assert out["line"] == {"e": 0, "f": ["1"], "g": [], "incidences": [2]}


def test_polytope_and_chamber(files):
    code, out = run_json("polytope", "--weights", files["EPS6"], "--subset", "2,3,4")
    assert code == 0 and out["in_pi_interior"] and out["H"]["value"] == "10/3"
    code, out = run_json("chamber", "--weights", files["AF6"], "--compare", files["EPS6"])
    assert code == 0 and out["zeros"] == 16 and out["same_chamber"] is False
    code, out = run_json("polytope", "--weights", files["odd"], "--all-h")
    assert code == 0 and not out["in_delta"] and len(out["h_values"]) == 32


@pytest.mark.parametrize("argv", [
    ["admissible"],
    ["admissible", "--weights", "/nonexistent.json"],
    ["admissible", "--weights", "{broken}"],
    ["chamber", "--weights", "{odd}"],
    ["transform", "--bundle", "{ex1}", "--subset", "1,2,3"],
    ["transform", "--bundle", "{ex1}", "--subset", "1,2", "--line", "{badline}"],
    ["polytope", "--weights", "{AF5}", "--format", "csv"],
    ["frobnicate"],
    ["--seed", "-1", "survey", "--n", "5"],
    ["survey", "--n", "4", "--samples", "3"],
    [],
])
def test_validation_errors_exit_2(files, argv):
    argv = [a.format(**files) if a.startswith("{") else a for a in argv]
    code, out = run_json(*argv)
    assert code == 2
    assert out["error"]["type"] == "validation"


def test_identical_runs_are_byte_identical(files):
    for argv in (["stability", "--bundle", files["ex1"], "--weights", files["AF5"]],
                 ["--seed", "11", "survey", "--n", "6", "--samples", "40"],
                 ["--seed", "3", "propcheck", "--n", "5", "--trials", "4"]):
        assert run(*argv) == run(*argv)


def test_survey_csv_and_seed_dependence():
    code, text = run("--format", "csv", "--seed", "5", "survey", "--n", "6", "--samples", "30")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "n,rank,count"
    assert sum(int(line.split(",")[2]) for line in lines[1:]) == 30
    _, a = run_json("--seed", "5", "survey", "--n", "6", "--samples", "30")
    _, b = run_json("--seed", "6", "survey", "--n", "6", "--samples", "30")
    assert a["histogram"] != b["histogram"] or a["representatives"] != b["representatives"]
    assert set(a["representative_sub_seeds"]) == set(a["histogram"])


def test_propcheck_passes():
    code, out = run_json("--seed", "9", "propcheck", "--n", "6", "--trials", "5")
    assert code == 0 and out["ok"]
    assert out["checks"]["wall_flip"]["passed"] == 5


def test_verify_negative_control():
    code, out = run_json("verify", "--n", "5", "--inject-fault", "C1")
    assert code == 1
    assert out["failed"] == ["C1"]
    assert not out["all_passed"]


def test_verify_rejects_out_of_range_n():
    code, out = run_json("verify", "--n", "11")
    assert code == 2
