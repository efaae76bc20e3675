import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltascatter import cli, specfun
from deltascatter.amplitude import closed_form_single
from deltascatter.errors import SceneParseError
from deltascatter.model import DirectionPair
from deltascatter.scene_io import loads_scene, scene_from_dict, scene_to_dict


def write_scene(tmp_path, dimension=2, k=1.0, form="dfss", scatterers=(((0, 0), (1, 0)),),
                name="scene.json", constants=None):
    doc = {
        "dimension": dimension,
        "k": k,
        "formulation": form,
        "scatterers": [{"position": list(p), "coupling": {"re": z[0], "im": z[1]}}
                       for p, z in scatterers],
    }
    if constants is not None:
        doc["subtraction_constants"] = constants
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(argv, **kw):
    out = io.StringIO()
    code = cli.main(argv, stdout=out, **kw)
    return code, out.getvalue()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


PAIR = (((0, 0), (1.0, 0.2)), ((0, 0.8), (2.0, -0.1)))


def test_amplitude_single_matches_closed_form(tmp_path):
    scene = write_scene(tmp_path, scatterers=(((0, 0), (1.5, 0.5)),))
    code, out = run(["amplitude", "--scene", scene, "--theta0", "0", "--theta", str(math.pi / 4)])
    assert code == 0
    doc = json.loads(out)
    f = complex(doc["f"]["re"], doc["f"]["im"])
    ref = closed_form_single(2, "dfss", 1.5 + 0.5j, (0, 0), 1.0, DirectionPair(0, math.pi / 4)).f
    assert abs(f - ref) <= 1e-12 * abs(ref)
    assert doc["dcs"] == pytest.approx(abs(ref) ** 2, rel=1e-12)
    assert set(doc["diagnostics"]) == {"condition_estimate", "singular"}


def test_amplitude_spectral_singularity(tmp_path, capsys):
    scene = write_scene(tmp_path, scatterers=(((0, 0), (0, 4)),))
    code, _ = run(["amplitude", "--scene", scene])
    assert code == cli.EXIT_SPECTRAL
    assert "SpectralSingularity" in capsys.readouterr().err


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"dimension": 2,\n  "k": 1,,\n}')
    code, _ = run(["amplitude", "--scene", str(path)])
    assert code == cli.EXIT_INPUT
    err = capsys.readouterr().err
    assert "SceneParseError" in err and "line 2" in err and "column" in err


def test_field_error_path():
    doc = {"dimension": 2, "k": 1, "scatterers": [
        {"position": [0, 0], "coupling": 1}, {"position": [0, 1], "coupling": {"re": "x"}}]}
    with pytest.raises(SceneParseError) as info:
        scene_from_dict(doc)
    assert info.value.where == "scatterers[1].coupling.re"
    with pytest.raises(SceneParseError) as info:
        loads_scene('{"dimension": 4, "k": 1, "scatterers": []}')
    assert info.value.where == "dimension"


def test_validation_error_is_input_error(tmp_path, capsys):
    scene = write_scene(tmp_path, k=-1.0)
    assert run(["amplitude", "--scene", scene])[0] == cli.EXIT_INPUT
    assert "NonPositiveWavenumber" in capsys.readouterr().err


def test_coincident_standard_pair_is_kernel_error(tmp_path):
    scene = write_scene(tmp_path, form="standard", scatterers=(((0, 0), (1, 0)), ((0, 0), (1, 0))))
    assert run(["amplitude", "--scene", scene])[0] == cli.EXIT_KERNEL
    scene = write_scene(tmp_path, form="standard",
                        scatterers=(((0, 0), (1, 0)), ((0, 1e-14), (1, 0))), name="near.json")
    assert run(["amplitude", "--scene", scene])[0] == cli.EXIT_KERNEL


def test_missing_scene_file():
    assert run(["amplitude", "--scene", "/nonexistent/scene.json"])[0] == cli.EXIT_INPUT


def test_bad_arguments():
    assert run(["amplitude"])[0] == cli.EXIT_INPUT
    assert run(["frobnicate"])[0] == cli.EXIT_INPUT


def test_sweep_single_is_isotropic(tmp_path):
    scene = write_scene(tmp_path, scatterers=(((0, 0), (1, 1)),))
    out = tmp_path / "sweep.csv"
    code, _ = run(["sweep", "--scene", scene, "--grid", "0:6.283185307179586:37",
                   "--out", str(out)])
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["param", "re_f", "im_f", "abs_f", "dcs", "flag"]
    assert len(rows) == 37
    values = [float(r["abs_f"]) for r in rows]
    assert max(values) - min(values) <= 1e-15


def test_sweep_csv_round_trip(tmp_path):
    scene = write_scene(tmp_path, scatterers=PAIR)
    out = tmp_path / "sweep.csv"
    run(["sweep", "--scene", scene, "--variable", "incident_angle", "--grid", "0:3:25",
         "--theta", "0.4", "--out", str(out)])
    for r in read_csv(out):
        re, im = float(r["re_f"]), float(r["im_f"])
        assert abs(re * re + im * im - float(r["dcs"])) <= 1e-12 * float(r["dcs"])


def test_separation_sweeps(tmp_path):
    dfss = write_scene(tmp_path, scatterers=PAIR)
    out = tmp_path / "sep.csv"
    assert run(["sweep", "--scene", dfss, "--variable", "separation", "--grid", "10:1e-6:29:log",
                "--theta0", "0.3", "--theta", "1.0", "--out", str(out)])[0] == 0
    rows = read_csv(out)
    tail = [complex(float(r["re_f"]), float(r["im_f"])) for r in rows[-8:]]
    steps = [abs(b - a) for a, b in zip(tail, tail[1:])]
    assert all(b < a for a, b in zip(steps, steps[1:]))
    std = write_scene(tmp_path, form="standard", scatterers=PAIR, name="std.json")
    run(["sweep", "--scene", std, "--variable", "separation", "--grid", "1e-2:1e-10:9:log",
         "--out", str(out)])
    tail = [float(r["abs_f"]) for r in read_csv(out)]
    assert all(b < a for a, b in zip(tail, tail[1:]))
    assert tail[-1] < 0.5 * tail[0]


def test_sweep_flags_singular_rows(tmp_path, capsys):
    std = write_scene(tmp_path, form="standard", scatterers=PAIR)
    out = tmp_path / "sep.csv"
    code, _ = run(["sweep", "--scene", std, "--variable", "separation", "--grid",
                   "1e-3:1e-14:3:log", "--out", str(out)])
    assert code == cli.EXIT_KERNEL
    rows = read_csv(out)
    assert len(rows) == 3
    assert rows[-1]["flag"] == "KernelSingularity" and rows[-1]["abs_f"] == "nan"
    assert rows[0]["flag"] == ""
    assert "KernelSingularity" in capsys.readouterr().err


def test_sweep_thread_count_does_not_change_output(tmp_path, monkeypatch):
    scene = write_scene(tmp_path, scatterers=PAIR)
    outputs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("DELTASCATTER_THREADS", threads)
        out = tmp_path / f"t{threads}.csv"
        run(["sweep", "--scene", scene, "--grid", "0:3:40", "--out", str(out)])
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    monkeypatch.setenv("DELTASCATTER_THREADS", "zero")
    assert run(["sweep", "--scene", scene, "--grid", "0:3:4", "--out", str(out)])[0] == 2


def test_compare_matched_couplings(tmp_path):
    scene = write_scene(tmp_path, scatterers=PAIR)
    code, out = run(["compare", "--scene", scene, "--theta0", "0.3", "--theta", "1.2"])
    assert code == 0
    doc = json.loads(out)
    assert {"standard", "dfss", "difference", "matched"} <= set(doc)
    assert doc["difference"]["abs"] > 1e-4
    assert doc["matched"]["relative_difference"] <= 1e-10
    assert len(doc["matched"]["couplings"]) == 2


def test_compare_coincident_pair(tmp_path):
    scene = write_scene(tmp_path, scatterers=(((0, 0), (1, 0)), ((0, 0), (2, 0))))
    code, out = run(["compare", "--scene", scene])
    assert code == 0
    doc = json.loads(out)
    assert doc["standard"]["error"] == "DuplicatePositionStandard"
    assert "f" in doc["dfss"]
    assert doc["difference"] is None


def test_compare_single(tmp_path):
    scene = write_scene(tmp_path, scatterers=(((0.3, 0.1), (1, 2)),))
    doc = json.loads(run(["compare", "--scene", scene, "--theta", "1"])[1])
    assert doc["difference"]["abs"] == 0.0
    assert doc["matched"]["couplings"] == [{"re": 1.0, "im": 2.0}]


def test_coincidence_command(tmp_path):
    scene = write_scene(tmp_path, scatterers=(((0, 0), (1, 0)), ((0, 1), (1, 0))))
    out = tmp_path / "c.csv"
    code, text = run(["coincidence", "--scene", scene, "--pair", "0,1", "--grid",
                      "1e-2:1e-6:5:log", "--theta0", "0.4", "--out", str(out)])
    assert code == 0
    summary = json.loads(text)
    assert {"reference", "last_rel_err", "fitted_rate"} <= set(summary)
    assert summary["last_rel_err"] <= 1e-4
    rows = read_csv(out)
    assert list(rows[0])[:7] == ["ell", "k_ell", "re_f", "im_f", "abs_f", "ref_abs_f", "rel_err"]
    ref = closed_form_single(2, "dfss", 2.0, (0, 0), 1.0, DirectionPair(0.4, 0.0)).f
    assert complex(summary["reference"]["re"], summary["reference"]["im"]) == pytest.approx(ref)


def test_coincidence_bad_pair(tmp_path):
    scene = write_scene(tmp_path, scatterers=PAIR)
    out = str(tmp_path / "c.csv")
    assert run(["coincidence", "--scene", scene, "--pair", "0,5", "--grid", "1e-2:1e-4:3:log",
                "--out", out])[0] == 2
    assert run(["coincidence", "--scene", scene, "--pair", "0,1", "--grid", "1e-4:1e-2:3:log",
                "--out", out])[0] == 2


def test_validate_passes_and_reports_disk():
    code, out = run(["validate"])
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"]
    assert "max_deviation" in doc["checks"]["disk_integral"]
    assert all(c["passed"] for c in doc["checks"].values())


def test_validate_fault_injection():
    code, out = run(["validate"], j0_hook=lambda x: specfun.bessel_j0(x) * (1 + 1e-8))
    assert code == cli.EXIT_VALIDATION
    doc = json.loads(out)
    assert not doc["checks"]["j0_check"]["passed"]
    assert doc["checks"]["y0_check"]["passed"]


def _two_row_csv(tmp_path, values=(1.0, 2.0)):
    path = tmp_path / "two.csv"
    path.write_text("param,re_f,im_f,abs_f,dcs,flag\n"
                    + "".join(f"{i},{v},0,{abs(v)},{v * v},\n" for i, v in enumerate(values)))
    return str(path)


def test_plot_two_rows(tmp_path):
    svg = tmp_path / "p.svg"
    assert run(["plot", "--csv", _two_row_csv(tmp_path), "--out", str(svg)])[0] == 0
    text = svg.read_text()
    assert text.count("<polyline") == 1
    points = text.split('points="')[1].split('"')[0].split()
    assert len(points) == 2


def test_plot_deterministic(tmp_path):
    csv_path = _two_row_csv(tmp_path, (0.5, 0.25))
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run(["plot", "--csv", csv_path, "--out", str(a), "--log-y"])
    run(["plot", "--csv", csv_path, "--out", str(b), "--log-y"])
    assert a.read_bytes() == b.read_bytes()


def test_plot_log_nonpositive(tmp_path, capsys):
    csv_path = _two_row_csv(tmp_path, (0.0, 1.0))
    assert run(["plot", "--csv", csv_path, "--out", str(tmp_path / "x.svg"), "--log-y"])[0] == 2
    assert "positive" in capsys.readouterr().err


def test_plot_unreadable(tmp_path):
    assert run(["plot", "--csv", str(tmp_path / "none.csv"), "--out", str(tmp_path / "x.svg")])[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert run(["plot", "--csv", str(bad), "--out", str(tmp_path / "x.svg")])[0] == 2


@pytest.mark.parametrize("text", ["1:2", "1:2:1", "0:1:5:log", "a:b:3", "1:2:3:cubic"])
def test_bad_grids(text):
    with pytest.raises(cli.InputError):
        cli.parse_grid(text)


@given(start=st.floats(1e-8, 1e3), stop=st.floats(1e-8, 1e3), count=st.integers(2, 200),
       log=st.booleans())
def test_grid_property(start, stop, count, log):
    grid = cli.parse_grid(f"{start!r}:{stop!r}:{count}" + (":log" if log else ""))
    assert len(grid) == count
    assert grid[0] == pytest.approx(start, rel=1e-12)
    assert grid[-1] == pytest.approx(stop, rel=1e-12)


finite = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(dim=st.sampled_from([2, 3]), k=st.floats(0.01, 10),
       data=st.lists(st.tuples(finite, finite, st.floats(0.1, 5)), min_size=1, max_size=4))
def test_scene_document_round_trip(dim, k, data):
    scatterers = [((x,) + (0.0,) * (dim - 1), complex(w, 0.5)) for x, _, w in data]
    xs = [s[0][0] for s in scatterers]
    if len(set(xs)) != len(xs):
        return
    doc = {"dimension": dim, "k": k, "formulation": "standard",
           "scatterers": [{"position": list(p), "coupling": {"re": z.real, "im": z.imag}}
                          for p, z in scatterers]}
    scene = scene_from_dict(doc)
    assert scene_from_dict(json.loads(json.dumps(scene_to_dict(scene)))) == scene


@settings(max_examples=30, deadline=None)
@given(theta0=st.floats(0, math.pi), theta=st.floats(0, 2 * math.pi),
       z=st.complex_numbers(min_magnitude=0.2, max_magnitude=5, allow_nan=False,
                            allow_infinity=False))
def test_amplitude_json_dcs_property(tmp_path_factory, theta0, theta, z):
    if abs(1 / z + 0.25j) < 1e-6:
        return
    path = write_scene(tmp_path_factory.mktemp("s"), scatterers=(((0, 0), (z.real, z.imag)),))
    code, out = run(["amplitude", "--scene", path, "--theta0", repr(theta0),
                     "--theta", repr(theta)])
    assert code == 0
    doc = json.loads(out)
    f = complex(doc["f"]["re"], doc["f"]["im"])
    assert abs(abs(f) ** 2 - doc["dcs"]) <= 1e-12 * doc["dcs"]
    assert np.isfinite(doc["diagnostics"]["condition_estimate"])
