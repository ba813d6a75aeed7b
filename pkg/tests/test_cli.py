from __future__ import annotations

import json
import math

import numpy as np
import pytest

from privamp.cli import (
    EXIT_BUDGET,
    EXIT_OK,
    EXIT_VALIDATION,
    load_state_file,
    main,
)
from privamp import CQState, StateDescriptor


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def rho_path(tmp_path):
    return write_json(
        tmp_path / "rho.json",
        {"kind": "density", "dim": 2, "entries": [[0.5, 0.0], [0.0, 0.5]]},
    )


@pytest.fixture
def sigma_path(tmp_path):
    return write_json(
        tmp_path / "sigma.json",
        {"kind": "density", "dim": 2, "entries": [[0.25, 0.0], [0.0, 0.75]]},
    )


@pytest.fixture
def cq_path(tmp_path):
    return write_json(
        tmp_path / "cq.json",
        {
            "kind": "cq",
            "dim": 2,
            "probs": [0.2, 0.5, 0.3],
            "conditionals": [
                [[0.7, 0.1], [0.1, 0.3]],
                [[0.5, 0.0], [0.0, 0.5]],
                [[0.2, -0.1], [-0.1, 0.8]],
            ],
        },
    )


def run_json(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_load_state_file_density_forms(tmp_path):
    flat = write_json(
        tmp_path / "flat.json",
        {"kind": "density", "dim": 2, "entries": [[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]]},
    )
    nested = write_json(
        tmp_path / "nested.json",
        {"kind": "density", "dim": 2, "entries": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]},
    )
    plain = write_json(
        tmp_path / "plain.json",
        {"kind": "density", "dim": 2, "entries": [[0.5, 0.0], [0.0, 0.5]]},
    )
    for p in (flat, nested, plain):
        st = load_state_file(p)
        assert isinstance(st, StateDescriptor)
        assert np.max(np.abs(st.mat - np.diag([0.5, 0.5]))) <= 1e-12


def test_load_state_file_complex_entries(tmp_path):
    p = write_json(
        tmp_path / "cplx.json",
        {
            "kind": "density",
            "dim": 2,
            "entries": [[[0.5, 0.0], [0.0, -0.25]], [[0.0, 0.25], [0.5, 0.0]]],
        },
    )
    st = load_state_file(p)
    assert abs(st.mat[0, 1] - (-0.25j)) <= 1e-12


def test_load_state_file_cq(tmp_path, cq_path):
    cq = load_state_file(cq_path)
    assert isinstance(cq, CQState)
    assert cq.nsymbols == 3 and cq.dim_e == 2


def test_load_state_file_errors(tmp_path):
    from privamp.cli import ValidationError

    missing = str(tmp_path / "missing.json")
    with pytest.raises(ValidationError):
        load_state_file(missing)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError):
        load_state_file(str(bad))
    nokind = write_json(tmp_path / "nokind.json", {"dim": 2})
    with pytest.raises(ValidationError):
        load_state_file(nokind)
    shape = write_json(
        tmp_path / "shape.json", {"kind": "density", "dim": 2, "entries": [[1.0]]}
    )
    with pytest.raises(ValidationError):
        load_state_file(shape)


def test_measure_document_shape(rho_path, sigma_path, capsys):
    code, doc = run_json(
        ["measure", rho_path, sigma_path, "--divergence", "relative"], capsys
    )
    assert code == EXIT_OK
    assert doc["artifact"]["name"] == "privamp"
    assert doc["command"] == "measure"
    assert set(doc["config"]) == {"seed", "s_max", "budget", "format", "tolerances"}
    assert "threads" not in doc["config"]
    assert doc["inputs"][rho_path].startswith("sha256:")
    assert abs(doc["results"]["value"] - 0.20751874963942196) <= 1e-12


def test_measure_infinite_value_serializes_as_string(tmp_path, capsys):
    rho = write_json(
        tmp_path / "pure.json", {"kind": "density", "dim": 2, "entries": [[1.0, 0.0], [0.0, 0.0]]}
    )
    sig = write_json(
        tmp_path / "orth.json", {"kind": "density", "dim": 2, "entries": [[0.0, 0.0], [0.0, 1.0]]}
    )
    code, doc = run_json(["measure", rho, sig, "--divergence", "dmax"], capsys)
    assert code == EXIT_OK
    assert doc["results"]["value"] == "inf"


def test_measure_validation_exit_codes(rho_path, capsys):
    assert main(["measure", rho_path, "--divergence", "renyi", "--alpha", "2"]) == EXIT_VALIDATION
    capsys.readouterr()
    assert (
        main(["measure", rho_path, rho_path, "--divergence", "renyi", "--alpha", "1.0"])
        == EXIT_VALIDATION
    )
    capsys.readouterr()
    assert main(["measure", rho_path, rho_path, "--divergence", "renyi"]) == EXIT_VALIDATION


def test_tolerance_overrides(rho_path, sigma_path, capsys):
    code, doc = run_json(
        [
            "measure",
            rho_path,
            sigma_path,
            "--divergence",
            "relative",
            "--tol",
            "cluster=1e-7",
        ],
        capsys,
    )
    assert code == EXIT_OK
    assert doc["config"]["tolerances"]["cluster"] == 1e-7
    assert main(["measure", rho_path, sigma_path, "--divergence", "relative", "--tol", "junk"]) == EXIT_VALIDATION
    capsys.readouterr()
    assert (
        main(["measure", rho_path, sigma_path, "--divergence", "relative", "--tol", "nope=1"])
        == EXIT_VALIDATION
    )


def test_exponent_curve_csv(cq_path, capsys):
    code = main(
        [
            "exponent-curve",
            cq_path,
            "--r-min",
            "0.9",
            "--r-max",
            "1.3",
            "--points",
            "3",
            "--format",
            "csv",
        ]
    )
    out = capsys.readouterr().out
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    header = [l for l in lines if not l.startswith("#")]
    assert header[0].split(",")[0] == "r"
    assert len(header) == 4


def test_smooth_iid_rows(rho_path, sigma_path, capsys):
    code, doc = run_json(
        ["smooth", rho_path, sigma_path, "--rate", "0.6", "--n-min", "1", "--n-max", "4"],
        capsys,
    )
    assert code == EXIT_OK
    rows = doc["rows"]
    assert [r["n"] for r in rows] == [1, 2, 3, 4]
    for r in rows:
        lower = 0.0 if r["lower"] == 0 else float(r["lower"])
        assert lower <= float(r["exact"]) + 1e-9
        assert float(r["exact"]) <= float(r["upper"]) + 1e-9


def test_smooth_requires_exactly_one_mode(rho_path, sigma_path, capsys):
    assert main(["smooth", rho_path, sigma_path]) == EXIT_VALIDATION
    capsys.readouterr()
    assert (
        main(["smooth", rho_path, sigma_path, "--rate", "0.5", "--lam", "1.0"])
        == EXIT_VALIDATION
    )


def test_pa_search_budget_exit(cq_path, capsys):
    code = main(
        ["pa-search", cq_path, "--range-size", "2", "--measure", "trace_distance", "--budget", "4"]
    )
    assert code == EXIT_BUDGET


def test_pa_search_threads_byte_identical(cq_path, tmp_path, capsys):
    outs = []
    for t in ("1", "4", "8"):
        out = tmp_path / f"search_{t}.json"
        code = main(
            [
                "pa-search",
                cq_path,
                "--range-size",
                "2",
                "--measure",
                "renyi",
                "--s",
                "1.0",
                "--threads",
                t,
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_pa_family_monte_carlo_threads_byte_identical(cq_path, tmp_path, capsys):
    outs = []
    for t in ("1", "4", "8"):
        out = tmp_path / f"fam_{t}.json"
        code = main(
            [
                "pa-family",
                cq_path,
                "--family",
                "all_functions",
                "--range-size",
                "2",
                "--measure",
                "purified_distance",
                "--sampling",
                "monte_carlo",
                "--count",
                "500",
                "--seed",
                "11",
                "--threads",
                t,
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_pa_family_requires_matching_options(cq_path, capsys):
    assert (
        main(["pa-family", cq_path, "--family", "all_functions", "--measure", "renyi", "--s", "1"])
        == EXIT_VALIDATION
    )
    capsys.readouterr()
    assert (
        main(["pa-family", cq_path, "--family", "affine_prime", "--measure", "renyi", "--s", "1"])
        == EXIT_VALIDATION
    )


def test_suite_example2_passes(capsys):
    code, doc = run_json(
        ["suite", "example2", "--n", "1", "--realizations", "5", "--seed", "1"], capsys
    )
    assert code == EXIT_OK
    assert doc["results"]["passed"] is True
    assert doc["results"]["exponent_marker"] == "inf"


def test_csv_format_flattens_headers(rho_path, sigma_path, capsys):
    code = main(
        ["measure", rho_path, sigma_path, "--divergence", "fidelity", "--format", "csv"]
    )
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "# results.value=0.965925826289" in out
    assert "np." not in out
