import logging

from src.config import Tolerances, golden_tolerance, load_tolerances


def test_loads_sections(tmp_path):
    path = tmp_path / "tol.yaml"
    path.write_text("algebra:\n  root_cluster: 1.0e-6\ninverse:\n  quadrature_nodes: 500\ngolden:\n  tolerance: 1.0e-5\n")
    tol = load_tolerances(str(path))
    assert tol.root_cluster == 1e-6
    assert tol.quadrature_nodes == 500
    assert isinstance(tol.quadrature_nodes, int)
    assert tol.golden == 1e-5
    assert tol.pivot == Tolerances().pivot


def test_unknown_key_warns(tmp_path, caplog):
    path = tmp_path / "tol.yaml"
    path.write_text("forward:\n  not_a_setting: 3\n")
    with caplog.at_level(logging.WARNING):
        tol = load_tolerances(str(path))
    assert tol == Tolerances()
    assert "not_a_setting" in caplog.text


def test_missing_file_gives_defaults(tmp_path):
    assert load_tolerances(str(tmp_path / "absent.yaml")) == Tolerances()


def test_golden_override(monkeypatch):
    monkeypatch.delenv("LATTICE_IST_TOL", raising=False)
    assert golden_tolerance(Tolerances(golden=1e-7)) == 1e-7
    monkeypatch.setenv("LATTICE_IST_TOL", "1e-3")
    assert golden_tolerance() == 1e-3


def test_shipped_file_matches_defaults():
    assert load_tolerances() == Tolerances()
