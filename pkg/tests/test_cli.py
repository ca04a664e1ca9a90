"""End-to-end runs of the command-line front end (in-process)."""

import numpy as np
import pytest

from maxdtn.cli import main


def write_cfg(tmp_path, extra=""):
    p = tmp_path / "run.ini"
    p.write_text("[run]\nnpoints = 60\nseed = 3\n" + extra)
    return str(p)


def test_identities_pass(tmp_path):
    cfg = write_cfg(tmp_path)
    rc = main(["identities", "--config", cfg, "--output-dir", str(tmp_path)])
    assert rc == 0
    out = tmp_path / "identities.csv"
    text = out.read_text()
    assert text.startswith("# maxdtn report\n")
    assert "# npoints = 60\n" in text
    assert "cross-system-trace" in text and "FAIL" not in text


def test_identities_deterministic(tmp_path):
    cfg = write_cfg(tmp_path)
    argv = ["identities", "--config", cfg, "--output-dir", str(tmp_path)]
    assert main(argv) == 0
    first = (tmp_path / "identities.csv").read_bytes()
    assert main(argv) == 0
    assert (tmp_path / "identities.csv").read_bytes() == first


def test_identities_fault_hook_fails(tmp_path):
    cfg = write_cfg(tmp_path)
    rc = main(["identities", "--config", cfg, "--output-dir", str(tmp_path),
               "--fault-gamma", "1e-3"])
    assert rc == 1
    text = (tmp_path / "identities.csv").read_text()
    assert "FAIL" in text


def test_unknown_config_key(tmp_path):
    cfg = write_cfg(tmp_path, "bogus = 1\n")
    assert main(["identities", "--config", cfg]) == 2


def test_invalid_config_value(tmp_path):
    cfg = write_cfg(tmp_path, "eps = -2.0\n")
    assert main(["identities", "--config", cfg]) == 2


def test_eikonal_command(tmp_path):
    cfg = write_cfg(tmp_path, "n = 4\n")
    rc = main(["eikonal", "--config", cfg, "--output-dir", str(tmp_path)])
    assert rc == 0
    text = (tmp_path / "eikonal.csv").read_text()
    assert "flat" in text and "FAIL" not in text


def test_residual_command(tmp_path):
    cfg = write_cfg(tmp_path, "n = 2\nj = 1\n")
    rc = main(["residual", "--config", cfg, "--output-dir", str(tmp_path)])
    assert rc == 0
    text = (tmp_path / "residual.csv").read_text()
    assert "fitted x1 slope" in text


def test_te_scan_certified(tmp_path):
    cfg = write_cfg(tmp_path,
                    "eps = 4.0\neps2 = 1.0\nmu2 = 1.0\n"
                    "ell_max = 2\nre_max = 8.0\nregion_c = 2.0\ncertify = true\n")
    rc = main(["te-scan", "--config", cfg, "--output-dir", str(tmp_path)])
    assert rc == 0
    text = (tmp_path / "te_scan.csv").read_text()
    assert "region free = True" in text
