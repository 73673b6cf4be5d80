import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

GOLDEN = Path(__file__).parent / "golden"


def primary_cli(*args) -> None:
    """Drive the installed primary package through its CLI."""
    cmd = [sys.executable, "-m", "xeblab.cli", *args]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(cmd)} failed:\n{proc.stderr}")


@pytest.fixture(scope="session")
def fig1_csv(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("csv") / "fig1.csv"
    primary_cli(
        "fig1", "--n", "4", "--depth", "5,6,7,8", "--instances", "4",
        "--seed", "11", "--out", str(out),
    )
    return out


@pytest.fixture(scope="session")
def fig2_csv(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("csv") / "fig2.csv"
    primary_cli(
        "fig2", "--n", "16", "--depth", "4", "--instances", "4",
        "--seed", "11", "--out", str(out),
    )
    return out


@pytest.fixture(scope="session")
def pt_csv(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("csv") / "pt.csv"
    primary_cli(
        "porter-thomas", "--n", "6", "--depth", "10", "--instances", "150",
        "--seed", "11", "--out", str(out),
    )
    return out
