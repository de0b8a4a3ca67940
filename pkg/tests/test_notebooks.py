import os
import runpy
from pathlib import Path

import pytest

pytest.importorskip("matplotlib")

NOTEBOOKS = sorted((Path(__file__).parents[1] / "notebooks").glob("plot_*.py"))


@pytest.mark.parametrize("path", NOTEBOOKS, ids=lambda p: p.stem)
def test_notebook_runs(path, monkeypatch):
    monkeypatch.setenv("MPLBACKEND", "Agg")
    import matplotlib.pyplot as plt

    plt.switch_backend("Agg")
    runpy.run_path(str(path), run_name="__main__")
    plt.close("all")


def test_notebooks_found():
    assert len(NOTEBOOKS) >= 3 and all(os.path.getsize(p) for p in NOTEBOOKS)
