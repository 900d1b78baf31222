import importlib.util
from pathlib import Path

import pytest

from essentree import _kernel

BENCH = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernel.py"


@pytest.mark.skipif(_kernel.BACKEND != "cython", reason="compiled kernel not built")
def test_benchmark_runs(capsys):
    spec = importlib.util.spec_from_file_location("bench_kernel", BENCH)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    assert mod.main(["--repeat", "1", "--vars", "3"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("case")
    assert "chain n=3" in out
