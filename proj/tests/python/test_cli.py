"""End-to-end CLI checks: subcommands, exit codes, and byte-identical reruns.

The binary path comes from the KLMAT_BENCH environment variable (set by
ctest); run from the repository root so presets find the sunspot fixture.
"""
import os
import subprocess
import sys
import tempfile
from pathlib import Path

BENCH = os.environ.get("KLMAT_BENCH", "build/klmat-bench")


def run(*args, expect=0):
    proc = subprocess.run([BENCH, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"{args}: exit {proc.returncode} (expected {expect})\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}")
    return proc


def read_tree(root):
    return {p.name: p.read_bytes() for p in sorted(Path(root).iterdir())}


def test_presets_lists_eight():
    out = run("presets").stdout
    names = [line.split()[0] for line in out.strip().splitlines()]
    assert names == ["fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig5a", "fig5b"], names


def test_presets_show_is_parseable_config():
    out = run("presets", "--show", "fig5a").stdout
    assert "signal.kind = sunspot" in out
    assert "run.embedding_order = 2" in out
    assert "klmat.h = 1.5" in out


def test_generate_mg():
    with tempfile.TemporaryDirectory() as tmp:
        out_file = Path(tmp) / "mg.csv"
        run("generate-mg", "--samples", "50", "--out", str(out_file))
        lines = out_file.read_text().splitlines()
        assert lines[0] == "sample,value"
        assert len(lines) == 51
        # constant history 1 stays at the fixed point
        run("generate-mg", "--samples", "5", "--history", "1", "--out", str(out_file))
        for line in out_file.read_text().splitlines()[1:]:
            assert abs(float(line.split(",")[1]) - 1.0) < 1e-9


def test_run_determinism_and_seed_override():
    with tempfile.TemporaryDirectory() as tmp:
        d1, d2, d3 = (Path(tmp) / n for n in ("a", "b", "c"))
        args = ["run", "--preset", "fig2a", "--scale", "0.01", "--seed", "7"]
        run(*args, "--out", str(d1))
        run(*args, "--out", str(d2))
        run("run", "--preset", "fig2a", "--scale", "0.01", "--seed", "8", "--out", str(d3))
        t1, t2, t3 = read_tree(d1), read_tree(d2), read_tree(d3)
        assert set(t1) == {"lmat.csv", "klms.csv", "klmat.csv", "vss_klmat.csv",
                           "nc_klmat.csv", "manifest.txt"}
        assert t1 == t2, "same seed must be byte-identical"
        assert t1 != t3, "different seed must differ"
        header = t1["klmat.csv"].split(b"\n")[0]
        assert header == b"iteration,mse_db,mu,codebook_size"


def test_run_custom_config_and_validation_error():
    with tempfile.TemporaryDirectory() as tmp:
        cfg = Path(tmp) / "exp.cfg"
        cfg.write_text(
            "signal.kind = mg\n"
            "run.embedding_order = 5\n"
            "run.n_train = 20\n"
            "run.n_test = 10\n"
            "run.n_replicas = 2\n"
            "noise.variant = wgn\n"
            "noise.sigma = 0.1\n"
            "run.algorithms = klmat\n"
            "klmat.mu = 0.5\n")
        run("run", "--config", str(cfg), "--out", str(Path(tmp) / "out"))

        bad = Path(tmp) / "bad.cfg"
        bad.write_text(
            "signal.kind = mg\n"
            "signal.samples = 50\n"
            "run.embedding_order = 5\n"
            "run.n_train = 100\n"
            "run.n_test = 10\n"
            "run.algorithms = klmat\n"
            "klmat.mu = 0.5\n")
        proc = run("run", "--config", str(bad), "--out", str(Path(tmp) / "out2"), expect=1)
        assert "error" in proc.stderr.lower()


def test_bounds():
    out = run("bounds", "--preset", "fig2a", "--scale", "0.05").stdout
    assert "lambda_max" in out
    assert "step-size bound" in out
    assert "l lower bound" in out
    assert "lmat" in out


def test_bad_usage():
    proc = subprocess.run([BENCH, "no-such-subcommand"], capture_output=True, text=True)
    assert proc.returncode != 0
    proc = subprocess.run([BENCH, "run", "--no-such-flag"], capture_output=True, text=True)
    assert proc.returncode != 0
    proc = subprocess.run([BENCH, "run"], capture_output=True, text=True)
    assert proc.returncode != 0
    proc = subprocess.run([BENCH, "run", "--preset", "nope"], capture_output=True, text=True)
    assert proc.returncode != 0


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print("ok:", t.__name__)
    print(f"{len(tests)} CLI tests passed")


if __name__ == "__main__":
    sys.exit(main())
