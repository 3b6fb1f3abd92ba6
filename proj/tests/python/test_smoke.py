"""Smoke tests for the klmat python module (run with PYTHONPATH set to the
build directory containing klmat*.so)."""
import math

import klmat


def test_kernel():
    assert klmat.gaussian_kernel([0.0], [0.0], h=1.0) == 1.0
    assert abs(klmat.gaussian_kernel([0.0], [1.0], h=1.0) - math.exp(-1)) < 1e-12
    g = klmat.gram_matrix([[0.0], [1.0]], h=1.0)
    assert len(g) == 2
    assert g.at(0, 1) == g.at(1, 0)
    lam = klmat.lambda_max(g)
    assert 0.5 < lam <= 1.0

    try:
        klmat.gaussian_kernel([0.0], [1.0, 2.0])
    except ValueError:
        pass
    else:
        raise AssertionError("dimension mismatch should raise")


def test_filter_learns_constant():
    f = klmat.KernelFilter("klmat", h=1.0, mu=0.5)
    for _ in range(200):
        f.step([0.5], 1.0)
    assert abs(f.predict([0.5]) - 1.0) < 1e-2
    assert f.codebook_size == 200
    assert f.step_count == 200


def test_vss_filter_and_nc():
    f = klmat.KernelFilter("vss_klmat", h=1.0, beta=1.0, l=0.1)
    r = f.step([0.0], 1.0)
    assert 0.01 <= r.mu_used <= 2.0

    g = klmat.KernelFilter("klmat", h=1.0, mu=0.5, nc_dist=10.0, nc_err=0.0)
    g.step([0.0], 1.0)
    r2 = g.step([0.5], 1.0)  # too close: rejected
    assert not r2.admitted
    assert g.codebook_size == 1


def test_linear_filter():
    f = klmat.LinearFilter(2, 0.5)
    pred, err = f.step([1.0, 0.0], 1.0)
    assert pred == 0.0 and err == 1.0
    assert f.w == [0.5, 0.0]


def test_mackey_glass():
    flat = klmat.mackey_glass(50, history=1.0)
    assert all(abs(x - 1.0) < 1e-9 for x in flat)
    chaotic = klmat.mackey_glass(200)
    assert max(chaotic) - min(chaotic) > 0.5
    X, d = klmat.embed(chaotic, 10)
    assert len(X) == len(d) == 190
    assert X[0] == chaotic[:10] and d[0] == chaotic[10]


def test_noise_determinism():
    a = klmat.noise_stream("wgn", seed=7, n=100, sigma=0.1)
    b = klmat.noise_stream("wgn", seed=7, n=100, sigma=0.1)
    assert a == b
    rect = klmat.noise_stream("rectangular", seed=1, n=4, amplitude=0.1, period_samples=4)
    assert rect == [0.1, 0.1, -0.1, -0.1]
    bg = klmat.noise_stream("bg_impulsive", seed=9, n=500, sigma_g=0.1, p_c=0.0, sigma_i=1.0)
    wgn = klmat.noise_stream("wgn", seed=9, n=500, sigma=0.1)
    assert bg == wgn


def test_analysis():
    assert klmat.mse_db([1.0, 1.0]) == 0.0
    assert abs(klmat.mse_db([0.1, 0.1]) + 20.0) < 1e-12
    assert abs(klmat.step_size_bound(1.0, 1.0) - math.sqrt(math.pi / 2)) < 1e-12
    assert abs(klmat.l_lower_bound(1.0, 1.0, 1.0, 1.0)
               - 1.0 / (math.sqrt(2 * math.pi) * math.log(10))) < 1e-12
    assert klmat.gradient_oracle(-2.0) == -12.0


def test_run_preset_scaled():
    assert len(klmat.preset_names()) == 8
    text = klmat.preset_text("fig2a")
    assert "signal.kind = mg" in text

    result = klmat.run_preset("fig2a", scale=0.02, threads=1)
    algos = result["algorithms"]
    assert set(algos) == {"lmat", "klms", "klmat", "vss_klmat", "nc_klmat"}
    for name, a in algos.items():
        assert len(a["mse_db"]) == 20
        assert "diverged_at" not in a
    # determinism across calls
    again = klmat.run_preset("fig2a", scale=0.02, threads=1)
    assert again["algorithms"]["klmat"]["mse_db"] == algos["klmat"]["mse_db"]
    # learning happened even at this tiny scale
    assert algos["klmat"]["mse_db"][-1] < algos["klmat"]["mse_db"][0]


def test_run_config_text_custom():
    cfg = """
signal.kind = mg
run.embedding_order = 5
run.n_train = 30
run.n_test = 10
run.n_replicas = 2
run.base_seed = 3
noise.variant = wgn
noise.sigma = 0.1
run.algorithms = klmat
klmat.mu = 0.5
klmat.h = 1
"""
    result = klmat.run_config_text(cfg, threads=1)
    curve = result["algorithms"]["klmat"]["mse_db"]
    assert len(curve) == 30
    st = result["algorithms"]["klmat"]["stability"]
    assert st["lambda_max"] > 0.0
    assert st["mu_bound_final"] > 0.0


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print("ok:", t.__name__)
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
