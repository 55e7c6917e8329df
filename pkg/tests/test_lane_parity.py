"""The JIT and interpreted kernel lanes must agree bit for bit.

Lane selection happens at import, so the opposite lane runs in a
subprocess with UWBAG_DISABLE_JIT=1 and ships its arrays back via npz.
"""

import os
import subprocess
import sys

import numpy as np

_CHILD = r"""
import sys
import numpy as np
from uwbag import kernels
from uwbag.analysis import clean_deconvolve, estimate_sv_params
from uwbag.catalog import SVParams
from uwbag.rng import scan_stream
from uwbag.svmodel import synthesize_cir

assert not kernels.JIT_ENABLED, "child must run the interpreted lane"

params = SVParams(n_c_mean=3.33, chi=0.033, varsigma=0.1, eta=0.23, gamma=8.7)
out = {}
for i in range(8):
    cir = synthesize_cir(params, scan_stream(99, i))
    out[f"d{i}"] = cir.delays
    out[f"a{i}"] = cir.amplitudes

t = np.exp(-0.5 * ((np.arange(40) * 0.05 - 1.0) / 0.2) ** 2)
raw = np.zeros(300)
raw[:40] += t
raw[100:140] += 0.5 * t
cir = clean_deconvolve(raw, t, 0.05)
out["clean_d"] = cir.delays
out["clean_a"] = cir.amplitudes

scans = [synthesize_cir(params, scan_stream(99, i)) for i in range(200)]
est = estimate_sv_params(scans)
out["est"] = np.array([est.n_c_mean, est.chi, est.varsigma, est.eta, est.gamma, est.omega00])

np.savez(sys.argv[1], **out)
"""


def test_lanes_bit_identical(tmp_path):
    npz_path = tmp_path / "child.npz"
    env = dict(os.environ, UWBAG_DISABLE_JIT="1")
    subprocess.run(
        [sys.executable, "-c", _CHILD, str(npz_path)], env=env, check=True, timeout=300
    )
    child = np.load(npz_path)

    from uwbag.analysis import clean_deconvolve, estimate_sv_params
    from uwbag.catalog import SVParams
    from uwbag.rng import scan_stream
    from uwbag.svmodel import synthesize_cir

    params = SVParams(n_c_mean=3.33, chi=0.033, varsigma=0.1, eta=0.23, gamma=8.7)
    for i in range(8):
        cir = synthesize_cir(params, scan_stream(99, i))
        assert np.array_equal(cir.delays, child[f"d{i}"])
        assert np.array_equal(cir.amplitudes, child[f"a{i}"])

    t = np.exp(-0.5 * ((np.arange(40) * 0.05 - 1.0) / 0.2) ** 2)
    raw = np.zeros(300)
    raw[:40] += t
    raw[100:140] += 0.5 * t
    cir = clean_deconvolve(raw, t, 0.05)
    assert np.array_equal(cir.delays, child["clean_d"])
    assert np.array_equal(cir.amplitudes, child["clean_a"])

    scans = [synthesize_cir(params, scan_stream(99, i)) for i in range(200)]
    est = estimate_sv_params(scans)
    mine = np.array([est.n_c_mean, est.chi, est.varsigma, est.eta, est.gamma, est.omega00])
    assert np.array_equal(mine, child["est"])
