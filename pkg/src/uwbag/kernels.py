"""Hot numeric kernels: scan synthesis, CLEAN deconvolution, SV estimation.

The kernels are JIT-compiled with numba by default.  Setting the
environment variable ``UWBAG_DISABLE_JIT=1`` (or running without numba
installed) executes the very same source interpreted by CPython, so both
lanes produce bit-identical results: the integer stream arithmetic wraps
identically and the transcendental calls resolve to the same libm either
way.  ``benchmarks/bench_kernels.py`` compares the two lanes.

All randomness is counter-based splitmix64 (see rng.py for the documented
mixing scheme; the uint64 arithmetic here mirrors it exactly).  Stream
layout inside one scan with key K:

    substream(K, 1)                cluster lead inter-arrival gaps
    substream(substream(K, 2), l)  MPC gaps of cluster l
    substream(substream(K, 3), l)  amplitude draws of cluster l
    substream(substream(K, 4), l)  phase draws of cluster l
"""

from __future__ import annotations

import functools
import math
import os

import numpy as np

_env = os.environ.get("UWBAG_DISABLE_JIT", "").strip().lower()
if _env in ("1", "true", "yes"):
    _njit = None
else:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a hard dep but optional at runtime
        _njit = None

JIT_ENABLED = _njit is not None


def _compiled(fn):
    return _njit(cache=True)(fn) if JIT_ENABLED else fn


def _entry(fn):
    """Public kernel entry point.

    In the interpreted lane numpy warns about intentional uint64
    wraparound in scalar arithmetic; suppress it for the whole call.
    """
    if JIT_ENABLED:
        return _njit(cache=True)(fn)

    @functools.wraps(fn)
    def wrapper(*args):
        with np.errstate(over="ignore"):
            return fn(*args)

    wrapper.py_func = fn
    return wrapper


GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


_mix64 = _compiled(_mix64)


def _substream(key, i):
    return _mix64(key + np.uint64(i + 1) * GOLDEN)


_substream = _compiled(_substream)


def _u01(key, j):
    # uniform in [0, 1): top 53 bits of the j-th counter draw
    z = _mix64(key + np.uint64(j + 1) * GOLDEN)
    return (z >> _S11) * _INV53


_u01 = _compiled(_u01)


@_entry
def substream_u64(key, i):
    """Substream key derivation (kernel lane; mirrors rng.substream_key)."""
    return _substream(key, i)


@_entry
def uniform_u64(key, j):
    """Uniform [0, 1) draw (kernel lane; mirrors rng.uniform_at)."""
    return _u01(key, j)


@_entry
def exp_gaps(key, j0, n, rate):
    """n i.i.d. Exponential(rate) draws from counters j0..j0+n-1."""
    out = np.empty(n, np.float64)
    for k in range(n):
        u = _u01(key, j0 + k)
        out[k] = -math.log1p(-u) / rate
    return out


def _arrivals(key, rate, t_max, cap, inclusive):
    """Arrival delays of a renewal process with Exponential(rate) gaps.

    Starts accumulating from 0 (the origin itself is not emitted), keeps
    arrivals t <= t_max (t < t_max when not inclusive), at most `cap` of
    them.  Draws that do not advance the float accumulator are skipped so
    delays are strictly increasing even at extreme rates.
    """
    out = np.empty(64, np.float64)
    n = 0
    t = 0.0
    j = 0
    budget = 4 * cap + 64
    while n < cap and j < budget:
        u = _u01(key, j)
        j += 1
        t_new = t + (-math.log1p(-u) / rate)
        if t_new > t_max or (not inclusive and t_new >= t_max):
            break
        if t_new > t:
            if n == out.shape[0]:
                grown = np.empty(out.shape[0] * 2, np.float64)
                grown[:n] = out[:n]
                out = grown
            out[n] = t_new
            n += 1
        t = t_new
    return out[:n].copy()


_arrivals = _compiled(_arrivals)


@_entry
def cluster_arrivals(key, rate, window, cap):
    """Cluster lead delays: pinned LOS lead at 0 plus later Poisson leads.

    The pinned lead consumes one mean inter-arrival of the Poisson budget
    (additional leads are truncated at window - 1/rate), which calibrates
    the expected lead count over the window to rate * window.  At most
    `cap` leads in total (one per grid point).
    """
    t_max = window - 1.0 / rate
    ck = _substream(key, 1)
    if t_max > 0.0:
        extra = _arrivals(ck, rate, t_max, cap - 1, True)
    else:
        extra = np.empty(0, np.float64)
    out = np.empty(extra.size + 1, np.float64)
    out[0] = 0.0
    out[1:] = extra
    return out


@_entry
def mpc_arrivals(key, rate, span, cap, inclusive):
    """Relative MPC delays within one cluster: pinned lead at 0 plus
    Exponential(rate) gap arrivals truncated at `span`; at most `cap`
    taps in total."""
    extra = _arrivals(key, rate, span, cap - 1, inclusive)
    out = np.empty(extra.size + 1, np.float64)
    out[0] = 0.0
    out[1:] = extra
    return out


@_entry
def synth_scan(key, chi, varsigma, eta, gamma, omega00, window, cap, rayleigh):
    """Synthesize one scan; returns (delays, re, im, cluster_id, starts).

    Cluster leads via cluster_arrivals; MPCs of cluster l truncated
    strictly before the next lead (inclusive of the window end for the
    last cluster).  Tap amplitude is Rayleigh with the configured mean
    square (or its deterministic square root), phase uniform on [0, 2*pi).
    """
    t_max = window - 1.0 / chi
    kc = _substream(key, 1)
    if t_max > 0.0:
        extra = _arrivals(kc, chi, t_max, cap - 1, True)
    else:
        extra = np.empty(0, np.float64)
    n_cl = extra.size + 1
    starts = np.empty(n_cl, np.float64)
    starts[0] = 0.0
    starts[1:] = extra

    km_root = _substream(key, 2)
    ka_root = _substream(key, 3)
    kp_root = _substream(key, 4)

    size = 256
    d = np.empty(size, np.float64)
    re = np.empty(size, np.float64)
    im = np.empty(size, np.float64)
    cid = np.empty(size, np.int64)
    n = 0
    for l in range(n_cl):
        t_l = starts[l]
        last = l == n_cl - 1
        bound = window if last else starts[l + 1]
        km = _substream(km_root, l)
        ka = _substream(ka_root, l)
        kp = _substream(kp_root, l)
        taus = _arrivals(km, varsigma, bound - t_l, cap - 1, last)
        for m in range(taus.size + 1):
            tau = 0.0 if m == 0 else taus[m - 1]
            mean_p = omega00 * math.exp(-t_l * eta) * math.exp(-tau * gamma)
            if rayleigh:
                ua = _u01(ka, m)
                amp = math.sqrt(mean_p) * math.sqrt(-math.log1p(-ua))
            else:
                amp = math.sqrt(mean_p)
            phase = 2.0 * math.pi * _u01(kp, m)
            if n == size:
                size *= 2
                d2 = np.empty(size, np.float64)
                re2 = np.empty(size, np.float64)
                im2 = np.empty(size, np.float64)
                cid2 = np.empty(size, np.int64)
                d2[:n] = d[:n]
                re2[:n] = re[:n]
                im2[:n] = im[:n]
                cid2[:n] = cid[:n]
                d, re, im, cid = d2, re2, im2, cid2
            d[n] = t_l + tau
            re[n] = amp * math.cos(phase)
            im[n] = amp * math.sin(phase)
            cid[n] = l
            n += 1

    # drop degenerate float ties so delays are strictly increasing
    k = 0
    for i in range(n):
        if k == 0 or d[i] > d[k - 1]:
            d[k] = d[i]
            re[k] = re[i]
            im[k] = im[i]
            cid[k] = cid[i]
            k += 1
    return d[:k].copy(), re[:k].copy(), im[:k].copy(), cid[:k].copy(), starts


def _matched_peak(work, template, tnorm):
    # earliest lag wins ties (strict > comparison)
    best_k = 0
    best_a = 0.0
    for k in range(work.size):
        c = 0.0
        m = template.size
        if work.size - k < m:
            m = work.size - k
        for i in range(m):
            c += work[k + i] * template[i]
        a = c / tnorm
        if abs(a) > abs(best_a):
            best_a = a
            best_k = k
    return best_k, best_a


_matched_peak = _compiled(_matched_peak)


@_entry
def clean_deconv(raw, template, stop_fraction, max_iters):
    """Iterative matched-filter tap extraction.

    Picks the lag maximizing |correlation| with the template, records the
    tap, subtracts the scaled shifted template, and repeats until the peak
    amplitude estimate falls below stop_fraction times the first peak.
    Returns (lag_indices, amplitudes, converged).
    """
    tnorm = 0.0
    for i in range(template.size):
        tnorm += template[i] * template[i]
    work = raw.copy()
    k0, a0 = _matched_peak(work, template, tnorm)
    idx = np.empty(max_iters, np.int64)
    amp = np.empty(max_iters, np.float64)
    n = 0
    converged = False
    if a0 == 0.0:
        converged = True
    else:
        thr = stop_fraction * abs(a0)
        for it in range(max_iters):
            k, a = _matched_peak(work, template, tnorm)
            if abs(a) < thr:
                converged = True
                break
            idx[n] = k
            amp[n] = a
            n += 1
            m = template.size
            if work.size - k < m:
                m = work.size - k
            for i in range(m):
                work[k + i] -= a * template[i]
    return idx[:n].copy(), amp[:n].copy(), converged


@_entry
def sv_accumulate(delays, powers_db, offsets, window, min_duration, slope_thr, drop_guard):
    """Partition taps of each scan into clusters and accumulate SV stats.

    A dropping tap starts a new cluster when its drop from the running
    cluster peak is shallower than slope_thr (dB/ns) over the elapsed
    delay, provided that delay is at least drop_guard; a tap rising above
    the cluster peak starts a new cluster once the cluster is at least
    min_duration long.  Returns the float accumulator vector
        [total_clusters, total_intra_taps, max_clusters_in_any_scan,
         eta_n, eta_sx, eta_sy, eta_sxy, eta_sxx,
         gamma_slope_sum, gamma_cluster_count, lead0_power_sum, n_scans]
    where eta_* are pooled OLS sums over (lead delay, lead power dB) and
    gamma uses per-cluster OLS slopes of (tap delay - lead delay, dB) for
    clusters with at least 3 taps.
    """
    n_scans = offsets.size - 1
    total_clusters = 0.0
    total_intra = 0.0
    max_per_scan = 0.0
    en = 0.0
    esx = 0.0
    esy = 0.0
    esxy = 0.0
    esxx = 0.0
    gsum = 0.0
    gcnt = 0.0
    lead0_sum = 0.0
    for s in range(n_scans):
        i0 = offsets[s]
        i1 = offsets[s + 1]
        if i1 <= i0:
            continue
        lead0_sum += 10.0 ** (powers_db[i0] / 10.0)
        scan_clusters = 0.0
        cl = i0
        peak_d = delays[i0]
        peak_p = powers_db[i0]
        j = i0 + 1
        while j <= i1:
            boundary = False
            if j < i1:
                dj = delays[j]
                pj = powers_db[j]
                if pj >= peak_p:
                    boundary = dj - delays[cl] >= min_duration
                else:
                    gap = dj - peak_d
                    boundary = gap >= drop_guard and peak_p - pj < slope_thr * gap
            if j == i1 or boundary:
                size = j - cl
                scan_clusters += 1.0
                lead_d = delays[cl]
                lead_p = powers_db[cl]
                en += 1.0
                esx += lead_d
                esy += lead_p
                esxy += lead_d * lead_p
                esxx += lead_d * lead_d
                total_intra += size - 1
                if size >= 3:
                    sn = 0.0
                    sx = 0.0
                    sy = 0.0
                    sxy = 0.0
                    sxx = 0.0
                    for t in range(cl, j):
                        x = delays[t] - lead_d
                        y = powers_db[t]
                        sn += 1.0
                        sx += x
                        sy += y
                        sxy += x * y
                        sxx += x * x
                    denom = sn * sxx - sx * sx
                    if denom > 0.0:
                        gsum += (sn * sxy - sx * sy) / denom
                        gcnt += 1.0
                cl = j
                if j < i1:
                    peak_d = delays[j]
                    peak_p = powers_db[j]
            else:
                if powers_db[j] > peak_p:
                    peak_p = powers_db[j]
                    peak_d = delays[j]
            j += 1
        total_clusters += scan_clusters
        if scan_clusters > max_per_scan:
            max_per_scan = scan_clusters
    out = np.empty(12, np.float64)
    out[0] = total_clusters
    out[1] = total_intra
    out[2] = max_per_scan
    out[3] = en
    out[4] = esx
    out[5] = esy
    out[6] = esxy
    out[7] = esxx
    out[8] = gsum
    out[9] = gcnt
    out[10] = lead0_sum
    out[11] = n_scans
    return out


# Lane selection happens once at import, so comparing the two lanes
# (tests/test_lane_parity.py, benchmarks/bench_kernels.py) is done by
# spawning a subprocess with UWBAG_DISABLE_JIT=1.
