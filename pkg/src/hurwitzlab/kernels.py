"""Hot numeric kernels: numba fast path with a pure-numpy fallback.

The backend is selected at import time.  Set ``HURWITZLAB_NUMBA=0`` to
force the numpy path (useful for debugging and for the benchmark in
``benchmarks/bench_kernels.py``).  Both paths implement the same math;
floating-point results may differ in the last bits because summation
order differs (numba sums sequentially, numpy pairwise).

Also home of the counter-based RNG used for reproducible phase streams:
every uniform is a pure function of (seed, sample index, stream id), so
evaluation order and worker count never change the values.
"""

import math
import os

import numpy as np

NUMBA_ENABLED = os.environ.get("HURWITZLAB_NUMBA", "1") != "0"
if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

BACKEND = "numba" if NUMBA_ENABLED else "numpy"

# splitmix64 constants; _GOLD is odd so ctr -> ctr*_GOLD is a bijection
_SALT = np.uint64(0x5851F42D4C957F2D)
_GOLD = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_TWO_PI_53 = 2.0 * math.pi / 9007199254740992.0  # 2 pi / 2**53


def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _phase_u64(state, lam_id):
    return _mix64(_mix64(state ^ _SALT) + lam_id * _GOLD)


def _sample_seed(seed, i):
    return _mix64(_mix64(seed ^ _SALT) + (i + _ONE) * _GOLD)


def lam_hash(code: int) -> np.uint64:
    """64-bit stream id from an integer stream code (mix64 is a bijection)."""
    with np.errstate(over="ignore"):
        return _mix64(np.uint64(code))


def theta_scalar(seed: int, lam_id) -> float:
    """Single phase in [0, 2 pi) for (seed, stream id)."""
    with np.errstate(over="ignore"):
        u = _phase_u64(np.uint64(seed), np.uint64(lam_id))
    return float(u >> _S11) * _TWO_PI_53


def phase_block(seed: int, lam_ids: np.ndarray, i0: int, i1: int) -> np.ndarray:
    """Phases theta[i - i0, l] in [0, 2 pi) for samples i0 <= i < i1."""
    with np.errstate(over="ignore"):
        idx = np.arange(i0, i1, dtype=np.uint64)
        s = _sample_seed(np.uint64(seed), idx)
        base = _mix64(s ^ _SALT)
        u = _mix64(base[:, None] + lam_ids[None, :] * _GOLD)
    return (u >> _S11) * _TWO_PI_53


# ---------------------------------------------------------------------------
# numpy implementations


def _model_samples_np(seed, lam_ids, indptr, cols, vals, weights, m_samples, chunk=8192):
    out = np.empty(m_samples, dtype=np.complex128)
    n_rows = len(indptr) - 1
    for lo in range(0, m_samples, chunk):
        hi = min(lo + chunk, m_samples)
        theta = phase_block(seed, lam_ids, lo, hi)
        acc = np.zeros(hi - lo, dtype=np.complex128)
        for r in range(n_rows):
            phi = np.zeros(hi - lo)
            for k in range(indptr[r], indptr[r + 1]):
                phi += vals[k] * theta[:, cols[k]]
            acc += weights[r] * np.exp(1j * phi)
        out[lo:hi] = acc
    return out


def _power_mean_np(seed, lam_ids, coeffs, m_samples, chunk=65536):
    tot = 0.0 + 0.0j
    for lo in range(0, m_samples, chunk):
        hi = min(lo + chunk, m_samples)
        theta = phase_block(seed, lam_ids, lo, hi)
        phi = theta @ coeffs.astype(np.float64)
        tot += np.exp(1j * phi).sum()
    return tot / m_samples


def _omega0_hits_np(seed, lam_ids, indptr, cols, vals, centers, halfwidth,
                    m_samples, chunk=65536):
    n_rows = len(indptr) - 1
    hits = 0
    for lo in range(0, m_samples, chunk):
        hi = min(lo + chunk, m_samples)
        theta = phase_block(seed, lam_ids, lo, hi)
        ok = np.ones(hi - lo, dtype=bool)
        for r in range(n_rows):
            phi = np.zeros(hi - lo)
            for k in range(indptr[r], indptr[r + 1]):
                phi += vals[k] * theta[:, cols[k]]
            d = np.mod(phi - centers[r] + np.pi, 2.0 * np.pi) - np.pi
            ok &= np.abs(d) < halfwidth
        hits += int(ok.sum())
    return hits


def _zeta_em_nodes_np(ts, sigma, alpha, logs, rads, bof, chunk=256):
    mtrunc = len(logs)
    x = mtrunc + alpha
    lx = math.log(x)
    out = np.empty(len(ts), dtype=np.complex128)
    for lo in range(0, len(ts), chunk):
        hi = min(lo + chunk, len(ts))
        t = ts[lo:hi]
        e = np.exp(-1j * np.outer(t, logs))
        acc = e @ rads
        s = sigma + 1j * t
        acc += np.exp((1.0 - s) * lx) / (s - 1.0) + 0.5 * np.exp(-s * lx)
        poch = s.copy()
        for k in range(1, len(bof) + 1):
            acc += bof[k - 1] * poch * np.exp((-s - (2 * k - 1)) * lx)
            poch = poch * (s + (2 * k - 1)) * (s + 2 * k)
        out[lo:hi] = acc
    return out


def _zeta_trunc_nodes_np(ts, logs, rads, chunk=2048):
    out = np.empty(len(ts), dtype=np.complex128)
    for lo in range(0, len(ts), chunk):
        hi = min(lo + chunk, len(ts))
        e = np.exp(-1j * np.outer(ts[lo:hi], logs))
        out[lo:hi] = e @ rads
    return out


def _vaaler_h_np(xs, m0, chunk=512):
    out = np.empty(len(xs))
    m = np.arange(1.0, m0 + 1.0)
    for lo in range(0, len(xs), chunk):
        hi = min(lo + chunk, len(xs))
        x = xs[lo:hi][:, None]
        br = np.sum(1.0 / (x - m) ** 2 - 1.0 / (x + m) ** 2, axis=1)
        x = xs[lo:hi]
        br += 2.0 * x / ((m0 + 0.5) ** 2 - x * x)  # midpoint tail of 4xm/(m^2-x^2)^2
        br += 2.0 / x
        out[lo:hi] = (np.sin(np.pi * x) / np.pi) ** 2 * br
    return out


_NUMPY_IMPL = {
    "model_samples": _model_samples_np,
    "power_mean": _power_mean_np,
    "omega0_hits": _omega0_hits_np,
    "zeta_em_nodes": _zeta_em_nodes_np,
    "zeta_trunc_nodes": _zeta_trunc_nodes_np,
    "vaaler_h": _vaaler_h_np,
}


# ---------------------------------------------------------------------------
# numba implementations (scalar loops over the same formulas)

if NUMBA_ENABLED:

    @njit(cache=True, nogil=True)
    def _mix64_nb(z):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)

    @njit(cache=True, nogil=True)
    def _theta_nb(state, lam_id):
        u = _mix64_nb(_mix64_nb(state ^ _SALT) + lam_id * _GOLD)
        return (u >> _S11) * _TWO_PI_53

    @njit(cache=True, nogil=True)
    def _model_samples_nb(seed, lam_ids, indptr, cols, vals, weights, m_samples):
        out = np.empty(m_samples, dtype=np.complex128)
        n_rows = len(indptr) - 1
        n_lam = len(lam_ids)
        theta = np.empty(n_lam)
        for i in range(m_samples):
            s = _mix64_nb(_mix64_nb(seed ^ _SALT) + (np.uint64(i) + _ONE) * _GOLD)
            for l in range(n_lam):
                theta[l] = _theta_nb(s, lam_ids[l])
            acc = 0.0 + 0.0j
            for r in range(n_rows):
                phi = 0.0
                for k in range(indptr[r], indptr[r + 1]):
                    phi += vals[k] * theta[cols[k]]
                acc += weights[r] * complex(math.cos(phi), math.sin(phi))
            out[i] = acc
        return out

    @njit(cache=True, nogil=True)
    def _power_mean_nb(seed, lam_ids, coeffs, m_samples):
        n_lam = len(lam_ids)
        tre = 0.0
        tim = 0.0
        for i in range(m_samples):
            s = _mix64_nb(_mix64_nb(seed ^ _SALT) + (np.uint64(i) + _ONE) * _GOLD)
            phi = 0.0
            for l in range(n_lam):
                if coeffs[l] != 0:
                    phi += coeffs[l] * _theta_nb(s, lam_ids[l])
            tre += math.cos(phi)
            tim += math.sin(phi)
        return complex(tre, tim) / m_samples

    @njit(cache=True, nogil=True)
    def _omega0_hits_nb(seed, lam_ids, indptr, cols, vals, centers, halfwidth, m_samples):
        n_rows = len(indptr) - 1
        n_lam = len(lam_ids)
        theta = np.empty(n_lam)
        two_pi = 2.0 * math.pi
        hits = 0
        for i in range(m_samples):
            s = _mix64_nb(_mix64_nb(seed ^ _SALT) + (np.uint64(i) + _ONE) * _GOLD)
            for l in range(n_lam):
                theta[l] = _theta_nb(s, lam_ids[l])
            ok = True
            for r in range(n_rows):
                phi = 0.0
                for k in range(indptr[r], indptr[r + 1]):
                    phi += vals[k] * theta[cols[k]]
                d = (phi - centers[r] + math.pi) % two_pi - math.pi
                if abs(d) >= halfwidth:
                    ok = False
                    break
            if ok:
                hits += 1
        return hits

    @njit(cache=True, nogil=True)
    def _zeta_em_nodes_nb(ts, sigma, alpha, logs, rads, bof):
        mtrunc = len(logs)
        x = mtrunc + alpha
        lx = math.log(x)
        out = np.empty(len(ts), dtype=np.complex128)
        for j in range(len(ts)):
            t = ts[j]
            re = 0.0
            im = 0.0
            for n in range(mtrunc):
                ph = t * logs[n]
                re += rads[n] * math.cos(ph)
                im -= rads[n] * math.sin(ph)
            acc = complex(re, im)
            s = complex(sigma, t)
            # exp(w*lx) for complex w, spelled out for numba
            w = (1.0 - s) * lx
            acc += math.exp(w.real) * complex(math.cos(w.imag), math.sin(w.imag)) / (s - 1.0)
            w = -s * lx
            acc += 0.5 * math.exp(w.real) * complex(math.cos(w.imag), math.sin(w.imag))
            poch = s
            for k in range(1, len(bof) + 1):
                w = (-s - (2 * k - 1)) * lx
                ex = math.exp(w.real) * complex(math.cos(w.imag), math.sin(w.imag))
                acc += bof[k - 1] * poch * ex
                poch = poch * (s + (2 * k - 1)) * (s + 2 * k)
            out[j] = acc
        return out

    @njit(cache=True, nogil=True)
    def _zeta_trunc_nodes_nb(ts, logs, rads):
        out = np.empty(len(ts), dtype=np.complex128)
        for j in range(len(ts)):
            t = ts[j]
            re = 0.0
            im = 0.0
            for n in range(len(logs)):
                ph = t * logs[n]
                re += rads[n] * math.cos(ph)
                im -= rads[n] * math.sin(ph)
            out[j] = complex(re, im)
        return out

    @njit(cache=True, nogil=True)
    def _vaaler_h_nb(xs, m0):
        out = np.empty(len(xs))
        for j in range(len(xs)):
            x = xs[j]
            br = 0.0
            for m in range(1, m0 + 1):
                br += 1.0 / (x - m) ** 2 - 1.0 / (x + m) ** 2
            br += 2.0 * x / ((m0 + 0.5) ** 2 - x * x)
            br += 2.0 / x
            sp = math.sin(math.pi * x) / math.pi
            out[j] = sp * sp * br
        return out

    def _wrap_ms(seed, lam_ids, indptr, cols, vals, weights, m_samples, chunk=None):
        return _model_samples_nb(np.uint64(seed), lam_ids, indptr, cols, vals,
                                 weights, m_samples)

    def _wrap_pm(seed, lam_ids, coeffs, m_samples, chunk=None):
        return _power_mean_nb(np.uint64(seed), lam_ids, coeffs.astype(np.float64),
                              m_samples)

    def _wrap_om(seed, lam_ids, indptr, cols, vals, centers, halfwidth, m_samples,
                 chunk=None):
        return _omega0_hits_nb(np.uint64(seed), lam_ids, indptr, cols, vals,
                               centers, halfwidth, m_samples)

    def _wrap_em(ts, sigma, alpha, logs, rads, bof, chunk=None):
        return _zeta_em_nodes_nb(ts, sigma, alpha, logs, rads, bof)

    def _wrap_tr(ts, logs, rads, chunk=None):
        return _zeta_trunc_nodes_nb(ts, logs, rads)

    def _wrap_vh(xs, m0, chunk=None):
        return _vaaler_h_nb(xs, int(m0))

    _NUMBA_IMPL = {
        "model_samples": _wrap_ms,
        "power_mean": _wrap_pm,
        "omega0_hits": _wrap_om,
        "zeta_em_nodes": _wrap_em,
        "zeta_trunc_nodes": _wrap_tr,
        "vaaler_h": _wrap_vh,
    }

IMPLS = {"numpy": _NUMPY_IMPL}
if NUMBA_ENABLED:
    IMPLS["numba"] = _NUMBA_IMPL

_ACTIVE = IMPLS[BACKEND]

model_samples = _ACTIVE["model_samples"]
power_mean = _ACTIVE["power_mean"]
omega0_hits = _ACTIVE["omega0_hits"]
zeta_em_nodes = _ACTIVE["zeta_em_nodes"]
zeta_trunc_nodes = _ACTIVE["zeta_trunc_nodes"]
vaaler_h = _ACTIVE["vaaler_h"]
