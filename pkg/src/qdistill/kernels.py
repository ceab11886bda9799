"""Hot Monte Carlo kernels.

Everything here works on plain int64 bitmasks and flat numpy arrays so the
same source runs two ways: compiled with numba's @njit (the default when
numba is importable) or as ordinary Python over numpy (set QDISTILL_NO_NUMBA=1
to force this).  Both paths consume identical pre-drawn uniform arrays and
produce bit-identical results; benchmarks/bench_kernels.py measures the gap.

Kernels never draw randomness themselves.  Callers hand in a 2-D float64
array with one row of uniforms per trial, generated from counter-based
seeded streams, so results are independent of chunking and thread count.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("QDISTILL_NO_NUMBA", "") not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        import numba
    except ImportError:          # pragma: no cover - numba is a soft dep
        numba = None
        USE_NUMBA = False


def _maybe_jit(fn):
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def _parity64(x):
    x ^= x >> 32
    x ^= x >> 16
    x ^= x >> 8
    x ^= x >> 4
    x ^= x >> 2
    x ^= x >> 1
    return x & 1


parity64 = _maybe_jit(_parity64)


def _depol1_code(u, p):
    """Single-qubit depolarizing event from one uniform: 0=I, 1=X, 2=Z, 3=Y."""
    if u >= p:
        return 0
    w = int(u / p * 3.0)
    if w > 2:
        w = 2
    return w + 1


depol1_code = _maybe_jit(_depol1_code)


def _depol2_code(u, p):
    """Two-qubit depolarizing event from one uniform.

    Returns 0 for identity, else 1..15 indexing the nonidentity pairs with
    (code >> 2) acting on the control and (code & 3) on the target, where
    per-qubit codes are 0=I, 1=X, 2=Y, 3=Z.
    """
    if u >= p:
        return 0
    w = int(u / p * 15.0)
    if w > 14:
        w = 14
    return w + 1


depol2_code = _maybe_jit(_depol2_code)


def _apply_1q(code, q, e, f):
    """XOR a single-qubit Pauli code (0=I,1=X,2=Y,3=Z) into (e, f) masks."""
    if code == 1 or code == 2:
        e ^= 1 << q
    if code == 2 or code == 3:
        f ^= 1 << q
    return e, f


apply_1q = _maybe_jit(_apply_1q)


def _prep_block(draws, off, n, enc_c, enc_t, p):
    """Pauli frame of one noisy ancilla preparation.

    One depolarizing event per qubit preparation, then each encoder CNOT is
    perfect followed by a two-qubit depolarizing event.  Consumes exactly
    n + len(enc_c) uniforms starting at draws[off]; returns (e, f, off').
    """
    e = 0
    f = 0
    for q in range(n):
        code = depol1_code(draws[off], p)
        off += 1
        if code == 1:
            e ^= 1 << q
        elif code == 2:
            f ^= 1 << q
        elif code == 3:
            e ^= 1 << q
            f ^= 1 << q
    for g in range(enc_c.shape[0]):
        c = enc_c[g]
        t = enc_t[g]
        if (e >> c) & 1:
            e ^= 1 << t
        if (f >> t) & 1:
            f ^= 1 << c
        code = depol2_code(draws[off], p)
        off += 1
        if code != 0:
            e, f = apply_1q(code >> 2, c, e, f)
            e, f = apply_1q(code & 3, t, e, f)
    return e, f, off


prep_block = _maybe_jit(_prep_block)


def _syndrome_bits(mask, checks):
    """Pack the parities of `mask` against each check row into an int."""
    s = 0
    for j in range(checks.shape[0]):
        s |= parity64(mask & checks[j]) << j
    return s


syndrome_bits = _maybe_jit(_syndrome_bits)


def _is_failure(e, f, hz, hx, logx, logz, target):
    if syndrome_bits(e, hz) != 0:
        return True
    if syndrome_bits(f, hx) != 0:
        return True
    if target == 0:
        return parity64(e & logz) == 1
    return parity64(f & logx) == 1


is_failure = _maybe_jit(_is_failure)


def _no_distill_kernel(draws, p, n, enc_c, enc_t, hz, hx, logx, logz, target):
    """Failures among raw noisy preparations, one block per trial."""
    failures = 0
    for trial in range(draws.shape[0]):
        e, f, _ = prep_block(draws[trial], 0, n, enc_c, enc_t, p)
        if is_failure(e, f, hz, hx, logx, logz, target):
            failures += 1
    return failures


no_distill_kernel = _maybe_jit(_no_distill_kernel)


def _distill_rate_kernel(draws, p, n, enc_c, enc_t,
                         m1, k1, ud1_c, ud1_t, table1,
                         m2, k2, ud2_c, ud2_t, table2,
                         hz, hx, logx, logz, cosx, cosz, target):
    """Failing survivors of two-round Protocol I over m1*m2 noisy preps.

    Round 1 runs the first classical code on m2 groups of m1 blocks; the
    k1*m2 survivors are regrouped so round-2 groupmates come from distinct
    round-1 groups (survivor i of every group forms round-2 group i).
    Returns the failing-survivor count; survivors per trial is k1*k2.
    """
    rz = hz.shape[0]
    rx = hx.shape[0]
    r1 = m1 - k1
    r2 = m2 - k2
    nb = m1 * m2
    e = np.zeros(nb, np.int64)
    f = np.zeros(nb, np.int64)
    sur_e = np.zeros(k1 * m2, np.int64)
    sur_f = np.zeros(k1 * m2, np.int64)
    sig = np.zeros(max(r1, r2), np.int64)
    lam = np.zeros(max(r1, r2), np.int64)
    stil = np.zeros(max(m1, m2), np.int64)
    failures = 0
    for trial in range(draws.shape[0]):
        d = draws[trial]
        off = 0
        for b in range(nb):
            eb, fb, off = prep_block(d, off, n, enc_c, enc_t, p)
            e[b] = eb
            f[b] = fb
        # round 1: X errors
        for g in range(m2):
            base = g * m1
            for gi in range(ud1_c.shape[0]):
                c = base + ud1_c[gi]
                t = base + ud1_t[gi]
                e[t] ^= e[c]
                f[c] ^= f[t]
            for u in range(r1):
                mb = e[base + k1 + u]
                sig[u] = syndrome_bits(mb, hz)
                lam[u] = parity64(mb & logz)
            for i in range(k1):
                stil[i] = 0
            for j in range(rz):
                syn = 0
                for u in range(r1):
                    syn |= ((sig[u] >> j) & 1) << u
                ehat = table1[syn]
                for i in range(k1):
                    if (ehat >> i) & 1:
                        stil[i] |= 1 << j
            lhat = 0
            if target == 0:
                syn = 0
                for u in range(r1):
                    syn |= lam[u] << u
                lhat = table1[syn]
            for i in range(k1):
                # Lift: coset leader, plus a logical X when the leader's
                # logical-Z parity disagrees with the decoded logical bit.
                corr = cosx[stil[i]]
                if target == 0 and parity64(corr & logz) != ((lhat >> i) & 1):
                    corr ^= logx
                sur_e[i * m2 + g] = e[base + i] ^ corr
                sur_f[i * m2 + g] = f[base + i]
        # round 2: Z errors, transposed grouping
        for i in range(k1):
            base = i * m2
            for gi in range(ud2_c.shape[0]):
                c = base + ud2_c[gi]
                t = base + ud2_t[gi]
                sur_e[t] ^= sur_e[c]
                sur_f[c] ^= sur_f[t]
            for u in range(r2):
                mb = sur_f[base + k2 + u]
                sig[u] = syndrome_bits(mb, hx)
                lam[u] = parity64(mb & logx)
            for i2 in range(k2):
                stil[i2] = 0
            for j in range(rx):
                syn = 0
                for u in range(r2):
                    syn |= ((sig[u] >> j) & 1) << u
                fhat = table2[syn]
                for i2 in range(k2):
                    if (fhat >> i2) & 1:
                        stil[i2] |= 1 << j
            lhat = 0
            if target == 1:
                syn = 0
                for u in range(r2):
                    syn |= lam[u] << u
                lhat = table2[syn]
            for i2 in range(k2):
                corr = cosz[stil[i2]]
                if target == 1 and parity64(corr & logx) != ((lhat >> i2) & 1):
                    corr ^= logz
                sur_f[base + i2] ^= corr
                if is_failure(sur_e[base + i2], sur_f[base + i2],
                              hz, hx, logx, logz, target):
                    failures += 1
    return failures


distill_rate_kernel = _maybe_jit(_distill_rate_kernel)


def _fidelity_kernel(draws, p, n, m, k, wires, table, hz, logz, cosx,
                     use_saving):
    """Correctable-block count for the X-only channel fidelity estimate.

    Per trial, every qubit of every block flips independently with
    probability p.  With use_saving != 0, syndromes are recovered through
    the ancilla-saving wiring `wires` (one m-bit mask per shared ancilla)
    and the classical decode table; otherwise each block's true syndrome is
    used.  A block counts as correctable when the coset-leader correction
    leaves a residual with zero syndrome and zero logical-Z parity.
    """
    rz = hz.shape[0]
    r = wires.shape[0]
    e = np.zeros(m, np.int64)
    sig = np.zeros(max(r, 1), np.int64)
    stil = np.zeros(m, np.int64)
    good = 0
    for trial in range(draws.shape[0]):
        d = draws[trial]
        off = 0
        for b in range(m):
            eb = 0
            for q in range(n):
                if d[off] < p:
                    eb ^= 1 << q
                off += 1
            e[b] = eb
        if use_saving != 0:
            for j in range(r):
                acc = 0
                for b in range(m):
                    if (wires[j] >> b) & 1:
                        acc ^= e[b]
                sig[j] = syndrome_bits(acc, hz)
            for b in range(m):
                stil[b] = 0
            for j in range(rz):
                syn = 0
                for u in range(r):
                    syn |= ((sig[u] >> j) & 1) << u
                ehat = table[syn]
                for b in range(m):
                    if (ehat >> b) & 1:
                        stil[b] |= 1 << j
        else:
            for b in range(m):
                stil[b] = syndrome_bits(e[b], hz)
        for b in range(m):
            res = e[b] ^ cosx[stil[b]]
            if syndrome_bits(res, hz) == 0 and parity64(res & logz) == 0:
                good += 1
    return good


fidelity_kernel = _maybe_jit(_fidelity_kernel)
