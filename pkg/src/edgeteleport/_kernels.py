"""Batched trial kernels for the Monte Carlo runner.

These are the hot inner loops: one call runs every trial of a batch against
precomputed 64x64 matrices (fused gate/projector/correction products, the
integer-spin class projector and the per-sector relaxation projectors).  They
are compiled with numba when the backend allows it and are written so the
same code runs as plain numpy otherwise.

Randomness never enters here; callers pregenerate per-trial uniforms from the
same seeded streams the step-by-step library path draws from, so both backends
make identical branch decisions.

Error signalling (kernels cannot raise meaningfully from nopython mode):
``out_rounds[i] = -1`` marks a trial that hit the restart cap and ``-2`` a
relaxation target failure; callers turn these into exceptions.
"""

from __future__ import annotations

import numpy as np

from ._backend import maybe_njit


@maybe_njit(cache=True)
def _norm2(x):
    s = 0.0
    for d in range(x.shape[0]):
        s += x[d].real ** 2 + x[d].imag ** 2
    return s


@maybe_njit(cache=True)
def _bob_fidelity(psi, g1, g2, b_up, b_dn, b_sign):
    # Reduced spin state of the singly occupied b wire against (g1, g2).
    r00 = 0.0
    r11 = 0.0
    r01 = 0.0 + 0.0j
    for k in range(b_up.shape[0]):
        au = psi[b_up[k]]
        ad = psi[b_dn[k]]
        r00 += au.real ** 2 + au.imag ** 2
        r11 += ad.real ** 2 + ad.imag ** 2
        r01 += b_sign[k] * au * np.conj(ad)
    tr = r00 + r11
    if tr <= 0.0:
        return 0.0
    val = (
        (g1.real ** 2 + g1.imag ** 2) * r00
        + (g2.real ** 2 + g2.imag ** 2) * r11
        + 2.0 * (np.conj(g1) * r01 * g2).real
    )
    v = val / tr
    if v < 0.0:
        v = 0.0
    return np.sqrt(v)


@maybe_njit(cache=True)
def _pick_branch(psi, branch_mats, u, ys, probs):
    k_count = branch_mats.shape[0]
    for k in range(k_count):
        y = branch_mats[k] @ psi
        ys[k] = y
        probs[k] = _norm2(y)
    k_sel = k_count - 1
    acc = 0.0
    for k in range(k_count):
        acc += probs[k]
        if u < acc:
            k_sel = k
            break
    return k_sel


@maybe_njit(cache=True)
def electronic_batch(s_up, s_dn, g1s, g2s, branch_mats, u_branch,
                     b_up, b_dn, b_sign, out_branch, out_fid):
    n = g1s.shape[0]
    k_count, dim = branch_mats.shape[0], branch_mats.shape[1]
    ys = np.empty((k_count, dim), np.complex128)
    probs = np.empty(k_count)
    for i in range(n):
        psi = g1s[i] * s_up + g2s[i] * s_dn
        k_sel = _pick_branch(psi, branch_mats, u_branch[i], ys, probs)
        post = ys[k_sel] / np.sqrt(probs[k_sel])
        out_branch[i] = k_sel
        out_fid[i] = _bob_fidelity(post, g1s[i], g2s[i], b_up, b_dn, b_sign)


@maybe_njit(cache=True)
def coldatom_batch(s_up, s_dn, g1s, g2s, p_int, sect_projs, ground_projs,
                   branch_mats, uniforms, b_up, b_dn, b_sign,
                   out_branch, out_rounds, out_fid):
    n = g1s.shape[0]
    k_count, dim = branch_mats.shape[0], branch_mats.shape[1]
    n_sect = sect_projs.shape[0]
    cap = uniforms.shape[1] - 1
    ys = np.empty((k_count, dim), np.complex128)
    probs = np.empty(k_count)
    for i in range(n):
        psi = g1s[i] * s_up + g2s[i] * s_dn
        rounds = 0
        status = 0  # 0 running, 1 success, -1 cap hit, -2 relax failure
        while rounds < cap:
            rounds += 1
            x = p_int @ psi
            p = _norm2(x)
            if uniforms[i, rounds - 1] < p:
                psi = x / np.sqrt(p)
                status = 1
                break
            y = psi - x
            psi = y / np.sqrt(_norm2(y))
            acc = np.zeros(dim, np.complex128)
            bad = False
            for s in range(n_sect):
                xs = sect_projs[s] @ psi
                w2 = _norm2(xs)
                if w2 <= 1e-24:
                    continue
                yg = ground_projs[s] @ xs
                wy2 = _norm2(yg)
                if wy2 < 1e-20 * w2:
                    bad = True
                    break
                acc += yg * np.sqrt(w2 / wy2)
            if bad:
                status = -2
                break
            psi = acc / np.sqrt(_norm2(acc))
        if status != 1:
            out_branch[i] = -1
            out_rounds[i] = status if status != 0 else -1
            out_fid[i] = np.nan
            continue
        k_sel = _pick_branch(psi, branch_mats, uniforms[i, rounds], ys, probs)
        post = ys[k_sel] / np.sqrt(probs[k_sel])
        out_branch[i] = k_sel
        out_rounds[i] = rounds
        out_fid[i] = _bob_fidelity(post, g1s[i], g2s[i], b_up, b_dn, b_sign)
