"""Pure-Python decoding and forward-backward kernels.

Reference implementations of the hot inner loops.  The compiled extension
(``morphtag._speedups``) mirrors these loops operation for operation so the
two backends produce bit-identical floats; keep them in lockstep when
editing either one.

Array layout shared by both backends: positions hold "options" (one option
per allowed tag), flattened into parallel arrays with an offsets table.
``opt_tags[offsets[i]:offsets[i+1]]`` are the tag indices allowed at
position i, in ascending order; transition matrices have one row per real
tag (0..K-1) plus a final row K for the sentence-initial pseudo-tag.
"""

from __future__ import annotations

import math

NEG_INF = float("-inf")


def _as_list(a):
    return a.tolist() if hasattr(a, "tolist") else list(a)


def viterbi_kernel(opt_tags, opt_emits, offsets, log_trans, n_tags):
    """Max-probability path over per-position tag options.

    ``opt_emits`` holds log emission scores per option; ``log_trans`` is the
    (K+1) x K log transition matrix.  Returns (path, score) where ``path``
    lists the chosen local option index per position.  Score ``-inf`` means
    every path is structurally forbidden.  Ties resolve to the lowest tag
    index at the latest differing position because options are scanned in
    ascending tag order and only strict improvements replace the incumbent.
    """
    tags = _as_list(opt_tags)
    emits = _as_list(opt_emits)
    offs = _as_list(offsets)
    trans = _as_list(log_trans)
    n = len(offs) - 1

    bos_row = trans[n_tags]
    scores = []
    for o in range(offs[0], offs[1]):
        scores.append(bos_row[tags[o]] + emits[o])

    backs = []
    for i in range(1, n):
        plo, phi = offs[i - 1], offs[i]
        lo, hi = offs[i], offs[i + 1]
        new_scores = []
        back_i = []
        for o in range(lo, hi):
            c = tags[o]
            e = emits[o]
            best = NEG_INF
            best_p = 0
            for pj in range(phi - plo):
                p = plo + pj
                cand = scores[pj] + (trans[tags[p]][c] + e)
                if cand > best:
                    best = cand
                    best_p = pj
            new_scores.append(best)
            back_i.append(best_p)
        scores = new_scores
        backs.append(back_i)

    best = NEG_INF
    best_o = 0
    for oj, s in enumerate(scores):
        if s > best:
            best = s
            best_o = oj

    path = [0] * n
    path[n - 1] = best_o
    for i in range(n - 2, -1, -1):
        path[i] = backs[i][path[i + 1]]
    return path, best


def forward_backward_kernel(opt_tags, opt_emits, offsets, trans, n_tags):
    """Scaled forward-backward pass over per-position tag options.

    ``opt_emits`` holds emission probabilities (linear space); scaling
    constants keep the recursion in range and their logs sum to the
    sentence log-likelihood.  Returns (loglik, gamma, trans_counts):
    ``gamma`` is the posterior per option, ``trans_counts`` the expected
    transition counts as a (K+1) x K nested list whose last row collects
    the sentence-initial transitions.  A zero scaling constant (no legal
    path) returns (-inf, None, None).
    """
    tags = _as_list(opt_tags)
    emits = _as_list(opt_emits)
    offs = _as_list(offsets)
    tr = _as_list(trans)
    n = len(offs) - 1
    total = offs[n]

    alpha = [0.0] * total
    scale = [0.0] * n

    c = 0.0
    for o in range(offs[0], offs[1]):
        v = tr[n_tags][tags[o]] * emits[o]
        alpha[o] = v
        c += v
    if c <= 0.0:
        return NEG_INF, None, None
    inv = 1.0 / c
    for o in range(offs[0], offs[1]):
        alpha[o] *= inv
    scale[0] = c
    loglik = math.log(c)

    for i in range(1, n):
        plo, phi = offs[i - 1], offs[i]
        lo, hi = offs[i], offs[i + 1]
        c = 0.0
        for o in range(lo, hi):
            col = tags[o]
            s = 0.0
            for p in range(plo, phi):
                s += alpha[p] * tr[tags[p]][col]
            v = s * emits[o]
            alpha[o] = v
            c += v
        if c <= 0.0:
            return NEG_INF, None, None
        inv = 1.0 / c
        for o in range(lo, hi):
            alpha[o] *= inv
        scale[i] = c
        loglik += math.log(c)

    beta = [0.0] * total
    for o in range(offs[n - 1], offs[n]):
        beta[o] = 1.0
    for i in range(n - 2, -1, -1):
        lo, hi = offs[i], offs[i + 1]
        nlo, nhi = offs[i + 1], offs[i + 2]
        ci = scale[i + 1]
        for p in range(lo, hi):
            row = tr[tags[p]]
            s = 0.0
            for o in range(nlo, nhi):
                s += row[tags[o]] * emits[o] * beta[o]
            beta[p] = s / ci

    gamma = [alpha[o] * beta[o] for o in range(total)]

    tc = [[0.0] * n_tags for _ in range(n_tags + 1)]
    bos = tc[n_tags]
    for o in range(offs[0], offs[1]):
        bos[tags[o]] += gamma[o]
    for i in range(1, n):
        plo, phi = offs[i - 1], offs[i]
        lo, hi = offs[i], offs[i + 1]
        ci = scale[i]
        for p in range(plo, phi):
            ap = alpha[p]
            row = tr[tags[p]]
            out = tc[tags[p]]
            for o in range(lo, hi):
                out[tags[o]] += ap * row[tags[o]] * emits[o] * beta[o] / ci
    return loglik, gamma, tc
