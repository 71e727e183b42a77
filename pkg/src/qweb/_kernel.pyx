# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled crossing-sum kernels.

Same contract as qweb._pykernel.crossing_sum, with int64 coefficients.  The
caller checks beforehand that |S| * 2^r fits in 62 bits, which bounds every
coefficient the kernel can produce.
"""
from libc.stdlib cimport malloc, calloc, realloc, free
from libc.stdint cimport int64_t


cdef inline int cartan(int i, int j) nogil:
    if i == j:
        return 2
    if i - j == 1 or j - i == 1:
        return -1
    return 0


def crossing_sum(lam_pair, letters, cands, prefix=()):
    cdef int r = len(letters)
    cdef int P = len(prefix)
    if r == 0:
        return 0, [1], 1, 0

    cdef int nl = len(lam_pair)
    cdef int i, j, t, c, N, absN, e, D, D2, W, B, maxlam, ncand
    cdef long long leaves = 0, nodes = 0

    cdef int *lam = <int *> malloc(nl * sizeof(int))
    cdef int *let = <int *> malloc(r * sizeof(int))
    cdef int *cstart = <int *> malloc((r + 1) * sizeof(int))
    cdef int *img = <int *> malloc(r * sizeof(int))
    cdef int *idx = <int *> calloc(r, sizeof(int))
    cdef int *span = <int *> calloc(r + 1, sizeof(int))
    cdef char *used = <char *> calloc(r + 2, sizeof(char))
    cdef int *cflat
    cdef int64_t *polys
    cdef int64_t *total
    cdef int64_t *par
    cdef int64_t *ch
    cdef int64_t x, y

    maxlam = 0
    for i in range(nl):
        lam[i] = lam_pair[i]
        if lam[i] > maxlam:
            maxlam = lam[i]
        if -lam[i] > maxlam:
            maxlam = -lam[i]
    for t in range(r):
        let[t] = letters[t]

    # flatten candidate lists, honouring the fixed prefix
    ncand = 0
    for t in range(r):
        ncand += 1 if t < P else len(cands[t])
    cflat = <int *> malloc((ncand + 1) * sizeof(int))
    j = 0
    for t in range(r):
        cstart[t] = j
        if t < P:
            cflat[j] = prefix[t]
            j += 1
        else:
            for c in cands[t]:
                cflat[j] = c
                j += 1
    cstart[r] = j

    # |N_t| <= maxlam + 2t, so the degree never exceeds B
    B = 0
    for t in range(r):
        B += maxlam + 2 * t
    W = 2 * B + 1
    polys = <int64_t *> calloc((r + 1) * W, sizeof(int64_t))
    total = <int64_t *> calloc(W, sizeof(int64_t))
    polys[B] = 1
    span[0] = 0

    try:
        with nogil:
            t = 0
            while t >= 0:
                # next admissible candidate at depth t
                N = 0
                c = -1
                while cstart[t] + idx[t] < cstart[t + 1]:
                    c = cflat[cstart[t] + idx[t]]
                    idx[t] += 1
                    if used[c]:
                        c = -1
                        continue
                    N = lam[let[t]]
                    for j in range(t):
                        if img[j] < c:
                            N -= cartan(let[j], let[t])
                    if N == 0:
                        c = -1
                        continue
                    break
                if c < 0:
                    idx[t] = 0
                    t -= 1
                    if t >= 0:
                        used[img[t]] = 0
                    continue

                if t >= P:
                    nodes += 1
                D = span[t]
                absN = N if N > 0 else -N
                D2 = D + absN
                par = polys + t * W + B
                if t == r - 1:
                    leaves += 1
                    # total += par * (q^N - q^-N)
                    for e in range(-D, D + 1):
                        x = par[e]
                        if x != 0:
                            total[B + e + N] += x
                            total[B + e - N] -= x
                    continue
                ch = polys + (t + 1) * W + B
                for e in range(-D2, D2 + 1):
                    x = 0
                    y = 0
                    if -D <= e - N <= D:
                        x = par[e - N]
                    if -D <= e + N <= D:
                        y = par[e + N]
                    ch[e] = x - y
                span[t + 1] = D2
                img[t] = c
                used[c] = 1
                t += 1

        lo = None
        out = []
        for e in range(W):
            if total[e] != 0:
                if lo is None:
                    lo = e
                hi = e
        if lo is None:
            return 0, [], leaves, nodes
        out = [total[e] for e in range(lo, hi + 1)]
        return lo - B, out, leaves, nodes
    finally:
        free(lam)
        free(let)
        free(cstart)
        free(img)
        free(idx)
        free(span)
        free(used)
        free(cflat)
        free(polys)
        free(total)


# ---------------------------------------------------------------------------
# grouped sum, multi-modular

_PRIMES = []


def _is_prime(long long p):
    cdef long long d = 3
    if p % 2 == 0:
        return p == 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def primes(int count):
    """The `count` largest primes below 2^31."""
    cdef long long p
    p = (_PRIMES[len(_PRIMES) - 1] if _PRIMES else (1 << 31)) - 1
    while len(_PRIMES) < count:
        if _is_prime(p):
            _PRIMES.append(p)
        p -= 1
    return _PRIMES[:count]


cdef int _dp_mod(int nsteps, int *nst, int *tstart, int *tsrc, int *tdst, int *fstart,
                 int *fe, int64_t *fc, int *M, int64_t p, int64_t *out, int Wout) nogil:
    """Run the layered DP modulo p; out receives the final layer summed (width Wout,
    centred).  Returns 0, or -1 on allocation failure."""
    cdef int t, k, f, e, B, B2, W, W2, s
    cdef int64_t *cur
    cdef int64_t *nxt
    cdef int64_t *src
    cdef int64_t *dst
    cdef int64_t v, c
    B = 0
    W = 1
    cur = <int64_t *> calloc(nst[0], sizeof(int64_t))
    if cur == NULL:
        return -1
    cur[0] = 1
    for t in range(nsteps):
        B2 = B + M[t]
        W2 = 2 * B2 + 1
        nxt = <int64_t *> calloc(<size_t> nst[t + 1] * W2, sizeof(int64_t))
        if nxt == NULL:
            free(cur)
            return -1
        for k in range(tstart[t], tstart[t + 1]):
            src = cur + <size_t> tsrc[k] * W + B
            dst = nxt + <size_t> tdst[k] * W2 + B2
            for f in range(fstart[k], fstart[k + 1]):
                c = fc[f] % p
                if c < 0:
                    c += p
                for e in range(-B, B + 1):
                    v = src[e]
                    if v != 0:
                        dst[e + fe[f]] = (dst[e + fe[f]] + v * c) % p
        free(cur)
        cur = nxt
        B = B2
        W = W2
    for s in range(nst[nsteps]):
        for e in range(-B, B + 1):
            out[Wout // 2 + e] = (out[Wout // 2 + e] + cur[<size_t> s * W + B + e]) % p
    free(cur)
    return 0


cdef int _grow(void **buf, Py_ssize_t *cap, Py_ssize_t need, size_t item) except -1:
    cdef Py_ssize_t c = cap[0]
    cdef void *p
    if need <= c:
        return 0
    while c < need:
        c = 2 * c + 16
    p = realloc(buf[0], c * item)
    if p == NULL:
        raise MemoryError()
    buf[0] = p
    cap[0] = c
    return 0


def grouped_sum(lam_pair, letters, other):
    """Same contract as qweb._pykernel.grouped_sum.

    The layered state graph is built in C (states keyed by a mixed-radix code
    of the group counts); the DP then runs modulo enough 31-bit primes to pin
    every coefficient and the residues are combined.
    """
    from ._pykernel import _a, group_structure

    gl, gs = group_structure(other)
    cdef int G = len(gl)
    cdef int r = len(letters)
    radix = 1
    for s in gs:
        radix *= s + 1
    if radix >= (1 << 62):
        from ._pykernel import grouped_sum as slow
        return slow(lam_pair, letters, other)

    cdef int nl = len(lam_pair)
    cdef int i, j, g, h, k, t, x, N0, e, nf, mt, Btot = 0, Wout, rc
    cdef int maxlet = 0
    cdef Py_ssize_t si, di, ns_cur, ns_new, ntr = 0, nfac = 0
    cdef Py_ssize_t cap_cnt = 0, cap_new = 0, cap_tr = 0, cap_f = 0
    cdef int64_t code, p

    for y in gl:
        if y > maxlet:
            maxlet = y
    for y in letters:
        if y > maxlet:
            maxlet = y
    cdef int *lam = <int *> calloc(maxlet + 2, sizeof(int))
    cdef int *gsz = <int *> malloc((G + 1) * sizeof(int))
    cdef int64_t *stride = <int64_t *> malloc((G + 1) * sizeof(int64_t))
    cdef int *adj_start = <int *> malloc((G + 1) * sizeof(int))
    cdef int *adj_h = <int *> malloc((G * G + 1) * sizeof(int))
    cdef int *adj_a = <int *> malloc((G * G + 1) * sizeof(int))
    cdef int *let_start = <int *> calloc(maxlet + 3, sizeof(int))
    cdef int *let_g = <int *> malloc((G + 1) * sizeof(int))
    cdef int *nst = <int *> malloc((r + 1) * sizeof(int))
    cdef int *tstart = <int *> malloc((r + 1) * sizeof(int))
    cdef int *M = <int *> malloc((r + 1) * sizeof(int))
    cdef int *cnt = NULL
    cdef int *cnt_new = NULL
    cdef int *tsrc = NULL
    cdef int *tdst = NULL
    cdef int *fstart = NULL
    cdef int *fe = NULL
    cdef int64_t *fc = NULL
    cdef int64_t *out = NULL
    cdef int *tmp
    try:
        for i in range(min(nl, maxlet + 2)):
            lam[i] = lam_pair[i]
        code = 1
        j = 0
        for g in range(G):
            gsz[g] = gs[g]
            stride[g] = code
            code *= gs[g] + 1
            adj_start[g] = j
            for h in range(g):
                if -1 <= gl[h] - gl[g] <= 1:
                    adj_h[j] = h
                    adj_a[j] = _a(gl[h], gl[g])
                    j += 1
        adj_start[G] = j
        # groups by letter, in increasing group order
        for g in range(G):
            let_start[<int> gl[g] + 1] += 1
        for x in range(1, maxlet + 3):
            let_start[x] += let_start[x - 1]
        tmp = <int *> calloc(maxlet + 2, sizeof(int))
        for g in range(G):
            x = gl[g]
            let_g[let_start[x] + tmp[x]] = g
            tmp[x] += 1
        free(tmp)

        _grow(<void **> &cnt, &cap_cnt, G + 1, sizeof(int))
        for g in range(G):
            cnt[g] = 0
        ns_cur = 1
        nst[0] = 1
        absb = [1]
        states = 1
        for t in range(r):
            x = letters[t]
            tstart[t] = ntr
            mt = 0
            index = {}
            nb = []
            ns_new = 0
            if 0 < x <= maxlet:
                for si in range(ns_cur):
                    for j in range(let_start[x], let_start[x + 1]):
                        g = let_g[j]
                        k = cnt[si * G + g]
                        if k >= gsz[g]:
                            continue
                        N0 = lam[x]
                        for i in range(adj_start[g], adj_start[g + 1]):
                            N0 -= adj_a[i] * cnt[si * G + adj_h[i]]
                        if N0 == k:
                            continue  # factor is (q - q^-1)[N0 - k][k + 1] = 0
                        code = 0
                        for h in range(G):
                            code += cnt[si * G + h] * stride[h]
                        code += stride[g]
                        d = index.get(code)
                        if d is None:
                            di = ns_new
                            index[code] = di
                            ns_new += 1
                            _grow(<void **> &cnt_new, &cap_new, ns_new * G + 1, sizeof(int))
                            for h in range(G):
                                cnt_new[di * G + h] = cnt[si * G + h]
                            cnt_new[di * G + g] += 1
                            nb.append(0)
                        else:
                            di = d
                        if ntr + 1 > cap_tr:
                            _grow(<void **> &tsrc, &cap_tr, ntr + 1, sizeof(int))
                            tdst = <int *> realloc(tdst, cap_tr * sizeof(int))
                            fstart = <int *> realloc(fstart, (cap_tr + 1) * sizeof(int))
                            if tdst == NULL or fstart == NULL:
                                raise MemoryError()
                        tsrc[ntr] = si
                        tdst[ntr] = di
                        fstart[ntr] = nfac
                        nf = 0
                        for i in range(k + 1):
                            if 0 <= N0 - i <= k:
                                continue
                            if nfac + 2 > cap_f:
                                _grow(<void **> &fe, &cap_f, nfac + 2, sizeof(int))
                                fc = <int64_t *> realloc(fc, cap_f * sizeof(int64_t))
                                if fc == NULL:
                                    raise MemoryError()
                            e = N0 - 2 * i
                            fe[nfac] = e
                            fc[nfac] = 1
                            fe[nfac + 1] = -e
                            fc[nfac + 1] = -1
                            nfac += 2
                            nf += 2
                            if e > mt:
                                mt = e
                            if -e > mt:
                                mt = -e
                        nb[di] += absb[si] * nf
                        ntr += 1
            tstart[t + 1] = ntr
            M[t] = mt
            Btot += mt
            nst[t + 1] = ns_new
            states += ns_new
            tmp = cnt
            cnt = cnt_new
            cnt_new = tmp
            i = cap_cnt
            cap_cnt = cap_new
            cap_new = i
            ns_cur = ns_new
            absb = nb
            if ns_cur == 0:
                return 0, [], states
        if fstart != NULL:
            fstart[ntr] = nfac
        bound = sum(absb)
        if bound == 0:
            return 0, [], states
        Wout = 2 * Btot + 1
        out = <int64_t *> malloc(Wout * sizeof(int64_t))

        mods = []
        residues = []
        modulus = 1
        while modulus <= 2 * bound:
            p = primes(len(mods) + 1)[len(mods)]
            for i in range(Wout):
                out[i] = 0
            with nogil:
                rc = _dp_mod(r, nst, tstart, tsrc, tdst, fstart, fe, fc, M, p, out, Wout)
            if rc != 0:
                raise MemoryError("grouped kernel ran out of memory")
            mods.append(p)
            residues.append([out[i] for i in range(Wout)])
            modulus *= p

        # Chinese remaindering to the symmetric range
        coeffs = [0] * Wout
        acc_mod = 1
        for q_, res in zip(mods, residues):
            inv = pow(acc_mod % q_, -1, q_)
            for i in range(Wout):
                c = coeffs[i]
                coeffs[i] = c + acc_mod * (((res[i] - c) * inv) % q_)
            acc_mod *= q_
        half = acc_mod // 2
        coeffs = [c - acc_mod if c > half else c for c in coeffs]
        nz = [i for i in range(Wout) if coeffs[i]]
        if not nz:
            return 0, [], states
        return nz[0] - Btot, coeffs[nz[0]:nz[len(nz) - 1] + 1], states
    finally:
        free(lam)
        free(gsz)
        free(stride)
        free(adj_start)
        free(adj_h)
        free(adj_a)
        free(let_start)
        free(let_g)
        free(nst)
        free(tstart)
        free(M)
        free(cnt)
        free(cnt_new)
        free(tsrc)
        free(tdst)
        free(fstart)
        free(fe)
        free(fc)
        free(out)
