# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_pykernels``.

Inputs are read through raw pointers and results are built in malloc'd scratch
space: most words here are a few letters long, so per-call buffer setup would
dominate the loops.
"""

from collections import deque

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

BACKEND = "cython"

ctypedef const unsigned char* cbuf


cdef inline unsigned char* _alloc(Py_ssize_t n) except NULL:
    # scratch space; never write into bytes objects, CPython shares those of length <= 1
    cdef unsigned char* p = <unsigned char*>malloc(n + 1)
    if p == NULL:
        raise MemoryError()
    return p


cdef inline bytes _bytes(unsigned char* p, Py_ssize_t n):
    return PyBytes_FromStringAndSize(<char*>p, n)


cdef Py_ssize_t _normalize_into(cbuf w, Py_ssize_t L, int n, cbuf trivial, unsigned char* st):
    cdef Py_ssize_t i, top = 0
    cdef unsigned char s, t
    for i in range(L):
        s = w[i]
        if trivial[s]:
            continue
        if top > 0:
            t = st[top - 1]
            if t == s + n or s == t + n:
                top -= 1
                continue
        st[top] = s
        top += 1
    return top


cdef bytes _normalize(bytes word, int n, bytes trivial):
    cdef Py_ssize_t L = len(word)
    cdef unsigned char* st = <unsigned char*>malloc(L + 1)
    cdef Py_ssize_t top
    if st == NULL:
        raise MemoryError()
    try:
        top = _normalize_into(word, L, n, trivial, st)
        return PyBytes_FromStringAndSize(<char*>st, top)
    finally:
        free(st)


def normalize(word, int n, trivial):
    return _normalize(bytes(word), n, bytes(trivial))


cdef inline int _step_into(cbuf delta, cbuf lam, int K, cbuf w, Py_ssize_t L, int a, unsigned char* sec) noexcept:
    cdef Py_ssize_t i
    cdef int idx
    for i in range(L - 1, -1, -1):
        idx = w[i] * K + a
        sec[i] = delta[idx]
        a = lam[idx]
    return a


def step(delta, lam, int K, word, int a):
    cdef bytes d = bytes(delta), l = bytes(lam), w = bytes(word)
    cdef Py_ssize_t L = len(w)
    cdef unsigned char* sec = _alloc(L)
    try:
        b = _step_into(d, l, K, w, L, a, sec)
        return b, _bytes(sec, L)
    finally:
        free(sec)


def apply(delta, lam, int K, word, inp):
    cdef bytes d = bytes(delta), l = bytes(lam), w = bytes(word), x = bytes(inp)
    cdef Py_ssize_t L = len(w), n = len(x), i
    cdef cbuf xp = x
    cdef unsigned char* out = _alloc(n)
    cdef unsigned char* base = _alloc(2 * L + 1)
    cdef unsigned char* cur = base
    cdef unsigned char* nxt = base + L + 1
    cdef unsigned char* tmp
    try:
        memcpy(cur, <cbuf>w, L)
        for i in range(n):
            out[i] = _step_into(d, l, K, cur, L, xp[i], nxt)
            tmp = cur
            cur = nxt
            nxt = tmp
        return _bytes(out, n), _bytes(cur, L)
    finally:
        free(out)
        free(base)


def is_identity(delta, lam, int K, int n, trivial, word, Py_ssize_t limit):
    cdef bytes d = bytes(delta), l = bytes(lam), tv = bytes(trivial)
    cdef bytes start = _normalize(bytes(word), n, tv)
    cdef bytes w, sec
    cdef Py_ssize_t L, top
    cdef int a
    cdef unsigned char* buf
    cdef unsigned char* st
    if len(start) == 0:
        return 1
    seen = {start}
    queue = deque([start])
    buf = <unsigned char*>malloc(2 * len(start) + 2)
    if buf == NULL:
        raise MemoryError()
    st = buf + len(start) + 1
    try:
        while queue:
            w = queue.popleft()
            L = len(w)
            for a in range(K):
                if _step_into(d, l, K, w, L, a, buf) != a:
                    return 0
                top = _normalize_into(buf, L, n, tv, st)
                if top == 0:
                    continue
                sec = PyBytes_FromStringAndSize(<char*>st, top)
                if sec not in seen:
                    if limit and len(seen) >= limit:
                        return -1
                    seen.add(sec)
                    queue.append(sec)
        return 1
    finally:
        free(buf)


def same_action(delta, lam, int K, u, v, Py_ssize_t limit):
    cdef bytes d = bytes(delta), l = bytes(lam)
    cdef bytes x, y, sx, sy
    cdef Py_ssize_t lx, ly
    cdef int a, ox, oy
    cdef unsigned char* bx
    cdef unsigned char* by
    u = bytes(u)
    v = bytes(v)
    if u == v:
        return 1
    seen = {(u, v)}
    queue = deque([(u, v)])
    # sections keep the length of their word, so one buffer per side suffices
    bx = _alloc(len(u))
    by = _alloc(len(v))
    try:
        while queue:
            x, y = queue.popleft()
            lx, ly = len(x), len(y)
            for a in range(K):
                ox = _step_into(d, l, K, x, lx, a, bx)
                oy = _step_into(d, l, K, y, ly, a, by)
                if ox != oy:
                    return 0
                sx = _bytes(bx, lx)
                sy = _bytes(by, ly)
                if sx != sy:
                    pair = (sx, sy)
                    if pair not in seen:
                        if limit and len(seen) >= limit:
                            return -1
                        seen.add(pair)
                        queue.append(pair)
        return 1
    finally:
        free(bx)
        free(by)


def dual_read(delta, lam, int K, int a, word):
    cdef bytes db = bytes(delta), lb = bytes(lam), wb = bytes(word)
    cdef cbuf d = db
    cdef cbuf l = lb
    cdef cbuf w = wb
    cdef Py_ssize_t i, L = len(wb)
    cdef unsigned char* o = _alloc(L)
    cdef int idx
    try:
        for i in range(L):
            idx = w[i] * K + a
            o[i] = d[idx]
            a = l[idx]
        return _bytes(o, L), a
    finally:
        free(o)
