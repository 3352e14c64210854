"""Pure-Python kernels; the reference twin of ``_ckernels.pyx``.

Words over the signed state alphabet are ``bytes``: index ``s < n`` is a state,
``s + n`` its formal inverse.  ``delta``/``lam`` are flattened ``2n x K`` tables
of ``m + m^-1``.  A state word acts rightmost letter first.
"""

from collections import deque

BACKEND = "python"


def normalize(word, n, trivial):
    """Drop trivially acting letters and freely reduce."""
    stack = bytearray()
    for s in word:
        if trivial[s]:
            continue
        if stack:
            t = stack[-1]
            if t == s + n or s == t + n:
                stack.pop()
                continue
        stack.append(s)
    return bytes(stack)


def step(delta, lam, K, word, a):
    sec = bytearray(word)
    for i in range(len(word) - 1, -1, -1):
        idx = word[i] * K + a
        sec[i] = delta[idx]
        a = lam[idx]
    return a, bytes(sec)


def apply(delta, lam, K, word, inp):
    out = bytearray()
    cur = word
    for a in inp:
        b, cur = step(delta, lam, K, cur, a)
        out.append(b)
    return bytes(out), cur


def is_identity(delta, lam, K, n, trivial, word, limit):
    """1 if ``word`` acts trivially, 0 if not, -1 if more than ``limit`` sections were seen."""
    start = normalize(word, n, trivial)
    if not start:
        return 1
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for a in range(K):
            b, sec = step(delta, lam, K, w, a)
            if b != a:
                return 0
            sec = normalize(sec, n, trivial)
            if sec and sec not in seen:
                if limit and len(seen) >= limit:
                    return -1
                seen.add(sec)
                queue.append(sec)
    return 1


def same_action(delta, lam, K, u, v, limit):
    """Bisimulation test for two positive state words; same return codes as is_identity."""
    if u == v:
        return 1
    seen = {(u, v)}
    queue = deque([(u, v)])
    while queue:
        x, y = queue.popleft()
        for a in range(K):
            bx, sx = step(delta, lam, K, x, a)
            by, sy = step(delta, lam, K, y, a)
            if bx != by:
                return 0
            if sx != sy and (sx, sy) not in seen:
                if limit and len(seen) >= limit:
                    return -1
                seen.add((sx, sy))
                queue.append((sx, sy))
    return 1


def dual_read(delta, lam, K, a, word):
    """Letter ``a`` reads ``word`` left to right as a state of the dual."""
    out = bytearray(word)
    for i in range(len(word)):
        idx = word[i] * K + a
        out[i] = delta[idx]
        a = lam[idx]
    return bytes(out), a
