# cython: boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``; same signatures, same results."""

from libc.stdlib cimport free, malloc


cdef int _code_into(int start, int size, int* succ, int* pred,
                    int* label, int* order, int* code) noexcept:
    cdef int i, j, t, nb, count, k
    for i in range(size):
        label[i] = -1
    order[0] = start
    label[start] = 0
    count = 1
    i = 0
    while i < count:
        t = order[i]
        i += 1
        for k in range(3):
            if k == 0:
                nb = succ[t]
            elif k == 1:
                nb = pred[t]
            else:
                nb = t ^ 1
            if nb >= 0 and label[nb] < 0:
                label[nb] = count
                order[count] = nb
                count += 1
    for j in range(count):
        t = order[j]
        code[2 * j] = label[succ[t]] if succ[t] >= 0 else -1
        code[2 * j + 1] = label[t ^ 1]
    return count


def canonical_code(succ_in):
    cdef int size = len(succ_in)
    cdef int i, start, best_start = -1, cmp, count, best_count = 0
    cdef int* succ = <int*> malloc(size * sizeof(int))
    cdef int* pred = <int*> malloc(size * sizeof(int))
    cdef int* label = <int*> malloc(size * sizeof(int))
    cdef int* order = <int*> malloc(size * sizeof(int))
    cdef int* code = <int*> malloc(2 * size * sizeof(int))
    cdef int* best = <int*> malloc(2 * size * sizeof(int))
    try:
        for i in range(size):
            succ[i] = succ_in[i]
            pred[i] = -1
        for i in range(size):
            if succ[i] >= 0:
                pred[succ[i]] = i
        for start in range(size):
            count = _code_into(start, size, succ, pred, label, order, code)
            if best_start < 0:
                cmp = -1
            else:
                cmp = 0
                for i in range(2 * min(count, best_count)):
                    if code[i] != best[i]:
                        cmp = -1 if code[i] < best[i] else 1
                        break
                if cmp == 0 and count < best_count:
                    cmp = -1
            if cmp < 0:
                for i in range(2 * count):
                    best[i] = code[i]
                best_count = count
                best_start = start
        return tuple([best[i] for i in range(2 * best_count)]), best_start
    finally:
        free(succ)
        free(pred)
        free(label)
        free(order)
        free(code)
        free(best)


def traversal_order(int start, succ_in):
    cdef int size = len(succ_in)
    cdef int i, count
    cdef int* succ = <int*> malloc(size * sizeof(int))
    cdef int* pred = <int*> malloc(size * sizeof(int))
    cdef int* label = <int*> malloc(size * sizeof(int))
    cdef int* order = <int*> malloc(size * sizeof(int))
    cdef int* code = <int*> malloc(2 * size * sizeof(int))
    try:
        for i in range(size):
            succ[i] = succ_in[i]
            pred[i] = -1
        for i in range(size):
            if succ[i] >= 0:
                pred[succ[i]] = i
        count = _code_into(start, size, succ, pred, label, order, code)
        return [order[i] for i in range(count)]
    finally:
        free(succ)
        free(pred)
        free(label)
        free(order)
        free(code)


def phi_pairs(succ_in, fsucc_in):
    cdef int size = len(succ_in)
    cdef int t, u, h, head, n, m, length, plen, i
    cdef int* succ = <int*> malloc(size * sizeof(int))
    cdef int* fsucc = <int*> malloc(size * sizeof(int))
    cdef int* pred = <int*> malloc(size * sizeof(int))
    cdef int* fpred = <int*> malloc(size * sizeof(int))
    cdef int* mark = <int*> malloc(size * sizeof(int))
    pairs = []
    try:
        for t in range(size):
            succ[t] = succ_in[t]
            fsucc[t] = fsucc_in[t]
            pred[t] = -1
            fpred[t] = -1
            mark[t] = 0
        for t in range(size):
            if succ[t] >= 0:
                pred[succ[t]] = t
            if fsucc[t] >= 0:
                fpred[fsucc[t]] = t
        for head in range(size):
            if pred[head] >= 0 or mark[head]:
                continue
            n = 0
            m = 0
            h = head
            while True:
                mark[h] = 1
                t = h
                while succ[t] >= 0:
                    t = succ[t]
                length = 0
                while fpred[t] >= 0:
                    t = fpred[t]
                    length += 1
                n += 1
                m += length
                h = t ^ 1
                if h == head:
                    break
                if pred[h] >= 0:
                    raise RuntimeError("pairing walk left the thread heads")
            pairs.append((n, m))
        # mark: 0 unseen, 1 on current path (index + 2 stored), -1 done
        for t in range(size):
            mark[t] = 0
        for t in range(size):
            if mark[t] != 0 or fsucc[t] < 0:
                continue
            u = t
            plen = 0
            while u >= 0 and mark[u] == 0:
                mark[u] = plen + 2
                plen += 1
                u = fsucc[u]
            if u >= 0 and mark[u] >= 2:
                pairs.append((0, plen - (mark[u] - 2)))
            u = t
            while u >= 0 and mark[u] >= 2:
                mark[u] = -1
                u = fsucc[u]
        pairs.sort()
        return pairs
    finally:
        free(succ)
        free(fsucc)
        free(pred)
        free(fpred)
        free(mark)
