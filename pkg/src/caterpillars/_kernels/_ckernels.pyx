# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirror of ``_pykernels``."""

from libc.stdlib cimport malloc, free


cdef int _gamma(const unsigned char* code, int length, int* size, int* cat, int* gam) noexcept nogil:
    # returns -1 on malformed code
    cdef int top = 0
    cdef int pos, n, c
    for pos in range(length - 1, -1, -1):
        if code[pos]:
            if top < 2:
                return -1
            top -= 1
            # left at top, right just below
            n = size[top] + size[top - 1]
            c = cat[top] and cat[top - 1] and (size[top] == 1 or size[top - 1] == 1)
            if c:
                gam[top - 1] = n
            elif gam[top] > gam[top - 1]:
                gam[top - 1] = gam[top]
            size[top - 1] = n
            cat[top - 1] = c
        else:
            size[top] = 1
            cat[top] = 1
            gam[top] = 1
            top += 1
    if top != 1:
        return -1
    return gam[0]


def gamma_from_code(code):
    cdef bytes raw = bytes(bytearray(code))
    cdef int length = len(raw)
    if length == 0:
        raise ValueError("invalid pre-order code")
    cdef int* buf = <int*>malloc(3 * length * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    cdef int g
    try:
        g = _gamma(<const unsigned char*>raw, length, buf, buf + length, buf + 2 * length)
    finally:
        free(buf)
    if g < 0:
        raise ValueError("invalid pre-order code")
    return g


cdef void _extend(unsigned char* code, int pos, int length, int n, int ones, int zeros,
                  int slots, long long* hist, int* scratch) noexcept nogil:
    if pos == length:
        hist[_gamma(code, length, scratch, scratch + length, scratch + 2 * length)] += 1
        return
    if ones < n - 1:
        code[pos] = 1
        _extend(code, pos + 1, length, n, ones + 1, zeros, slots + 1, hist, scratch)
    if zeros < n and (slots > 1 or pos == length - 1):
        code[pos] = 0
        _extend(code, pos + 1, length, n, ones, zeros + 1, slots - 1, hist, scratch)


def gamma_histogram(int n):
    if n < 1:
        raise ValueError("n must be positive")
    cdef int length = 2 * n - 1
    cdef unsigned char* code = <unsigned char*>malloc(length)
    cdef long long* hist = <long long*>malloc((n + 1) * sizeof(long long))
    cdef int* scratch = <int*>malloc(3 * length * sizeof(int))
    cdef int g
    if code == NULL or hist == NULL or scratch == NULL:
        free(code); free(hist); free(scratch)
        raise MemoryError()
    try:
        for g in range(n + 1):
            hist[g] = 0
        with nogil:
            _extend(code, 0, length, n, 0, 0, 1, hist, scratch)
        return [hist[g] for g in range(n + 1)]
    finally:
        free(code); free(hist); free(scratch)


cdef int* _to_c(p, Py_ssize_t* n) except NULL:
    cdef Py_ssize_t m = len(p)
    cdef int* buf = <int*>malloc((m + 1) * sizeof(int))
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(m):
        buf[i] = p[i]
    n[0] = m
    return buf


cdef bint _contains_231(const int* p, Py_ssize_t lo, Py_ssize_t hi, int* stack) noexcept nogil:
    cdef int third = 0
    cdef Py_ssize_t top = 0
    cdef Py_ssize_t i
    cdef int x
    for i in range(lo, hi + 1):
        x = p[i]
        if x < third:
            return True
        while top > 0 and stack[top - 1] < x:
            top -= 1
            third = stack[top]
        stack[top] = x
        top += 1
    return False


def contains_132(p):
    cdef Py_ssize_t n, i, top = 0
    cdef int* buf = _to_c(p, &n)
    cdef int* stack = <int*>malloc((n + 1) * sizeof(int))
    cdef int third = 0
    cdef int x
    cdef bint found = False
    try:
        if stack == NULL:
            raise MemoryError()
        with nogil:
            for i in range(n - 1, -1, -1):
                x = buf[i]
                if x < third:
                    found = True
                    break
                while top > 0 and stack[top - 1] < x:
                    top -= 1
                    third = stack[top]
                stack[top] = x
                top += 1
        return found
    finally:
        free(buf)
        free(stack)


def contains_231(p):
    cdef Py_ssize_t n
    cdef int* buf = _to_c(p, &n)
    cdef int* stack = <int*>malloc((n + 1) * sizeof(int))
    cdef bint found
    try:
        if stack == NULL:
            raise MemoryError()
        found = _contains_231(buf, 0, n - 1, stack)
        return found
    finally:
        free(buf)
        free(stack)


cdef inline void _window(const int* p, Py_ssize_t n, Py_ssize_t i, Py_ssize_t* lo, Py_ssize_t* hi) noexcept nogil:
    cdef int v = p[i]
    cdef Py_ssize_t a = i, b = i
    while a > 0 and p[a - 1] <= v:
        a -= 1
    while b < n - 1 and p[b + 1] <= v:
        b += 1
    lo[0] = a
    hi[0] = b


def rtilde_window(p, Py_ssize_t i):
    cdef Py_ssize_t n, lo, hi
    cdef int* buf = _to_c(p, &n)
    try:
        if i < 0 or i >= n:
            raise IndexError(i)
        _window(buf, n, i, &lo, &hi)
        return lo, hi
    finally:
        free(buf)


def rtilde_summary(p):
    cdef Py_ssize_t n, i, lo, hi, m
    cdef Py_ssize_t largest = 0
    cdef bint all_contain = True
    cdef int* buf = _to_c(p, &n)
    cdef int* stack = <int*>malloc((n + 1) * sizeof(int))
    try:
        if stack == NULL:
            raise MemoryError()
        with nogil:
            for i in range(n):
                _window(buf, n, i, &lo, &hi)
                if not _contains_231(buf, lo, hi, stack):
                    m = hi - lo + 1
                    if m > largest:
                        largest = m
                    if m > 1:
                        all_contain = False
        return largest, all_contain
    finally:
        free(buf)
        free(stack)
