"""Pure-Python hot kernels.

Same functions and semantics as the compiled ``_ckernels`` module; used when
the extension is not built or ``CATERPILLARS_PURE_PYTHON`` is set.

Trees are passed as pre-order codes (1 = internal node, 0 = leaf) and
permutations as sequences of the integers 1..n.
"""


def gamma_from_code(code):
    # reverse pre-order: when an internal node is reached its left subtree is
    # on top of the stack and its right subtree just below
    stack = []
    for symbol in reversed(code):
        if symbol:
            lsize, lcat, lgamma = stack.pop()
            rsize, rcat, rgamma = stack.pop()
            n = lsize + rsize
            cat = lcat and rcat and (lsize == 1 or rsize == 1)
            stack.append((n, cat, n if cat else max(lgamma, rgamma)))
        else:
            stack.append((1, True, 1))
    if len(stack) != 1:
        raise ValueError("invalid pre-order code")
    return stack[0][2]


def gamma_histogram(n):
    """Histogram of gamma over all ordered trees with ``n`` leaves.

    Returns a list ``h`` of length ``n + 1`` with ``h[g]`` the number of trees
    whose gamma equals ``g``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    hist = [0] * (n + 1)
    length = 2 * n - 1
    code = [0] * length

    def extend(pos, ones, zeros, slots):
        if pos == length:
            hist[gamma_from_code(code)] += 1
            return
        if ones < n - 1:
            code[pos] = 1
            extend(pos + 1, ones + 1, zeros, slots + 1)
        if zeros < n and (slots > 1 or pos == length - 1):
            code[pos] = 0
            extend(pos + 1, ones, zeros + 1, slots - 1)

    extend(0, 0, 0, 1)
    return hist


def contains_132(p):
    """True when some ``i < j < k`` has ``p[i] < p[k] < p[j]``."""
    # scan right to left; ``third`` is the largest value popped so far, i.e.
    # the best candidate for the "2" that already has a larger "3" before it
    third = 0
    stack = []
    for x in reversed(p):
        if x < third:
            return True
        while stack and stack[-1] < x:
            third = stack.pop()
        stack.append(x)
    return False


def contains_231(p):
    """True when some ``i < j < k`` has ``p[k] < p[i] < p[j]``."""
    # 231 is the reverse of 132
    third = 0
    stack = []
    for x in p:
        if x < third:
            return True
        while stack and stack[-1] < x:
            third = stack.pop()
        stack.append(x)
    return False


def rtilde_window(p, i):
    """Inclusive 0-based bounds of the block of entries ``<= p[i]`` around ``i``."""
    v = p[i]
    lo = i
    while lo > 0 and p[lo - 1] <= v:
        lo -= 1
    hi = i
    last = len(p) - 1
    while hi < last and p[hi + 1] <= v:
        hi += 1
    return lo, hi


def rtilde_summary(p):
    """Return ``(largest, all_contain)`` over the extraction family of ``p``.

    ``largest`` is the size of the biggest window avoiding 231 (0 for an
    empty permutation); ``all_contain`` tells whether every window of size
    greater than one contains 231.
    """
    largest = 0
    all_contain = True
    for i in range(len(p)):
        lo, hi = rtilde_window(p, i)
        avoids = not contains_231(p[lo:hi + 1])
        m = hi - lo + 1
        if avoids:
            if m > largest:
                largest = m
            if m > 1:
                all_contain = False
    return largest, all_contain
