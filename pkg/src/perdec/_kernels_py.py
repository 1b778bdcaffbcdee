"""Pure-Python scan kernels (reference implementations).

perdec._kernels is the compiled twin of this module; both must produce
identical results on every input, which the test suite checks.  Any change
to the enumeration order here must be mirrored in the .pyx file.

Values are integer numerators over a caller-held common denominator, so
all comparisons are integer comparisons.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, Optional, Sequence, Tuple


def star_scan(pow_tables, heads, members, kmax, lmin, bound, f_num):
    """First nonzero premise-gated mixed difference.

    pow_tables[j][k][x] is transform j iterated k times (0 <= k <= bound);
    heads[b] is block b's distinguished transform index; members[b] its
    remaining transform indices; kmax[b] caps block b's exponent (1 for
    blocks whose higher exponents follow by telescoping).  A premise for
    block b at exponent k and point z requires, for every member i, some
    l, l2 in [lmin, bound] with heads[b]^k i^l z = i^{l2} z.

    Scans exponent vectors lexicographically (each component from 1) with
    z ascending innermost; returns (kvec, z, value) for the first nonzero
    alternating-sum difference of f_num, else None.
    """
    nb = len(heads)
    size = len(f_num)
    memo: Dict[Tuple[int, int, int], bool] = {}

    def premise(b: int, k: int, z: int) -> bool:
        key = (b, k, z)
        cached = memo.get(key)
        if cached is not None:
            return cached
        head_pow = pow_tables[heads[b]][k]
        ok = True
        for i in members[b]:
            tabs = pow_tables[i]
            targets = set()
            for l2 in range(lmin, bound + 1):
                targets.add(tabs[l2][z])
            for l in range(lmin, bound + 1):
                if head_pow[tabs[l][z]] in targets:
                    break
            else:
                ok = False
                break
        memo[key] = ok
        return ok

    for kvec in product(*[range(1, kmax[b] + 1) for b in range(nb)]):
        tables = [pow_tables[heads[b]][kvec[b]] for b in range(nb)]
        for z in range(size):
            gated = True
            for b in range(nb):
                if members[b] and not premise(b, kvec[b], z):
                    gated = False
                    break
            if not gated:
                continue
            value = 0
            for mask in range(1 << nb):
                w = z
                bits = mask
                b = 0
                applied = 0
                while bits:
                    if bits & 1:
                        w = tables[b][w]
                        applied += 1
                    bits >>= 1
                    b += 1
                if (nb - applied) & 1:
                    value -= f_num[w]
                else:
                    value += f_num[w]
            if value:
                return tuple(kvec), z, value
    return None


def compat_scan(pow_a, pow_b, f_num, bound, value_on_a):
    """First value conflict over relations A^k B^n x = A^{k2} B^{n2} x.

    The compared value at (k, n, x) is f_num[A^k x] when value_on_a, else
    f_num[B^n x].  Scans x ascending, then (k + n, k) ascending, recording
    the first word reaching each image point; a conflict is the first word
    whose point was already reached with a different compared value.

    Returns (x, k, n, k2, n2, value, value2) with (k2, n2) the earlier
    word and value2 its compared value, else None.
    """
    size = len(f_num)
    for x in range(size):
        first: Dict[int, Tuple[int, int, int]] = {}
        for total in range(2 * bound + 1):
            for k in range(max(0, total - bound), min(total, bound) + 1):
                n = total - k
                base = pow_b[n][x]
                p = pow_a[k][base]
                v = f_num[pow_a[k][x]] if value_on_a else f_num[base]
                seen = first.get(p)
                if seen is None:
                    first[p] = (k, n, v)
                elif seen[2] != v:
                    return (x, k, n, seen[0], seen[1], v, seen[2])
    return None
