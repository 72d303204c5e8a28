"""Pure-Python fallback for the pairwise commutator sweep (see ``_kernels.pyx``)."""

import numpy as np


def pair_commutators(cx, cz, clen, canchor, hx, hz, hlen, hanchor):
    """Commutators of every charge string with every overlapping placed term.

    All inputs are 1-D integer arrays describing strings by (x mask, z mask,
    length, anchor).  Returns arrays ``(col, term, rx, rz, ranchor, rlen,
    sign)`` with one entry per anticommuting overlapping pair, where the
    commutator equals ``2i * sign * R`` and ``R`` is given trimmed.
    """
    cols, terms, rxs, rzs, ras, rls, signs = [], [], [], [], [], [], []
    hs = [(int(hx[j]), int(hz[j]), int(hanchor[j]), int(hanchor[j]) + int(hlen[j]) - 1)
          for j in range(len(hx))]
    for i in range(len(cx)):
        x1, z1, a1 = int(cx[i]), int(cz[i]), int(canchor[i])
        e1 = a1 + int(clen[i]) - 1
        for j, (x2, z2, a2, e2) in enumerate(hs):
            if a2 > e1 or a1 > e2:
                continue
            if a1 <= a2:
                base = a1
                px, pz = x1, z1
                qx, qz = x2 << (a2 - a1), z2 << (a2 - a1)
            else:
                base = a2
                px, pz = x1 << (a1 - a2), z1 << (a1 - a2)
                qx, qz = x2, z2
            if not ((px & qz) ^ (pz & qx)).bit_count() & 1:
                continue
            x = px ^ qx
            z = pz ^ qz
            m = ((px & pz).bit_count() + (qx & qz).bit_count()
                 + 2 * (pz & qx).bit_count() - (x & z).bit_count()) & 3
            s = x | z
            tz = (s & -s).bit_length() - 1
            x >>= tz
            z >>= tz
            cols.append(i)
            terms.append(j)
            rxs.append(x)
            rzs.append(z)
            ras.append(base + tz)
            rls.append((x | z).bit_length())
            # m is odd for anticommuting Hermitian strings: i^m / i = +1 (m=1), -1 (m=3)
            signs.append(1 if m == 1 else -1)
    return (
        np.asarray(cols, dtype=np.int64),
        np.asarray(terms, dtype=np.int64),
        np.asarray(rxs, dtype=np.uint64),
        np.asarray(rzs, dtype=np.uint64),
        np.asarray(ras, dtype=np.int64),
        np.asarray(rls, dtype=np.int64),
        np.asarray(signs, dtype=np.int64),
    )
