# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled match kernel. Mirrors ``_pycore.play_generation`` exactly."""

cimport cython
from libc.stdint cimport int64_t, uint8_t


def play_generation(
    const uint8_t[:, ::1] genomes,
    const int64_t[:, ::1] edges,
    Py_ssize_t rounds,
    bint pro,
    double goods_value,
    int64_t[::1] coop,
    int64_t[::1] defect,
    double[::1] fitness,
):
    cdef Py_ssize_t e, t, a, b
    cdef Py_ssize_t m = edges.shape[0]
    cdef int ma, mb, a1, b1, a2, b2, ha, hb
    cdef int64_t na, nb
    cdef double v = goods_value
    cdef double two_v = 2.0 * v
    cdef double neg_v = -v
    cdef double pa, pb, tot_a, tot_b, theta_a, theta_b

    with nogil:
        for e in range(m):
            a = edges[e, 0]
            b = edges[e, 1]
            ha = 0
            hb = 0
            a1 = 0
            b1 = 0
            a2 = 0
            b2 = 0
            tot_a = 0.0
            tot_b = 0.0
            for t in range(rounds):
                if t == 0:
                    ma = genomes[a, 64]
                    mb = genomes[b, 64]
                    a1 = ma
                    b1 = mb
                elif t == 1:
                    ma = genomes[a, 65 + b1]
                    mb = genomes[b, 65 + a1]
                    a2 = ma
                    b2 = mb
                elif t == 2:
                    ma = genomes[a, 67 + 2 * b1 + b2]
                    mb = genomes[b, 67 + 2 * a1 + a2]
                else:
                    ma = genomes[a, ha]
                    mb = genomes[b, hb]

                if ma != mb:
                    if ma:
                        pa = two_v
                        pb = neg_v
                    else:
                        pa = neg_v
                        pb = two_v
                elif not pro:
                    pa = v
                    pb = v
                else:
                    na = coop[a] + defect[a]
                    nb = coop[b] + defect[b]
                    theta_a = (<double>coop[a]) / (<double>na) if na else 1.0
                    theta_b = (<double>coop[b]) / (<double>nb) if nb else 1.0
                    if ma:
                        pa = v - theta_a * v
                        pb = v - theta_b * v
                    else:
                        pa = v + theta_a * v
                        pb = v + theta_b * v
                tot_a = tot_a + pa
                tot_b = tot_b + pb

                if ma:
                    defect[a] += 1
                else:
                    coop[a] += 1
                if mb:
                    defect[b] += 1
                else:
                    coop[b] += 1
                ha = ((ha << 2) | (2 * ma + mb)) & 63
                hb = ((hb << 2) | (2 * mb + ma)) & 63
            fitness[a] = fitness[a] + tot_a
            fitness[b] = fitness[b] + tot_b
