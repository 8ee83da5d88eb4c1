"""Pure-Python match kernel, used when the compiled ``_core`` is unavailable.

Must produce bit-identical results to ``_core.pyx``: same edge order, same
floating-point expression order for payoffs and reputation.
"""


def play_generation(genomes, edges, rounds, pro, goods_value, coop, defect, fitness):
    """Play one match per edge, in order, updating the arrays in place.

    genomes: (n, 71) uint8; edges: (m, 2) int64; coop/defect: (n,) int64;
    fitness: (n,) float64.
    """
    table = genomes.tolist()
    c = coop.tolist()
    d = defect.tolist()
    fit = fitness.tolist()
    v = float(goods_value)
    two_v = 2.0 * v
    neg_v = -v

    for a, b in edges.tolist():
        ga = table[a]
        gb = table[b]
        ha = hb = 0
        a1 = b1 = a2 = b2 = 0
        tot_a = tot_b = 0.0
        for t in range(rounds):
            if t == 0:
                ma = ga[64]
                mb = gb[64]
                a1, b1 = ma, mb
            elif t == 1:
                ma = ga[65 + b1]
                mb = gb[65 + a1]
                a2, b2 = ma, mb
            elif t == 2:
                ma = ga[67 + 2 * b1 + b2]
                mb = gb[67 + 2 * a1 + a2]
            else:
                ma = ga[ha]
                mb = gb[hb]

            if ma != mb:
                if ma:
                    pa, pb = two_v, neg_v
                else:
                    pa, pb = neg_v, two_v
            elif not pro:
                pa = pb = v
            else:
                na = c[a] + d[a]
                nb = c[b] + d[b]
                theta_a = c[a] / na if na else 1.0
                theta_b = c[b] / nb if nb else 1.0
                if ma:
                    pa = v - theta_a * v
                    pb = v - theta_b * v
                else:
                    pa = v + theta_a * v
                    pb = v + theta_b * v
            tot_a += pa
            tot_b += pb

            if ma:
                d[a] += 1
            else:
                c[a] += 1
            if mb:
                d[b] += 1
            else:
                c[b] += 1
            ha = ((ha << 2) | (2 * ma + mb)) & 63
            hb = ((hb << 2) | (2 * mb + ma)) & 63
        fit[a] += tot_a
        fit[b] += tot_b

    coop[:] = c
    defect[:] = d
    fitness[:] = fit
