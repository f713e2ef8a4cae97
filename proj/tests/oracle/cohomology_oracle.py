"""Independent oracle for frozen test values.

Builds A_z, the distribution relations and the quotient U_z from scratch
(own Smith form with transforms, plain Python integers), derives the
G_z-action on a Z-basis of U_z, and computes H^n(G_z, U_z) from the tensor
product of the periodic resolutions of the cyclic factors.

Usage: python3 cohomology_oracle.py
"""
import itertools


def smith(a):
    """Return (d, U, V) with U * a * V diagonal (d), U and V unimodular."""
    m = len(a)
    n = len(a[0]) if m else 0
    a = [row[:] for row in a]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(a, t, i)
        swap_rows(U, t, i)
        swap_cols(a, t, j)
        swap_cols(V, t, j)
        done = True
        for i in range(t + 1, m):
            q = a[i][t] // a[t][t]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                U[i] = [x - q * y for x, y in zip(U[i], U[t])]
            if a[i][t]:
                done = False
        for j in range(t + 1, n):
            q = a[t][j] // a[t][t]
            if q:
                for row in a:
                    row[j] -= q * row[t]
                for row in V:
                    row[j] -= q * row[t]
            if a[t][j]:
                done = False
        if not done:
            continue
        bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]]
        if bad:
            i, _ = bad[0]
            a[t] = [x + y for x, y in zip(a[t], a[i])]
            U[t] = [x + y for x, y in zip(U[t], U[i])]
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    d = [a[i][i] for i in range(t)]
    return d, U, V


def inverse_unimodular(U):
    n = len(U)
    M = [U[i][:] + [int(i == j) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] in (1, -1))
        M[c], M[p] = M[p], M[c]
        if M[c][c] == -1:
            M[c] = [-x for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


class System:
    def __init__(self, towers, frob, polys):
        self.towers, self.frob, self.polys = towers, frob, polys

    def order(self, x, k):
        return 1 if k == 0 else self.towers[x][k - 1]


def symbols(sys, z):
    """All (stalk exponents, residues) for stalks of z."""
    r = len(z)
    out = []
    for mask in itertools.product([0, 1], repeat=r):
        st = tuple(z[i] if mask[i] else 0 for i in range(r))
        ranges = [range(sys.order(i, st[i])) for i in range(r)]
        for g in itertools.product(*ranges):
            out.append((st, g))
    return out


def relations(sys, z, index):
    rows = len(index)
    cols = []
    r = len(z)
    for x in range(r):
        if not z[x]:
            continue
        for st, g in symbols(sys, tuple(0 if i == x else z[i] for i in range(r))):
            col = [0] * rows
            # p(x; Fr_x^{-1}) [g z']
            for i, c in enumerate(sys.polys[x]):
                h = tuple((g[j] - i * sys.frob[x][j]) % sys.order(j, st[j]) if st[j] else 0 for j in range(r))
                col[index[(st, h)]] += c
            # minus the norm lift to z(x) z'
            st2 = tuple(z[x] if j == x else st[j] for j in range(r))
            for k in range(sys.order(x, z[x])):
                h = tuple(k if j == x else g[j] for j in range(r))
                col[index[(st2, h)]] -= 1
            cols.append(col)
    return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]


def quotient_action(sys, z):
    """Z-basis of U_z and the action matrices of the cyclic generators."""
    syms = symbols(sys, z)
    index = {s: i for i, s in enumerate(syms)}
    R = relations(sys, z, index)
    d, U, _ = smith(R)
    assert all(x == 1 for x in d), "quotient has torsion"
    rk = len(d)
    Uinv = inverse_unimodular(U)
    proj = U[rk:]
    section = [row[rk:] for row in Uinv]
    acts = []
    for x in range(len(z)):
        if not z[x]:
            continue
        P = [[0] * len(syms) for _ in syms]
        for (st, g), i in index.items():
            h = tuple((g[j] + 1) % sys.order(j, st[j]) if (j == x and st[j]) else g[j] for j in range(len(z)))
            P[index[(st, h)]][i] = 1
        acts.append((sys.order(x, z[x]), matmul(matmul(proj, P), section)))
    return len(syms) - rk, acts


def cohomology(dim, acts, top, modulus=0):
    """H^n(prod of cyclic groups, M) for n < top; M = Z^dim with given actions."""
    r = len(acts)
    ident = [[int(i == j) for j in range(dim)] for i in range(dim)]

    def alpha(i, v):
        n, S = acts[i]
        if v % 2 == 0:  # cochain map dual to sigma - 1 on odd resolution degrees
            return [[S[a][b] - ident[a][b] for b in range(dim)] for a in range(dim)]
        total = [[0] * dim for _ in range(dim)]
        P = ident
        for _ in range(n):
            total = [[total[a][b] + P[a][b] for b in range(dim)] for a in range(dim)]
            P = matmul(S, P)
        return total

    def index_set(n):
        return [w for w in itertools.product(range(n + 1), repeat=r) if sum(w) == n]

    def coboundary(n):
        src, dst = index_set(n), index_set(n + 1)
        pos = {w: k for k, w in enumerate(dst)}
        M = [[0] * (len(src) * dim) for _ in range(len(dst) * dim)]
        for k, w in enumerate(src):
            for i in range(r):
                sign = (-1) ** sum(w[:i])
                w2 = tuple(w[j] + (j == i) for j in range(r))
                A = alpha(i, w[i])
                for a in range(dim):
                    for b in range(dim):
                        M[pos[w2] * dim + a][k * dim + b] += sign * A[a][b]
        return M

    out = []
    mats = [coboundary(n) for n in range(top)]
    for n in range(top):
        c = len(index_set(n)) * dim
        din = mats[n - 1] if n else [[] for _ in range(c)]
        dout = mats[n]
        if modulus:
            assert modulus == 2
            rin = rank_mod2(din) if n else 0
            out.append(c - rin - rank_mod2(dout))
        else:
            dn, _, _ = smith(din) if n else ([], None, None)
            do, _, _ = smith(dout)
            free = c - len(dn) - len(do)
            out.append((free, sorted(x for x in dn if x != 1)))
    return out


def rank_mod2(M):
    rows = [sum((x & 1) << j for j, x in enumerate(row)) for row in M]
    rank = 0
    for bit in range(max((len(r) for r in M), default=0)):
        piv = next((i for i in range(rank, len(rows)) if rows[i] >> bit & 1), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] >> bit & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def report(name, sys, z, top=5, mod2=False):
    dim, acts = quotient_action(sys, z)
    print(name, "rank U_z =", dim)
    for n, h in enumerate(cohomology(dim, acts, top)):
        print("  H^%d" % n, h)
    if mod2:
        print("  mod 2 ranks", cohomology(dim, acts, top, 2))
    triv = [(n, [[1]]) for n, _ in acts]
    print("  trivial", cohomology(1, triv, top + 1))


if __name__ == "__main__":
    # primes 3, 5 with towers (2), (4); Fr_3 on G_5 = sigma^3, Fr_5 on G_3 = sigma
    e1 = System([[2], [4]], [[0, 3], [1, 0]], [[1, -1], [1, -1]])
    report("E1 z=3*5", e1, (1, 1), mod2=True)
    # primes 3, 5 with towers (2, 6), (4); z = 3^2 * 5
    c45 = System([[2, 6], [4]], [[0, 3], [1, 0]], [[1, -1], [1, -1]])
    report("cyclotomic 45 z=3^2*5", c45, (2, 1), top=4)
    # trivial distribution with orders 2, 3
    t23 = System([[2], [3]], [[0, 0], [0, 0]], [[1], [1]])
    report("trivial 2x3 z=x1*x2", t23, (1, 1), top=4)
