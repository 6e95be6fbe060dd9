"""Pure-Python kernels. Same contract as the compiled ``_core`` module.

Integer inputs must be pre-scaled so every share ``cost // k`` that the
kernel forms is exact (see :mod:`ringcast.kernels`). Float inputs are used
as-is and divided normally.
"""


def _loads(n, mask):
    diff = [0] * (n + 2)
    for i in range(n):
        if (mask >> i) & 1:
            diff[i + 1] += 1
            diff[n + 1] -= 1
        else:
            diff[0] += 1
            diff[i + 1] -= 1
    loads = [0] * (n + 1)
    run = 0
    for e in range(n + 1):
        run += diff[e]
        loads[e] = run
    return loads


def profile_table(costs, n):
    """Social cost, potential and weak-Nash flag for every profile mask.

    ``costs`` must be divisible by every k in 1..n+1.
    """
    m = n + 1
    hpot = []
    for c in costs:
        row = [0] * (n + 1)
        acc = 0
        for k in range(1, n + 1):
            acc += c // k
            row[k] = acc
        hpot.append(row)
    size = 1 << n
    social = [0] * size
    pot = [0] * size
    nash = [False] * size
    for mask in range(size):
        loads = _loads(n, mask)
        soc = 0
        phi = 0
        cur_pre = [0] * m
        plus_pre = [0] * m
        acc_cur = 0
        acc_plus = 0
        for e in range(m):
            k = loads[e]
            c = costs[e]
            if k:
                soc += c
                acc_cur += c // k
            phi += hpot[e][k]
            acc_plus += c // (k + 1)
            cur_pre[e] = acc_cur
            plus_pre[e] = acc_plus
        ok = True
        for i in range(n):
            if (mask >> i) & 1:
                current = acc_cur - cur_pre[i]
                alt = plus_pre[i]
            else:
                current = cur_pre[i]
                alt = acc_plus - plus_pre[i]
            if alt < current:
                ok = False
                break
        social[mask] = soc
        pot[mask] = phi
        nash[mask] = ok
    return social, pot, nash


def sequential_play(costs, order, prefer_right, exact):
    """Myopic arrivals. Returns (directions, myopic costs) indexed by arrival."""
    n = len(costs) - 1
    loads = [0] * (n + 1)
    dirs = []
    paid = []
    for p in order:
        left = 0
        right = 0
        if exact:
            for e in range(p + 1):
                left += costs[e] // (loads[e] + 1)
            for e in range(p + 1, n + 1):
                right += costs[e] // (loads[e] + 1)
        else:
            for e in range(p + 1):
                left += costs[e] / (loads[e] + 1)
            for e in range(p + 1, n + 1):
                right += costs[e] / (loads[e] + 1)
        go_right = right < left or (right == left and prefer_right)
        if go_right:
            for e in range(p + 1, n + 1):
                loads[e] += 1
            dirs.append(1)
            paid.append(right)
        else:
            for e in range(p + 1):
                loads[e] += 1
            dirs.append(0)
            paid.append(left)
    return dirs, paid


def sequential_batch(costs, orders, prefer_right):
    """Network cost (scaled) reached by each arrival order; exact integers only."""
    n = len(costs) - 1
    out = []
    for order in orders:
        dirs, _ = sequential_play(costs, order, prefer_right, True)
        used = [False] * (n + 1)
        for p, d in zip(order, dirs):
            if d:
                for e in range(p + 1, n + 1):
                    used[e] = True
            else:
                for e in range(p + 1):
                    used[e] = True
        out.append(sum(c for c, u in zip(costs, used) if u))
    return out
