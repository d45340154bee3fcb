"""Pure-Python shortest-path and unit max-flow kernels.

This is the reference implementation of the two hot loops. The compiled
module ``_ckernel`` exposes the same ``Topology`` class; ``seqinterdict.kernel``
picks one at import time.

Masks are ``bytearray`` objects indexed by arc id (1 = unusable); costs are
``array('q')`` buffers indexed by arc id.
"""

from heapq import heappop, heappush

_BIG = (1 << 63) - 1


class Topology:
    """Static adjacency (CSR) for a multigraph with dense arc ids."""

    backend = "python"

    def __init__(self, node_count, tails, heads):
        n = int(node_count)
        m = len(tails)
        self.n = n
        self.m = m
        self.tails = list(tails)
        self.heads = list(heads)
        outs = [[] for _ in range(n)]
        ins = [[] for _ in range(n)]
        for a in range(m):
            outs[self.tails[a]].append(a)
            ins[self.heads[a]].append(a)
        self.out_arcs = [tuple(x) for x in outs]
        self.in_arcs = [tuple(x) for x in ins]

    def shortest(self, blocked, costs, s, f):
        """Min-(cost, hops, arc-id sequence) s-f path, or None.

        Returns ``(cost, arc_ids)``.
        """
        n = self.n
        heads = self.heads
        tails = self.tails
        out_arcs = self.out_arcs
        dc = [_BIG] * n
        dh = [_BIG] * n
        done = bytearray(n)
        dc[s] = 0
        dh[s] = 0
        heap = [(0, 0, s)]
        while heap:
            c, h, u = heappop(heap)
            if done[u]:
                continue
            done[u] = 1
            if u == f:
                break
            for a in out_arcs[u]:
                if blocked[a]:
                    continue
                v = heads[a]
                if done[v]:
                    continue
                nc = c + costs[a]
                if nc < dc[v] or (nc == dc[v] and h + 1 < dh[v]):
                    dc[v] = nc
                    dh[v] = h + 1
                    heappush(heap, (nc, h + 1, v))
        if not done[f]:
            return None

        # nodes from which f is reachable along tight arcs
        live = bytearray(n)
        live[f] = 1
        stack = [f]
        in_arcs = self.in_arcs
        while stack:
            v = stack.pop()
            for a in in_arcs[v]:
                if blocked[a]:
                    continue
                u = tails[a]
                if live[u] or not done[u]:
                    continue
                if dc[u] + costs[a] == dc[v] and dh[u] + 1 == dh[v]:
                    live[u] = 1
                    stack.append(u)

        path = []
        u = s
        while u != f:
            for a in out_arcs[u]:
                if blocked[a]:
                    continue
                v = heads[a]
                if live[v] and dc[u] + costs[a] == dc[v] and dh[u] + 1 == dh[v]:
                    path.append(a)
                    u = v
                    break
        return dc[f], tuple(path)

    def max_flow(self, blocked, uncapped, s, f, limit):
        """Unit-capacity s-f flow, stopping once it reaches ``limit``.

        Arcs flagged in ``uncapped`` have unbounded capacity. Returns
        ``(value, cut)`` where ``cut`` lists the arcs of a minimum cut when
        ``value < limit`` and is None otherwise.
        """
        n = self.n
        heads = self.heads
        tails = self.tails
        out_arcs = self.out_arcs
        in_arcs = self.in_arcs
        flow = [0] * self.m
        total = 0
        seen = bytearray(n)
        while total < limit:
            seen = bytearray(n)
            seen[s] = 1
            via = [-1] * n
            fwd = bytearray(n)
            queue = [s]
            for u in queue:
                for a in out_arcs[u]:
                    if blocked[a]:
                        continue
                    v = heads[a]
                    if seen[v] or not (uncapped[a] or flow[a] == 0):
                        continue
                    seen[v] = 1
                    via[v] = a
                    fwd[v] = 1
                    queue.append(v)
                for a in in_arcs[u]:
                    if blocked[a] or flow[a] == 0:
                        continue
                    v = tails[a]
                    if seen[v]:
                        continue
                    seen[v] = 1
                    via[v] = a
                    queue.append(v)
                if seen[f]:
                    break
            if not seen[f]:
                break
            v = f
            while v != s:
                a = via[v]
                if fwd[v]:
                    flow[a] += 1
                    v = tails[a]
                else:
                    flow[a] -= 1
                    v = heads[a]
            total += 1
        if total >= limit:
            return total, None
        cut = [
            a
            for a in range(self.m)
            if not blocked[a] and seen[tails[a]] and not seen[heads[a]]
        ]
        return total, cut
