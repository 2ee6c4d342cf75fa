r"""
Batched simulations on torch tensors: simple random walks on a ball and
contour/label processes of infinite p-forests.
"""
import torch


def _csr(neighbours, device):
    offsets = [0]
    targets = []
    for ns in neighbours:
        targets.extend(ns)
        offsets.append(len(targets))
    return (torch.tensor(offsets, dtype=torch.long, device=device),
            torch.tensor(targets, dtype=torch.long, device=device))


def walk_returns(neighbours, distance, root, radius, walkers, length, generator, device='cpu'):
    r"""
    Run ``walkers`` simple random walks from ``root`` for ``length`` steps,
    censoring a walker at its first visit to a vertex at distance ``radius``.

    Returns (returned, censored, returns): whether the walker came back to the
    root before censoring, whether it was censored, and its number of returns.
    """
    offsets, targets = _csr(neighbours, device)
    degree = offsets[1:] - offsets[:-1]
    dist = torch.tensor(distance, dtype=torch.long, device=device)
    pos = torch.full((walkers,), root, dtype=torch.long, device=device)
    alive = torch.ones(walkers, dtype=torch.bool, device=device)
    returns = torch.zeros(walkers, dtype=torch.long, device=device)
    censored = torch.zeros(walkers, dtype=torch.bool, device=device)
    for _ in range(length):
        if not alive.any():
            break
        u = torch.rand(walkers, generator=generator, device=device)
        deg = degree[pos]
        k = torch.minimum((u * deg.to(u.dtype)).long(), deg - 1)
        pos = torch.where(alive, targets[offsets[pos] + k], pos)
        returns += (alive & (pos == root)).long()
        hit = alive & (dist[pos] >= radius)
        censored |= hit
        alive &= ~hit
    return returns > 0, censored, returns


def forest_contour(p, steps, trials, generator, device='cpu'):
    r"""
    Contour process of an infinite forest of p-GW trees: a walk with up-steps
    of probability p, shape (trials, steps + 1), started at 0.
    """
    up = torch.rand(trials, steps, generator=generator, device=device) < p
    walk = torch.cumsum(2 * up.long() - 1, dim=1)
    zero = torch.zeros(trials, 1, dtype=torch.long, device=device)
    return torch.cat([zero, walk], dim=1)


def forest_labels(contour, generator):
    r"""
    Labels along the contour: uniform {-1, 0, 1} increments on tree edges, the
    k-th tree rooted at the value of a symmetric walk before its (k+1)-th
    down-step.
    """
    trials, n = contour.shape
    device = contour.device
    inc = torch.randint(-1, 2, (trials, n), generator=generator, device=device).tolist()
    steps = 2 * torch.randint(0, 2, (trials, 2 * n), generator=generator, device=device) - 1
    bridge = torch.cat([torch.zeros(trials, 1, dtype=torch.long, device=device),
                        torch.cumsum(steps, dim=1)], dim=1)
    down = (bridge[:, 1:] < bridge[:, :-1]).tolist()
    bridge = bridge.tolist()
    rows = []
    for c, d, b, dn in zip(contour.tolist(), inc, bridge, down):
        roots = [b[k] for k, is_down in enumerate(dn) if is_down]
        stack = []
        label = 0
        tree = 0
        row = [roots[0]]
        for j in range(1, n):
            if c[j] > c[j - 1]:
                stack.append(d[j])
                label += d[j]
            elif stack:
                label -= stack.pop()
            else:
                tree += 1
            row.append(roots[min(tree, len(roots) - 1)] + label)
        rows.append(row)
    return torch.tensor(rows, dtype=torch.long, device=device)
