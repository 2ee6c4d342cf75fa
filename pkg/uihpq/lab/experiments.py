r"""
Experiments behind the `uihpq` command line. Every command takes an
`ExperimentConfig` and a log handle and returns a report dictionary; all
randomness of trial t at grid point g of command c comes from
Stream(seed).child(c, g, t).
"""
import math
import os
import time
from collections import Counter
from fractions import Fraction

import networkx as nx
import numpy as np
import torch
from tqdm import tqdm

from ..bdg import domain_size, enumerate_quadrangulations, phi_bijectivity_audit, phi_finite, radon_nikodym_check, \
    uihpq_ball
from ..boltzmann import F_closed, Fbullet_sigma, Fhat_sigma, as_fraction, check_p, count_quadrangulations, \
    criticality_check, offspring_pair, pointed_boltzmann_probability, pointed_partial_sums, sample_boltzmann, \
    sample_pointed_boltzmann, sample_simple_boltzmann, sample_simple_face_count, series_identity_check, \
    simple_face_count_probability
from ..branching import EDGE_MAP, build_uihpq_branching, psi, psi_inverse, resistance_lower_bound, \
    sample_tree_of_components, spine_cutsets, tree_of_components_law
from ..planar_map import HalfEdgeMap, canonical_encoding, combinatorial_ball, \
    validate, write_map
from ..rng import Stream
from ..trees import exact_prefix_law_tv, loop_of, sample_kesten_geometric_spine, sample_labeled_forest, \
    sample_uniform_bridge, tree_of
from .stats import bootstrap_tv, certified_at_least, chi_square_gof, chi_square_independence, ks_two_sample, \
    non_increasing, strictly_decreasing, tv_distance
from .utils import AverageMeter, convert_secs2time, make_report, print_log, time_string
from .walks import forest_contour, forest_labels, walk_returns

AUDIT_GRID = [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]
CRITICALITY_GRID = 20


class ExperimentConfig(object):
    r"""
    Parameters shared by the experiments; command-specific options live in
    ``extra``.
    """

    def __init__(self, seed=0, p=Fraction(1, 4), n=(50,), sigma=(4,), radius=(1,), samples=1000,
                 tolerance=0.1, out='results', format='json', device='cpu', check_doubling=True, **extra):
        if seed < 0 or seed >= 2 ** 64:
            raise ValueError("Invalid seed: {}".format(seed))
        self.seed = int(seed)
        self.p = check_p(p)
        self.n = list(n)
        self.sigma = list(sigma)
        self.radius = list(radius)
        self.samples = samples
        self.tolerance = tolerance
        self.out = out
        self.format = format
        self.device = device
        self.check_doubling = check_doubling
        self.extra = extra

    @classmethod
    def from_args(cls, args):
        kwargs = dict(vars(args))
        kwargs.pop('command', None)
        kwargs.pop('func', None)
        return cls(**kwargs)

    def stream(self, *path):
        return Stream(self.seed).child(*path)

    def to_dict(self):
        d = {'seed': self.seed, 'p': str(self.p), 'n': self.n, 'sigma': self.sigma, 'radius': self.radius,
             'samples': self.samples, 'tolerance': self.tolerance}
        for k, v in sorted(self.extra.items()):
            d[k] = [str(x) for x in v] if isinstance(v, (list, tuple)) else str(v)
        return d

    def __repr__(self):
        return 'ExperimentConfig({})'.format(self.to_dict())


def check(name, passed, **detail):
    return dict(name=name, passed=bool(passed), **detail)


def sigma_for(n, p):
    r"""
    Boundary half-length matched to n faces: ceil((1-2p)/p n), or n^2 at p = 0.
    """
    p = as_fraction(p)
    if p == 0:
        return n * n
    return max(1, math.ceil((1 - 2 * p) / p * n))


def root_ball_encoding(m, radius):
    return canonical_encoding(combinatorial_ball(m, r=radius).submap)


def reference_encodings(cfg, radius, command):
    encodings = []
    for t in tqdm(range(cfg.samples), desc='uihpq ball r={}'.format(radius), leave=False):
        ball = uihpq_ball(cfg.p, radius, 'root', cfg.stream(command, 'reference', radius, t),
                          check_doubling=cfg.check_doubling)
        encodings.append(ball.encoding())
    return encodings


def edge_counts(encodings):
    # second word of a canonical encoding is the number of half-edges
    return [int(np.frombuffer(e, dtype='<u4')[1]) // 2 for e in encodings]


def _tv_grid(cfg, log, command, grid, sampler, key):
    radius = cfg.radius[0]
    reference = reference_encodings(cfg, radius, command)
    rows = []
    for g, value in enumerate(grid):
        start = time.time()
        encodings = []
        for t in tqdm(range(cfg.samples), desc='{}={}'.format(key, value), leave=False):
            q = sampler(value, cfg.stream(command, g, t))
            encodings.append(root_ball_encoding(q.map, radius))
        est = tv_distance(encodings, reference)
        row = {key: value, 'tv': est.tv, 'missing_mass': est.missing_mass_a,
               'missing_mass_reference': est.missing_mass_b}
        rows.append(row)
        h, m, s = convert_secs2time(time.time() - start)
        print_log('{} {}={} TV(Ball_{})={:.4f} [missing mass {:.4f} / {:.4f}] [{:02d}:{:02d}:{:02d}]'.format(
            time_string(), key, value, radius, est.tv, est.missing_mass_a, est.missing_mass_b, h, m, s), log)
    return rows


def cmd_local_conv(cfg, log=None):
    r"""
    TV between Ball_r of uniform quadrangulations with n faces and 2 sigma_n
    boundary edges and Ball_r of UIHPQ_p, along the n-grid.
    """
    def sampler(n, stream):
        g = stream.generator()
        sigma = sigma_for(n, cfg.p)
        return phi_finite(sample_labeled_forest(n, sigma, g), sample_uniform_bridge(sigma, g), check=False).quad

    rows = _tv_grid(cfg, log, 'local-conv', cfg.n, sampler, 'n')
    for row in rows:
        row['sigma'] = sigma_for(row['n'], cfg.p)
    tvs = [row['tv'] for row in rows]
    checks = [check('tv decreasing along n', cfg.radius[0] == 0 or strictly_decreasing(tvs), values=tvs),
              check('final tv below tolerance', tvs[-1] <= cfg.tolerance, value=tvs[-1])]
    return make_report('local-conv', cfg.to_dict(), rows, checks)


def cmd_boltzmann_conv(cfg, log=None):
    max_attempts = cfg.extra.get('max_attempts', 10 ** 4)

    def sampler(sigma, stream):
        return sample_boltzmann(sigma, cfg.p, stream, max_attempts)

    rows = _tv_grid(cfg, log, 'boltzmann-conv', cfg.sigma, sampler, 'sigma')
    tvs = [row['tv'] for row in rows]
    checks = [check('tv decreasing along sigma', cfg.radius[0] == 0 or strictly_decreasing(tvs), values=tvs),
              check('final tv below tolerance', tvs[-1] <= cfg.tolerance, value=tvs[-1])]
    return make_report('boltzmann-conv', cfg.to_dict(), rows, checks)


def cmd_branching_equiv(cfg, log=None):
    r"""
    Two-sample TV between Ball_r of the branching construction and of the
    BDG construction of UIHPQ_p. At p = 0 Ball_r of the critical geometric
    Kesten tree, rooted at the edge to the first child of its root, is
    compared as well.
    """
    radius = cfg.radius[0]
    pair = offspring_pair(cfg.p)
    reference = reference_encodings(cfg, radius, 'branching-equiv')
    encodings = []
    trees = 0
    for t in tqdm(range(cfg.samples), desc='branching', leave=False):
        q = build_uihpq_branching(cfg.p, max(radius, 1), cfg.stream('branching-equiv', 'branching', t), pair=pair)
        ball = combinatorial_ball(q.map, r=radius).submap
        trees += ball.num_vertices == ball.num_edges + 1
        encodings.append(canonical_encoding(ball))
    est = tv_distance(encodings, reference)
    lo, hi = bootstrap_tv(encodings, reference, cfg.stream('branching-equiv', 'bootstrap').generator())
    ks, ks_pvalue = ks_two_sample(edge_counts(encodings), edge_counts(reference))
    print_log('{} p={} TV(Ball_{})={:.4f} bootstrap [{:.4f}, {:.4f}]'.format(
        time_string(), cfg.p, radius, est.tv, lo, hi), log)
    row = {'p': str(cfg.p), 'radius': radius, 'tv': est.tv, 'tv_low': lo, 'tv_high': hi,
           'missing_mass': est.missing_mass_a, 'missing_mass_reference': est.missing_mass_b,
           'tree_fraction': trees / cfg.samples,
           'ks_edges': ks, 'ks_edges_pvalue': ks_pvalue}
    checks = [check('tv below tolerance', est.tv <= cfg.tolerance, value=est.tv)]
    if cfg.p == 0:
        checks.append(check('balls are trees at p = 0', trees == cfg.samples, fraction=trees / cfg.samples))
        kesten = []
        for t in tqdm(range(cfg.samples), desc='kesten', leave=False):
            g = cfg.stream('branching-equiv', 'kesten', t).generator()
            kesten.append(root_ball_encoding(sample_kesten_geometric_spine(max(radius, 1), g).tree.to_map(), radius))
        row['tv_kesten'] = tv_distance(kesten, reference).tv
        print_log('{} Kesten tree TV(Ball_{})={:.4f}'.format(time_string(), radius, row['tv_kesten']), log)
        checks.append(check('kesten tree tv below tolerance', row['tv_kesten'] <= cfg.tolerance,
                            value=row['tv_kesten']))
    return make_report('branching-equiv', cfg.to_dict(), [row], checks)


def cmd_rw(cfg, log=None):
    r"""
    Returns to the root of simple random walks in a certified ball, and the
    Nash-Williams sums of the spine cutsets.
    """
    radius = cfg.radius[-1]
    length = cfg.extra.get('walk_length', 10 ** 5)
    walkers = cfg.extra.get('walkers', 1)
    cutsets = cfg.extra.get('cutsets', 10 ** 4)
    threshold = cfg.extra.get('return_threshold', 0.95)
    returned = AverageMeter()
    censored = AverageMeter()
    for t in tqdm(range(cfg.samples), desc='walks', leave=False):
        stream = cfg.stream('rw', 'ball', t)
        ball = uihpq_ball(cfg.p, radius, 'root', stream.child('ball'), check_doubling=cfg.check_doubling)
        m = ball.submap
        if not m.alpha:
            continue
        back, cut, _ = walk_returns(m.neighbours, list(ball.distance), m.root_vertex, radius, walkers, length,
                                    stream.child('walk').torch_generator(cfg.device), cfg.device)
        for b, c in zip(back.tolist(), cut.tolist()):
            returned.update(float(b))
            censored.update(float(c))
    print_log('{} walks: return fraction {:.4f} +- {:.4f}, censored {:.4f}'.format(
        time_string(), returned.avg, returned.radius, censored.avg), log)

    sample = spine_cutsets(cfg.p, cutsets, cfg.stream('rw', 'cutsets'))
    inverse = AverageMeter()
    for s in sample.sizes.tolist():
        inverse.update(1.0 / s)
    partial = resistance_lower_bound(sample)
    single = float(np.mean(sample.sizes == 1)) if cutsets else 0.
    print_log('{} cutsets: E[1/#C]={:.4f} +- {:.4f}, P(#C=1)={:.4f}'.format(
        time_string(), inverse.avg, inverse.radius, single), log)
    rows = [dict(kind='walks', mean=returned.avg, radius=returned.radius, censored=censored.avg),
            dict(kind='cutsets', mean=inverse.avg, radius=inverse.radius, single_edge=single,
                 partial_sum=float(partial[-1]) if len(partial) else 0.)]
    checks = [check('walks return to the root', certified_at_least(returned, threshold), value=returned.avg,
                    radius=returned.radius),
              check('nash-williams slope positive', inverse.avg - inverse.radius > 0, value=inverse.avg),
              check('single-edge cutsets occur', single > 0, value=single)]
    return make_report('rw', cfg.to_dict(), rows, checks)


def percolation_contained(ball, mode, p_perc, rng):
    r"""
    Whether the open cluster of the root stays strictly inside the ball: it
    must avoid vertices at the ball radius (site, bond) or faces incident to
    them (face). The root vertex (root face) is always part of its cluster.
    """
    m = ball.submap
    r = ball.radius
    if not m.alpha:
        return True
    dist = ball.distance
    root = m.root_vertex
    G = nx.Graph()
    if mode == 'face':
        face_of = m.face_of
        is_open = rng.random(m.num_faces) < p_perc
        rim = set(face_of[h] for h in range(m.num_half_edges) if dist[m.origin(h)] >= r)
        start = face_of[m.root]
        is_open[start] = True
        G.add_nodes_from(f for f in range(m.num_faces) if is_open[f])
        G.add_edges_from((face_of[h], face_of[m.alpha[h]]) for h in range(m.num_half_edges)
                         if is_open[face_of[h]] and is_open[face_of[m.alpha[h]]])
        return not (nx.node_connected_component(G, start) & rim)
    if mode == 'site':
        is_open = rng.random(m.num_vertices) < p_perc
        is_open[root] = True
        G.add_nodes_from(v for v in range(m.num_vertices) if is_open[v])
        G.add_edges_from((m.origin(h), m.target(h)) for h in range(m.num_half_edges)
                         if is_open[m.origin(h)] and is_open[m.target(h)])
    elif mode == 'bond':
        is_open = rng.random(m.num_edges) < p_perc
        G.add_node(root)
        edge_ids = {}
        for h in range(m.num_half_edges):
            e = edge_ids.setdefault(min(h, m.alpha[h]), len(edge_ids))
            if is_open[e]:
                G.add_edge(m.origin(h), m.target(h))
    else:
        raise ValueError("Invalid percolation mode: {}".format(mode))
    cluster = nx.node_connected_component(G, root)
    return all(dist[v] < r for v in cluster)


def cmd_percolation(cfg, log=None):
    mode = cfg.extra.get('mode', 'site')
    grid = [float(x) for x in cfg.extra.get('p_perc', [0.9])]
    threshold = cfg.extra.get('contain_threshold', 0.9)
    rows = []
    checks = []
    for gi, p_perc in enumerate(grid):
        if not p_perc < 1:
            raise ValueError("Invalid percolation parameter: {}".format(p_perc))
        means, radii = [], []
        for radius in cfg.radius:
            meter = AverageMeter()
            for t in tqdm(range(cfg.samples), desc='{} {} r={}'.format(mode, p_perc, radius), leave=False):
                stream = cfg.stream('percolation', gi, radius, t)
                ball = uihpq_ball(cfg.p, radius, 'root', stream.child('ball'), check_doubling=cfg.check_doubling)
                meter.update(float(percolation_contained(ball, mode, p_perc, stream.child('open').generator())))
            means.append(meter.avg)
            radii.append(meter.radius)
            rows.append({'mode': mode, 'p_perc': p_perc, 'radius': radius, 'contained': meter.avg,
                         'ci_radius': meter.radius})
            print_log('{} {} p_perc={} r={}: contained {:.4f} +- {:.4f}'.format(
                time_string(), mode, p_perc, radius, meter.avg, meter.radius), log)
        checks.append(check('containment grows with r at p_perc={}'.format(p_perc),
                            non_increasing(means[::-1], radii[::-1]), values=means))
        checks.append(check('containment at largest r at p_perc={}'.format(p_perc), means[-1] + radii[-1] >= threshold,
                            value=means[-1], radius=radii[-1]))
    return make_report('percolation', cfg.to_dict(), rows, checks)


def cmd_scaling(cfg, log=None):
    r"""
    Contour of an infinite p-forest over [0, K theta], theta = a^2/(1-2p):
    exceedance of sup |C(theta s)/a^2 + s| > delta against the Chebyshev
    bound 4K/(delta^2 a^2 (1-2p)), and sup |labels| / a.
    """
    one_minus_2p = float(cfg.extra.get('one_minus_2p', 0.1))
    grid = [float(a2) for a2 in cfg.extra.get('a2', [1000.])]
    K = float(cfg.extra.get('K', 1.))
    delta = float(cfg.extra.get('delta', 0.5))
    label_trials = cfg.extra.get('label_trials', 50)
    p = (1 - one_minus_2p) / 2
    rows = []
    checks = []
    label_means = []
    for gi, a2 in enumerate(grid):
        theta = a2 / one_minus_2p
        steps = int(math.ceil(K * theta))
        gen = cfg.stream('scaling', gi).torch_generator(cfg.device)
        C = forest_contour(p, steps, cfg.samples, gen, cfg.device).double()
        s = torch.arange(steps + 1, dtype=torch.float64, device=cfg.device) / theta
        sup = (C / a2 + s).abs().max(dim=1).values
        exceed = AverageMeter()
        for e in (sup > delta).double().tolist():
            exceed.update(e)
        bound = 4 * K / (delta ** 2 * a2 * one_minus_2p)
        labels = forest_labels(C[:label_trials].long(), gen)
        label_sup = (labels.abs().max(dim=1).values.double() / math.sqrt(a2)).mean().item()
        label_means.append(label_sup)
        rows.append({'a2': a2, 'theta': theta, 'exceedance': exceed.avg, 'radius': exceed.radius,
                     'bound': bound, 'label_sup_over_a': label_sup})
        print_log('{} a^2={} exceedance {:.4f} +- {:.4f} (bound {:.4f}), sup|L|/a {:.4f}'.format(
            time_string(), a2, exceed.avg, exceed.radius, bound, label_sup), log)
        checks.append(check('exceedance below chebyshev bound at a^2={}'.format(a2),
                            exceed.avg <= bound + exceed.radius, value=exceed.avg, bound=bound))
    if len(label_means) > 1:
        checks.append(check('label sup over a decreasing', non_increasing(label_means), values=label_means))
    return make_report('scaling', cfg.to_dict(), rows, checks)


def cmd_prefix_law(cfg, log=None):
    k = cfg.extra.get('k', 1)
    cap = cfg.extra.get('cap', 64)
    rows = []
    for n in cfg.n:
        sigma = sigma_for(n, cfg.p)
        res = exact_prefix_law_tv(n, sigma, k, cfg.p, cap)
        rows.append({'n': n, 'sigma': sigma, 'k': k, 'tv_lower': float(res.tv_lower),
                     'tv_enumerated': float(res.tv_enumerated),
                     'residual_conditional': float(res.residual_conditional),
                     'residual_product': float(res.residual_product)})
        print_log('{} n={} sigma={} TV >= {:.6f}'.format(time_string(), n, sigma, float(res.tv_lower)), log)
    tvs = [row['tv_lower'] for row in rows]
    checks = [check('tv lower bound decreasing', non_increasing(tvs), values=tvs)]
    return make_report('prefix-law', cfg.to_dict(), rows, checks)


def cmd_sample(cfg, log=None):
    r"""
    Write sampled maps as .pmap files: Ball_r of UIHPQ_p, Boltzmann
    quadrangulations or Cut_r of the branching construction.
    """
    kind = cfg.extra.get('kind', 'uihpq')
    rows = []
    if not os.path.isdir(cfg.out):
        os.makedirs(cfg.out)
    for t in range(cfg.samples):
        stream = cfg.stream('sample', kind, t)
        if kind == 'uihpq':
            m = uihpq_ball(cfg.p, cfg.radius[0], 'root', stream, check_doubling=cfg.check_doubling).submap
        elif kind == 'boltzmann':
            m = sample_boltzmann(cfg.sigma[0], cfg.p, stream)
        elif kind == 'simple':
            m = sample_simple_boltzmann(cfg.sigma[0], cfg.p, stream)
        elif kind == 'branching':
            m = build_uihpq_branching(cfg.p, cfg.radius[0], stream)
        else:
            raise ValueError("Invalid sample kind: {}".format(kind))
        path = os.path.join(cfg.out, '{}_{}.pmap'.format(kind, t))
        write_map(m, path)
        rows.append({'index': t, 'path': os.path.basename(path)})
    print_log('{} wrote {} {} samples to {}'.format(time_string(), len(rows), kind, cfg.out), log)
    return make_report('sample', cfg.to_dict(), rows, [check('samples written', len(rows) == cfg.samples)])


def _verify_audit(log):
    out = []
    for n, sigma in AUDIT_GRID:
        res = phi_bijectivity_audit(n, sigma)
        passed = res['valid'] and res['image'] == res['domain']
        print_log('{} audit n={} sigma={}: domain {} image {} valid {}'.format(
            time_string(), n, sigma, res['domain'], res['image'], res['valid']), log)
        out.append(check('bijection audit n={} sigma={}'.format(n, sigma), passed,
                         domain=res['domain'], image=res['image']))
    return out


def _verify_decomposition(log):
    out = []
    for n in range(3):
        for sigma in (1, 2):
            total = 0
            ok = True
            for q in enumerate_quadrangulations(n, sigma):
                d = psi(q)
                ok &= canonical_encoding(psi_inverse(d).map) == canonical_encoding(q.map)
                ok &= d.tree.num_vertices == q.perimeter + 1
                ok &= tree_of(loop_of(d.tree)) == d.tree
                total += 1
            ok &= total == count_quadrangulations(n, sigma)
            print_log('{} psi round trips n={} sigma={}: {} maps, ok {}'.format(time_string(), n, sigma, total, ok),
                      log)
            out.append(check('psi round trip n={} sigma={}'.format(n, sigma), ok, maps=total))
    return out


def _verify_series(log):
    out = []
    spots = [(F_closed(0), 2), (F_closed(Fraction(1, 2)), Fraction(4, 3)), (Fbullet_sigma(0, 1), 2),
             (Fhat_sigma(Fraction(1, 2), 1), Fraction(4, 3)),
             (offspring_pair(Fraction(1, 4)).mu_bullet.pmf(1), Fraction(512, 567))]
    out.append(check('partition function spot values', all(a == b for a, b in spots)))
    for sigma in (1, 2):
        for p in (Fraction(1, 4), Fraction(1, 3)):
            sums = pointed_partial_sums(p, sigma, 3)
            ok = all(a < b for a, b in zip(sums, sums[1:])) and sums[-1] < Fbullet_sigma(p, sigma)
            out.append(check('pointed partial sums sigma={} p={}'.format(sigma, p), ok))
    for p in ('0.1', '0.25', '0.45'):
        res = series_identity_check(Fraction(p), 2000, Fraction(1, 10 ** 9))
        out.append(check('series identity p={}'.format(p), res['passed'], residual=float(res['residual'])))
        deficit = offspring_pair(Fraction(p)).tail
        out.append(check('mu_bullet deficit p={}'.format(p), 0 <= deficit <= Fraction(1, 10 ** 9),
                         deficit=float(deficit)))
    grid = [Fraction(49 * i, 100 * (CRITICALITY_GRID - 1)) for i in range(CRITICALITY_GRID)]
    verdicts = [criticality_check(p)['verdict'] for p in grid]
    out.append(check('criticality on [0, 0.49]', all(v == 'critical' for v in verdicts), verdicts=verdicts))
    half = criticality_check(Fraction(1, 2))
    out.append(check('subcritical at p = 1/2', half['verdict'] == 'subcritical',
                     upper=float(half['product'][1]) if half['product'][1] is not None else None))
    print_log('{} partition functions and criticality checked'.format(time_string()), log)
    return out


def _verify_pointed_sizes(cfg, log):
    r"""
    Chi-square fit of the face count of pointed Boltzmann samples with one
    boundary edge pair against the exact law.
    """
    p = Fraction(1, 4)
    cells = 6
    samples = cfg.extra.get('size_samples', 2000)
    counts = np.zeros(cells + 1)
    for t in range(samples):
        n = sample_pointed_boltzmann(1, p, cfg.stream('verify', 'sizes', t)).quad.size
        counts[min(n, cells)] += 1
    probs = [domain_size(n, 1) * pointed_boltzmann_probability(n, 1, p) for n in range(cells)]
    probs.append(1 - sum(probs))
    stat, pvalue = chi_square_gof(counts, probs)
    print_log('{} pointed sizes: chi2 {:.3f}, p-value {:.4f}'.format(time_string(), stat, pvalue), log)
    return [check('pointed boltzmann size law', pvalue > 1e-3, statistic=stat, pvalue=pvalue)]


def _verify_simple_sizes(cfg, log):
    r"""
    Chi-square fit of the face count of simple-boundary Boltzmann pieces
    against the exact counts.
    """
    p, sigma, cells = Fraction(2, 5), 3, 10
    samples = cfg.extra.get('size_samples', 2000)
    counts = np.zeros(cells + 1)
    for t in range(samples):
        n = sample_simple_face_count(sigma, p, cfg.stream('verify', 'simple', t))
        counts[min(n, cells)] += 1
    probs = [simple_face_count_probability(n, sigma, p) for n in range(cells)]
    probs.append(1 - sum(probs))
    stat, pvalue = chi_square_gof(counts, probs)
    print_log('{} simple piece sizes: chi2 {:.3f}, p-value {:.4f}'.format(time_string(), stat, pvalue), log)
    return [check('simple boltzmann size law', pvalue > 1e-3, statistic=stat, pvalue=pvalue)]


def _verify_tree_of_components(cfg, log):
    r"""
    Trees of components of Boltzmann samples and conditioned two-type GW trees
    against their common exact law, and independence of two pieces given the
    tree.
    """
    p, sigma = Fraction(1, 4), 2
    samples = cfg.extra.get('components_samples', 2000)
    pair = offspring_pair(p)
    law = tree_of_components_law(sigma, p, pair)
    words = sorted(law)
    decompositions = [psi(sample_boltzmann(sigma, p, cfg.stream('verify', 'components', t)))
                      for t in tqdm(range(samples), desc='components', leave=False)]
    gw = [sample_tree_of_components(sigma, p, cfg.stream('verify', 'two-type', t), pair).to_word()
          for t in range(samples)]
    out = []
    for name, sample in (('boltzmann', [d.tree.to_word() for d in decompositions]), ('two-type gw', gw)):
        unknown = sum(1 for w in sample if w not in law)
        stat, pvalue = chi_square_gof([sample.count(w) for w in words], [law[w] for w in words])
        out.append(check('tree of components law ({})'.format(name), unknown == 0 and pvalue > 1e-3,
                         statistic=stat, pvalue=pvalue, unknown=unknown))
    xs, ys = piece_size_pairs(decompositions)
    stat, pvalue = chi_square_independence(xs, ys) if xs else (0., 1.)
    out.append(check('pieces independent given the tree', bool(xs) and pvalue > 1e-3, statistic=stat,
                     pvalue=pvalue, trees=len(xs)))
    print_log('{} tree of components: {}'.format(time_string(), [(c['name'], c['passed']) for c in out]), log)
    return out


def piece_size_pairs(decompositions):
    r"""
    For the most frequent tree with at least two pieces, whether each of its
    first two pieces (in preorder) has an inner face.
    """
    counts = Counter(d.tree.to_word() for d in decompositions if len(d.pieces) >= 2)
    if not counts:
        return [], []
    word = max(sorted(counts), key=counts.get)
    xs, ys = [], []
    for d in decompositions:
        if len(d.pieces) >= 2 and d.tree.to_word() == word:
            first, second = sorted(d.pieces)[:2]
            xs.append(int(d.pieces[first].size > 0))
            ys.append(int(d.pieces[second].size > 0))
    return xs, ys


def _verify_radon_nikodym(log):
    out = []
    for p in (Fraction(1, 3), Fraction(45, 100)):
        res = radon_nikodym_check(p, 1, 3)
        out.append(check('radon-nikodym p={}'.format(p), res['exact'], paths=res['paths']))
        print_log('{} radon-nikodym p={}: {} paths exact {}'.format(time_string(), p, res['paths'], res['exact']), log)
    return out


def _verify_boltzmann_decomposition(cfg, log):
    r"""
    Psi round trips and #V(tree) = perimeter + 1 on Boltzmann samples.
    """
    p = cfg.extra.get('psi_p', Fraction(3, 10))
    sigma = cfg.extra.get('psi_sigma', 4)
    samples = cfg.extra.get('psi_samples', 10 ** 4)
    failures = 0
    for t in tqdm(range(samples), desc='psi samples', leave=False):
        q = sample_boltzmann(sigma, p, cfg.stream('verify', 'psi', t))
        d = psi(q)
        if d.tree.num_vertices != q.perimeter + 1 or \
                canonical_encoding(psi_inverse(d).map) != canonical_encoding(q.map):
            failures += 1
    print_log('{} psi round trips on {} Boltzmann samples: {} failures'.format(time_string(), samples, failures),
              log)
    return [check('psi round trip on Boltzmann samples', failures == 0, samples=samples, failures=failures)]


def _verify_validation():
    corrupted = HalfEdgeMap((0, 0), EDGE_MAP.map.rot, EDGE_MAP.map.root)
    return [check('corrupted alpha is rejected', bool(validate(corrupted)))]


def cmd_verify(cfg, log=None):
    r"""
    Exhaustive and exact checks: bijection audit, decomposition round trips,
    partition functions, criticality, change of measure.
    """
    start = time.time()
    checks = []
    checks += _verify_audit(log)
    checks += _verify_decomposition(log)
    checks += _verify_boltzmann_decomposition(cfg, log)
    checks += _verify_series(log)
    checks += _verify_pointed_sizes(cfg, log)
    checks += _verify_simple_sizes(cfg, log)
    checks += _verify_tree_of_components(cfg, log)
    checks += _verify_radon_nikodym(log)
    checks += _verify_validation()
    pointed = sample_pointed_boltzmann(1, 0, cfg.stream('verify', 'pointed'))
    checks.append(check('pointed sample at p = 0 is an edge', pointed.quad.map.num_edges == 1))
    h, m, s = convert_secs2time(time.time() - start)
    failed = [c['name'] for c in checks if not c['passed']]
    print_log('{} verify: {} checks, {} failed {} [{:02d}:{:02d}:{:02d}]'.format(
        time_string(), len(checks), len(failed), failed, h, m, s), log)
    rows = [{'name': c['name'], 'passed': c['passed']} for c in checks]
    return make_report('verify', cfg.to_dict(), rows, checks)


COMMANDS = {
    'verify': cmd_verify,
    'local-conv': cmd_local_conv,
    'boltzmann-conv': cmd_boltzmann_conv,
    'branching-equiv': cmd_branching_equiv,
    'rw': cmd_rw,
    'percolation': cmd_percolation,
    'scaling': cmd_scaling,
    'prefix-law': cmd_prefix_law,
    'sample': cmd_sample,
}
