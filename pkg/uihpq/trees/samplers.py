r"""
Galton-Watson samplers: one-type geometric, two-type and Kesten trees.

Trees are grown in preorder from a stack of pending vertices, so the output
is directly a `PlaneTree` child-count sequence.
"""
from collections import namedtuple
from fractions import Fraction

from ..exceptions import SizeCapExceeded, NonCriticalPair
from ..rng import as_generator
from .offspring import GeometricLaw
from .plane_tree import PlaneTree

DEFAULT_SIZE_CAP = 10 ** 7

KestenTree = namedtuple('KestenTree', ['tree', 'spine'])
KestenSpine = namedtuple('KestenSpine', ['tree', 'spine', 'left', 'right'])


def _grow(draw, rng, size_cap, height_cap=None, root_height=0):
    r"""
    Preorder growth; ``draw(height, rng)`` gives the number of children of a
    vertex at that height. Vertices at ``height_cap`` get no children.
    """
    counts = []
    stack = [root_height]
    while stack:
        h = stack.pop()
        k = 0 if height_cap is not None and h >= height_cap else draw(h, rng)
        counts.append(k)
        if len(counts) + len(stack) + k - 1 > size_cap:
            raise SizeCapExceeded(size_cap)
        stack.extend([h + 1] * k)
    return PlaneTree(counts)


def sample_gw(law, rng, size_cap=DEFAULT_SIZE_CAP, height_cap=None):
    rng = as_generator(rng)
    return _grow(lambda h, g: law.sample(g), rng, size_cap, height_cap)


def sample_gw_geometric(p, size_cap=DEFAULT_SIZE_CAP, rng=None):
    r"""
    GW tree with offspring law mu_p(k) = p^k (1 - p), 0 <= p <= 1/2.
    """
    p = Fraction(p)
    if not 0 <= p <= Fraction(1, 2):
        raise ValueError("Invalid p: {}".format(p))
    if size_cap < 1:
        raise ValueError("Invalid size_cap: {}".format(size_cap))
    return sample_gw(GeometricLaw(p), rng, size_cap)


def gw_probability(t, p):
    p = Fraction(p)
    return p ** t.size * (1 - p) ** (t.size + 1)


def sample_two_type_gw(nu_circ, nu_bullet, size_cap=DEFAULT_SIZE_CAP, rng=None):
    r"""
    White vertices (even height) reproduce with ``nu_circ``, black vertices
    (odd height) with ``nu_bullet``.
    """
    rng = as_generator(rng)

    def draw(h, g):
        return (nu_bullet if h % 2 else nu_circ).sample(g)

    return _grow(draw, rng, size_cap)


def two_type_gw_probability(t, nu_circ, nu_bullet):
    prob = Fraction(1)
    for k, h in zip(t.counts, t.heights):
        prob *= (nu_bullet if h % 2 else nu_circ).pmf(k)
    return prob


def check_critical(nu_circ, nu_bullet, tolerance=1e-9):
    product = nu_circ.mean * nu_bullet.mean
    if isinstance(product, Fraction):
        critical = product == 1
    else:
        critical = abs(float(product) - 1) <= tolerance
    if not critical:
        raise NonCriticalPair("product of means is {}".format(float(product)))


def sample_kesten_two_type(nu_circ, nu_bullet, height_cap, rng=None, size_cap=DEFAULT_SIZE_CAP,
                           tolerance=1e-9):
    r"""
    Two-type Kesten tree truncated at height ``height_cap``. Spine vertices use
    the size-biased laws and pick their spine child uniformly; every other
    vertex reproduces like in the two-type GW tree.

    Returns a `KestenTree` whose ``spine`` lists the preorder ids of the spine.
    """
    if height_cap < 0 or height_cap % 2:
        raise ValueError("Invalid height_cap: {}".format(height_cap))
    check_critical(nu_circ, nu_bullet, tolerance)
    rng = as_generator(rng)
    laws = (nu_circ, nu_bullet)
    biased = (nu_circ.size_biased(), nu_bullet.size_biased()) if height_cap else None

    counts = []
    spine = []
    stack = [(0, True)]
    while stack:
        h, on_spine = stack.pop()
        v = len(counts)
        if on_spine:
            spine.append(v)
        if h >= height_cap:
            k = 0
        elif on_spine:
            k = biased[h % 2].sample(rng)
            j = int(rng.integers(k))
        else:
            k = laws[h % 2].sample(rng)
        counts.append(k)
        if len(counts) + len(stack) + k - 1 > size_cap:
            raise SizeCapExceeded(size_cap)
        # pushed in reverse so the first child is popped first
        for i in range(k - 1, -1, -1):
            stack.append((h + 1, on_spine and i == j))
    return KestenTree(PlaneTree(counts), tuple(spine))


def sample_kesten_geometric_spine(height_cap, rng=None, size_cap=DEFAULT_SIZE_CAP):
    r"""
    One-type Kesten tree for the critical geometric law mu_{1/2}, truncated at
    height ``height_cap``: spine vertex i gets ``left[i]`` grafted GW trees
    before its spine child and ``right[i]`` after it.
    """
    if height_cap < 0:
        raise ValueError("Invalid height_cap: {}".format(height_cap))
    rng = as_generator(rng)
    law = GeometricLaw(Fraction(1, 2))
    left = [law.sample(rng) for _ in range(height_cap)]
    right = [law.sample(rng) for _ in range(height_cap)]

    def graft(height):
        return _grow(lambda h, g: law.sample(g), rng, size_cap, height_cap, height)

    # children[v] as nested trees, assembled bottom-up along the spine
    counts = [0]
    for i in range(height_cap - 1, -1, -1):
        before = [graft(i + 1) for _ in range(left[i])]
        after = [graft(i + 1) for _ in range(right[i])]
        block = [len(before) + 1 + len(after)]
        for t in before:
            block.extend(t.counts)
        block.extend(counts)
        for t in after:
            block.extend(t.counts)
        counts = block
        if len(counts) > size_cap + 1:
            raise SizeCapExceeded(size_cap)
    tree = PlaneTree(counts)
    spine = [0]
    for i in range(height_cap):
        spine.append(tree.children[spine[-1]][left[i]])
    return KestenSpine(tree, tuple(spine), tuple(left), tuple(right))
