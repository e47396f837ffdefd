import random

from crossed_poisson.scalars import Cyclotomic, root_of_unity
from crossed_poisson.groups import generate
from crossed_poisson.polyvec import PolyVectorField


def trivial_group(m=3, M=4):
    ident = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    return generate([ident], M)


def z2_group(M=4):
    return generate([[[-1, 0], [0, -1]]], M)


def gamma1_group():
    M = 12
    r = root_of_unity(M, 4)
    rb = root_of_unity(M, 8)
    z = Cyclotomic.zero(M)
    o = Cyclotomic.one(M)
    alpha = [[r, z, z, z], [z, rb, z, z], [z, z, rb, z], [z, z, z, r]]
    beta = [[z, o, z, z], [o, z, z, z], [z, z, z, o], [z, z, o, z]]
    return generate([alpha, beta], M)


def random_pvf(group, rng, nterms=4, max_deg=2, wedge_deg=None):
    m, M = group.dim, group.M
    terms = {}
    for _ in range(nterms):
        gi = rng.randrange(group.order)
        expo = [0] * m
        for _ in range(rng.randint(0, max_deg)):
            expo[rng.randrange(m)] += 1
        k = wedge_deg if wedge_deg is not None else rng.randint(0, m)
        if k > m:
            k = m
        wedge = tuple(sorted(rng.sample(range(m), k)))
        c = Cyclotomic(M, [rng.randint(-3, 3) for _ in range(2)])
        if c:
            key = (gi, tuple(expo), wedge)
            terms[key] = terms.get(key, Cyclotomic.zero(M)) + c
    return PolyVectorField(group, terms)
