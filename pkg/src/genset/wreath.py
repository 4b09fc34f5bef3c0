"""Which overgroups of ``A_5 x A_5`` inside ``S_5 wr S_2`` have nonzero spread.

A group has nonzero spread exactly when every nonidentity element has a
mate generating the group with it.  Mates are conjugation invariant, so one
element per conjugacy class is enough.  Generation is decided by stabilizer
chain orders, which avoids building multiplication tables.
"""

from __future__ import annotations

import logging
import random
from functools import lru_cache

import numpy as np

from .catalog import wreath_overgroups_of_a5a5
from .perm import ElementIndex, PermGroup, enumerate_elements

log = logging.getLogger(__name__)

RANDOM_TRIES = 200


def class_representatives(idx: ElementIndex, group_gens) -> list[int]:
    """Smallest index in each conjugacy class, without a multiplication table."""
    perms = idx.perms.astype(np.int64)
    maps = []
    for t in group_gens:
        t = np.asarray(t.images, dtype=np.int64)
        t_inv = np.argsort(t)
        maps.append(idx.lookup_rows(t[perms[:, t_inv]]))
    label = np.full(idx.order, -1, dtype=np.int64)
    reps = []
    for x in range(idx.order):
        if label[x] >= 0:
            continue
        reps.append(x)
        label[x] = x
        frontier = np.array([x])
        while frontier.size:
            images = np.unique(np.concatenate([m[frontier] for m in maps]))
            images = images[label[images] < 0]
            label[images] = x
            frontier = images
    return reps


def find_mate(g: PermGroup, idx: ElementIndex, x: int, rng: random.Random):
    """An element generating ``g`` together with element ``x``, or None."""
    order = g.order()
    px = idx.element(x)
    tries = [rng.randrange(idx.order) for _ in range(RANDOM_TRIES)]
    for y in tries + list(range(idx.order)):
        if PermGroup([px, idx.element(y)], g.degree).order() == order:
            return y
    return None


def has_nonzero_spread(g: PermGroup, seed: int = 0) -> bool:
    idx = enumerate_elements(g, cap=g.order())
    rng = random.Random(seed)
    for x in class_representatives(idx, g.generators):
        if x == 0:
            continue
        if find_mate(g, idx, x, rng) is None:
            log.info("element %s of a group of order %d has no mate", idx.element(x), g.order())
            return False
    return True


@lru_cache(maxsize=1)
def nonzero_spread_wreath_subgroups() -> tuple[PermGroup, ...]:
    """The candidates that pass, smaller order first."""
    found = [g for g in wreath_overgroups_of_a5a5() if has_nonzero_spread(g)]
    return tuple(sorted(found, key=lambda g: g.order()))
