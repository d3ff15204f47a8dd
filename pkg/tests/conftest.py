import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from capped_rnd.topology import Node, Topology
from capped_rnd.traffic import CappedHoseModel, pair_key


@pytest.fixture(scope="session")
def abilene_text():
    from importlib import resources

    return resources.files("capped_rnd").joinpath("data/abilene.json").read_text()


@pytest.fixture(scope="session")
def telstra_text():
    from importlib import resources

    return resources.files("capped_rnd").joinpath("data/telstra_like.json").read_text()


def random_model(rng: random.Random, n: int, zero_peak_prob=0.2) -> CappedHoseModel:
    nodes = [f"n{i}" for i in range(n)]
    peaks = {}
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < zero_peak_prob:
                continue
            peaks[pair_key(nodes[a], nodes[b])] = rng.uniform(0.0, 5.0)
    marginals = {i: rng.uniform(0.0, 8.0) for i in nodes}
    return CappedHoseModel(nodes, marginals, peaks)


def random_connected_topology(rng: random.Random, n: int) -> Topology:
    nodes = [Node(f"n{i}") for i in range(n)]
    ids = [nd.id for nd in nodes]
    edges = []
    present = set()
    order = ids[:]
    rng.shuffle(order)
    for k in range(1, n):
        other = order[rng.randrange(k)]
        edges.append((order[k], other, rng.uniform(0.1, 2.0)))
        present.add(frozenset((order[k], other)))
    extra = rng.randrange(0, n)
    tries = 0
    while extra > 0 and tries < 10 * n:
        a, b = rng.sample(ids, 2)
        tries += 1
        if frozenset((a, b)) in present:
            continue
        edges.append((a, b, rng.uniform(0.1, 2.0)))
        present.add(frozenset((a, b)))
        extra -= 1
    return Topology(nodes, edges)
