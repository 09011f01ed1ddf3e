import numpy as np

"""
Seeded random streams
Every stochastic component receives a numpy Generator; independent streams
are spawned from one SeedSequence so parallel workers never share state
"""


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


"""
Spawn independent generators from one seed
Args:
    seed: Root seed
    count: Number of streams
Returns:
    List of generators, stream k always identical for the same (seed, k)
"""
def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]
