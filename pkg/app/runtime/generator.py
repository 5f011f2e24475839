import random
from dataclasses import dataclass

from app.errors import ConfigurationError
from app.logic.sorts import Sort
from app.runtime.values import LEAF, BatchedQueue, TreeNode


@dataclass(frozen=True)
class GenConfig:
    max_container_size: int = 6
    elem_min: int = 0
    elem_max: int = 5
    seed: int = 0
    samples_per_round: int = 20
    consistent_streak_to_stop: int = 200

    def __post_init__(self):
        if self.max_container_size < 0:
            raise ConfigurationError("max_container_size must be >= 0.")
        if self.elem_min > self.elem_max:
            raise ConfigurationError("The element domain is empty.")
        if self.consistent_streak_to_stop <= 0 or self.samples_per_round <= 0:
            raise ConfigurationError("Sampling counts must be positive.")

    @property
    def elem_domain(self) -> range:
        return range(self.elem_min, self.elem_max + 1)


def _elem(rng: random.Random, gen: GenConfig) -> int:
    return rng.randint(gen.elem_min, gen.elem_max)


def _tree(rng: random.Random, gen: GenConfig, size: int):
    if size == 0:
        return LEAF
    left = rng.randint(0, size - 1)
    return TreeNode(_elem(rng, gen), _tree(rng, gen, left), _tree(rng, gen, size - 1 - left))


def generate(gen: GenConfig, sort: Sort, rng: random.Random | None = None):
    """A size-bounded random value of ``sort``; reproducible for a given seed or rng state."""
    rng = rng if rng is not None else random.Random(gen.seed)
    if sort.is_element:
        return _elem(rng, gen)
    if sort.is_boolean:
        return rng.random() < 0.5
    size = rng.randint(0, gen.max_container_size)
    if sort.name == "list":
        return tuple(_elem(rng, gen) for _ in range(size))
    if sort.name == "queue":
        items = tuple(_elem(rng, gen) for _ in range(size))
        split = rng.randint(1, size) if size else 0
        return BatchedQueue.make(items[:split], tuple(reversed(items[split:])))
    if sort.name == "tree":
        return _tree(rng, gen, size)
    raise ConfigurationError(f"No generator for datatype '{sort.name}'.")
