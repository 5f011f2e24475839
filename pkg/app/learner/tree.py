"""ID3 decision trees over Boolean feature vectors."""
import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Union

from app.errors import ContractViolation
from app.learner.dnf import from_cubes, minimize
from app.logic.features import FeatureSet, FeatureVector
from app.logic.formula import Formula

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledData:
    pi: frozenset[FeatureVector]
    omega: frozenset[FeatureVector]
    feature_set: FeatureSet

    def __post_init__(self):
        object.__setattr__(self, "pi", frozenset(self.pi))
        object.__setattr__(self, "omega", frozenset(self.omega))
        overlap = self.pi & self.omega
        if overlap:
            raise ContractViolation(f"{len(overlap)} vector(s) are labeled both positive and negative.")
        for fv in self.pi | self.omega:
            if len(fv) != len(self.feature_set):
                raise ContractViolation(
                    f"Vector of length {len(fv)} given for the {len(self.feature_set)} features of "
                    f"{self.feature_set.function}."
                )


@dataclass(frozen=True)
class Leaf:
    label: bool


@dataclass(frozen=True)
class Split:
    feature: int
    when_true: "DecisionTree"
    when_false: "DecisionTree"


DecisionTree = Union[Leaf, Split]


def classify_tree(tree: DecisionTree, fv: FeatureVector) -> bool:
    while isinstance(tree, Split):
        tree = tree.when_true if fv[tree.feature] else tree.when_false
    return tree.label


def _entropy(pos: int, neg: int) -> float:
    total = pos + neg
    if pos == 0 or neg == 0:
        return 0.0
    p, n = pos / total, neg / total
    return -(p * math.log2(p) + n * math.log2(n))


def _best_split(pos: list[FeatureVector], neg: list[FeatureVector], width: int, used: frozenset[int]) -> int | None:
    total = len(pos) + len(neg)
    base = _entropy(len(pos), len(neg))
    best, best_gain = None, -1.0
    for i in range(width):
        if i in used:
            continue
        pos_t = sum(1 for fv in pos if fv[i])
        neg_t = sum(1 for fv in neg if fv[i])
        n_true = pos_t + neg_t
        if n_true in (0, total):
            continue
        n_false = total - n_true
        remainder = (n_true / total) * _entropy(pos_t, neg_t) + (n_false / total) * _entropy(
            len(pos) - pos_t, len(neg) - neg_t
        )
        gain = base - remainder
        # strict comparison keeps the lowest index on ties
        if gain > best_gain + 1e-12:
            best, best_gain = i, gain
    return best


def _grow(pos: list[FeatureVector], neg: list[FeatureVector], width: int, used: frozenset[int]) -> DecisionTree:
    if not neg:
        return Leaf(True)
    if not pos:
        return Leaf(False)
    feature = _best_split(pos, neg, width, used)
    if feature is None:
        raise ContractViolation("No feature separates the remaining positive and negative vectors.")
    used = used | {feature}
    return Split(
        feature,
        _grow([fv for fv in pos if fv[feature]], [fv for fv in neg if fv[feature]], width, used),
        _grow([fv for fv in pos if not fv[feature]], [fv for fv in neg if not fv[feature]], width, used),
    )


def build_tree(data: LabeledData) -> DecisionTree:
    return _grow(sorted(data.pi), sorted(data.omega), len(data.feature_set), frozenset())


def positive_paths(tree: DecisionTree) -> Iterable[tuple[tuple[int, bool], ...]]:
    if isinstance(tree, Leaf):
        if tree.label:
            yield ()
        return
    for path in positive_paths(tree.when_true):
        yield ((tree.feature, True),) + path
    for path in positive_paths(tree.when_false):
        yield ((tree.feature, False),) + path


def tree_to_formula(tree: DecisionTree, feature_set: FeatureSet) -> Formula:
    """Disjunction of the positive paths, minimized to an equivalent DNF."""
    cubes = [tuple(sorted(path)) for path in positive_paths(tree)]
    cubes = minimize(cubes, len(feature_set))
    body = from_cubes(cubes, feature_set.features)
    return Formula(feature_set.quantified, body, feature_set)


def learn(data: LabeledData) -> Formula:
    phi = tree_to_formula(build_tree(data), data.feature_set)
    logger.debug("Learned %s for %s from |π|=%d |ω|=%d", phi.render(), data.feature_set.function,
                 len(data.pi), len(data.omega))
    return phi
