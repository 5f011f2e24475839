from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations, product

from app.errors import ContractViolation
from app.logic.formula import (
    AtomT,
    BoolAtom,
    Formula,
    PredApp,
    VarEq,
    atom_holds,
    atoms_of,
    conj,
    lit,
    rename_atom,
    truth,
)
from app.logic.sample import FreshElement, Label, Sample
from app.logic.sorts import MethodPredicate, Var

FeatureVector = tuple[bool, ...]


@dataclass(frozen=True)
class FunctionSig:
    name: str
    params: tuple[Var, ...]
    result: Var

    @property
    def variables(self) -> tuple[Var, ...]:
        return self.params + (self.result,)


@dataclass(frozen=True)
class FeatureSet:
    function: str
    features: tuple[AtomT, ...]
    quantified: tuple[Var, ...]
    signature: FunctionSig

    def __len__(self) -> int:
        return len(self.features)

    def index(self, feature: AtomT) -> int:
        return self.features.index(feature)

    def vectors(self) -> Iterator[FeatureVector]:
        """All 2^|S| vectors, all-false first."""
        return product((False, True), repeat=len(self.features))

    def formal_mapping(self, args: Sequence[Var], result: Var) -> dict[Var, Var]:
        if len(args) != len(self.signature.params):
            raise ContractViolation(
                f"{self.function} takes {len(self.signature.params)} arguments, got {len(args)}."
            )
        mapping = dict(zip(self.signature.params, args))
        mapping[self.signature.result] = result
        return mapping


def build_feature_set(
    predicates: Sequence[MethodPredicate],
    signature: FunctionSig,
    quantified: Sequence[Var],
) -> FeatureSet:
    """Minimally linearly independent feature basis for one library function.

    Predicate applications only take quantified variables in element positions;
    an application such as hd(l, ν) is expressible as hd(l, u) ∧ ν = u and is left out.
    """
    quantified = tuple(quantified)
    program_vars = signature.variables
    features: list[AtomT] = []

    for cvar in (v for v in program_vars if v.sort.is_container):
        for pred in predicates:
            if pred.is_comparison or pred.signature[0] != cvar.sort:
                continue
            for elems in product(quantified, repeat=pred.element_arity):
                features.append(PredApp(pred, (cvar,) + elems))

    elem_vars = [v for v in program_vars if v.sort.is_element]
    features.extend(VarEq(a, b) for a, b in combinations(elem_vars, 2))
    features.extend(VarEq(a, u) for a in elem_vars for u in quantified)
    features.extend(VarEq(a, b) for a, b in combinations(quantified, 2))
    features.extend(BoolAtom(v) for v in program_vars if v.sort.is_boolean)

    return FeatureSet(signature.name, tuple(dict.fromkeys(features)), quantified, signature)


def _check_length(fv: FeatureVector, feature_set: FeatureSet):
    if len(fv) != len(feature_set):
        raise ContractViolation(
            f"Feature vector of length {len(fv)} does not match the {len(feature_set)} features of {feature_set.function}."
        )


def unitary_classifier(fv: FeatureVector, feature_set: FeatureSet) -> Formula:
    _check_length(fv, feature_set)
    body = conj(*(lit(f, bit) for f, bit in zip(feature_set.features, fv)))
    return Formula(feature_set.quantified, body, feature_set)


def classify(phi: Formula, fv: FeatureVector) -> Label:
    feature_set = phi.feature_set
    if feature_set is None:
        raise ContractViolation("Only hypothesis-space formulas can classify feature vectors.")
    _check_length(fv, feature_set)
    valuation = dict(zip(feature_set.features, fv))
    for atom in atoms_of(phi.body):
        if atom not in valuation:
            raise ContractViolation(f"Atom {atom} is not a feature of {feature_set.function}.")
    return Label.POSITIVE if truth(phi.body, valuation.__getitem__) else Label.NEGATIVE


def is_positive(phi: Formula, fv: FeatureVector) -> bool:
    return classify(phi, fv) is Label.POSITIVE


def positive_vectors(phi: Formula) -> list[FeatureVector]:
    return [fv for fv in phi.feature_set.vectors() if is_positive(phi, fv)]


def count_positive(phi: Formula) -> int:
    return len(positive_vectors(phi))


def equivalent(phi1: Formula, phi2: Formula) -> bool:
    """Truth-table equivalence of two formulas over the same feature set."""
    if phi1.feature_set != phi2.feature_set:
        raise ContractViolation("Formulas range over different feature sets.")
    return all(is_positive(phi1, fv) == is_positive(phi2, fv) for fv in phi1.feature_set.vectors())


def instantiation_domain(sample: Sample, quantified: Sequence[Var]) -> list:
    present = sorted(sample.elements, key=repr)
    return present + [FreshElement(i) for i in range(max(1, len(quantified)))]


def extract_feature_vectors(
    feature_set: FeatureSet,
    sample: Sample,
    app,
) -> list[FeatureVector]:
    """χ_S(s) for one placeholder application, deduplicated in first-seen order."""
    mapping: Mapping[Var, Var] = feature_set.formal_mapping(app.args, app.result)
    actual = [rename_atom(f, mapping) for f in feature_set.features]
    quantified = feature_set.quantified
    domain = instantiation_domain(sample, quantified)

    vectors: dict[FeatureVector, None] = {}
    for values in product(domain, repeat=len(quantified)):
        env = {u.name: x for u, x in zip(quantified, values)}
        vectors.setdefault(tuple(atom_holds(f, sample, env) for f in actual), None)
    return list(vectors)
