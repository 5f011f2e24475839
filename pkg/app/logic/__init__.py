from app.logic.features import (
    FeatureSet,
    FeatureVector,
    FunctionSig,
    build_feature_set,
    classify,
    count_positive,
    equivalent,
    extract_feature_vectors,
    is_positive,
    positive_vectors,
    unitary_classifier,
)
from app.logic.formula import FALSE, TRUE, Formula, Node
from app.logic.query import (
    PlaceholderApp,
    VerificationInterface,
    VerificationQuery,
    interface_order,
    substitute,
)
from app.logic.sample import FreshElement, Label, Sample
from app.logic.sorts import BOOLEAN, ELEMENT, MethodPredicate, Role, Sort, Var, container
