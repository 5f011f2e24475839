# tests/test_logic.py

import random
import unittest
from itertools import product

from app.errors import ContractViolation, ConfigurationError
from app.logic.features import (
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
from app.logic.formula import (
    FALSE,
    TRUE,
    BoolAtom,
    Forall,
    Formula,
    Lit,
    PredApp,
    VarEq,
    conj,
    disj,
    forall,
    free_vars,
    holds,
    implies,
    lit,
    neg,
    rename,
    render,
    to_sexpr,
)
from app.logic.query import (
    Order,
    PlaceholderApp,
    VerificationInterface,
    VerificationQuery,
    interface_order,
    substitute,
)
from app.logic.sample import FreshElement, Label, Sample
from app.logic.sorts import BOOLEAN, ELEMENT, MethodPredicate, Role, Var, container, quantified_vars

LIST = container("list")
HD = MethodPredicate("hd", (LIST, ELEMENT))
MEM = MethodPredicate("mem", (LIST, ELEMENT))
LT = MethodPredicate("lt", (ELEMENT, ELEMENT))

S = Var("s", LIST)
X = Var("x", ELEMENT)
NU_LIST = Var("nu", LIST, Role.RESULT)
NU_ELEM = Var("nu", ELEMENT, Role.RESULT)
NU_BOOL = Var("nu", BOOLEAN, Role.RESULT)
(U,) = quantified_vars(1)

PUSH = FunctionSig("push", (X, S), NU_LIST)
TOP = FunctionSig("top", (S,), NU_ELEM)
IS_EMPTY = FunctionSig("is_empty", (S,), NU_BOOL)


class TestSorts(unittest.TestCase):
    def test_quantified_names(self):
        """
        Quantified variables are u, v, w and then u3, u4, ...
        """
        self.assertEqual([v.name for v in quantified_vars(5)], ["u", "v", "w", "u3", "u4"])
        self.assertTrue(all(v.role is Role.QUANTIFIED for v in quantified_vars(2)))

    def test_predicate_needs_container_first(self):
        """
        A method predicate takes its container first and elements after it.
        """
        with self.assertRaises(ConfigurationError):
            MethodPredicate("bad", (ELEMENT, LIST))
        self.assertTrue(LT.is_comparison)
        self.assertEqual(MethodPredicate("ord", (LIST, ELEMENT, ELEMENT)).element_arity, 2)


class TestFeatureSets(unittest.TestCase):
    def test_push_feature_order(self):
        """
        Predicate applications come grouped by container, then equalities.
        """
        fs = build_feature_set([HD, MEM], PUSH, (U,))
        self.assertEqual(
            fs.features,
            (
                PredApp(HD, (S, U)),
                PredApp(MEM, (S, U)),
                PredApp(HD, (NU_LIST, U)),
                PredApp(MEM, (NU_LIST, U)),
                VarEq(X, U),
            ),
        )

    def test_boolean_result_is_a_feature(self):
        fs = build_feature_set([HD, MEM], IS_EMPTY, (U,))
        self.assertEqual(fs.features[-1], BoolAtom(NU_BOOL))
        self.assertEqual(len(fs), 3)

    def test_program_variable_equality_without_quantifiers(self):
        """
        An elem -> elem function with no predicates has the single feature a = nu.
        """
        a = Var("a", ELEMENT)
        fs = build_feature_set([], FunctionSig("f", (a,), NU_ELEM), ())
        self.assertEqual(fs.features, (VarEq(a, NU_ELEM),))

    def test_comparisons_are_not_features(self):
        fs = build_feature_set([LT, HD], TOP, (U,))
        self.assertNotIn("lt", [f.pred.name for f in fs.features if isinstance(f, PredApp)])

    def test_two_quantified_variables(self):
        u, v = quantified_vars(2)
        fs = build_feature_set([HD], TOP, (u, v))
        self.assertEqual(
            fs.features,
            (PredApp(HD, (S, u)), PredApp(HD, (S, v)), VarEq(NU_ELEM, u), VarEq(NU_ELEM, v), VarEq(u, v)),
        )


class TestClassification(unittest.TestCase):
    def setUp(self):
        self.fs = build_feature_set([HD, MEM], TOP, (U,))

    def test_top_and_bottom(self):
        self.assertEqual(count_positive(Formula.top(self.fs)), 8)
        self.assertEqual(count_positive(Formula.bottom(self.fs)), 0)

    def test_unitary_classifier_accepts_only_its_vector(self):
        """
        ⟦fv⟧ is positive on fv and nowhere else.
        """
        fv = (True, False, True)
        phi = unitary_classifier(fv, self.fs)
        self.assertEqual(positive_vectors(phi), [fv])

    def test_wrong_length_is_rejected(self):
        with self.assertRaises(ContractViolation):
            classify(Formula.top(self.fs), (True,))

    def test_equivalence_by_truth_table(self):
        hd, mem, eq = (Lit(f) for f in self.fs.features)
        phi1 = Formula((U,), implies(eq, hd), self.fs)
        phi2 = Formula((U,), disj(neg(eq), hd), self.fs)
        self.assertTrue(equivalent(phi1, phi2))
        self.assertFalse(equivalent(phi1, Formula((U,), hd, self.fs)))

    def test_classification_matches_evaluation(self):
        """
        Classifying a vector agrees with evaluating the body on it, for every vector.
        """
        hd, mem, eq = (Lit(f) for f in self.fs.features)
        phi = Formula((U,), conj(implies(eq, hd), implies(hd, mem)), self.fs)
        for fv in product((False, True), repeat=3):
            expected = (not fv[2] or fv[0]) and (not fv[0] or fv[1])
            self.assertEqual(is_positive(phi, fv), expected)


def random_body(rng: random.Random, atoms: list[Lit], depth: int = 3):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(atoms)
    kind = rng.choice(("not", "and", "or", "implies"))
    if kind == "not":
        return neg(random_body(rng, atoms, depth - 1))
    lhs, rhs = random_body(rng, atoms, depth - 1), random_body(rng, atoms, depth - 1)
    if kind == "implies":
        return implies(lhs, rhs)
    return conj(lhs, rhs) if kind == "and" else disj(lhs, rhs)


class TestClassificationProperty(unittest.TestCase):
    def test_formula_is_the_disjunction_of_its_positive_vectors(self):
        """
        For random formulas, φ ⟺ ⋁ ⟦fv⟧ over fv ∈ φ⁺.
        """
        rng = random.Random(2024)
        feature_sets = [
            build_feature_set([], FunctionSig("f", (S,), NU_ELEM), (U,)),
            build_feature_set([HD], TOP, (U,)),
            build_feature_set([HD, MEM], TOP, (U,)),
            build_feature_set([HD, MEM], PUSH, (U,)),
            build_feature_set([HD, MEM], IS_EMPTY, (U,)),
        ]
        for _ in range(200):
            fs = rng.choice(feature_sets)
            phi = Formula(fs.quantified, random_body(rng, [Lit(f) for f in fs.features]), fs)
            unitary = [unitary_classifier(fv, fs).body for fv in positive_vectors(phi)]
            self.assertTrue(equivalent(phi, Formula(fs.quantified, disj(*unitary), fs)))


class TestFeatureExtraction(unittest.TestCase):
    def test_push_in_concat(self):
        """
        push(a, [b]) = [a; b] yields the two observed rows plus the all-false fresh row.
        """
        h = Var("h", ELEMENT, Role.RESULT)
        r = Var("r", LIST, Role.RESULT)
        res = Var("res", LIST, Role.RESULT)
        a, b = 0, 1
        sample = Sample(
            {"h": a, "r": (b,), "res": (a, b)},
            {
                "hd": frozenset({((b,), b), ((a, b), a)}),
                "mem": frozenset({((b,), b), ((a, b), a), ((a, b), b)}),
            },
            frozenset({a, b}),
        )
        fs = build_feature_set([HD, MEM], PUSH, (U,))
        vectors = extract_feature_vectors(fs, sample, PlaceholderApp("push", (h, r), res))
        self.assertEqual(
            vectors,
            [
                (False, False, True, True, True),
                (True, True, False, True, False),
                (False, False, False, False, False),
            ],
        )

    def test_fresh_elements_sort_after_values(self):
        self.assertLess(FreshElement(0), FreshElement(1))
        self.assertEqual(repr(FreshElement(2)), "<fresh2>")


class TestSentences(unittest.TestCase):
    def setUp(self):
        self.sample = Sample(
            {"s": (1, 2), "x": 1, "nu": (1, 2)},
            {"hd": frozenset({((1, 2), 1)}), "mem": frozenset({((1, 2), 1), ((1, 2), 2)})},
            frozenset({1, 2, 3}),
        )

    def test_smart_constructors(self):
        self.assertEqual(conj(TRUE, TRUE), TRUE)
        self.assertEqual(disj(FALSE), FALSE)
        self.assertEqual(conj(Lit(BoolAtom(NU_BOOL)), FALSE), FALSE)
        self.assertEqual(implies(FALSE, Lit(BoolAtom(NU_BOOL))), TRUE)
        self.assertEqual(neg(neg(Lit(BoolAtom(NU_BOOL)))), Lit(BoolAtom(NU_BOOL)))
        self.assertEqual(forall((U,), TRUE), TRUE)

    def test_quantifiers_range_over_elements(self):
        """
        ∀u. hd(s,u) ⟹ mem(s,u) holds; ∀u. mem(s,u) does not, since 3 is absent.
        """
        hd = lit(PredApp(HD, (S, U)))
        mem = lit(PredApp(MEM, (S, U)))
        self.assertTrue(holds(forall((U,), implies(hd, mem)), self.sample))
        self.assertFalse(holds(forall((U,), mem), self.sample))

    def test_unassigned_variable(self):
        with self.assertRaises(ContractViolation):
            holds(Lit(VarEq(X, Var("y", ELEMENT))), self.sample)

    def test_rename_respects_binders(self):
        """
        Renaming never touches a quantified occurrence.
        """
        body = Lit(VarEq(X, U))
        node = Forall((U,), body)
        renamed = rename(node, {X: Var("y", ELEMENT), U: Var("z", ELEMENT)})
        self.assertEqual(renamed, Forall((U,), Lit(VarEq(Var("y", ELEMENT), U))))
        self.assertEqual(free_vars(renamed), {Var("y", ELEMENT)})

    def test_printing(self):
        node = forall((U,), implies(lit(PredApp(HD, (S, U))), lit(PredApp(MEM, (S, U)))))
        self.assertEqual(render(node), "∀u, hd(s,u) ⟹ mem(s,u)")
        self.assertEqual(to_sexpr(node), "(forall ((u elem)) (implies (hd s u) (mem s u)))")

    def test_label(self):
        labeled = self.sample.with_label(Label.NEGATIVE, origin="concat#1")
        self.assertIs(labeled.label, Label.NEGATIVE)
        self.assertEqual(labeled.origin, "concat#1")


class TestInterfaces(unittest.TestCase):
    def setUp(self):
        self.fs = build_feature_set([HD, MEM], TOP, (U,))
        hd, mem, eq = (Lit(f) for f in self.fs.features)
        self.tight = Formula((U,), implies(eq, hd), self.fs)
        self.loose = Formula.top(self.fs)

    def test_order(self):
        d1 = VerificationInterface({"top": self.tight})
        d2 = VerificationInterface({"top": self.loose})
        self.assertIs(interface_order(d1, d2), Order.WEAKER)
        self.assertIs(interface_order(d2, d1), Order.STRONGER)
        self.assertIs(interface_order(d1, d1), Order.EQUAL)

    def test_missing_function(self):
        with self.assertRaises(ContractViolation):
            VerificationInterface({})["top"]

    def test_substitute_instantiates_at_actuals(self):
        """
        Σ[Δ] renames the formals of top to the call's variables.
        """
        l1 = Var("l1", LIST)
        t = Var("t", ELEMENT, Role.RESULT)
        query = VerificationQuery(
            "client#0",
            (PlaceholderApp("top", (l1,), t),),
            (),
            lit(PredApp(MEM, (l1, t))),
            inputs=(l1,),
        )
        query.validate()
        sigma = substitute(query, VerificationInterface({"top": self.tight}))
        self.assertEqual(sigma, Forall((U,), implies(Lit(VarEq(t, U)), Lit(PredApp(HD, (l1, U))))))

    def test_validate_rejects_stray_variables(self):
        query = VerificationQuery("q", (), (), Lit(BoolAtom(Var("b", BOOLEAN))))
        with self.assertRaises(ContractViolation):
            query.validate()


if __name__ == "__main__":
    unittest.main()
