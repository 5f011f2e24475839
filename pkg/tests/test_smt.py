# tests/test_smt.py

import unittest
from unittest.mock import MagicMock, patch

from app.errors import ContractViolation, SolverError, SolverUnknown
from app.logic.features import FunctionSig, build_feature_set
from app.logic.formula import (
    Exists,
    Forall,
    Formula,
    Lit,
    Not,
    PredApp,
    VarEq,
    conj,
    forall,
    implies,
    lit,
)
from app.logic.sorts import ELEMENT, MethodPredicate, Role, Var, container, quantified_vars
from app.smt.backend import Outcome, SmtBackend
from app.smt.encoding import encode, nnf, skolemize
from app.smt.reply import balanced, normalize_value, parse_reply, parse_values
from app.smt.transport import open_session
from tests.base import requires_z3

LIST = container("list")
HD = MethodPredicate("hd", (LIST, ELEMENT))
MEM = MethodPredicate("mem", (LIST, ELEMENT))
S = Var("s", LIST)
U, V = quantified_vars(2)

HD_SU = lit(PredApp(HD, (S, U)))
MEM_SU = lit(PredApp(MEM, (S, U)))


class TestReplies(unittest.TestCase):
    def test_atoms_and_lists(self):
        self.assertEqual(parse_reply("sat"), "sat")
        self.assertEqual(parse_reply(" unsat\n"), "unsat")
        self.assertEqual(parse_reply("((v_s Elem!val!0))"), [["v_s", "Elem!val!0"]])

    def test_error_reply(self):
        with self.assertRaises(SolverError):
            parse_reply('(error "line 1: unknown constant")')
        with self.assertRaises(SolverError):
            parse_reply("(sat")

    def test_model_values(self):
        """
        (as X Sort) wrappers and |quoted| symbols are reduced to the bare value.
        """
        self.assertEqual(normalize_value(["as", "@uc_Elem_0", "Elem"]), "@uc_Elem_0")
        self.assertEqual(normalize_value("|a b|"), "a b")
        pairs = parse_values("((v_x (as @uc_Elem_1 Elem)) ((p_hd v_s v_x) true))")
        self.assertEqual(pairs, [("v_x", "@uc_Elem_1"), (["p_hd", "v_s", "v_x"], "true")])

    def test_malformed_get_value(self):
        with self.assertRaises(SolverError):
            parse_values("sat")
        with self.assertRaises(SolverError):
            parse_values("((v_x))")

    def test_balanced(self):
        self.assertTrue(balanced("sat"))
        self.assertTrue(balanced("((a b) (c d))"))
        self.assertFalse(balanced("((a b)"))
        self.assertFalse(balanced("   "))
        self.assertTrue(balanced('(error "unbalanced ( in message")'))


class TestNormalForms(unittest.TestCase):
    def test_negated_implication(self):
        self.assertEqual(nnf(implies(HD_SU, MEM_SU), positive=False), conj(HD_SU, Not(MEM_SU)))

    def test_negated_forall_becomes_exists(self):
        node = nnf(Forall((U,), MEM_SU), positive=False)
        self.assertEqual(node, Exists((U,), Not(MEM_SU)))

    def test_skolemize_outer_existential(self):
        """
        The outermost ∃u is replaced by the constant sk!0.
        """
        node = skolemize(Exists((U,), Not(MEM_SU)))
        sk = Var("sk!0", ELEMENT)
        self.assertEqual(node, Not(Lit(PredApp(MEM, (S, sk)))))

    def test_existential_under_universal(self):
        with self.assertRaises(ContractViolation):
            skolemize(Forall((U,), Exists((V,), Lit(VarEq(U, V)))))

    def test_encoding(self):
        query = encode(forall((U,), implies(HD_SU, MEM_SU)), [HD, MEM], 2000)
        script = query.script()
        self.assertIn("(set-option :timeout 2000)", script)
        self.assertIn("(declare-sort D_list 0)", script)
        self.assertIn("(declare-fun p_hd (D_list Elem) Bool)", script)
        self.assertIn("(declare-const v_s D_list)", script)
        self.assertIn("(assert (forall ((x!c Elem)) (or (= x!c v_sk!0) (= x!c e_0))))", script)
        self.assertEqual([s.var for s in query.symbols if s.var], ["s", "sk!0"])

    def test_housed_variables_are_declared(self):
        """
        A query variable the sentence never mentions still gets a constant.
        """
        h = Var("h", ELEMENT)
        query = encode(forall((U,), MEM_SU), [HD, MEM], 2000, housed=(h, S))
        script = query.script()
        self.assertIn("(declare-const v_h Elem)", script)
        self.assertEqual([s.var for s in query.symbols if s.var], ["h", "s", "sk!0"])
        self.assertIn("(or (= x!c v_h) (= x!c v_sk!0) (= x!c e_0))", script)


class TestBackendProtocol(unittest.TestCase):
    def setUp(self):
        self.session = MagicMock()
        opener = patch("app.smt.backend.open_session")
        self.addCleanup(opener.stop)
        opener.start().return_value.__enter__.return_value = self.session
        self.backend = SmtBackend([HD, MEM], timeout_ms=1000, transport="api", check_models=True)

    def test_unsat_means_valid(self):
        self.session.ask.side_effect = ["unsat"]
        result = self.backend.verify(forall((U,), implies(HD_SU, HD_SU)))
        self.assertTrue(result.is_ok)
        self.assertEqual(self.backend.queries, 1)
        self.session.feed.assert_called_once()

    def test_sat_decodes_a_model(self):
        """
        A countermodel of ∀u. mem(s,u) has an element outside s.
        """
        self.session.ask.side_effect = [
            "sat",
            "((v_s D_list!val!0) (v_sk!0 Elem!val!0) (e_0 Elem!val!0))",
            "(((p_hd v_s v_sk!0) false))",
            "(((p_mem v_s v_sk!0) false))",
        ]
        result = self.backend.verify(forall((U,), MEM_SU))
        self.assertTrue(result.is_sat)
        self.assertEqual(result.model.assignment, {"s": "list0"})
        self.assertEqual(result.model.elements, frozenset({"e0"}))
        self.assertEqual(result.model.relation("mem"), frozenset())

    def test_model_assigns_housed_variables(self):
        self.session.ask.side_effect = [
            "sat",
            "((v_h Elem!val!0) (v_s D_list!val!0) (v_sk!0 Elem!val!0) (e_0 Elem!val!0))",
            "(((p_hd v_s v_h) false))",
            "(((p_mem v_s v_h) false))",
        ]
        result = self.backend.verify(forall((U,), MEM_SU), housed=(Var("h", ELEMENT),))
        self.assertTrue(result.is_sat)
        self.assertEqual(result.model.assignment, {"h": "e0", "s": "list0"})

    def test_unknown(self):
        self.session.ask.side_effect = ["unknown", '(:reason-unknown "timeout")']
        result = self.backend.verify(forall((U,), MEM_SU))
        self.assertIs(result.outcome, Outcome.UNKNOWN)
        self.assertEqual(result.reason, "timeout")

    def test_entails_raises_on_unknown(self):
        top = FunctionSig("top", (S,), Var("nu", ELEMENT, Role.RESULT))
        fs1 = build_feature_set([HD], top, (U,))
        fs2 = build_feature_set([MEM], top, (U,))
        self.session.ask.side_effect = ["unknown", '(:reason-unknown "incomplete")']
        with self.assertRaises(SolverUnknown):
            self.backend.entails(Formula.top(fs1), Formula((U,), Lit(fs2.features[0]), fs2))

    def test_unexpected_status(self):
        self.session.ask.side_effect = ["maybe"]
        with self.assertRaises(SolverError):
            self.backend.verify(forall((U,), MEM_SU))


@requires_z3
class TestZ3(unittest.TestCase):
    def setUp(self):
        self.backend = SmtBackend([HD, MEM], timeout_ms=5000, transport="api")

    def test_valid_sentence(self):
        self.assertTrue(self.backend.verify(forall((U,), implies(HD_SU, HD_SU))).is_ok)

    def test_uninterpreted_predicates_are_unrelated(self):
        """
        hd and mem carry no built-in meaning, so hd ⟹ mem has a countermodel.
        """
        result = self.backend.verify(forall((U,), implies(HD_SU, MEM_SU)))
        self.assertTrue(result.is_sat)
        self.assertIn("s", result.model.assignment)

    def test_entailment(self):
        top = FunctionSig("top", (S,), Var("nu", ELEMENT, Role.RESULT))
        fs = build_feature_set([HD, MEM], top, (U,))
        hd, mem, eq = (Lit(f) for f in fs.features)
        strong = Formula((U,), conj(hd, mem), fs)
        weak = Formula((U,), hd, fs)
        self.assertTrue(self.backend.entails(strong, weak))
        self.assertFalse(self.backend.entails(weak, strong))

    def test_api_session_answers(self):
        """
        The in-process transport takes its timeout from the context it builds.
        """
        with open_session("api", "z3", 1000) as session:
            session.feed("(declare-const a Bool)\n(assert a)")
            self.assertEqual(parse_reply(session.ask("(check-sat)")), "sat")
        with open_session("api", "z3", 1000) as session:
            session.feed("(declare-const a Bool)\n(assert (and a (not a)))")
            self.assertEqual(parse_reply(session.ask("(check-sat)")), "unsat")

    def test_unmentioned_query_variable_is_in_the_model(self):
        result = self.backend.verify(forall((U,), implies(HD_SU, MEM_SU)), housed=(Var("h", ELEMENT), S))
        self.assertTrue(result.is_sat)
        self.assertIn(result.model.assignment["h"], result.model.elements)


if __name__ == "__main__":
    unittest.main()
