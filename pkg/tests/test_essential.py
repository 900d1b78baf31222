import random

import pytest

from essentree import (
    App,
    SearchBudgetExceeded,
    TreeAutomaton,
    Var,
    ess_set,
    essential_chain,
    essentiality_report,
    is_essential,
    is_r_essential,
    parse_position,
    r_ess_set,
    reduce,
    run,
    subterm_at,
    variables,
)

import oracles
from generators import random_automaton, random_term_with_vars


def sub(t, p):
    return subterm_at(t, parse_position(p))


def with_final(a, final):
    return TreeAutomaton(a.states, final, a.nullary, a.rules, a.signature)


class TestFixtureA1:
    @pytest.mark.parametrize("p", ["1111", "111", "11"])
    def test_x3_essential_low(self, a1, t1, p):
        assert is_essential(a1, sub(t1, p), 3) is not None

    def test_x3_fictive_at_1(self, a1, t1):
        assert is_essential(a1, sub(t1, "1"), 3) is None

    @pytest.mark.parametrize("p", ["2221", "222", "22"])
    def test_x2_essential_low(self, a1, t1, p):
        assert is_essential(a1, sub(t1, p), 2) is not None

    def test_x2_fictive_at_2(self, a1, t1):
        assert is_essential(a1, sub(t1, "2"), 2) is None

    def test_ess_of_whole_term(self, a1, t1):
        assert ess_set(a1, t1) == {1, 2} == oracles.ess(a1, t1)

    def test_ground(self, a1):
        assert ess_set(a1, App("0")) == frozenset()
        assert is_essential(a1, App("0"), 1) is None

    def test_absent_variable(self, a1, t1):
        assert is_essential(a1, t1, 9) is None


class TestFixtureA2:
    def test_sets(self, a2, t2):
        assert ess_set(a2, t2) == {1, 2, 3}
        assert r_ess_set(a2, t2) == {1, 2} == oracles.ess(a2, t2, accepting_only=True)
        assert is_r_essential(a2, t2, 3) is None

    def test_x1_r_essential(self, a2, t2):
        w = is_r_essential(a2, t2, 1)
        assert w is not None
        assert oracles.essential(a2, t2, 1, accepting_only=True)
        assert (w.state1 in a2.final) != (w.state2 in a2.final)

    def test_report_lines(self, a2, t2):
        lines = essentiality_report(a2, t2).lines()
        assert [line.split(", witness")[0] for line in lines] == [
            "x1: essential, r-essential",
            "x2: essential, r-essential",
            "x3: essential, NOT r-essential",
        ]
        assert all("γ1={" in line and "states q" in line for line in lines)

    def test_trivial_final_sets(self, a2, t2):
        for final in (a2.states, []):
            assert r_ess_set(with_final(a2, final), t2) == frozenset()


class TestWitness:
    def test_literal_definition(self, a1, a2, t1, t2):
        for a, t in ((a1, t1), (a2, t2)):
            report = essentiality_report(a, t)
            for i, w in report.witnesses.items():
                assert w.variable == i
                assert set(w.gamma1) == set(w.gamma2) == variables(t)
                assert {k for k in w.gamma1 if w.gamma1[k] != w.gamma2[k]} == {i}
                assert run(a, w.gamma1, t) == w.state1 != w.state2 == run(a, w.gamma2, t)

    def test_first_in_enumeration_order(self, a2, t2):
        from essentree import assignments_over

        w = is_essential(a2, t2, 2)
        others = sorted(variables(t2) - {2})
        for g in assignments_over(others, a2.signature):
            states = [run(a2, {**g, 2: v}, t2) for v in a2.signature.nullary]
            if len(set(states)) > 1:
                assert {k: v for k, v in w.gamma1.items() if k != 2} == g
                break

    def test_str(self, a1, t1):
        w = is_essential(a1, sub(t1, "11"), 3)
        assert str(w).startswith("witness γ1={x2=0,x3=0} γ2={x2=0,x3=1} states ")


class TestChain:
    def test_a1_subterm(self, a1, t1):
        assert essential_chain(a1, sub(t1, "11"), 3) == [(1, 1), (1,), ()]

    def test_depth_one(self, p1, a1):
        assert essential_chain(a1, p1("g1(x2,x1)"), 2) == [(1,), ()]
        assert essential_chain(a1, p1("f1(x1)"), 1) == [(1,), ()]

    def test_absent_when_fictive(self, a1, t1):
        assert essential_chain(a1, t1, 3) is None

    def test_variable_term(self, a1):
        assert essential_chain(a1, Var(1), 1) == [()]


class TestBudget:
    def test_refuses_large_sweeps(self, a2):
        t = App("g1", (App("g1", (Var(1), Var(2), Var(3))), App("g1", (Var(4), Var(5), Var(6))), Var(7)))
        with pytest.raises(SearchBudgetExceeded):
            ess_set(a2, t, budget=3**7 - 1)
        assert ess_set(a2, t, budget=3**7) == set(range(1, 8))


class TestProperties:
    def test_against_oracle(self):
        rng = random.Random(21)
        for _ in range(200):
            a = random_automaton(rng)
            t = random_term_with_vars(rng, a)
            report = essentiality_report(a, t)
            assert report.essential == oracles.ess(a, t)
            assert report.r_essential == oracles.ess(a, t, accepting_only=True)
            assert report.r_essential <= report.essential
            for i in variables(t):
                assert (is_essential(a, t, i) is not None) == (i in report.essential)
                assert (is_r_essential(a, t, i) is not None) == (i in report.r_essential)

    def test_chain_stays_essential(self):
        rng = random.Random(22)
        for _ in range(150):
            a = random_automaton(rng)
            t = random_term_with_vars(rng, a)
            for i in variables(t):
                chain = essential_chain(a, t, i)
                if is_essential(a, t, i) is None:
                    assert chain is None
                    continue
                assert subterm_at(t, chain[0]) == Var(i)
                assert chain[-1] == ()
                for lower, upper in zip(chain, chain[1:]):
                    assert lower[:-1] == upper
                assert all(oracles.essential(a, subterm_at(t, p), i) for p in chain)

    def test_run_equality_transfer(self):
        rng = random.Random(23)
        for _ in range(100):
            a = random_automaton(rng)
            t = random_term_with_vars(rng, a)
            r, _ = reduce(a, t)
            assert ess_set(a, t) == ess_set(a, r)

    def test_occurrence_independence(self):
        # every occurrence of x_i changes together; repeated calls agree
        rng = random.Random(24)
        for _ in range(100):
            a = random_automaton(rng, min_states=2)
            t = random_term_with_vars(rng, a)
            for i in variables(t):
                first = is_essential(a, t, i) is not None
                assert first == (is_essential(a, t, i) is not None)
                assert first == oracles.essential(a, t, i)
