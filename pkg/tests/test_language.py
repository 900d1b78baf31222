import random

import pytest

from essentree import (
    App,
    InfiniteLanguage,
    SearchBudgetExceeded,
    TreeAutomaton,
    count_ground,
    enumerate_ground,
    format_fta,
    format_term,
    is_finite_language,
    is_rfi_irreducible,
    languages_equivalent,
    load_fta,
    minimal_language,
    minimize_automaton,
    optimal_pair,
    parse_term,
    run,
    usefulness,
)
from essentree.language import count_accepted

import oracles
from conftest import T_DOUBLE_PRIME, T_PRIME
from generators import random_automaton


def with_final(a, final):
    return TreeAutomaton(a.states, final, a.nullary, a.rules, a.signature)


@pytest.fixture(scope="module")
def stuck():
    # constants all land in q0 and nothing leaves it
    return TreeAutomaton(
        ["q0", "q1"], ["q1"], {"0": "q0", "1": "q0"}, {"h": {("q0",): "q0", ("q1",): "q1"}}
    )


@pytest.fixture(scope="module")
def twins():
    # q1 and q2 behave identically
    return TreeAutomaton(
        ["q0", "q1", "q2"],
        ["q1", "q2"],
        {"0": "q0", "1": "q1", "2": "q2"},
        {"h": {("q0",): "q1", ("q1",): "q0", ("q2",): "q0"}},
    )


class TestUsefulness:
    def test_a1(self, a1):
        r = usefulness(a1)
        assert r.reachable == r.coreachable == r.useful == {"q0", "q1"}

    def test_no_final(self, a1):
        r = usefulness(with_final(a1, []))
        assert r.coreachable == r.useful == frozenset()

    def test_stuck(self, stuck):
        r = usefulness(stuck)
        assert r.reachable == {"q0"}
        assert r.useful == frozenset()


class TestFiniteness:
    def test_a1_infinite(self, a1):
        res = is_finite_language(a1)
        assert not res
        assert res.cycle == (("q0", "f1", "q1"), ("q1", "f1", "q0"))
        assert str(res) == "infinite: pumping cycle q0 → q1 → q0 via f1"

    def test_constants_only(self, c1):
        assert is_finite_language(c1)
        assert str(is_finite_language(c1)) == "finite"

    def test_empty_language(self, a1, stuck):
        assert is_finite_language(with_final(a1, []))
        assert is_finite_language(stuck)

    def test_cycle_outside_useful_part(self):
        # h loops on q1, but q1 is never reachable
        a = TreeAutomaton(["q0", "q1"], ["q0", "q1"], {"0": "q0"}, {"h": {("q0",): "q0", ("q1",): "q1"}})
        assert not is_finite_language(a)
        b = TreeAutomaton(["q0", "q1", "q2"], ["q1"], {"0": "q0"}, {"h": {("q0",): "q1", ("q1",): "q2", ("q2",): "q2"}})
        assert is_finite_language(b)
        assert [format_term(t) for t in enumerate_ground(b, 3)] == ["h(0)"]

    def test_agrees_with_counts(self):
        rng = random.Random(51)
        for _ in range(60):
            a = random_automaton(rng)
            n = len(a.states)
            differ = count_accepted(a, n) != count_accepted(a, 2 * n)
            assert bool(is_finite_language(a)) == (not differ)


class TestEnumerate:
    def test_constants_only(self, c1):
        assert [format_term(t) for t in enumerate_ground(c1, 3)] == ["1"]

    def test_empty(self, a1):
        assert enumerate_ground(with_final(a1, []), 2) == []

    def test_a1_depth1(self, a1):
        got = [format_term(t) for t in enumerate_ground(a1, 1)]
        assert got == ["1", "f1(0)", "g1(0,1)", "g1(1,0)", "g1(1,1)", "g2(1,1)"]

    def test_against_brute_force(self):
        rng = random.Random(52)
        for _ in range(40):
            a = random_automaton(rng, max_constants=2)
            got = enumerate_ground(a, 2)
            want = [t for t in oracles.ground_terms(a.signature, 2) if run(a, {}, t) in a.final]
            assert sorted(map(format_term, got)) == sorted(map(format_term, want))
            assert len(got) == count_accepted(a, 2)
            assert sum(count_ground(a, 2).values()) == len(oracles.ground_terms(a.signature, 2))

    def test_limit(self, a1):
        with pytest.raises(SearchBudgetExceeded):
            enumerate_ground(a1, 3, limit=100)


class TestMinimalLanguage:
    def test_a1(self, a1, t1, p1):
        out = minimal_language(a1, [t1, p1(T_PRIME), p1(T_DOUBLE_PRIME)])
        assert out == [p1(T_DOUBLE_PRIME)]

    def test_empty(self, a1):
        assert minimal_language(a1, []) == []

    def test_irreducible_unchanged(self, a1, p1):
        terms = [p1(T_DOUBLE_PRIME), App("0"), App("1")]
        assert minimal_language(a1, terms) == terms

    def test_equivalent_to_input(self):
        rng = random.Random(53)
        for _ in range(30):
            a = random_automaton(rng, max_constants=2)
            terms = enumerate_ground(a, 2)
            out = minimal_language(a, terms)
            assert languages_equivalent(a, terms, out)
            assert all(is_rfi_irreducible(a, t) for t in out)


class TestLanguagesEquivalent:
    def test_examples(self, a1, t1, p1):
        assert languages_equivalent(a1, [t1], [p1(T_DOUBLE_PRIME)])
        assert languages_equivalent(a1, [t1, App("0")], [t1, App("0")])
        assert not languages_equivalent(a1, [App("0")], [App("1")])


class TestMinimize:
    def test_a1(self, a1, a2):
        assert len(minimize_automaton(a1).states) == 2
        assert len(minimize_automaton(a2).states) == 3

    def test_merges_twins(self, twins):
        m = minimize_automaton(twins)
        assert m.states == ("q0", "q1")
        assert m.final == {"q1"}
        assert dict(m.nullary) == {"0": "q0", "1": "q1", "2": "q1"}

    def test_drops_unreachable(self, stuck):
        m = minimize_automaton(stuck)
        assert m.states == ("q0",) and m.final == frozenset()

    def test_canonical_names(self):
        a = TreeAutomaton(["qb", "qa"], ["qb"], {"0": "qb", "1": "qa"}, {"h": {("qb",): "qa", ("qa",): "qb"}})
        m = minimize_automaton(a)
        # qa is the least name, so its block comes first
        assert dict(m.nullary) == {"0": "q1", "1": "q0"}

    def test_ground_agreement_and_idempotence(self):
        rng = random.Random(54)
        for _ in range(60):
            a = random_automaton(rng)
            m = minimize_automaton(a)
            ok, _ = oracles.ground_agreement(a, m, 3)
            assert ok
            assert format_fta(minimize_automaton(m)) == format_fta(m)

    def test_round_trips_through_file(self, a2, tmp_path):
        from essentree import dump_fta

        m = minimize_automaton(a2)
        dump_fta(m, tmp_path / "m.fta")
        assert format_fta(load_fta(tmp_path / "m.fta")) == format_fta(m)


class TestOptimalPair:
    def test_a1_infinite(self, a1):
        pair = optimal_pair(a1)
        assert isinstance(pair, InfiniteLanguage)
        assert "f1" in str(pair)

    def test_constants_only(self, c1, tmp_path):
        pair = optimal_pair(c1)
        assert [format_term(t) for t in pair.language] == ["1"]
        assert len(pair.automaton.states) == 2
        fta, terms = pair.write(tmp_path / "opt")
        assert terms.read_text() == "1\n"
        assert format_fta(load_fta(fta)) == format_fta(pair.automaton)

    def test_empty_language(self, c1):
        pair = optimal_pair(with_final(c1, []))
        assert pair.language == []

    def test_terms_accepted_and_irreducible(self):
        rng = random.Random(55)
        seen = 0
        for _ in range(80):
            a = random_automaton(rng, max_states=3, max_binary=1)
            pair = optimal_pair(a)
            if isinstance(pair, InfiniteLanguage):
                continue
            seen += 1
            for t in pair.language:
                assert run(pair.automaton, {}, t) in pair.automaton.final
                assert is_rfi_irreducible(a, t)
            assert len(pair.traces) == len(pair.language)
        assert seen > 10

    def test_finite_with_structure(self):
        # h(0) is accepted, deeper terms fall into a sink
        text = "states: q0 q1 q2\nfinal: q1\nconst 0 -> q0\nrule h(q0) -> q1\nrule h(q1) -> q2\nrule h(q2) -> q2\n"
        from essentree import parse_fta

        a = parse_fta(text)
        pair = optimal_pair(a)
        assert [format_term(t) for t in pair.language] == ["h(0)"]
        assert parse_term("h(0)", a.signature) in pair.language
