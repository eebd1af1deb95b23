import random

import pytest

from automata import (
    EMPTY, CleanReport, Nfa, accepts, accepts_by_runs, clean, clean_violations, embeds,
    enumerate_strings, find_unfounded_witness, format_input_string, is_clean, is_converging,
    is_founded, parse_input_string, powerset_symbols, prefix, prune_unreachable,
    remove_self_loops, restrict_founded_start, run_parallel, string_automaton, symbol,
    terminal_symbols,
)
from errors import InputDomainError, ParseError, VacuousLanguageError, ValidationError
from tests.fixtures import (
    SIGMA1, SIGMA2, SIGMA3, bias_automaton, pattern_automaton, selfloop_automaton,
    unfounded_automaton,
)
from tests.generators import random_founded_automaton


class TestStrings:

    def test_parse_literal(self):
        assert parse_input_string("[a,b,c];[b,c];[]") == (SIGMA1, SIGMA2, EMPTY)
        assert parse_input_string("") == ()
        assert parse_input_string(" [ a , d ] ") == (SIGMA3,)

    def test_format_is_inverse_of_parse(self):
        literal = "[a,b,c];[a,d];[]"
        assert format_input_string(parse_input_string(literal)) == literal

    @pytest.mark.parametrize("literal", ["a,b", "[a,b", "[a,,b]", "[a];b", "[a b]", "[a,a]"])
    def test_parse_rejects_malformed(self, literal):
        with pytest.raises(ParseError):
            parse_input_string(literal)

    def test_powerset_order(self):
        assert powerset_symbols('ba') == [EMPTY, symbol('a'), symbol('b'), symbol('a', 'b')]
        assert len(powerset_symbols('abcd')) == 16

    def test_enumerate_strings_shortlex(self):
        pool = [symbol('a'), EMPTY]
        strings = list(enumerate_strings(pool, 1, 2))
        assert strings[:2] == [(EMPTY,), (symbol('a'),)]
        assert len(strings) == 2 + 4

    def test_prefix(self):
        alpha = (SIGMA1, SIGMA2, SIGMA3)
        assert prefix(alpha, 2) == (SIGMA1, SIGMA2)
        assert prefix(alpha, 0) == ()


class TestEmbeds:

    def test_reflexive(self):
        alpha = (SIGMA1, SIGMA3)
        assert embeds(alpha, alpha)

    def test_suffix_superset(self):
        assert embeds((symbol('a'), symbol('b', 'c')), (symbol('b'),))

    def test_must_be_at_the_end(self):
        assert not embeds((symbol('b'), symbol('a')), (symbol('b'),))

    def test_longer_beta_never_embedded(self):
        assert not embeds((SIGMA1,), (SIGMA1, SIGMA1))

    def test_monotone_in_alpha(self):
        rng = random.Random(7)
        pool = powerset_symbols('abc')
        for _ in range(200):
            beta = tuple(rng.choice(pool) for _ in range(rng.randint(0, 3)))
            alpha = tuple(rng.choice(pool) for _ in range(rng.randint(0, 4)))
            if embeds(alpha, beta):
                grown = tuple(s | rng.choice(pool) for s in alpha)
                assert embeds(grown, beta)
                assert embeds((rng.choice(pool),) + alpha, beta)


class TestSemantics:

    def test_run_parallel(self):
        nfa = pattern_automaton()
        assert run_parallel(nfa, ()) == [frozenset({'q0'})]
        assert run_parallel(nfa, (SIGMA1,)) == [frozenset({'q0'}), frozenset({'q1'})]
        assert run_parallel(nfa, (SIGMA2,)) == [frozenset({'q0'}), frozenset()]

    def test_run_rejects_foreign_symbol(self):
        with pytest.raises(InputDomainError):
            run_parallel(pattern_automaton(), (symbol('z'),))

    def test_accepts(self):
        nfa = pattern_automaton()
        assert accepts(nfa, (SIGMA1, SIGMA3))
        assert accepts(nfa, (SIGMA1, SIGMA2, SIGMA2, SIGMA3))
        assert not accepts(nfa, (SIGMA1, SIGMA2))

    def test_parallel_and_run_semantics_agree(self):
        rng = random.Random(11)
        for _ in range(30):
            nfa = random_founded_automaton(rng, max_inputs=2)
            for alpha in enumerate_strings(powerset_symbols(nfa.input_set), 0, 3):
                assert accepts(nfa, alpha) == accepts_by_runs(nfa, alpha)


class TestModel:

    def test_invalid_automaton_rejected(self):
        with pytest.raises(ValidationError):
            Nfa(states={'q0'}, input_set={'a'}, transitions={('q0', symbol('b'), 'q0')},
                start='q0', accepting=set())
        with pytest.raises(ValidationError):
            Nfa(states={'q0'}, input_set={'a'}, transitions=set(), start='q9', accepting=set())

    def test_dict_roundtrip(self):
        nfa = pattern_automaton()
        data = nfa.to_dict()
        assert data['transitions'][0] == {'from': 'q0', 'symbol': ['a', 'b', 'c'], 'to': 'q1'}
        assert Nfa.from_dict(data) == nfa

    def test_from_dict_errors(self):
        with pytest.raises(ParseError):
            Nfa.from_dict({'states': ['q0']})
        data = pattern_automaton().to_dict()
        data['states'].append('q0')
        with pytest.raises(ValidationError):
            Nfa.from_dict(data)

    @pytest.mark.parametrize("field, value", [
        ('inputs', "abcd"),
        ('states', "q0q1q2q3"),
        ('accepting', "q3"),
    ])
    def test_bare_string_sets_rejected(self, field, value):
        data = pattern_automaton().to_dict()
        data[field] = value
        with pytest.raises(ParseError):
            Nfa.from_dict(data)

    def test_bare_string_symbol_rejected(self):
        data = {'states': ['s', 'f'], 'inputs': ['a', 'b'], 'start': 's', 'accepting': ['f'],
                'transitions': [{'from': 's', 'symbol': 'ab', 'to': 'f'}]}
        with pytest.raises(ParseError):
            Nfa.from_dict(data)
        data['transitions'][0]['symbol'] = ['a', 'b']
        assert Nfa.from_dict(data).delta('s', symbol('a', 'b')) == {'f'}

    def test_delta_may_be_empty(self):
        nfa = pattern_automaton()
        assert nfa.delta('q0', SIGMA1) == {'q1'}
        assert nfa.delta('q3', SIGMA1) == frozenset()


class TestFoundedness:

    def test_pattern_founded(self):
        assert is_founded(pattern_automaton())

    def test_empty_first_symbol_not_founded(self):
        nfa = unfounded_automaton()
        assert not is_founded(nfa)
        assert find_unfounded_witness(nfa) == (EMPTY, SIGMA1)

    def test_accepting_start_not_founded(self):
        nfa = Nfa(states={'s'}, input_set={'a'}, transitions={('s', symbol('a'), 's')},
                  start='s', accepting={'s'})
        assert not is_founded(nfa)
        assert find_unfounded_witness(nfa) == ()

    def test_dead_empty_branch_is_founded(self):
        nfa = pattern_automaton()
        nfa = nfa.replace(
            states=nfa.states | {'dead'},
            transitions=nfa.transitions | {('q0', EMPTY, 'dead')},
        )
        assert is_founded(nfa)


class TestCleaning:

    def test_pattern_is_fixed_point(self):
        nfa = pattern_automaton()
        assert is_clean(nfa)
        cleaned, report = clean(nfa)
        assert cleaned == nfa
        assert report.is_trivial()
        assert restrict_founded_start(nfa) is nfa
        assert prune_unreachable(nfa) is nfa

    def test_remove_self_loops(self):
        nfa = pattern_automaton().replace(
            transitions=pattern_automaton().transitions | {('q1', SIGMA2, 'q1')},
        )
        result, report = remove_self_loops(nfa)
        copy = report.duplicated_states['q1']
        assert copy == "q1'"
        assert copy in result.delta('q1', SIGMA2)
        assert 'q1' in result.delta(copy, SIGMA2)
        assert all(src != dst for src, _, dst in result.transitions)
        assert len(result.states) <= 2 * len(nfa.states)
        for alpha in enumerate_strings([SIGMA1, SIGMA2, SIGMA3], 0, 4):
            assert accepts(nfa, alpha) == accepts(result, alpha)

    def test_copy_accepting_iff_original(self):
        result, report = remove_self_loops(selfloop_automaton())
        assert report.duplicated_states == {'t': "t'"}
        assert "t'" in result.accepting

    def test_clean_selfloop_grows_by_one(self):
        nfa = selfloop_automaton()
        cleaned, report = clean(nfa)
        assert is_clean(cleaned)
        assert len(cleaned.states) == len(nfa.states) + 1
        assert report.removed_self_loops == 1
        for alpha in enumerate_strings(powerset_symbols('ab'), 0, 4):
            assert accepts(nfa, alpha) == accepts(cleaned, alpha)

    def test_restrict_founded_start_drops_dead_branch(self):
        nfa = pattern_automaton()
        nfa = nfa.replace(
            states=nfa.states | {'dead'},
            transitions=nfa.transitions | {('q0', EMPTY, 'dead')},
        )
        restricted = restrict_founded_start(nfa)
        assert restricted.states == nfa.states
        assert restricted.delta('q0', EMPTY) == frozenset()
        cleaned, report = clean(nfa)
        assert report.blocked_empty_from_start
        assert report.pruned_states == ['dead']

    def test_prune_keeps_isolated_start(self):
        nfa = Nfa(states={'s', 'u'}, input_set={'a'}, transitions=set(), start='s', accepting={'u'})
        assert prune_unreachable(nfa).states == {'s'}

    def test_clean_rejects_unfounded_with_witness(self):
        with pytest.raises(ValidationError) as info:
            clean(unfounded_automaton())
        assert info.value.witness == (EMPTY, SIGMA1)

    def test_clean_violations(self):
        nfa = selfloop_automaton()
        assert not is_clean(nfa)
        assert len(clean_violations(nfa)) == 1
        unreachable = pattern_automaton().replace(states=pattern_automaton().states | {'u'})
        assert not is_clean(unreachable)

    def test_clean_preserves_language_on_random_automata(self):
        rng = random.Random(2024)
        checked = 0
        while checked < 50:
            nfa = random_founded_automaton(rng, max_inputs=2)
            if all(src != dst for src, _, dst in nfa.transitions):
                continue
            cleaned, report = clean(nfa)
            assert is_clean(cleaned)
            assert len(cleaned.states) <= 2 * len(nfa.states)
            for alpha in enumerate_strings(powerset_symbols(nfa.input_set), 0, 4):
                assert accepts(nfa, alpha) == accepts(cleaned, alpha)
            checked += 1

    def test_report_roundtrip(self):
        _, report = clean(selfloop_automaton())
        assert CleanReport.from_dict(report.to_dict()) == report


class TestConvergence:

    def test_pattern_converges_on_sigma3(self):
        assert terminal_symbols(pattern_automaton()) == [SIGMA3]
        assert is_converging(pattern_automaton()) == SIGMA3

    def test_two_terminal_symbols(self):
        assert is_converging(bias_automaton()) is None

    def test_single_string(self):
        assert is_converging(string_automaton((SIGMA1,), 'abcd')) == SIGMA1

    def test_vacuous(self):
        nfa = Nfa(states={'s', 'f'}, input_set={'a'}, transitions=set(), start='s', accepting={'f'})
        with pytest.raises(VacuousLanguageError):
            is_converging(nfa)
