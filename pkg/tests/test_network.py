import random
from fractions import Fraction

import pytest

from automata import EMPTY, powerset_symbols, symbol
from errors import InputDomainError, ParseError, ValidationError
from network import PositiveNetwork, output, run, step, unite, validate
from tests.fixtures import SIGMA1, SIGMA2, SIGMA3, pattern_network
from tests.generators import random_network, random_string

TRIGGER = "(q1|a,b,c)"
FINAL = "(q3|a,d)"


def test_step_on_empty_activity():
    assert step(pattern_network(), EMPTY, EMPTY) == frozenset()


def test_step_trigger_exactly_at_threshold():
    net = pattern_network()
    assert step(net, EMPTY, SIGMA1) == {TRIGGER}
    assert step(net, EMPTY, symbol('a', 'b')) == frozenset()


def test_step_domain_errors():
    net = pattern_network()
    with pytest.raises(InputDomainError):
        step(net, {'a'}, EMPTY)
    with pytest.raises(InputDomainError):
        step(net, EMPTY, symbol('z'))


def test_run_activations():
    net = pattern_network()
    trace = run(net, (SIGMA1, SIGMA3))
    assert trace.activations == (frozenset(), frozenset({TRIGGER}), frozenset({FINAL}))
    assert len(trace) == 3
    assert run(net, (SIGMA1, SIGMA2, SIGMA2)).activations[-1] == {"(q1|b,c)"}
    assert all(not s for s in run(net, (EMPTY, EMPTY, EMPTY)).activations)


def test_output():
    net = pattern_network()
    assert output(net, (SIGMA1, SIGMA3, EMPTY)) == {'x'}
    assert output(net, (SIGMA1,)) == frozenset()
    assert output(net, (SIGMA2, SIGMA3, EMPTY)) == frozenset()
    with pytest.raises(InputDomainError):
        output(net, ())


class TestValidate:

    def test_compiled_network_is_valid(self):
        assert validate(pattern_network()) == []

    def test_edge_out_of_output(self):
        net = PositiveNetwork({'a'}, {'x'}, {'y'}, {('x', 'y'): Fraction(1, 2)})
        assert any("edge out of output neuron" in v for v in validate(net))

    def test_weight_above_one(self):
        net = PositiveNetwork({'a'}, {'x'}, set(), {('a', 'x'): Fraction(3, 2)})
        assert validate(net) == ["weight above 1 on (a,x): 3/2"]

    def test_other_violations(self):
        net = PositiveNetwork(
            {'a'}, {'x', 'a'}, {'y'},
            {('y', 'y'): Fraction(1), ('y', 'a'): Fraction(1), ('q', 'x'): Fraction(1),
             ('a', 'y'): Fraction(-1, 2)},
        )
        violations = validate(net)
        assert any("declared twice" in v for v in violations)
        assert any("self-connection" in v for v in violations)
        assert any("edge into input neuron" in v for v in violations)
        assert any("undeclared neuron" in v for v in violations)
        assert any("negative weight" in v for v in violations)

    def test_zero_weights_dropped(self):
        net = PositiveNetwork({'a'}, {'x'}, set(), {('a', 'x'): 0})
        assert net.weights == {}
        assert net.to_dict()['weights'] == []


class TestSerialization:

    def test_roundtrip(self):
        net = pattern_network()
        assert PositiveNetwork.from_dict(net.to_dict()) == net
        assert PositiveNetwork.from_dict(net.to_dict()).weights == net.weights

    def test_weight_entry_format(self):
        data = PositiveNetwork({'a'}, {'x'}, set(), {('a', 'x'): Fraction(2, 4)}).to_dict()
        assert data['weights'] == [{'from': 'a', 'to': 'x', 'num': 1, 'den': 2}]

    def test_errors(self):
        with pytest.raises(ParseError):
            PositiveNetwork.from_dict({'inputs': ['a']})
        with pytest.raises(ParseError):
            PositiveNetwork.from_dict({
                'inputs': ['a'], 'outputs': ['x'],
                'weights': [{'from': 'a', 'to': 'x', 'num': 1, 'den': 0}],
            })
        with pytest.raises(ValidationError):
            PositiveNetwork.from_dict({
                'inputs': ['a'], 'outputs': ['x'],
                'weights': [{'from': 'x', 'to': 'a', 'num': 1, 'den': 1}],
            })
        with pytest.raises(ValidationError):
            PositiveNetwork.from_dict({'inputs': ['a', 'a'], 'outputs': ['x']})

    @pytest.mark.parametrize("num, den", [("one", 1), (1, "2"), (0.5, 1), (True, 1), (1, None)])
    def test_non_integer_weight_fields(self, num, den):
        with pytest.raises(ParseError):
            PositiveNetwork.from_dict({
                'inputs': ['a'], 'outputs': ['x'],
                'weights': [{'from': 'a', 'to': 'x', 'num': num, 'den': den}],
            })

    def test_bare_string_neuron_sets(self):
        with pytest.raises(ParseError):
            PositiveNetwork.from_dict({'inputs': "ab", 'outputs': ['x']})
        with pytest.raises(ParseError):
            PositiveNetwork.from_dict({'inputs': ['a'], 'outputs': ['x'], 'auxiliary': "yz"})


def test_adjacency_views():
    net = pattern_network()
    assert net.presynaptic('x') == {FINAL: Fraction(1)}
    assert net.presynaptic("(q2|b,c)") == {
        "(q1|a,b,c)": Fraction(1, 5), "(q1|b,c)": Fraction(1, 5),
        'b': Fraction(2, 5), 'c': Fraction(2, 5),
    }
    assert ('x', Fraction(1)) in net.postsynaptic(FINAL)


def test_unite_shares_inputs():
    left = PositiveNetwork({'a'}, {'x'}, set(), {('a', 'x'): 1})
    right = PositiveNetwork({'b'}, {'z'}, set(), {('b', 'z'): 1})
    merged = unite([left, right])
    assert merged.inputs == {'a', 'b'}
    assert merged.outputs == {'x', 'z'}
    with pytest.raises(ValidationError):
        unite([left, PositiveNetwork({'a'}, {'x'}, set(), {})])


class TestMonotonicity:

    def test_step_monotone(self):
        rng = random.Random(5)
        for _ in range(100):
            net = random_network(rng)
            neurons = sorted(net.neurons)
            pool = powerset_symbols(net.inputs)
            small = frozenset(n for n in neurons if rng.random() < 0.3)
            large = small | frozenset(n for n in neurons if rng.random() < 0.5)
            sigma = rng.choice(pool)
            bigger = sigma | rng.choice(pool)
            assert step(net, small, sigma) <= step(net, large, bigger)

    def test_run_monotone_and_suffix_dominance(self):
        rng = random.Random(6)
        for _ in range(100):
            net = random_network(rng)
            pool = powerset_symbols(net.inputs)
            alpha = random_string(rng, pool, rng.randint(1, 4))
            dominating = tuple(s | rng.choice(pool) for s in alpha)
            for low, high in zip(run(net, alpha).activations, run(net, dominating).activations):
                assert low <= high
            prefix = random_string(rng, pool, rng.randint(1, 3))
            assert output(net, alpha) <= output(net, prefix + alpha)

    def test_run_is_deterministic(self):
        net = pattern_network()
        alpha = (SIGMA1, SIGMA2, SIGMA3)
        assert run(net, alpha) == run(net, alpha)
