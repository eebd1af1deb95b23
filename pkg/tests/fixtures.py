"""
测试共用的自动机、网络与行为
"""
from fractions import Fraction

from automata import Nfa, symbol
from compiler import compile_delay1
from network import PositiveNetwork
from verifier import BehaviorOracle

SIGMA1 = symbol('a', 'b', 'c')
SIGMA2 = symbol('b', 'c')
SIGMA3 = symbol('a', 'd')
ABCD = frozenset('abcd')


def pattern_automaton() -> Nfa:
    """接受 ⟨σ₁,σ₂*,σ₃⟩ 的干净自动机"""
    return Nfa(
        states=frozenset({'q0', 'q1', 'q2', 'q3'}),
        input_set=ABCD,
        transitions=frozenset({
            ('q0', SIGMA1, 'q1'),
            ('q1', SIGMA2, 'q2'),
            ('q2', SIGMA2, 'q1'),
            ('q1', SIGMA3, 'q3'),
            ('q2', SIGMA3, 'q3'),
        }),
        start='q0',
        accepting=frozenset({'q3'}),
    )


def pattern_oracle() -> BehaviorOracle:
    return BehaviorOracle(languages={'x': pattern_automaton()}, input_set=ABCD)


def pattern_network() -> PositiveNetwork:
    """pattern_automaton 的延迟 1 编译结果"""
    return compile_delay1({'x': pattern_automaton()}, ABCD).network


def selfloop_automaton() -> Nfa:
    """两状态奠基自动机，接受状态上带自环：⟨{a},{b}*⟩"""
    return Nfa(
        states=frozenset({'s', 't'}),
        input_set=frozenset('ab'),
        transitions=frozenset({('s', symbol('a'), 't'), ('t', symbol('b'), 't')}),
        start='s',
        accepting=frozenset({'t'}),
    )


def unfounded_automaton() -> Nfa:
    """接受 ⟨∅,σ₁⟩"""
    return Nfa(
        states=frozenset({'s', 'p', 'f'}),
        input_set=ABCD,
        transitions=frozenset({('s', frozenset(), 'p'), ('p', SIGMA1, 'f')}),
        start='s',
        accepting=frozenset({'f'}),
    )


def two_symbol_automaton(first, second, inputs) -> Nfa:
    """接受两个单符号串 ⟨first⟩ 与 ⟨second⟩"""
    return Nfa(
        states=frozenset({'s', 'f'}),
        input_set=frozenset(inputs),
        transitions=frozenset({('s', first, 'f'), ('s', second, 'f')}),
        start='s',
        accepting=frozenset({'f'}),
    )


def bias_automaton() -> Nfa:
    """L_x = {⟨{a,b}⟩, ⟨{b,c}⟩}，不收敛"""
    return two_symbol_automaton(symbol('a', 'b'), symbol('b', 'c'), 'abc')


def bias_oracle() -> BehaviorOracle:
    return BehaviorOracle(languages={'x': bias_automaton()}, input_set=frozenset('abc'))


def bias_network() -> PositiveNetwork:
    """对 b 赋予更大权重的无辅助神经元零延迟网络"""
    return PositiveNetwork(
        inputs=frozenset('abc'),
        outputs=frozenset({'x'}),
        weights={('a', 'x'): Fraction(1, 3), ('b', 'x'): Fraction(2, 3), ('c', 'x'): Fraction(1, 3)},
    )


def wrong_symbol_automaton() -> Nfa:
    """L_x = {⟨{a,b}⟩, ⟨{c,d}⟩}：两个不相交、大小至少为 2 的单符号串"""
    return two_symbol_automaton(symbol('a', 'b'), symbol('c', 'd'), ABCD)


def wrong_symbol_oracle() -> BehaviorOracle:
    return BehaviorOracle(languages={'x': wrong_symbol_automaton()}, input_set=ABCD)


def crossed_pairs_automaton() -> Nfa:
    """L_x = {⟨{a},{b}⟩, ⟨{c},{d}⟩}"""
    return Nfa(
        states=frozenset({'s', 'p', 'r', 'f'}),
        input_set=ABCD,
        transitions=frozenset({
            ('s', symbol('a'), 'p'),
            ('p', symbol('b'), 'f'),
            ('s', symbol('c'), 'r'),
            ('r', symbol('d'), 'f'),
        }),
        start='s',
        accepting=frozenset({'f'}),
    )


def crossed_pairs_oracle() -> BehaviorOracle:
    return BehaviorOracle(languages={'x': crossed_pairs_automaton()}, input_set=ABCD)


def pattern_bundle_dict() -> dict:
    return {'inputs': sorted(ABCD), 'outputs': [{'neuron': 'x', 'automaton': pattern_automaton().to_dict()}]}
