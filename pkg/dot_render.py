"""
Graphviz DOT 渲染
自动机：圆形状态，接受状态双圈，起始状态带一条无源箭头；
网络：输入神经元为方框，其余为椭圆，边标注 "num/den" 权重。
所有节点与边按规范顺序输出，相同输入得到相同字节
"""
from typing import Iterator

from automata import Nfa, format_symbol
from network import PositiveNetwork

HEADER = [
    'rankdir = LR;',
    'node [fontname = "Helvetica"];',
    'edge [fontname = "Helvetica"];',
]


def quote(text: str) -> str:
    return '"' + text.replace('\\', '\\\\').replace('"', '\\"') + '"'


def _automaton_lines(nfa: Nfa) -> Iterator[str]:
    yield 'digraph automaton {'
    for line in HEADER:
        yield f'    {line}'
    yield '    __start [shape = point, label = ""];'
    for q in nfa.sorted_states():
        shape = 'doublecircle' if q in nfa.accepting else 'circle'
        yield f'    {quote(q)} [shape = {shape}];'
    yield f'    __start -> {quote(nfa.start)};'
    for src, sigma, dst in nfa.sorted_transitions():
        yield f'    {quote(src)} -> {quote(dst)} [label = {quote(format_symbol(sigma))}];'
    yield '}'


def _network_lines(net: PositiveNetwork) -> Iterator[str]:
    yield 'digraph network {'
    for line in HEADER:
        yield f'    {line}'
    for u in sorted(net.inputs):
        yield f'    {quote(u)} [shape = box];'
    for x in sorted(net.outputs):
        yield f'    {quote(x)} [shape = ellipse, peripheries = 2];'
    for y in sorted(net.auxiliary):
        yield f'    {quote(y)} [shape = ellipse];'
    for (z, y), w in net.sorted_weights():
        label = f'{w.numerator}/{w.denominator}'
        yield f'    {quote(z)} -> {quote(y)} [label = {quote(label)}];'
    yield '}'


def automaton_to_dot(nfa: Nfa) -> str:
    return '\n'.join(_automaton_lines(nfa)) + '\n'


def network_to_dot(net: PositiveNetwork) -> str:
    return '\n'.join(_network_lines(net)) + '\n'
