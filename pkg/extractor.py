"""
从正权网络提取自动机
对网络的激活集合做惰性子集构造，为每个输出神经元得到一个确定性自动机，
其语言是奠基的，并且通过嵌入语义恰好刻画该神经元的激活
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from loguru import logger

from automata import (
    EMPTY, NeuronId, Nfa, State, Symbol, Transition, check_string, format_set,
    powerset_symbols, sort_symbols,
)
from config import get_config_with_default
from errors import InputDomainError, SizeError
from network import PositiveNetwork, step
from verifier import BehaviorOracle

START_STATE = "q_start"
HALT_STATE = "q_halt"


def subset_state_name(active: Iterable[NeuronId]) -> State:
    """子集状态的名称，例如 "{(q1|a,b,c),x}"，空集为 "{}" """
    return format_set(active)


@dataclass(frozen=True)
class _SubsetGraph:
    """从 q_start 可达的激活子集及其转移，供各输出神经元共享"""
    subsets: Tuple[FrozenSet[NeuronId], ...]
    transitions: FrozenSet[Transition]
    input_set: FrozenSet[NeuronId]


def _resolve_budget(state_budget: Optional[int]) -> int:
    if state_budget is None:
        state_budget = int(get_config_with_default("extractor.state_budget", 4096))
    if state_budget < 2:
        raise InputDomainError(f"状态预算至少为 2: {state_budget}")
    return state_budget


def _explore(net: PositiveNetwork, pool: List[Symbol], state_budget: int) -> _SubsetGraph:
    """
    惰性子集构造：只物化从 q_start 可达的激活子集

    Raises:
        SizeError: 物化的状态数超出预算时，报告完整幂集构造所需的 2^|O∪A|+2
    """
    required = 2 ** len(net.neurons) + 2
    names: Dict[FrozenSet[NeuronId], State] = {}
    order: List[FrozenSet[NeuronId]] = []
    transitions = set()
    queue: deque = deque()

    def materialize(active: FrozenSet[NeuronId]) -> State:
        if active not in names:
            if len(names) + 2 >= state_budget:
                raise SizeError(
                    f"提取的自动机状态数超出预算 {state_budget} (完整构造需要 {required} 个)",
                    required=required, budget=state_budget,
                )
            names[active] = subset_state_name(active)
            order.append(active)
            queue.append(active)
        return names[active]

    for sigma in pool:
        transitions.add((HALT_STATE, sigma, HALT_STATE))
        if sigma == EMPTY:
            transitions.add((START_STATE, sigma, HALT_STATE))
        else:
            transitions.add((START_STATE, sigma, materialize(step(net, EMPTY, sigma))))

    while queue:
        active = queue.popleft()
        for sigma in pool:
            transitions.add((names[active], sigma, materialize(step(net, active, sigma))))

    return _SubsetGraph(subsets=tuple(order), transitions=frozenset(transitions), input_set=net.inputs)


def _automaton_for(graph: _SubsetGraph, x: NeuronId) -> Nfa:
    states = {START_STATE, HALT_STATE} | {subset_state_name(s) for s in graph.subsets}
    return Nfa(
        states=frozenset(states),
        input_set=graph.input_set,
        transitions=graph.transitions,
        start=START_STATE,
        accepting=frozenset(subset_state_name(s) for s in graph.subsets if x in s),
    )


def _resolve_pool(net: PositiveNetwork, symbols: Optional[Iterable[Symbol]]) -> List[Symbol]:
    if symbols is None:
        return powerset_symbols(net.inputs)
    pool = sort_symbols(set(frozenset(s) for s in symbols))
    check_string(pool, net.inputs)
    return pool


def extract_automaton(
        net: PositiveNetwork,
        x: NeuronId,
        state_budget: Optional[int] = None,
        symbols: Optional[Iterable[Symbol]] = None,
) -> Nfa:
    """
    为输出神经元 x 构造确定性自动机

    状态为 q_start、q_halt 和可达的激活子集；转移：
    q_start 读 ∅ 到 q_halt，读 σ≠∅ 到 step(∅,σ)；q_halt 吸收所有符号；
    子集状态 S 读 σ 到 step(S,σ)。接受状态为包含 x 的子集。

    Args:
        net: 正权网络
        x: 输出神经元
        state_budget: 状态数上限，默认读取 extractor.state_budget
        symbols: 符号池，默认为输入集合的幂集

    Returns:
        Nfa: 语言奠基的确定性自动机

    Raises:
        InputDomainError: x 不是输出神经元时
        SizeError: 状态数超出预算时
    """
    if x not in net.outputs:
        raise InputDomainError(f"{x} 不是网络的输出神经元")
    graph = _explore(net, _resolve_pool(net, symbols), _resolve_budget(state_budget))
    nfa = _automaton_for(graph, x)
    logger.info(
        f"提取自动机: 输出 {x}, 状态 {len(nfa.states)} 个, "
        f"转移 {len(nfa.transitions)} 条, 接受状态 {len(nfa.accepting)} 个"
    )
    return nfa


def induced_behavior(
        nfas: Mapping[NeuronId, Nfa],
        inputs: Optional[Iterable[NeuronId]] = None,
) -> BehaviorOracle:
    """
    把自动机包装成单调正则行为预言机

    Raises:
        ValidationError: 某个自动机的语言不是奠基的时
    """
    if inputs is None:
        input_set = frozenset().union(*(nfa.input_set for nfa in nfas.values()))
    else:
        input_set = frozenset(inputs)
    return BehaviorOracle(languages=dict(nfas), input_set=input_set)


def defined_behavior(
        net: PositiveNetwork,
        state_budget: Optional[int] = None,
        symbols: Optional[Iterable[Symbol]] = None,
) -> BehaviorOracle:
    """网络自身定义的行为：每个输出神经元提取一个自动机，子集构造只做一次"""
    graph = _explore(net, _resolve_pool(net, symbols), _resolve_budget(state_budget))
    languages = {x: _automaton_for(graph, x) for x in sorted(net.outputs)}
    logger.info(f"提取网络行为: {len(languages)} 个输出, {len(graph.subsets) + 2} 个状态")
    return induced_behavior(languages, net.inputs)
