"""
正权离散时间神经网络
提供网络数据模型（输入/输出/辅助神经元与 [0,1] 内的精确有理权重）及其运行语义：
单步转移、运行、输出，以及结构校验
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from loguru import logger

from automata import InputString, NeuronId, Symbol, check_string, format_set, identifier_list
from errors import InputDomainError, ParseError, ValidationError

Weight = Fraction
Edge = Tuple[NeuronId, NeuronId]

THRESHOLD = Fraction(1)


def _int_field(entry: Mapping[str, Any], key: str) -> int:
    value = entry[key]
    # bool 是 int 的子类，但 JSON 中的 true/false 不是合法的分子分母
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"权重字段 {key} 必须是整数: {value!r}")
    return value


@dataclass(frozen=True)
class PositiveNetwork:
    """正权神经网络 N = (I, O, A, W)，缺失的连接权重为 0"""
    inputs: FrozenSet[NeuronId]
    outputs: FrozenSet[NeuronId]
    auxiliary: FrozenSet[NeuronId] = frozenset()
    weights: Mapping[Edge, Weight] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, 'inputs', frozenset(self.inputs))
        object.__setattr__(self, 'outputs', frozenset(self.outputs))
        object.__setattr__(self, 'auxiliary', frozenset(self.auxiliary))
        object.__setattr__(self, 'weights', {
            edge: Fraction(w) for edge, w in self.weights.items() if Fraction(w) != 0
        })

    @property
    def neurons(self) -> FrozenSet[NeuronId]:
        """可被激活的神经元 O ∪ A"""
        return self.outputs | self.auxiliary

    def weight(self, source: NeuronId, target: NeuronId) -> Weight:
        return self.weights.get((source, target), Fraction(0))

    @cached_property
    def _postsynaptic(self) -> Dict[NeuronId, List[Tuple[NeuronId, Weight]]]:
        table: Dict[NeuronId, List[Tuple[NeuronId, Weight]]] = defaultdict(list)
        for (z, y), w in self.sorted_weights():
            table[z].append((y, w))
        return dict(table)

    def postsynaptic(self, z: NeuronId) -> List[Tuple[NeuronId, Weight]]:
        """神经元 z 的所有出边 (y, W(z,y))"""
        return self._postsynaptic.get(z, [])

    def presynaptic(self, y: NeuronId) -> Dict[NeuronId, Weight]:
        """神经元 y 的所有非零入边权重"""
        return {z: w for (z, target), w in self.sorted_weights() if target == y}

    def sorted_weights(self) -> List[Tuple[Edge, Weight]]:
        return sorted(self.weights.items())

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典（零权重省略，集合排序）"""
        return {
            'inputs': sorted(self.inputs),
            'outputs': sorted(self.outputs),
            'auxiliary': sorted(self.auxiliary),
            'weights': [
                {'from': z, 'to': y, 'num': w.numerator, 'den': w.denominator}
                for (z, y), w in self.sorted_weights()
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PositiveNetwork':
        """
        从字典创建实例

        Raises:
            ParseError: 字段缺失或分母为 0 时
            ValidationError: 网络违反结构不变量时
        """
        try:
            sets = {}
            for key in ('inputs', 'outputs', 'auxiliary'):
                members = identifier_list(data.get(key, []) if key == 'auxiliary' else data[key], key)
                if len(set(members)) != len(members):
                    raise ValidationError(f"{key} 中存在重复标识符", [f"duplicate identifier in {key}"])
                sets[key] = frozenset(members)
            weights: Dict[Edge, Weight] = {}
            for entry in data.get('weights', []):
                edge = (entry['from'], entry['to'])
                if edge in weights:
                    raise ValidationError(f"连接 {edge} 重复出现", [f"duplicate weight on {edge}"])
                num, den = _int_field(entry, 'num'), _int_field(entry, 'den')
                if den == 0:
                    raise ParseError(f"连接 {edge} 的分母为 0")
                weights[edge] = Fraction(num, den)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"网络 JSON 缺少字段或类型错误: {e}") from e

        net = cls(sets['inputs'], sets['outputs'], sets['auxiliary'], weights)
        violations = validate(net)
        if violations:
            raise ValidationError(f"网络结构非法: {violations[0]}", violations)
        return net


@dataclass(frozen=True)
class NetworkRun:
    """网络在输入串上的运行：S₁=∅，长度为 |α|+1"""
    activations: Tuple[FrozenSet[NeuronId], ...]
    input: InputString

    def __len__(self) -> int:
        return len(self.activations)


def validate(net: PositiveNetwork) -> List[str]:
    """
    检查网络结构不变量

    Returns:
        List[str]: 违规描述列表；为空表示网络合法
    """
    violations = []
    for left, right, name in (
        (net.inputs, net.outputs, "inputs/outputs"),
        (net.inputs, net.auxiliary, "inputs/auxiliary"),
        (net.outputs, net.auxiliary, "outputs/auxiliary"),
    ):
        for neuron in sorted(left & right):
            violations.append(f"neuron declared twice ({name}): {neuron}")

    declared = net.inputs | net.outputs | net.auxiliary
    for (z, y), w in net.sorted_weights():
        edge = f"({z},{y})"
        if z not in declared or y not in declared:
            violations.append(f"undeclared neuron on edge {edge}")
        elif z in net.outputs:
            violations.append(f"edge out of output neuron {edge}")
        elif y in net.inputs:
            violations.append(f"edge into input neuron {edge}")
        elif z == y:
            violations.append(f"self-connection {edge}")
        if w < 0:
            violations.append(f"negative weight on {edge}: {w}")
        elif w > 1:
            violations.append(f"weight above 1 on {edge}: {w}")
    return violations


def _check_domain(net: PositiveNetwork, source: Iterable[NeuronId], sigma: Symbol) -> None:
    extra = frozenset(source) - net.neurons
    if extra:
        raise InputDomainError(f"源集合包含非输出/辅助神经元: {format_set(extra)}")
    extra = sigma - net.inputs
    if extra:
        raise InputDomainError(f"符号包含未声明的输入神经元: {format_set(extra)}")


def step(net: PositiveNetwork, source: Iterable[NeuronId], sigma: Symbol) -> FrozenSet[NeuronId]:
    """
    单步转移：返回在 source ∪ σ 上加权和 ≥ 1 的所有 O ∪ A 神经元

    Args:
        net: 网络
        source: 当前激活的输出/辅助神经元
        sigma: 当前输入符号

    Returns:
        FrozenSet[NeuronId]: 下一时刻激活的神经元

    Raises:
        InputDomainError: 神经元超出声明集合时
    """
    source = frozenset(source)
    _check_domain(net, source, sigma)
    totals: Dict[NeuronId, Fraction] = defaultdict(Fraction)
    for z in source | sigma:
        for y, w in net.postsynaptic(z):
            totals[y] += w
    neurons = net.neurons
    return frozenset(y for y, total in totals.items() if total >= THRESHOLD and y in neurons)


def run(net: PositiveNetwork, alpha: Sequence[Symbol]) -> NetworkRun:
    """从 S₁=∅ 开始逐符号迭代 step"""
    check_string(alpha, net.inputs)
    current: FrozenSet[NeuronId] = frozenset()
    activations = [current]
    for sigma in alpha:
        current = step(net, current, sigma)
        activations.append(current)
    return NetworkRun(activations=tuple(activations), input=tuple(alpha))


def output(net: PositiveNetwork, alpha: Sequence[Symbol]) -> FrozenSet[NeuronId]:
    """
    网络在非空输入串上的输出：最后一个激活集合与输出神经元的交集

    Raises:
        InputDomainError: 输入串为空时
    """
    if not alpha:
        raise InputDomainError("行为只定义在非空输入串上")
    return run(net, alpha).activations[-1] & net.outputs


def unite(networks: Iterable[PositiveNetwork]) -> PositiveNetwork:
    """
    不相交合并多个网络，共享输入神经元

    Raises:
        ValidationError: 输出或辅助神经元重名、或与输入神经元冲突时
    """
    inputs: set = set()
    outputs: set = set()
    auxiliary: set = set()
    weights: Dict[Edge, Weight] = {}
    parts = list(networks)
    for net in parts:
        inputs |= net.inputs
    for net in parts:
        clash = (net.outputs | net.auxiliary) & (outputs | auxiliary | inputs)
        if clash:
            raise ValidationError(
                f"合并网络时标识符冲突: {format_set(clash)}",
                [f"identifier clash: {n}" for n in sorted(clash)],
            )
        outputs |= net.outputs
        auxiliary |= net.auxiliary
        weights.update(net.weights)
    logger.debug(f"合并 {len(parts)} 个子网络: {len(outputs)} 个输出, {len(auxiliary)} 个辅助神经元")
    return PositiveNetwork(frozenset(inputs), frozenset(outputs), frozenset(auxiliary), weights)
