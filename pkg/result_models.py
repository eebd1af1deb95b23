"""
结果与报告模型定义
用于封装编译结果、一致性验证结果、行为描述包等数据结构
"""
from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, FrozenSet, List, Optional

from automata import (
    InputString, Nfa, format_set, identifier_list, symbol_from_list, symbol_to_list,
)
from errors import ParseError
from network import PositiveNetwork


def _symbol_array(value: Any) -> List[Any]:
    """输入串的 JSON 形式是符号数组的数组"""
    if not isinstance(value, list):
        raise ParseError(f"输入串必须是符号数组: {value!r}")
    return value


@dataclass
class CompilationResult:
    """编译结果：网络、延迟、辅助神经元数量和构造方式"""
    network: PositiveNetwork
    delay: int
    aux_count: int
    construction: str

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典，网络字段与元数据平铺在同一层"""
        result = self.network.to_dict()
        result.update({
            'delay': self.delay,
            'aux_count': self.aux_count,
            'construction': self.construction,
        })
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CompilationResult':
        """从字典创建实例"""
        try:
            return cls(
                network=PositiveNetwork.from_dict(data),
                delay=int(data['delay']),
                aux_count=int(data['aux_count']),
                construction=str(data['construction']),
            )
        except KeyError as e:
            raise ParseError(f"编译结果缺少字段: {e}") from e


@dataclass
class Counterexample:
    """反例：输入串、期望输出、实际输出"""
    input: InputString
    expected: FrozenSet[str]
    actual: FrozenSet[str]

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            'input': [symbol_to_list(s) for s in self.input],
            'expected': sorted(self.expected),
            'actual': sorted(self.actual),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Counterexample':
        """从字典创建实例"""
        return cls(
            input=tuple(symbol_from_list(s) for s in _symbol_array(data['input'])),
            expected=frozenset(identifier_list(data['expected'], 'expected')),
            actual=frozenset(identifier_list(data['actual'], 'actual')),
        )

    def __str__(self) -> str:
        rendered = ";".join("[" + ",".join(symbol_to_list(s)) + "]" for s in self.input)
        return f"{rendered} 期望 {format_set(self.expected)} 实际 {format_set(self.actual)}"


@dataclass
class ConformanceResult:
    """一致性验证结果"""
    verdict: str
    strings_checked: int
    delay: int
    max_len: int
    counterexample: Optional[Counterexample] = None
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.verdict == 'pass'

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        result: Dict[str, Any] = {
            'verdict': self.verdict,
            'strings_checked': self.strings_checked,
            'counterexample': self.counterexample.to_dict() if self.counterexample else None,
            'delay': self.delay,
            'max_len': self.max_len,
        }
        if self.seed is not None:
            result['seed'] = self.seed
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ConformanceResult':
        """从字典创建实例"""
        counterexample = data.get('counterexample')
        return cls(
            verdict=data['verdict'],
            strings_checked=data['strings_checked'],
            delay=data['delay'],
            max_len=data['max_len'],
            counterexample=Counterexample.from_dict(counterexample) if counterexample else None,
            seed=data.get('seed'),
        )


@dataclass
class BehaviorBundle:
    """行为包：输入神经元集合，以及每个输出神经元对应的自动机或单个字符串"""
    inputs: FrozenSet[str]
    automata: Dict[str, Nfa] = field(default_factory=dict)
    strings: Dict[str, InputString] = field(default_factory=dict)

    @property
    def outputs(self) -> List[str]:
        return sorted(set(self.automata) | set(self.strings))

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        outputs = []
        for neuron in self.outputs:
            entry: Dict[str, Any] = {'neuron': neuron}
            if neuron in self.automata:
                entry['automaton'] = self.automata[neuron].to_dict()
            else:
                entry['string'] = [symbol_to_list(s) for s in self.strings[neuron]]
            outputs.append(entry)
        return {'inputs': sorted(self.inputs), 'outputs': outputs}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BehaviorBundle':
        """从字典创建实例"""
        try:
            inputs = frozenset(identifier_list(data['inputs'], 'inputs'))
            automata: Dict[str, Nfa] = {}
            strings: Dict[str, InputString] = {}
            for entry in data['outputs']:
                neuron = entry['neuron']
                if neuron in automata or neuron in strings:
                    raise ParseError(f"输出神经元重复: {neuron}")
                if 'automaton' in entry:
                    automata[neuron] = Nfa.from_dict(entry['automaton'])
                elif 'string' in entry:
                    strings[neuron] = tuple(symbol_from_list(s) for s in _symbol_array(entry['string']))
                else:
                    raise ParseError(f"输出神经元 {neuron} 既没有 automaton 也没有 string")
        except (KeyError, TypeError) as e:
            raise ParseError(f"行为包格式错误: {e}") from e
        return cls(inputs=inputs, automata=automata, strings=strings)


@dataclass
class RefutationSummary:
    """零延迟候选网络的反驳汇总"""
    candidates: int
    refuted: int
    max_counterexample_length: int
    survivors: List[Dict[str, str]] = field(default_factory=list)

    @property
    def all_refuted(self) -> bool:
        return self.candidates == self.refuted

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return asdict(self)
