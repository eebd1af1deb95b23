"""
幂集字母表上的有限自动机
提供自动机的表示与语义（并行运行、接受判定）、字符串与嵌入工具，
以及把自动机规范化为"干净"自动机的清理流程（去自环、屏蔽起始空符号转移、剪枝）
"""
from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field, asdict, replace
from functools import cached_property
from typing import (
    Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple,
)

from loguru import logger

from config import get_config_with_default
from errors import InputDomainError, ParseError, ValidationError, VacuousLanguageError

NeuronId = str
State = str
Symbol = FrozenSet[NeuronId]
InputString = Tuple[Symbol, ...]
Transition = Tuple[State, Symbol, State]

EMPTY: Symbol = frozenset()


# ---------------------------------------------------------------------------
# 符号与字符串工具
# ---------------------------------------------------------------------------

def symbol(*members: NeuronId) -> Symbol:
    """由神经元标识符构造一个符号"""
    return frozenset(members)


def symbol_key(sigma: Symbol) -> Tuple[int, Tuple[str, ...]]:
    """符号的规范排序键：先按大小，再按排序后的成员"""
    return len(sigma), tuple(sorted(sigma))


def sort_symbols(symbols: Iterable[Symbol]) -> List[Symbol]:
    return sorted(symbols, key=symbol_key)


def string_key(alpha: Sequence[Symbol]) -> Tuple[int, Tuple]:
    """字符串的规范排序键（shortlex）"""
    return len(alpha), tuple(symbol_key(s) for s in alpha)


def symbol_to_list(sigma: Symbol) -> List[str]:
    return sorted(sigma)


def identifier_list(value: Any, what: str) -> List[str]:
    """JSON 中的标识符数组，裸字符串或非字符串成员都属于格式错误"""
    if not isinstance(value, (list, tuple)) or not all(isinstance(m, str) for m in value):
        raise ParseError(f"{what} 必须是字符串数组: {value!r}")
    return list(value)


def symbol_from_list(members: Sequence[str]) -> Symbol:
    members = identifier_list(members, "符号")
    if len(set(members)) != len(members):
        raise ParseError(f"符号中存在重复成员: {members}")
    return frozenset(members)


def format_set(items: Iterable[str]) -> str:
    """把神经元集合或状态集合渲染成 {a,b} 形式"""
    return "{" + ",".join(sorted(items)) + "}"


def format_symbol(sigma: Symbol) -> str:
    return "[" + ",".join(sorted(sigma)) + "]"


def format_input_string(alpha: Sequence[Symbol]) -> str:
    return ";".join(format_symbol(s) for s in alpha)


def parse_input_string(literal: str) -> InputString:
    """
    解析命令行字符串字面量

    Args:
        literal: 形如 "[a,b,c];[b,c];[]" 的字符串，分号分隔符号，逗号分隔成员，"[]" 表示空符号

    Returns:
        InputString: 符号序列

    Raises:
        ParseError: 字面量格式错误时
    """
    text = literal.strip()
    if not text:
        return ()
    symbols = []
    for position, chunk in enumerate(text.split(';'), start=1):
        chunk = chunk.strip()
        if not (chunk.startswith('[') and chunk.endswith(']')):
            raise ParseError(f"第 {position} 个符号必须用方括号包围: {chunk!r}")
        body = chunk[1:-1].strip()
        members = [m.strip() for m in body.split(',')] if body else []
        if any(not m or any(c.isspace() for c in m) for m in members):
            raise ParseError(f"第 {position} 个符号包含非法成员: {chunk!r}")
        symbols.append(symbol_from_list(members))
    return tuple(symbols)


def prefix(alpha: Sequence[Symbol], i: int) -> InputString:
    """前 i 个符号"""
    return tuple(alpha[:i])


def check_string(alpha: Sequence[Symbol], inputs: FrozenSet[NeuronId]) -> None:
    """检查字符串中的每个符号都是输入集合的子集"""
    for position, sigma in enumerate(alpha, start=1):
        extra = sigma - inputs
        if extra:
            raise InputDomainError(
                f"第 {position} 个符号包含未声明的输入神经元: {format_set(extra)}"
            )


def powerset_symbols(inputs: Iterable[NeuronId]) -> List[Symbol]:
    """输入集合的全部子集，按规范顺序排列"""
    members = sorted(set(inputs))
    subsets = (
        frozenset(combo)
        for size in range(len(members) + 1)
        for combo in itertools.combinations(members, size)
    )
    return sort_symbols(subsets)


def enumerate_strings(pool: Iterable[Symbol], min_len: int, max_len: int) -> Iterator[InputString]:
    """按 shortlex 顺序枚举符号池上长度在 [min_len, max_len] 内的所有字符串"""
    ordered = sort_symbols(set(pool))
    for length in range(min_len, max_len + 1):
        yield from itertools.product(ordered, repeat=length)


def embeds(alpha: Sequence[Symbol], beta: Sequence[Symbol]) -> bool:
    """
    α 是否嵌入 β：α 存在长度为 |β| 的后缀 γ，使得 β_i ⊆ γ_i 对所有 i 成立

    注意 β 出现在 α 的末尾。
    """
    if len(beta) > len(alpha):
        return False
    suffix = alpha[len(alpha) - len(beta):]
    return all(b <= g for b, g in zip(beta, suffix))


# ---------------------------------------------------------------------------
# 自动机
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Nfa:
    """幂集字母表上的非确定有限自动机，转移以显式三元组存储"""
    states: FrozenSet[State]
    input_set: FrozenSet[NeuronId]
    transitions: FrozenSet[Transition]
    start: State
    accepting: FrozenSet[State]

    def __post_init__(self):
        object.__setattr__(self, 'states', frozenset(self.states))
        object.__setattr__(self, 'input_set', frozenset(self.input_set))
        object.__setattr__(self, 'accepting', frozenset(self.accepting))
        object.__setattr__(self, 'transitions', frozenset(
            (src, frozenset(sigma), dst) for src, sigma, dst in self.transitions
        ))
        violations = self._violations()
        if violations:
            raise ValidationError(f"自动机结构非法: {violations[0]}", violations)

    def _violations(self) -> List[str]:
        violations = []
        if self.start not in self.states:
            violations.append(f"起始状态 {self.start} 不在状态集合中")
        for q in sorted(self.accepting - self.states):
            violations.append(f"接受状态 {q} 不在状态集合中")
        for src, sigma, dst in self.sorted_transitions():
            if src not in self.states or dst not in self.states:
                violations.append(f"转移 ({src},{format_symbol(sigma)},{dst}) 的端点不在状态集合中")
            if not sigma <= self.input_set:
                violations.append(
                    f"转移 ({src},{format_symbol(sigma)},{dst}) 的符号超出输入集合"
                )
        return violations

    @cached_property
    def _outgoing(self) -> Dict[State, List[Tuple[Symbol, State]]]:
        table: Dict[State, List[Tuple[Symbol, State]]] = defaultdict(list)
        for src, sigma, dst in self.sorted_transitions():
            table[src].append((sigma, dst))
        return dict(table)

    def outgoing(self, q: State) -> List[Tuple[Symbol, State]]:
        """状态 q 的所有出边 (σ, q')，规范顺序"""
        return self._outgoing.get(q, [])

    def delta(self, q: State, sigma: Symbol) -> FrozenSet[State]:
        """转移函数 δ(q,σ)，可能为空集"""
        return frozenset(dst for s, dst in self.outgoing(q) if s == sigma)

    def successors(self, q: State) -> FrozenSet[State]:
        return frozenset(dst for _, dst in self.outgoing(q))

    def symbols_used(self) -> Set[Symbol]:
        return {sigma for _, sigma, _ in self.transitions}

    def sorted_states(self) -> List[State]:
        return sorted(self.states)

    def sorted_transitions(self) -> List[Transition]:
        return sorted(self.transitions, key=lambda t: (t[0], symbol_key(t[1]), t[2]))

    def replace(self, **changes) -> 'Nfa':
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典（集合均排序，保证序列化字节稳定）"""
        return {
            'states': self.sorted_states(),
            'inputs': sorted(self.input_set),
            'start': self.start,
            'accepting': sorted(self.accepting),
            'transitions': [
                {'from': src, 'symbol': symbol_to_list(sigma), 'to': dst}
                for src, sigma, dst in self.sorted_transitions()
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Nfa':
        """从字典创建实例"""
        try:
            states = identifier_list(data['states'], 'states')
            if len(set(states)) != len(states):
                raise ValidationError("状态集合中存在重复标识符", ["duplicate state"])
            return cls(
                states=frozenset(states),
                input_set=symbol_from_list(data['inputs']),
                transitions=frozenset(
                    (t['from'], symbol_from_list(t['symbol']), t['to'])
                    for t in data['transitions']
                ),
                start=data['start'],
                accepting=frozenset(identifier_list(data['accepting'], 'accepting')),
            )
        except (KeyError, TypeError) as e:
            raise ParseError(f"自动机 JSON 缺少字段或类型错误: {e}") from e


@dataclass
class CleanReport:
    """清理报告：记录去自环、屏蔽起始空符号转移、剪枝的效果"""
    removed_self_loops: int = 0
    duplicated_states: Dict[str, str] = field(default_factory=dict)
    pruned_states: List[str] = field(default_factory=list)
    blocked_empty_from_start: bool = False
    states_before: int = 0
    states_after: int = 0

    def is_trivial(self) -> bool:
        """清理是否没有改变自动机"""
        return (self.removed_self_loops == 0 and not self.duplicated_states
                and not self.pruned_states and not self.blocked_empty_from_start)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        result = asdict(self)
        result['duplicated_states'] = dict(sorted(self.duplicated_states.items()))
        result['pruned_states'] = sorted(self.pruned_states)
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CleanReport':
        """从字典创建实例"""
        return cls(**data)


# ---------------------------------------------------------------------------
# 语义
# ---------------------------------------------------------------------------

def run_parallel(nfa: Nfa, alpha: Sequence[Symbol]) -> List[FrozenSet[State]]:
    """
    并行语义下的运行：P₁={start}，P_i 为 P_{i-1} 在 δ(·,α_{i-1}) 下的像

    Args:
        nfa: 自动机
        alpha: 输入串，符号须为 nfa.input_set 的子集

    Returns:
        List[FrozenSet[State]]: 长度为 |α|+1 的状态集合序列

    Raises:
        InputDomainError: 符号超出输入集合时
    """
    check_string(alpha, nfa.input_set)
    current = frozenset({nfa.start})
    trace = [current]
    for sigma in alpha:
        current = frozenset(q2 for q in current for q2 in nfa.delta(q, sigma))
        trace.append(current)
    return trace


def accepts(nfa: Nfa, alpha: Sequence[Symbol]) -> bool:
    """并行运行的最后一个状态集合是否与接受状态相交"""
    return bool(run_parallel(nfa, alpha)[-1] & nfa.accepting)


def accepts_by_runs(nfa: Nfa, alpha: Sequence[Symbol]) -> bool:
    """逐条枚举运行的存在性判定，用作 accepts 的独立对照"""
    check_string(alpha, nfa.input_set)

    def explore(q: State, i: int) -> bool:
        if i == len(alpha):
            return q in nfa.accepting
        return any(explore(q2, i + 1) for q2 in sorted(nfa.delta(q, alpha[i])))

    return explore(nfa.start, 0)


def reachable_states(nfa: Nfa) -> Set[State]:
    """出现在某个（不一定接受的）运行中的状态"""
    seen = {nfa.start}
    queue = deque([nfa.start])
    while queue:
        q = queue.popleft()
        for q2 in nfa.successors(q):
            if q2 not in seen:
                seen.add(q2)
                queue.append(q2)
    return seen


def coreachable_states(nfa: Nfa) -> Set[State]:
    """能够到达某个接受状态的状态（包括接受状态本身）"""
    incoming: Dict[State, Set[State]] = defaultdict(set)
    for src, _, dst in nfa.transitions:
        incoming[dst].add(src)
    seen = set(nfa.accepting)
    queue = deque(nfa.accepting)
    while queue:
        q = queue.popleft()
        for q0 in incoming[q]:
            if q0 not in seen:
                seen.add(q0)
                queue.append(q0)
    return seen


# ---------------------------------------------------------------------------
# 奠基性与清理
# ---------------------------------------------------------------------------

def is_founded(nfa: Nfa) -> bool:
    """
    语言是否奠基：不含空串，且所有串都以非空符号开头

    图判据：起始状态非接受，且 δ(start,∅) 中的状态都无法到达接受状态。
    """
    if nfa.start in nfa.accepting:
        return False
    alive = coreachable_states(nfa)
    return not (nfa.delta(nfa.start, EMPTY) & alive)


def find_unfounded_witness(nfa: Nfa, max_len: Optional[int] = None) -> Optional[InputString]:
    """
    在有限长度内搜索一个违反奠基性的被接受字符串（空串或以 ∅ 开头）

    Args:
        nfa: 自动机
        max_len: 搜索长度上限，默认 |states| + automata.witness_extra_length

    Returns:
        Optional[InputString]: 找到的最短反例，找不到时为 None
    """
    if nfa.start in nfa.accepting:
        return ()
    if max_len is None:
        max_len = len(nfa.states) + int(get_config_with_default("automata.witness_extra_length", 1))

    # 从 δ(start,∅) 出发的广度优先搜索给出最短的被接受串
    frontier = deque((q, (EMPTY,)) for q in sorted(nfa.delta(nfa.start, EMPTY)))
    seen = {q for q, _ in frontier}
    while frontier:
        q, path = frontier.popleft()
        if q in nfa.accepting:
            return path
        if len(path) >= max_len:
            continue
        for sigma, q2 in nfa.outgoing(q):
            if q2 not in seen:
                seen.add(q2)
                frontier.append((q2, path + (sigma,)))
    return None


def _fresh_name(base: State, used: Set[State]) -> State:
    name = f"{base}'"
    while name in used:
        name += "'"
    used.add(name)
    return name


def remove_self_loops(nfa: Nfa) -> Tuple[Nfa, CleanReport]:
    """
    去除自环：为每个带自环的状态 q 复制一个新状态 f(q)

    f(q) 继承 q 的全部出边；每条自环 (q,σ,q) 改为 (q,σ,f(q))；
    f(q) 是接受状态当且仅当 q 是。状态数至多翻倍，语言不变。

    Returns:
        Tuple[Nfa, CleanReport]: 新自动机与报告
    """
    self_loops = [t for t in nfa.sorted_transitions() if t[0] == t[2]]
    report = CleanReport(states_before=len(nfa.states), states_after=len(nfa.states))
    if not self_loops:
        return nfa, report

    used = set(nfa.states)
    copies = {q: _fresh_name(q, used) for q in sorted({t[0] for t in self_loops})}

    transitions = set()
    for src, sigma, dst in nfa.transitions:
        transitions.add((src, sigma, copies[src] if src == dst else dst))
        if src in copies:
            transitions.add((copies[src], sigma, dst))

    result = nfa.replace(
        states=nfa.states | frozenset(copies.values()),
        transitions=frozenset(transitions),
        accepting=nfa.accepting | frozenset(copies[q] for q in copies if q in nfa.accepting),
    )
    report.removed_self_loops = len(self_loops)
    report.duplicated_states = copies
    report.states_after = len(result.states)
    logger.debug(f"去除 {len(self_loops)} 条自环，复制状态 {sorted(copies)}")
    return result, report


def restrict_founded_start(nfa: Nfa) -> Nfa:
    """删除所有 (start,∅,·) 转移；仅当语言奠基时保持语言不变（由调用方保证）"""
    kept = frozenset(t for t in nfa.transitions if not (t[0] == nfa.start and t[1] == EMPTY))
    if kept == nfa.transitions:
        return nfa
    return nfa.replace(transitions=kept)


def prune_unreachable(nfa: Nfa) -> Nfa:
    """只保留可达状态；起始状态总是保留"""
    reachable = reachable_states(nfa)
    if reachable == nfa.states:
        return nfa
    return nfa.replace(
        states=frozenset(reachable),
        transitions=frozenset(t for t in nfa.transitions if t[0] in reachable),
        accepting=nfa.accepting & reachable,
    )


def clean(nfa: Nfa) -> Tuple[Nfa, CleanReport]:
    """
    依次去自环、屏蔽起始空符号转移、剪除不可达状态，得到干净自动机

    Args:
        nfa: 识别奠基语言的自动机

    Returns:
        Tuple[Nfa, CleanReport]: 干净自动机与清理报告

    Raises:
        ValidationError: 语言不奠基时，附带反例字符串（若能找到）
    """
    if not is_founded(nfa):
        witness = find_unfounded_witness(nfa)
        if witness is None:
            violation = "δ(start,∅) 中存在能到达接受状态的状态"
        elif not witness:
            violation = "起始状态是接受状态，语言包含空串"
        else:
            violation = f"语言包含以空符号开头的字符串 {format_input_string(witness)}"
        raise ValidationError(f"语言不是奠基的: {violation}", [violation], witness=witness)

    loop_free, report = remove_self_loops(nfa)
    blocked = restrict_founded_start(loop_free)
    report.blocked_empty_from_start = blocked is not loop_free
    pruned = prune_unreachable(blocked)
    report.pruned_states = sorted(blocked.states - pruned.states)
    report.states_before = len(nfa.states)
    report.states_after = len(pruned.states)

    if report.is_trivial():
        logger.debug("自动机已经是干净的")
    else:
        logger.info(
            f"清理完成: 去除自环 {report.removed_self_loops} 条, "
            f"状态数 {report.states_before} -> {report.states_after}"
        )
    return pruned, report


def clean_violations(nfa: Nfa) -> List[str]:
    """列出自动机不干净的原因；空列表表示干净"""
    violations = []
    for src, sigma, dst in nfa.sorted_transitions():
        if dst == src:
            violations.append(f"状态 {src} 在符号 {format_symbol(sigma)} 上有自环")
    if nfa.delta(nfa.start, EMPTY):
        violations.append(f"起始状态 {nfa.start} 可以读取空符号")
    for q in sorted(nfa.states - reachable_states(nfa)):
        violations.append(f"状态 {q} 不可达")
    return violations


def is_clean(nfa: Nfa) -> bool:
    """无自环、起始状态不读空符号、所有状态可达"""
    return not clean_violations(nfa)


def terminal_symbols(nfa: Nfa) -> List[Symbol]:
    """进入接受状态的转移所读的符号集合 {σ : (q,σ)∈V}，规范顺序"""
    reachable = reachable_states(nfa)
    found = {
        sigma for src, sigma, dst in nfa.transitions
        if src in reachable and dst in nfa.accepting
    }
    return sort_symbols(found)


def is_converging(nfa: Nfa) -> Optional[Symbol]:
    """
    语言中所有字符串是否以同一个符号结尾

    Returns:
        Optional[Symbol]: 唯一的终止符号；不收敛时为 None

    Raises:
        VacuousLanguageError: 语言为空（V=∅）时
    """
    symbols = terminal_symbols(nfa)
    if not symbols:
        raise VacuousLanguageError("语言为空，收敛性无从谈起")
    return symbols[0] if len(symbols) == 1 else None


def string_automaton(alpha: Sequence[Symbol], input_set: Iterable[NeuronId]) -> Nfa:
    """只接受单个字符串 α 的链状自动机 s0 -α₁→ s1 … -α_n→ sn"""
    input_set = frozenset(input_set)
    check_string(alpha, input_set)
    states = [f"s{i}" for i in range(len(alpha) + 1)]
    return Nfa(
        states=frozenset(states),
        input_set=input_set,
        transitions=frozenset(
            (states[i], sigma, states[i + 1]) for i, sigma in enumerate(alpha)
        ),
        start=states[0],
        accepting=frozenset({states[-1]}),
    )
