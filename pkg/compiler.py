"""
自动机到正权神经网络的编译
包含延迟 1 构造、预处理器（延迟 2）变体、收敛语言的零延迟构造、单字符串链构造，
以及它们共用的 or-and 权重函数 w_or / w_and
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from loguru import logger

from automata import (
    InputString, NeuronId, Nfa, State, Symbol, clean_violations, format_symbol,
    is_founded, symbol_key, terminal_symbols,
)
from errors import InputDomainError, NotConvergingError, ValidationError
from network import Edge, PositiveNetwork, Weight, unite, validate
from result_models import BehaviorBundle, CompilationResult

Pair = Tuple[State, Symbol]

DELAY1 = "delay1"
PREPROCESSOR = "preprocessor"
ZERO_DELAY = "zero_delay_converging"
CHAIN = "single_string_chain"

MODES = {"delay1": DELAY1, "preproc": PREPROCESSOR, "zero": ZERO_DELAY, "chain": CHAIN}


# ---------------------------------------------------------------------------
# 权重函数
# ---------------------------------------------------------------------------

def _check_positive(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise InputDomainError(f"m 和 n 必须是正整数: m={m}, n={n}")


def w_or(m: int, n: int) -> Weight:
    """上下文神经元的权重 1/(n·m+1)"""
    _check_positive(m, n)
    return Fraction(1, n * m + 1)


def w_and(m: int, n: int) -> Weight:
    """输入神经元的权重 m/(n·m+1)"""
    _check_positive(m, n)
    return Fraction(m, n * m + 1)


def claim1_check(m: int, n: int) -> bool:
    """
    检查 or-and 权重设计的三个不等式（精确有理数）

    1. m·w_or + (n−1)·w_and < 1：缺少任一输入时不激活
    2. w_or + n·w_and ≥ 1：一个上下文加全部输入即激活
    3. n·w_and < 1：没有上下文时不激活
    """
    if m < 1 or n < 1:
        return False
    w_o, w_a = w_or(m, n), w_and(m, n)
    return m * w_o + (n - 1) * w_a < 1 and w_o + n * w_a >= 1 and n * w_a < 1


def _or_and(context: Sequence[NeuronId], sigma: Symbol) -> Dict[NeuronId, Weight]:
    """
    "至少一个上下文神经元 且 σ 的全部输入"的突触前权重

    上下文为空时只检测 σ；σ 为空时上下文任一激活即可。
    """
    members = sorted(sigma)
    if not context:
        return {u: Fraction(1, len(members)) for u in members}
    if not members:
        return {z: Fraction(1) for z in context}
    m, n = len(context), len(members)
    weights = {z: w_or(m, n) for z in context}
    weights.update({u: w_and(m, n) for u in members})
    return weights


# ---------------------------------------------------------------------------
# 状态-符号对集合
# ---------------------------------------------------------------------------

def pair_key(pair: Pair):
    return pair[0], symbol_key(pair[1])


@dataclass(frozen=True)
class PairSet:
    """状态-符号对集合、触发对和每个对的上下文"""
    pairs: Tuple[Pair, ...]
    triggers: FrozenSet[Pair]
    contexts: Mapping[Pair, Tuple[Pair, ...]]

    def __len__(self) -> int:
        return len(self.pairs)


def pair_set(nfa: Nfa) -> PairSet:
    """
    计算干净自动机的状态-符号对集合

    pairs = {(q,σ) : q ≠ start 且存在 q' 使 q ∈ δ(q',σ)}；
    触发对满足 q ∈ δ(start,σ)；上下文 context(q,σ) = {(q',σ') ∈ pairs : q ∈ δ(q',σ)}。

    Raises:
        ValidationError: 自动机不干净时
    """
    violations = clean_violations(nfa)
    if violations:
        raise ValidationError(f"自动机不干净: {violations[0]}", violations)

    pairs = sorted(
        {(dst, sigma) for _, sigma, dst in nfa.transitions if dst != nfa.start},
        key=pair_key,
    )
    triggers = frozenset(p for p in pairs if p[0] in nfa.delta(nfa.start, p[1]))
    contexts = {}
    for q, sigma in pairs:
        contexts[(q, sigma)] = tuple(
            p for p in pairs if q in nfa.delta(p[0], sigma)
        )
    return PairSet(pairs=tuple(pairs), triggers=triggers, contexts=contexts)


def pair_count(behavior: Mapping[NeuronId, Nfa]) -> int:
    """所有输出神经元的状态-符号对数量之和"""
    return sum(len(pair_set(nfa)) for nfa in behavior.values())


def pair_name(pair: Pair, prefix: str = "") -> NeuronId:
    """辅助神经元的规范名称 "(state|a,b,c)"，多输出时加上 "x:" 前缀"""
    q, sigma = pair
    return f"{prefix}({q}|{','.join(sorted(sigma))})"


def preprocessor_name(sigma: Symbol, prefix: str = "") -> NeuronId:
    return f"{prefix}y[{','.join(sorted(sigma))}]"


def chain_name(x: NeuronId, i: int) -> NeuronId:
    return f"{x}#{i}"


# ---------------------------------------------------------------------------
# 前置条件
# ---------------------------------------------------------------------------

def _check_behavior(behavior: Mapping[NeuronId, Nfa], inputs: FrozenSet[NeuronId]) -> None:
    violations = []
    for x in sorted(behavior):
        nfa = behavior[x]
        if x in inputs:
            violations.append(f"输出神经元 {x} 与输入神经元重名")
        extra = nfa.input_set - inputs
        if extra:
            violations.append(f"输出 {x} 的自动机使用了未声明的输入: {sorted(extra)}")
        if not is_founded(nfa):
            violations.append(f"输出 {x} 的语言不是奠基的")
        violations.extend(f"输出 {x}: {v}" for v in clean_violations(nfa))
    if violations:
        raise ValidationError(f"行为不满足编译前置条件: {violations[0]}", violations)


def _check_generated_names(generated: Sequence[NeuronId], reserved: Iterable[NeuronId]) -> None:
    """生成的辅助神经元名称必须两两不同，且不能与输入或输出神经元重名"""
    counts = Counter(generated)
    collisions = sorted(n for n, c in counts.items() if c > 1)
    clash = sorted(set(generated) & set(reserved))
    violations = [f"generated name collision: {n}" for n in collisions]
    violations += [f"identifier clash: {n}" for n in clash]
    if violations:
        raise ValidationError(f"生成的辅助神经元名称冲突: {collisions + clash}", violations)


def _finish(parts: List[PositiveNetwork], delay: int, construction: str) -> CompilationResult:
    net = unite(parts)
    violations = validate(net)
    if violations:
        raise ValidationError(f"编译结果违反网络不变量: {violations[0]}", violations)
    result = CompilationResult(
        network=net, delay=delay, aux_count=len(net.auxiliary), construction=construction
    )
    logger.info(
        f"编译完成: 构造 {construction}, 延迟 {delay}, "
        f"输出 {len(net.outputs)} 个, 辅助神经元 {result.aux_count} 个"
    )
    return result


# ---------------------------------------------------------------------------
# 构造
# ---------------------------------------------------------------------------

def _pair_network(
        x: NeuronId, nfa: Nfa, inputs: FrozenSet[NeuronId], prefix: str,
) -> Tuple[PairSet, Dict[Pair, NeuronId], Dict[Edge, Weight]]:
    """延迟 1 构造中辅助神经元之间及输入到辅助神经元的权重"""
    ps = pair_set(nfa)
    names = {p: pair_name(p, prefix) for p in ps.pairs}
    _check_generated_names(list(names.values()), inputs | {x})
    weights: Dict[Edge, Weight] = {}
    for p in ps.pairs:
        context = () if p in ps.triggers else tuple(names[c] for c in ps.contexts[p])
        for source, w in _or_and(context, p[1]).items():
            weights[(source, names[p])] = w
    return ps, names, weights


def _prefix_for(behavior: Mapping[NeuronId, object]) -> Dict[NeuronId, str]:
    qualify = len(behavior) > 1
    return {x: (f"{x}:" if qualify else "") for x in behavior}


def compile_delay1(behavior: Mapping[NeuronId, Nfa], inputs) -> CompilationResult:
    """
    延迟 1 构造：每个状态-符号对成为一个辅助神经元

    Args:
        behavior: 输出神经元到干净自动机的映射
        inputs: 输入神经元集合

    Returns:
        CompilationResult: delay=1，aux_count 等于状态-符号对总数

    Raises:
        ValidationError: 自动机不干净或标识符冲突时
    """
    inputs = frozenset(inputs)
    _check_behavior(behavior, inputs)
    prefixes = _prefix_for(behavior)
    parts = []
    for x in sorted(behavior):
        nfa = behavior[x]
        ps, names, weights = _pair_network(x, nfa, inputs, prefixes[x])
        for p in ps.pairs:
            if p[0] in nfa.accepting:
                weights[(names[p], x)] = Fraction(1)
        parts.append(PositiveNetwork(inputs, {x}, set(names.values()), weights))
    return _finish(parts, 1, DELAY1)


def compile_preprocessor(behavior: Mapping[NeuronId, Nfa], inputs) -> CompilationResult:
    """
    预处理器变体：每个非空符号 σ 先由 y_σ 检测，辅助神经元读取 y_σ 而不是输入神经元

    延迟变为 2。
    """
    inputs = frozenset(inputs)
    _check_behavior(behavior, inputs)
    prefixes = _prefix_for(behavior)
    parts = []
    for x in sorted(behavior):
        nfa = behavior[x]
        prefix = prefixes[x]
        ps = pair_set(nfa)
        names = {p: pair_name(p, prefix) for p in ps.pairs}
        symbols = sorted({sigma for _, sigma in ps.pairs if sigma}, key=symbol_key)
        pre = {sigma: preprocessor_name(sigma, prefix) for sigma in symbols}
        _check_generated_names(list(names.values()) + list(pre.values()), inputs | {x})

        weights: Dict[Edge, Weight] = {}
        for sigma, y in pre.items():
            for u in sorted(sigma):
                weights[(u, y)] = Fraction(1, len(sigma))
        for p in ps.pairs:
            q, sigma = p
            context = [names[c] for c in ps.contexts[p]]
            if p in ps.triggers:
                weights[(pre[sigma], names[p])] = Fraction(1)
            elif not sigma:
                for z in context:
                    weights[(z, names[p])] = Fraction(1)
            else:
                m = len(context)
                weights[(pre[sigma], names[p])] = Fraction(m, m + 1)
                for z in context:
                    weights[(z, names[p])] = Fraction(1, m + 1)
            if q in nfa.accepting:
                weights[(names[p], x)] = Fraction(1)
        auxiliary = set(names.values()) | set(pre.values())
        logger.debug(f"输出 {x}: 预处理器神经元 {len(pre)} 个")
        parts.append(PositiveNetwork(inputs, {x}, auxiliary, weights))
    return _finish(parts, 2, PREPROCESSOR)


def compile_zero_delay_converging(behavior: Mapping[NeuronId, Nfa], inputs) -> CompilationResult:
    """
    收敛语言的零延迟构造

    输出神经元 x 不再读取模拟接受状态的辅助神经元，而是读取模拟"接受状态前驱"的
    辅助神经元集合 C，并直接检查终止符号 σ̂ 是否出现。

    Raises:
        ValidationError: 自动机不干净时
        NotConvergingError: 某个语言存在两个不同的终止符号时
    """
    inputs = frozenset(inputs)
    _check_behavior(behavior, inputs)
    prefixes = _prefix_for(behavior)
    parts = []
    for x in sorted(behavior):
        nfa = behavior[x]
        ps, names, weights = _pair_network(x, nfa, inputs, prefixes[x])
        # V = {(q,σ) : δ(q,σ) ∩ F ≠ ∅}，干净自动机中所有状态均可达
        v_pairs = {(src, sigma) for src, sigma, dst in nfa.transitions if dst in nfa.accepting}
        terminals = terminal_symbols(nfa)
        if not terminals:
            logger.warning(f"输出 {x} 的语言为空，输出神经元没有突触前连接")
            parts.append(PositiveNetwork(inputs, {x}, set(names.values()), weights))
            continue
        if len(terminals) > 1:
            first, second = terminals[0], terminals[1]
            raise NotConvergingError(
                f"输出 {x} 的语言不收敛: 终止符号 {format_symbol(first)} 与 {format_symbol(second)}",
                (first, second),
            )

        terminal = terminals[0]
        preceding = {q for q, _ in v_pairs}
        if nfa.start in preceding:
            # ⟨σ̂⟩ 本身属于语言，任何以 ⊇σ̂ 结尾的输入都嵌入它
            context: Tuple[NeuronId, ...] = ()
        else:
            context = tuple(names[p] for p in ps.pairs if p[0] in preceding)
        for source, w in _or_and(context, terminal).items():
            weights[(source, x)] = w
        logger.debug(f"输出 {x}: 终止符号 {format_symbol(terminal)}, |C|={len(context)}")
        parts.append(PositiveNetwork(inputs, {x}, set(names.values()), weights))
    return _finish(parts, 0, ZERO_DELAY)


def compile_single_string(behavior: Mapping[NeuronId, InputString], inputs) -> CompilationResult:
    """
    单字符串语言的链式零延迟构造

    ⟨σ₁,…,σ_n⟩：n=1 时 x 直接读取 σ₁；否则 y₁ 检测 σ₁，y_i 读取 {y_{i−1}} ∪ σ_i，
    x 读取 {y_{n−1}} ∪ σ_n，每个突触前神经元权重相同。

    Raises:
        ValidationError: 字符串为空、首符号为空或使用未声明的输入时
    """
    inputs = frozenset(inputs)
    violations = []
    for x in sorted(behavior):
        alpha = behavior[x]
        if x in inputs:
            violations.append(f"输出神经元 {x} 与输入神经元重名")
        if not alpha:
            violations.append(f"输出 {x} 的字符串为空")
        elif not alpha[0]:
            violations.append(f"输出 {x} 的字符串以空符号开头")
        for sigma in alpha:
            if not sigma <= inputs:
                violations.append(f"输出 {x} 的字符串使用了未声明的输入: {sorted(sigma - inputs)}")
    if violations:
        raise ValidationError(f"单字符串行为不满足前置条件: {violations[0]}", violations)

    parts = []
    for x in sorted(behavior):
        alpha = behavior[x]
        n = len(alpha)
        chain = [chain_name(x, i) for i in range(1, n)]
        _check_generated_names(chain, inputs | {x})
        weights: Dict[Edge, Weight] = {}
        targets = chain + [x]
        for i, (sigma, target) in enumerate(zip(alpha, targets)):
            sources = sorted(sigma) if i == 0 else [chain[i - 1]] + sorted(sigma)
            for source in sources:
                weights[(source, target)] = Fraction(1, len(sources))
        parts.append(PositiveNetwork(inputs, {x}, set(chain), weights))
    return _finish(parts, 0, CHAIN)


def compile_bundle(bundle: BehaviorBundle, mode: str) -> CompilationResult:
    """
    按命令行模式分派编译

    Args:
        bundle: 行为包
        mode: delay1 | preproc | zero | chain

    Raises:
        InputDomainError: 未知模式时
        ValidationError: 行为包内容与模式不匹配时
    """
    construction = MODES.get(mode)
    if construction is None:
        raise InputDomainError(f"未知的编译模式: {mode}")
    if construction == CHAIN:
        if bundle.automata:
            raise ValidationError(
                "chain 模式需要为每个输出给出单个字符串",
                [f"输出 {x} 给出的是自动机" for x in sorted(bundle.automata)],
            )
        return compile_single_string(bundle.strings, bundle.inputs)
    if bundle.strings:
        raise ValidationError(
            f"{mode} 模式需要为每个输出给出自动机",
            [f"输出 {x} 给出的是字符串" for x in sorted(bundle.strings)],
        )
    builders = {
        DELAY1: compile_delay1,
        PREPROCESSOR: compile_preprocessor,
        ZERO_DELAY: compile_zero_delay_converging,
    }
    return builders[construction](bundle.automata, bundle.inputs)
