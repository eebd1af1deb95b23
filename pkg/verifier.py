"""
行为预言机与一致性验证
基于嵌入语义的单调正则行为预言机、延迟 k 一致性检查（穷举与抽样）、
暴力嵌入判定对照，以及零延迟候选网络的权重网格反驳
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple,
)

from loguru import logger

from automata import (
    NeuronId, Nfa, State, Symbol, accepts, check_string, embeds, is_founded,
    powerset_symbols, prefix, sort_symbols, string_automaton, string_key,
)
from config import enumeration_budget, get_config_with_default
from errors import InputDomainError, SizeError, ValidationError
from network import PositiveNetwork, output, step
from result_models import BehaviorBundle, ConformanceResult, Counterexample, RefutationSummary

OracleState = Tuple[FrozenSet[State], ...]


def _embed_step(nfa: Nfa, current: FrozenSet[State], gamma: Symbol) -> FrozenSet[State]:
    """在每个位置开启一条新运行，并沿所有 σ ⊆ γ 的转移前进"""
    frontier = current | {nfa.start}
    return frozenset(
        dst
        for q in frontier
        for sigma, dst in nfa.outgoing(q)
        if sigma <= gamma
    )


def embed_accepts(nfa: Nfa, alpha: Sequence[Symbol]) -> bool:
    """
    α 是否嵌入某个被 nfa 接受的字符串 β

    单调闭包并行运行：每个后缀位置都从 {start} 开始一条新运行，
    在位置 i 从 q 沿任意满足 σ ⊆ γ_i 的转移 (q,σ,q') 前进。
    """
    if not alpha:
        return nfa.start in nfa.accepting
    current: FrozenSet[State] = frozenset()
    for gamma in alpha:
        current = _embed_step(nfa, current, gamma)
    return bool(current & nfa.accepting)


@dataclass(frozen=True)
class BehaviorOracle:
    """单调正则行为：每个输出神经元对应一个奠基语言的自动机"""
    languages: Mapping[NeuronId, Nfa] = field(hash=False)
    input_set: FrozenSet[NeuronId]

    def __post_init__(self):
        object.__setattr__(self, 'input_set', frozenset(self.input_set))
        object.__setattr__(self, 'languages', dict(sorted(self.languages.items())))
        violations = []
        for x, nfa in self.languages.items():
            extra = nfa.input_set - self.input_set
            if extra:
                violations.append(f"输出 {x} 的自动机使用了预言机之外的输入: {sorted(extra)}")
            if not is_founded(nfa):
                violations.append(f"输出 {x} 的语言不是奠基的")
        if violations:
            raise ValidationError(f"行为预言机非法: {violations[0]}", violations)

    @property
    def outputs(self) -> FrozenSet[NeuronId]:
        return frozenset(self.languages)

    def initial_state(self) -> OracleState:
        return tuple(frozenset() for _ in self.languages)

    def advance(self, state: OracleState, gamma: Symbol) -> OracleState:
        """读入一个符号后的增量状态"""
        return tuple(
            _embed_step(nfa, current, gamma)
            for nfa, current in zip(self.languages.values(), state)
        )

    def fired(self, state: OracleState) -> FrozenSet[NeuronId]:
        """当前状态下被激活的输出神经元"""
        return frozenset(
            x for (x, nfa), current in zip(self.languages.items(), state)
            if current & nfa.accepting
        )


def oracle_from_bundle(bundle: BehaviorBundle) -> BehaviorOracle:
    """行为包对应的预言机；单字符串条目转换为链状自动机"""
    languages: Dict[NeuronId, Nfa] = dict(bundle.automata)
    for x, alpha in bundle.strings.items():
        languages[x] = string_automaton(alpha, bundle.inputs)
    return BehaviorOracle(languages=languages, input_set=bundle.inputs)


def behavior_eval(oracle: BehaviorOracle, alpha: Sequence[Symbol]) -> FrozenSet[NeuronId]:
    """
    单调正则行为在 α 上的取值 {x : embed_accepts(L_x, α)}

    Raises:
        InputDomainError: α 为空或符号超出输入集合时
    """
    if not alpha:
        raise InputDomainError("行为只定义在非空输入串上")
    check_string(alpha, oracle.input_set)
    state = oracle.initial_state()
    for gamma in alpha:
        state = oracle.advance(state, gamma)
    return oracle.fired(state)


# ---------------------------------------------------------------------------
# 延迟 k 一致性检查
# ---------------------------------------------------------------------------

def _check_compatible(net: PositiveNetwork, oracle: BehaviorOracle) -> None:
    violations = []
    if net.inputs != oracle.input_set:
        violations.append(
            f"输入集合不一致: 网络 {sorted(net.inputs)} / 预言机 {sorted(oracle.input_set)}"
        )
    if net.outputs != oracle.outputs:
        violations.append(
            f"输出集合不一致: 网络 {sorted(net.outputs)} / 预言机 {sorted(oracle.outputs)}"
        )
    if violations:
        raise ValidationError(f"网络与预言机不兼容: {violations[0]}", violations)


def _resolve_pool(net: PositiveNetwork, symbol_pool: Optional[Iterable[Symbol]]) -> List[Symbol]:
    if symbol_pool is None:
        return powerset_symbols(net.inputs)
    pool = sort_symbols(set(frozenset(s) for s in symbol_pool))
    check_string(pool, net.inputs)
    return pool


def _smaller(a: Optional[Counterexample], b: Optional[Counterexample]) -> Optional[Counterexample]:
    if a is None:
        return b
    if b is None:
        return a
    return a if string_key(a.input) <= string_key(b.input) else b


def _walk(
        net: PositiveNetwork, oracle: BehaviorOracle, k: int, max_len: int,
        pool: Sequence[Symbol], first: Symbol,
) -> Tuple[int, Optional[Counterexample]]:
    """深度优先遍历以 first 开头的前缀树，共享网络与预言机的增量状态"""
    checked = 0
    best: Optional[Counterexample] = None
    path: List[Symbol] = []
    oracle_states: List[OracleState] = [oracle.initial_state()]

    def visit(active: FrozenSet[NeuronId], gamma: Symbol) -> None:
        nonlocal checked, best
        path.append(gamma)
        oracle_states.append(oracle.advance(oracle_states[-1], gamma))
        active = step(net, active, gamma)

        n = len(path)
        actual = active & net.outputs
        expected = frozenset() if n <= k else oracle.fired(oracle_states[n - k])
        checked += 1
        if actual != expected:
            best = _smaller(best, Counterexample(tuple(path), expected, actual))
        if n < max_len:
            for next_gamma in pool:
                visit(active, next_gamma)
        path.pop()
        oracle_states.pop()

    visit(frozenset(), first)
    return checked, best


def verify_delay(
        net: PositiveNetwork,
        oracle: BehaviorOracle,
        k: int,
        max_len: int,
        symbol_pool: Optional[Iterable[Symbol]] = None,
        max_workers: Optional[int] = None,
) -> ConformanceResult:
    """
    穷举检查网络是否以延迟 k 实现预言机给出的行为

    对所有 1 ≤ |α| ≤ max_len 的 α：|α| ≤ k 时输出必须为空，否则
    output(net, α) = behavior_eval(oracle, prefix(α, |α|−k))。

    Args:
        net: 被验证的网络
        oracle: 行为预言机，输入/输出集合须与网络一致
        k: 延迟
        max_len: 最大字符串长度
        symbol_pool: 符号池，默认为输入集合的幂集
        max_workers: 并行线程数，默认读取 verifier.max_workers

    Returns:
        ConformanceResult: 验证结果；失败时给出规范顺序最小的反例

    Raises:
        ValidationError: 网络与预言机不兼容时
        SizeError: 字符串总数超出枚举预算时
    """
    if k < 0 or max_len < 0:
        raise InputDomainError(f"延迟和最大长度不能为负: k={k}, max_len={max_len}")
    _check_compatible(net, oracle)
    pool = _resolve_pool(net, symbol_pool)

    total = sum(len(pool) ** length for length in range(1, max_len + 1))
    budget = enumeration_budget()
    if total > budget:
        raise SizeError(
            f"需要枚举 {total} 个字符串，超出预算 {budget}，请改用抽样验证 (--samples)",
            required=total, budget=budget,
        )

    if max_workers is None:
        max_workers = int(get_config_with_default("verifier.max_workers", 1))
    logger.info(f"穷举验证: 延迟 {k}, 最大长度 {max_len}, 符号池 {len(pool)} 个, 共 {total} 个字符串")
    checked, best = _enumerate(net, oracle, k, max_len, pool, max_workers)
    return _conclude(checked, best, k, max_len)


def _enumerate(
        net: PositiveNetwork, oracle: BehaviorOracle, k: int, max_len: int,
        pool: Sequence[Symbol], max_workers: int,
) -> Tuple[int, Optional[Counterexample]]:
    """按首符号划分前缀树并行遍历，合并时取规范顺序最小的反例"""
    if max_len < 1:
        return 0, None
    if max_workers > 1 and len(pool) > 1:
        with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="Verify_Worker") as executor:
            futures = [executor.submit(_walk, net, oracle, k, max_len, pool, first) for first in pool]
            outcomes = [future.result() for future in futures]
    else:
        outcomes = [_walk(net, oracle, k, max_len, pool, first) for first in pool]

    checked = 0
    best: Optional[Counterexample] = None
    for part_checked, part_best in outcomes:
        checked += part_checked
        best = _smaller(best, part_best)
    return checked, best


def _conclude(
        checked: int, best: Optional[Counterexample], k: int, max_len: int, seed: Optional[int] = None,
) -> ConformanceResult:
    result = ConformanceResult(
        verdict='pass' if best is None else 'fail',
        strings_checked=checked,
        delay=k,
        max_len=max_len,
        counterexample=best,
        seed=seed,
    )
    if result.passed:
        logger.success(f"✅ 验证通过: 检查了 {checked} 个字符串")
    else:
        logger.warning(f"❌ 验证失败: {best}")
    return result


def verify_delay_sampled(
        net: PositiveNetwork,
        oracle: BehaviorOracle,
        k: int,
        max_len: int,
        samples: int,
        seed: int,
        symbol_pool: Optional[Iterable[Symbol]] = None,
) -> ConformanceResult:
    """
    抽样版本的延迟 k 检查：长度在 [1,max_len] 内均匀抽取，每个符号在幂集（或符号池）上均匀抽取

    同一个 seed 总是给出相同的结论与反例。
    """
    if max_len < 1 or samples < 0:
        raise InputDomainError(f"抽样参数非法: max_len={max_len}, samples={samples}")
    _check_compatible(net, oracle)
    pool = _resolve_pool(net, symbol_pool) if symbol_pool is not None else None
    members = sorted(net.inputs)
    rng = random.Random(seed)
    logger.info(f"抽样验证: 延迟 {k}, 最大长度 {max_len}, 样本 {samples} 个, 种子 {seed}")

    best: Optional[Counterexample] = None
    for _ in range(samples):
        length = rng.randint(1, max_len)
        if pool is None:
            alpha = tuple(
                frozenset(u for u in members if rng.random() < 0.5) for _ in range(length)
            )
        else:
            alpha = tuple(rng.choice(pool) for _ in range(length))
        actual = output(net, alpha)
        expected = frozenset() if length <= k else behavior_eval(oracle, prefix(alpha, length - k))
        if actual != expected:
            best = _smaller(best, Counterexample(alpha, expected, actual))
    return _conclude(samples, best, k, max_len, seed=seed)


# ---------------------------------------------------------------------------
# 暴力对照
# ---------------------------------------------------------------------------

def brute_force_embed_accepts(
        nfa: Nfa,
        alpha: Sequence[Symbol],
        max_len: Optional[int] = None,
        max_inputs: Optional[int] = None,
) -> bool:
    """
    枚举所有 |β| ≤ |α| 的候选串 β，直接检查 accepts(nfa, β) 与 embeds(α, β)

    每个位置的候选符号取自 powerset(input_set) 中被 α 对应位置包含的那些。

    Raises:
        SizeError: 字符串长度或输入集合超出暴力枚举上限时
    """
    if max_len is None:
        max_len = int(get_config_with_default("verifier.brute_force_max_len", 6))
    if max_inputs is None:
        max_inputs = int(get_config_with_default("verifier.brute_force_max_inputs", 4))
    if len(alpha) > max_len or len(nfa.input_set) > max_inputs:
        raise SizeError(
            f"暴力枚举超出上限: |α|={len(alpha)} (上限 {max_len}), "
            f"|I|={len(nfa.input_set)} (上限 {max_inputs})",
            required=len(alpha), budget=max_len,
        )
    symbols = powerset_symbols(nfa.input_set)
    for length in range(len(alpha) + 1):
        suffix = alpha[len(alpha) - length:]
        options = [[s for s in symbols if s <= gamma] for gamma in suffix]
        for beta in itertools.product(*options):
            if embeds(alpha, beta) and accepts(nfa, beta):
                return True
    return False


# ---------------------------------------------------------------------------
# 零延迟候选网络的权重网格反驳
# ---------------------------------------------------------------------------

def weight_grid(max_den: int) -> List[Fraction]:
    """[0,1] 内所有分母不超过 max_den 的分数，升序"""
    if max_den < 1:
        raise InputDomainError(f"分母上限必须为正: {max_den}")
    return sorted({Fraction(num, den) for den in range(1, max_den + 1) for num in range(den + 1)})


def auxiliary_free_candidates(
        inputs: Iterable[NeuronId],
        x: NeuronId,
        required_symbols: Sequence[Symbol],
        max_den: Optional[int] = None,
) -> Iterator[PositiveNetwork]:
    """
    枚举无辅助神经元的候选网络：输入到 x 的权重取自网格，
    且对每个必须识别的单符号串 ⟨σ⟩ 满足 Σ_{u∈σ} W(u,x) ≥ 1
    """
    if max_den is None:
        max_den = int(get_config_with_default("verifier.weight_grid_max_den", 12))
    members = sorted(set(inputs))
    grid = weight_grid(max_den)
    position = {u: i for i, u in enumerate(members)}
    # 一个符号在其最后一个成员被赋值后即可检查
    due: Dict[int, List[Symbol]] = {}
    for sigma in required_symbols:
        last = max(position[u] for u in sigma)
        due.setdefault(last, []).append(sigma)

    def assign(i: int, chosen: List[Fraction]) -> Iterator[List[Fraction]]:
        if i == len(members):
            yield list(chosen)
            return
        for w in grid:
            chosen.append(w)
            if all(sum(chosen[position[u]] for u in sigma) >= 1 for sigma in due.get(i, ())):
                yield from assign(i + 1, chosen)
            chosen.pop()

    for weights in assign(0, []):
        yield PositiveNetwork(
            frozenset(members), frozenset({x}), frozenset(),
            {(u, x): w for u, w in zip(members, weights)},
        )


def refute_zero_delay(
        candidates: Iterable[PositiveNetwork],
        oracle: BehaviorOracle,
        max_len: int,
) -> RefutationSummary:
    """
    对每个候选网络做 k=0 的穷举检查，汇总被反驳的数量与反例长度

    这是对"不存在零延迟实现"论证的有限网格检验，不是判定过程。
    """
    candidates_seen = 0
    refuted = 0
    longest = 0
    survivors = []
    pool = powerset_symbols(oracle.input_set)
    for net in candidates:
        _check_compatible(net, oracle)
        candidates_seen += 1
        _, best = _enumerate(net, oracle, 0, max_len, pool, max_workers=1)
        if best is None:
            survivors.append({f"{z}->{y}": str(w) for (z, y), w in net.sorted_weights()})
        else:
            refuted += 1
            longest = max(longest, len(best.input))
    summary = RefutationSummary(
        candidates=candidates_seen, refuted=refuted,
        max_counterexample_length=longest, survivors=survivors,
    )
    logger.info(f"零延迟候选反驳: {refuted}/{candidates_seen}, 最长反例 {longest}")
    return summary

