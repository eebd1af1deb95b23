#!/usr/bin/env python3
"""
monoreg 命令行入口
子命令：clean | compile | simulate | verify | extract | dot

退出码：0 成功，1 解析错误，2 校验失败，3 前置条件不成立，4 一致性验证失败，5 超出预算
"""
import argparse
import sys
from typing import List, Optional

from loguru import logger

from automata import Nfa, clean, format_input_string, format_set, parse_input_string
from compiler import MODES, compile_bundle
from config import get_config_with_default
from dot_render import automaton_to_dot, network_to_dot
from errors import MonoregError, SizeError, ValidationError
from extractor import extract_automaton
from jsonio import dump_json, load_json_file, write_text
from network import PositiveNetwork, output, run
from result_models import BehaviorBundle
from verifier import oracle_from_bundle, verify_delay, verify_delay_sampled

EXIT_OK = 0
EXIT_CONFORMANCE_FAIL = 4


def setup_logging(verbose: bool = False) -> None:
    """日志只写到标准错误，标准输出留给命令结果"""
    level = "DEBUG" if verbose else str(get_config_with_default("logging.level", "INFO"))
    fmt = get_config_with_default("logging.format", "{time:HH:mm:ss} | {level: <8} | {message}")
    logger.remove()
    logger.add(sys.stderr, level=level, format=fmt)


def load_network(path: str) -> PositiveNetwork:
    """读取网络 JSON；编译结果中附带的元数据字段会被忽略"""
    return PositiveNetwork.from_dict(load_json_file(path))


def cmd_clean(args: argparse.Namespace) -> int:
    nfa = Nfa.from_dict(load_json_file(args.input))
    cleaned, report = clean(nfa)
    if args.out:
        write_text(args.out, dump_json(cleaned.to_dict()))
        write_text(None, dump_json({'report': report.to_dict()}))
    else:
        write_text(None, dump_json({'automaton': cleaned.to_dict(), 'report': report.to_dict()}))
    return EXIT_OK


def cmd_compile(args: argparse.Namespace) -> int:
    bundle = BehaviorBundle.from_dict(load_json_file(args.input))
    result = compile_bundle(bundle, args.mode)
    write_text(args.out, dump_json(result.to_dict()))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    alpha = parse_input_string(args.string)
    trace = run(net, alpha)
    lines = [format_set(active) for active in trace.activations]
    fired = output(net, alpha) if alpha else frozenset()
    lines.append(f"output: {format_set(fired)}")
    write_text(None, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    oracle = oracle_from_bundle(BehaviorBundle.from_dict(load_json_file(args.bundle)))
    if args.samples is not None:
        result = verify_delay_sampled(
            net, oracle, args.delay, args.max_len, samples=args.samples, seed=args.seed,
        )
    else:
        result = verify_delay(net, oracle, args.delay, args.max_len, max_workers=args.workers)
    write_text(None, dump_json(result.to_dict()))
    return EXIT_OK if result.passed else EXIT_CONFORMANCE_FAIL


def cmd_extract(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    nfa = extract_automaton(net, args.neuron, state_budget=args.state_budget)
    write_text(args.out, dump_json(nfa.to_dict()))
    return EXIT_OK


def cmd_dot(args: argparse.Namespace) -> int:
    data = load_json_file(args.input)
    if args.kind == 'auto':
        text = automaton_to_dot(Nfa.from_dict(data))
    else:
        text = network_to_dot(PositiveNetwork.from_dict(data))
    write_text(args.out, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='monoreg',
        description='正权神经网络与单调正则行为的编译、模拟与验证',
    )
    parser.add_argument('--verbose', action='store_true', help='输出调试日志')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('clean', help='把奠基自动机清理为干净自动机')
    p.add_argument('input', help='自动机 JSON')
    p.add_argument('--out', help='清理后自动机的输出路径（默认标准输出）')
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser('compile', help='把行为包编译成正权网络')
    p.add_argument('input', help='行为包 JSON')
    p.add_argument('--mode', choices=sorted(MODES), default='delay1')
    p.add_argument('--out', help='网络 JSON 输出路径（默认标准输出）')
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser('simulate', help='在输入串上运行网络并打印激活轨迹')
    p.add_argument('network', help='网络 JSON')
    p.add_argument('string', help='输入串，例如 "[a,b,c];[b,c];[]"')
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('verify', help='检查网络是否以给定延迟实现行为包')
    p.add_argument('network', help='网络 JSON')
    p.add_argument('bundle', help='行为包 JSON')
    p.add_argument('--delay', type=int, default=1)
    p.add_argument('--max-len', type=int, default=4)
    p.add_argument('--samples', type=int, help='改用抽样验证的样本数')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--workers', type=int, help='穷举验证的线程数')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('extract', help='为输出神经元提取确定性自动机')
    p.add_argument('network', help='网络 JSON')
    p.add_argument('neuron', help='输出神经元')
    p.add_argument('--state-budget', type=int)
    p.add_argument('--out', help='自动机 JSON 输出路径（默认标准输出）')
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser('dot', help='渲染 Graphviz DOT')
    p.add_argument('input', help='自动机或网络 JSON')
    p.add_argument('--kind', choices=['auto', 'net'], default='auto')
    p.add_argument('--out', help='DOT 输出路径（默认标准输出）')
    p.set_defaults(func=cmd_dot)
    return parser


def report_error(e: MonoregError) -> None:
    """把失败原因以 JSON 写到标准输出，便于脚本处理"""
    payload = {'error': e.kind, 'message': str(e)}
    if isinstance(e, ValidationError):
        payload['violations'] = e.violations
        if e.witness is not None:
            payload['witness'] = format_input_string(e.witness)
    if isinstance(e, SizeError):
        payload['required'] = e.required
        payload['budget'] = e.budget
        payload['hint'] = '使用 --samples 改为抽样验证'
    write_text(None, dump_json(payload))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.func(args)
    except MonoregError as e:
        logger.error(f"❌ {args.command} 失败: {e}")
        report_error(e)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
