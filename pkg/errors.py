"""
异常定义
每个异常类携带命令行退出码：0 成功，1 解析，2 校验，3 前置条件，4 一致性失败，5 预算
"""
from typing import List, Optional, Sequence


class MonoregError(Exception):
    """所有 monoreg 异常的基类"""
    exit_code = 1
    kind = "error"


class ParseError(MonoregError):
    """JSON 或字符串字面量格式错误"""
    exit_code = 1
    kind = "parse error"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            message = f"{message} (行 {line}, 列 {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InputDomainError(MonoregError, ValueError):
    """输入超出声明的神经元集合，或参数超出定义域"""
    exit_code = 1
    kind = "input domain error"


class ValidationError(MonoregError):
    """结构校验失败：自动机不干净、语言非奠基、网络非法、标识符冲突等"""
    exit_code = 2
    kind = "validation error"

    def __init__(self, message: str, violations: Sequence[str] = (), witness=None):
        super().__init__(message)
        self.violations: List[str] = list(violations)
        self.witness = witness


class PreconditionError(MonoregError):
    """构造定理的前置条件不成立"""
    exit_code = 3
    kind = "precondition failed"


class NotConvergingError(PreconditionError):
    """语言不收敛：存在两个不同的终止符号"""
    kind = "not converging"

    def __init__(self, message: str, symbols=()):
        super().__init__(message)
        self.symbols = tuple(symbols)


class VacuousLanguageError(PreconditionError):
    """语言为空，没有任何终止符号"""
    kind = "vacuous language"


class SizeError(MonoregError):
    """超出穷举、暴力枚举或状态数预算"""
    exit_code = 5
    kind = "budget exceeded"

    def __init__(self, message: str, required: Optional[int] = None, budget: Optional[int] = None):
        super().__init__(message)
        self.required = required
        self.budget = budget
