"""
JSON 文件读写
所有输出使用排序键、两空格缩进和结尾换行，保证字节稳定
"""
import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Union

from loguru import logger

from errors import ParseError

PathLike = Union[str, Path]


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_json_file(path: PathLike) -> Dict[str, Any]:
    """
    读取 JSON 文件

    Raises:
        ParseError: 文件不存在、无法解码或顶层不是对象时，带行列号
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ParseError(f"无法读取文件 {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} 不是合法的 JSON: {e.msg}", line=e.lineno, column=e.colno) from e
    if not isinstance(data, dict):
        raise ParseError(f"{path} 的顶层必须是 JSON 对象")
    logger.debug(f"读取 {path}")
    return data


def write_text(path: Optional[PathLike], text: str) -> None:
    """写出文本；path 为 None 或 "-" 时写到标准输出"""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')
    logger.info(f"📁 已写入 {path}")
