import sys
from pathlib import Path

import pytest
from loguru import logger

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(autouse=True)
def reset_logger():
    """命令行测试会把日志接到 capsys 的临时流上，测试结束后恢复"""
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")
