"""
运行规格模块
命令行参数解析为 RunSpec，并在分发前校验
"""

import argparse
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from config import config
from utils.errors import ValidationError

COMMANDS = ("cover-check", "pipeline", "oracle", "mechanisms", "bench")
_NEEDS_INPUT = ("cover-check", "pipeline", "oracle")


@dataclass
class RunSpec:
    """一次命令行调用的完整规格"""
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    k: int = 2
    eps: float = 0.5
    eps_p: float = 1.0
    delta_p: float = 1e-6
    seed: int = 0
    repeats: int = 20
    normalize: bool = False
    d_prime: Optional[int] = None
    budget_split: Tuple[float, float, float] = field(
        default_factory=lambda: tuple(float(x) for x in config.BUDGET_SPLIT)
    )
    n: int = 500
    dim: int = 20
    log_level: Optional[str] = None
    log_file: Optional[str] = None
    workers: int = 1

    def validate(self):
        """校验与被调用操作的前置条件一致"""
        if self.command not in COMMANDS:
            raise ValidationError(f"未知子命令 {self.command}")
        if self.command in _NEEDS_INPUT and not self.input:
            raise ValidationError(f"{self.command} 需要 --input")
        if self.k < 1:
            raise ValidationError(f"k 必须为正，得到 {self.k}")
        if not (0 < self.eps <= 0.5):
            raise ValidationError(f"eps 必须在 (0, 1/2] 内，得到 {self.eps}")
        if not (self.eps_p > 0):
            raise ValidationError(f"eps_p 必须为正，得到 {self.eps_p}")
        if not (0 <= self.delta_p < 1):
            raise ValidationError(f"delta_p 必须在 [0, 1) 内，得到 {self.delta_p}")
        if self.command in ("pipeline", "bench") and self.delta_p <= 0:
            raise ValidationError("流水线需要 delta_p > 0")
        if not (0 <= self.seed < 2 ** 64):
            raise ValidationError(f"seed 必须是 64 位无符号整数，得到 {self.seed}")
        if self.repeats < 1 or self.workers < 1:
            raise ValidationError("repeats 和 workers 必须为正")
        if self.n < 1 or self.dim < 1:
            raise ValidationError("n 和 dim 必须为正")
        if self.d_prime is not None and self.d_prime < 1:
            raise ValidationError(f"d' 必须为正，得到 {self.d_prime}")
        return self

    def inputs(self) -> Dict:
        """写入报告的输入参数（不含输出路径与运行环境参数）"""
        return {
            'command': self.command,
            'input': self.input,
            'k': self.k,
            'eps': self.eps,
            'eps_p': self.eps_p,
            'delta_p': self.delta_p,
            'seed': self.seed,
            'repeats': self.repeats,
            'normalize': self.normalize,
            'd_prime': self.d_prime,
            'budget_split': list(self.budget_split),
            'n': self.n,
            'dim': self.dim
        }


def parse_budget_split(raw: str) -> Tuple[float, float, float]:
    """解析 "a,b,c" 形式的预算分配"""
    parts = [p.strip() for p in str(raw).split(",") if p.strip()]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as e:
        raise ValidationError(f"无法解析 budget-split: {raw}") from e
    if len(values) != 3:
        raise ValidationError(f"budget-split 需要三个数，得到 {raw}")
    return values


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    parser = argparse.ArgumentParser(
        prog="dp-kmedian",
        description="差分隐私欧氏 k-median：覆盖校验、流水线、预言机、机制检验与基准"
    )
    parser.add_argument("command", choices=COMMANDS, help="子命令")
    parser.add_argument("--input", default=None, help="CSV 数据文件")
    parser.add_argument("--output", default=None, help="JSON 报告路径，缺省打印到标准输出")
    parser.add_argument("--k", type=int, default=2, help="中心数")
    parser.add_argument("--eps", type=float, default=0.5, help="近似参数 eps，(0, 1/2]")
    parser.add_argument("--eps-p", dest="eps_p", type=float, default=1.0, help="隐私参数 eps_p")
    parser.add_argument("--delta-p", dest="delta_p", type=float, default=1e-6, help="隐私参数 delta_p")
    parser.add_argument("--seed", type=int, default=0, help="随机种子")
    parser.add_argument("--repeats", type=int, default=20, help="bench 重复次数")
    parser.add_argument("--normalize", action="store_true", help="平移到质心并缩放到单位球")
    parser.add_argument("--d-prime", dest="d_prime", type=int, default=None, help="覆盖投影维度")
    parser.add_argument("--budget-split", dest="budget_split", default=None,
                        help="步骤2、3、5的预算比例，如 0.4,0.2,0.4")
    parser.add_argument("--n", type=int, default=500, help="bench 合成数据点数")
    parser.add_argument("--dim", type=int, default=20, help="bench 合成数据维度")
    parser.add_argument("--log-level", dest="log_level", default=None, help="日志级别")
    parser.add_argument("--log-file", dest="log_file", default=None, help="日志文件")
    parser.add_argument("--workers", type=int, default=1, help="bench 并发线程数")
    return parser


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    """命令行参数 → 校验过的 RunSpec"""
    values = vars(args).copy()
    raw_split = values.pop("budget_split")
    spec = RunSpec(**values)
    if raw_split is not None:
        spec.budget_split = parse_budget_split(raw_split)
    return spec.validate()


def parse_run_spec(argv: Optional[Sequence[str]] = None) -> RunSpec:
    """解析并校验命令行"""
    return spec_from_args(build_parser().parse_args(argv))
