"""
子命令模块
把 RunSpec 分发到库函数，写出 JSON 报告并映射退出码
"""

import math
from concurrent.futures import ThreadPoolExecutor
from math import comb
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import stats

from config import config
from cover import threshold_cover, verify_cover_bound, build_thresholds
from data import load_dataset, separated_mixture
from dp import PrivacyBudget, SeededRng, laplace_noise, exponential_mechanism
from geometry import Dataset, CenterSet, cost
from kmedian import (
    exact_kmedian_oracle, exact_discrete_kmedian, local_search_kmedian, weiszfeld
)
from monitor import RunMonitor, RunRecord, summarize_records
from pipeline import PipelineConfig, run_pipeline, nonprivate_baseline
from utils import (
    ClusteringError, ValidationError, DegenerateInstanceError,
    TIMING_KEY, dump_report, write_report, setup_logging
)
from .run_spec import RunSpec, build_parser, spec_from_args

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3

# bench 汇总使用的代价比阈值
BENCH_RATIO_THRESHOLD = 3.0


def _reference_solution(data: Dataset, k: int):
    """小实例用精确预言机，否则用以数据点为候选的局部搜索"""
    if data.n <= config.EXACT_ORACLE_MAX_N and k <= config.EXACT_ORACLE_MAX_K:
        return exact_kmedian_oracle(data, k), "exact_oracle"
    candidates = CenterSet.from_points(data.points, dim=data.dim)
    return local_search_kmedian(data, min(k, data.n), candidates), "local_search"


def cover_check(spec: RunSpec) -> Dict:
    """阈值覆盖代价界校验"""
    monitor = RunMonitor()
    data = load_dataset(spec.input, spec.normalize).dataset
    with monitor.stage("reference"):
        ref, solver = _reference_solution(data, spec.k)
    with monitor.stage("cover"):
        n = max(1, math.ceil(data.total_weight - 1e-9))
        R = ref.cost / data.total_weight
        S = threshold_cover(ref.centers, R, spec.eps, n)
        check = verify_cover_bound(data, ref.centers, S, spec.eps)

    return {
        'inputs': spec.inputs(),
        'reference_solver': solver,
        'reference_cost': ref.cost,
        'thresholds': build_thresholds(R, spec.eps, n).thresholds,
        'cover': check.to_dict(),
        TIMING_KEY: dict(monitor.stage_seconds)
    }


def pipeline(spec: RunSpec) -> Dict:
    """运行一次私有流水线并与非私有基线对比"""
    monitor = RunMonitor()
    loaded = load_dataset(spec.input, spec.normalize)
    data = loaded.dataset
    budget = PrivacyBudget(spec.eps_p, spec.delta_p)
    pipeline_config = PipelineConfig(k=spec.k, eps=spec.eps, d_prime_override=spec.d_prime,
                                     budget_split=spec.budget_split)

    centers, report = run_pipeline(data, pipeline_config, budget, SeededRng(spec.seed), monitor)
    with monitor.stage("baseline"):
        baseline = nonprivate_baseline(data, spec.k)

    # 在原始坐标下重算最终代价
    original = load_dataset(spec.input, normalize=False).dataset if spec.normalize else data
    original_centers = loaded.to_original(centers)
    final_cost = cost(original, CenterSet.from_points(original_centers, dim=original.dim))

    return {
        'inputs': spec.inputs(),
        'pipeline_config': pipeline_config.to_dict(),
        'declared_budget': budget.to_dict(),
        'pipeline': report.to_dict(),
        'centers': original_centers,
        'final_cost': final_cost,
        'final_cost_normalized': report.final_cost,
        'baseline_cost_normalized': baseline,
        'ratio_to_baseline': report.final_cost / baseline if baseline > 0 else None,
        'budget_ok': report.ledger.within(budget),
        TIMING_KEY: dict(monitor.stage_seconds)
    }


def oracle(spec: RunSpec) -> Dict:
    """精确预言机与局部搜索对比"""
    monitor = RunMonitor()
    data = load_dataset(spec.input, spec.normalize).dataset
    k = min(spec.k, data.n)
    candidates = CenterSet.from_points(data.points, dim=data.dim)

    continuous = None
    if data.n <= config.EXACT_ORACLE_MAX_N and k <= config.EXACT_ORACLE_MAX_K:
        with monitor.stage("exact_oracle"):
            continuous = exact_kmedian_oracle(data, k).cost
    discrete = None
    if comb(candidates.k, k) <= config.DISCRETE_ORACLE_BUDGET:
        with monitor.stage("exact_discrete"):
            discrete = exact_discrete_kmedian(data, candidates, k).cost
    with monitor.stage("local_search"):
        searched = local_search_kmedian(data, k, candidates)

    result = {
        'inputs': spec.inputs(),
        'k_used': k,
        'continuous_opt': continuous,
        'discrete_opt': discrete,
        'local_search_cost': searched.cost,
        'local_search_swaps': searched.iterations,
        'local_over_discrete': None,
        'discrete_ge_continuous': None,
        TIMING_KEY: dict(monitor.stage_seconds)
    }
    if discrete is not None and discrete > 0:
        result['local_over_discrete'] = searched.cost / discrete
    if discrete is not None and continuous is not None:
        result['discrete_ge_continuous'] = bool(discrete >= continuous - 1e-6)
    return result


def mechanisms(spec: RunSpec) -> Dict:
    """Laplace 矩、指数机制对数几率和 eps=0 均匀性的经验检验"""
    monitor = RunMonitor()
    draws = int(config.MECHANISM_DRAWS)
    root = SeededRng(spec.seed)

    with monitor.stage("laplace"):
        sample = laplace_noise(1.0, draws, root.spawn(0))

    with monitor.stage("exponential"):
        rng = root.spawn(1)
        picks = np.array([exponential_mechanism([0.0, 1.0], 1.0, spec.eps_p, rng) for _ in range(draws)])
        high = int(np.sum(picks == 1))
        low = draws - high
        log_odds = math.log(high / low) if high > 0 and low > 0 else float('inf')

    with monitor.stage("uniformity"):
        rng = root.spawn(2)
        scores = [0.0, 3.0, -2.0, 5.0]
        uniform_picks = [exponential_mechanism(scores, 1.0, 0.0, rng) for _ in range(draws)]
        counts = np.bincount(uniform_picks, minlength=len(scores))
        chi = stats.chisquare(counts)

    return {
        'inputs': spec.inputs(),
        'draws': draws,
        'laplace': {
            'scale': 1.0,
            'mean': float(sample.mean()),
            'variance': float(sample.var()),
            'expected_variance': 2.0
        },
        'exponential': {
            'scores': [0.0, 1.0],
            'sensitivity': 1.0,
            'eps': spec.eps_p,
            'log_odds': log_odds,
            'expected_log_odds': spec.eps_p / 2.0
        },
        'uniformity': {
            'counts': counts,
            'chi_square': float(chi.statistic),
            'p_value': float(chi.pvalue)
        },
        TIMING_KEY: dict(monitor.stage_seconds)
    }


def _bench_cell(spec: RunSpec, index: int, shared: Optional[Dataset]) -> Tuple[RunRecord, Dict]:
    """bench 的一个 (spec, seed) 单元，内部串行"""
    cell_rng = SeededRng(spec.seed).spawn(index)
    if shared is None:
        data, _ = separated_mixture(spec.n, spec.dim, spec.k, cell_rng.spawn(0))
    else:
        data = shared
    monitor = RunMonitor()
    budget = PrivacyBudget(spec.eps_p, spec.delta_p)
    pipeline_config = PipelineConfig(k=spec.k, eps=spec.eps, d_prime_override=spec.d_prime,
                                     budget_split=spec.budget_split)
    _, report = run_pipeline(data, pipeline_config, budget, cell_rng.spawn(1), monitor)
    with monitor.stage("baseline"):
        baseline = nonprivate_baseline(data, spec.k)
        single = weiszfeld(data.points, data.weights).objective
    spent = report.ledger.total()
    record = RunRecord(
        seed_key=f"{spec.seed}/{index}",
        final_cost=report.final_cost,
        baseline_cost=baseline,
        ratio=report.final_cost / baseline if baseline > 0 else float('inf'),
        eps_spent=spent.eps_p,
        delta_spent=spent.delta_p,
        k_prime=report.k_prime,
        d_prime=report.d_prime,
        single_center_cost=single
    )
    return record, dict(monitor.stage_seconds)


def bench(spec: RunSpec) -> Dict:
    """多种子重复运行流水线，汇总与非私有基线的代价比"""
    shared = load_dataset(spec.input, spec.normalize).dataset if spec.input else None
    aggregate = RunMonitor()
    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        results = list(pool.map(lambda i: _bench_cell(spec, i, shared), range(spec.repeats)))

    rows = []
    for record, timing in results:
        aggregate.record(record)
        rows.append({**record.to_dict(), TIMING_KEY: timing})

    return {
        'inputs': spec.inputs(),
        'data_source': spec.input if spec.input else "separated_mixture",
        'runs': rows,
        'summary': aggregate.get_summary(BENCH_RATIO_THRESHOLD)
    }


HANDLERS: Dict[str, Callable[[RunSpec], Dict]] = {
    "cover-check": cover_check,
    "pipeline": pipeline,
    "oracle": oracle,
    "mechanisms": mechanisms,
    "bench": bench
}


def run(spec: RunSpec) -> int:
    """
    执行一次子命令

    Returns:
        退出码：0 成功，2 参数或数据校验失败，3 退化实例；失败时不写输出文件
    """
    try:
        spec.validate()
        report = HANDLERS[spec.command](spec)
    except ValidationError as e:
        logger.error(f"校验失败: {e}")
        return EXIT_VALIDATION
    except DegenerateInstanceError as e:
        logger.error(f"退化实例，运行中止: {e}")
        return EXIT_DEGENERATE
    except ClusteringError as e:
        logger.error(f"运行失败: {e}")
        return EXIT_FAILURE

    if spec.output:
        write_report(report, spec.output)
        logger.info(f"报告已写入 {spec.output}")
    else:
        print(dump_report(report))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行入口"""
    args = build_parser().parse_args(argv)
    try:
        spec = spec_from_args(args)
    except ValidationError as e:
        setup_logging(args.log_level, args.log_file)
        logger.error(f"校验失败: {e}")
        return EXIT_VALIDATION
    setup_logging(spec.log_level, spec.log_file)
    return run(spec)
