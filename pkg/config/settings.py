"""
差分隐私聚类配置文件
集中管理所有算法参数，便于维护和调整
"""

from loguru import logger


class ClusteringConfig:
    """聚类系统配置类"""

    # 降维参数
    JL_CONSTANT = 8.0              # d' = ceil(JL_CONSTANT * ln(max(k,2)) / eps^2)

    # 隐私预算分配（步骤2、3、5）
    BUDGET_SPLIT = (1 / 3, 1 / 3, 1 / 3)

    # 私有几何中位数参数
    GM_STEPS = 200                 # 噪声次梯度下降步数
    GM_TAIL_FRACTION = 1.0         # 参与平均的迭代比例，1.0 为全部迭代点

    # 私有双准则求解参数
    MAX_K_PRIME = 16               # k' 上限
    MAX_CANDIDATES = 512           # 候选中心上限
    LATTICE_BUILD_LIMIT = 200000   # 超过此上界不再枚举格点
    SWAP_ROUNDS_PER_CENTER = 10    # 交换步数 = 该值 * k'
    CANDIDATE_SCALES = 8           # 候选格点向原点加密的层数；抽样候选半径的二进尺度数
    DISCOVERY_FRACTION = 0.5       # 抽样模式下用于私有 Lloyd 候选发现的预算比例
    LLOYD_ROUNDS = 2               # 私有 Lloyd 轮数
    LLOYD_MIN_COUNT_SCALES = 4.0   # 噪声计数低于该倍数的 Laplace 尺度时不更新该簇心
    SWAP_KEEP_PRIOR = 0.01         # 抽样模式下每步交换的基础测度中“交换”的总质量为该值除以步数

    # 数值参数
    DEDUP_TOL = 1e-12              # 中心去重容差
    WEISZFELD_TOL = 1e-10          # Weiszfeld 收敛阈值
    WEISZFELD_MAX_ITER = 1000
    LOCAL_SEARCH_MAX_SWAPS = 1000

    # 精确预言机规模限制
    EXACT_ORACLE_MAX_N = 12
    EXACT_ORACLE_MAX_K = 3
    DISCRETE_ORACLE_BUDGET = 10 ** 6

    # 机制检验抽样次数
    MECHANISM_DRAWS = 100000

    # 日志与报告
    LOG_LEVEL = "INFO"
    REPORT_INDENT = 2

    @classmethod
    def update_config(cls, **kwargs):
        """动态更新配置参数"""
        for key, value in kwargs.items():
            if hasattr(cls, key):
                setattr(cls, key, value)
            else:
                logger.warning(f"未知配置参数 {key}")

    @classmethod
    def get_config_dict(cls):
        """获取所有配置参数的字典"""
        config = {}
        for attr in dir(cls):
            if not attr.startswith('_'):
                value = getattr(cls, attr)
                if not callable(value):
                    config[attr] = value
        return config


# 创建全局配置实例
config = ClusteringConfig()
