"""
差分隐私 k-median 程序入口
用法示例:
    python main.py cover-check --input data/fixtures/twelve_points.csv --k 3 --eps 0.5
    python main.py pipeline --input points.csv --normalize --k 4 --eps-p 1 --delta-p 1e-6 --seed 7
    python main.py bench --k 4 --eps-p 100 --repeats 20 --workers 4 --output bench.json
"""

import sys

from cli import main


if __name__ == "__main__":
    sys.exit(main())
