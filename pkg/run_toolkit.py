"""
Command-line runner for the treespec toolkit.

Examples:
    python run_toolkit.py count --n 3
    python run_toolkit.py spectrum --dense --element '{"a":[2,1],"children":{"1":[1,2],"2":[0,0]}}'
    python run_toolkit.py sample --n 1 --count 7000 --seed 0
    python run_toolkit.py verify --n-cap 3
    python run_toolkit.py converge --n-min 1 --n-max 12 --samples 10000 --seed 0 --out convergence.csv
"""
import sys

from treespec.cli import main

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.stderr.write("\nInterrupted\n")
        sys.exit(130)
