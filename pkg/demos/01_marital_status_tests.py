"""Classic and permutation tests on the marital-status survey table.

The embedded 4x5 table cross-classifies 300 survey respondents by marital
status and education level.  Four of its twenty expected frequencies fall
below 5, which is exactly the regime where the chi-squared approximation
behind the classic Pearson and G tests becomes questionable.  This script
runs both classic tests, their permutation versions, and the USP test, and
prints everything side by side.

Run:  python3 demos/01_marital_status_tests.py [--B 999] [--seed 0]
"""

import argparse

import numpy as np

from usptest import PermutationConfig, expected_counts, get_dataset, run_test


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--B", type=int, default=999, help="permutations per test")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    dataset = get_dataset("marital")
    table = dataset.table
    print(f"dataset: {dataset.name}, shape {table.shape}, n = {table.n}")
    print(table.counts)

    expected = expected_counts(table)
    small = int(np.sum(expected < 5))
    print(f"\nexpected frequencies (rounded):\n{np.round(expected, 1)}")
    print(f"{small} of {expected.size} expected frequencies are below 5")

    config = PermutationConfig(B=args.B, alpha=0.05, seed=args.seed)
    runs = [
        ("pearson", "classic"),
        ("g", "classic"),
        ("pearson", "permutation"),
        ("g", "permutation"),
        ("usp", "permutation"),
    ]
    print(f"\n{'method':<8} {'mode':<12} {'statistic':>12} {'p-value':>10} reject")
    for method, mode in runs:
        r = run_test(table, method, mode, config)
        print(
            f"{r.method:<8} {r.mode:<12} {r.statistic:>12.6g} {r.p_value:>10.4g} "
            f"{r.reject}"
        )
    print(
        "\nAll five analyses reject independence at the 5% level here, but the"
        "\nUSP permutation p-value is an order of magnitude smaller than the"
        "\nclassic p-values, and it needs no large-sample approximation."
    )


if __name__ == "__main__":
    main()
