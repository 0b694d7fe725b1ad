#!/usr/bin/env python3
"""Solve an LP file with HiGHS and write `<name> <value>` solution lines.

Usage: highs_solve.py MODEL.lp SOLUTION.sol [TIME_LIMIT_SECONDS]

Intended as the external solver command for mmbp, e.g.

    mmbp bench ... --methods milp \
        --solver-cmd "python3 scripts/highs_solve.py {lp} {sol} {time}"

Requires the `highspy` package. Exits non-zero without writing a solution
when HiGHS does not report an optimal solution.
"""

import sys

import highspy


def main() -> int:
    if len(sys.argv) not in (3, 4):
        print(__doc__, file=sys.stderr)
        return 2
    lp_path, sol_path = sys.argv[1], sys.argv[2]
    limit = float(sys.argv[3]) if len(sys.argv) == 4 else 0.0

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    # exact comparisons downstream; do not stop at a gap
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if limit > 0:
        h.setOptionValue("time_limit", limit)
    if h.readModel(lp_path) != highspy.HighsStatus.kOk:
        print(f"cannot read {lp_path}", file=sys.stderr)
        return 1
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        print(f"status {h.modelStatusToString(h.getModelStatus())}", file=sys.stderr)
        return 1

    lp = h.getLp()
    values = h.getSolution().col_value
    with open(sol_path, "w") as out:
        for name, value in zip(lp.col_names_, values):
            out.write(f"{name} {value:.9f}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
