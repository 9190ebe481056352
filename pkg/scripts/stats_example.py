#!/usr/bin/env python3
"""Statistics pipeline walkthrough on the bundled reference weekly series.

The two four-week series below are published summary values from a
proprietary warehouse operation; they are reference inputs for the
aggregation pipeline, not something this simulator regenerates.  The
script prints each series' mean and 95% confidence interval, the relative
gap between the two totals, and the paired t-test over the weekly pairs.
"""

from __future__ import annotations

from picksim import gap, paired_test, summarize

SERIES_A = [103.0, 143.0, 122.0, 97.0]
SERIES_B = [148.0, 150.0, 129.0, 135.0]


def main() -> int:
    for name, series in (("A", SERIES_A), ("B", SERIES_B)):
        s = summarize(series)
        print(f"series {name}: weeks={series} total={sum(series):.0f}")
        print(f"  mean={s.mean:.2f} ci95=[{s.ci_low:.2f}, {s.ci_high:.2f}]")
    g = gap(sum(SERIES_A), sum(SERIES_B))
    print(f"gap of totals (B vs A): {g:.2f}%")
    t = paired_test(SERIES_A, SERIES_B)
    print(f"paired t-test: statistic={t.statistic:.4f} df={t.df} "
          f"p={t.p_value:.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
