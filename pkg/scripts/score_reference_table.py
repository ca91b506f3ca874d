#!/usr/bin/env python3
"""Rank the bundled reference profiles cohort by cohort.

Shows the sustainability ranking for the 15-frame and 6-frame cohorts, and
with --compare-strict also prints how the marks move when boundary values
are scored with open intervals instead of the default half-open buckets.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from salientvd.scoring import format_ranking, load_reference_profiles, rank


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cohort", type=int, choices=[15, 6], default=None,
                        help="limit to one input_frames cohort (default: both)")
    parser.add_argument("--compare-strict", action="store_true",
                        help="also print strict boundary scoring next to the default")
    args = parser.parse_args()

    profiles = load_reference_profiles()
    cohorts = [args.cohort] if args.cohort else [15, 6]
    for frames in cohorts:
        members = [p for p in profiles if p.input_frames == frames]
        print(f"== {frames}-frame cohort ==")
        print(format_ranking(rank(members)), end="")
        if args.compare_strict:
            print("-- strict boundary scoring --")
            print(format_ranking(rank(members, strict=True)), end="")
        print()


if __name__ == "__main__":
    main()
