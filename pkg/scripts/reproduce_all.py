#!/usr/bin/env python3
"""Replay every bundled reference scenario and print pass/fail per line.

Exits 0 only when every scenario matches its recorded values.  Two
scenarios are expected to report diffs: the recorded unbalanced ex-post
claim and the recorded lexicographic-strategyproofness classification
both fail against the computed values (see the notes each case prints).
"""

import sys

from mudra.harness import REPRODUCE_CASE_IDS, reproduce


def main() -> int:
    all_ok = True
    for case_id in REPRODUCE_CASE_IDS:
        report = reproduce(case_id)
        all_ok &= report.ok
        print(f"[{'ok' if report.ok else 'DIFF'}] {case_id}")
        for line in report.lines:
            print(f"    {'PASS' if line.ok else 'FAIL'}  {line.label}")
            if line.detail and not line.ok:
                print(f"          {line.detail}")
        for note in report.notes:
            print(f"    note: {note}")
    print()
    print("all scenarios match" if all_ok else "some scenarios diff from recorded values")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
