#!/usr/bin/env python3
"""Run the full rule-by-axiom sweep and print the classification table.

Exits 0 when every cell matches its expected sign, 1 otherwise.
"""

import argparse
import sys

from mudra.harness import RULE_NAMES, table1_sweep


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--guard", type=int, default=None, help="profile cap override")
    args = parser.parse_args()

    report = table1_sweep(cap=args.guard, workers=args.workers)

    properties = []
    for cell in report.cells:
        if cell.property_name not in properties:
            properties.append(cell.property_name)
    name_width = max(len(p) for p in properties)
    header = "property".ljust(name_width) + "  " + "  ".join(
        r.rjust(8) for r in RULE_NAMES
    )
    print(header)
    for prop in properties:
        row = [prop.ljust(name_width)]
        for rule in RULE_NAMES:
            cell = report.cell(rule, prop)
            shown = "-" if cell.observed == "counterexample-found" else "+"
            row.append((shown if cell.matched else shown + "!").rjust(8))
        print("  ".join(row))

    print()
    for cell in report.cells:
        if cell.witness_orders is not None:
            witness = " | ".join(",".join(o) for o in cell.witness_orders)
            print(f"counterexample {cell.rule} x {cell.property_name} "
                  f"[{cell.domain}]: {witness}")
    for cell in report.discrepancies:
        print(f"DISCREPANCY: {cell.rule} x {cell.property_name} expected "
              f"'{cell.expected}' but observed {cell.observed}")
    print("wall-clock per rule (576 outputs): "
          + ", ".join(f"{rule} {secs:.2f}s" for rule, secs in report.rule_seconds))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
