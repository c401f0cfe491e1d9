"""Validate a saved report file against the published schema and summarize it.

usage: python3 scripts/check_reports.py reports.json
"""
import json
import sys
from collections import Counter

import jsonschema

from coblekit.cli import report_schema


def main(path):
    data = json.load(open(path))
    jsonschema.validate(data, report_schema())
    st = Counter(r["status"] for r in data)
    print(f"{len(data)} reports: " + ", ".join(f"{k} {v}" for k, v in sorted(st.items())))
    for r in data:
        if r["status"] != "pass":
            print(f"  {r['status']}: {r['check']}")
    return 0 if st.keys() <= {"pass"} else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
