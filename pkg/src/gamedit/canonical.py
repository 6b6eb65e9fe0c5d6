"""Canonical JSON encoding shared by file formats and commit hashing.

Rules: UTF-8, no NaN/Infinity, floats as Python's shortest round-trip
decimal, object keys in the fixed order the builders emit them (never
re-sorted).  Compact form (no whitespace) is used for hashing; an indented
form is used for files.  Two semantically equal documents therefore
serialize to identical bytes.
"""

from __future__ import annotations

import json

from .edits import EditDiff


def canonical_json(obj, *, indent: int | None = None) -> str:
    separators = (",", ": ") if indent is not None else (",", ":")
    return json.dumps(obj, ensure_ascii=False, allow_nan=False,
                      indent=indent, separators=separators, sort_keys=False)


def diff_to_jsonable(diff: EditDiff) -> dict:
    return {
        "term": diff.term_name,
        "bins": [int(i) for i in diff.bin_indices],
        "old": [float(v) for v in diff.old_scores],
        "new": [float(v) for v in diff.new_scores],
    }


def diff_from_jsonable(doc: dict) -> EditDiff:
    return EditDiff(
        term_name=doc["term"],
        bin_indices=tuple(int(i) for i in doc["bins"]),
        old_scores=tuple(float(v) for v in doc["old"]),
        new_scores=tuple(float(v) for v in doc["new"]),
    )
