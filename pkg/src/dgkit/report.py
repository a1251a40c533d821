"""Verification reports: named checks with a status and an optional witness."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"
UNRELIABLE = "boundary-unreliable"
STATUSES = (PASS, FAIL, INAPPLICABLE, UNRELIABLE)

SCHEMA_ID = "dgkit-report/1"


@dataclass
class CheckResult:
    name: str
    status: str
    witness: object = None
    detail: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError("unknown status %r" % (self.status,))

    @property
    def ok(self):
        return self.status != FAIL

    def to_json(self):
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def add(self, name, status, witness=None, detail=None):
        res = CheckResult(name, status, witness, detail)
        self.checks.append(res)
        return res

    def check(self, name, condition, witness=None, detail=None):
        return self.add(name, PASS if condition else FAIL,
                        None if condition else witness, detail)

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.name, c.status, c.witness, c.detail))
        return self

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    @property
    def passed(self):
        return bool(self.checks) and all(c.status == PASS for c in self.checks)

    def status_of(self, name):
        for c in self.checks:
            if c.name == name:
                return c.status
        raise KeyError(name)

    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    def counts(self):
        out = {s: 0 for s in STATUSES}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self):
        return {
            "schema": SCHEMA_ID,
            "suite": self.suite,
            "seed": self.seed,
            "params": jsonable(self.params),
            "checks": [c.to_json() for c in self.checks],
            "summary": self.counts(),
            "ok": self.ok,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def lines(self):
        for c in self.checks:
            tail = ""
            if c.status != PASS and c.witness is not None:
                tail = "  " + json.dumps(jsonable(c.witness))
            yield "%-20s %s%s" % (c.status.upper(), c.name, tail)

    def __str__(self):
        return "\n".join(self.lines())


def jsonable(x):
    """Best-effort conversion of witnesses (tuples, scalars, dicts) to JSON."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: jsonable(v)
                for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "suite", "seed", "params", "checks", "summary", "ok"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "suite": {"type": "string"},
        "seed": {"type": ["integer", "null"]},
        "params": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": list(STATUSES)},
                    "witness": {},
                    "detail": {"type": "string"},
                },
            },
        },
        "summary": {"type": "object"},
        "ok": {"type": "boolean"},
    },
}


def validate_report(doc):
    """Validate a parsed report (or a list of them) against REPORT_SCHEMA.

    Returns a list of problems; empty means valid.  Only the subset of JSON
    Schema used above is understood.
    """
    if isinstance(doc, list):
        out = []
        for i, d in enumerate(doc):
            out += ["[%d] %s" % (i, p) for p in validate_report(d)]
        return out
    problems = []
    if not isinstance(doc, dict):
        return ["report is not an object"]
    for key in REPORT_SCHEMA["required"]:
        if key not in doc:
            problems.append("missing key %r" % key)
    if doc.get("schema") != SCHEMA_ID:
        problems.append("wrong schema id")
    if not isinstance(doc.get("suite"), str):
        problems.append("suite must be a string")
    if doc.get("seed") is not None and not isinstance(doc.get("seed"), int):
        problems.append("seed must be an integer or null")
    if not isinstance(doc.get("ok"), bool):
        problems.append("ok must be boolean")
    checks = doc.get("checks")
    if not isinstance(checks, list):
        problems.append("checks must be a list")
    else:
        for i, c in enumerate(checks):
            if not isinstance(c, dict) or "name" not in c or "status" not in c:
                problems.append("check %d malformed" % i)
            elif c["status"] not in STATUSES:
                problems.append("check %d has unknown status %r" % (i, c["status"]))
    summary = doc.get("summary")
    if isinstance(summary, dict) and isinstance(checks, list):
        for s in STATUSES:
            n = sum(1 for c in checks if isinstance(c, dict) and c.get("status") == s)
            if summary.get(s) != n:
                problems.append("summary count for %s is wrong" % s)
    return problems
