"""Differential testing against external FFA solvers.

External solvers are plain executables run on a script file.  Their verdict
is compared with :func:`smtffa.solver.check_sat`; a ``sat`` model they print
is re-checked with the internal evaluator only, so nothing they report about
normalization is taken on trust.
"""

from __future__ import annotations

import json
import os
import random
import re
import shlex
import shutil
import subprocess
import tempfile
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from . import lexer
from .errors import FFAError
from .field import FieldSort
from .lexer import SList, Token, read_sexprs, tokenize
from .normalizer import literal_body
from .parser import _Reader, make_sort, parse, parse_literal
from .solver import (
    DEFAULT_BUDGET,
    SAT,
    UNKNOWN,
    check_sat,
    eval_term,
    naive_check_sat,
)
from .terms import print_term

AGREE = "agree"
MISMATCH = "verdict-mismatch"
MODEL_INVALID = "model-invalid"
EXTERNAL_ERROR = "external-error"
TIMEOUT = "timeout"
NORMALIZATION_WARNING = "normalization-warning"
SKIPPED = "skipped"

CLASSES = (AGREE, MISMATCH, MODEL_INVALID, EXTERNAL_ERROR, TIMEOUT, NORMALIZATION_WARNING, SKIPPED)

DEFAULT_TIMEOUT = 10.0


@dataclass(frozen=True)
class ExternalSolverConfig:
    label: str
    command: tuple[str, ...]
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self):
        n = sum(arg.count("{file}") for arg in self.command)
        if n != 1:
            raise ValueError(f"solver command must contain exactly one {{file}} placeholder, found {n}")

    @classmethod
    def parse(cls, spec: str, timeout: float = DEFAULT_TIMEOUT) -> ExternalSolverConfig:
        """``LABEL=CMD ARGS...``; ``{file}`` is appended when absent."""
        label, sep, cmd = spec.partition("=")
        if not sep or not label or not cmd.strip():
            raise ValueError(f"expected LABEL=COMMAND, got {spec!r}")
        argv = shlex.split(cmd)
        if not any("{file}" in a for a in argv):
            argv.append("{file}")
        return cls(label, tuple(argv), timeout)

    def argv(self, path: str) -> list[str]:
        return [a.replace("{file}", path) for a in self.command]

    def available(self) -> bool:
        exe = self.command[0]
        return bool(shutil.which(exe)) or os.path.isfile(exe) and os.access(exe, os.X_OK)


KNOWN_SOLVERS = {
    "cvc5": ("cvc5", "--lang=smt2", "--produce-models", "{file}"),
    "yices": ("yices-smt2", "{file}"),
}


def detect_solvers(timeout: float = DEFAULT_TIMEOUT) -> list[ExternalSolverConfig]:
    """Configs for known solvers found on ``PATH``."""
    return [
        ExternalSolverConfig(label, cmd, timeout)
        for label, cmd in KNOWN_SOLVERS.items()
        if shutil.which(cmd[0])
    ]


@dataclass
class ExternalResult:
    status: str  # ok | timeout | spawn-error | unparseable
    verdict: str | None = None
    model_text: str | None = None
    detail: str = ""


_VERDICT = re.compile(r"^\s*(sat|unsat|unknown)\s*$", re.MULTILINE)


def parse_solver_output(text: str) -> tuple[str | None, str | None]:
    """First verdict line and the first parenthesized block after it."""
    m = _VERDICT.search(text)
    if m is None:
        return None, None
    rest = text[m.end() :]
    start = rest.find("(")
    if start < 0:
        return m.group(1), None
    depth = 0
    for i, ch in enumerate(rest[start:], start):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                block = rest[start : i + 1]
                if block.lstrip("( \n").startswith("error"):
                    return m.group(1), None
                return m.group(1), block
    return m.group(1), None


def run_external(path: str, cfg: ExternalSolverConfig) -> ExternalResult:
    """Run one solver on one file; the process is killed at the timeout."""
    try:
        proc = subprocess.run(
            cfg.argv(path),
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            timeout=cfg.timeout,
        )
    except subprocess.TimeoutExpired:
        return ExternalResult(TIMEOUT, detail=f"no answer within {cfg.timeout}s")
    except OSError as exc:
        return ExternalResult("spawn-error", detail=str(exc))
    verdict, model = parse_solver_output(proc.stdout)
    if verdict is None:
        tail = (proc.stderr or proc.stdout).strip().splitlines()[-1:] or [""]
        return ExternalResult("unparseable", detail=f"exit {proc.returncode}: {tail[0][:200]}")
    return ExternalResult("ok", verdict, model)


# ------------------------------------------------------------ model checking


@dataclass
class ModelCheck:
    valid: bool
    normalized: bool = True
    reason: str = ""

    def __bool__(self):
        return self.valid and self.normalized


# Legacy value spelling printed by some solvers, e.g. #f-2m5.
_LEGACY = re.compile(r"#f(-?\d+)m(\d+)")


def validate_external_model(model_text: str, script) -> ModelCheck:
    """Re-check an external ``sat`` model with the internal evaluator.

    ``script`` is a typed script or SMT-LIB text.  Every declared constant
    must be defined; every assertion must evaluate to true.  Values that are
    not normalized indexed literals make the check non-normalized (a
    warning), not invalid.
    """
    if isinstance(script, str):
        script = parse(script)
    normalized = True
    notes = []

    def legacy(m):
        nonlocal normalized
        normalized = False
        notes.append(f"non-standard value {m.group(0)}")
        return f"(_ ff{m.group(1)} {m.group(2)})"

    text = _LEGACY.sub(legacy, model_text)
    try:
        exprs = read_sexprs(tokenize(text))
    except FFAError as exc:
        return ModelCheck(False, reason=f"unparseable model: {exc}")
    if len(exprs) != 1 or not isinstance(exprs[0], SList):
        return ModelCheck(False, reason="model is not a single s-expression")
    items = list(exprs[0].items)
    if items and isinstance(items[0], Token) and items[0].value == "model":
        items = items[1:]
    reader = _Reader()
    values = {}
    for d in items:
        try:
            name, value, ok = _model_entry(d, reader)
        except FFAError as exc:
            return ModelCheck(False, reason=f"bad model entry: {exc}")
        if not ok:
            normalized = False
            notes.append(f"{name} is not a normalized indexed literal")
        values[name] = value
    for decl in script.declarations():
        if decl.name not in values:
            return ModelCheck(False, normalized, f"model omits {decl.name}")
        if values[decl.name].sort != decl.sort:
            return ModelCheck(False, normalized, f"{decl.name} has the wrong sort")
    for t in script.assertions():
        try:
            holds = eval_term(t, values)
        except FFAError as exc:
            return ModelCheck(False, normalized, str(exc))
        if holds is not True:
            return ModelCheck(False, normalized, f"assertion fails: {print_term(t)}")
    return ModelCheck(True, normalized, "; ".join(notes))


def _model_entry(d, reader: _Reader):
    if not isinstance(d, SList) or len(d) != 5 or not isinstance(d[0], Token) or d[0].value != "define-fun":
        raise FFAError("expected (define-fun name () sort value)", getattr(d, "loc", None))
    name = d[1].value
    if not isinstance(d[2], SList) or d[2].items:
        raise FFAError("model functions must be nullary", d[2].loc)
    sort = reader.sort(d[3])
    v = d[4]
    if isinstance(v, SList) and len(v) >= 3 and isinstance(v[1], Token) and v[1].kind == lexer.LITERAL:
        head = v[0].value if isinstance(v[0], Token) else ""
        if head == "_":
            idx = [int(x.text) for x in v.items[2:] if isinstance(x, Token) and x.kind == lexer.NUMERAL]
            lit_sort = make_sort(idx[0], idx[1] if len(idx) > 1 else None, v.loc)
            indexed = True
        elif head == "as":
            lit_sort = reader.sort(v[2])
            indexed = False
        else:
            raise FFAError(f"unexpected value form for {name}", v.loc)
        if lit_sort != sort:
            raise FFAError(f"value of {name} has sort {lit_sort}, declared {sort}", v.loc)
        value = parse_literal(v[1].text, sort, v[1].loc)
        return name, value, indexed and v[1].text == literal_body(value)
    raise FFAError(f"value of {name} is not a finite field literal", getattr(v, "loc", None))


# ------------------------------------------------------------------ fuzzing


@dataclass(frozen=True)
class FuzzParams:
    max_constants: int = 3
    max_depth: int = 2
    sorts: tuple = ((3, 1), (5, 1))
    max_assertions: int = 3
    reciprocal_weight: float = 0.3

    def __post_init__(self):
        if self.max_constants < 1 or self.max_depth < 0 or self.max_assertions < 1:
            raise ValueError("fuzz parameters out of range")
        if not self.sorts:
            raise ValueError("empty sort pool")
        for p, n in self.sorts:
            FieldSort(p, n)
        if not 0.25 <= self.reciprocal_weight <= 1:
            raise ValueError("reciprocal weight must be in [0.25, 1]")


def _alias(p, n):
    return f"F{p}" if n == 1 else f"F{p}_{n}"


class _Gen:
    def __init__(self, rng: random.Random, params: FuzzParams, consts):
        self.rng = rng
        self.params = params
        self.consts = consts  # sort -> [names]

    def literal(self, sort):
        p, n = sort
        r = self.rng
        k = 1 if n == 1 else r.randint(1, n)
        span = 2 * p + 3
        cs = [r.randint(-span, span) for _ in range(k)]
        if r.random() < 0.1:
            cs[0] += r.choice([-1, 1]) * r.randint(p, 10**12)
        body = "ff" + ".".join(str(c) for c in cs)
        if r.random() < 0.5:
            idx = f"{p}" if n == 1 else f"{p} {n}"
            return f"(_ {body} {idx})"
        return f"(as {body} {_alias(p, n)})"

    def leaf(self, sort):
        names = self.consts.get(sort)
        if names and self.rng.random() < 0.75:
            return self.rng.choice(names)
        return self.literal(sort)

    def field_term(self, sort, depth):
        r = self.rng
        if depth <= 0 or r.random() < 0.25:
            return self.leaf(sort)
        w = self.params.reciprocal_weight
        if r.random() < w:
            if r.random() < 0.5:
                return f"(ff.recip {self.field_term(sort, depth - 1)})"
            return f"(ff.div {self.field_term(sort, depth - 1)} {self.field_term(sort, depth - 1)})"
        op = r.choice(["ff.add", "ff.mul", "ff.sub", "ff.neg", "ff.add", "ff.mul", "ite"])
        if op == "ff.neg":
            return f"(ff.neg {self.field_term(sort, depth - 1)})"
        if op == "ite":
            return (
                f"(ite {self.atom(depth - 1)} {self.field_term(sort, depth - 1)} "
                f"{self.field_term(sort, depth - 1)})"
            )
        arity = 2 if op == "ff.sub" or r.random() < 0.7 else 3
        args = " ".join(self.field_term(sort, depth - 1) for _ in range(arity))
        return f"({op} {args})"

    def pick_sort(self):
        with_consts = [s for s in self.params.sorts if self.consts.get(s)]
        return self.rng.choice(with_consts or list(self.params.sorts))

    def atom(self, depth):
        sort = self.pick_sort()
        lhs = self.field_term(sort, depth)
        rhs = self.field_term(sort, depth)
        if self.rng.random() < 0.1:
            return f"(distinct {lhs} {rhs})"
        return f"(= {lhs} {rhs})"

    def formula(self, depth):
        r = self.rng
        x = r.random()
        if depth <= 0 or x < 0.55:
            return self.atom(self.params.max_depth)
        if x < 0.65:
            return f"(not {self.formula(depth - 1)})"
        if x < 0.8:
            return f"(and {self.formula(depth - 1)} {self.formula(depth - 1)})"
        if x < 0.9:
            return f"(or {self.formula(depth - 1)} {self.formula(depth - 1)})"
        if x < 0.95:
            return f"(=> {self.formula(depth - 1)} {self.formula(depth - 1)})"
        sort = self.pick_sort()
        name = f"t{r.randint(0, 9)}"
        inner = _Gen(r, self.params, {**self.consts, sort: (self.consts.get(sort) or []) + [name]})
        return f"(let (({name} {self.field_term(sort, 1)})) {inner.atom(self.params.max_depth)})"


def fuzz_generate(seed: int, params: FuzzParams | None = None) -> str:
    """Deterministic, well-sorted QF_FFA script text for ``seed``."""
    params = params or FuzzParams()
    rng = random.Random(seed)
    sorts = [tuple(s) for s in params.sorts]
    nconst = rng.randint(1, params.max_constants)
    consts: dict[tuple, list[str]] = {}
    decls = []
    for i in range(nconst):
        s = rng.choice(sorts)
        consts.setdefault(s, []).append(f"x{i}")
        decls.append((f"x{i}", s))
    gen = _Gen(rng, params, consts)
    lines = ["(set-logic QF_FFA)", "(set-option :produce-models true)"]
    for p, n in sorts:
        idx = f"{p}" if n == 1 else f"{p} {n}"
        lines.append(f"(define-sort {_alias(p, n)} () (_ FiniteField {idx}))")
    for name, (p, n) in decls:
        lines.append(f"(declare-fun {name} () {_alias(p, n)})")
    for _ in range(rng.randint(1, params.max_assertions)):
        lines.append(f"(assert {gen.formula(2)})")
    lines += ["(check-sat)", "(get-model)"]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ reports


@dataclass
class DiffRecord:
    label: str
    solver: str
    internal: str
    external: str
    classification: str
    seed: int | None = None
    path: str | None = None
    detail: str = ""

    def line(self) -> str:
        label = f"{self.label}/{self.solver}" if self.solver else self.label
        return f"{label}  internal={self.internal} external={self.external} class={self.classification}"


@dataclass
class DiffReport:
    records: list[DiffRecord] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add(self, rec: DiffRecord) -> None:
        with self._lock:
            self.records.append(rec)

    def counts(self) -> Counter:
        return Counter(r.classification for r in self.records)

    @property
    def has_mismatch(self) -> bool:
        return any(r.classification == MISMATCH for r in self.records)

    def format_text(self) -> str:
        lines = [r.line() for r in self.records]
        c = self.counts()
        lines.append(f"; total {len(self.records)}")
        for cls in CLASSES:
            if c.get(cls):
                lines.append(f"; {cls} {c[cls]}")
        return "\n".join(lines) + "\n"

    def format_jsonl(self) -> str:
        keys = ("label", "solver", "seed", "path", "internal", "external", "classification", "detail")
        return "".join(json.dumps({k: asdict(r)[k] for k in keys}) + "\n" for r in self.records)


@dataclass
class DiffCase:
    label: str
    text: str
    seed: int | None = None
    path: str | None = None


def classify(internal: str, ext: ExternalResult, check: ModelCheck | None) -> str:
    if ext.status == TIMEOUT:
        return TIMEOUT
    if ext.status != "ok":
        return EXTERNAL_ERROR
    if internal == UNKNOWN or ext.verdict == UNKNOWN:
        return AGREE
    if internal != ext.verdict:
        return MISMATCH
    if ext.verdict == SAT and check is not None:
        if not check.valid:
            return MODEL_INVALID
        if not check.normalized:
            return NORMALIZATION_WARNING
    return AGREE


def _diff_one(case: DiffCase, solver: ExternalSolverConfig | None, budget: int) -> DiffRecord:
    script = parse(case.text)
    internal = check_sat(script, budget)
    if solver is None:
        oracle = naive_check_sat(script, budget)
        ext = ExternalResult("ok", oracle.verdict)
        check = None
        if oracle.model is not None:
            vals = oracle.model.values
            check = ModelCheck(all(eval_term(t, vals) is True for t in script.assertions()))
        name = "naive"
    else:
        name = solver.label
        if case.path is not None:
            ext = run_external(case.path, solver)
        else:
            with tempfile.TemporaryDirectory(prefix="smtffa-") as tmp:
                path = os.path.join(tmp, "query.smt2")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(case.text)
                ext = run_external(path, solver)
        check = None
        if ext.status == "ok" and ext.verdict == SAT:
            if ext.model_text is None:
                check = ModelCheck(False, reason="sat without a model")
            else:
                check = validate_external_model(ext.model_text, script)
    cls = classify(internal.verdict, ext, check)
    detail = ext.detail or (check.reason if check is not None else "")
    return DiffRecord(
        case.label,
        name,
        internal.verdict,
        ext.verdict or ext.status,
        cls,
        case.seed,
        case.path,
        detail,
    )


def run_diff(
    cases: list[DiffCase],
    solvers: list[ExternalSolverConfig] | None = None,
    internal_only: bool = False,
    budget: int = DEFAULT_BUDGET,
    parallelism: int = 4,
) -> DiffReport:
    """Compare the internal solver with each configured solver on every case.

    With ``internal_only`` the comparison partner is the naive enumeration
    oracle.  Solvers whose executable cannot be found produce ``skipped``
    records instead of errors.
    """
    report = DiffReport()
    jobs = []
    if internal_only:
        jobs = [(c, None) for c in cases]
    else:
        for s in solvers or []:
            if not s.available():
                for c in cases:
                    report.add(DiffRecord(c.label, s.label, "-", "-", SKIPPED, c.seed, c.path, "executable not found"))
                continue
            jobs.extend((c, s) for c in cases)
    if not jobs:
        return report
    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        for rec in pool.map(lambda job: _diff_one(job[0], job[1], budget), jobs):
            report.add(rec)
    return report


def seed_cases(start: int, stop: int, params: FuzzParams | None = None) -> list[DiffCase]:
    return [DiffCase(f"seed-{s}", fuzz_generate(s, params), seed=s) for s in range(start, stop)]


def corpus_cases(directory: str) -> list[DiffCase]:
    out = []
    for name in sorted(os.listdir(directory)):
        if name.endswith(".smt2"):
            path = os.path.join(directory, name)
            with open(path, encoding="utf-8") as fh:
                out.append(DiffCase(name, fh.read(), path=path))
    return out
