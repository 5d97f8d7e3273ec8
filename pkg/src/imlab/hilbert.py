"""The ten logics, their axiom-schema signatures, and a Hilbert-style
derivation/entailment checker.

"All intuitionistic tautologies" is realized as a fixed finite IPC schema
basis (implication, conjunction, disjunction, ex falso) closed under modus
ponens; this generates the same theorems and keeps step checking decidable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Optional, Sequence, Union

from .formula import (
    And, Box, Formula, Implies, Or, Prop, Bottom,
    instantiate, is_metavar, parse,
)

__all__ = [
    "Logic", "Schema", "SCHEMAS", "logic_signature", "is_diamond_regular",
    "is_axiom_instance", "match_schema", "AxiomInstance", "MP", "Nec",
    "Step", "Derivation", "EntailmentCertificate", "Verdict",
    "check_derivation", "check_entailment",
    "parse_derivation", "parse_entailment", "format_derivation",
]


class Logic(enum.Enum):
    CK4 = "CK4"
    IK4 = "IK4"
    K4I = "K4I"
    GK4 = "GK4"
    GK4C = "GK4c"
    CS4 = "CS4"
    IS4 = "IS4"
    S4I = "S4I"
    GS4 = "GS4"
    GS4C = "GS4c"

    @classmethod
    def from_name(cls, name: str) -> "Logic":
        for member in cls:
            if member.value.lower() == name.lower():
                return member
        raise ValueError(f"unknown logic {name!r} (choose from "
                         f"{', '.join(m.value for m in cls)})")


class Schema(NamedTuple):
    name: str
    pattern: Formula


_IPC = [
    ("a1", "A -> (B -> A)"),
    ("a2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
    ("and-i", "A -> (B -> A & B)"),
    ("and-e1", "A & B -> A"),
    ("and-e2", "A & B -> B"),
    ("or-i1", "A -> A | B"),
    ("or-i2", "B -> A | B"),
    ("or-e", "(A -> C) -> ((B -> C) -> (A | B -> C))"),
    ("efq", "false -> A"),
]

_MODAL = [
    ("kbox", "[](A -> B) -> ([]A -> []B)"),
    ("kdia", "[](A -> B) -> (<>A -> <>B)"),
    ("4box", "[]A -> [][]A"),
    ("4dia", "<><>A -> <>A"),
    ("n", "!<>false"),
    ("tbox", "[]A -> A"),
    ("tdia", "A -> <>A"),
    ("fs", "(<>A -> []B) -> [](A -> B)"),
    ("dp", "<>(A | B) -> <>A | <>B"),
    ("rv", "[](A | B) -> []A | <>B"),
    ("gd", "(A -> B) | (B -> A)"),
]

SCHEMAS: dict[str, Schema] = {
    name: Schema(name, parse(text)) for name, text in _IPC + _MODAL
}

#: fixed global order; first-match axiom recognition follows it
_SCHEMA_ORDER = tuple(name for name, _ in _IPC + _MODAL)

_IPC_NAMES = tuple(name for name, _ in _IPC)
_CK4_NAMES = _IPC_NAMES + ("kbox", "kdia", "4box", "4dia", "n")

_EXTENSIONS: dict[Logic, tuple[str, ...]] = {
    Logic.CK4: (),
    Logic.IK4: ("fs", "dp"),
    Logic.K4I: ("rv", "dp"),
    Logic.GK4: ("fs", "dp", "gd"),
    Logic.GK4C: ("fs", "dp", "gd", "rv"),
    Logic.CS4: ("tbox", "tdia"),
    Logic.IS4: ("tbox", "tdia", "fs", "dp"),
    Logic.S4I: ("tbox", "tdia", "rv", "dp"),
    Logic.GS4: ("tbox", "tdia", "fs", "dp", "gd"),
    Logic.GS4C: ("tbox", "tdia", "fs", "dp", "gd", "rv"),
}


def logic_signature(logic: Logic, include_n: bool = True) -> tuple[Schema, ...]:
    """Axiom schemas of the logic, in the fixed recognition order.

    ``include_n=False`` drops the infallibility axiom; no verification
    suite uses that variant.
    """
    names = set(_CK4_NAMES) | set(_EXTENSIONS[logic])
    if not include_n:
        names.discard("n")
    return tuple(SCHEMAS[name] for name in _SCHEMA_ORDER if name in names)


def is_diamond_regular(logic: Logic) -> bool:
    return "dp" in _EXTENSIONS[logic]


def match_schema(pattern: Formula, f: Formula,
                 binding: Optional[dict[str, Formula]] = None) -> Optional[dict[str, Formula]]:
    """Second-order pattern match: metavariables bind to arbitrary formulas."""
    if binding is None:
        binding = {}
    if isinstance(pattern, Prop) and is_metavar(pattern.name):
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = f
            return binding
        return binding if bound == f else None
    if isinstance(pattern, Bottom):
        return binding if isinstance(f, Bottom) else None
    if isinstance(pattern, Prop):
        return binding if f == pattern else None
    if type(pattern) is not type(f):
        return None
    if isinstance(pattern, (And, Or, Implies)):
        binding = match_schema(pattern.left, f.left, binding)
        if binding is None:
            return None
        return match_schema(pattern.right, f.right, binding)
    # Box | Diamond
    return match_schema(pattern.body, f.body, binding)


def is_axiom_instance(f: Formula, logic: Logic) -> Optional[tuple[str, dict[str, Formula]]]:
    """First matching schema of the logic's signature, with its binding."""
    for schema in logic_signature(logic):
        binding = match_schema(schema.pattern, f)
        if binding is not None:
            return schema.name, binding
    return None


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomInstance:
    schema: str
    binding: Optional[Mapping[str, Formula]] = None


@dataclass(frozen=True)
class MP:
    minor: int  # index of the antecedent step
    major: int  # index of the implication step


@dataclass(frozen=True)
class Nec:
    premise: int


Justification = Union[AxiomInstance, MP, Nec]


@dataclass(frozen=True)
class Step:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Step, ...]

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula


@dataclass(frozen=True)
class EntailmentCertificate:
    premises: tuple[Formula, ...]
    conclusion: Formula
    derivation: Derivation


@dataclass(frozen=True)
class Verdict:
    ok: bool
    step: Optional[int] = None
    message: str = ""


def check_derivation(d: Derivation, logic: Logic) -> Verdict:
    """Accept iff every step is an axiom instance of the logic or follows by
    MP/Nec from earlier steps; report the first offending step."""
    if not d.steps:
        return Verdict(False, None, "empty derivation")
    for i, step in enumerate(d.steps):
        j = step.justification
        if isinstance(j, AxiomInstance):
            schema = SCHEMAS.get(j.schema)
            if schema is None:
                return Verdict(False, i, f"unknown schema {j.schema!r}")
            if schema.name not in {s.name for s in logic_signature(logic)}:
                return Verdict(False, i, f"schema {j.schema} is not in {logic.value}")
            if j.binding is not None:
                if instantiate(schema.pattern, j.binding) != step.formula:
                    return Verdict(False, i, f"formula is not the stated {j.schema} instance")
            elif match_schema(schema.pattern, step.formula) is None:
                return Verdict(False, i, "not an axiom instance")
        elif isinstance(j, MP):
            if not (0 <= j.minor < i and 0 <= j.major < i):
                return Verdict(False, i, "mp index out of range")
            major = d.steps[j.major].formula
            if not isinstance(major, Implies):
                return Verdict(False, i, "mp major premise is not an implication")
            if major.left != d.steps[j.minor].formula:
                return Verdict(False, i, "mp antecedent mismatch")
            if major.right != step.formula:
                return Verdict(False, i, "mp conclusion mismatch")
        elif isinstance(j, Nec):
            if not 0 <= j.premise < i:
                return Verdict(False, i, "nec index out of range")
            if step.formula != Box(d.steps[j.premise].formula):
                return Verdict(False, i, "nec conclusion is not the boxed premise")
        else:
            return Verdict(False, i, f"unknown justification {j!r}")
    return Verdict(True)


def conjoin(premises: Sequence[Formula]) -> Formula:
    """Left-nested conjunction, in the listed order."""
    if not premises:
        raise ValueError("no premises to conjoin")
    acc = premises[0]
    for p in premises[1:]:
        acc = And(acc, p)
    return acc


def check_entailment(cert: EntailmentCertificate, logic: Logic) -> Verdict:
    inner = check_derivation(cert.derivation, logic)
    if not inner.ok:
        return inner
    if cert.premises:
        expected: Formula = Implies(conjoin(cert.premises), cert.conclusion)
    else:
        expected = cert.conclusion
    if cert.derivation.conclusion != expected:
        return Verdict(False, len(cert.derivation.steps) - 1, "conclusion mismatch")
    return Verdict(True)


# ---------------------------------------------------------------------------
# File format: one step per line,
#   <formula> ; axiom <schema-name> [M=<formula>, ...]
#   <formula> ; mp <i> <j>
#   <formula> ; nec <i>
# with zero-based indices and '#' comments.
# ---------------------------------------------------------------------------

class DerivationParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _parse_step(lineno: int, line: str) -> Step:
    head, sep, just = line.rpartition(";")
    if not sep:
        raise DerivationParseError(lineno, "missing ';' separator")
    try:
        formula = parse(head.strip())
    except ValueError as exc:
        raise DerivationParseError(lineno, f"bad formula: {exc}") from exc
    words = just.strip().split(None, 2)
    if not words:
        raise DerivationParseError(lineno, "missing justification")
    kind = words[0].lower()
    if kind == "axiom":
        if len(words) < 2:
            raise DerivationParseError(lineno, "axiom needs a schema name")
        binding = None
        if len(words) == 3:
            binding = {}
            for item in words[2].split(","):
                var, eq, text = item.partition("=")
                if not eq or not is_metavar(var.strip()):
                    raise DerivationParseError(lineno, f"bad binding item {item.strip()!r}")
                try:
                    binding[var.strip()] = parse(text)
                except ValueError as exc:
                    raise DerivationParseError(lineno, f"bad binding formula: {exc}") from exc
        return Step(formula, AxiomInstance(words[1], binding))
    if kind == "mp":
        if len(words) != 3 or not words[1].isdigit():
            raise DerivationParseError(lineno, "mp needs two step indices")
        parts = words[2].split()
        if len(parts) != 1 or not parts[0].isdigit():
            raise DerivationParseError(lineno, "mp needs two step indices")
        return Step(formula, MP(int(words[1]), int(parts[0])))
    if kind == "nec":
        if len(words) != 2 or not words[1].isdigit():
            raise DerivationParseError(lineno, "nec needs one step index")
        return Step(formula, Nec(int(words[1])))
    raise DerivationParseError(lineno, f"unknown justification {kind!r}")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_derivation(text: str) -> Derivation:
    steps = [_parse_step(lineno, line) for lineno, line in _content_lines(text)]
    return Derivation(tuple(steps))


def parse_entailment(text: str) -> EntailmentCertificate:
    """Certificate file: ``premise <formula>`` lines, one ``conclusion
    <formula>`` line, then derivation steps."""
    premises: list[Formula] = []
    conclusion: Optional[Formula] = None
    steps: list[Step] = []
    for lineno, line in _content_lines(text):
        word = line.split(None, 1)[0].lower()
        if word in ("premise", "conclusion") and ";" not in line:
            rest = line.split(None, 1)[1] if len(line.split(None, 1)) > 1 else ""
            try:
                f = parse(rest)
            except ValueError as exc:
                raise DerivationParseError(lineno, f"bad formula: {exc}") from exc
            if word == "premise":
                premises.append(f)
            elif conclusion is not None:
                raise DerivationParseError(lineno, "duplicate conclusion")
            else:
                conclusion = f
        else:
            steps.append(_parse_step(lineno, line))
    if conclusion is None:
        raise DerivationParseError(0, "missing conclusion line")
    return EntailmentCertificate(tuple(premises), conclusion, Derivation(tuple(steps)))


def format_derivation(d: Derivation) -> str:
    from .formula import render

    lines = []
    for step in d.steps:
        j = step.justification
        if isinstance(j, AxiomInstance):
            suffix = f"axiom {j.schema}"
            if j.binding:
                items = ", ".join(f"{k}={render(v)}" for k, v in sorted(j.binding.items()))
                suffix = f"{suffix} {items}"
        elif isinstance(j, MP):
            suffix = f"mp {j.minor} {j.major}"
        else:
            suffix = f"nec {j.premise}"
        lines.append(f"{render(step.formula)} ; {suffix}")
    return "\n".join(lines) + "\n"
