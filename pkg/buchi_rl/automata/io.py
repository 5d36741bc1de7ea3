import logging
import re
from pathlib import Path

from buchi_rl.automata.models import Ldba
from buchi_rl.automata.validate import validate_ldba
from buchi_rl.errors import AutomatonFormatError, AutomatonValidationError
from buchi_rl.ltl.models import is_atom_name

logger = logging.getLogger(__name__)

TRANS_PATTERN = re.compile(r"^(\d+)\s*\{([^}]*)\}\s*(\d+)$")
HEADER_KEYS = ("ap", "states", "init", "nondet", "acc")


def _ints(value: str, line: int) -> list[int]:
    try:
        return [int(tok) for tok in value.split()]
    except ValueError as exc:
        raise AutomatonFormatError(f"expected state indices, got {value!r}", line) from exc


def load_ldba(text: str, *, validate: bool = True) -> Ldba:
    """Parse the line-oriented LDBA format and validate the result."""
    header: dict[str, str] = {}
    letter_edges: list[tuple[int, int, frozenset[str], int]] = []
    eps_edges: list[tuple[int, int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if not sep:
            raise AutomatonFormatError(f"expected 'key: value', got {line!r}", lineno)
        if key in HEADER_KEYS:
            if key in header:
                raise AutomatonFormatError(f"duplicate '{key}' line", lineno)
            header[key] = value
            header[f"{key}@line"] = str(lineno)
        elif key == "trans":
            match = TRANS_PATTERN.match(value)
            if match is None:
                raise AutomatonFormatError(
                    f"malformed letter edge {value!r}", lineno
                )
            atoms = frozenset(
                tok.strip() for tok in match.group(2).split(",") if tok.strip()
            )
            letter_edges.append(
                (lineno, int(match.group(1)), atoms, int(match.group(3)))
            )
        elif key == "eps":
            ends = _ints(value, lineno)
            if len(ends) != 2:
                raise AutomatonFormatError("eps expects two states", lineno)
            eps_edges.append((lineno, ends[0], ends[1]))
        else:
            raise AutomatonFormatError(f"unknown key {key!r}", lineno)

    for key in ("ap", "states", "init"):
        if key not in header:
            raise AutomatonFormatError(f"missing '{key}' line", 0)

    ap = tuple(header["ap"].split())
    ap_line = int(header["ap@line"])
    for name in ap:
        if not is_atom_name(name):
            raise AutomatonFormatError(f"invalid atomic proposition {name!r}", ap_line)
    if len(set(ap)) != len(ap):
        raise AutomatonFormatError("duplicate atomic proposition", ap_line)

    states_line = int(header["states@line"])
    n_states = _ints(header["states"], states_line)
    if len(n_states) != 1 or n_states[0] < 1:
        raise AutomatonFormatError("states expects one positive count", states_line)
    n = n_states[0]

    def check(q: int, line: int) -> int:
        if not 0 <= q < n:
            raise AutomatonFormatError(f"state {q} out of range 0..{n - 1}", line)
        return q

    init_line = int(header["init@line"])
    init = _ints(header["init"], init_line)
    if len(init) != 1:
        raise AutomatonFormatError("init expects one state", init_line)
    initial = check(init[0], init_line)
    nondet = frozenset(
        check(q, int(header.get("nondet@line", 0)))
        for q in _ints(header.get("nondet", ""), int(header.get("nondet@line", 0)))
    )
    accepting = frozenset(
        check(q, int(header.get("acc@line", 0)))
        for q in _ints(header.get("acc", ""), int(header.get("acc@line", 0)))
    )

    letter_transitions: dict[tuple[int, frozenset[str]], frozenset[int]] = {}
    for lineno, q, atoms, target in letter_edges:
        unknown = atoms - set(ap)
        if unknown:
            raise AutomatonFormatError(
                f"atoms {sorted(unknown)} not in the alphabet", lineno
            )
        key = (check(q, lineno), atoms)
        letter_transitions[key] = letter_transitions.get(key, frozenset()) | {
            check(target, lineno)
        }
    epsilon_transitions: dict[int, frozenset[int]] = {}
    for lineno, q, target in eps_edges:
        epsilon_transitions[check(q, lineno)] = epsilon_transitions.get(
            q, frozenset()
        ) | {check(target, lineno)}

    automaton = Ldba(
        ap=ap,
        n_states=n,
        initial=initial,
        nondet=nondet,
        accepting=accepting,
        letter_transitions=letter_transitions,
        epsilon_transitions=epsilon_transitions,
    )
    if validate:
        report = validate_ldba(automaton)
        if not report.ok:
            raise AutomatonValidationError(
                "automaton is not limit-deterministic: "
                + "; ".join(v.message for v in report.violations),
                report,
            )
    logger.debug(
        "loaded LDBA with %d states over %s, accepting %s",
        n,
        ap,
        sorted(accepting),
    )
    return automaton


def _letter_text(a: Ldba, label: frozenset[str]) -> str:
    return "{" + ",".join(p for p in a.ap if p in label) + "}"


def save_ldba(a: Ldba) -> str:
    lines = [
        f"ap: {' '.join(a.ap)}",
        f"states: {a.n_states}",
        f"init: {a.initial}",
        f"nondet: {' '.join(str(q) for q in sorted(a.nondet))}",
        f"acc: {' '.join(str(q) for q in sorted(a.accepting))}",
    ]
    order = {label: i for i, label in enumerate(a.letters())}
    for (q, label), succ in sorted(
        a.letter_transitions.items(), key=lambda kv: (kv[0][0], order[kv[0][1]])
    ):
        for target in sorted(succ):
            lines.append(f"trans: {q} {_letter_text(a, label)} {target}")
    for q, succ in sorted(a.epsilon_transitions.items()):
        for target in sorted(succ):
            lines.append(f"eps: {q} {target}")
    return "\n".join(lines) + "\n"


def read_ldba(path: str | Path, *, validate: bool = True) -> Ldba:
    return load_ldba(Path(path).read_text(encoding="utf-8"), validate=validate)
