import re

import numpy as np

from buchi_rl.errors import PrismFormatError
from buchi_rl.mc.models import Dtmc, Row
from buchi_rl.mc.schemas import TransitionRecord

ACCEPTING_LABEL = "accepting"

_VARIABLE = re.compile(r"^m : \[0\.\.(\d+)\] init (\d+);$")
_COMMAND = re.compile(r"^\[\] \(m=(\d+)\) -> (.+);$")
_UPDATE = re.compile(r"^(\S+) : \(m'=(\d+)\)$")
_LABEL = re.compile(r'^label "(\w+)" = (.+);$')
_GUARD = re.compile(r"^\(m=(\d+)\)$")


def format_probability(p: float) -> str:
    # shortest repr that parses back to the same double
    return np.format_float_positional(p, unique=True, trim="-")


def export_prism(d: Dtmc, labels: dict[str, list[int]] | None = None) -> str:
    """PRISM DTMC source with one state variable `m`.

    Without an explicit label map every atomic proposition of the chain
    gets a label, plus `accepting` for states whose automaton state is in ℱ.
    """
    if labels is None:
        labels = {}
        for i, letter in enumerate(d.labels):
            for atom in letter:
                labels.setdefault(atom, []).append(i)
        accepting = np.flatnonzero(d.accepting).tolist()
        if accepting:
            labels[ACCEPTING_LABEL] = accepting
    lines = [
        "dtmc",
        "",
        "module ProductMDP",
        f"  m : [0..{d.n - 1}] init {d.init};",
    ]
    for i in range(d.n):
        updates = " + ".join(
            f"{format_probability(r.probability)} : (m'={r.target})" for r in d.row(i)
        )
        lines.append(f"  [] (m={i}) -> {updates};")
    lines += ["endmodule", ""]
    for name in sorted(labels):
        guard = " | ".join(f"(m={k})" for k in sorted(labels[name]))
        lines.append(f'label "{name}" = {guard};')
    return "\n".join(lines) + "\n"


def parse_prism(text: str) -> Dtmc:
    """Read back the subset of PRISM that `export_prism` writes."""
    n = init = None
    rows: dict[int, list[Row]] = {}
    labels: dict[str, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line in ("dtmc", "module ProductMDP", "endmodule"):
            continue
        if match := _VARIABLE.match(line):
            n, init = int(match[1]) + 1, int(match[2])
        elif match := _COMMAND.match(line):
            row = []
            for update in match[2].split(" + "):
                u = _UPDATE.match(update.strip())
                if u is None:
                    raise PrismFormatError(f"malformed update {update!r}", lineno)
                row.append(Row(int(u[2]), float(u[1])))
            rows[int(match[1])] = row
        elif match := _LABEL.match(line):
            states = []
            for guard in match[2].split(" | "):
                g = _GUARD.match(guard.strip())
                if g is None:
                    raise PrismFormatError(f"malformed guard {guard!r}", lineno)
                states.append(int(g[1]))
            labels[match[1]] = states
        else:
            raise PrismFormatError(f"unsupported PRISM construct {line!r}", lineno)
    if n is None or sorted(rows) != list(range(n)):
        raise PrismFormatError("PRISM model must declare m and one command per state")
    accepting = [False] * n
    for k in labels.pop(ACCEPTING_LABEL, []):
        accepting[k] = True
    letters: list[set[str]] = [set() for _ in range(n)]
    for name, states in labels.items():
        for k in states:
            letters[k].add(name)
    return Dtmc.from_rows(
        [rows[i] for i in range(n)],
        accepting=accepting,
        init=init,
        labels=[frozenset(x) for x in letters],
    )


def dump_jsonl(d: Dtmc) -> str:
    """One JSON record per transition, for debugging."""
    lines = []
    for i in range(d.n):
        for r in d.row(i):
            record = TransitionRecord(
                source=i,
                target=r.target,
                p=r.probability,
                reward=r.reward,
                discount=r.discount,
            )
            lines.append(record.model_dump_json(by_alias=True))
    return "\n".join(lines) + "\n"
