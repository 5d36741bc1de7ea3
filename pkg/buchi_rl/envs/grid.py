import logging
from pathlib import Path

from pydantic import ValidationError

from buchi_rl.envs.models import LabeledMdp
from buchi_rl.envs.schemas import CellSpec, GridSpec
from buchi_rl.errors import GridFormatError
from buchi_rl.ltl.models import is_atom_name

logger = logging.getLogger(__name__)

ACTIONS = ("up", "down", "left", "right")
DELTAS = {"up": (-1, 0), "down": (1, 0), "left": (0, -1), "right": (0, 1)}
OPPOSITE = {"up": "down", "down": "up", "left": "right", "right": "left"}
PERPENDICULAR = {
    "up": ("left", "right"),
    "down": ("left", "right"),
    "left": ("up", "down"),
    "right": ("up", "down"),
}
SLIP = 1.0 / 3.0


def parse_cell_kinds(text: str, line: int | None = None) -> CellSpec:
    fields: dict = {"labels": set()}
    for kind in text.split("+"):
        name, _, arg = kind.partition(":")
        if name == "floor" and not arg:
            continue
        if name in ("wall", "start", "ice", "hole", "sink") and not arg:
            fields[name] = True
        elif name == "label":
            if not is_atom_name(arg):
                raise GridFormatError(f"invalid label {arg!r}", line)
            fields["labels"].add(arg)
        elif name == "oneway":
            if arg not in DELTAS:
                raise GridFormatError(f"invalid one-way direction {arg!r}", line)
            fields["oneway"] = arg
        elif name == "gate":
            try:
                p_down, p_right = (float(x) for x in arg.split(","))
            except ValueError as exc:
                raise GridFormatError(f"malformed gate {arg!r}", line) from exc
            fields["gate"] = (p_down, p_right)
        else:
            raise GridFormatError(f"unknown cell kind {kind!r}", line)
    try:
        return CellSpec(**fields)
    except ValidationError as exc:
        raise GridFormatError(exc.errors()[0]["msg"], line) from exc


def _is_comment(line: str, legend: dict[str, CellSpec]) -> bool:
    return line.startswith("#") and (
        "#" not in legend or any(ch.isspace() for ch in line)
    )


def parse_grid(text: str, name: str = "grid") -> GridSpec:
    """Parse the header lines and the glyph block of a grid file."""
    header: dict[str, str] = {}
    legend: dict[str, CellSpec] = {}
    lines = text.splitlines()
    block_start = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep or key.strip() not in ("rows", "cols", "legend", "name"):
            raise GridFormatError(f"unexpected header line {line!r}", lineno)
        key = key.strip()
        header[key] = value.strip()
        if key == "legend":
            for token in value.split():
                glyph, eq, kinds = token.partition("=")
                if not eq or len(glyph) != 1:
                    raise GridFormatError(f"malformed legend entry {token!r}", lineno)
                if glyph in legend:
                    raise GridFormatError(f"glyph {glyph!r} declared twice", lineno)
                legend[glyph] = parse_cell_kinds(kinds, lineno)
        if {"rows", "cols", "legend"} <= header.keys():
            block_start = lineno
            break
    if block_start is None:
        raise GridFormatError("grid header needs rows, cols and legend")
    try:
        rows, cols = int(header["rows"]), int(header["cols"])
    except ValueError as exc:
        raise GridFormatError("rows and cols must be integers") from exc

    # a block line starting with `#` is a comment unless `#` is a glyph
    # and the line holds no whitespace
    cells = [
        ln.rstrip()
        for ln in lines[block_start:]
        if ln.strip() and not _is_comment(ln.strip(), legend)
    ]
    try:
        return GridSpec(
            name=header.get("name", name),
            rows=rows,
            cols=cols,
            legend=legend,
            cells=cells,
        )
    except ValidationError as exc:
        raise GridFormatError(exc.errors()[0]["msg"]) from exc


def _move(spec: GridSpec, r: int, c: int, direction: str) -> tuple[int, int]:
    dr, dc = DELTAS[direction]
    nr, nc = r + dr, c + dc
    if not (0 <= nr < spec.rows and 0 <= nc < spec.cols):
        return r, c
    target = spec.cell(nr, nc)
    if target.wall or target.oneway == OPPOSITE[direction]:
        return r, c
    return nr, nc


def _distribution(
    spec: GridSpec, outcomes: list[tuple[tuple[int, int], float]]
) -> tuple[tuple[int, float], ...]:
    merged: dict[int, float] = {}
    for (r, c), p in outcomes:
        if p > 0:
            s = r * spec.cols + c
            merged[s] = merged.get(s, 0.0) + p
    return tuple(sorted(merged.items()))


def compile_grid(spec: GridSpec) -> LabeledMdp:
    """Build the labelled MDP of a grid with row-major state indices."""
    available: list[tuple[int, ...]] = []
    transitions: dict[tuple[int, int], tuple[tuple[int, float], ...]] = {}
    labels = []
    init = 0
    all_actions = tuple(range(len(ACTIONS)))
    for r in range(spec.rows):
        for c in range(spec.cols):
            s = r * spec.cols + c
            cell = spec.cell(r, c)
            labels.append(frozenset(cell.labels))
            if cell.start:
                init = s
            if cell.wall or cell.absorbing:
                available.append(all_actions)
                for a in all_actions:
                    transitions[(s, a)] = ((s, 1.0),)
            elif cell.oneway is not None:
                a = ACTIONS.index(cell.oneway)
                available.append((a,))
                transitions[(s, a)] = _distribution(
                    spec, [(_move(spec, r, c, cell.oneway), 1.0)]
                )
            elif cell.gate is not None:
                p_down, p_right = cell.gate
                row = _distribution(
                    spec,
                    [
                        (_move(spec, r, c, "down"), p_down),
                        (_move(spec, r, c, "right"), p_right),
                    ],
                )
                available.append(all_actions)
                for a in all_actions:
                    transitions[(s, a)] = row
            elif cell.ice:
                available.append(all_actions)
                for a, direction in enumerate(ACTIONS):
                    side_a, side_b = PERPENDICULAR[direction]
                    transitions[(s, a)] = _distribution(
                        spec,
                        [
                            (_move(spec, r, c, direction), SLIP),
                            (_move(spec, r, c, side_a), SLIP),
                            (_move(spec, r, c, side_b), SLIP),
                        ],
                    )
            else:
                available.append(all_actions)
                for a, direction in enumerate(ACTIONS):
                    transitions[(s, a)] = _distribution(
                        spec, [(_move(spec, r, c, direction), 1.0)]
                    )
    logger.debug("compiled grid %s (%dx%d)", spec.name, spec.rows, spec.cols)
    return LabeledMdp(
        n_states=spec.rows * spec.cols,
        init=init,
        action_names=ACTIONS,
        available=tuple(available),
        transitions=transitions,
        labels=tuple(labels),
        name=spec.name,
        shape=(spec.rows, spec.cols),
    )


def load_grid(text: str, name: str = "grid") -> LabeledMdp:
    return compile_grid(parse_grid(text, name))


def read_grid(path: str | Path) -> LabeledMdp:
    path = Path(path)
    return load_grid(path.read_text(encoding="utf-8"), name=path.stem)
