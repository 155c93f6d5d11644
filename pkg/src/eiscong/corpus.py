"""Line-oriented curve corpus format.

One curve per line::

    <label> <conductor> [a1,a2,a3,a4,a6] [torsion=<k>] [optimal=<0|1>] [class=<id>]

Fields are whitespace separated; the coefficient list has no interior
spaces; the ``key=value`` fields are optional and may come in any order.
Blank lines and lines starting with ``#`` are skipped.

Mapping from Cremona's ``allcurves`` tables: take the label (class id plus
curve number), the conductor, the bracketed a-invariants and the torsion
order column verbatim; ``optimal`` and ``class`` are filled in by hand.
"""

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .curves import WeierstrassCurve, conductor_semistable, torsion_order
from .errors import NotSemistable, ParseError, SingularCurve, ValidationError

_INT_LIST = re.compile(r"^\[(-?\d+(?:,-?\d+)*)\]$")
_KEYS = ("torsion", "optimal", "class")


@dataclass(frozen=True)
class CorpusEntry:
    label: str
    conductor_claimed: int
    coefficients: tuple
    torsion_claimed: int | None = None
    optimal: bool | None = None
    isogeny_class: str | None = None

    @property
    def curve(self):
        return WeierstrassCurve.from_ainvs(self.coefficients, self.label, self.optimal)


def _column(text, token, start=0):
    return text.index(token, start) + 1


def parse_line(text, lineno=None, validate=True):
    """Parse one line; returns ``None`` for blank and comment lines."""
    stripped = text.strip()
    if not stripped or stripped.startswith("#"):
        return None
    tokens = stripped.split()
    if len(tokens) < 3:
        raise ParseError(f"expected '<label> <conductor> [a1,a2,a3,a4,a6]', got {stripped!r}", lineno, 1)
    label, cond_tok, coeff_tok, *extra = tokens
    col = _column(text, cond_tok, text.index(label) + len(label))
    if not re.fullmatch(r"\d+", cond_tok) or int(cond_tok) < 1:
        raise ParseError(f"conductor must be a positive integer, got {cond_tok!r}", lineno, col)
    col = _column(text, coeff_tok, col - 1 + len(cond_tok))
    m = _INT_LIST.match(coeff_tok)
    if not m:
        raise ParseError(f"malformed coefficient list {coeff_tok!r}", lineno, col)
    coeffs = tuple(int(v) for v in m.group(1).split(","))
    if len(coeffs) != 5:
        raise ParseError(f"expected 5 coefficients, got {len(coeffs)}", lineno, col)

    fields = {}
    pos = col - 1 + len(coeff_tok)
    for tok in extra:
        col = _column(text, tok, pos)
        pos = col - 1 + len(tok)
        key, sep, value = tok.partition("=")
        if not sep or key not in _KEYS:
            raise ParseError(f"unknown field {tok!r}; expected one of {', '.join(k + '=' for k in _KEYS)}", lineno, col)
        if key in fields:
            raise ParseError(f"duplicate field {key!r}", lineno, col)
        if key == "torsion":
            if not re.fullmatch(r"\d+", value) or int(value) < 1:
                raise ParseError(f"torsion must be a positive integer, got {value!r}", lineno, col)
            fields[key] = int(value)
        elif key == "optimal":
            if value not in ("0", "1"):
                raise ParseError(f"optimal must be 0 or 1, got {value!r}", lineno, col)
            fields[key] = value == "1"
        else:
            if not value:
                raise ParseError("empty class id", lineno, col)
            fields[key] = value

    entry = CorpusEntry(
        label,
        int(cond_tok),
        coeffs,
        fields.get("torsion"),
        fields.get("optimal"),
        fields.get("class"),
    )
    if validate:
        validate_entry(entry, lineno)
    return entry


def validate_entry(entry, lineno=None):
    """Re-derive conductor and torsion from the model and compare with the claims."""
    try:
        curve = entry.curve
        N = conductor_semistable(curve)
    except (SingularCurve, NotSemistable) as exc:
        raise ValidationError(f"{entry.label}: {exc}", lineno) from exc
    if N != entry.conductor_claimed:
        raise ValidationError(f"{entry.label}: claimed conductor {entry.conductor_claimed}, computed {N}", lineno)
    if entry.torsion_claimed is not None:
        T = torsion_order(curve).order
        if T != entry.torsion_claimed:
            raise ValidationError(f"{entry.label}: claimed torsion {entry.torsion_claimed}, computed {T}", lineno)


def render(entry):
    parts = [entry.label, str(entry.conductor_claimed), "[" + ",".join(str(a) for a in entry.coefficients) + "]"]
    if entry.torsion_claimed is not None:
        parts.append(f"torsion={entry.torsion_claimed}")
    if entry.optimal is not None:
        parts.append(f"optimal={int(entry.optimal)}")
    if entry.isogeny_class is not None:
        parts.append(f"class={entry.isogeny_class}")
    return " ".join(parts)


def load_text(text, validate=True):
    """Parse a whole file. Returns ``(entries, errors)``; bad lines never abort the batch."""
    entries, errors = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            entry = parse_line(line, lineno, validate)
        except (ParseError, ValidationError) as exc:
            errors.append(exc)
            continue
        if entry is not None:
            entries.append(entry)
    return entries, errors


def load_file(path, validate=True):
    return load_text(Path(path).read_text(encoding="utf-8"), validate)


def builtin_text():
    return resources.files("eiscong").joinpath("data/curves.txt").read_text(encoding="utf-8")


def builtin_corpus():
    entries, errors = load_text(builtin_text())
    if errors:
        raise ValidationError("built-in corpus is inconsistent: " + "; ".join(map(str, errors)))
    return entries


def isogeny_classes(entries):
    """``{class_id: [entries...]}`` in corpus order, for entries that name a class."""
    out = {}
    for e in entries:
        if e.isogeny_class:
            out.setdefault(e.isogeny_class, []).append(e)
    return out
