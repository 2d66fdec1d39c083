"""Reproduction of the source tables, with per-row verdicts.

Each builder recomputes one printed table from scratch and pairs every
printed value with its certified recomputation.  A row whose rounded
recomputation sits within two units in the last printed place counts as a
match (the prints carry hand-rounding noise of that size); larger
deviations are either known errata, shipped as data below, or hard
mismatches that make the reproduction fail.

Table identifiers (s12, s13, s21, s23_26, s28) follow the section
numbering of the source memoir's tables.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from . import __version__
from .arith import HighPrecReal, constant, working_digits
from .beta import beta_closed
from .exclusion import init_state, step
from .logmethod import assemble_O, w_value
from .primes import odd_primes

TABLE_IDS = ("s12", "s13", "s21", "s23_26", "s28")

VERDICT_MATCH = "match"
VERDICT_ERRATUM = "erratum"
VERDICT_MISMATCH = "mismatch"

# A row matches when the recomputed value, rounded to the printed places,
# is within this many final-place units of the print.
MATCH_UNITS = 2


@dataclass(frozen=True)
class Row:
    label: str
    printed: str
    recomputed: str
    delta: int
    verdict: str


@dataclass(frozen=True)
class ReportTable:
    table_id: str
    rows: tuple[Row, ...]
    config: dict
    version: str

    @property
    def clean(self) -> bool:
        """True when every row is a match or an allowlisted erratum."""
        return all(r.verdict != VERDICT_MISMATCH for r in self.rows)


@dataclass(frozen=True)
class ErratumEntry:
    """A verified misprint in the source tables, shipped as data."""

    table_id: str
    label: str
    printed: str
    recomputed: str
    note: str


# Verified deviations larger than MATCH_UNITS in the last printed place.
# Root cause for most of them: the difference column between the 5th- and
# 7th-power rows was slipped by two units (0.0033969 for 0.0033967), and
# the table columns were chained by adding differences, so every value from
# the 7th-power row on is high by 2-3 units, as are their complements and
# the final assembled sum.
ERRATA: tuple[ErratumEntry, ...] = (
    ErratumEntry("s13", "I", "0.699245", "0.669245",
                 "second digit misprinted; the recurrence gives 0.669245, and "
                 "the printed K value only follows from the corrected row"),
    ErratumEntry("s21", "T", "0.9999947", "0.9999944",
                 "inherits the slipped Q-to-R difference; the column is high "
                 "by 2-3 units from the R row on"),
    ErratumEntry("s21", "U", "0.9999997", "0.9999994",
                 "same slipped-difference chain as the T row"),
    ErratumEntry("s23_26", "T", "0.0000053", "0.0000056",
                 "complement of the 11th-power series value, which is printed "
                 "3 units high"),
    ErratumEntry("s23_26", "U", "0.0000003", "0.0000006",
                 "complement of the 13th-power series value, which is printed "
                 "3 units high"),
    ErratumEntry("s28", "n=1", "0.3349816", "0.3349813",
                 "the assembly inherits the high R, S, T, U inputs; the "
                 "converged sum is 0.3349813253"),
    ErratumEntry("s28", "n=3", "0.0322521", "0.0322525",
                 "the printed value stops the exclusion at the fourth prime "
                 "and carries 7-digit intermediate rounding; the converged "
                 "sum is 0.0322525"),
    ErratumEntry("s28", "n=5", "0.0038602", "0.0038581",
                 "conflicts with the worked value 0.0038581 two tables "
                 "earlier, which recomputation confirms"),
    ErratumEntry("s28", "n=11", "0.0000053", "0.0000056",
                 "inherits the high 11th-power series value"),
    ErratumEntry("s28", "n=13", "0.0000003", "0.0000006",
                 "inherits the high 13th-power series value"),
)

_ERRATA_KEYS = {(e.table_id, e.label) for e in ERRATA}


def erratum_for(table_id: str, label: str) -> ErratumEntry | None:
    for e in ERRATA:
        if e.table_id == table_id and e.label == label:
            return e
    return None


def _places(printed: str) -> int:
    return len(printed.partition(".")[2])


def _row(table_id: str, label: str, printed: str, recomputed: HighPrecReal) -> Row:
    places = _places(printed)
    if not recomputed.certifies(places):
        raise ValueError(
            f"recomputation of {table_id}/{label} is not certified to {places} places")
    rec = recomputed.round_decimal(places)
    delta = int(((rec - Decimal(printed)) * Decimal(10) ** places).to_integral_value())
    if abs(delta) <= MATCH_UNITS:
        verdict = VERDICT_MATCH
    elif (table_id, label) in _ERRATA_KEYS:
        verdict = VERDICT_ERRATUM
    else:
        verdict = VERDICT_MISMATCH
    return Row(label, printed, format(rec, "f"), delta, verdict)


def _config_echo(config) -> dict:
    return {
        "digits": config.digits,
        "working_digits": config.working_digits,
        "primes": config.primes,
        "max_k": config.max_k,
    }


# ---------------------------------------------------------------------------
# Table builders
# ---------------------------------------------------------------------------

_S12_PARTIALS = (
    ("b", "0.6666666666"), ("c", "0.8666666666"), ("d", "0.7238095238"),
    ("e", "0.6329004329"), ("f", "0.7098235098"), ("g", "0.7686470392"),
    ("h", "0.7160154603"), ("i", "0.6725371994"),
)


def build_s12(config) -> ReportTable:
    """The 10-place value of pi/4 and the signed prime partial sums."""
    rows = [_row("s12", "A", "0.7853981634", constant("pi", working_digits() - 5) / 4)]
    acc = Fraction(1)
    for (label, printed), pc in zip(_S12_PARTIALS, odd_primes(8)):
        acc += Fraction(pc.chi, pc.p)
        rows.append(_row("s12", label, printed, HighPrecReal.from_fraction(acc)))
    return ReportTable("s12", tuple(rows), _config_echo(config), __version__)


_S13_PRINTS = (
    ("B", "0.713864"), ("C", "0.704424"), ("D", "0.681247"),
    ("E", "0.677377"), ("F", "0.673956"), ("G", "0.676066"),
    ("H", "0.671193"), ("I", "0.699245"), ("K", "0.669358"),
)


def build_s13(config) -> ReportTable:
    """The nine-letter exclusion trace for the first-power series."""
    state = init_state(1)
    rows = []
    for label, printed in _S13_PRINTS:
        state = step(state)
        rows.append(_row("s13", label, printed, state.V))
    return ReportTable("s13", tuple(rows), _config_echo(config), __version__)


_S21_PRINTS = (
    ("P", 3, "0.9689462"), ("Q", 5, "0.9961578"), ("R", 7, "0.9995547"),
    ("S", 9, "0.9999499"), ("T", 11, "0.9999947"), ("U", 13, "0.9999997"),
)

_S21_DIFF_PRINTS = (
    ("Q-P", "0.0272116"), ("R-Q", "0.0033969"), ("S-R", "0.0003952"),
    ("T-S", "0.0000448"), ("U-T", "0.0000050"), ("V-U", "0.0000005"),
)


def build_s21(config) -> ReportTable:
    """The seven-place beta values for exponents 3..13 and their differences."""
    betas = {n: beta_closed(n, config.digits + 8).value for n in range(3, 17, 2)}
    rows = [_row("s21", label, printed, betas[n]) for label, n, printed in _S21_PRINTS]
    ns = list(range(3, 17, 2))
    for (label, printed), lo, hi in zip(_S21_DIFF_PRINTS, ns, ns[1:]):
        rows.append(_row("s21", label, printed, betas[hi] - betas[lo]))
    return ReportTable("s21", tuple(rows), _config_echo(config), __version__)


# (label, printed) per block; chain depths follow the source procedure.
_S23_26_BLOCKS = {
    3: {"steps": 4, "lower": (("b", "0.9629630"), ("c", "0.9709630"), ("d", "0.9680476")),
        "brackets": (("A-a", "0.0310538"), ("B-b", "0.0048331"),
                     ("C-c", "0.0032056"), ("D-d", "0.0002995")),
        "letters": (("B", "0.9677961"), ("C", "0.9677574"),
                    ("D", "0.9677481"), ("E", "0.9677479")),
        "w": ("P", "0.0322521"), "partial": ("O after P", "0.3358229")},
    5: {"steps": 2, "lower": (("b", "0.9958847"), ("c", "0.9962048"), ("d", "0.9961453")),
        "brackets": (("A-a", "0.0038422"), ("B-b", "0.0002573")),
        "letters": (("B", "0.9961420"), ("C", "0.9961419")),
        "w": ("Q", "0.0038581"), "partial": ("O after Q", "0.3350513")},
    7: {"steps": 1, "lower": (("b", "0.9995428"),),
        "brackets": (("A-a", "0.0004453"),),
        "letters": (("B", "0.9995545"),),
        "w": ("R", "0.0004455"), "partial": ("O after R", "0.3349877")},
}

_S26_COMPLEMENTS = (
    (9, ("S", "0.0000501"), ("S/9", "0.0000056")),
    (11, ("T", "0.0000053"), ("T/11", "0.0000005")),
    (13, ("U", "0.0000003"), ("U/13", "0.0000000")),
)

_S26_FINAL = ("O", "0.3349816")


def build_s23_26(config) -> ReportTable:
    """The worked assembly: exclusion runs at the source's own truncation
    depths, complements of beta for the high exponents, and the running
    value of the first-power sum after each subtraction."""
    rows = []
    running = constant("ln2", working_digits() - 5) / 2
    for n, block in _S23_26_BLOCKS.items():
        state = init_state(n)
        brackets = [abs(state.V - state.s)]
        letters = []
        for _ in range(block["steps"]):
            state = step(state)
            letters.append(state.V)
            brackets.append(abs(state.V - state.s))
        # Lowercase rows are the plain signed partial sums 1 + sum chi/p^n,
        # printed one step past where the chain stops in some blocks.
        acc = Fraction(1)
        for (label, printed), pc in zip(block["lower"], odd_primes(len(block["lower"]))):
            acc += Fraction(pc.chi, pc.p ** n)
            rows.append(_row("s23_26", f"n={n} {label}", printed,
                             HighPrecReal.from_fraction(acc)))
        for (label, printed), value in zip(block["brackets"], brackets):
            rows.append(_row("s23_26", f"n={n} {label}", printed, value))
        for (label, printed), value in zip(block["letters"], letters):
            rows.append(_row("s23_26", f"n={n} {label}", printed, value))
        w = 1 - state.V
        label, printed = block["w"]
        rows.append(_row("s23_26", label, printed, w))
        running = running - w / n
        label, printed = block["partial"]
        rows.append(_row("s23_26", label, printed, running))
    for n, (w_label, w_printed), (q_label, q_printed) in _S26_COMPLEMENTS:
        comp = 1 - beta_closed(n, config.digits + 8).value
        rows.append(_row("s23_26", w_label, w_printed, comp))
        rows.append(_row("s23_26", q_label, q_printed, comp / n))
        running = running - comp / n
    rows.append(_row("s23_26", _S26_FINAL[0], _S26_FINAL[1], running))
    return ReportTable("s23_26", tuple(rows), _config_echo(config), __version__)


_S28_PRINTS = (
    (1, "0.3349816"), (3, "0.0322521"), (5, "0.0038602"), (7, "0.0004455"),
    (9, "0.0000501"), (11, "0.0000053"), (13, "0.0000003"),
)


def build_s28(config) -> ReportTable:
    """The final table of W(n) for odd n through 13, fully converged."""
    rows = []
    for n, printed in _S28_PRINTS:
        if n == 1:
            value = assemble_O(config.max_k, config.digits).series.value
        else:
            value = w_value(n, config.digits, max_primes=config.primes).value
        rows.append(_row("s28", f"n={n}", printed, value))
    return ReportTable("s28", tuple(rows), _config_echo(config), __version__)


_BUILDERS = {
    "s12": build_s12,
    "s13": build_s13,
    "s21": build_s21,
    "s23_26": build_s23_26,
    "s28": build_s28,
}


def build_table(table_id: str, config) -> ReportTable:
    if table_id not in _BUILDERS:
        raise ValueError(f"unknown table {table_id!r}; expected one of {TABLE_IDS}")
    return _BUILDERS[table_id](config)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _styled(s: str, decimal_style: str) -> str:
    return s.replace(".", ",") if decimal_style == "euler-comma" else s


def to_text(table: ReportTable, decimal_style: str = "period") -> str:
    width = max(len(r.label) for r in table.rows)
    lines = [f"table {table.table_id}"]
    for r in table.rows:
        lines.append(
            f"  {r.label:<{width}}  printed {_styled(r.printed, decimal_style):>14}"
            f"  recomputed {_styled(r.recomputed, decimal_style):>14}"
            f"  delta {r.delta:+3d}  {r.verdict}")
    return "\n".join(lines) + "\n"


def to_csv(table: ReportTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "printed", "recomputed", "delta", "verdict"])
    for r in table.rows:
        writer.writerow([r.label, r.printed, r.recomputed, r.delta, r.verdict])
    return buf.getvalue()


def to_json_obj(table: ReportTable) -> dict:
    return {
        "table_id": table.table_id,
        "rows": [
            {"label": r.label, "printed": r.printed, "recomputed": r.recomputed,
             "delta": r.delta, "verdict": r.verdict}
            for r in table.rows
        ],
        "config": table.config,
        "version": table.version,
    }


def to_json(table: ReportTable) -> str:
    return json.dumps(to_json_obj(table), indent=2) + "\n"


def from_json(text: str) -> ReportTable:
    obj = json.loads(text)
    rows = tuple(Row(r["label"], r["printed"], r["recomputed"], r["delta"], r["verdict"])
                 for r in obj["rows"])
    return ReportTable(obj["table_id"], rows, obj["config"], obj["version"])
