"""Significant-figure formatting and plain/CSV/Markdown table rendering."""
import csv
import io
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

FORMATS = ("text", "csv", "md")


def format_sig(x: float, digits: int = 4) -> str:
    """Round the exact binary value of ``x`` to ``digits`` significant figures, half-to-even.

    Trailing zeros are kept (``0.1780``). Magnitudes outside [1e-5, 1e15) use
    scientific notation.
    """
    if digits < 1:
        raise ValueError("digits must be at least 1")
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    d = Decimal(x)
    if d == 0:
        return "0" if digits == 1 else "0." + "0" * (digits - 1)
    q = d.quantize(Decimal(1).scaleb(d.adjusted() - digits + 1), rounding=ROUND_HALF_EVEN)
    if q.adjusted() != d.adjusted():
        # rounding carried into a new decade, e.g. 9.9996 -> 10.00
        q = q.quantize(Decimal(1).scaleb(q.adjusted() - digits + 1), rounding=ROUND_HALF_EVEN)
    e = q.adjusted()
    if -5 <= e < 15:
        return format(q, "f")
    return format(q, f".{digits - 1}e")


@dataclass
class OutputTable:
    caption: str
    columns: list  # (name, unit) pairs
    rows: list = field(default_factory=list)

    def add_row(self, values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} cells, table has {len(self.columns)} columns")
        self.rows.append([str(v) for v in values])

    @property
    def headers(self) -> list[str]:
        return [f"{name} [{unit}]" if unit else name for name, unit in self.columns]

    def render(self, fmt: str = "text") -> str:
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(self.headers)
            writer.writerows(self.rows)
            return buf.getvalue()
        if fmt == "md":
            lines = [f"**{self.caption}**", ""] if self.caption else []
            lines.append("| " + " | ".join(self.headers) + " |")
            lines.append("|" + "|".join("---" for _ in self.headers) + "|")
            lines += ["| " + " | ".join(row) + " |" for row in self.rows]
            return "\n".join(lines) + "\n"
        if fmt != "text":
            raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
        widths = [max([len(h)] + [len(r[i]) for r in self.rows]) for i, h in enumerate(self.headers)]
        out = [self.caption] if self.caption else []
        out.append("  ".join(h.ljust(w) for h, w in zip(self.headers, widths)).rstrip())
        out += ["  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() for row in self.rows]
        return "\n".join(out) + "\n"
