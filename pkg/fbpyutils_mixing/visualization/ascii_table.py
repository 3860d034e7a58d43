import math
from typing import Any, List, Optional

from fbpyutils_mixing import logger


def format_cell(value: Any, digits: int = 6) -> str:
    """
    Render one table cell.

    Floats get ``digits`` significant digits, infinities print as 'inf' and None as '-'.
    Anything else is rendered with str().

    Example:
        >>> format_cell(47.93171637686384)
        '47.9317'
        >>> format_cell(float("inf")), format_cell(None), format_cell(3)
        ('inf', '-', '3')
    """
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "-"
        return f"{value:.{digits}g}"
    return str(value)


def ascii_table(
    data: List[List[Any]],
    columns: List[str] = [],
    alignment: str = "left",
    numrows: Optional[int] = None,
) -> Optional[List[str]]:
    """
    Generate an ASCII table from row data and optional headers.

    Cells are rendered with format_cell; the header row is always centered.

    Args:
        data: List of lists for table rows.
        columns: Optional column headers. Defaults to column_0, column_1, ...
        alignment: Cell alignment ('left', 'right', 'center'). Defaults to 'left'.
        numrows: Max rows to include. Defaults to None (all).

    Returns:
        List[str]: Lines of the table, or None for empty data.

    Raises:
        ValueError: For mismatched columns or invalid alignment.

    Example:
        >>> ascii_table([["small-holding", 0.25, 84]], ["tag", "r", "bound"], "right")
        ['+-------------+----+-----+',
         '|     tag     | r  |bound|',
         '+-------------+----+-----+',
         '|small-holding|0.25|   84|',
         '+-------------+----+-----+']
    """
    logger.debug(f"Creating ASCII table with {len(data)} rows, {len(columns)} columns")

    if len(data) == 0:
        logger.warning("Empty data provided to ascii_table")
        return None

    rows = [[format_cell(v) for v in row] for row in data]
    alignment = alignment or "left"

    def pad(x: str, size: int, where: str) -> str:
        if where == "right":
            return x.rjust(size)
        if where == "left":
            return x.ljust(size)
        return x.center(size)

    def line(cells: List[str], sizes: List[int], where: str = "center") -> str:
        return "|" + "|".join(pad(cells[i], sizes[i], where) for i in range(len(cells))) + "|"

    widths = set(len(r) for r in rows)
    if len(widths) > 1:
        logger.error(f"Rows have differing lengths: {sorted(widths)}")
        raise ValueError("Number of columns mismatch among rows.")
    if alignment not in ("left", "right", "center"):
        raise ValueError("Alignment valid values: left|right|center")

    width = widths.pop()
    columns = [str(c) for c in columns] if columns else [f"column_{i}" for i in range(width)]
    if len(columns) != width:
        logger.error(f"Column length mismatch: data has {width} columns, but {len(columns)} provided")
        raise ValueError("Number of columns mismatch with data row.")

    if numrows is None or numrows > len(rows):
        numrows = len(rows)
    rows = rows[:numrows]

    sizes = [max([len(columns[i])] + [len(r[i]) for r in rows]) for i in range(width)]
    separator = "".join("+" + "-" * s for s in sizes) + "+"

    table = [separator, line(columns, sizes), separator]
    table.extend(line(r, sizes, where=alignment) for r in rows)
    table.append(separator)

    logger.debug(f"Successfully created ASCII table with {len(table)} lines")
    return table


def render_ascii_table(
    data: List[List[Any]],
    columns: List[str] = [],
    alignment: str = "left",
    numrows: Optional[int] = None,
) -> str:
    """Table lines joined with newlines; the empty string for empty data."""
    table = ascii_table(data, columns=columns, alignment=alignment, numrows=numrows)
    return "\n".join(table) if table else ""
