"""
Rendering of pandas tables as aligned text or TSV, and output routing.

Every report in the package is a DataFrame first; these helpers turn it into the text that
the command line prints or writes to a file.
"""
import sys
from typing import Any, List, Optional, Tuple

import pandas as pd

from fbpyutils_mixing import logger
from fbpyutils_mixing.visualization.ascii_table import render_ascii_table


def get_data_from_pandas(df: pd.DataFrame, include_index: bool = False) -> Tuple[List[List[Any]], List[str]]:
    """
    Extract rows and column names from a DataFrame.

    Args:
        df: The input DataFrame.
        include_index: Prepend the index as a column named 'Index'. Defaults to False.

    Returns:
        Tuple of (rows as lists of Python scalars, column names).

    Raises:
        TypeError: If df is not a DataFrame.

    Example:
        >>> get_data_from_pandas(pd.DataFrame({"a": [1, 2], "b": [0.5, 0.25]}))
        ([[1, 0.5], [2, 0.25]], ['a', 'b'])
    """
    if not isinstance(df, pd.DataFrame):
        logger.error("Invalid input type provided, expected pandas DataFrame")
        raise TypeError("Input must be a pandas DataFrame")
    frame = df.reset_index() if include_index else df
    data = [[v.item() if hasattr(v, "item") else v for v in row] for row in frame.itertuples(index=False)]
    columns = [str(c) for c in df.columns]
    if include_index:
        columns.insert(0, "Index")
    logger.debug(f"Extracted {len(data)} rows and {len(columns)} columns")
    return data, columns


def render_frame(df: pd.DataFrame, alignment: str = "left", title: Optional[str] = None) -> str:
    """
    Render a DataFrame as an ASCII table, optionally preceded by a title line.

    Raises:
        ValueError: If the DataFrame cannot be converted.
    """
    try:
        data, columns = get_data_from_pandas(df)
    except Exception as e:
        logger.error(f"Failed to extract data from DataFrame: {e}")
        raise ValueError(f"Invalid pandas dataframe: {e}.")
    body = render_ascii_table(data, columns, alignment) if data else "(empty)"
    return f"{title}\n{body}" if title else body


def frame_to_tsv(df: pd.DataFrame, title: Optional[str] = None) -> str:
    """
    Tab-separated rendering with full float precision; a title becomes a '# ' comment line.

    Example:
        >>> frame_to_tsv(pd.DataFrame({"s_hi": [0.5], "value": [1.0]}))
        's_hi\\tvalue\\n0.5\\t1\\n'
    """
    body = df.to_csv(sep="\t", index=False, float_format="%.17g")
    return f"# {title}\n{body}" if title else body


def emit(text: str, out: Optional[str] = None) -> None:
    """Write text to the file at out, or to standard output."""
    if not text.endswith("\n"):
        text += "\n"
    if out:
        logger.info(f"Writing {len(text)} characters to {out}")
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
