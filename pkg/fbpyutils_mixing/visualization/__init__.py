"""Text and TSV rendering of report tables."""
from fbpyutils_mixing.visualization.ascii_table import ascii_table, format_cell, render_ascii_table
from fbpyutils_mixing.visualization.display import emit, frame_to_tsv, get_data_from_pandas, render_frame
