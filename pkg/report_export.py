import io
import logging
from typing import Dict

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter
from openpyxl.utils.dataframe import dataframe_to_rows

logger = logging.getLogger(__name__)


def format_table(df: pd.DataFrame) -> pd.DataFrame:
    """
    Format a result table for display.

    Args:
        df: DataFrame to format

    Returns:
        Formatted DataFrame; floats to 6 significant digits, booleans as yes/no
    """
    if df.empty:
        return df

    formatted_df = df.copy()
    for col in formatted_df.columns:
        series = formatted_df[col]
        if pd.api.types.is_bool_dtype(series):
            formatted_df[col] = series.map({True: "yes", False: "no"})
        elif pd.api.types.is_float_dtype(series):
            formatted_df[col] = series.apply(
                lambda x: f"{int(x)}" if pd.notna(x) and x == int(x) else f"{x:.6g}" if pd.notna(x) else ""
            )
        else:
            formatted_df[col] = series.astype(str).replace('nan', '').replace('None', '')
    return formatted_df


def export_report_workbook(tables: Dict[str, pd.DataFrame], title: str = "stabtherm report") -> bytes:
    """
    Export result tables to a styled Excel workbook, one sheet per table.

    Args:
        tables: Sheet name -> DataFrame
        title: Title written above every table

    Returns:
        Excel file as bytes
    """
    wb = Workbook()
    wb.remove(wb.active)

    header_fill = PatternFill(start_color="D3D3D3", end_color="D3D3D3", fill_type="solid")
    border = Border(left=Side(style='thin'), right=Side(style='thin'), top=Side(style='thin'), bottom=Side(style='thin'))

    for sheet_name, df in tables.items():
        # Excel caps sheet names at 31 characters
        ws = wb.create_sheet(title=sheet_name[:31])
        n_columns = max(len(df.columns), 1)

        if n_columns > 1:
            ws.merge_cells(start_row=1, start_column=1, end_row=1, end_column=n_columns)
        title_cell = ws.cell(row=1, column=1, value=f"{title}: {sheet_name}")
        title_cell.font = Font(bold=True, size=14)
        title_cell.alignment = Alignment(horizontal='center', vertical='center')

        for row_offset, row in enumerate(dataframe_to_rows(df, index=False, header=True)):
            for col_index, value in enumerate(row, 1):
                cell = ws.cell(row=3 + row_offset, column=col_index, value=value)
                cell.border = border
                if row_offset == 0:
                    cell.font = Font(bold=True, size=10)
                    cell.fill = header_fill
                    cell.alignment = Alignment(horizontal='center', vertical='center')
                else:
                    cell.alignment = Alignment(horizontal='center')

        for col_index, column in enumerate(df.columns, 1):
            width = max([len(str(column))] + [len(str(value)) for value in df[column].tolist()])
            ws.column_dimensions[get_column_letter(col_index)].width = min(width + 2, 60)

    if not wb.sheetnames:
        wb.create_sheet(title="empty")

    buffer = io.BytesIO()
    wb.save(buffer)
    logger.debug("workbook with %d sheets exported", len(tables))
    return buffer.getvalue()
