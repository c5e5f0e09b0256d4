"""Lossless tabular export of aggregate rows: CSV, JSONL, and XLSX.

The XLSX writer/reader speaks the minimal SpreadsheetML subset (one sheet,
inline strings) with stdlib zipfile+ElementTree, so spreadsheets round-trip
without external dependencies.
"""

from __future__ import annotations

import csv
import io
import json
import zipfile
from pathlib import Path
from xml.etree import ElementTree

from .aggregate import AggregateRow

COLUMNS = ["agent_id", "gender", "shopping_frequency", "total_actions",
           "filter_clicks", "sus_score", "filter_satisfaction", "flagged"]

FORMATS = ("csv", "xlsx", "jsonl")


def export_rows(rows: list[AggregateRow], fmt: str, path: str | Path) -> Path:
    if fmt not in FORMATS:
        raise ValueError(f"unknown export format {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        _write_csv(rows, path)
    elif fmt == "jsonl":
        _write_jsonl(rows, path)
    else:
        _write_xlsx(rows, path)
    return path


def import_rows(path: str | Path, fmt: str | None = None) -> list[AggregateRow]:
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".")
    if fmt == "csv":
        return _read_csv(path)
    if fmt == "jsonl":
        return _read_jsonl(path)
    if fmt == "xlsx":
        return _read_xlsx(path)
    raise ValueError(f"unknown import format {fmt!r}")


# -- csv ------------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    return str(value)


def _write_csv(rows: list[AggregateRow], path: Path):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for row in rows:
            record = row.to_dict()
            writer.writerow([_cell(record[c]) for c in COLUMNS])


def _read_csv(path: Path) -> list[AggregateRow]:
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        return [AggregateRow.from_dict(record) for record in reader]


# -- jsonl ----------------------------------------------------------------------


def _write_jsonl(rows: list[AggregateRow], path: Path):
    with path.open("w") as fh:
        for row in rows:
            fh.write(json.dumps(row.to_dict()) + "\n")


def _read_jsonl(path: Path) -> list[AggregateRow]:
    return [
        AggregateRow.from_dict(json.loads(line))
        for line in path.read_text().splitlines()
        if line.strip()
    ]


# -- xlsx ------------------------------------------------------------------------

_CONTENT_TYPES = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types">
  <Default Extension="rels" ContentType="application/vnd.openxmlformats-package.relationships+xml"/>
  <Default Extension="xml" ContentType="application/xml"/>
  <Override PartName="/xl/workbook.xml" ContentType="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml"/>
  <Override PartName="/xl/worksheets/sheet1.xml" ContentType="application/vnd.openxmlformats-officedocument.spreadsheetml.worksheet+xml"/>
</Types>
"""

_ROOT_RELS = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">
  <Relationship Id="rId1" Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/officeDocument" Target="xl/workbook.xml"/>
</Relationships>
"""

_WORKBOOK = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<workbook xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main"
          xmlns:r="http://schemas.openxmlformats.org/officeDocument/2006/relationships">
  <sheets><sheet name="aggregates" sheetId="1" r:id="rId1"/></sheets>
</workbook>
"""

_WORKBOOK_RELS = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">
  <Relationship Id="rId1" Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet" Target="worksheets/sheet1.xml"/>
</Relationships>
"""

_NS = "{http://schemas.openxmlformats.org/spreadsheetml/2006/main}"


def _xml_escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


def _sheet_xml(rows: list[AggregateRow]) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>',
        '<worksheet xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main">',
        "<sheetData>",
    ]

    def cell_xml(value) -> str:
        if value is None:
            return "<c/>"
        if isinstance(value, bool):
            return f'<c t="inlineStr"><is><t>{value}</t></is></c>'
        if isinstance(value, (int, float)):
            return f"<c><v>{value!r}</v></c>"
        return f'<c t="inlineStr"><is><t>{_xml_escape(str(value))}</t></is></c>'

    header = "".join(cell_xml(c) for c in COLUMNS)
    lines.append(f"<row>{header}</row>")
    for row in rows:
        record = row.to_dict()
        cells = "".join(cell_xml(record[c]) for c in COLUMNS)
        lines.append(f"<row>{cells}</row>")
    lines.append("</sheetData></worksheet>")
    return "\n".join(lines)


def _write_xlsx(rows: list[AggregateRow], path: Path):
    with zipfile.ZipFile(path, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr("[Content_Types].xml", _CONTENT_TYPES)
        zf.writestr("_rels/.rels", _ROOT_RELS)
        zf.writestr("xl/workbook.xml", _WORKBOOK)
        zf.writestr("xl/_rels/workbook.xml.rels", _WORKBOOK_RELS)
        zf.writestr("xl/worksheets/sheet1.xml", _sheet_xml(rows))


def _read_xlsx(path: Path) -> list[AggregateRow]:
    with zipfile.ZipFile(path) as zf:
        sheet = zf.read("xl/worksheets/sheet1.xml")
    root = ElementTree.fromstring(sheet)
    parsed_rows: list[list] = []
    for row_el in root.iter(f"{_NS}row"):
        cells = []
        for cell_el in row_el.iter(f"{_NS}c"):
            if cell_el.get("t") == "inlineStr":
                t = cell_el.find(f"{_NS}is/{_NS}t")
                cells.append(t.text or "" if t is not None else "")
            else:
                v = cell_el.find(f"{_NS}v")
                cells.append(v.text if v is not None else None)
        parsed_rows.append(cells)
    if not parsed_rows:
        return []
    header = parsed_rows[0]
    records = [dict(zip(header, values)) for values in parsed_rows[1:]]
    return [AggregateRow.from_dict(r) for r in records]


def export_bytes(rows: list[AggregateRow], fmt: str) -> bytes:
    """In-memory export for the HTTP download endpoint."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(COLUMNS)
        for row in rows:
            record = row.to_dict()
            writer.writerow([_cell(record[c]) for c in COLUMNS])
        return buf.getvalue().encode()
    if fmt == "jsonl":
        return "".join(json.dumps(r.to_dict()) + "\n" for r in rows).encode()
    if fmt == "xlsx":
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
            zf.writestr("[Content_Types].xml", _CONTENT_TYPES)
            zf.writestr("_rels/.rels", _ROOT_RELS)
            zf.writestr("xl/workbook.xml", _WORKBOOK)
            zf.writestr("xl/_rels/workbook.xml.rels", _WORKBOOK_RELS)
            zf.writestr("xl/worksheets/sheet1.xml", _sheet_xml(rows))
        return buf.getvalue()
    raise ValueError(f"unknown export format {fmt!r}")
