"""Regenerate the committed table files under tests/golden/tables/."""

from pathlib import Path

from touchard_xi.tables import FORMATS, TABLE_IDS, emit_tables

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden" / "tables"
ROWS = {1: 9, 2: 13, 3: 10, 4: 10, 5: 12}
SUFFIX = {"csv": "csv", "json": "json", "tex": "tex"}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for which in TABLE_IDS:
        for fmt in FORMATS:
            path = OUT / f"table{which}.{SUFFIX[fmt]}"
            path.write_text(emit_tables(which, ROWS[which], fmt))
    print(f"wrote {len(TABLE_IDS) * len(FORMATS)} files to {OUT}")


if __name__ == "__main__":
    main()
