"""Regenerate docs/swap_test_discrepancies.md from the bundled fixture."""
from pathlib import Path

from zxbqc.fixtures import discrepancy_report

if __name__ == "__main__":
    target = Path(__file__).resolve().parent.parent / "docs" / "swap_test_discrepancies.md"
    target.write_text(discrepancy_report())
    print(f"wrote {target}")
