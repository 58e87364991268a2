"""Verification outcomes collected as pandas tables."""

from collections.abc import Iterable
from dataclasses import dataclass

import pandas as pd

SUMMARY_COLUMNS = ["Suite", "Check", "Checked", "Failed"]
FAILURE_COLUMNS = ["Suite", "Check", "Block", "Witness", "Expected", "Actual"]


@dataclass(frozen=True)
class VerificationReport:
    summary: pd.DataFrame
    failures: pd.DataFrame

    @property
    def passed(self) -> bool:
        return self.failures.empty

    @property
    def checked(self) -> int:
        return int(self.summary["Checked"].sum())

    @property
    def failed(self) -> int:
        return int(self.summary["Failed"].sum())

    @staticmethod
    def combine(reports: Iterable["VerificationReport"]) -> "VerificationReport":
        reports = list(reports)
        summaries = [report.summary for report in reports if not report.summary.empty]
        failures = [report.failures for report in reports if not report.failures.empty]
        return VerificationReport(
            pd.concat(summaries, ignore_index=True) if summaries else pd.DataFrame(columns=SUMMARY_COLUMNS),
            pd.concat(failures, ignore_index=True) if failures else pd.DataFrame(columns=FAILURE_COLUMNS),
        )

    def render(self, max_failures: int = 20) -> str:
        lines = [self.summary.to_string(index=False) if not self.summary.empty else "no checks ran"]
        if not self.failures.empty:
            lines.append("")
            lines.append(f"{len(self.failures)} failure(s); first {min(max_failures, len(self.failures))}:")
            lines.append(self.failures.head(max_failures).to_string(index=False))
        return "\n".join(lines)


class CheckRecorder:
    def __init__(self, suite: str) -> None:
        self.suite = suite
        self._outcomes: list[tuple[str, bool]] = []
        self._failures: list[dict[str, str]] = []

    def compare(self, check: str, block: str, witness: object, expected: object, actual: object) -> bool:
        passed = bool(expected == actual)
        if passed:
            self._outcomes.append((check, True))
        else:
            self.fail(check, block, witness, expected, actual)
        return passed

    def fail(self, check: str, block: str, witness: object, expected: object, actual: object) -> None:
        self._outcomes.append((check, False))
        self._failures.append(
            {
                "Suite": self.suite,
                "Check": check,
                "Block": block,
                "Witness": str(witness),
                "Expected": str(expected),
                "Actual": str(actual),
            }
        )

    def report(self) -> VerificationReport:
        if not self._outcomes:
            return VerificationReport(pd.DataFrame(columns=SUMMARY_COLUMNS), pd.DataFrame(columns=FAILURE_COLUMNS))
        outcomes = pd.DataFrame(self._outcomes, columns=["Check", "Passed"])
        outcomes["Failed"] = ~outcomes["Passed"]
        summary = (
            outcomes.groupby("Check", sort=False)
            .agg(Checked=("Passed", "size"), Failed=("Failed", "sum"))
            .reset_index()
        )
        summary.insert(0, "Suite", self.suite)
        summary["Failed"] = summary["Failed"].astype(int)
        failures = pd.DataFrame(self._failures, columns=FAILURE_COLUMNS)
        return VerificationReport(summary[SUMMARY_COLUMNS], failures)
