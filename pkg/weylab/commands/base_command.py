import logging
import sys
from typing import Any, Dict, List, Optional, TextIO

from utils.formats import to_json_text
from utils.make_report import add_result, print_check_report
from utils.validator import validate_output

from ..config import JobConfig
from ..errors import ConfigError, NotHomogeneousError
from ..hw_core import NormalForm, excess_of
from ..opparser import parse_operator
from ..reports import CheckReport


class BaseCommand:
    """Base class for CLI subcommands with common job and output handling."""

    name = "base"
    formats = ("csv", "json", "latex")

    def __init__(self, job: JobConfig, stream: Optional[TextIO] = None):
        """
        Initialize the command.

        Args:
            job: Merged job configuration
            stream: Where the document goes when no --out path is given
        """
        self.job = job
        self.stream = stream or sys.stdout
        self.reports: List[CheckReport] = []

        # Set up logging
        self.logger = logging.getLogger(self.__class__.__name__)

        if job.format not in self.formats:
            raise ConfigError(f"{self.name} does not write {job.format}; choose one of {self.formats}")

    def operator(self) -> NormalForm:
        """Parse --op; an empty expression is a usage error raised by the parser."""
        if self.job.op is None:
            raise ConfigError(f"{self.name} needs --op")
        return parse_operator(self.job.op, name=self.name)

    def homogeneous_operator(self) -> NormalForm:
        omega = self.operator()
        excess = excess_of(omega)
        if not excess.homogeneous:
            self.logger.error(f"❌ {self.job.op!r} is not homogeneous")
            raise NotHomogeneousError(f"operator {self.job.op!r} is not homogeneous ({excess})")
        return omega

    def document(self, **fields: Any) -> Dict[str, Any]:
        return {"schema": 1, "command": self.name, **fields}

    def report(self, report: CheckReport) -> CheckReport:
        self.reports.append(report)
        add_result(report)
        return report

    def render(self) -> str:
        """Produce the output text in the configured format."""
        raise NotImplementedError

    def execute(self) -> str:
        text = self.render()
        self.write(text)
        if self.reports:
            print_check_report()
        return text

    def write(self, text: str) -> None:
        if self.job.out is None:
            self.stream.write(text)
            return
        self.job.out.parent.mkdir(parents=True, exist_ok=True)
        with open(self.job.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        self.logger.info(f"✅ Wrote {self.job.format} output to {self.job.out}")

    def json_text(self, document: Dict[str, Any]) -> str:
        return to_json_text(validate_output(document))

    def close(self):
        """Flush the output stream."""
        self.stream.flush()

    def __enter__(self):
        """Context manager entry."""
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager exit."""
        self.close()
