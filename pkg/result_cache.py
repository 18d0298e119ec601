import json
import logging
import os
from typing import Dict, Optional

from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential

from classifier import Certificate, RegularityReport, count_locally_represented, make_certificate
from form_core import TriForm

logger = logging.getLogger(__name__)


class ResultCache:
    """JSON-lines store of regularity reports, one line per scan.

    Counterexample lines carry a certificate and are replayed on load; a line
    that no longer reproduces is dropped. Only one process writes the file.
    """

    def __init__(self, path: str, config: Optional[Dict] = None):
        self.path = path
        self.config = dict(config or {})
        self.clean: Dict[TriForm, int] = {}
        self.counterexamples: Dict[TriForm, RegularityReport] = {}
        self.rejected_lines = 0
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        with open(self.path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    self._accept(json.loads(line))
                except (ValueError, KeyError, TypeError) as e:
                    self.rejected_lines += 1
                    logger.warning(f"Cache {self.path}:{line_no} rejected: {e}")
        logger.info(f"Loaded cache {self.path}: {len(self.clean)} clean, "
                    f"{len(self.counterexamples)} counterexamples, {self.rejected_lines} rejected")

    def _accept(self, record: Dict):
        report = RegularityReport.from_dict(record["report"])
        if report.clean:
            self.clean[report.form] = max(self.clean.get(report.form, 0), report.limit)
            return
        certificate = Certificate.from_dict(record["certificate"])
        if certificate.form != report.form.as_tuple() or certificate.n != report.counterexample:
            raise ValueError("certificate does not match its report")
        if not certificate.replay():
            raise ValueError(f"certificate for {report.form} at n={report.counterexample} failed replay")
        known = self.counterexamples.get(report.form)
        if known is None or report.counterexample < known.counterexample:
            self.counterexamples[report.form] = report

    def lookup(self, form: TriForm, limit: int) -> Optional[RegularityReport]:
        """A report for ``limit`` derived from cached scans, or None if a fresh scan is needed."""
        known = self.counterexamples.get(form)
        if known is not None:
            if known.counterexample <= limit:
                return RegularityReport(form, limit, known.counterexample, known.local_evidence, known.scanned)
            return RegularityReport(form, limit, None, (), count_locally_represented(form, limit))
        if self.clean.get(form, 0) >= limit:
            return RegularityReport(form, limit, None, (), count_locally_represented(form, limit))
        return None

    def store(self, report: RegularityReport):
        record = {"report": report.to_dict()}
        if report.clean:
            if self.clean.get(report.form, 0) >= report.limit:
                return
            self.clean[report.form] = report.limit
        else:
            record["certificate"] = make_certificate(report.form, report.counterexample, self.config).to_dict()
            self.counterexamples[report.form] = report
        self._append(json.dumps(record, sort_keys=True))

    @retry(retry=retry_if_exception_type(OSError), stop=stop_after_attempt(3),
           wait=wait_exponential(multiplier=1, min=1, max=4), reraise=True)
    def _append(self, line: str):
        directory = os.path.dirname(self.path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(line + "\n")
