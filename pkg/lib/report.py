import json
from enum import Enum
from typing import Dict

import pydantic

from lib.dimension import DimResult, RecursionTrace
from utils import toTable

__all__ = (
    'RunReport',
    'ReportFormats',
    'TextConverter',
    'JSONConverter',
)

class RunReport(pydantic.BaseModel):
    dim: int
    trace: RecursionTrace
    seed: int
    mode: str
    formulation: str
    sigma: str
    coeff_bound: int
    retry_budget: int
    millis: int = 0
    phases: Dict[str, int] = pydantic.Field(default_factory=dict)

    @classmethod
    def from_result(cls, result: DimResult, **options) -> 'RunReport':
        return cls(dim=result.dim, trace=result.trace, millis=result.trace.millis, phases=result.trace.phase_millis,
                   **options)

    def without_timings(self) -> 'RunReport':
        return self.model_copy(update=dict(millis=0, phases={phase: 0 for phase in self.phases}))

    def json_payload(self) -> dict:
        return dict(
            dim=self.dim,
            fibers_per_depth=self.trace.fibers_per_depth,
            max_eliminant_degree=self.trace.max_eliminant_degree,
            retries=self.trace.retries,
            seed=self.seed,
            mode=self.mode,
            millis=self.millis,
        )


def _phases(report: RunReport) -> str:
    if not report.phases:
        return ''
    return ' (' + ', '.join(f"{phase} {millis} ms" for phase, millis in report.phases.items()) + ')'


class Converter:
    @classmethod
    def convert(cls, report: RunReport, include_trace=False):
        raise NotImplementedError

    @staticmethod
    def header(report: RunReport):
        return None

class TextConverter(Converter):
    @staticmethod
    def header(report: RunReport):
        return (f"-- mode {report.mode}, formulation {report.formulation}, sigma {report.sigma}, "
                f"seed {report.seed}, {report.millis} ms" + _phases(report))

    @classmethod
    def convert(cls, report: RunReport, include_trace=False):
        lines = list()
        if include_trace:
            lines.append(cls.header(report))
            rows = [('depth', 'fibers', 'max. deg.', 'retries', 'skipped')]
            for depth, stats in enumerate(report.trace.depths):
                rows.append((depth, stats.fiber_count, stats.max_eliminant_degree, stats.retries, stats.skipped))
            lines.append(toTable(rows, just='rrrrr'))
        # The bare dimension is always the last line.
        lines.append(str(report.dim))
        return "\n".join(lines)

class JSONConverter(Converter):
    @classmethod
    def convert(cls, report: RunReport, include_trace=False):
        return json.dumps(report.json_payload(), sort_keys=True, default=str)


class ReportFormats(Enum):
    text = TextConverter
    json = JSONConverter
