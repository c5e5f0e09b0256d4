from .aggregate import AggregateRow, aggregate, count_filter_clicks, subgroup_summary
from .api import create_app
from .config import StudyConfig, SurveyQuestion, default_survey, sus_questions
from .export import export_bytes, export_rows, import_rows
from .records import RunStore, SessionRecord, StudyRun
from .runner import StudyRunner
from .sus import compute_sus, sus_answers_for_score

__all__ = [
    "AggregateRow",
    "RunStore",
    "SessionRecord",
    "StudyConfig",
    "StudyRun",
    "StudyRunner",
    "SurveyQuestion",
    "aggregate",
    "compute_sus",
    "count_filter_clicks",
    "create_app",
    "default_survey",
    "export_bytes",
    "export_rows",
    "import_rows",
    "subgroup_summary",
    "sus_answers_for_score",
    "sus_questions",
]
