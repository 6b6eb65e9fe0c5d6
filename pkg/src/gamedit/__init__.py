"""gamedit: an editing engine and local web editor for binned GAMs."""

from .dataset import Dataset, load_dataset
from .edits import (
    Anchor,
    Direction,
    EditDiff,
    EditOp,
    EditTool,
    InterpolateMode,
    Selection,
    align,
    apply_diff,
    apply_edit,
    interpolate,
    monotonize,
)
from .errors import GamEditError
from .history import Commit, HistoryState, SaveGate, auto_message, compute_commit_id
from .metrics import (
    ClassificationMetrics,
    ConfusionMatrix,
    MetricReport,
    RegressionMetrics,
    Scope,
    ScopeKind,
    auc_score,
    classification_metrics,
    confusion,
    regression_metrics,
    resolve_scope,
)
from .correlation import FrequencyVector, RankedFeature, affected_samples, frequency_vector, ranking
from .model import (
    MISSING,
    FeatureTerm,
    GamModel,
    InteractionTerm,
    LinkFunction,
    Sample,
    TermKind,
    bin_index,
    feature_importance,
    predict,
    raw_score,
    recenter,
)
from .scripting import ScriptResult, ScriptStep, parse_script, resolve_step, run_script
from .serialize import LoadedModel, load_model, read_model, save_model, write_model
from .session import EditorSession, ReportTriple, SaveResult, StagedEdit

__version__ = "0.1.0"

__all__ = [
    "MISSING",
    "Anchor",
    "ClassificationMetrics",
    "Commit",
    "ConfusionMatrix",
    "Dataset",
    "Direction",
    "EditDiff",
    "EditOp",
    "EditTool",
    "EditorSession",
    "FeatureTerm",
    "FrequencyVector",
    "GamEditError",
    "GamModel",
    "HistoryState",
    "InteractionTerm",
    "InterpolateMode",
    "LinkFunction",
    "LoadedModel",
    "MetricReport",
    "RankedFeature",
    "RegressionMetrics",
    "ReportTriple",
    "Sample",
    "SaveGate",
    "SaveResult",
    "Scope",
    "ScopeKind",
    "ScriptResult",
    "ScriptStep",
    "Selection",
    "StagedEdit",
    "TermKind",
    "affected_samples",
    "align",
    "apply_diff",
    "apply_edit",
    "auc_score",
    "auto_message",
    "bin_index",
    "classification_metrics",
    "compute_commit_id",
    "confusion",
    "feature_importance",
    "frequency_vector",
    "interpolate",
    "load_dataset",
    "load_model",
    "monotonize",
    "parse_script",
    "predict",
    "ranking",
    "raw_score",
    "read_model",
    "recenter",
    "regression_metrics",
    "resolve_scope",
    "resolve_step",
    "run_script",
    "save_model",
    "write_model",
]
